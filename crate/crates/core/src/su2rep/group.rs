use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of SU(2), determined by its first column `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub u: Complex64,
    pub v: Complex64,
}

/// Euler angles with `g = d(φ/2) · g(θ,0,0) · d(ψ/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub fn to_group(&self) -> GroupElement {
        GroupElement::from_euler(self.theta, self.phi, self.psi)
    }
}

impl GroupElement {
    /// Normalizes `(u, v)` onto the unit sphere.
    pub fn new(u: Complex64, v: Complex64) -> Result<Self> {
        let n = (u.norm_sqr() + v.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Invalid("group element needs a nonzero column".into()));
        }
        Ok(GroupElement { u: u / n, v: v / n })
    }

    pub fn identity() -> Self {
        GroupElement { u: Complex64::new(1.0, 0.0), v: Complex64::new(0.0, 0.0) }
    }

    /// `u = cos(θ/2) e^{i(φ+ψ)/2}`, `v = i sin(θ/2) e^{i(ψ−φ)/2}`.
    pub fn from_euler(theta: f64, phi: f64, psi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        GroupElement {
            u: Complex64::from_polar(c, (phi + psi) / 2.0),
            v: Complex64::new(0.0, 1.0) * Complex64::from_polar(s, (psi - phi) / 2.0),
        }
    }

    /// Diagonal element `diag(e^{iφ}, e^{−iφ})`.
    pub fn diagonal(phi: f64) -> Self {
        GroupElement { u: Complex64::from_polar(1.0, phi), v: Complex64::new(0.0, 0.0) }
    }

    /// Haar-distributed element.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut g = || rng.sample::<f64, _>(StandardNormal);
        let u = Complex64::new(g(), g());
        let v = Complex64::new(g(), g());
        GroupElement::new(u, v).expect("gaussian sample is nonzero")
    }

    /// `[[u, −v̄], [v, ū]]`.
    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.u, -self.v.conj(), self.v, self.u.conj())
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let m = self.matrix() * o.matrix();
        GroupElement { u: m[(0, 0)], v: m[(1, 0)] }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { u: self.u.conj(), v: -self.v }
    }
}

/// Hopf map `S³ → S²`: `H·σ = g σ₃ g*` with `g` the group element of `(u, v)`.
pub fn hopf(u: Complex64, v: Complex64) -> [f64; 3] {
    let g = GroupElement { u, v }.matrix();
    let s3 = Matrix2::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
    );
    let m = g * s3 * g.adjoint();
    [m[(1, 0)].re, m[(1, 0)].im, m[(0, 0)].re]
}

/// Stereographic projection from the south pole, `w = (x₁ + i x₂)/(1 + x₃)`.
pub fn stereo(x: [f64; 3]) -> Result<Complex64> {
    let d = 1.0 + x[2];
    if d.abs() < 1e-14 {
        return Err(Error::SouthPole);
    }
    Ok(Complex64::new(x[0], x[1]) / d)
}

pub fn stereo_inv(w: Complex64) -> [f64; 3] {
    let r = w.norm_sqr();
    [2.0 * w.re / (1.0 + r), 2.0 * w.im / (1.0 + r), (1.0 - r) / (1.0 + r)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn euler_factorization() {
        let (t, p, s) = (0.8, 1.3, -2.1);
        let d = |a: f64| GroupElement::diagonal(a);
        let g = d(p / 2.0).mul(&GroupElement::from_euler(t, 0.0, 0.0)).mul(&d(s / 2.0));
        let h = GroupElement::from_euler(t, p, s);
        assert!((g.u - h.u).norm() < 1e-15 && (g.v - h.v).norm() < 1e-15);
    }

    #[test]
    fn matrix_is_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = GroupElement::random(&mut rng).matrix();
        assert!((g * g.adjoint() - Matrix2::identity()).norm() < 1e-14);
        assert!((g.determinant() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn hopf_identity_is_north_pole() {
        assert_eq!(hopf(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)), [0.0, 0.0, 1.0]);
        assert_eq!(stereo([0.0, 0.0, 1.0]).unwrap(), Complex64::new(0.0, 0.0));
        assert!(matches!(stereo([0.0, 0.0, -1.0]), Err(Error::SouthPole)));
    }

    #[test]
    fn hopf_is_constant_on_fibres_and_diagram_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = GroupElement::random(&mut rng);
            let h = hopf(g.u, g.v);
            let ph = Complex64::from_polar(1.0, rng.gen_range(0.0..6.28));
            let h2 = hopf(ph * g.u, ph * g.v);
            let via = stereo_inv(g.v / g.u);
            for i in 0..3 {
                assert!((h[i] - h2[i]).abs() < 1e-14);
                assert!((h[i] - via[i]).abs() < 1e-13);
            }
            let w = stereo(h).unwrap();
            assert!((w - g.v / g.u).norm() < 1e-12 * (1.0 + w.norm()));
        }
    }
}
