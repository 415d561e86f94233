use num_complex::Complex64;

use super::{factorial, GroupElement, Spin, SpinLabel};
use crate::polyring::{MPoly, U, U_BAR, V, V_BAR, XI, XI_BAR};
use crate::rational::CMat;

/// Binary form of degree `deg` in `(z₁, z₂)` with coefficients in `C[u, ū, v, v̄]`;
/// `coef[a]` multiplies `z₁^a z₂^{deg−a}`.
#[derive(Clone, Debug)]
struct BinForm {
    deg: usize,
    coef: Vec<MPoly>,
}

impl BinForm {
    fn one() -> Self {
        BinForm { deg: 0, coef: vec![MPoly::one(4)] }
    }

    /// `c₁ z₁ + c₂ z₂`.
    fn linear(c1: MPoly, c2: MPoly) -> Self {
        BinForm { deg: 1, coef: vec![c2, c1] }
    }

    fn mul(&self, o: &BinForm) -> BinForm {
        let deg = self.deg + o.deg;
        let mut coef = vec![MPoly::zero(4); deg + 1];
        for (a, x) in self.coef.iter().enumerate() {
            for (b, y) in o.coef.iter().enumerate() {
                coef[a + b] = &coef[a + b] + &(x * y);
            }
        }
        BinForm { deg, coef }
    }

    fn pow(&self, n: u32) -> BinForm {
        (0..n).fold(BinForm::one(), |acc, _| acc.mul(self))
    }

    fn d1(&self) -> BinForm {
        if self.deg == 0 {
            return BinForm { deg: 0, coef: vec![MPoly::zero(4)] };
        }
        let coef = (0..self.deg).map(|a| self.coef[a + 1].scale_real((a + 1) as f64)).collect();
        BinForm { deg: self.deg - 1, coef }
    }

    fn d2(&self) -> BinForm {
        if self.deg == 0 {
            return BinForm { deg: 0, coef: vec![MPoly::zero(4)] };
        }
        let coef = (0..self.deg).map(|a| self.coef[a].scale_real((self.deg - a) as f64)).collect();
        BinForm { deg: self.deg - 1, coef }
    }
}

/// Matrix elements `t_{km}` as polynomials in `(u, ū, v, v̄)`, from
/// `∂₁^{j+k} ∂₂^{j−k} [(u z₁ + v z₂)^{j+m} (−v̄ z₁ + ū z₂)^{j−m}] / √((j+k)!(j−k)!(j+m)!(j−m)!)`.
///
/// Rows are `k`, columns `m`, both highest weight first.
pub fn symbolic_rep_matrix(j: Spin) -> Vec<Vec<MPoly>> {
    let a = BinForm::linear(MPoly::var(4, U), MPoly::var(4, V));
    let b = BinForm::linear(-&MPoly::var(4, V_BAR), MPoly::var(4, U_BAR));
    let n = j.dim();
    let mut out = vec![vec![MPoly::zero(4); n]; n];
    for (mi, m2) in j.weights().enumerate() {
        let (jpm, jmm) = SpinLabel::new(j, m2).unwrap().exponents();
        let form = a.pow(jpm).mul(&b.pow(jmm));
        for (ki, k2) in j.weights().enumerate() {
            let (jpk, jmk) = SpinLabel::new(j, k2).unwrap().exponents();
            let mut f = form.clone();
            for _ in 0..jpk {
                f = f.d1();
            }
            for _ in 0..jmk {
                f = f.d2();
            }
            let norm = (factorial(jpk as i64) * factorial(jmk as i64) * factorial(jpm as i64) * factorial(jmm as i64)).sqrt();
            out[ki][mi] = f.coef[0].scale_real(1.0 / norm);
        }
    }
    out
}

/// `T^{(j)}(g)` in the weight basis.
pub fn rep_matrix(j: Spin, g: &GroupElement) -> CMat {
    let sym = symbolic_rep_matrix(j);
    let n = j.dim();
    CMat::from_fn(n, n, |k, m| sym[k][m].eval(&[g.u, g.v]))
}

/// `z₁^{j+m} z₂^{j−m} / √((j+m)!(j−m)!)`, with `z₁, z₂` in the two arity-2 slots.
pub fn weight_vector(label: SpinLabel) -> MPoly {
    let (a, b) = label.exponents();
    let c = 1.0 / (factorial(a as i64) * factorial(b as i64)).sqrt();
    MPoly::monomial(2, [a as u16, b as u16, 0, 0], Complex64::new(c, 0.0))
}

/// Fischer product `(p | q) = q̄(∂) p` evaluated at the origin.
pub fn fischer_inner(p: &MPoly, q: &MPoly) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in q.terms() {
        let mut d = p.clone();
        for _ in 0..e[0] {
            d = d.d(XI);
        }
        for _ in 0..e[1] {
            d = d.d(XI_BAR);
        }
        acc += c.conj() * d.coeff(&[0; 4]);
    }
    acc
}

/// Largest coefficient of `4(∂_u ∂_ū + ∂_v ∂_v̄) t_{km}`.
pub fn harmonic_residual(j: Spin, k2: i32, m2: i32) -> f64 {
    let t = &symbolic_rep_matrix(j)[j.index_of(k2)][j.index_of(m2)];
    let lap = &t.d(U).d(U_BAR) + &t.d(V).d(V_BAR);
    lap.scale_real(4.0).max_abs_coeff()
}

/// Phase `τ = e^{i(kφ + mψ)}` with `t_{km}(θ, φ, ψ) = τ · t_{km}(θ, 0, 0)`.
pub fn split_factor(k2: i32, m2: i32, phi: f64, psi: f64) -> Complex64 {
    Complex64::from_polar(1.0, (k2 as f64 * phi + m2 as f64 * psi) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::mat_norm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spin(t: u32) -> Spin {
        Spin::from_twice(t)
    }

    #[test]
    fn spin_one_examples() {
        let (t, p, s) = (0.9, 0.4, -1.1);
        let g = GroupElement::from_euler(t, p, s);
        let m = rep_matrix(spin(2), &g);
        let c = (t / 2.0).cos();
        assert!((m[(0, 0)] - Complex64::from_polar(c * c, p + s)).norm() < 1e-14);
        let m0 = rep_matrix(spin(2), &GroupElement::from_euler(t, 0.0, 0.0));
        assert!((m0[(1, 1)] - t.cos()).norm() < 1e-14);
    }

    #[test]
    fn identity_maps_to_identity() {
        for tw in 0..=5 {
            let m = rep_matrix(spin(tw), &GroupElement::identity());
            assert!(mat_norm(&(m - CMat::identity(tw as usize + 1, tw as usize + 1))) < 1e-15);
        }
    }

    #[test]
    fn weight_vectors_and_fischer() {
        let j1 = spin(2);
        let w0 = weight_vector(SpinLabel::new(j1, 0).unwrap());
        let w1 = weight_vector(SpinLabel::new(j1, 2).unwrap());
        assert_eq!(w0, MPoly::monomial(2, [1, 1, 0, 0], Complex64::new(1.0, 0.0)));
        assert!((w1.coeff(&[2, 0, 0, 0]).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(weight_vector(SpinLabel::new(spin(1), 1).unwrap()), MPoly::var(2, XI));
        assert!((fischer_inner(&w0, &w0) - 1.0).norm() < 1e-15);
        assert!(fischer_inner(&w1, &w0).norm() < 1e-15);
        let z1sq = MPoly::monomial(2, [2, 0, 0, 0], Complex64::new(1.0, 0.0));
        assert!((fischer_inner(&z1sq, &z1sq) - 2.0).norm() < 1e-15);
    }

    #[test]
    fn split_factor_reassembles_full_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        use rand::Rng;
        for tw in 1..=5u32 {
            let j = spin(tw);
            let (t, p, s) = (rng.gen_range(0.1..3.0), rng.gen_range(0.0..6.2), rng.gen_range(-6.2..6.2));
            let full = rep_matrix(j, &GroupElement::from_euler(t, p, s));
            let red = rep_matrix(j, &GroupElement::from_euler(t, 0.0, 0.0));
            for (ki, k2) in j.weights().enumerate() {
                for (mi, m2) in j.weights().enumerate() {
                    let v = split_factor(k2, m2, p, s) * red[(ki, mi)];
                    assert!((full[(ki, mi)] - v).norm() < 1e-13);
                }
            }
        }
        assert!((split_factor(0, 0, 1.0, 2.0) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn harmonic_examples() {
        assert!(harmonic_residual(spin(2), 0, 0) < 1e-14);
        assert!(harmonic_residual(spin(1), 1, 1) < 1e-14);
        assert!(harmonic_residual(spin(3), 3, 3) < 1e-14);
    }
}
