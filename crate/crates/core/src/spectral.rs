//! Wavefunctions `Φ_k(λ)` of the linear spectral problem and the immersion
//! formulas recovered from them.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::immersion::{c_const, x_at};
use crate::rational::{mat_norm, CMat, Jet};
use crate::sigma::ProjectorSeq;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn check_pole(lambda: Complex64) -> Result<()> {
    if (lambda - 1.0).norm() < 1e-12 || (lambda + 1.0).norm() < 1e-12 {
        return Err(Error::Invalid(format!("spectral parameter {lambda} is a pole")));
    }
    Ok(())
}

fn lower_sum(ps: &[CMat], k: usize) -> CMat {
    let n = ps[0].nrows();
    ps[..k].iter().fold(CMat::zeros(n, n), |acc, p| acc + p)
}

/// `I + 4λ/(1−λ)² Σ_{j<k} P_j − 2/(1−λ) P_k` from numeric projectors.
pub fn phi_from(ps: &[CMat], k: usize, lambda: Complex64) -> CMat {
    let n = ps[0].nrows();
    let a = 4.0 * lambda / ((ONE - lambda) * (ONE - lambda));
    let b = -2.0 / (ONE - lambda);
    CMat::identity(n, n) + lower_sum(ps, k) * a + &ps[k] * b
}

pub fn phi(seq: &ProjectorSeq, k: usize, lambda: Complex64, z: Complex64) -> Result<CMat> {
    check_pole(lambda)?;
    let ps: Vec<CMat> = seq.projectors.iter().map(|p| p.eval(z)).collect();
    Ok(phi_from(&ps, k, lambda))
}

/// `max ‖∂Φ − 2/(1+λ) [∂P_k, P_k] Φ‖` and the `∂̄` mirror with `2/(1−λ)`.
///
/// `jets` supplies the projectors entering `Φ_k`; `k` selects the one in the commutators.
pub fn lsp_residual(jets: &[Jet], k: usize, lambda: Complex64, points: &[Complex64]) -> Result<f64> {
    check_pole(lambda)?;
    let a = 4.0 * lambda / ((ONE - lambda) * (ONE - lambda));
    let b = -2.0 / (ONE - lambda);
    let mut worst = 0.0f64;
    for &z in points {
        let vals: Vec<_> = jets[..=k].iter().map(|j| j.at(z)).collect();
        let ps: Vec<CMat> = vals.iter().map(|v| v.p.clone()).collect();
        let ph = phi_from(&ps, k, lambda);
        let n = ph.nrows();
        let mut d = &vals[k].dp * b;
        let mut db = &vals[k].dbp * b;
        for v in &vals[..k] {
            d += &v.dp * a;
            db += &v.dbp * a;
        }
        let (p, dp, dbp) = (&vals[k].p, &vals[k].dp, &vals[k].dbp);
        let c1 = dp * p - p * dp;
        let c2 = dbp * p - p * dbp;
        let r1 = d - c1 * &ph * (2.0 / (ONE + lambda));
        let r2 = db - c2 * &ph * (2.0 / (ONE - lambda));
        debug_assert_eq!(r1.nrows(), n);
        worst = worst.max(mat_norm(&r1)).max(mat_norm(&r2));
    }
    Ok(worst)
}

/// `max ‖Φ†Φ − I‖` at `λ = it`.
pub fn unitarity_residual(seq: &ProjectorSeq, k: usize, t: f64, points: &[Complex64]) -> Result<f64> {
    let lambda = Complex64::new(0.0, t);
    let mut worst = 0.0f64;
    for &z in points {
        let ph = phi(seq, k, lambda, z)?;
        let n = ph.nrows();
        worst = worst.max(mat_norm(&(ph.adjoint() * &ph - CMat::identity(n, n))));
    }
    Ok(worst)
}

/// `(i/2) λ (I − Φ_k) + i c_k I` at finite `λ`.
pub fn asymptotic_x(seq: &ProjectorSeq, k: usize, lambda: Complex64, z: Complex64) -> Result<CMat> {
    let ph = phi(seq, k, lambda, z)?;
    let n = ph.nrows();
    Ok((CMat::identity(n, n) - ph) * (0.5 * I * lambda) + CMat::identity(n, n) * (I * c_const(seq.n, k)))
}

/// `∂_λ Φ_k = 4(1+λ)/(1−λ)³ Σ_{j<k} P_j − 2/(1−λ)² P_k`.
pub fn dphi_dlambda(ps: &[CMat], k: usize, lambda: Complex64) -> CMat {
    let l1 = ONE - lambda;
    let a = 4.0 * (ONE + lambda) / (l1 * l1 * l1);
    let b = -2.0 / (l1 * l1);
    lower_sum(ps, k) * a + &ps[k] * b
}

/// `α Φ⁻¹ ∂_λ Φ + i c_k I`.
pub fn sym_tafel(seq: &ProjectorSeq, k: usize, lambda: Complex64, alpha: Complex64, z: Complex64) -> Result<CMat> {
    check_pole(lambda)?;
    let ps: Vec<CMat> = seq.projectors.iter().map(|p| p.eval(z)).collect();
    let ph = phi_from(&ps, k, lambda);
    let n = ph.nrows();
    let inv = ph.try_inverse().ok_or_else(|| Error::Invalid("wavefunction is singular".into()))?;
    Ok(inv * dphi_dlambda(&ps, k, lambda) * alpha + CMat::identity(n, n) * (I * c_const(seq.n, k)))
}

/// `α(λ) = −i(1−λ²)/2`, for which the Sym–Tafel formula returns `X_k` at every `λ`.
pub fn consistent_alpha(lambda: Complex64) -> Complex64 {
    -0.5 * I * (ONE - lambda * lambda)
}

/// Spectral parameters checked by default.
pub fn default_lambda_grid() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, -2.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(3.0, 0.0),
        Complex64::new(1.0, 2.0),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaResidual {
    pub k: usize,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub lsp: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub lsp: Vec<LambdaResidual>,
    pub max_lsp: f64,
    pub max_unitarity: f64,
    /// `‖asymptotic X − X_k‖` at `λ = 10², 10³, 10⁴ i`, per `k`.
    pub asymptotic: Vec<[f64; 3]>,
    pub max_sym_tafel: f64,
}

pub fn spectral_report(seq: &ProjectorSeq, grid: &[Complex64], points: &[Complex64]) -> Result<SpectralReport> {
    let jets = seq.jets();
    let mut lsp = Vec::new();
    let mut max_lsp = 0.0f64;
    for k in 0..=seq.n {
        for &l in grid {
            let r = lsp_residual(&jets, k, l, points)?;
            max_lsp = max_lsp.max(r);
            lsp.push(LambdaResidual { k, lambda_re: l.re, lambda_im: l.im, lsp: r });
        }
    }
    let mut max_unitarity = 0.0f64;
    let mut asymptotic = Vec::new();
    let mut max_sym_tafel = 0.0f64;
    for k in 0..=seq.n {
        for t in [0.3, 1.0, 2.0, -5.0] {
            max_unitarity = max_unitarity.max(unitarity_residual(seq, k, t, points)?);
        }
        let mut errs = [0.0; 3];
        for (i, mag) in [1e2, 1e3, 1e4].iter().enumerate() {
            let l = Complex64::new(0.0, *mag);
            for &z in points {
                let d = mat_norm(&(asymptotic_x(seq, k, l, z)? - x_at(seq, k, z)));
                errs[i] = f64::max(errs[i], d);
            }
        }
        asymptotic.push(errs);
        for &l in grid {
            for &z in points {
                let st = sym_tafel(seq, k, l, consistent_alpha(l), z)?;
                max_sym_tafel = max_sym_tafel.max(mat_norm(&(st - x_at(seq, k, z))));
            }
        }
    }
    Ok(SpectralReport { n: seq.n, lsp, max_lsp, max_unitarity, asymptotic, max_sym_tafel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{op_norm, sample_points};
    use crate::sigma::{ladder, veronese_field};

    #[test]
    fn phi_tends_to_identity() {
        let seq = ladder(&veronese_field(2), 2).unwrap();
        let z = Complex64::new(0.4, 0.3);
        let ph = phi(&seq, 0, Complex64::new(1e6, 0.0), z).unwrap();
        assert!(op_norm(&(ph - CMat::identity(3, 3))) <= 3e-6);
        let ph = phi(&seq, 2, Complex64::new(1e6, 0.0), z).unwrap();
        assert!(op_norm(&(ph - CMat::identity(3, 3))) <= 5e-6);
    }

    #[test]
    fn poles_are_rejected() {
        let seq = ladder(&veronese_field(1), 1).unwrap();
        assert!(phi(&seq, 0, Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn lsp_cp1_real_lambda() {
        let seq = ladder(&veronese_field(1), 1).unwrap();
        let jets = seq.jets();
        assert!(lsp_residual(&jets, 0, Complex64::new(3.0, 0.0), &sample_points()).unwrap() < 1e-12);
    }

    #[test]
    fn sym_tafel_term_is_anti_hermitian_on_imaginary_axis() {
        let seq = ladder(&veronese_field(2), 2).unwrap();
        let z = Complex64::new(-0.6, 1.1);
        for t in [0.5, 2.0, 7.0] {
            let l = Complex64::new(0.0, t);
            let m = sym_tafel(&seq, 1, l, consistent_alpha(l), z).unwrap();
            assert!(mat_norm(&(m.adjoint() + &m)) < 1e-12);
        }
    }
}
