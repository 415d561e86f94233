//! Immersions `X_k = −i(P_k + 2 Σ_{j<k} P_j) + i c_k I` of the ladder in su(N+1).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{mat_norm, CMat, Jet, RationalMat};
use crate::sigma::{pi_minus, pi_minus_at, pi_plus, pi_plus_at, ProjectorSeq};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `c_k = (1 + 2k)/(N + 1)`.
pub fn c_const(n: usize, k: usize) -> f64 {
    (1 + 2 * k) as f64 / (n + 1) as f64
}

/// `X_k` in expanded form, together with the weighted projector terms it is built from.
#[derive(Clone, Debug)]
pub struct ImmersionSurface {
    pub k: usize,
    pub n: usize,
    pub x: RationalMat,
    pub c_k: f64,
    terms: Vec<(Complex64, RationalMat)>,
    shift: Complex64,
}

impl ImmersionSurface {
    /// Evaluates `Σ w_j M_j + s I` term by term.
    pub fn eval(&self, z: Complex64) -> CMat {
        let dim = self.n + 1;
        self.terms.iter().fold(CMat::identity(dim, dim) * self.shift, |acc, (w, m)| acc + m.eval(z) * *w)
    }
}

fn weighted(seq: &ProjectorSeq, k: usize) -> RationalMat {
    let dim = seq.dim();
    let mut acc = seq.projectors[k].clone();
    for j in 0..k {
        acc = acc.add(&seq.projectors[j].scale(Complex64::new(2.0, 0.0)));
    }
    acc.scale(-I).add(&RationalMat::identity(dim).scale(I * c_const(seq.n, k))).canonical()
}

pub fn build_x(seq: &ProjectorSeq, k: usize) -> Result<ImmersionSurface> {
    if k > seq.n {
        return Err(Error::Invalid(format!("surface index {k} exceeds N = {}", seq.n)));
    }
    let mut terms = vec![(-I, seq.projectors[k].clone())];
    for j in 0..k {
        terms.push((-2.0 * I, seq.projectors[j].clone()));
    }
    let c_k = c_const(seq.n, k);
    Ok(ImmersionSurface { k, n: seq.n, x: weighted(seq, k), c_k, terms, shift: I * c_k })
}

/// Numeric `X_k` at a point straight from the projectors.
pub fn x_at(seq: &ProjectorSeq, k: usize, z: Complex64) -> CMat {
    let dim = seq.dim();
    let mut a = seq.projectors[k].eval(z);
    for j in 0..k {
        a += seq.projectors[j].eval(z) * Complex64::new(2.0, 0.0);
    }
    a * (-I) + CMat::identity(dim, dim) * (I * c_const(seq.n, k))
}

fn shifted(x: &CMat, s: f64) -> CMat {
    let n = x.nrows();
    x - CMat::identity(n, n) * (I * s)
}

/// `(X − ic)(X − i(c−1))(X − i(c−2))`.
pub fn cubic_at(x: &CMat, c: f64) -> CMat {
    shifted(x, c) * shifted(x, c - 1.0) * shifted(x, c - 2.0)
}

/// The quadratic factor annihilating an end surface: `c, c−1` at `k = 0`, `c−1, c−2` at `k = N`.
pub fn quadratic_at(x: &CMat, c: f64, top: bool) -> CMat {
    if top {
        shifted(x, c - 1.0) * shifted(x, c - 2.0)
    } else {
        shifted(x, c) * shifted(x, c - 1.0)
    }
}

/// Minimal-polynomial residual: quadratic at the ends of the ladder, cubic inside.
pub fn min_poly_residual(s: &ImmersionSurface, points: &[Complex64]) -> f64 {
    points
        .iter()
        .map(|&z| {
            let x = s.eval(z);
            let m = if s.k == 0 || s.k == s.n {
                quadratic_at(&x, s.c_k, s.k == s.n)
            } else {
                cubic_at(&x, s.c_k)
            };
            mat_norm(&m)
        })
        .fold(0.0, f64::max)
}

/// Cubic residual for any `k`.
pub fn cubic_residual(s: &ImmersionSurface, points: &[Complex64]) -> f64 {
    points.iter().map(|&z| mat_norm(&cubic_at(&s.eval(z), s.c_k))).fold(0.0, f64::max)
}

/// `‖Σ (−1)^k X_k‖`.
pub fn alt_sum_residual(seq: &ProjectorSeq, points: &[Complex64]) -> f64 {
    let dim = seq.dim();
    points
        .iter()
        .map(|&z| {
            let s = (0..=seq.n).fold(CMat::zeros(dim, dim), |acc, k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc + x_at(seq, k, z) * Complex64::new(sign, 0.0)
            });
            mat_norm(&s)
        })
        .fold(0.0, f64::max)
}

/// `χ₊(X_k) = X_k − i(Π₊(P_k) + P_k) + 2i/(N+1) I`.
pub fn chi_plus(s: &ImmersionSurface, p_k: &RationalMat) -> Result<ImmersionSurface> {
    let dim = s.n + 1;
    let up = pi_plus(p_k)?;
    let x = s
        .x
        .sub(&up.add(p_k).scale(I))
        .add(&RationalMat::identity(dim).scale(I * (2.0 / dim as f64)))
        .canonical();
    let mut terms = s.terms.clone();
    terms.push((-I, up));
    terms.push((-I, p_k.clone()));
    let shift = s.shift + I * (2.0 / dim as f64);
    Ok(ImmersionSurface { k: s.k + 1, n: s.n, x, c_k: c_const(s.n, s.k + 1), terms, shift })
}

/// `χ₋(X_k) = X_k + i(Π₋(P_k) + P_k) − 2i/(N+1) I`.
pub fn chi_minus(s: &ImmersionSurface, p_k: &RationalMat) -> Result<ImmersionSurface> {
    if s.k == 0 {
        return Err(Error::LadderEnd);
    }
    let dim = s.n + 1;
    let down = pi_minus(p_k)?;
    let x = s
        .x
        .add(&down.add(p_k).scale(I))
        .sub(&RationalMat::identity(dim).scale(I * (2.0 / dim as f64)))
        .canonical();
    let mut terms = s.terms.clone();
    terms.push((I, down));
    terms.push((I, p_k.clone()));
    let shift = s.shift - I * (2.0 / dim as f64);
    Ok(ImmersionSurface { k: s.k - 1, n: s.n, x, c_k: c_const(s.n, s.k - 1), terms, shift })
}

/// Pointwise consistency of `Π±` with the ladder and of `χ±` with the immersions.
pub fn shift_residual(seq: &ProjectorSeq, jets: &[Jet], points: &[Complex64]) -> f64 {
    let n = seq.n;
    let dim = seq.dim();
    let two = CMat::identity(dim, dim) * (I * (2.0 / dim as f64));
    let mut worst = 0.0f64;
    for &z in points {
        let ps: Vec<CMat> = seq.projectors.iter().map(|p| p.eval(z)).collect();
        let xs: Vec<CMat> = (0..=n).map(|k| x_at(seq, k, z)).collect();
        for k in 0..=n {
            if k < n {
                let up = pi_plus_at(&jets[k], z).unwrap_or_else(|_| CMat::zeros(dim, dim));
                worst = worst.max(mat_norm(&(&up - &ps[k + 1])));
                let chi = &xs[k] - (&up + &ps[k]) * I + &two;
                worst = worst.max(mat_norm(&(chi - &xs[k + 1])));
            }
            if k > 0 {
                let down = pi_minus_at(&jets[k], z).unwrap_or_else(|_| CMat::zeros(dim, dim));
                worst = worst.max(mat_norm(&(&down - &ps[k - 1])));
                let chi = &xs[k] + (&down + &ps[k]) * I - &two;
                worst = worst.max(mat_norm(&(chi - &xs[k - 1])));
            }
        }
        if pi_plus_at(&jets[n], z).is_ok() || pi_minus_at(&jets[0], z).is_ok() {
            worst = worst.max(1.0);
        }
    }
    worst
}

/// `(A, B) = −½ tr(AB)`.
pub fn gram_mat(a: &CMat, b: &CMat) -> f64 {
    (-0.5 * (a * b).trace()).re
}

pub fn gram(a: &ImmersionSurface, b: &ImmersionSurface, z: Complex64) -> f64 {
    gram_mat(&a.eval(z), &b.eval(z))
}

/// `(X_k, X_m)` in closed form, `dim = N + 1`: `(dim/2) c_k (2 − c_m)` for `k < m`
/// and `½(dim c_k (2 − c_k) − 1)` on the diagonal.
pub fn closed_form_gram(n: usize, k: usize, m: usize) -> f64 {
    let (k, m) = (k.min(m), k.max(m));
    let dim = (n + 1) as f64;
    let (ck, cm) = (c_const(n, k), c_const(n, m));
    if k == m {
        0.5 * (dim * ck * (2.0 - ck) - 1.0)
    } else {
        0.5 * dim * ck * (2.0 - cm)
    }
}

pub fn closed_form_angle(n: usize, k: usize, m: usize) -> f64 {
    if k == m {
        return 1.0;
    }
    closed_form_gram(n, k, m) / (closed_form_gram(n, k, k) * closed_form_gram(n, m, m)).sqrt()
}

/// Computed angle cosines with their spread over the sample points.
#[derive(Clone, Debug, Serialize)]
pub struct AngleTable {
    pub n: usize,
    pub gram: Vec<Vec<f64>>,
    pub cos: Vec<Vec<f64>>,
    pub spread: f64,
    pub closed_form_dev: f64,
}

pub fn angle_table(seq: &ProjectorSeq, points: &[Complex64]) -> AngleTable {
    let n = seq.n;
    let dim = n + 1;
    let mut samples = vec![vec![Vec::new(); dim]; dim];
    let mut cos_samples = vec![vec![Vec::new(); dim]; dim];
    for &z in points {
        let xs: Vec<CMat> = (0..=n).map(|k| x_at(seq, k, z)).collect();
        let g: Vec<Vec<f64>> = (0..dim).map(|a| (0..dim).map(|b| gram_mat(&xs[a], &xs[b])).collect()).collect();
        for a in 0..dim {
            for b in 0..dim {
                samples[a][b].push(g[a][b]);
                cos_samples[a][b].push(g[a][b] / (g[a][a] * g[b][b]).sqrt());
            }
        }
    }
    let spread_of = |v: &Vec<f64>| {
        let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
        hi - lo
    };
    let mut spread = 0.0f64;
    let mut dev = 0.0f64;
    let mut gram = vec![vec![0.0; dim]; dim];
    let mut cos = vec![vec![0.0; dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            spread = spread.max(spread_of(&samples[a][b])).max(spread_of(&cos_samples[a][b]));
            gram[a][b] = samples[a][b][0];
            cos[a][b] = if a == b { 1.0 } else { cos_samples[a][b][0] };
            dev = dev
                .max((gram[a][b] - closed_form_gram(n, a, b)).abs())
                .max((cos[a][b] - closed_form_angle(n, a, b)).abs());
        }
    }
    AngleTable { n, gram, cos, spread, closed_form_dev: dev }
}

/// Tabulated CP² angle cosines, rows and columns ordered `k = 0, 1, 2`.
pub fn tabulated_cos_cp2() -> [[f64; 3]; 3] {
    let a = 5.0 / 33f64.sqrt();
    let b = (3.0f64 / 11.0).sqrt();
    [[a, b, 1.0 / 3.0], [b, 9.0 / 11.0, b], [1.0 / 3.0, b, a]]
}

/// Tabulated CP³ angle cosines, rows and columns ordered `k = 0, …, 3`.
pub fn tabulated_cos_cp3() -> [[f64; 4]; 4] {
    [
        [3.0 / 8.0, 5.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0],
        [5.0 / 8.0, 11.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0],
        [3.0 / 8.0, 9.0 / 8.0, 11.0 / 8.0, 5.0 / 8.0],
        [1.0 / 8.0, 3.0 / 8.0, 5.0 / 8.0, 3.0 / 8.0],
    ]
}

/// Tabulated values for `N = 2, 3`, flattened to rows.
pub fn tabulated_cos(n: usize) -> Option<Vec<Vec<f64>>> {
    match n {
        2 => Some(tabulated_cos_cp2().iter().map(|r| r.to_vec()).collect()),
        3 => Some(tabulated_cos_cp3().iter().map(|r| r.to_vec()).collect()),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairDistance {
    pub k: usize,
    pub l: usize,
    pub min_distance: f64,
    pub coincident: bool,
}

/// Smallest `‖X_k(p) − X_l(q)‖` over all point pairs.
pub fn distinctness_check(seq: &ProjectorSeq, points: &[Complex64]) -> Vec<PairDistance> {
    let xs: Vec<Vec<CMat>> = (0..=seq.n).map(|k| points.iter().map(|&z| x_at(seq, k, z)).collect()).collect();
    let mut out = Vec::new();
    for k in 0..=seq.n {
        for l in k + 1..=seq.n {
            let mut d = f64::MAX;
            for a in &xs[k] {
                for b in &xs[l] {
                    d = d.min(mat_norm(&(a - b)));
                }
            }
            out.push(PairDistance { k, l, min_distance: d, coincident: d < 1e-9 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::sample_points;
    use crate::sigma::{ladder, veronese_field};

    fn seq(n: usize) -> ProjectorSeq {
        ladder(&veronese_field(n), n).unwrap()
    }

    #[test]
    fn cp2_x0_at_origin() {
        let s = build_x(&seq(2), 0).unwrap();
        let x = s.eval(Complex64::new(0.0, 0.0));
        let d = [-2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { I * d[i] } else { Complex64::new(0.0, 0.0) };
                assert!((x[(i, j)] - e).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_forms_in_cp2() {
        assert!((closed_form_gram(2, 0, 1) - 0.5).abs() < 1e-15);
        assert!((closed_form_gram(2, 0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((closed_form_angle(2, 0, 1) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(closed_form_angle(3, 2, 2), 1.0);
    }

    #[test]
    fn closed_form_angle_reflection_symmetry() {
        for n in 1..6 {
            for k in 0..=n {
                for m in k..=n {
                    let a = closed_form_angle(n, k, m);
                    let b = closed_form_angle(n, n - m, n - k);
                    assert!((a - b).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn chi_maps_between_cp2_surfaces() {
        let s = seq(2);
        let pts = sample_points();
        let x0 = build_x(&s, 0).unwrap();
        let x1 = build_x(&s, 1).unwrap();
        let up = chi_plus(&x0, &s.projectors[0]).unwrap();
        assert!(up.x.max_pointwise_diff(&x1.x, &pts) < 1e-12);
        let back = chi_minus(&up, &s.projectors[1]).unwrap();
        assert!(back.x.max_pointwise_diff(&x0.x, &pts) < 1e-12);
    }

    #[test]
    fn cp1_surfaces_coincide() {
        let d = distinctness_check(&seq(1), &sample_points());
        assert!(d.len() == 1 && d[0].coincident);
        assert!(distinctness_check(&seq(2), &sample_points()).iter().all(|p| !p.coincident));
    }
}
