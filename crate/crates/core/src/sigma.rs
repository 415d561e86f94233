//! Fields, projectors and the harmonic-map ladder of the CP^N model.
//!
//! A field is a vector of polynomials in `(ξ, ξ̄)`; its projector is
//! `P = f f† / (f† f)`. The raising operator `f ↦ (I − P) ∂f` builds the
//! ladder `f_0, …, f_N` from a holomorphic `f_0`, and the projector recurrences
//! `Π±` reproduce the same sequence from `P_0` alone.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{MPoly, XI, XI_BAR};
use crate::rational::{mat_norm, sample_points, CMat, FieldVec, Jet, RationalMat, RationalScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromFieldLadder,
    FromRecurrence,
    FromCoherentState,
}

/// Ordered projectors `P_0 … P_N`, with their fields when known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorSeq {
    pub n: usize,
    pub provenance: Provenance,
    #[serde(default)]
    pub fields: Vec<FieldVec>,
    pub projectors: Vec<RationalMat>,
}

impl ProjectorSeq {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn jets(&self) -> Vec<Jet> {
        self.projectors.iter().map(Jet::new).collect()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Holomorphic Veronese curve `(1, √C(N,1) ξ, …, √C(N,k) ξ^k, …, ξ^N)`.
pub fn veronese_field(n: usize) -> FieldVec {
    let num = (0..=n)
        .map(|k| MPoly::monomial(2, [k as u16, 0, 0, 0], Complex64::new(binomial(n, k).sqrt(), 0.0)))
        .collect();
    FieldVec::new(num)
}

/// `P = f f† / (f† f)`.
pub fn project(f: &FieldVec) -> Result<RationalMat> {
    if f.is_zero() {
        return Err(Error::Invalid("cannot project the zero field".into()));
    }
    let den = FieldVec::inner_num(&f.num, &f.num);
    Ok(RationalMat::outer(&f.num, &f.num, den).canonical())
}

fn apply_transverse(f: &[MPoly], df: &[MPoly]) -> Vec<MPoly> {
    let nrm = FieldVec::inner_num(f, f);
    let ip = FieldVec::inner_num(f, df);
    f.iter().zip(df).map(|(a, b)| &(&nrm * b) - &(&ip * a)).collect()
}

/// Numerators of `(f†f)·(I − P) ∂f`.
pub fn raise_raw(f: &[MPoly]) -> Vec<MPoly> {
    let df: Vec<MPoly> = f.iter().map(|p| p.d(XI)).collect();
    apply_transverse(f, &df)
}

/// Numerators of `(f†f)·(I − P) ∂̄f`.
pub fn lower_raw(f: &[MPoly]) -> Vec<MPoly> {
    let df: Vec<MPoly> = f.iter().map(|p| p.d(XI_BAR)).collect();
    apply_transverse(f, &df)
}

fn normalized(f: &[MPoly]) -> Vec<MPoly> {
    let s = f.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max);
    if s == 0.0 {
        return f.to_vec();
    }
    f.iter().map(|p| p.scale_real(1.0 / s)).collect()
}

fn negligible(v: &[MPoly], scale: f64) -> bool {
    v.iter().all(|p| p.max_abs_coeff() < 1e-10 * scale)
}

fn step(f: &FieldVec, raw: fn(&[MPoly]) -> Vec<MPoly>) -> FieldVec {
    let g = raw(&normalized(&f.num));
    if negligible(&g, 1.0) {
        return FieldVec::new(vec![MPoly::zero(2); f.dim()]);
    }
    FieldVec::new(g).projective_canonical()
}

/// `(I − P) ∂f`, canonicalized; the zero field marks the top of the ladder.
pub fn raise_field(f: &FieldVec) -> FieldVec {
    step(f, raise_raw)
}

/// `(I − P) ∂̄f`, canonicalized; the zero field marks the bottom of the ladder.
pub fn lower_field(f: &FieldVec) -> FieldVec {
    step(f, lower_raw)
}

/// Unnormalized raising chain `f_0 … f_n`.
///
/// The raw raised field carries the factor `D_{k-1}^2`, where
/// `D_k = |f_k|^2 / D_{k-1}` are the leading Gram determinants; it is divided
/// out at each step to keep degrees low.
fn raise_chain(f0: &[MPoly], n: usize) -> Result<Vec<Vec<MPoly>>> {
    let mut raw = vec![f0.to_vec()];
    let mut d_prev = MPoly::one(2);
    let mut d_cur = FieldVec::inner_num(f0, f0);
    for k in 0..n {
        let cur = raw.last().unwrap().clone();
        if negligible(&raise_raw(&normalized(&cur)), 1.0) {
            return Err(Error::LadderTerminated { index: k + 1, n });
        }
        let g = raise_raw(&cur);
        let sq = &d_prev * &d_prev;
        let next: Vec<MPoly> = match g
            .iter()
            .map(|p| p.exact_div(&sq, 1e-9 * p.max_abs_coeff()))
            .collect::<Result<Vec<_>>>()
        {
            Ok(q) => q,
            Err(_) => g,
        };
        let nn = FieldVec::inner_num(&next, &next);
        let d_next = nn.exact_div(&d_cur, 1e-9 * nn.max_abs_coeff()).unwrap_or(nn);
        d_prev = d_cur;
        d_cur = d_next;
        raw.push(next);
    }
    Ok(raw)
}

/// Holomorphic curve orthogonal to `f, ∂f, …, ∂^{n-1}f`: signed maximal minors
/// of that Wronskian. Its raising ladder is the conjugate of the ladder of `f`
/// in reverse order.
pub fn dual_curve(f0: &FieldVec) -> FieldVec {
    let dim = f0.dim();
    let n = dim - 1;
    let mut cols = vec![f0.num.clone()];
    for _ in 1..n {
        let next = cols.last().unwrap().iter().map(|p| p.d(XI)).collect();
        cols.push(next);
    }
    // det over row subsets `s` of the first |s| columns, by expansion along the last of them.
    let mut det: Vec<MPoly> = vec![MPoly::zero(2); 1 << dim];
    det[0] = MPoly::one(2);
    for s in 1usize..(1 << dim) {
        let size = s.count_ones() as usize;
        if size > n {
            continue;
        }
        let col = &cols[size - 1];
        let mut acc = MPoly::zero(2);
        let mut below = 0;
        for i in 0..dim {
            if s & (1 << i) == 0 {
                continue;
            }
            let sign = if (size - 1 - below) % 2 == 0 { 1.0 } else { -1.0 };
            below += 1;
            let rest = &det[s & !(1 << i)];
            if !rest.is_zero() && !col[i].is_zero() {
                acc = &acc + &(&col[i] * rest).scale_real(sign);
            }
        }
        det[s] = acc;
    }
    let full = (1usize << dim) - 1;
    let num = (0..dim)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            det[full & !(1 << i)].scale_real(sign)
        })
        .collect();
    FieldVec::new(num)
}

/// Builds `P_0 … P_N` from a holomorphic field.
///
/// Fields above `N/2` are also built by raising the dual curve; of the two
/// candidates the one with the smaller Euler–Lagrange residual at a few probe
/// points is kept.
pub fn ladder(f0: &FieldVec, n: usize) -> Result<ProjectorSeq> {
    if f0.dim() != n + 1 {
        return Err(Error::Dimension(format!("field has {} components, expected {}", f0.dim(), n + 1)));
    }
    if !f0.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    if f0.num.iter().all(|p| p.degree_in(XI) == 0) {
        return Err(Error::ConstantField);
    }
    let fwd = raise_chain(&f0.num, n)?;
    if !negligible(&raise_raw(&normalized(fwd.last().unwrap())), 1.0) {
        return Err(Error::Invalid(format!("raising beyond index {n} does not vanish")));
    }
    let half = n / 2;
    let bwd = raise_chain(&dual_curve(f0).num, n - half - 1).ok();
    let probes = [Complex64::new(0.21, -0.13), Complex64::new(-0.8, 0.55), Complex64::new(1.7, 1.1), Complex64::new(-2.6, -3.2)];
    let score = |f: &FieldVec| project(f).map(|p| el_residual(&Jet::new(&p), &probes)).unwrap_or(f64::INFINITY);
    let fields: Vec<FieldVec> = (0..=n)
        .map(|k| {
            let up = FieldVec::new(fwd[k].clone()).projective_canonical();
            let Some(b) = bwd.as_ref().filter(|_| k > half) else { return up };
            let down = FieldVec::new(b[n - k].iter().map(MPoly::conj).collect()).projective_canonical();
            if score(&down) < score(&up) {
                down
            } else {
                up
            }
        })
        .collect();
    let projectors = fields.iter().map(project).collect::<Result<Vec<_>>>()?;
    Ok(ProjectorSeq { n, provenance: Provenance::FromFieldLadder, fields, projectors })
}

fn recurrence(p: &RationalMat, first: usize, second: usize) -> Result<RationalMat> {
    let a = p.d(first).canonical();
    let b = p.d(second).canonical();
    let m = a.mat_mul(p).mat_mul(&b);
    let t = m.trace();
    let ratio = max_over(&sample_points(), |z| {
        let scale = mat_norm(&a.eval(z)) * mat_norm(&b.eval(z));
        if scale == 0.0 { 0.0 } else { t.eval(z).norm() / scale }
    });
    if t.num.is_zero() || ratio <= 1e-8 {
        return Err(Error::LadderEnd);
    }
    // Rank one: every nonzero column of the numerator is the new field times a
    // scalar factor; keep the column whose factor strips furthest.
    let dim = m.dim();
    let degree = |f: &FieldVec| f.num.iter().map(MPoly::total_degree).max().unwrap_or(0);
    let f = (0..dim)
        .map(|c| FieldVec::new((0..dim).map(|r| m.num[r][c].clone()).collect()))
        .filter(|f| !f.is_zero())
        .map(|f| f.projective_canonical())
        .min_by_key(|f| degree(f))
        .ok_or(Error::LadderEnd)?;
    project(&f)
}

/// `Π₊(P) = ∂P·P·∂̄P / tr(∂P·P·∂̄P)`, the projector of `(I − P)∂f`.
///
/// On a holomorphic `P` the opposite ordering `∂̄P·P·∂P` vanishes identically,
/// so that ordering belongs to the lowering direction.
pub fn pi_plus(p: &RationalMat) -> Result<RationalMat> {
    recurrence(p, XI, XI_BAR)
}

/// `Π₋(P) = ∂̄P·P·∂P / tr(∂̄P·P·∂P)`, the projector of `(I − P)∂̄f`.
pub fn pi_minus(p: &RationalMat) -> Result<RationalMat> {
    recurrence(p, XI_BAR, XI)
}

/// Numeric `Π₊(P)` at one point from exact derivatives.
pub fn pi_plus_at(jet: &Jet, z: Complex64) -> Result<CMat> {
    let v = jet.at(z);
    let m = &v.dp * &v.p * &v.dbp;
    let t = m.trace();
    let scale = mat_norm(&v.dp) * mat_norm(&v.dbp);
    if t.norm() <= 1e-10 * scale || t.norm() == 0.0 {
        return Err(Error::LadderEnd);
    }
    Ok(m / t)
}

/// Numeric `Π₋(P)` at one point from exact derivatives.
pub fn pi_minus_at(jet: &Jet, z: Complex64) -> Result<CMat> {
    let v = jet.at(z);
    let m = &v.dbp * &v.p * &v.dp;
    let t = m.trace();
    let scale = mat_norm(&v.dp) * mat_norm(&v.dbp);
    if t.norm() <= 1e-10 * scale || t.norm() == 0.0 {
        return Err(Error::LadderEnd);
    }
    Ok(m / t)
}

/// Generates `P_0 … P_N` by applying `Π₊` repeatedly; the last step must hit the ladder end.
pub fn recurrence_seq(p0: &RationalMat) -> Result<ProjectorSeq> {
    let n = p0.dim() - 1;
    let mut projectors = vec![p0.clone()];
    for _ in 0..n {
        projectors.push(pi_plus(projectors.last().unwrap())?);
    }
    match pi_plus(projectors.last().unwrap()) {
        Err(Error::LadderEnd) => {}
        Ok(_) => return Err(Error::Invalid("recurrence did not terminate at P_N".into())),
        Err(e) => return Err(e),
    }
    Ok(ProjectorSeq { n, provenance: Provenance::FromRecurrence, fields: vec![], projectors })
}

fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

fn max_over<F: Fn(Complex64) -> f64>(points: &[Complex64], f: F) -> f64 {
    points.iter().map(|&z| f(z)).fold(0.0, f64::max)
}

/// `max ‖[∂∂̄P, P]‖` over the points.
pub fn el_residual(jet: &Jet, points: &[Complex64]) -> f64 {
    max_over(points, |z| {
        let v = jet.at(z);
        mat_norm(&comm(&v.ddbp, &v.p))
    })
}

/// `max ‖∂[∂̄P,P] + ∂̄[∂P,P]‖`, each term expanded by the product rule.
pub fn conservation_residual(jet: &Jet, points: &[Complex64]) -> f64 {
    max_over(points, |z| {
        let v = jet.at(z);
        let a = comm(&v.ddbp, &v.p) + comm(&v.dbp, &v.dp);
        let b = comm(&v.ddbp, &v.p) + comm(&v.dp, &v.dbp);
        mat_norm(&(a + b))
    })
}

/// Largest deviation of `P` from a rank-one Hermitian idempotent.
pub fn projector_residual(p: &RationalMat, points: &[Complex64]) -> f64 {
    max_over(points, |z| {
        let m = p.eval(z);
        let idem = mat_norm(&(&m * &m - &m));
        let herm = mat_norm(&(m.adjoint() - &m));
        let tr = (m.trace() - 1.0).norm();
        idem.max(herm).max(tr)
    })
}

/// `max_{j≠k} ‖P_j P_k‖`.
pub fn orthogonality_residual(seq: &ProjectorSeq, points: &[Complex64]) -> f64 {
    max_over(points, |z| {
        let ms: Vec<CMat> = seq.projectors.iter().map(|p| p.eval(z)).collect();
        let mut worst = 0.0f64;
        for (j, a) in ms.iter().enumerate() {
            for (k, b) in ms.iter().enumerate() {
                if j != k {
                    worst = worst.max(mat_norm(&(a * b)));
                }
            }
        }
        worst
    })
}

/// `‖Σ P_k − I‖`.
pub fn completeness_residual(seq: &ProjectorSeq, points: &[Complex64]) -> f64 {
    let n = seq.dim();
    max_over(points, |z| {
        let s = seq.projectors.iter().fold(CMat::zeros(n, n), |acc, p| acc + p.eval(z));
        mat_norm(&(s - CMat::identity(n, n)))
    })
}

/// Residual of `(I − P)[∂∂̄f − ((f†∂̄f)∂f + (f†∂f)∂̄f)/(f†f)]`, relative to `|f|`.
pub fn unconstrained_el_residual(f: &FieldVec, points: &[Complex64]) -> f64 {
    let df = f.d(XI);
    let dbf = f.d(XI_BAR);
    let ddbf = df.d(XI_BAR);
    max_over(points, |z| {
        let v = f.eval(z);
        let a = df.eval(z);
        let b = dbf.eval(z);
        let c = ddbf.eval(z);
        let nrm = v.dotc(&v);
        let w = c - (&a * v.dotc(&b) + &b * v.dotc(&a)) / nrm;
        let proj = &v * v.adjoint() / nrm;
        let r = &w - proj * &w;
        r.norm() / nrm.re.sqrt()
    })
}

/// Scalar `tr(∂P ∂̄P)`, the conformal factor of every induced metric.
pub fn metric_density(jet: &Jet) -> RationalScalar {
    jet.dp().mat_mul(&jet.dbp()).trace().canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::sample_points;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn m(e: [u16; 2], re: f64) -> MPoly {
        MPoly::monomial(2, [e[0], e[1], 0, 0], c(re, 0.0))
    }

    #[test]
    fn project_cp1() {
        let f = FieldVec::new(vec![MPoly::one(2), MPoly::var(2, XI)]);
        let p = project(&f).unwrap();
        assert!(p.den.approx_eq(&MPoly::one_plus_r(2), 1e-14));
        assert!(p.num[0][1].approx_eq(&MPoly::var(2, XI_BAR), 1e-14));
        assert!(p.num[1][1].approx_eq(&m([1, 1], 1.0), 1e-14));
    }

    #[test]
    fn project_constant_is_diagonal() {
        let f = FieldVec::new(vec![MPoly::one(2), MPoly::zero(2)]);
        let p = project(&f).unwrap();
        let v = p.eval(c(0.3, 0.1));
        assert!((v[(0, 0)] - 1.0).norm() < 1e-15 && v[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn raise_cp1_gives_antiholomorphic_partner() {
        let f = FieldVec::new(vec![MPoly::one(2), MPoly::var(2, XI)]);
        let g = raise_field(&f);
        let z = c(0.4, -0.2);
        let v = g.eval(z);
        let expected = [-z.conj(), c(1.0, 0.0)];
        let ratio = v[1] / expected[1];
        assert!((v[0] - ratio * expected[0]).norm() < 1e-13);
    }

    #[test]
    fn raise_constant_is_zero() {
        let f = FieldVec::new(vec![MPoly::one(2), MPoly::constant(2, c(2.0, 1.0))]);
        assert!(raise_field(&f).is_zero());
    }

    #[test]
    fn veronese_cp2_middle_field() {
        let seq = ladder(&veronese_field(2), 2).unwrap();
        let f1 = &seq.fields[1];
        let s2 = 2f64.sqrt();
        let expected = [m([0, 1], -s2), &MPoly::one(2) - &m([1, 1], 1.0), m([1, 0], s2)];
        let scale = f1.num[2].coeff(&[1, 0, 0, 0]) / c(s2, 0.0);
        for (a, b) in f1.num.iter().zip(expected.iter()) {
            assert!(a.approx_eq(&b.scale(scale), 1e-12), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn lower_from_top_returns_middle() {
        let s2 = 2f64.sqrt();
        let top = FieldVec::new(vec![m([0, 2], 1.0), m([0, 1], -s2), MPoly::one(2)]);
        let g = lower_field(&top);
        let z = c(0.7, 0.25);
        let v = g.eval(z);
        let e = [-s2 * z.conj(), c(1.0 - z.norm_sqr(), 0.0), s2 * z];
        let ratio = v[2] / e[2];
        for i in 0..3 {
            assert!((v[i] - ratio * e[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn recurrence_matches_ladder_and_terminates() {
        let seq = ladder(&veronese_field(2), 2).unwrap();
        let rec = recurrence_seq(&seq.projectors[0]).unwrap();
        let pts = sample_points();
        for k in 0..3 {
            assert!(rec.projectors[k].max_pointwise_diff(&seq.projectors[k], &pts) < 1e-12);
        }
        let back = pi_minus(&seq.projectors[1]).unwrap();
        assert!(back.max_pointwise_diff(&seq.projectors[0], &pts) < 1e-12);
        assert!(matches!(pi_plus(&seq.projectors[2]), Err(Error::LadderEnd)));
    }

    #[test]
    fn negative_control_is_not_harmonic() {
        let f = FieldVec::new(vec![MPoly::one(2), &MPoly::var(2, XI) + &m([0, 2], 1.0)]);
        let p = project(&f).unwrap();
        let jet = Jet::new(&p);
        let pts = sample_points();
        assert!(el_residual(&jet, &pts) > 1e-3);
        assert!(conservation_residual(&jet, &pts) > 1e-3);
    }

    #[test]
    fn degenerate_field_reports_index() {
        let f = FieldVec::new(vec![MPoly::one(2), MPoly::var(2, XI), MPoly::var(2, XI).scale_real(2.0)]);
        assert!(matches!(ladder(&f, 2), Err(Error::LadderTerminated { index: 2, n: 2 })));
    }
}
