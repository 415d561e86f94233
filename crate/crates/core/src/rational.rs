//! Rational functions, vectors and matrices over the arity-2 ring.
//!
//! Every object is a polynomial numerator (or array of numerators) over a
//! single scalar denominator. Derivatives use the quotient rule and are exact.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{MPoly, XI, XI_BAR};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative remainder tolerance for divisions attempted during canonicalization.
pub const CANON_REL_TOL: f64 = 1e-9;

/// Nine deterministic points: three angles on each of the rings 0.3, 1, 2.5.
pub fn sample_points() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(9);
    for r in [0.3, 1.0, 2.5] {
        for i in 0..3 {
            let a = 0.7 + 2.0 * PI * i as f64 / 3.0;
            pts.push(Complex64::from_polar(r, a));
        }
    }
    pts
}

/// Largest entry modulus.
pub fn mat_norm(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

fn equal_dens(a: &MPoly, b: &MPoly) -> bool {
    let s = a.max_abs_coeff().max(b.max_abs_coeff());
    a.approx_eq(b, 1e-12 * s)
}

/// Removes factors shared by a denominator and a set of numerators.
///
/// Strips common powers of `1 + ξξ̄` and common powers of `ξξ̄`, removes the
/// denominator entirely when it divides every numerator, and scales so the
/// leading self-conjugate term of the denominator has coefficient 1.
fn canonicalize_parts(nums: &mut [MPoly], den: &mut MPoly) {
    if nums.iter().all(|p| p.is_zero()) {
        *den = MPoly::one(den.arity());
        return;
    }
    let base = MPoly::one_plus_r(2);
    loop {
        let Ok(d) = den.exact_div(&base, CANON_REL_TOL * den.max_abs_coeff()) else { break };
        let Some(out) = divide_all(nums, &base) else { break };
        *den = d;
        nums.clone_from_slice(&out);
    }
    let mut g = den.monomial_gcd();
    for p in nums.iter().filter(|p| !p.is_zero()) {
        let pg = p.monomial_gcd();
        for i in 0..4 {
            g[i] = g[i].min(pg[i]);
        }
    }
    let s = g[0].min(g[1]);
    if s > 0 {
        let g = [s, s, 0, 0];
        *den = den.div_monomial(&g);
        for p in nums.iter_mut() {
            *p = p.div_monomial(&g);
        }
    }
    if den.total_degree() > 0 {
        if let Some(out) = divide_all(nums, den) {
            *den = MPoly::one(den.arity());
            nums.clone_from_slice(&out);
        }
    }
    let lead = den
        .terms()
        .filter(|(e, _)| e[0] == e[1])
        .last()
        .map(|(_, c)| *c)
        .or_else(|| den.leading_term().map(|(_, c)| Complex64::new(c.norm(), 0.0)));
    if let Some(lc) = lead.filter(|c| (c - 1.0).norm() > 4.0 * f64::EPSILON && c.norm() > 0.0) {
        let s = if lc.im == 0.0 { Complex64::new(1.0 / lc.re, 0.0) } else { lc.inv() };
        *den = den.scale(s);
        for p in nums.iter_mut() {
            *p = p.scale(s);
        }
    }
}

fn divide_all(nums: &[MPoly], q: &MPoly) -> Option<Vec<MPoly>> {
    nums.iter().map(|p| p.exact_div(q, CANON_REL_TOL * p.max_abs_coeff()).ok()).collect()
}

/// Projective simplification of a vector of numerators: strips shared powers
/// of `1 + ξξ̄` and the shared monomial.
fn canonicalize_projective(nums: &mut [MPoly]) {
    if nums.iter().all(|p| p.is_zero()) {
        return;
    }
    let base = MPoly::one_plus_r(2);
    while let Some(out) = divide_all(nums, &base) {
        nums.clone_from_slice(&out);
    }
    let mut g = [u16::MAX; 4];
    for p in nums.iter().filter(|p| !p.is_zero()) {
        let pg = p.monomial_gcd();
        for i in 0..4 {
            g[i] = g[i].min(pg[i]);
        }
    }
    if g.iter().any(|&x| x > 0 && x < u16::MAX) {
        for p in nums.iter_mut() {
            *p = p.div_monomial(&g);
        }
    }
}

/// Coefficients in `var` of each power of the other variable, lowest first.
fn univariate_slices(p: &MPoly, var: usize) -> Vec<Vec<Complex64>> {
    let other = 1 - var;
    let mut by: std::collections::BTreeMap<u16, Vec<Complex64>> = std::collections::BTreeMap::new();
    for (e, c) in p.terms() {
        let v = by.entry(e[other]).or_default();
        let d = e[var] as usize;
        if v.len() <= d {
            v.resize(d + 1, Complex64::new(0.0, 0.0));
        }
        v[d] += c;
    }
    by.into_values().collect()
}

fn companion_eigenvalues(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut m = CMat::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 500)?;
    schur.eigenvalues().map(|v| v.iter().copied().collect())
}

/// Coefficients of `p(x + s)`.
fn taylor_shift(c: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mut out = c.to_vec();
    let n = out.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let t = out[k + 1] * s;
            out[k] += t;
        }
    }
    out
}

/// Roots of `Σ c_i x^i` from the companion matrix, repeated by multiplicity.
///
/// Nearby eigenvalues are merged into one cluster; its mean is polished as a
/// simple root of the derivative of matching order. When the QR iteration
/// stalls the polynomial is shifted and retried.
fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let shifts = [Complex64::new(0.0, 0.0), Complex64::new(0.31, 0.17), Complex64::new(-0.23, 0.41)];
    let Some(eig) = shifts.iter().find_map(|&s| {
        companion_eigenvalues(&taylor_shift(c, s)).map(|e| e.into_iter().map(|r| r + s).collect::<Vec<_>>())
    }) else {
        return Vec::new();
    };
    let mut used = vec![false; eig.len()];
    let mut out = Vec::new();
    for i in 0..eig.len() {
        if used[i] {
            continue;
        }
        let radius = 1e-4 * eig[i].norm().max(1.0);
        let members: Vec<usize> = (i..eig.len()).filter(|&j| !used[j] && (eig[j] - eig[i]).norm() <= radius).collect();
        for &j in &members {
            used[j] = true;
        }
        let mult = members.len();
        let mean = members.iter().map(|&j| eig[j]).sum::<Complex64>() / mult as f64;
        let mut dc = c.to_vec();
        for _ in 1..mult {
            dc = dc.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
        }
        let r = polish_root(&dc, mean);
        out.extend(std::iter::repeat(r).take(mult));
    }
    out
}

/// Newton refinement of a root of `Σ c_i x^i`.
fn polish_root(c: &[Complex64], mut r: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in c.iter().rev() {
            dp = dp * r + p;
            p = p * r + a;
        }
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        r -= step;
        if step.norm() <= 1e-16 * r.norm().max(1.0) {
            break;
        }
    }
    r
}

/// Divides all components by every common linear factor `(var − r)`.
///
/// Candidate roots come from the lowest-degree univariate slice; each division
/// is verified by exact division of every component.
fn strip_univariate_factors(nums: &mut [MPoly], var: usize) {
    'outer: loop {
        let mut slices: Vec<Vec<Complex64>> = Vec::new();
        for p in nums.iter().filter(|p| !p.is_zero()) {
            for mut s in univariate_slices(p, var) {
                while s.last().is_some_and(|c| c.norm() == 0.0) {
                    s.pop();
                }
                if s.len() == 1 {
                    return;
                }
                if s.len() > 1 {
                    slices.push(s);
                }
            }
        }
        let Some(pick) = slices.iter().min_by_key(|s| s.len()) else { return };
        for r in poly_roots(pick) {
            let mut exps = [0u16; 4];
            exps[var] = 1;
            let lin = MPoly::from_terms(2, [(exps, Complex64::new(1.0, 0.0)), ([0; 4], -r)]);
            if let Some(out) = divide_all(nums, &lin) {
                nums.clone_from_slice(&out);
                continue 'outer;
            }
        }
        return;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalScalar {
    pub num: MPoly,
    pub den: MPoly,
}

impl RationalScalar {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        RationalScalar { num, den }
    }

    pub fn poly(num: MPoly) -> Self {
        let den = MPoly::one(num.arity());
        RationalScalar { num, den }
    }

    pub fn d(&self, var: usize) -> Self {
        let num = &(&self.num.d(var) * &self.den) - &(&self.num * &self.den.d(var));
        RationalScalar { num, den: &self.den * &self.den }
    }

    pub fn mul(&self, o: &RationalScalar) -> Self {
        RationalScalar { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn add(&self, o: &RationalScalar) -> Self {
        if equal_dens(&self.den, &o.den) {
            RationalScalar { num: &self.num + &o.num, den: self.den.clone() }
        } else {
            RationalScalar {
                num: &(&self.num * &o.den) + &(&o.num * &self.den),
                den: &self.den * &o.den,
            }
        }
    }

    pub fn neg(&self) -> Self {
        RationalScalar { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RationalScalar) -> Self {
        self.add(&o.neg())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(&[z]) / self.den.eval(&[z])
    }

    pub fn canonical(&self) -> Self {
        let mut nums = [self.num.clone()];
        let mut den = self.den.clone();
        canonicalize_parts(&mut nums, &mut den);
        let [num] = nums;
        RationalScalar { num, den }
    }

    /// Zero test relative to the numerator's original scale.
    pub fn is_negligible(&self, ref_scale: f64) -> bool {
        self.num.max_abs_coeff() <= 1e-10 * ref_scale.max(1e-300)
    }
}

/// Homogeneous coordinates of a map into projective space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldVec {
    pub num: Vec<MPoly>,
    pub den: MPoly,
}

impl FieldVec {
    pub fn new(num: Vec<MPoly>) -> Self {
        let arity = num.first().map(|p| p.arity()).unwrap_or(2);
        FieldVec { num, den: MPoly::one(arity) }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn d(&self, var: usize) -> Self {
        if self.den.num_terms() == 1 && self.den.total_degree() == 0 {
            return FieldVec { num: self.num.iter().map(|p| p.d(var)).collect(), den: self.den.clone() };
        }
        let dd = self.den.d(var);
        let num = self.num.iter().map(|p| &(&p.d(var) * &self.den) - &(p * &dd)).collect();
        FieldVec { num, den: &self.den * &self.den }
    }

    pub fn eval(&self, z: Complex64) -> CVec {
        let d = self.den.eval(&[z]);
        CVec::from_iterator(self.num.len(), self.num.iter().map(|p| p.eval(&[z]) / d))
    }

    /// `f†f` over the squared modulus of the denominator.
    pub fn norm_sq(&self) -> RationalScalar {
        let mut acc = MPoly::zero(2);
        for p in &self.num {
            acc = &acc + &(&p.conj() * p);
        }
        RationalScalar { num: acc, den: &self.den.conj() * &self.den }
    }

    /// `f†g` of two numerator vectors, ignoring denominators.
    pub fn inner_num(f: &[MPoly], g: &[MPoly]) -> MPoly {
        let mut acc = MPoly::zero(2);
        for (a, b) in f.iter().zip(g) {
            acc = &acc + &(&a.conj() * b);
        }
        acc
    }

    /// `∂̄f = 0` for every component.
    pub fn is_holomorphic(&self) -> bool {
        self.num.iter().all(|p| p.degree_in(XI_BAR) == 0) && self.den.degree_in(XI_BAR) == 0
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.num.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|p| p.is_zero())
    }

    /// Projective canonical form with unit denominator.
    ///
    /// The denominator is dropped, shared monomials and powers of `1 + ξξ̄` are
    /// removed, and the phase is fixed so the trailing coefficient of the first
    /// nonzero component is real and positive. Polynomial factors in `ξ` alone
    /// or `ξ̄` alone that divide every component are removed as well.
    pub fn projective_canonical(&self) -> Self {
        let mut nums = self.num.clone();
        canonicalize_projective(&mut nums);
        strip_univariate_factors(&mut nums, XI);
        strip_univariate_factors(&mut nums, XI_BAR);
        let mut f = FieldVec { num: nums, den: MPoly::one(2) };
        f.fix_phase();
        f
    }

    fn fix_phase(&mut self) {
        if let Some((_, c)) = self.num.iter().find(|p| !p.is_zero()).and_then(|p| p.trailing_term()) {
            let s = c.conj() / c.norm();
            for p in &mut self.num {
                *p = p.scale(s);
            }
        }
    }
}

/// Square matrix of numerators over a common scalar denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMat {
    pub num: Vec<Vec<MPoly>>,
    pub den: MPoly,
}

impl RationalMat {
    pub fn new(num: Vec<Vec<MPoly>>, den: MPoly) -> Result<Self> {
        let n = num.len();
        if num.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rational matrix must be square".into()));
        }
        Ok(RationalMat { num, den })
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn zeros(dim: usize) -> Self {
        RationalMat { num: vec![vec![MPoly::zero(2); dim]; dim], den: MPoly::one(2) }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.num[i][i] = MPoly::one(2);
        }
        m
    }

    /// `a b†` over the denominator `den`.
    pub fn outer(a: &[MPoly], b: &[MPoly], den: MPoly) -> Self {
        let num = a.iter().map(|x| b.iter().map(|y| x * &y.conj()).collect()).collect();
        RationalMat { num, den }
    }

    pub fn entry(&self, i: usize, j: usize) -> RationalScalar {
        RationalScalar { num: self.num[i][j].clone(), den: self.den.clone() }
    }

    fn map_num(&self, f: impl Fn(&MPoly) -> MPoly) -> Vec<Vec<MPoly>> {
        self.num.iter().map(|r| r.iter().map(&f).collect()).collect()
    }

    pub fn d(&self, var: usize) -> Self {
        let dd = self.den.d(var);
        let num = self.map_num(|p| &(&p.d(var) * &self.den) - &(p * &dd));
        RationalMat { num, den: &self.den * &self.den }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        RationalMat { num: self.map_num(|p| p.scale(c)), den: self.den.clone() }
    }

    pub fn add(&self, o: &RationalMat) -> Self {
        assert_eq!(self.dim(), o.dim());
        if equal_dens(&self.den, &o.den) {
            let num = (0..self.dim())
                .map(|i| (0..self.dim()).map(|j| &self.num[i][j] + &o.num[i][j]).collect())
                .collect();
            return RationalMat { num, den: self.den.clone() };
        }
        let num = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| &(&self.num[i][j] * &o.den) + &(&o.num[i][j] * &self.den))
                    .collect()
            })
            .collect();
        RationalMat { num, den: &self.den * &o.den }
    }

    pub fn sub(&self, o: &RationalMat) -> Self {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mat_mul(&self, o: &RationalMat) -> Self {
        let n = self.dim();
        assert_eq!(n, o.dim());
        let num = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = MPoly::zero(2);
                        for k in 0..n {
                            if !self.num[i][k].is_zero() && !o.num[k][j].is_zero() {
                                acc = &acc + &(&self.num[i][k] * &o.num[k][j]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        RationalMat { num, den: &self.den * &o.den }
    }

    pub fn commutator(&self, o: &RationalMat) -> Self {
        self.mat_mul(o).sub(&o.mat_mul(self))
    }

    pub fn trace(&self) -> RationalScalar {
        let mut acc = MPoly::zero(2);
        for i in 0..self.dim() {
            acc = &acc + &self.num[i][i];
        }
        RationalScalar { num: acc, den: self.den.clone() }
    }

    /// Divides every entry by a rational scalar.
    pub fn div_scalar(&self, s: &RationalScalar) -> Result<Self> {
        if s.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if equal_dens(&self.den, &s.den) {
            return Ok(RationalMat { num: self.num.clone(), den: s.num.clone() });
        }
        Ok(RationalMat { num: self.map_num(|p| p * &s.den), den: &self.den * &s.num })
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.dim();
        let num = (0..n).map(|i| (0..n).map(|j| self.num[j][i].conj()).collect()).collect();
        RationalMat { num, den: self.den.conj() }
    }

    pub fn eval(&self, z: Complex64) -> CMat {
        let n = self.dim();
        let d = self.den.eval(&[z]);
        CMat::from_fn(n, n, |i, j| self.num[i][j].eval(&[z]) / d)
    }

    pub fn canonical(&self) -> Self {
        let n = self.dim();
        let mut flat: Vec<MPoly> = self.num.iter().flatten().cloned().collect();
        let mut den = self.den.clone();
        canonicalize_parts(&mut flat, &mut den);
        let num = flat.chunks(n).map(|c| c.to_vec()).collect();
        RationalMat { num, den }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.num.iter().flatten().map(|p| p.max_abs_coeff()).fold(0.0, f64::max)
    }

    /// Pointwise agreement at every sample point.
    pub fn max_pointwise_diff(&self, o: &RationalMat, points: &[Complex64]) -> f64 {
        points.iter().map(|&z| mat_norm(&(self.eval(z) - o.eval(z)))).fold(0.0, f64::max)
    }
}

/// Exact first and mixed derivatives of a rational matrix.
///
/// Numerator and denominator are differentiated as polynomials; the quotient
/// rule is applied at evaluation time, which keeps degrees from compounding.
#[derive(Clone, Debug)]
pub struct Jet {
    pub p: RationalMat,
    n_d: Vec<Vec<MPoly>>,
    n_b: Vec<Vec<MPoly>>,
    n_db: Vec<Vec<MPoly>>,
    den_d: MPoly,
    den_b: MPoly,
    den_db: MPoly,
}

fn map_entries(m: &[Vec<MPoly>], f: impl Fn(&MPoly) -> MPoly) -> Vec<Vec<MPoly>> {
    m.iter().map(|r| r.iter().map(&f).collect()).collect()
}

fn eval_entries(m: &[Vec<MPoly>], z: Complex64) -> CMat {
    let n = m.len();
    CMat::from_fn(n, n, |i, j| m[i][j].eval(&[z]))
}

impl Jet {
    pub fn new(p: &RationalMat) -> Self {
        let n_d = map_entries(&p.num, |q| q.d(XI));
        let n_b = map_entries(&p.num, |q| q.d(XI_BAR));
        let n_db = map_entries(&n_d, |q| q.d(XI_BAR));
        let den_d = p.den.d(XI);
        let den_b = p.den.d(XI_BAR);
        let den_db = den_d.d(XI_BAR);
        Jet { p: p.clone(), n_d, n_b, n_db, den_d, den_b, den_db }
    }

    /// Symbolic `∂P`, canonicalized.
    pub fn dp(&self) -> RationalMat {
        self.p.d(XI).canonical()
    }

    /// Symbolic `∂̄P`, canonicalized.
    pub fn dbp(&self) -> RationalMat {
        self.p.d(XI_BAR).canonical()
    }

    pub fn at(&self, z: Complex64) -> JetAt {
        let d = self.p.den.eval(&[z]);
        let (dd, db, ddb) = (self.den_d.eval(&[z]), self.den_b.eval(&[z]), self.den_db.eval(&[z]));
        let n = eval_entries(&self.p.num, z);
        let nd = eval_entries(&self.n_d, z);
        let nb = eval_entries(&self.n_b, z);
        let ndb = eval_entries(&self.n_db, z);
        let inv = Complex64::new(1.0, 0.0) / d;
        let p = &n * inv;
        let dp = (&nd - &p * dd) * inv;
        let dbp = (&nb - &p * db) * inv;
        let ddbp = (&ndb - &dp * db - &dbp * dd - &p * ddb) * inv;
        JetAt { p, dp, dbp, ddbp }
    }
}

/// Numeric values of a [`Jet`] at one point.
#[derive(Clone, Debug)]
pub struct JetAt {
    pub p: CMat,
    pub dp: CMat,
    pub dbp: CMat,
    pub ddbp: CMat,
}
