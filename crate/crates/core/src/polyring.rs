//! Sparse polynomials with complex coefficients in conjugate variable pairs.
//!
//! Arity 2 is the pair `(ξ, ξ̄)`, arity 4 is `(u, ū, v, v̄)`. Each variable and
//! its partner are independent formal symbols; [`MPoly::conj`] swaps them and
//! conjugates coefficients. Evaluation at a point of the complex plane
//! substitutes the partner with the complex conjugate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector. Only the first `arity` slots are used.
pub type Exps = [u16; 4];

pub const XI: usize = 0;
pub const XI_BAR: usize = 1;
pub const U: usize = 0;
pub const U_BAR: usize = 1;
pub const V: usize = 2;
pub const V_BAR: usize = 3;

/// Coefficients below this magnitude are dropped.
pub const PRUNE_ABS: f64 = 1e-13;
/// Round-off debris relative to the largest coefficient is dropped as well.
const PRUNE_REL: f64 = 1e-15;

#[derive(Clone, PartialEq, Default)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Exps, Complex64>,
}

fn check_arity(arity: usize) {
    assert!(arity == 2 || arity == 4, "polynomial arity must be 2 or 4, got {arity}");
}

fn shift(a: &Exps, b: &Exps) -> Exps {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn divides(d: &Exps, e: &Exps) -> bool {
    (0..4).all(|i| d[i] <= e[i])
}

fn sub_exps(e: &Exps, d: &Exps) -> Exps {
    [e[0] - d[0], e[1] - d[1], e[2] - d[2], e[3] - d[3]]
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        check_arity(arity);
        MPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Complex64) -> Self {
        Self::monomial(arity, [0; 4], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Complex64::new(1.0, 0.0))
    }

    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable {index} out of range for arity {arity}");
        let mut e = [0; 4];
        e[index] = 1;
        Self::monomial(arity, e, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(arity: usize, exps: Exps, c: Complex64) -> Self {
        check_arity(arity);
        assert!(exps[arity..].iter().all(|&e| e == 0), "exponent beyond arity");
        let mut terms = BTreeMap::new();
        if c.norm() >= PRUNE_ABS {
            terms.insert(exps, c);
        }
        MPoly { arity, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exps, Complex64)>,
    {
        check_arity(arity);
        let mut map: BTreeMap<Exps, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            assert!(e[arity..].iter().all(|&x| x == 0), "exponent beyond arity");
            *map.entry(e).or_default() += c;
        }
        let mut p = MPoly { arity, terms: map };
        p.prune();
        p
    }

    /// `1 + ξξ̄`.
    pub fn one_plus_r(arity: usize) -> Self {
        assert_eq!(arity, 2);
        Self::from_terms(2, [([0; 4], c1()), ([1, 1, 0, 0], c1())])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &Exps) -> Complex64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(Exps, Complex64)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }

    /// Lexicographically smallest term.
    pub fn trailing_term(&self) -> Option<(Exps, Complex64)> {
        self.terms.iter().next().map(|(e, c)| (*e, *c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Exponentwise minimum over all terms, the largest monomial dividing `self`.
    pub fn monomial_gcd(&self) -> Exps {
        let mut g = [u16::MAX; 4];
        for e in self.terms.keys() {
            for i in 0..4 {
                g[i] = g[i].min(e[i]);
            }
        }
        if self.terms.is_empty() {
            [0; 4]
        } else {
            g
        }
    }

    /// Divides by the monomial `x^d`, which must divide every term.
    pub fn div_monomial(&self, d: &Exps) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                assert!(divides(d, e), "monomial does not divide term");
                (sub_exps(e, d), *c)
            })
            .collect();
        MPoly { arity: self.arity, terms }
    }

    pub fn mul_monomial(&self, d: &Exps) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (shift(e, d), *c)).collect();
        MPoly { arity: self.arity, terms }
    }

    fn prune(&mut self) {
        let thresh = PRUNE_ABS.max(PRUNE_REL * self.max_abs_coeff());
        self.terms.retain(|_, c| c.norm() >= thresh);
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut p = MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        };
        p.prune();
        p
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MPoly::one(self.arity);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `var`.
    pub fn d(&self, var: usize) -> Self {
        assert!(var < self.arity);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = *e;
                ne[var] -= 1;
                terms.insert(ne, c * e[var] as f64);
            }
        }
        MPoly { arity: self.arity, terms }
    }

    /// Complex-conjugation involution: swaps each variable with its partner
    /// and conjugates every coefficient.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = [0; 4];
                for i in (0..self.arity).step_by(2) {
                    ne[i] = e[i + 1];
                    ne[i + 1] = e[i];
                }
                (ne, c.conj())
            })
            .collect();
        MPoly { arity: self.arity, terms }
    }

    /// Evaluates with every variable given an independent value.
    pub fn eval_formal(&self, vals: &[Complex64]) -> Complex64 {
        assert_eq!(vals.len(), self.arity);
        let maxdeg: Vec<u16> = (0..self.arity).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<Complex64>> = (0..self.arity)
            .map(|i| {
                let mut v = Vec::with_capacity(maxdeg[i] as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=maxdeg[i] {
                    v.push(acc);
                    acc *= vals[i];
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for i in 0..self.arity {
                    t *= powers[i][e[i] as usize];
                }
                t
            })
            .sum()
    }

    /// Evaluates at a point: `[ξ]` for arity 2, `[u, v]` for arity 4.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len() * 2, self.arity);
        let vals: Vec<Complex64> = point.iter().flat_map(|z| [*z, z.conj()]).collect();
        self.eval_formal(&vals)
    }

    /// Substitutes variable `i` by `images[i]`; all images share one arity.
    pub fn compose(&self, images: &[MPoly]) -> Self {
        assert_eq!(images.len(), self.arity);
        let out = images[0].arity;
        let mut acc = MPoly::zero(out);
        let mut cache: HashMap<(usize, u16), MPoly> = HashMap::new();
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(out, *c);
            for i in 0..self.arity {
                if e[i] > 0 {
                    let p = cache.entry((i, e[i])).or_insert_with(|| images[i].pow(e[i] as u32));
                    t = &t * p;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Largest coefficient difference, an exact-match measure.
    pub fn max_diff(&self, other: &MPoly) -> f64 {
        (self - other).max_abs_coeff()
    }

    /// Multivariate division by lexicographic leading-term elimination.
    ///
    /// Succeeds when the remainder has no coefficient above `tol`.
    pub fn exact_div(&self, q: &MPoly, tol: f64) -> Result<MPoly> {
        assert_eq!(self.arity, q.arity, "arity mismatch in division");
        let (lq_e, lq_c) = q.leading_term().ok_or(Error::DivisionByZero)?;
        if self.is_zero() {
            return Ok(MPoly::zero(self.arity));
        }
        for v in 0..self.arity {
            if q.degree_in(v) > self.degree_in(v) {
                return Err(Error::NotDivisible { remainder: self.max_abs_coeff() });
            }
        }
        let scale = self.max_abs_coeff();
        let drop = PRUNE_ABS.max(1e-13 * scale);
        let mut p = self.terms.clone();
        let mut quot: BTreeMap<Exps, Complex64> = BTreeMap::new();
        let mut rem = 0.0f64;
        while let Some((e, c)) = p.pop_last() {
            if c.norm() < drop {
                continue;
            }
            if !divides(&lq_e, &e) {
                rem = rem.max(c.norm());
                if rem > tol {
                    return Err(Error::NotDivisible { remainder: rem });
                }
                continue;
            }
            let te = sub_exps(&e, &lq_e);
            let tc = c / lq_c;
            *quot.entry(te).or_default() += tc;
            for (qe, qc) in q.terms.iter().rev().skip(1) {
                let k = shift(qe, &te);
                let entry = p.entry(k).or_default();
                *entry -= tc * qc;
                if entry.norm() < drop {
                    p.remove(&k);
                }
            }
        }
        let mut out = MPoly { arity: self.arity, terms: quot };
        out.prune();
        Ok(out)
    }

    /// Divides by `q` as often as it goes evenly, returning the quotient and the count.
    pub fn strip_factor(&self, q: &MPoly, rel_tol: f64) -> (MPoly, u32) {
        let mut cur = self.clone();
        let mut n = 0;
        while !cur.is_zero() {
            match cur.exact_div(q, rel_tol * cur.max_abs_coeff()) {
                Ok(next) => {
                    cur = next;
                    n += 1;
                }
                Err(_) => break,
            }
        }
        (cur, n)
    }

    pub fn approx_eq(&self, other: &MPoly, tol: f64) -> bool {
        self.arity == other.arity && self.max_diff(other) <= tol
    }
}

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn add_into(acc: &mut BTreeMap<Exps, Complex64>, other: &MPoly, sign: f64) {
    for (e, c) in &other.terms {
        *acc.entry(*e).or_default() += c * sign;
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut terms = self.terms.clone();
        add_into(&mut terms, rhs, 1.0);
        let mut p = MPoly { arity: self.arity, terms };
        p.prune();
        p
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut terms = self.terms.clone();
        add_into(&mut terms, rhs, -1.0);
        let mut p = MPoly { arity: self.arity, terms };
        p.prune();
        p
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut acc: HashMap<Exps, Complex64> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                *acc.entry(shift(ea, eb)).or_default() += ca * cb;
            }
        }
        let mut p = MPoly { arity: self.arity, terms: acc.into_iter().collect() };
        p.prune();
        p
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly { (&self).$f(&rhs) }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly { (&self).$f(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

const NAMES2: [&str; 2] = ["ξ", "ξ̄"];
const NAMES4: [&str; 4] = ["u", "ū", "v", "v̄"];

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: &[&str] = if self.arity == 2 { &NAMES2 } else { &NAMES4 };
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for i in 0..self.arity {
                match e[i] {
                    0 => {}
                    1 => write!(f, "·{}", names[i])?,
                    k => write!(f, "·{}^{}", names[i], k)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: Vec<u16>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    arity: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { exps: e[..self.arity].to_vec(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PolyRepr::deserialize(d)?;
        if r.arity != 2 && r.arity != 4 {
            return Err(D::Error::custom(format!("arity must be 2 or 4, got {}", r.arity)));
        }
        let mut terms = BTreeMap::new();
        for t in r.terms {
            if t.exps.len() != r.arity {
                return Err(D::Error::custom("exponent vector length differs from arity"));
            }
            let mut e = [0u16; 4];
            e[..r.arity].copy_from_slice(&t.exps);
            if terms.insert(e, Complex64::new(t.re, t.im)).is_some() {
                return Err(D::Error::custom("repeated exponent vector"));
            }
        }
        Ok(MPoly { arity: r.arity, terms })
    }
}
