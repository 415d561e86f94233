//! Curvature, mean-curvature norm and integral invariants of the surfaces.
//!
//! Integrals are over the plane with Lebesgue measure `dξ¹dξ²`, in polar
//! coordinates with Gauss–Legendre nodes in `s = r²/(a + r²)` and the
//! trapezoid rule in angle.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{MPoly, XI, XI_BAR};
use crate::rational::{sample_points, Jet, RationalMat};
use crate::sigma::{metric_density, ProjectorSeq};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial: usize,
    pub angular: usize,
    /// `a` in `r² = a s/(1 − s)`.
    pub scale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { radial: 160, angular: 128, scale: 1.0 }
    }
}

impl QuadratureSpec {
    pub fn new(radial: usize, angular: usize) -> Result<Self> {
        let q = QuadratureSpec { radial, angular, scale: 1.0 };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial < 8 || self.angular < 8 {
            return Err(Error::Invalid("quadrature needs at least 8 nodes per direction".into()));
        }
        if !(self.scale > 0.0) {
            return Err(Error::Invalid("radial map parameter must be positive".into()));
        }
        Ok(())
    }

    pub fn halved(&self) -> Self {
        QuadratureSpec { radial: self.radial / 2, angular: self.angular / 2, scale: self.scale }
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec { radial: self.radial * 2, angular: self.angular * 2, scale: self.scale }
    }

    /// Radial nodes as `(r, weight)` with the angular step folded in later.
    fn radial_nodes(&self) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(self.radial).expect("at least two nodes");
        gl.as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| {
                let s = 0.5 * (x + 1.0);
                let ws = 0.5 * w;
                let a = self.scale;
                let r2 = a * s / (1.0 - s);
                (r2.sqrt(), ws * 0.5 * a / ((1.0 - s) * (1.0 - s)))
            })
            .collect()
    }
}

/// Quadrature value with the full-minus-half-rule error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Integrates several densities at once, returning one value per density.
pub fn integrate_many<F>(spec: &QuadratureSpec, count: usize, f: F) -> Vec<f64>
where
    F: Fn(Complex64) -> Vec<f64> + Sync,
{
    let radial = spec.radial_nodes();
    let m = spec.angular;
    let dth = 2.0 * PI / m as f64;
    radial
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = vec![0.0; count];
            for i in 0..m {
                let z = Complex64::from_polar(r, dth * i as f64);
                for (a, v) in acc.iter_mut().zip(f(z)) {
                    *a += v;
                }
            }
            acc.iter().map(|a| a * wr * dth).collect::<Vec<_>>()
        })
        .reduce(|| vec![0.0; count], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

pub fn integrate_with_error<F>(spec: &QuadratureSpec, count: usize, f: F) -> Vec<Integral>
where
    F: Fn(Complex64) -> Vec<f64> + Sync,
{
    let full = integrate_many(spec, count, &f);
    let half = integrate_many(&spec.halved(), count, &f);
    full.iter().zip(&half).map(|(&v, &h)| Integral { value: v, error: (v - h).abs() }).collect()
}

/// `(p ∂∂̄p − ∂p ∂̄p)/p²`, i.e. `∂∂̄ ln p`, from exact polynomial derivatives.
struct LogLaplacian {
    p: MPoly,
    dp: MPoly,
    dbp: MPoly,
    ddbp: MPoly,
}

impl LogLaplacian {
    fn new(p: &MPoly) -> Self {
        let dp = p.d(XI);
        let dbp = p.d(XI_BAR);
        let ddbp = dp.d(XI_BAR);
        LogLaplacian { p: p.clone(), dp, dbp, ddbp }
    }

    fn at(&self, z: Complex64) -> f64 {
        let p = self.p.eval(&[z]);
        ((p * self.ddbp.eval(&[z]) - self.dp.eval(&[z]) * self.dbp.eval(&[z])) / (p * p)).re
    }
}

/// Pointwise densities of one surface.
pub struct SurfaceGeometry {
    jet: Jet,
    g_num: MPoly,
    g_den: MPoly,
    lap_num: LogLaplacian,
    lap_den: LogLaplacian,
}

/// Pointwise values of every density at one point.
#[derive(Clone, Copy, Debug)]
pub struct Densities {
    /// `tr(∂P ∂̄P)`.
    pub metric: f64,
    /// `∂∂̄ ln tr(∂P ∂̄P)`.
    pub log_laplacian: f64,
    pub gaussian_k: f64,
    pub mean_norm: f64,
    /// `tr([∂P, ∂̄P]²)`.
    pub willmore: f64,
    /// `tr(P [∂P, ∂̄P])`.
    pub charge: f64,
}

impl SurfaceGeometry {
    pub fn new(p: &RationalMat) -> Self {
        let jet = Jet::new(p);
        let g = metric_density(&jet);
        SurfaceGeometry {
            lap_num: LogLaplacian::new(&g.num),
            lap_den: LogLaplacian::new(&g.den),
            g_num: g.num,
            g_den: g.den,
            jet,
        }
    }

    pub fn metric(&self, z: Complex64) -> f64 {
        (self.g_num.eval(&[z]) / self.g_den.eval(&[z])).re
    }

    pub fn at(&self, z: Complex64) -> Densities {
        let v = self.jet.at(z);
        let g = self.metric(z);
        let lap = self.lap_num.at(z) - self.lap_den.at(z);
        let c = &v.dp * &v.dbp - &v.dbp * &v.dp;
        let c2 = (&c * &c).trace().re;
        let charge = (&v.p * &c).trace().re;
        Densities {
            metric: g,
            log_laplacian: lap,
            gaussian_k: -2.0 * lap / g,
            mean_norm: (8.0 * c2).max(0.0).sqrt() / g,
            willmore: c2,
            charge,
        }
    }
}

/// `K = −2 ∂∂̄ ln tr(∂P∂̄P) / tr(∂P∂̄P)`.
pub fn gaussian_k(p: &RationalMat, z: Complex64) -> Result<f64> {
    let s = SurfaceGeometry::new(p);
    if s.metric(z).abs() < 1e-300 {
        return Err(Error::Invalid("degenerate metric".into()));
    }
    Ok(s.at(z).gaussian_k)
}

/// `‖H‖` with `H = −4i[∂P, ∂̄P]/tr(∂P∂̄P)` and `(A, B) = −½ tr(AB)`.
pub fn mean_norm(p: &RationalMat, z: Complex64) -> Result<f64> {
    let s = SurfaceGeometry::new(p);
    if s.metric(z).abs() < 1e-300 {
        return Err(Error::Invalid("degenerate metric".into()));
    }
    Ok(s.at(z).mean_norm)
}

/// Integral invariants of one surface.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Integrals {
    /// `∫ tr([∂P, ∂̄P]²)`.
    pub willmore: Integral,
    /// `(−2/π) ∫ tr(P[∂P, ∂̄P])`.
    pub charge: Integral,
    /// `(−2/π) ∫ ∂∂̄ ln tr(∂P∂̄P)`.
    pub euler: Integral,
    /// `∫ tr(∂P∂̄P)`.
    pub area: Integral,
    /// `(1/2π) ∫ K tr(∂P∂̄P)`.
    pub gauss_bonnet: Integral,
}

pub fn surface_integrals(s: &SurfaceGeometry, spec: &QuadratureSpec) -> Integrals {
    let v = integrate_with_error(spec, 5, |z| {
        let d = s.at(z);
        vec![d.willmore, d.charge, d.log_laplacian, d.metric, d.gaussian_k * d.metric]
    });
    let sc = |i: Integral, f: f64| Integral { value: i.value * f, error: i.error * f.abs() };
    Integrals {
        willmore: v[0],
        charge: sc(v[1], -2.0 / PI),
        euler: sc(v[2], -2.0 / PI),
        area: v[3],
        gauss_bonnet: sc(v[4], 1.0 / (2.0 * PI)),
    }
}

pub fn willmore(p: &RationalMat, spec: &QuadratureSpec) -> Integral {
    surface_integrals(&SurfaceGeometry::new(p), spec).willmore
}

pub fn top_charge(p: &RationalMat, spec: &QuadratureSpec) -> Integral {
    surface_integrals(&SurfaceGeometry::new(p), spec).charge
}

pub fn euler_char(p: &RationalMat, spec: &QuadratureSpec) -> Integral {
    surface_integrals(&SurfaceGeometry::new(p), spec).euler
}

fn spread(v: &[f64]) -> f64 {
    let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
    hi - lo
}

/// Invariants of the surface attached to `P_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub k: usize,
    pub curvature_samples: Vec<f64>,
    pub curvature: f64,
    pub curvature_spread: f64,
    pub mean_norm_samples: Vec<f64>,
    pub mean_norm: f64,
    pub mean_norm_spread: f64,
    pub integrals: Integrals,
}

pub fn surface_invariants(k: usize, p: &RationalMat, spec: &QuadratureSpec) -> SurfaceInvariants {
    let s = SurfaceGeometry::new(p);
    let pts = sample_points();
    let ds: Vec<Densities> = pts.iter().map(|&z| s.at(z)).collect();
    let ks: Vec<f64> = ds.iter().map(|d| d.gaussian_k).collect();
    let hs: Vec<f64> = ds.iter().map(|d| d.mean_norm).collect();
    SurfaceInvariants {
        k,
        curvature: ks.iter().sum::<f64>() / ks.len() as f64,
        curvature_spread: spread(&ks),
        mean_norm: hs.iter().sum::<f64>() / hs.len() as f64,
        mean_norm_spread: spread(&hs),
        curvature_samples: ks,
        mean_norm_samples: hs,
        integrals: surface_integrals(&s, spec),
    }
}

pub fn sequence_invariants(seq: &ProjectorSeq, spec: &QuadratureSpec) -> Vec<SurfaceInvariants> {
    seq.projectors.iter().enumerate().map(|(k, p)| surface_invariants(k, p, spec)).collect()
}

/// Expected values `(K, ‖H‖, W, Q, Δ)` for one surface.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub curvature: f64,
    pub mean_norm: f64,
    pub willmore: f64,
    pub charge: f64,
    pub euler: f64,
}

/// Reference values for the Veronese surfaces of CP² and CP³, ordered `k = 0 … N`.
pub fn reference_values(n: usize) -> Option<Vec<ReferenceRow>> {
    let row = |curvature, mean_norm, willmore, charge, euler| ReferenceRow { curvature, mean_norm, willmore, charge, euler };
    let mixed = 4.0 * 13f64.sqrt() / 7.0;
    match n {
        2 => Some(vec![
            row(2.0, 4.0, 4.0 * PI, 2.0, 2.0),
            row(1.0, 2.0, 2.0 * PI, 1.0, 2.0),
            row(2.0, 4.0, 4.0 * PI, -2.0, 2.0),
        ]),
        3 => Some(vec![
            row(4.0 / 3.0, 4.0, 4.5 * PI, 6.0, 4.0),
            row(mixed, mixed, 6.5 * PI, 2.0, 4.0),
            row(mixed, mixed, 6.5 * PI, -2.0, 4.0),
            row(4.0 / 3.0, 4.0, 4.5 * PI, -6.0, 4.0),
        ]),
        _ => None,
    }
}
