#![allow(dead_code)]

use cpn_sigma::immersion::{alt_sum_residual, build_x, min_poly_residual, shift_residual};
use cpn_sigma::polyring::XI;
use cpn_sigma::sigma::{completeness_residual, conservation_residual, el_residual, orthogonality_residual};
use cpn_sigma::{FieldVec, MPoly, ProjectorSeq};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5EED_C0DE;

/// Holomorphic field in CP^n with components of degree at most `deg` and
/// Gaussian-integer coefficients in `[-3, 3] + i[-3, 3]`.
pub fn random_field(rng: &mut ChaCha8Rng, n: usize, deg: u16) -> FieldVec {
    let comps = (0..=n)
        .map(|_| {
            let terms = (0..=deg).map(|d| {
                let c = Complex64::new(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
                ([d, 0, 0, 0], c)
            });
            MPoly::from_terms(2, terms)
        })
        .collect();
    FieldVec::new(comps)
}

/// Largest residual of each algebraic identity over the ladder.
#[derive(Debug, Default, Clone, Copy)]
pub struct Identities {
    pub euler_lagrange: f64,
    pub conservation: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub min_poly: f64,
    pub alt_sum: f64,
    pub shift: f64,
}

impl Identities {
    pub fn max(&self) -> f64 {
        [
            self.euler_lagrange,
            self.conservation,
            self.orthogonality,
            self.completeness,
            self.min_poly,
            self.alt_sum,
            self.shift,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn identities(seq: &ProjectorSeq, pts: &[Complex64]) -> Identities {
    let jets = seq.jets();
    let mut out = Identities::default();
    for (k, jet) in jets.iter().enumerate() {
        out.euler_lagrange = out.euler_lagrange.max(el_residual(jet, pts));
        out.conservation = out.conservation.max(conservation_residual(jet, pts));
        out.min_poly = out.min_poly.max(min_poly_residual(&build_x(seq, k).unwrap(), pts));
    }
    out.orthogonality = orthogonality_residual(seq, pts);
    out.completeness = completeness_residual(seq, pts);
    out.alt_sum = alt_sum_residual(seq, pts);
    out.shift = shift_residual(seq, &jets, pts);
    out
}

pub fn is_constant(f: &FieldVec) -> bool {
    f.num.iter().all(|p| p.d(XI).is_zero())
}
