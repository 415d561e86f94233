//! SU(2) irreducible representations on binary forms and the coherent-state
//! fields they generate.
//!
//! Spins and weights are stored as twice their value. Vectors and matrices
//! indexed by weight run from `k = j` down to `k = −j`.

mod coherent;
mod group;
mod jacobi;
mod matrix;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use coherent::{coherent_field, coherent_projector, conjugated_shift, shift_matrix, Shift};
pub use group::{hopf, stereo, stereo_inv, EulerAngles, GroupElement};
pub use jacobi::{jacobi_poly, reduced_element_jacobi, uni_eval, UniPoly};
pub use matrix::{
    fischer_inner, harmonic_residual, rep_matrix, split_factor, symbolic_rep_matrix, weight_vector,
};

pub(crate) fn factorial(n: i64) -> f64 {
    assert!(n >= 0, "factorial of a negative number");
    (1..=n).map(|k| k as f64).product()
}

/// A spin `j`, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spin {
    pub twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Twice-weights `2j, 2j−2, …, −2j`.
    pub fn weights(&self) -> impl Iterator<Item = i32> {
        let j = self.twice as i32;
        (0..=self.twice as i32).map(move |p| j - 2 * p)
    }

    /// Position of twice-weight `m2` in the highest-first ordering.
    pub fn index_of(&self, m2: i32) -> usize {
        assert!(self.contains(m2), "weight {m2}/2 outside spin {}", self);
        ((self.twice as i32 - m2) / 2) as usize
    }

    pub fn weight_at(&self, index: usize) -> i32 {
        self.twice as i32 - 2 * index as i32
    }

    pub fn contains(&self, m2: i32) -> bool {
        m2.abs() <= self.twice as i32 && (self.twice as i32 - m2) % 2 == 0
    }
}

/// Formats a twice-value as an integer or a half-integer fraction.
pub fn half_label(twice: i32) -> String {
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{twice}/2")
    }
}

/// Parses `"3/2"`, `"1.5"` or `"1"` into a twice-value.
pub fn parse_half(s: &str) -> Result<i32, Error> {
    let s = s.trim();
    let bad = || Error::InvalidSpin(s.to_string());
    if let Some((a, b)) = s.split_once('/') {
        let a: i32 = a.trim().parse().map_err(|_| bad())?;
        return match b.trim() {
            "2" => Ok(a),
            "1" => Ok(2 * a),
            _ => Err(bad()),
        };
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    let t = 2.0 * x;
    if (t - t.round()).abs() > 1e-12 {
        return Err(bad());
    }
    Ok(t.round() as i32)
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", half_label(self.twice as i32))
    }
}

impl FromStr for Spin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = parse_half(s)?;
        if t < 0 {
            return Err(Error::InvalidSpin(s.to_string()));
        }
        Ok(Spin { twice: t as u32 })
    }
}

/// A weight `m` of spin `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinLabel {
    pub j: Spin,
    pub m2: i32,
}

impl SpinLabel {
    pub fn new(j: Spin, m2: i32) -> Result<Self, Error> {
        if !j.contains(m2) {
            return Err(Error::InvalidSpin(format!("m = {} is not a weight of j = {}", half_label(m2), j)));
        }
        Ok(SpinLabel { j, m2 })
    }

    /// `j + m` and `j − m`.
    pub fn exponents(&self) -> (u32, u32) {
        let j = self.j.twice as i32;
        (((j + self.m2) / 2) as u32, ((j - self.m2) / 2) as u32)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}, {}⟩", self.j, half_label(self.m2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_half_integers() {
        assert_eq!("3/2".parse::<Spin>().unwrap().twice, 3);
        assert_eq!("1.5".parse::<Spin>().unwrap().twice, 3);
        assert_eq!("2".parse::<Spin>().unwrap().twice, 4);
        assert!("0.3".parse::<Spin>().is_err());
        assert_eq!(parse_half("-1/2").unwrap(), -1);
    }

    #[test]
    fn labels_validate_parity() {
        let j = Spin::from_twice(3);
        assert!(SpinLabel::new(j, 1).is_ok());
        assert!(SpinLabel::new(j, 0).is_err());
        assert!(SpinLabel::new(j, 5).is_err());
        assert_eq!(j.weights().collect::<Vec<_>>(), vec![3, 1, -1, -3]);
        assert_eq!(j.index_of(-1), 2);
    }
}
