//! Jacobi polynomials from the Rodrigues formula, and the closed form of the
//! reduced matrix elements built on them.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{factorial, Spin};

/// Dense univariate polynomial, coefficients in ascending degree.
pub type UniPoly = Vec<f64>;

pub fn uni_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn uni_mul(a: &[f64], b: &[f64]) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn uni_add(a: &[f64], b: &[f64]) -> UniPoly {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn uni_scale(a: &[f64], s: f64) -> UniPoly {
    a.iter().map(|x| x * s).collect()
}

fn uni_deriv(a: &[f64]) -> UniPoly {
    a.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

fn trim(mut p: UniPoly) -> UniPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.abs() < 1e-14) {
        p.pop();
    }
    if p.is_empty() {
        p.push(0.0);
    }
    p.iter().map(|c| c + 0.0).collect()
}

/// `P_n^{(α,β)}(x) = (−1)^n / (2^n n!) (1−x)^{−α} (1+x)^{−β} dⁿ/dxⁿ[(1−x)^{α+n} (1+x)^{β+n}]`.
///
/// The bracket is carried as `(1−x)^a (1+x)^b q(x)`, which stays exact for
/// integer parameters of either sign.
pub fn jacobi_poly(n: u32, alpha: i32, beta: i32) -> UniPoly {
    let mut a = alpha + n as i32;
    let mut b = beta + n as i32;
    let mut q: UniPoly = vec![1.0];
    let one_plus = [1.0, 1.0];
    let one_minus = [1.0, -1.0];
    let one_minus_sq = [1.0, 0.0, -1.0];
    for _ in 0..n {
        let t1 = uni_scale(&uni_mul(&one_plus, &q), -(a as f64));
        let t2 = uni_scale(&uni_mul(&one_minus, &q), b as f64);
        let t3 = uni_mul(&one_minus_sq, &uni_deriv(&q));
        q = uni_add(&uni_add(&t1, &t2), &t3);
        a -= 1;
        b -= 1;
    }
    debug_assert_eq!((a, b), (alpha, beta));
    let s = if n % 2 == 0 { 1.0 } else { -1.0 } / (2f64.powi(n as i32) * factorial(n as i64));
    trim(uni_scale(&q, s))
}

/// `c · cos(θ/2)^{β} · sin(θ/2)^{α} · P_n^{(α,β)}(cos θ)` with `α = k−m`, `β = k+m`,
/// `n = j−k` and `c = i^{k−m} √((j+k)!(j−k)!/((j+m)!(j−m)!))`.
///
/// The endpoints `θ ∈ {0, π}` fall back to the polynomial route.
pub fn reduced_element_jacobi(j: Spin, k2: i32, m2: i32, theta: f64) -> Complex64 {
    let jj = j.twice as i32;
    let ends = theta.abs() < 1e-12 || (theta - PI).abs() < 1e-12;
    if ends {
        let g = super::GroupElement::from_euler(theta, 0.0, 0.0);
        let t = super::rep_matrix(j, &g);
        return t[(j.index_of(k2), j.index_of(m2))];
    }
    let alpha = (k2 - m2) / 2;
    let beta = (k2 + m2) / 2;
    let n = ((jj - k2) / 2) as u32;
    let fac = |x: i32| factorial(x as i64 / 2);
    let c = (fac(jj + k2) * fac(jj - k2) / (fac(jj + m2) * fac(jj - m2))).sqrt();
    let phase = Complex64::new(0.0, 1.0).powi(alpha);
    let (s, co) = (theta / 2.0).sin_cos();
    let p = jacobi_poly(n, alpha, beta);
    phase * c * co.powi(beta) * s.powi(alpha) * uni_eval(&p, theta.cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_legendre() {
        assert_eq!(jacobi_poly(1, 0, 0), vec![0.0, 1.0]);
    }

    #[test]
    fn negative_beta_parameter() {
        let p = jacobi_poly(2, 0, -2);
        for (a, b) in p.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn degree_zero_is_one() {
        for (a, b) in [(0, 0), (3, -2), (-1, 4)] {
            assert_eq!(jacobi_poly(0, a, b), vec![1.0]);
        }
    }

    #[test]
    fn matches_explicit_degree_two() {
        let (a, b) = (1.0, 2.0);
        let p = jacobi_poly(2, 1, 2);
        for x in [-0.7, 0.1, 0.9] {
            let explicit = (a + 1.0) * (a + 2.0) / 2.0
                + (a + 2.0) * (a + b + 3.0) * (x - 1.0) / 2.0
                + (a + b + 3.0) * (a + b + 4.0) / 8.0 * (x - 1.0) * (x - 1.0);
            assert!((uni_eval(&p, x) - explicit).abs() < 1e-13);
        }
    }
}
