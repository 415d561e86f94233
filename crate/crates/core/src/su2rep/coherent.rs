use num_complex::Complex64;

use super::{rep_matrix, symbolic_rep_matrix, GroupElement, Spin, SpinLabel};
use crate::error::Result;
use crate::polyring::{MPoly, XI, XI_BAR};
use crate::rational::{CMat, FieldVec, RationalMat};
use crate::sigma::project;

/// Column `m` of the matrix elements with `u = 1`, `v = ζ`, components `k = j … −j`.
///
/// `m = j` gives the holomorphic Veronese curve; lower weights give the mixed
/// members of its ladder.
pub fn coherent_field(label: SpinLabel) -> FieldVec {
    let j = label.j;
    let sym = symbolic_rep_matrix(j);
    let col = j.index_of(label.m2);
    let images = [MPoly::one(2), MPoly::one(2), MPoly::var(2, XI), MPoly::var(2, XI_BAR)];
    let num = (0..j.dim()).map(|k| sym[k][col].compose(&images)).collect();
    FieldVec::new(num).projective_canonical()
}

pub fn coherent_projector(label: SpinLabel) -> Result<RationalMat> {
    project(&coherent_field(label))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Raise,
    Lower,
}

/// Weight shift `|j, m⟩ ↦ |j, m ± 1⟩` in the highest-first basis.
pub fn shift_matrix(j: Spin, dir: Shift) -> CMat {
    let n = j.dim();
    let mut s = CMat::zeros(n, n);
    for p in 1..n {
        match dir {
            Shift::Raise => s[(p - 1, p)] = Complex64::new(1.0, 0.0),
            Shift::Lower => s[(p, p - 1)] = Complex64::new(1.0, 0.0),
        }
    }
    s
}

/// `T(g) Π± T(g)*`.
pub fn conjugated_shift(j: Spin, dir: Shift, g: &GroupElement) -> CMat {
    let t = rep_matrix(j, g);
    &t * shift_matrix(j, dir) * t.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::mat_norm;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ratio_check(f: &FieldVec, expected: impl Fn(Complex64) -> Vec<Complex64>) {
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-1.1, 0.7), Complex64::new(0.5, -2.0)] {
            let v = f.eval(z);
            let e = expected(z);
            let (i, _) = e.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
            let r = v[i] / e[i];
            for k in 0..e.len() {
                assert!((v[k] - r * e[k]).norm() < 1e-12 * (1.0 + v[k].norm()), "component {k}");
            }
        }
    }

    #[test]
    fn spin_one_fields() {
        let j = Spin::from_twice(2);
        let s2 = 2f64.sqrt();
        let top = coherent_field(SpinLabel::new(j, 2).unwrap());
        ratio_check(&top, |z| vec![c(1.0), s2 * z, z * z]);
        let mid = coherent_field(SpinLabel::new(j, 0).unwrap());
        ratio_check(&mid, |z| vec![-s2 * z.conj(), c(1.0 - z.norm_sqr()), s2 * z]);
    }

    #[test]
    fn spin_three_halves_mixed_field() {
        let f = coherent_field(SpinLabel::new(Spin::from_twice(3), 1).unwrap());
        let s3 = 3f64.sqrt();
        ratio_check(&f, |z| {
            let r = z.norm_sqr();
            vec![c(3.0 * r), s3 * z * (2.0 * r - 1.0), s3 * z * z * (r - 2.0), -3.0 * z * z * z]
        });
    }

    #[test]
    fn spin_one_conjugated_shift() {
        let g = GroupElement::from_euler(0.7, 1.9, -0.4);
        let (u, v) = (g.u, g.v);
        let s2 = 2f64.sqrt();
        let z = Complex64::new(0.0, 0.0);
        let expected = CMat::from_row_slice(3, 3, &[-s2 * u * v, u * u, z, -v * v, z, u * u, z, -v * v, s2 * u * v]);
        let got = conjugated_shift(Spin::from_twice(2), Shift::Raise, &g);
        assert!(mat_norm(&(got - expected)) < 1e-14);
    }

    #[test]
    fn shift_moves_states_along_orbit() {
        let j = Spin::from_twice(2);
        let g = GroupElement::from_euler(1.2, 0.3, 2.2);
        let t = rep_matrix(j, &g);
        let lifted = conjugated_shift(j, Shift::Raise, &g) * t.column(1);
        assert!((lifted - t.column(0)).norm() < 1e-14);
        let top = shift_matrix(j, Shift::Raise) * CMat::identity(3, 3).column(0);
        assert!(top.norm() == 0.0);
    }
}
