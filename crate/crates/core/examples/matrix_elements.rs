//! Representation matrices, their Jacobi-polynomial form and the split phase.

use std::f64::consts::PI;

use cpn_sigma::su2rep::{
    half_label, harmonic_residual, jacobi_poly, reduced_element_jacobi, rep_matrix, split_factor, GroupElement, Spin,
};

fn main() {
    let j = Spin::from_twice(3);
    let (theta, phi, psi) = (PI / 3.0, 0.8, -0.5);
    let full = rep_matrix(j, &GroupElement::from_euler(theta, phi, psi));
    println!("spin {j} at theta=pi/3, phi=0.8, psi=-0.5");
    for (ki, k2) in j.weights().enumerate() {
        for (mi, m2) in j.weights().enumerate() {
            let via = split_factor(k2, m2, phi, psi) * reduced_element_jacobi(j, k2, m2, theta);
            println!(
                "  t[{:>4},{:>4}] = {:>40.15}  jacobi route {:.1e}  laplacian {:.0e}",
                half_label(k2),
                half_label(m2),
                full[(ki, mi)],
                (via - full[(ki, mi)]).norm(),
                harmonic_residual(j, k2, m2)
            );
        }
    }
    println!("Jacobi polynomials, lowest power first");
    for (n, a, b) in [(1, 0, 0), (2, 1, -1), (1, 2, -1), (3, 0, 3)] {
        println!("  P_{n}^({a},{b}) = {:?}", jacobi_poly(n, a, b));
    }
}
