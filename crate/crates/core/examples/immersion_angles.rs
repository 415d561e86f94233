//! su(N+1) immersions of the ladder, their minimal polynomials and mutual angles.

use cpn_sigma::immersion::{angle_table, build_x, closed_form_angle, min_poly_residual, tabulated_cos};
use cpn_sigma::rational::sample_points;
use cpn_sigma::{ladder, veronese_field};
use num_complex::Complex64;

fn main() -> cpn_sigma::Result<()> {
    let pts = sample_points();
    for n in [2, 3] {
        let seq = ladder(&veronese_field(n), n)?;
        println!("CP{n}");
        for k in 0..=n {
            let x = build_x(&seq, k)?;
            let x0 = x.eval(Complex64::new(0.0, 0.0));
            let diag: Vec<String> = (0..=n).map(|i| format!("{:+.4}i", x0[(i, i)].im)).collect();
            println!("  X_{k}(0) diagonal {diag:?}  minimal polynomial {:.1e}", min_poly_residual(&x, &pts));
        }
        let a = angle_table(&seq, &pts);
        println!("  angle cosines, spread over points {:.1e}", a.spread);
        for k in 0..=n {
            let row: Vec<String> = (0..=n).map(|l| format!("{:.6}", a.cos[k][l])).collect();
            let closed: Vec<String> = (0..=n).map(|l| format!("{:.6}", closed_form_angle(n, k, l))).collect();
            println!("    {row:?}  closed form {closed:?}");
        }
        if let Some(t) = tabulated_cos(n) {
            println!("  tabulated {t:.6?}");
        }
    }
    Ok(())
}
