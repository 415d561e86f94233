//! Harmonic ladder of the Veronese curve: fields, projectors and identity residuals.

use cpn_sigma::rational::{sample_points, Jet};
use cpn_sigma::sigma::{completeness_residual, el_residual, orthogonality_residual, projector_residual};
use cpn_sigma::{ladder, veronese_field};
use num_complex::Complex64;

fn main() -> cpn_sigma::Result<()> {
    let n = 3;
    let seq = ladder(&veronese_field(n), n)?;
    let pts = sample_points();
    let z = Complex64::new(0.4, -0.7);
    for (k, (f, p)) in seq.fields.iter().zip(&seq.projectors).enumerate() {
        println!("f_{k} = {:?}", f.num);
        let diag: Vec<String> = (0..=n).map(|i| format!("{:.6}", p.eval(z)[(i, i)].re)).collect();
        println!("  diag P_{k}({z}) = {diag:?}");
        println!("  projector {:.2e}  euler-lagrange {:.2e}", projector_residual(p, &pts), el_residual(&Jet::new(p), &pts));
    }
    println!("orthogonality {:.2e}", orthogonality_residual(&seq, &pts));
    println!("completeness  {:.2e}", completeness_residual(&seq, &pts));
    Ok(())
}
