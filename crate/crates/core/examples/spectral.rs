//! Wavefunctions of the linear spectral problem and the two immersion formulas.

use cpn_sigma::immersion::x_at;
use cpn_sigma::rational::{mat_norm, sample_points};
use cpn_sigma::spectral::{asymptotic_x, consistent_alpha, default_lambda_grid, spectral_report, sym_tafel};
use cpn_sigma::{ladder, veronese_field};
use num_complex::Complex64;

fn main() -> cpn_sigma::Result<()> {
    let seq = ladder(&veronese_field(2), 2)?;
    let rep = spectral_report(&seq, &default_lambda_grid(), &sample_points())?;
    println!("CP2: residual {:.2e}, unitarity {:.2e}, Sym-Tafel {:.2e}", rep.max_lsp, rep.max_unitarity, rep.max_sym_tafel);
    let z = Complex64::new(0.3, 0.9);
    for k in 0..=2 {
        let x = x_at(&seq, k, z);
        print!("  k={k} asymptotic error:");
        for mag in [1e2, 1e3, 1e4, 1e5] {
            let e = mat_norm(&(asymptotic_x(&seq, k, Complex64::new(0.0, mag), z)? - &x));
            print!("  {e:.2e}");
        }
        let l = Complex64::new(0.7, -1.3);
        let st = mat_norm(&(sym_tafel(&seq, k, l, consistent_alpha(l), z)? - &x));
        println!("   Sym-Tafel at {l}: {st:.1e}");
    }
    Ok(())
}
