//! Curvature and integral invariants of the Veronese surfaces in CP² and CP³.

use std::time::Instant;

use cpn_sigma::geometry::{reference_values, sequence_invariants, QuadratureSpec};
use cpn_sigma::{ladder, veronese_field};

fn main() -> cpn_sigma::Result<()> {
    let spec = QuadratureSpec::default();
    for n in [2, 3] {
        let t = Instant::now();
        let seq = ladder(&veronese_field(n), n)?;
        let rows = sequence_invariants(&seq, &spec);
        println!("CP{n}  ({:.2?})", t.elapsed());
        println!("  k          K        |H|            W            Q        Delta    GB");
        for r in &rows {
            let i = &r.integrals;
            println!(
                "  {}  {:>9.6} {:>10.6} {:>12.8} {:>12.8} {:>12.8} {:>6.3}",
                r.k, r.curvature, r.mean_norm, i.willmore.value, i.charge.value, i.euler.value, i.gauss_bonnet.value
            );
        }
        if let Some(refs) = reference_values(n) {
            println!("  reference values");
            for (k, r) in refs.iter().enumerate() {
                println!(
                    "  {}  {:>9.6} {:>10.6} {:>12.8} {:>12.8} {:>12.8}",
                    k, r.curvature, r.mean_norm, r.willmore, r.charge, r.euler
                );
            }
        }
    }
    Ok(())
}
