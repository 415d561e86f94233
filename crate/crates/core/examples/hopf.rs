//! Hopf fibration S³ → S² and its stereographic chart, the parameter of the coherent states.

use cpn_sigma::su2rep::{hopf, stereo, stereo_inv, GroupElement};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cpn_sigma::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phase = Complex64::from_polar(1.0, 1.1);
    for _ in 0..5 {
        let g = GroupElement::random(&mut rng);
        let x = hopf(g.u, g.v);
        let w = stereo(x)?;
        let along_fibre = hopf(g.u * phase, g.v * phase);
        let chart = stereo_inv(g.v / g.u);
        let dev = |y: [f64; 3]| (0..3).map(|i| (x[i] - y[i]).abs()).fold(0.0, f64::max);
        println!(
            "H = [{:+.5}, {:+.5}, {:+.5}]  w = {:.5}  v/u = {:.5}  fibre {:.1e}  chart {:.1e}",
            x[0],
            x[1],
            x[2],
            w,
            g.v / g.u,
            dev(along_fibre),
            dev(chart)
        );
    }
    Ok(())
}
