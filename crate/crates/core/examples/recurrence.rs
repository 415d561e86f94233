//! Projector recurrence from P_0 alone, compared with the field ladder.

use cpn_sigma::rational::sample_points;
use cpn_sigma::sigma::{pi_minus, recurrence_seq};
use cpn_sigma::{ladder, project, veronese_field};

fn main() -> cpn_sigma::Result<()> {
    let pts = sample_points();
    for n in 1..=4 {
        let p0 = project(&veronese_field(n))?;
        let rec = recurrence_seq(&p0)?;
        let lad = ladder(&veronese_field(n), n)?;
        let worst = rec
            .projectors
            .iter()
            .zip(&lad.projectors)
            .map(|(a, b)| a.max_pointwise_diff(b, &pts))
            .fold(0.0, f64::max);
        let back = pi_minus(&rec.projectors[1])?.max_pointwise_diff(&p0, &pts);
        println!("CP{n}: recurrence vs ladder {worst:.2e}, lowering P_1 back to P_0 {back:.2e}");
    }
    Ok(())
}
