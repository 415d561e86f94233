//! SU(2) coherent states of spin j reproduce every member of the Veronese ladder.

use cpn_sigma::rational::sample_points;
use cpn_sigma::su2rep::{coherent_field, coherent_projector, half_label, Spin, SpinLabel};
use cpn_sigma::{ladder, veronese_field};

fn main() -> cpn_sigma::Result<()> {
    let pts = sample_points();
    for twice in [2u32, 3, 4] {
        let j = Spin::from_twice(twice);
        let seq = ladder(&veronese_field(twice as usize), twice as usize)?;
        println!("spin {j}");
        for (k, m2) in j.weights().enumerate() {
            let label = SpinLabel::new(j, m2)?;
            let d = coherent_projector(label)?.max_pointwise_diff(&seq.projectors[k], &pts);
            println!("  m = {:>4}  field {:?}", half_label(m2), coherent_field(label).num);
            println!("            |P_coh - P_{k}| = {d:.2e}");
        }
    }
    Ok(())
}
