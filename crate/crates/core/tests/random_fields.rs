mod common;

use common::{identities, random_field, SEED};
use cpn_sigma::rational::sample_points;
use cpn_sigma::{ladder, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn twenty_random_fields_satisfy_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pts = sample_points();
    let mut done = 0;
    while done < 20 {
        let n = rng.gen_range(1..=4usize);
        let deg = rng.gen_range(n as u16..=4);
        let f = random_field(&mut rng, n, deg);
        let seq = match ladder(&f, n) {
            Ok(s) => s,
            Err(Error::LadderTerminated { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let id = identities(&seq, &pts);
        assert!(id.max() <= 1e-9, "n={n} deg={deg} {id:?}");
        done += 1;
    }
}

#[test]
fn perturbed_projector_breaks_euler_lagrange() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let pts = sample_points();
    let seq = loop {
        let f = random_field(&mut rng, 2, 3);
        if let Ok(s) = ladder(&f, 2) {
            break s;
        }
    };
    let mut p = seq.projectors[1].clone();
    p.num[0][1] = &p.num[0][1] + &p.den.scale_real(1e-3);
    let r = cpn_sigma::sigma::el_residual(&cpn_sigma::rational::Jet::new(&p), &pts);
    assert!(r > 1e-6, "{r}");
}
