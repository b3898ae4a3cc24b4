// Temporary timing probe; removed once the slow path is found.
use qgauge_core::checks::{CheckOptions, run_checks};
use qgauge_core::linalg::sample_mixed;
use qgauge_core::measures::{self, MeasureOptions, State};
use qgauge_core::theories::Theory;
use std::time::Instant;

#[test]
#[ignore]
fn probe_magic_instances() {
    let theory = Theory::parse("magic:n=1").unwrap();
    let m = MeasureOptions::default();
    for i in 0..12usize {
        let rank = 1 + (i % 2);
        let rho = sample_mixed(&[2], rank, i as u64).unwrap();
        let state = State::Mixed(rho.clone());
        for (name, f) in [
            ("rs", measures::standard_robustness as fn(&State, &Theory, &MeasureOptions) -> _),
            ("rg", measures::generalized_robustness),
            ("nuc", measures::nuclear_gauge),
            ("roof", measures::convex_roof_upper),
            ("bfa", measures::best_free_approximation),
            ("mtd", measures::modified_trace_distance),
            ("geo", measures::geometric_measure),
        ] {
            let t0 = Instant::now();
            let r = f(&state, &theory, &m);
            let dt = t0.elapsed().as_secs_f64();
            if dt > 0.2 {
                println!("instance {i} {name}: {dt:.2}s status {:?}", r.map(|x| x.status));
            }
        }
        println!("instance {i} done");
    }
}

#[test]
#[ignore]
fn probe_suite() {
    let theory = Theory::parse("magic:n=1").unwrap();
    let opts = CheckOptions { count: 12, ..Default::default() };
    let t0 = Instant::now();
    let _ = run_checks(&theory, &opts).unwrap();
    println!("suite: {:.2}s", t0.elapsed().as_secs_f64());
}
