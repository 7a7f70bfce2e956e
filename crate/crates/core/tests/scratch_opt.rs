//! Temporary optimizer diagnostics (deleted before release).

use ctmp_core::fermion::Mapping;
use ctmp_core::hubbard::build_hubbard;
use ctmp_core::spectrum::exact_ground_energy;
use ctmp_core::vqe::{find_minimum, AnsatzSpec};

#[test]
#[ignore]
fn probe_l2_landscape() {
    for mapping in [Mapping::JordanWigner, Mapping::BravyiKitaev] {
        let h = build_hubbard(2, 1.0, 2.0, true, mapping).unwrap();
        let oracle = exact_ground_energy(&h).unwrap();
        let spec = AnsatzSpec::new(4);
        for restarts in [20usize, 100] {
            let start = std::time::Instant::now();
            let (_, best) = find_minimum(&h, &spec, restarts, 31_337).unwrap();
            println!(
                "{mapping:?} restarts={restarts}: best {best:.9} oracle {oracle:.9} gap {:.2e} ({:.1} s)",
                best - oracle,
                start.elapsed().as_secs_f64()
            );
        }
    }
}

#[test]
#[ignore]
fn distribution_of_converged_values() {
    let h = build_hubbard(2, 1.0, 2.0, true, Mapping::BravyiKitaev).unwrap();
    let oracle = exact_ground_energy(&h).unwrap();
    let spec = AnsatzSpec::new(4);
    let mut values: Vec<f64> = (0..40u64)
        .map(|r| find_minimum(&h, &spec, 1, 5000 + r).unwrap().1)
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    println!("oracle {oracle:.6}");
    for chunk in values.chunks(8) {
        println!("{chunk:.6?}");
    }
}
