//! Ground state from the log-form equations, exact diagonalization and the
//! thermodynamic limit.

use j1j2_core::bethe::{energy_from_roots, solve_log_bae, QuantumNumber};
use j1j2_core::spectrum::ground_state;
use j1j2_core::thermo::ground_energy_density;
use j1j2_core::ModelParams;

#[test]
fn symmetric_quantum_numbers_give_the_ed_ground_state() {
    for (eta, b) in [(1.0, 1.0), (0.7, 0.4)] {
        for n_sites in [8, 10, 12] {
            let p = ModelParams::real_eta(n_sites, eta, b).unwrap();
            let n = p.half_sites();
            let roots = solve_log_bae(&p, &QuantumNumber::symmetric(n)).unwrap();
            assert_eq!(roots.m(), n);
            assert!(roots.residual < 1e-10);
            let e = energy_from_roots(&roots, &p).unwrap();
            let (e0, m0) = ground_state(&p).unwrap();
            assert_eq!(m0, n, "ground state not at zero magnetization");
            assert!((e.re - e0).abs() < 1e-8 * e0.abs().max(1.0), "{p}: {} vs {e0}", e.re);
            assert!(e.im.abs() < 1e-8);
        }
    }
}

#[test]
fn energy_per_site_approaches_the_thermodynamic_value() {
    let deviations = |eta: f64, b: f64| -> Vec<f64> {
        let eg = ground_energy_density(&ModelParams::real_eta(4, eta, b).unwrap()).unwrap();
        [8, 10, 12]
            .iter()
            .map(|&n| {
                let p = ModelParams::real_eta(n, eta, b).unwrap();
                (ground_state(&p).unwrap().0 / n as f64 - eg).abs()
            })
            .collect()
    };
    for (eta, b) in [(1.0, 0.3), (0.7, 0.4)] {
        let dev = deviations(eta, b);
        assert!(dev[0] > dev[1] && dev[1] > dev[2], "eta {eta} b {b}: {dev:?}");
    }
    // with well separated density peaks the deviation alternates with the parity of N
    let dev = deviations(1.0, 1.0);
    assert!(dev[1] < dev[0] && dev[1] < dev[2], "{dev:?}");
}
