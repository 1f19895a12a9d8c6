//! Reality intervals of the nonhermitian regime at 2N = 6.

use j1j2_core::spectrum::{interval_deviation, predicted_real_intervals, reality_scan};

#[test]
fn detected_intervals_match_the_prediction() {
    for eta in [0.6, 0.8] {
        let scan = reality_scan(eta, 6, 0.01).unwrap();
        let end = *scan.a_grid.last().unwrap();
        let dev = interval_deviation(&scan.intervals, &predicted_real_intervals(eta), end);
        assert!(dev.is_some_and(|d| d <= 0.01 + 1e-12), "eta {eta}: {:?}", scan.intervals);
    }
}

#[test]
fn flags_are_symmetric_under_a_to_pi_minus_a() {
    let scan = reality_scan(0.8, 6, 0.01).unwrap();
    let n = scan.a_grid.len();
    // the grid stops short of pi, so mirror within the exactly symmetric part
    for (i, &a) in scan.a_grid.iter().enumerate() {
        if let Some(j) = scan.a_grid.iter().position(|&b| (b - (std::f64::consts::PI - a)).abs() < 1e-9) {
            assert_eq!(scan.all_real_flags[i], scan.all_real_flags[j], "a = {a}");
        }
    }
    assert!(n > 300);
}

#[test]
fn large_eta_spectrum_is_not_real_everywhere() {
    let scan = reality_scan(2.0, 6, 0.05).unwrap();
    let worst = scan.relative_imag.iter().copied().fold(0.0f64, f64::max);
    assert!(worst > 1e-3, "{:?}", scan.intervals);
}

#[test]
fn exceptional_point_terminates() {
    // a = eta / 2 makes the sector blocks defective
    let r = j1j2_core::spectrum::relative_imaginary_part(0.6, 0.3, 6).unwrap();
    assert!(r.is_finite());
}
