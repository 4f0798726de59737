//! Bisection-only Kepler solve, kept independent of any Newton implementation.

use std::f64::consts::TAU;

/// Solves `M = E - e sin E` for the unwrapped eccentric anomaly by pure
/// bisection. Slow and simple on purpose.
pub fn solve_kepler_bisect(e: f64, mean_anomaly: f64) -> f64 {
    assert!((0.0..1.0).contains(&e), "eccentricity out of range");
    let rev = (mean_anomaly / TAU).floor();
    let m = mean_anomaly - TAU * rev;
    let (mut lo, mut hi) = (0.0_f64, TAU);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - e * mid.sin() - m > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi) + TAU * rev
}
