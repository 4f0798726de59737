//! Adaptive Gauss-Kronrod (G7/K15) quadrature for vector-valued integrands.

use nalgebra::Vector6;

// QUADPACK G7/K15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> Vector6<f64>>(f: &F, a: f64, b: f64) -> (Vector6<f64>, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = half * XGK[i];
        let sum = f(mid - x) + f(mid + x);
        kronrod += WGK[i] * sum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    let err = (kronrod - gauss).norm();
    (kronrod, err)
}

fn adaptive<F: Fn(f64) -> Vector6<f64>>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Vector6<f64> {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth >= 30 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(f, a, mid, 0.5 * tol, depth + 1) + adaptive(f, mid, b, 0.5 * tol, depth + 1)
}

/// Integrates a `Vector6`-valued function over `[a, b]` to the given absolute
/// tolerance by adaptive bisection of a 15-point Kronrod rule.
pub fn integrate_vec<F: Fn(f64) -> Vector6<f64>>(f: F, a: f64, b: f64, abs_tol: f64) -> Vector6<f64> {
    if a == b {
        return Vector6::zeros();
    }
    adaptive(&f, a, b, abs_tol.max(1e-300), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_and_trig() {
        let f = |x: f64| Vector6::new(1.0, x, x * x, x.powi(7), x.sin(), (3.0 * x).cos());
        let got = integrate_vec(f, 0.0, 2.0, 1e-12);
        assert_relative_eq!(got[0], 2.0, max_relative = 1e-12);
        assert_relative_eq!(got[1], 2.0, max_relative = 1e-12);
        assert_relative_eq!(got[2], 8.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(got[3], 32.0, max_relative = 1e-12);
        assert_relative_eq!(got[4], 1.0 - 2.0_f64.cos(), max_relative = 1e-12);
        assert_relative_eq!(got[5], 6.0_f64.sin() / 3.0, max_relative = 1e-12);
    }
}
