//! Exhaustive active-set enumeration for small inequality-constrained QPs:
//! every subset of constraints is tried as the active set, the equality KKT
//! system is solved directly, and KKT-feasible candidates compete on
//! objective value. Exponential in the constraint count; intended for n ≤ 6,
//! m ≤ ~12.

use nalgebra::{DMatrix, DVector};

const FEAS_TOL: f64 = 1e-8;

/// Globally minimizes `½xᵀHx + gᵀx` subject to `Ax ≤ b` by enumeration.
/// Returns `(x, objective)` of the best KKT point, or `None` when no subset
/// yields a feasible KKT point (infeasible or unbounded problem).
pub fn solve_by_enumeration(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    a: &DMatrix<f64>,
    b: &DVector<f64>,
) -> Option<(DVector<f64>, f64)> {
    let n = g.len();
    let m = a.nrows();
    assert!(m <= 20, "enumeration oracle is exponential in constraints");
    let scale = 1.0 + b.amax().max(g.amax());

    let mut best: Option<(DVector<f64>, f64)> = None;
    for mask in 0u32..(1 << m) {
        let active: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        if active.len() > n {
            continue;
        }
        let q = active.len();

        // KKT system [[H, A_Sᵀ], [A_S, 0]] [x; λ] = [-g; b_S]
        let dim = n + q;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(h);
        let mut rhs = DVector::zeros(dim);
        for i in 0..n {
            rhs[i] = -g[i];
        }
        for (row, &ci) in active.iter().enumerate() {
            for col in 0..n {
                kkt[(n + row, col)] = a[(ci, col)];
                kkt[(col, n + row)] = a[(ci, col)];
            }
            rhs[n + row] = b[ci];
        }

        let lu = kkt.clone().lu();
        let Some(sol) = lu.solve(&rhs) else { continue };
        if sol.iter().any(|v| !v.is_finite()) {
            continue;
        }
        // Reject spurious solutions of near-singular KKT systems.
        if (&kkt * &sol - &rhs).amax() > FEAS_TOL * scale {
            continue;
        }

        let x = sol.rows(0, n).into_owned();
        let lambda = sol.rows(n, q);
        if lambda.iter().any(|&l| l < -FEAS_TOL * scale) {
            continue;
        }
        let residual = a * &x - b;
        if residual.iter().any(|&r| r > FEAS_TOL * scale) {
            continue;
        }

        let objective = 0.5 * (h * &x).dot(&x) + g.dot(&x);
        if best.as_ref().is_none_or(|(_, obj)| objective < *obj) {
            best = Some((x, objective));
        }
    }
    best
}
