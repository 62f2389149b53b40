//! One-dimensional Lagrange interpolation weights on uniform nodes.
//!
//! A degree-`k` stencil consists of `k+1` consecutive grid nodes.  For odd
//! degree the evaluation point lies in the middle cell of the stencil, so the
//! offset `a` from the left-middle node satisfies `0 ≤ a ≤ Δx`.  The weights
//! are the closed-form Lagrange polynomials on uniform nodes; for the degrees
//! the solver actually uses (1 and 3) they are spelled out explicitly so the
//! sign pattern is exact:
//!
//! ```text
//! degree 1:  (1−α, α)                                   α = a/Δx
//! degree 3:  (−α(1−α)(2−α)/6,  (1+α)(1−α)(2−α)/2,
//!              α(1+α)(2−α)/2, −α(1+α)(1−α)/6)
//! ```
//!
//! Weights sum to one identically.  If the evaluation point coincides with a
//! node to within `NODE_SNAP_REL·Δx` the weights collapse to a unit vector.

/// Relative tolerance under which an evaluation point is treated as a node.
pub const NODE_SNAP_REL: f64 = 1e-12;

/// Node index (within the stencil) of the left end of the cell containing
/// the evaluation point: `(degree−1)/2` for odd degree.
pub fn anchor_offset(degree: usize) -> i64 {
    ((degree as i64) - 1).div_euclid(2)
}

/// Weights for the `degree+1` stencil nodes, where `a` is the offset of the
/// evaluation point from the node `anchor_offset(degree)`, `0 ≤ a ≤ dx`.
pub fn barycentric_weights_1d(degree: usize, a: f64, dx: f64) -> Vec<f64> {
    assert!(dx > 0.0 && (-NODE_SNAP_REL * dx..=(1.0 + NODE_SNAP_REL) * dx).contains(&a));
    let alpha = a / dx;
    let m = anchor_offset(degree) as usize;
    let mut w = vec![0.0; degree + 1];
    if alpha.abs() <= NODE_SNAP_REL {
        w[m] = 1.0;
        return w;
    }
    if (1.0 - alpha).abs() <= NODE_SNAP_REL {
        w[m + 1] = 1.0;
        return w;
    }
    match degree {
        1 => {
            w[0] = 1.0 - alpha;
            w[1] = alpha;
        }
        3 => {
            w[0] = -alpha * (1.0 - alpha) * (2.0 - alpha) / 6.0;
            w[1] = (1.0 + alpha) * (1.0 - alpha) * (2.0 - alpha) / 2.0;
            w[2] = alpha * (1.0 + alpha) * (2.0 - alpha) / 2.0;
            w[3] = -alpha * (1.0 + alpha) * (1.0 - alpha) / 6.0;
        }
        _ => {
            // Uniform-node Lagrange product form, nodes at 0..=degree in cell
            // units, evaluation point at m + alpha.
            let xi = m as f64 + alpha;
            for (j, wj) in w.iter_mut().enumerate() {
                let mut p = 1.0;
                for k in 0..=degree {
                    if k != j {
                        p *= (xi - k as f64) / (j as f64 - k as f64);
                    }
                }
                *wj = p;
            }
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_near(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn cubic_midpoint() {
        let w = barycentric_weights_1d(3, 0.05, 0.1);
        let expect = [-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0];
        for (a, b) in w.iter().zip(expect) {
            assert_near(*a, b, 1e-15);
        }
    }

    #[test]
    fn linear_midpoint() {
        let w = barycentric_weights_1d(1, 0.05, 0.1);
        assert_near(w[0], 0.5, 1e-15);
        assert_near(w[1], 0.5, 1e-15);
    }

    #[test]
    fn cubic_nodal() {
        let w = barycentric_weights_1d(3, 0.0, 0.1);
        assert_eq!(w, vec![0.0, 1.0, 0.0, 0.0]);
        let w = barycentric_weights_1d(3, 0.1, 0.1);
        assert_eq!(w, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn matches_lagrange_product_form() {
        // The explicit degree-3 polynomials against the generic product form.
        for i in 1..10 {
            let a = 0.1 * i as f64 / 10.0;
            let w = barycentric_weights_1d(3, a, 0.1);
            let xi = 1.0 + a / 0.1;
            for (j, wj) in w.iter().enumerate() {
                let mut p = 1.0;
                for k in 0..4 {
                    if k != j {
                        p *= (xi - k as f64) / (j as f64 - k as f64);
                    }
                }
                assert_near(*wj, p, 1e-14);
            }
        }
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(degree in 1usize..6, t in 0.0f64..1.0, dx in 1e-3f64..10.0) {
            let w = barycentric_weights_1d(degree, t * dx, dx);
            let s: f64 = w.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-14);
        }

        #[test]
        fn reproduces_polynomials(degree in 1usize..5, t in 0.0f64..1.0, c0 in -2.0f64..2.0, c1 in -2.0f64..2.0) {
            // p(x) = c0 + c1 x + x^degree sampled on the stencil nodes must be
            // reproduced exactly at the evaluation point.
            let dx = 0.25;
            let m = anchor_offset(degree) as f64;
            let xi = (m + t) * dx;
            let poly = |x: f64| c0 + c1 * x + x.powi(degree as i32);
            let w = barycentric_weights_1d(degree, t * dx, dx);
            let interp: f64 = w
                .iter()
                .enumerate()
                .map(|(j, wj)| wj * poly(j as f64 * dx))
                .sum();
            prop_assert!((interp - poly(xi)).abs() < 1e-12, "{} vs {}", interp, poly(xi));
        }
    }
}
