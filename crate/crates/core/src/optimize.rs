//! Derivative-free scalar minimisation.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns `(x_min, f_min)`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimises `f` over `[lo, hi]` after a coarse `scan_points` scan picks the
/// sub-bracket holding the global minimum. Bracket endpoints are candidates
/// too, so a boundary optimum is returned exactly.
pub fn scan_then_golden(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    scan_points: usize,
    tol: f64,
) -> (f64, f64) {
    let n = scan_points.max(3);
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let best = (0..n).fold(0, |k, i| if values[i] < values[k] { i } else { k });

    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(n - 1)];
    let (x, fx) = golden_section(&f, a, b, tol);

    [(grid[best], values[best]), (a, f(a)), (b, f(b))]
        .into_iter()
        .fold((x, fx), |acc, c| if c.1 < acc.1 { c } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let (x, fx) = golden_section(|x| (x - 1.3).powi(2), -5.0, 5.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-8);
        assert!(fx < 1e-16);
    }

    #[test]
    fn scan_escapes_local_minimum() {
        // Local minimum near x = -1, global minimum near x = 2.
        let f = |x: f64| (x + 1.0).powi(2) * (x - 2.0).powi(2) + 0.5 * (x - 2.0).powi(2);
        let (x, _) = scan_then_golden(f, -3.0, 4.0, 64, 1e-10);
        assert!((x - 2.0).abs() < 1e-6, "{x}");
    }

    #[test]
    fn boundary_minimum_is_exact() {
        let (x, _) = scan_then_golden(|x| x, 0.5, 3.0, 16, 1e-9);
        assert_eq!(x, 0.5);
    }
}
