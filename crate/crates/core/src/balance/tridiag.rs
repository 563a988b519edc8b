use crate::error::{Error, Result};

/// Solve a tridiagonal system with the Thomas algorithm.
///
/// Row `i` reads `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`;
/// `lower[0]` and `upper[n-1]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(
        lower.len() == n && upper.len() == n && rhs.len() == n,
        "band lengths differ"
    );
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    for i in 0..n {
        if i > 0 {
            pivot = diag[i] - lower[i] * c[i - 1];
        }
        if pivot.abs() <= f64::EPSILON * diag[i].abs().max(1.0) || !pivot.is_finite() {
            return Err(Error::SingularSystem(format!("zero pivot in row {i}")));
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d[i] = if i == 0 {
            rhs[0] / pivot
        } else {
            (rhs[i] - lower[i] * d[i - 1]) / pivot
        };
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_system() {
        // [[2,1,0],[1,3,1],[0,1,2]] x = [3,5,3] -> x = 1
        let x = solve_tridiagonal(&[0.0, 1.0, 1.0], &[2.0, 3.0, 2.0], &[1.0, 1.0, 0.0], &[3.0, 5.0, 3.0]).unwrap();
        for xi in x {
            assert!((xi - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_system_is_reported() {
        let res = solve_tridiagonal(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]);
        assert!(matches!(res, Err(Error::SingularSystem(_))));
    }

    proptest! {
        #[test]
        fn diagonally_dominant_residual(
            rows in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -5.0f64..5.0), 1..40)
        ) {
            let n = rows.len();
            let lower: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let upper: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let diag: Vec<f64> = rows.iter().map(|r| 2.5 + r.0.abs() + r.1.abs()).collect();
            let rhs: Vec<f64> = rows.iter().map(|r| r.2).collect();
            let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
            for i in 0..n {
                let mut r = diag[i] * x[i] - rhs[i];
                if i > 0 { r += lower[i] * x[i - 1]; }
                if i + 1 < n { r += upper[i] * x[i + 1]; }
                prop_assert!(r.abs() < 1e-12);
            }
        }
    }
}
