//! Post-processing: recover `F` and `F_relax` from a solved history of `v`
//! and `F_e`.
//!
//! The configuration at `t0` is taken as reference (`F = I`), `F` is
//! transported with the stored velocities, and `F_relax = F_e⁻¹ F` follows
//! from `F_e = F F_relax⁻¹`.

use crate::error::Result;
use crate::tensor::Tensor2;

use super::grid::{FieldState, Grid1D};
use super::transport::advance_deformation;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSample {
    pub t: f64,
    pub grid: Grid1D,
    pub f: Vec<Tensor2>,
    pub f_relax: Vec<Tensor2>,
}

/// Reconstruct `F` and `F_relax` at every stored state from `t0` on.
///
/// `t0` defaults to the earliest stored time; otherwise the first state with
/// `t ≥ t0` is the reference. Each state must carry the velocity used to
/// advance it to the next one.
pub fn reconstruct_reference(history: &[FieldState], t0: Option<f64>) -> Result<Vec<ReferenceSample>> {
    let start = match t0 {
        Some(t0) => history.partition_point(|s| s.t < t0),
        None => 0,
    };
    let Some(first) = history.get(start) else {
        return Ok(Vec::new());
    };
    let mut f = vec![Tensor2::IDENTITY; first.grid.n_cells()];
    let mut out = Vec::with_capacity(history.len() - start);
    for (k, state) in history.iter().enumerate().skip(start) {
        let f_relax = state
            .f_e
            .iter()
            .zip(&f)
            .map(|(fe, f)| Ok(fe.inverse()? * *f))
            .collect::<Result<Vec<_>>>()?;
        let next = history.get(k + 1);
        let sample = ReferenceSample {
            t: state.t,
            grid: state.grid,
            f: f.clone(),
            f_relax,
        };
        if let Some(next) = next {
            let grad_v = state.velocity_gradients();
            let (grid, advanced) = advance_deformation(
                &state.grid,
                &f,
                &state.v_faces,
                &grad_v,
                next.t - state.t,
                next.grid.height(),
            )?;
            debug_assert_eq!(grid, next.grid);
            f = advanced;
        }
        out.push(sample);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn static_history(f_e: Tensor2, steps: usize) -> Vec<FieldState> {
        let grid = Grid1D::new(8, 1.0).unwrap();
        (0..steps)
            .map(|k| FieldState::uniform(k as f64 * 0.1, grid, f_e, 1.0, 1.0))
            .collect()
    }

    #[test]
    fn no_motion_gives_identity_and_inverse_elastic() {
        let f_e = Tensor2::new(1.2, 0.1, 0.0, 0.9);
        let out = reconstruct_reference(&static_history(f_e, 4), None).unwrap();
        assert_eq!(out.len(), 4);
        let inv = f_e.inverse().unwrap();
        for s in &out {
            assert!(s.f.iter().all(|f| *f == Tensor2::IDENTITY));
            assert!(s.f_relax.iter().all(|r| *r == inv));
        }
    }

    #[test]
    fn relaxed_quasistatic_limit_is_stress_free_reference() {
        // Relaxed fields: F_e = I, v = 0.
        let out = reconstruct_reference(&static_history(Tensor2::IDENTITY, 5), Some(0.15)).unwrap();
        assert_eq!(out.len(), 3);
        assert!((out[0].t - 0.2).abs() < 1e-15);
        for s in &out {
            assert!(s.f.iter().chain(&s.f_relax).all(|m| *m == Tensor2::IDENTITY));
        }
    }

    #[test]
    fn steady_uniform_shear_reference() {
        let f_e = Tensor2::shear(0.1);
        let out = reconstruct_reference(&static_history(f_e, 3), None).unwrap();
        let last = out.last().unwrap();
        assert!(last.f.iter().all(|f| *f == Tensor2::IDENTITY));
        assert!(last.f_relax.iter().all(|r| *r == Tensor2::shear(-0.1)));
    }

    #[test]
    fn singular_elastic_deformation_is_reported() {
        let res = reconstruct_reference(&static_history(Tensor2::ZERO, 2), None);
        assert!(matches!(res, Err(Error::SingularTensor { .. })));
    }

    #[test]
    fn empty_history() {
        assert!(reconstruct_reference(&[], None).unwrap().is_empty());
    }
}
