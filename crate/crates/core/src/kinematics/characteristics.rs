//! Method of characteristics for the `F_e` transport equation.
//!
//! Characteristics solve `dx/dt = v`, `dF_e/dt = (∇v) F_e`; the first half is
//! exactly the pathline ODE, so the same curves track material particles.
//! Both are integrated with the explicit midpoint rule (RK2).

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Vec2};

use super::grid::{FieldState, Grid1D};

/// Velocity and velocity gradient at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub v: Vec2,
    pub grad_v: Tensor2,
}

/// Whether a point belongs to the body at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    /// Beyond a receding (ablating) boundary: the particle has been removed.
    Ablated,
    Outside,
}

/// A velocity field that can be sampled along characteristics.
pub trait VelocityField {
    fn sample(&self, x: Vec2, t: f64) -> Kinematics;

    fn locate(&self, _x: Vec2, _t: f64) -> Location {
        Location::Inside
    }

    /// Instants in `(t0, t1)` where the field jumps in time. Integration steps
    /// never straddle them.
    fn breakpoints(&self, _t0: f64, _t1: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// Adapts a closure `(x, t) -> (v, ∇v)` defined everywhere.
pub struct FnField<F>(pub F);

impl<F> VelocityField for FnField<F>
where
    F: Fn(Vec2, f64) -> (Vec2, Tensor2),
{
    fn sample(&self, x: Vec2, t: f64) -> Kinematics {
        let (v, grad_v) = (self.0)(x, t);
        Kinematics { v, grad_v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlineSample {
    pub t: f64,
    pub x: Vec2,
    pub f_e: Tensor2,
    pub v: Vec2,
}

/// One characteristic curve with `F_e` carried along it.
#[derive(Debug, Clone, PartialEq)]
pub struct PathlineRecord {
    pub seed: Vec2,
    pub t_start: f64,
    pub samples: Vec<PathlineSample>,
    /// The particle left through an ablating boundary before the end time.
    pub ablated: bool,
}

impl PathlineRecord {
    pub fn last(&self) -> &PathlineSample {
        self.samples.last().expect("a record always holds its seed sample")
    }
}

fn step_times(field: &impl VelocityField, t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let mut knots = vec![t0];
    knots.extend(field.breakpoints(t0, t1).into_iter().filter(|&b| b > t0 && b < t1));
    knots.push(t1);
    let mut times = vec![t0];
    for w in knots.windows(2) {
        let span = w[1] - w[0];
        if span <= 0.0 {
            continue;
        }
        let n = (span / dt).ceil().max(1.0) as usize;
        for k in 1..n {
            times.push(w[0] + span * (k as f64 / n as f64));
        }
        times.push(w[1]);
    }
    times
}

fn check_inside(field: &impl VelocityField, x: Vec2, t: f64) -> Result<Location> {
    match field.locate(x, t) {
        Location::Outside => Err(Error::OutOfDomain { x1: x.x1, x2: x.x2, t }),
        other => Ok(other),
    }
}

/// Integrate the characteristic through `(seed, t0)` up to `t1` carrying
/// `F_e`, recording every step. Steps are at most `dt` long and split at the
/// field's breakpoints.
///
/// A particle that crosses an ablating boundary ends the record early with
/// `ablated = true`; leaving the body anywhere else is [`Error::OutOfDomain`].
pub fn integrate_characteristics(
    field: &impl VelocityField,
    seed: Vec2,
    t0: f64,
    t1: f64,
    dt: f64,
    f_e0: Tensor2,
) -> Result<PathlineRecord> {
    if !(dt > 0.0) {
        return Err(Error::validation("dt", "characteristic step must be positive"));
    }
    check_inside(field, seed, t0)?;
    let mut x = seed;
    let mut f = f_e0;
    let first = field.sample(x, t0);
    let mut record = PathlineRecord {
        seed,
        t_start: t0,
        samples: vec![PathlineSample {
            t: t0,
            x,
            f_e: f,
            v: first.v,
        }],
        ablated: false,
    };
    let times = step_times(field, t0, t1, dt);
    for w in times.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = field.sample(x, t);
        let x_mid = x + k1.v * (0.5 * h);
        let f_mid = f + k1.grad_v * f * (0.5 * h);
        let t_mid = t + 0.5 * h;
        if check_inside(field, x_mid, t_mid)? == Location::Ablated {
            record.ablated = true;
            break;
        }
        let k2 = field.sample(x_mid, t_mid);
        x = x + k2.v * h;
        f += k2.grad_v * f_mid * h;
        if check_inside(field, x, w[1])? == Location::Ablated {
            record.ablated = true;
            break;
        }
        let v = field.sample(x, w[1]).v;
        record.samples.push(PathlineSample { t: w[1], x, f_e: f, v });
    }
    Ok(record)
}

/// Positions only: `dx/dt = v` with the same midpoint steps as
/// [`integrate_characteristics`].
pub fn integrate_pathline(
    field: &impl VelocityField,
    seed: Vec2,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<Vec<(f64, Vec2)>> {
    if !(dt > 0.0) {
        return Err(Error::validation("dt", "pathline step must be positive"));
    }
    check_inside(field, seed, t0)?;
    let mut x = seed;
    let mut out = vec![(t0, x)];
    for w in step_times(field, t0, t1, dt).windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let x_mid = x + field.sample(x, t).v * (0.5 * h);
        if check_inside(field, x_mid, t + 0.5 * h)? == Location::Ablated {
            break;
        }
        x = x + field.sample(x_mid, t + 0.5 * h).v * h;
        if check_inside(field, x, w[1])? == Location::Ablated {
            break;
        }
        out.push((w[1], x));
    }
    Ok(out)
}

/// Face velocities of one solved step.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityFrame {
    pub t: f64,
    pub grid: Grid1D,
    pub v_faces: Vec<Vec2>,
}

/// Stored velocities of a run, sampled piecewise-linearly in `x2` and
/// piecewise-constantly in time: on `[t_k, t_{k+1})` the field is frame `k`,
/// the velocity that advanced the grid over that step.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityHistory {
    frames: Vec<VelocityFrame>,
    /// Time and height at the end of the last step.
    t_end: f64,
    h_end: f64,
}

/// Slack on the body boundary, relative to the local grid spacing.
const BOUNDARY_SLACK: f64 = 1e-9;

impl VelocityHistory {
    pub fn new(frames: Vec<VelocityFrame>, t_end: f64, h_end: f64) -> Self {
        assert!(!frames.is_empty(), "a velocity history needs at least one frame");
        assert!(
            frames.windows(2).all(|w| w[0].t < w[1].t),
            "frame times must increase strictly"
        );
        Self { frames, t_end, h_end }
    }

    /// Velocity history of consecutive field states; the last state only
    /// closes the final interval.
    pub fn from_states(states: &[FieldState]) -> Self {
        let last = states.last().expect("need at least one state");
        let frames: Vec<VelocityFrame> = if states.len() == 1 {
            vec![VelocityFrame {
                t: last.t,
                grid: last.grid,
                v_faces: last.v_faces.clone(),
            }]
        } else {
            states[..states.len() - 1]
                .iter()
                .map(|s| VelocityFrame {
                    t: s.t,
                    grid: s.grid,
                    v_faces: s.v_faces.clone(),
                })
                .collect()
        };
        Self::new(frames, last.t, last.grid.height())
    }

    pub fn frames(&self) -> &[VelocityFrame] {
        &self.frames
    }

    pub fn t_start(&self) -> f64 {
        self.frames[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    fn frame_index(&self, t: f64) -> usize {
        let k = self.frames.partition_point(|f| f.t <= t);
        k.saturating_sub(1)
    }

    fn interval_end(&self, k: usize) -> (f64, f64) {
        match self.frames.get(k + 1) {
            Some(next) => (next.t, next.grid.height()),
            None => (self.t_end, self.h_end),
        }
    }

    /// Height of the body at `t`, linear within a step.
    pub fn height_at(&self, t: f64) -> f64 {
        let k = self.frame_index(t);
        let frame = &self.frames[k];
        let (t1, h1) = self.interval_end(k);
        if t1 <= frame.t {
            return h1;
        }
        let s = ((t - frame.t) / (t1 - frame.t)).clamp(0.0, 1.0);
        frame.grid.height() + s * (h1 - frame.grid.height())
    }
}

impl VelocityField for VelocityHistory {
    fn sample(&self, x: Vec2, t: f64) -> Kinematics {
        let frame = &self.frames[self.frame_index(t)];
        let n = frame.grid.n_cells();
        let dx = frame.grid.dx();
        let xi = x.x2 / dx;
        // Above the frame's top (material attached during this step) the top
        // cell is extended linearly.
        let j = (xi.floor().max(0.0) as usize).min(n - 1);
        let (a, b) = (frame.v_faces[j], frame.v_faces[j + 1]);
        let d = (b - a) * (1.0 / dx);
        let v = a + d * (xi - j as f64) * dx;
        Kinematics {
            v,
            grad_v: Tensor2::new(0.0, d.x1, 0.0, d.x2),
        }
    }

    fn locate(&self, x: Vec2, t: f64) -> Location {
        let k = self.frame_index(t);
        let slack = BOUNDARY_SLACK * self.frames[k].grid.dx();
        let h = self.height_at(t);
        if x.x2 < -slack || t < self.t_start() - slack || t > self.t_end + slack {
            Location::Outside
        } else if x.x2 > h + slack {
            let (_, h1) = self.interval_end(k);
            if h1 < self.frames[k].grid.height() {
                Location::Ablated
            } else {
                Location::Outside
            }
        } else {
            Location::Inside
        }
    }

    fn breakpoints(&self, t0: f64, t1: f64) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).filter(|&t| t > t0 && t < t1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn still() -> FnField<impl Fn(Vec2, f64) -> (Vec2, Tensor2)> {
        FnField(|_x: Vec2, _t: f64| (Vec2::ZERO, Tensor2::ZERO))
    }

    #[test]
    fn zero_velocity_keeps_everything() {
        let f0 = Tensor2::shear(-0.3);
        let rec = integrate_characteristics(&still(), Vec2::new(0.2, 0.4), 0.0, 1.0, 0.1, f0).unwrap();
        assert_eq!(rec.samples.len(), 11);
        assert!(rec.samples.iter().all(|s| s.x == Vec2::new(0.2, 0.4) && s.f_e == f0));
    }

    #[test]
    fn rigid_translation() {
        let c = Vec2::new(0.3, -0.2);
        let field = FnField(move |_x: Vec2, _t: f64| (c, Tensor2::ZERO));
        let seed = Vec2::new(1.0, 2.0);
        let rec = integrate_characteristics(&field, seed, 0.5, 2.5, 0.25, Tensor2::IDENTITY).unwrap();
        for s in &rec.samples {
            let want = seed + c * (s.t - 0.5);
            assert!((s.x - want).max_abs() < 1e-14);
            assert_eq!(s.f_e, Tensor2::IDENTITY);
        }
        assert_eq!(rec.last().t, 2.5);
    }

    #[test]
    fn positions_match_plain_pathline_bitwise() {
        let field = FnField(|x: Vec2, t: f64| {
            let v = Vec2::new(x.x2.sin() * (1.0 + t), -0.3 * x.x1.cos());
            let g = Tensor2::new(0.0, x.x2.cos() * (1.0 + t), 0.3 * x.x1.sin(), 0.0);
            (v, g)
        });
        let seed = Vec2::new(0.1, 0.7);
        let rec = integrate_characteristics(&field, seed, 0.0, 2.0, 0.013, Tensor2::IDENTITY).unwrap();
        let path = integrate_pathline(&field, seed, 0.0, 2.0, 0.013).unwrap();
        assert_eq!(rec.samples.len(), path.len());
        for (s, (t, x)) in rec.samples.iter().zip(path) {
            assert_eq!(s.t, t);
            assert_eq!(s.x, x);
        }
    }

    fn history_with_top(heights: &[f64], dt: f64) -> VelocityHistory {
        let frames = heights[..heights.len() - 1]
            .iter()
            .enumerate()
            .map(|(k, &h)| {
                let grid = Grid1D::new(4, h).unwrap();
                VelocityFrame {
                    t: k as f64 * dt,
                    grid,
                    v_faces: (0..=4).map(|j| Vec2::new(grid.face(j), 0.0)).collect(),
                }
            })
            .collect();
        VelocityHistory::new(frames, (heights.len() - 1) as f64 * dt, heights[heights.len() - 1])
    }

    #[test]
    fn history_sampling_is_piecewise_linear() {
        let hist = history_with_top(&[1.0, 1.1, 1.2], 0.1);
        let k = hist.sample(Vec2::new(0.0, 0.3), 0.05);
        assert!((k.v.x1 - 0.3).abs() < 1e-15);
        assert!((k.grad_v.t12() - 1.0).abs() < 1e-15);
        assert!((hist.height_at(0.15) - 1.15).abs() < 1e-15);
        assert_eq!(hist.breakpoints(0.0, 0.2), vec![0.1]);
        assert_eq!(hist.locate(Vec2::new(0.0, 1.12), 0.15), Location::Inside);
        assert_eq!(hist.locate(Vec2::new(0.0, 1.3), 0.15), Location::Outside);
        assert_eq!(hist.locate(Vec2::new(0.0, -0.1), 0.15), Location::Outside);
    }

    #[test]
    fn leaving_through_the_base_is_an_error() {
        let hist = history_with_top(&[1.0, 1.0], 1.0);
        type Uniform = FnField<fn(Vec2, f64) -> (Vec2, Tensor2)>;
        struct Down<'a>(&'a VelocityHistory, Uniform);
        impl VelocityField for Down<'_> {
            fn sample(&self, x: Vec2, t: f64) -> Kinematics {
                self.1.sample(x, t)
            }
            fn locate(&self, x: Vec2, t: f64) -> Location {
                self.0.locate(x, t)
            }
        }
        fn down(_x: Vec2, _t: f64) -> (Vec2, Tensor2) {
            (Vec2::new(0.0, -1.0), Tensor2::ZERO)
        }
        let probe = Down(&hist, FnField(down));
        let res = integrate_characteristics(&probe, Vec2::new(0.0, 0.2), 0.0, 1.0, 0.1, Tensor2::IDENTITY);
        assert!(matches!(res, Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn ablated_particles_end_their_record() {
        // The top recedes from 1.0 to 0.5 over one unit of time.
        let hist = history_with_top(&[1.0, 0.5], 1.0);
        struct Still<'a>(&'a VelocityHistory);
        impl VelocityField for Still<'_> {
            fn sample(&self, _x: Vec2, _t: f64) -> Kinematics {
                Kinematics {
                    v: Vec2::ZERO,
                    grad_v: Tensor2::ZERO,
                }
            }
            fn locate(&self, x: Vec2, t: f64) -> Location {
                self.0.locate(x, t)
            }
        }
        let rec =
            integrate_characteristics(&Still(&hist), Vec2::new(0.0, 0.8), 0.0, 1.0, 0.1, Tensor2::IDENTITY).unwrap();
        assert!(rec.ablated);
        assert!(rec.last().t < 0.5);
    }
}
