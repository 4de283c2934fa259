//! Exact event-driven simulation of `ẋ = −x + W·θ(x)`.
//!
//! Inside a part `α` the flow is `x(t) = W_α + (x(0) − W_α)·e^{−t}`, so the
//! time to each coordinate hyperplane has a closed form and no integrator is
//! needed. The current part is tracked explicitly: a coordinate sitting at
//! zero may belong to either side, and leaves it at once when the flow
//! points outward.

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::IndexSet;
use crate::linalg::WeightMatrix;
use crate::network::{GlassNetwork, InputMode};
use crate::stability::{is_stable_set, Verdict};

pub const DEFAULT_MAX_TIME: f64 = 50.0;
pub const DEFAULT_MAX_SWITCHES: usize = 10_000;
/// Distance to the attractor at which a trajectory counts as converged.
pub const CONVERGENCE_DISTANCE: f64 = 1e-9;
/// Crossing times closer than this are treated as simultaneous.
pub const TIE_TIME: f64 = 1e-15;
pub const CHATTER_TIME: f64 = 1e-12;
pub const CHATTER_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySegment {
    pub part: IndexSet,
    pub entry_time: f64,
    pub entry_state: Vec<f64>,
    /// `W_α` of the part; the flow heads straight for it.
    pub attractor: Vec<f64>,
    pub duration: f64,
    /// 1-based coordinate whose hyperplane ends the segment.
    pub exit_coordinate: Option<usize>,
}

impl TrajectorySegment {
    /// Closed-form state `s` time units after entry.
    pub fn state_at(&self, s: f64) -> Vec<f64> {
        // x0·e^{−s} + w·(1 − e^{−s}), exact at s = 0
        let (decay, grown) = ((-s).exp(), -(-s).exp_m1());
        self.entry_state.iter().zip(&self.attractor).map(|(&x0, &w)| x0 * decay + w * grown).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Termination {
    ConvergedToFixedPoint(IndexSet),
    /// The flow settles on `W_α` without crossing, but some component of
    /// `W_α` is exactly zero, so the fixed point sits on the part boundary.
    BoundaryFixedPoint(IndexSet),
    MaxSwitches,
    MaxTime,
    ChatterDetected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub segments: Vec<TrajectorySegment>,
    pub termination: Termination,
    pub final_state: Vec<f64>,
    /// Part holding the final state (tracked, so zero coordinates keep their side).
    pub final_part: IndexSet,
    pub final_time: f64,
}

impl Trajectory {
    pub fn switches(&self) -> usize {
        self.segments.iter().filter(|s| s.exit_coordinate.is_some()).count()
    }

    /// State at absolute time `t`, clamped to the simulated interval.
    pub fn state_at(&self, t: f64) -> Vec<f64> {
        if t >= self.final_time {
            return self.final_state.clone();
        }
        let seg = self.segments.iter().rev().find(|s| s.entry_time <= t).unwrap_or(&self.segments[0]);
        seg.state_at((t - seg.entry_time).max(0.0))
    }

    /// States on the grid `0, dt, 2·dt, …` up to the final time.
    pub fn sample(&self, dt: f64) -> Result<Vec<(f64, Vec<f64>)>> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(GlassError::Precondition(format!("sample step must be positive, got {dt}")));
        }
        let steps = (self.final_time / dt).floor() as usize;
        Ok((0..=steps).map(|k| k as f64 * dt).map(|t| (t, self.state_at(t))).collect())
    }
}

pub fn samples_csv(samples: &[(f64, Vec<f64>)]) -> String {
    let n = samples.first().map_or(0, |s| s.1.len());
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for (t, x) in samples {
        out.push_str(&t.to_string());
        for v in x {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub max_time: f64,
    pub max_switches: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { max_time: DEFAULT_MAX_TIME, max_switches: DEFAULT_MAX_SWITCHES }
    }
}

/// Time to leave the part's closure for one coordinate, if the flow leaves.
fn exit_time(inside: bool, x0: f64, w: f64) -> Option<f64> {
    if inside {
        // needs x ≥ 0; leaves when heading below zero
        if w >= 0.0 {
            return None;
        }
        if x0 <= 0.0 {
            return Some(0.0);
        }
    } else {
        if w <= 0.0 {
            return None;
        }
        if x0 >= 0.0 {
            return Some(0.0);
        }
    }
    // x(t) = 0  ⇔  e^{−t} = w / (w − x0)
    Some((-x0 / w).ln_1p())
}

/// First time the flow from `x0` in `part` reaches a coordinate hyperplane
/// and leaves the part, with the 0-based coordinate. Starting on the boundary
/// with the flow pointing out gives time 0. Ties go to the lowest index.
///
/// `None` means the attractor is approached without leaving the part.
pub fn step_to_boundary(w: &WeightMatrix, part: &IndexSet, x0: &[f64]) -> Option<(f64, usize)> {
    let attractor = w.column_sum(part);
    first_exit(part, x0, &attractor).map(|(t, i, _)| (t, i))
}

/// As [`step_to_boundary`], plus every coordinate whose time ties the minimum.
fn first_exit(part: &IndexSet, x0: &[f64], attractor: &[f64]) -> Option<(f64, usize, Vec<usize>)> {
    let times: Vec<Option<f64>> = (0..x0.len()).map(|i| exit_time(part.contains(i), x0[i], attractor[i])).collect();
    let t_min = times.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    if !t_min.is_finite() {
        return None;
    }
    let tied: Vec<usize> = (0..x0.len()).filter(|&i| times[i].is_some_and(|t| t <= t_min + TIE_TIME)).collect();
    Some((t_min, tied[0], tied))
}

fn initial_part(x0: &[f64]) -> Result<IndexSet> {
    IndexSet::from_positions(x0.len(), (0..x0.len()).filter(|&i| x0[i] > 0.0))
}

fn check_state(x: &[f64]) -> Result<()> {
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(GlassError::NumericalFailure(format!("state component {} is not finite", i + 1)));
    }
    Ok(())
}

fn max_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn simulate(net: &GlassNetwork, x0: &[f64], config: &SimConfig) -> Result<Trajectory> {
    simulate_from(net, x0, None, 0.0, config)
}

/// Continues from `x0` at time `start`, optionally in an explicit part (so a
/// trajectory can be resumed from its `final_part`). `config.max_time` is the
/// absolute end time.
pub fn simulate_from(
    net: &GlassNetwork,
    x0: &[f64],
    part: Option<IndexSet>,
    start: f64,
    config: &SimConfig,
) -> Result<Trajectory> {
    let n = net.dim();
    if x0.len() != n {
        return Err(GlassError::DimensionMismatch(format!("initial state has {} entries for {n} units", x0.len())));
    }
    check_state(x0).map_err(|_| GlassError::Precondition("initial state must be finite".into()))?;
    if net.input_mode() == InputMode::EmbeddedNonvanishing && x0[n - 1] != 1.0 {
        return Err(GlassError::Precondition("the clamped input coordinate must start at 1".into()));
    }
    if !(config.max_time.is_finite() && config.max_time > start) || config.max_switches == 0 {
        return Err(GlassError::Precondition(
            "max_time must exceed the start time and max_switches be positive".into(),
        ));
    }
    let mut part = match part {
        Some(p) => {
            let bad = (0..n).find(|&i| if p.contains(i) { x0[i] < 0.0 } else { x0[i] > 0.0 });
            if p.dim() != n || bad.is_some() {
                return Err(GlassError::Precondition("initial state lies outside the given part".into()));
            }
            p
        }
        None => initial_part(x0)?,
    };
    let w = net.weights();
    let mut x = x0.to_vec();
    let mut t = start;
    let mut segments = Vec::new();
    let mut switches = 0usize;
    // (time, state, coordinate) of recent switches
    let mut recent: Vec<(f64, Vec<f64>, usize)> = Vec::new();

    let termination = loop {
        let attractor = w.column_sum(&part);
        let remaining = config.max_time - t;
        let mut segment = TrajectorySegment {
            part,
            entry_time: t,
            entry_state: x.clone(),
            attractor: attractor.clone(),
            duration: 0.0,
            exit_coordinate: None,
        };
        match first_exit(&part, &x, &attractor) {
            None => {
                let d = max_distance(&x, &attractor);
                let t_close = if d > CONVERGENCE_DISTANCE { (d / CONVERGENCE_DISTANCE).ln() } else { 0.0 };
                if t_close <= remaining {
                    segment.duration = t_close;
                    segments.push(segment);
                    t += t_close;
                    x = attractor;
                    let settled = if part.is_empty() {
                        net.input_mode() == InputMode::Vanishing
                    } else {
                        is_stable_set(net, &part)?.verdict == Verdict::Stable
                    };
                    break if settled {
                        Termination::ConvergedToFixedPoint(part)
                    } else {
                        Termination::BoundaryFixedPoint(part)
                    };
                }
                segment.duration = remaining;
                x = segment.state_at(remaining);
                segments.push(segment);
                t = config.max_time;
                break Termination::MaxTime;
            }
            Some((tc, i, tied)) => {
                if tc > remaining {
                    segment.duration = remaining;
                    x = segment.state_at(remaining);
                    segments.push(segment);
                    t = config.max_time;
                    break Termination::MaxTime;
                }
                segment.duration = tc;
                segment.exit_coordinate = Some(i + 1);
                let mut next = segment.state_at(tc);
                // Put every tied coordinate, and any pushed past zero by
                // rounding, exactly on its hyperplane.
                for (j, v) in next.iter_mut().enumerate() {
                    let crossed = if part.contains(j) { *v < 0.0 } else { *v > 0.0 };
                    if crossed || tied.contains(&j) {
                        *v = 0.0;
                    }
                }
                segments.push(segment);
                check_state(&next)?;
                x = next;
                t += tc;
                if switches == config.max_switches {
                    break Termination::MaxSwitches;
                }
                part = if part.contains(i) { part.without(i) } else { part.with(i) };
                switches += 1;
                recent.push((t, x.clone(), i));
                if recent.len() > 3 {
                    recent.remove(0);
                }
                if is_chatter(&recent) {
                    break Termination::ChatterDetected;
                }
            }
        }
    };
    check_state(&x)?;
    Ok(Trajectory { segments, termination, final_state: x, final_part: part, final_time: t })
}

fn is_chatter(recent: &[(f64, Vec<f64>, usize)]) -> bool {
    if recent.len() < 3 {
        return false;
    }
    let span = recent[2].0 - recent[0].0;
    let close = recent.iter().all(|r| max_distance(&r.1, &recent[0].1) < CHATTER_DISTANCE);
    let repeated = recent[0].2 == recent[1].2 || recent[0].2 == recent[2].2 || recent[1].2 == recent[2].2;
    span < CHATTER_TIME && close && repeated
}

/// `−x + W·θ(x)` with `θ(0) = 0`.
pub fn velocity(net: &GlassNetwork, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != net.dim() {
        return Err(GlassError::DimensionMismatch(format!("state has {} entries for {} units", x.len(), net.dim())));
    }
    let drive = net.weights().column_sum(&initial_part(x)?);
    Ok(x.iter().zip(drive).map(|(xi, d)| d - xi).collect())
}

/// A free grid axis over a 0-based coordinate with `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub coordinate: usize,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRow {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl GridAxis {
    fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.max } else { self.min + h * k as f64 }).collect()
    }
}

/// Velocities on a 2-dimensional grid. Every coordinate that is not a free
/// axis must be fixed; in embedded mode the clamped coordinate defaults to 1.
pub fn vector_field_grid(net: &GlassNetwork, axes: &[GridAxis], fixed: &[(usize, f64)]) -> Result<Vec<FieldRow>> {
    let n = net.dim();
    if axes.len() != 2 {
        return Err(GlassError::Precondition(format!("a field grid needs exactly 2 free axes, got {}", axes.len())));
    }
    let mut base: Vec<Option<f64>> = vec![None; n];
    for &(i, v) in fixed {
        if i >= n {
            return Err(GlassError::IndexOutOfRange { index: i + 1, n });
        }
        if !v.is_finite() {
            return Err(GlassError::Precondition(format!("fixed value for coordinate {} is not finite", i + 1)));
        }
        base[i] = Some(v);
    }
    for a in axes {
        if a.coordinate >= n {
            return Err(GlassError::IndexOutOfRange { index: a.coordinate + 1, n });
        }
        if base[a.coordinate].is_some() {
            return Err(GlassError::Precondition(format!("coordinate {} is both free and fixed", a.coordinate + 1)));
        }
        if a.steps == 0 || !(a.min.is_finite() && a.max.is_finite()) {
            return Err(GlassError::Precondition("grid axes need finite bounds and at least one step".into()));
        }
    }
    if axes[0].coordinate == axes[1].coordinate {
        return Err(GlassError::Precondition("the two free axes must differ".into()));
    }
    if let Some(c) = net.clamped_unit() {
        if base[c].is_none() && axes.iter().all(|a| a.coordinate != c) {
            base[c] = Some(1.0);
        }
    }
    let free: Vec<usize> = axes.iter().map(|a| a.coordinate).collect();
    if let Some(i) = (0..n).find(|i| base[*i].is_none() && !free.contains(i)) {
        return Err(GlassError::Precondition(format!(
            "coordinate {} is neither a free axis nor fixed (more than 2 free axes)",
            i + 1
        )));
    }
    let (ax, ay) = (axes[0], axes[1]);
    let mut state: Vec<f64> = base.iter().map(|v| v.unwrap_or(0.0)).collect();
    let mut rows = Vec::with_capacity(ax.steps * ay.steps);
    for &px in &ax.points() {
        for &py in &ay.points() {
            state[ax.coordinate] = px;
            state[ay.coordinate] = py;
            let v = velocity(net, &state)?;
            rows.push(FieldRow { x: px, y: py, vx: v[ax.coordinate], vy: v[ay.coordinate] });
        }
    }
    Ok(rows)
}

pub fn field_csv(rows: &[FieldRow]) -> String {
    let mut out = String::from("x,y,vx,vy\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.x, r.y, r.vx, r.vy));
    }
    out
}
