//! Times at which a ray or a periodic line comes within `τ` of the orbit `Γx`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::path::GeodesicPath;
use crate::error::{Error, Result};
use crate::hyperbolic::boundary::BoundaryPoint;
use crate::space::graph::length_to_f64;
use crate::space::{Cover, GraphPoint, Length};

/// `|θ_i / i − c| < ε` for all `i ≥ n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowCondition {
    pub c: f64,
    pub eps: f64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCheck {
    pub step: f64,
    pub passed: bool,
    /// Start of the first grid window `[iθ, (i+1)θ]` without a return.
    pub first_gap: Option<f64>,
    pub windows: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowCheck {
    pub condition: WindowCondition,
    pub passed: bool,
    /// First index `i ≥ n` whose window cannot be placed.
    pub failed_at: Option<usize>,
    /// Windows `i = n, n+1, …` decided within the horizon.
    pub windows: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub horizon: f64,
    pub tau: f64,
    /// Maximal closed intervals of `{t ≤ horizon : d(ξ(t), Γx) ≤ τ}`.
    pub returns: Vec<(f64, f64)>,
    pub grid: Option<GridCheck>,
    pub window: Option<WindowCheck>,
}

/// Distance from each base vertex to the base vertex of `x`, which is the distance from any of
/// its lifts to the orbit `Γx`.
fn orbit_distance(cover: &Cover) -> Vec<Length> {
    cover.base().distances_from(cover.basepoint_base())
}

fn point_orbit_distance(cover: &Cover, to_orbit: &[Length], p: &GraphPoint) -> Length {
    p.ends(cover)
        .into_iter()
        .map(|(v, t)| t + to_orbit[v.base as usize])
        .min()
        .expect("a point has an end")
}

fn merge(mut intervals: Vec<(Length, Length)>) -> Vec<(Length, Length)> {
    intervals.sort();
    let mut out: Vec<(Length, Length)> = Vec::new();
    for (a, b) in intervals {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Return intervals of the ray `ξ_{x,z}` up to `horizon`.
fn ray_returns(cover: &Cover, z: &BoundaryPoint, tau: Length, horizon: Length) -> Result<Vec<(Length, Length)>> {
    let base = cover.base();
    let to_orbit = orbit_distance(cover);
    let mut out = Vec::new();
    let mut t = Length::zero();
    let mut v = cover.basepoint();
    let mut i = 0;
    if to_orbit[v.base as usize] <= tau {
        out.push((t, t));
    }
    while t < horizon {
        let s = z.side(i).ok_or(Error::HorizonTooShort(length_to_f64(&horizon)))?;
        let len = base.length(s);
        let w = cover.step(&v, s);
        let (du, dw) = (to_orbit[v.base as usize], to_orbit[w.base as usize]);
        // d(ξ(t + u), Γx) = min(u + du, len − u + dw) on this edge
        if du <= tau {
            out.push((t, t + (tau - du).min(len)));
        }
        if dw <= tau {
            out.push((t + (len - (tau - dw)).max(Length::zero()), t + len));
        }
        t += len;
        v = w;
        i += 1;
    }
    Ok(merge(out)
        .into_iter()
        .filter(|(a, _)| *a <= horizon)
        .map(|(a, b)| (a, b.min(horizon)))
        .collect())
}

fn grid_check(returns: &[(Length, Length)], step: Length, horizon: Length) -> GridCheck {
    let mut windows = 0;
    let mut first_gap = None;
    let mut i = 0i64;
    loop {
        let lo = step * Length::from_integer(i);
        let hi = lo + step;
        if hi > horizon {
            break;
        }
        windows += 1;
        if !returns.iter().any(|(a, b)| *a <= hi && *b >= lo) {
            first_gap = Some(length_to_f64(&lo));
            break;
        }
        i += 1;
    }
    GridCheck {
        step: length_to_f64(&step),
        passed: first_gap.is_none(),
        first_gap,
        windows,
    }
}

/// Places `θ_n < θ_{n+1} < …` inside `((c−ε)i, (c+ε)i)` so that consecutive windows meet the
/// returns, keeping the smallest feasible `θ_i` at each step.
fn window_check(returns: &[(f64, f64)], cond: WindowCondition, horizon: f64) -> Result<WindowCheck> {
    let WindowCondition { c, eps, n } = cond;
    if !(c > 0.0 && eps > 0.0 && eps < c) {
        return Err(Error::InvalidParameter("window condition needs 0 < ε < c".into()));
    }
    let upper = |i: usize| (c + eps) * i as f64;
    let lower = |i: usize| (c - eps) * i as f64;
    if upper(n + 1) > horizon {
        return Err(Error::HorizonTooShort(horizon));
    }
    // smallest admissible θ_i, with whether it is only approached from above
    let mut theta = lower(n);
    let mut open = true;
    let mut windows = 0;
    let mut i = n;
    while upper(i + 1) <= horizon {
        // first return at or after θ_i
        let next = returns.iter().find_map(|&(a, b)| {
            if b > theta || (b == theta && !open) {
                Some(if a > theta { (a, false) } else { (theta, open) })
            } else {
                None
            }
        });
        let Some((rho, rho_open)) = next else {
            return Ok(WindowCheck { condition: cond, passed: false, failed_at: Some(i), windows });
        };
        // θ_{i+1} ≥ ρ, θ_{i+1} > θ_i, θ_{i+1} ∈ ((c−ε)(i+1), (c+ε)(i+1))
        let (mut t, mut t_open) = (rho, rho_open);
        if t == theta {
            // the sequence is strictly increasing
            t_open = true;
        }
        if lower(i + 1) >= t {
            t = lower(i + 1);
            t_open = true;
        }
        if t >= upper(i + 1) {
            return Ok(WindowCheck { condition: cond, passed: false, failed_at: Some(i), windows });
        }
        theta = t;
        open = t_open;
        windows += 1;
        i += 1;
    }
    Ok(WindowCheck { condition: cond, passed: true, failed_at: None, windows })
}

/// Return times of `ξ_{x,z}` within `τ` of `Γx` up to `horizon`, with the `Λ_τ` grid condition
/// (spacing `grid`, default `τ`) and an optional window condition.
pub fn limit_schedule(
    cover: &Cover,
    z: &BoundaryPoint,
    tau: Length,
    horizon: Length,
    grid: Option<Length>,
    window: Option<WindowCondition>,
) -> Result<Schedule> {
    if tau < Length::zero() || horizon <= Length::zero() {
        return Err(Error::InvalidParameter("need τ ≥ 0 and a positive horizon".into()));
    }
    let returns = ray_returns(cover, z, tau, horizon)?;
    let step = grid.unwrap_or(tau);
    let grid = (step > Length::zero()).then(|| grid_check(&returns, step, horizon));
    let approx: Vec<(f64, f64)> = returns.iter().map(|(a, b)| (length_to_f64(a), length_to_f64(b))).collect();
    let window = window
        .map(|w| window_check(&approx, w, length_to_f64(&horizon)))
        .transpose()?;
    Ok(Schedule {
        horizon: length_to_f64(&horizon),
        tau: length_to_f64(&tau),
        returns: approx,
        grid,
        window,
    })
}

/// Whether `d(γ(n), Γx) ≤ τ` for every integer `n`, checked over one period of `γ`.
pub fn k_tau_check(cover: &Cover, gamma: &GeodesicPath, tau: Length) -> Result<bool> {
    let p = gamma.word.period().ok_or(Error::Aperiodic)?;
    let base = cover.base();
    let start = gamma.position.floor().to_integer();
    let span: Length = (0..p as i64)
        .map(|i| gamma.word.symbol(start + i).map(|s| base.length(s)).ok_or(Error::Aperiodic))
        .sum::<Result<Length>>()?;
    // integer times repeat after a multiple of the period length that is an integer
    let times = (span * Length::from_integer(*span.denom())).to_integer();
    let to_orbit = orbit_distance(cover);
    for n in 0..times.max(1) {
        let point = gamma.eval(cover, Length::from_integer(n))?;
        if point_orbit_distance(cover, &to_orbit, &point) > tau {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integer return times, the natural summary on unit graphs.
pub fn integer_returns(schedule: &Schedule) -> Vec<i64> {
    let mut out: Vec<i64> = schedule
        .returns
        .iter()
        .flat_map(|&(a, b)| a.ceil() as i64..=b.floor() as i64)
        .collect();
    out.dedup();
    out
}
