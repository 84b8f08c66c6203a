//! Box-counting dimension of boundary sets in the visual metric.

use std::collections::BTreeSet;

use super::hull::BoundarySet;
use crate::error::{Error, Result};
use crate::flow::report::{EntropyReport, FitModel, ReportConfig, ReportRow};
use crate::space::{Cover, Symbol};

/// Number of visual balls of radius `e^{-n}` needed to cover `set`.
///
/// The ball `B_x(z, e^{-n})` is the cylinder of the first `n + 1` symbols of `z`, so the count is
/// the number of distinct `(n+1)`-prefixes occurring in `set`.
pub fn visual_cover_count(cover: &Cover, set: &BoundarySet, n: usize) -> Result<u128> {
    if !cover.has_word_metric() {
        return Err(Error::NotTree);
    }
    let m = n + 1;
    let branching = 2 * cover.spec().rank() as u128 - 1;
    let extensions = |len: usize| -> Option<u128> {
        if len >= m {
            return Some(1);
        }
        let free = (m - len) as u32;
        if len == 0 {
            (branching + 1).checked_mul(branching.checked_pow(free - 1)?)
        } else {
            branching.checked_pow(free)
        }
    };
    let overflow = || Error::BudgetExceeded(usize::MAX);
    match set {
        BoundarySet::Full => extensions(0).ok_or_else(overflow),
        BoundarySet::Cylinders(c) => {
            let mut truncated: BTreeSet<&[Symbol]> = BTreeSet::new();
            let mut total: u128 = 0;
            for p in c.prefixes() {
                if p.len() >= m {
                    truncated.insert(&p[..m]);
                } else {
                    total = total.checked_add(extensions(p.len()).ok_or_else(overflow)?).ok_or_else(overflow)?;
                }
            }
            Ok(total + truncated.len() as u128)
        }
        BoundarySet::Points(points) => {
            if points.is_empty() {
                return Err(Error::EmptyBoundarySet);
            }
            let mut distinct = BTreeSet::new();
            for z in points {
                let w = z.symbols(cover, m).ok_or(Error::HorizonTooShort(m as f64))?;
                distinct.insert(w);
            }
            Ok(distinct.len() as u128)
        }
    }
}

/// Slope of `log Cov_x(C, e^{-n})` against `n` over `n₀..=n₁`.
pub fn minkowski_dimension_estimate(cover: &Cover, set: &BoundarySet, n0: usize, n1: usize) -> Result<EntropyReport> {
    if n1 <= n0 {
        return Err(Error::InvalidParameter(format!("depth range {n0}..{n1} needs two depths")));
    }
    let mut rows = Vec::new();
    for n in n0..=n1 {
        let count = visual_cover_count(cover, set, n)? as f64;
        rows.push(ReportRow {
            horizon: n as f64,
            count_lo: count,
            count_hi: count,
            exact: true,
        });
    }
    let config = ReportConfig {
        r: None,
        a: None,
        anchor_radius: None,
        seed: None,
    };
    Ok(EntropyReport::from_rows("md", rows, FitModel::Linear, config))
}
