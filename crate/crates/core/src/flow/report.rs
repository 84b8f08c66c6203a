//! Growth-rate reports shared by every estimator.

use serde::Serialize;

/// One horizon of a growth estimate. `count_lo == count_hi` when the count is known exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub horizon: f64,
    pub count_lo: f64,
    pub count_hi: f64,
    pub exact: bool,
}

/// How the headline slope is fitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    /// `log N(T) ≈ h T + c`
    Linear,
    /// `log N(T) ≈ h T + k log T + c`, which absorbs polynomial prefactors.
    PolynomialCorrected,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReportConfig {
    pub r: Option<f64>,
    pub a: Option<f64>,
    #[serde(rename = "R")]
    pub anchor_radius: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub quantity: String,
    pub rows: Vec<ReportRow>,
    pub fit: FitModel,
    /// Fitted growth rate of the geometric mean of the count brackets.
    pub slope: f64,
    pub residual: f64,
    /// Fitted growth rates of the lower and upper counts.
    pub slope_of_lower: f64,
    pub slope_of_upper: f64,
    /// Smallest and largest increment `log N(T_{i+1}) − log N(T_i)` per unit horizon over the
    /// second half of the horizons (liminf and limsup proxies).
    pub slope_lo: f64,
    pub slope_hi: f64,
    pub config: ReportConfig,
    /// Notes on partial results (budget exhaustion, uncertified rows).
    pub notes: Vec<String>,
}

impl EntropyReport {
    pub fn from_rows(quantity: &str, rows: Vec<ReportRow>, fit: FitModel, config: ReportConfig) -> Self {
        let xs: Vec<f64> = rows.iter().map(|r| r.horizon).collect();
        let mid: Vec<f64> = rows.iter().map(|r| 0.5 * (r.count_lo.ln() + r.count_hi.ln())).collect();
        let lo: Vec<f64> = rows.iter().map(|r| r.count_lo.ln()).collect();
        let hi: Vec<f64> = rows.iter().map(|r| r.count_hi.ln()).collect();
        let (slope, residual) = fit_slope(&xs, &mid, fit);
        let (slope_of_lower, _) = fit_slope(&xs, &lo, fit);
        let (slope_of_upper, _) = fit_slope(&xs, &hi, fit);
        let (slope_lo, slope_hi) = increment_range(&xs, &mid);
        EntropyReport {
            quantity: quantity.to_string(),
            rows,
            fit,
            slope,
            residual,
            slope_of_lower,
            slope_of_upper,
            slope_lo,
            slope_hi,
            config,
            notes: Vec::new(),
        }
    }

    pub fn empty(quantity: &str, config: ReportConfig) -> Self {
        EntropyReport::from_rows(quantity, Vec::new(), FitModel::Linear, config)
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }
}

/// Least-squares fit; returns the coefficient of the horizon and the RMS residual.
/// Falls back to the linear model when there are too few points for the corrected one, or when
/// the fitted prefactor exponent is negative: counts here have non-decreasing polynomial prefactors,
/// and a negative exponent only absorbs a transient approach to the exponential rate. With eight or
/// more horizons the corrected model is fitted on the second half only.
pub fn fit_slope(xs: &[f64], ys: &[f64], model: FitModel) -> (f64, f64) {
    if model == FitModel::PolynomialCorrected && xs.len() >= 8 {
        let start = xs.len() / 2;
        return fit_tail(&xs[start..], &ys[start..], model);
    }
    fit_tail(xs, ys, model)
}

fn fit_tail(xs: &[f64], ys: &[f64], model: FitModel) -> (f64, f64) {
    let n = xs.len();
    if n < 2 {
        return (f64::NAN, f64::NAN);
    }
    let corrected = model == FitModel::PolynomialCorrected && n >= 4 && xs.iter().all(|&x| x > 0.0);
    if !corrected {
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let h = sxy / sxx;
        let c = my - h * mx;
        return (h, rms(xs.iter().zip(ys).map(|(x, y)| y - h * x - c), n));
    }
    // normal equations for y = h x + k ln x + c
    let cols: Vec<[f64; 3]> = xs.iter().map(|&x| [x, x.ln(), 1.0]).collect();
    let mut m = [[0.0; 3]; 3];
    let mut v = [0.0; 3];
    for (row, &y) in cols.iter().zip(ys) {
        for i in 0..3 {
            v[i] += row[i] * y;
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let Some(sol) = solve3(m, v).filter(|sol| sol[1] >= 0.0) else {
        return fit_tail(xs, ys, FitModel::Linear);
    };
    let res = cols
        .iter()
        .zip(ys)
        .map(|(row, y)| y - (sol[0] * row[0] + sol[1] * row[1] + sol[2] * row[2]));
    (sol[0], rms(res, n))
}

fn rms(res: impl Iterator<Item = f64>, n: usize) -> f64 {
    (res.map(|r| r * r).sum::<f64>() / n as f64).sqrt()
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..3 {
                    m[row][k] -= f * m[col][k];
                }
                v[row] -= f * v[col];
            }
        }
    }
    Some([v[0] / m[0][0], v[1] / m[1][1], v[2] / m[2][2]])
}

fn increment_range(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n < 2 {
        return (f64::NAN, f64::NAN);
    }
    let start = (n / 2).min(n - 2);
    let incs: Vec<f64> = (start..n - 1)
        .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
        .collect();
    (
        incs.iter().copied().fold(f64::INFINITY, f64::min),
        incs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponential_fit() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3f64.ln() * x + 0.7).collect();
        let (h, r) = fit_slope(&xs, &ys, FitModel::Linear);
        assert!((h - 3f64.ln()).abs() < 1e-12 && r < 1e-12);
        let (h, _) = fit_slope(&xs, &ys, FitModel::PolynomialCorrected);
        assert!((h - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn polynomial_growth_has_zero_corrected_rate() {
        let xs: Vec<f64> = (1..=14).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x).ln()).collect();
        let (h, _) = fit_slope(&xs, &ys, FitModel::PolynomialCorrected);
        assert!(h.abs() < 1e-9);
        let (h, _) = fit_slope(&xs, &ys, FitModel::Linear);
        assert!(h > 0.1);
    }

    #[test]
    fn transient_approach_uses_linear_fit() {
        // 2^T + 2T approaches its rate from below; a free log T term would overshoot log 2
        let xs: Vec<f64> = (1..=14).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2f64.powf(*x) + 2.0 * x).ln()).collect();
        let (h, _) = fit_slope(&xs, &ys, FitModel::PolynomialCorrected);
        assert!((h - 2f64.ln()).abs() < 0.02);
        assert!((fit_slope(&xs, &ys, FitModel::Linear).0 - 2f64.ln()).abs() > 0.02);
    }

    #[test]
    fn increments() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [0.0, 5.0, 6.0, 7.0, 9.0];
        assert_eq!(increment_range(&xs, &ys), (1.0, 2.0));
    }
}
