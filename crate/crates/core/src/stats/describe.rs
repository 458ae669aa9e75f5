use serde::{Deserialize, Serialize};

use super::{central_moments, Series};
use crate::error::{Error, Result};

/// Summary row set: mean, median, extremes, sample standard deviation,
/// skewness and raw (non-excess) kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub maximum: f64,
    pub minimum: f64,
    /// With the n−1 denominator.
    pub std_dev: f64,
    /// m3 / m2^(3/2); missing for zero variance.
    pub skewness: Option<f64>,
    /// m4 / m2²; missing for zero variance.
    pub kurtosis: Option<f64>,
}

pub fn describe(series: &Series) -> Result<DescriptiveStats> {
    let mut xs = series.present();
    if xs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "describe needs at least 2 values, got {}",
            xs.len()
        )));
    }
    let n = xs.len();
    let (mean, m2, m3, m4) = central_moments(&xs);
    xs.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 { xs[n / 2] } else { 0.5 * (xs[n / 2 - 1] + xs[n / 2]) };
    // rounding noise of a constant series sits far below this
    let degenerate = m2 <= 1e-26 * mean * mean;
    Ok(DescriptiveStats {
        count: n,
        mean,
        median,
        maximum: xs[n - 1],
        minimum: xs[0],
        std_dev: (m2 * n as f64 / (n - 1) as f64).sqrt(),
        skewness: (!degenerate).then(|| m3 / m2.powf(1.5)),
        kurtosis: (!degenerate).then(|| m4 / (m2 * m2)),
    })
}
