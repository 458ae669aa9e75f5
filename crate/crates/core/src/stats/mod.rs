//! Descriptive statistics, time-series tests, and correlation tables over
//! per-window series.

mod correlation;
mod describe;
mod hypothesis;

pub use correlation::{correlation_table, pearson, stars, CorrelationCell, CorrelationTable};
pub use describe::{describe, DescriptiveStats};
pub use hypothesis::{
    adf_critical_value, adf_test, default_adf_lags, jarque_bera, ljung_box, TestKind, TestResult,
    ADF_CRITICAL_VALUES, DEFAULT_LJUNG_BOX_LAGS,
};

/// Values aligned to `(date, window)`; `None` marks a missing observation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    pub values: Vec<Option<f64>>,
}

impl Series {
    pub fn new(values: Vec<Option<f64>>) -> Self {
        Series { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Non-missing values in order.
    pub fn present(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }
}

impl From<Vec<f64>> for Series {
    fn from(values: Vec<f64>) -> Self {
        Series { values: values.into_iter().map(Some).collect() }
    }
}

impl From<&[f64]> for Series {
    fn from(values: &[f64]) -> Self {
        values.to_vec().into()
    }
}

impl FromIterator<Option<f64>> for Series {
    fn from_iter<I: IntoIterator<Item = Option<f64>>>(iter: I) -> Self {
        Series { values: iter.into_iter().collect() }
    }
}

/// Population central moments m2, m3, m4 about the mean.
pub(crate) fn central_moments(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}
