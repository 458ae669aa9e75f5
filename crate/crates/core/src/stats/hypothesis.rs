//! Augmented Dickey-Fuller, Jarque-Bera and Ljung-Box tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{central_moments, Series};
use crate::error::{Error, Result};

pub const DEFAULT_LJUNG_BOX_LAGS: usize = 20;

/// Large-sample Dickey-Fuller critical values, regression with a constant and
/// no trend: (level, critical value).
pub const ADF_CRITICAL_VALUES: [(f64, f64); 3] = [(0.01, -3.43), (0.05, -2.86), (0.10, -2.57)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestKind {
    AugmentedDickeyFuller,
    JarqueBera,
    LjungBox,
}

impl TestKind {
    pub fn label(self) -> &'static str {
        match self {
            TestKind::AugmentedDickeyFuller => "ADF",
            TestKind::JarqueBera => "Jarque-Bera",
            TestKind::LjungBox => "Ljung-Box",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: TestKind,
    pub statistic: f64,
    /// Asymptotic p-value; ADF reports a critical value instead.
    pub p_value: Option<f64>,
    pub critical_value: Option<f64>,
    pub level: f64,
    pub reject: bool,
    /// Observations used after dropping missing values.
    pub nobs: usize,
    /// ADF lag order or Ljung-Box lag count; zero for Jarque-Bera.
    pub lags: usize,
}

/// `floor(4 (T/100)^(1/4))`
pub fn default_adf_lags(nobs: usize) -> usize {
    (4.0 * (nobs as f64 / 100.0).powf(0.25)).floor() as usize
}

pub fn adf_critical_value(level: f64) -> Result<f64> {
    ADF_CRITICAL_VALUES
        .iter()
        .find(|(l, _)| (l - level).abs() < 1e-12)
        .map(|&(_, cv)| cv)
        .ok_or_else(|| Error::InsufficientData(format!("no tabulated ADF critical value at level {level}")))
}

/// Orthonormal basis built by modified Gram-Schmidt; nearly dependent columns
/// are skipped.
struct Basis {
    vectors: Vec<Vec<f64>>,
}

impl Basis {
    fn new() -> Self {
        Basis { vectors: Vec::new() }
    }

    /// Removes the span of the basis from `v` (two sweeps).
    fn residualize(&self, v: &mut [f64]) {
        for _ in 0..2 {
            for q in &self.vectors {
                let c = dot(q, v);
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
            }
        }
    }

    fn push(&mut self, mut column: Vec<f64>) {
        let original = dot(&column, &column).sqrt();
        if original == 0.0 {
            return;
        }
        self.residualize(&mut column);
        let norm = dot(&column, &column).sqrt();
        if norm <= 1e-10 * original {
            return;
        }
        column.iter_mut().for_each(|x| *x /= norm);
        self.vectors.push(column);
    }

    fn rank(&self) -> usize {
        self.vectors.len()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dickey-Fuller t statistic from
/// Δyₜ = α + γ yₜ₋₁ + Σᵢ βᵢ Δyₜ₋ᵢ + εₜ, compared with the constant-case
/// critical value at `level` (one of 0.01, 0.05, 0.10). Rejection means the
/// unit root is rejected, i.e. the series looks stationary.
///
/// The t statistic is obtained by partialling the constant and lagged
/// differences out of both yₜ₋₁ and Δyₜ, which matches full OLS.
pub fn adf_test(series: &Series, lag_order: Option<usize>, level: f64) -> Result<TestResult> {
    let critical = adf_critical_value(level)?;
    let y = series.present();
    let t = y.len();
    if t < 25 {
        return Err(Error::InsufficientData(format!("ADF needs at least 25 values, got {t}")));
    }
    let p = lag_order.unwrap_or_else(|| default_adf_lags(t));
    let diff: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // rows are t = p+1 ..= T-1 in 0-based levels; diff[t-1] = y[t] - y[t-1]
    let rows = (t - 1).saturating_sub(p);
    if rows <= p + 2 {
        return Err(Error::InsufficientData(format!("ADF with {p} lags needs more than {t} values")));
    }

    let mut basis = Basis::new();
    basis.push(vec![1.0; rows]);
    for lag in 1..=p {
        basis.push((0..rows).map(|r| diff[p + r - lag]).collect());
    }
    let mut lagged: Vec<f64> = (0..rows).map(|r| y[p + r]).collect();
    let mut response: Vec<f64> = (0..rows).map(|r| diff[p + r]).collect();
    basis.residualize(&mut lagged);
    basis.residualize(&mut response);

    let sxx = dot(&lagged, &lagged);
    let scale = y.iter().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    if sxx <= 1e-20 * scale {
        return Err(Error::Degenerate("lagged level is collinear with the other regressors".into()));
    }
    let gamma = dot(&lagged, &response) / sxx;
    let rss: f64 = lagged.iter().zip(&response).map(|(x, d)| (d - gamma * x).powi(2)).sum();
    let dof = rows as f64 - (basis.rank() + 1) as f64;
    let se = (rss / dof / sxx).sqrt();
    let statistic = if se > 0.0 {
        gamma / se
    } else if gamma.abs() <= 1e-12 {
        0.0
    } else {
        gamma.signum() * f64::INFINITY
    };

    Ok(TestResult {
        kind: TestKind::AugmentedDickeyFuller,
        statistic,
        p_value: None,
        critical_value: Some(critical),
        level,
        reject: statistic < critical,
        nobs: t,
        lags: p,
    })
}

/// JB = T/6 (S² + (K−3)²/4) with population skewness S and raw kurtosis K.
/// The χ²(2) survival function is exactly `exp(-JB/2)`.
pub fn jarque_bera(series: &Series, level: f64) -> Result<TestResult> {
    let xs = series.present();
    let t = xs.len();
    if t < 8 {
        return Err(Error::InsufficientData(format!("Jarque-Bera needs at least 8 values, got {t}")));
    }
    let (mean, m2, m3, m4) = central_moments(&xs);
    if m2 <= 1e-26 * mean * mean {
        return Err(Error::Degenerate("zero variance".into()));
    }
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let statistic = t as f64 / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
    let p = (-statistic / 2.0).exp();
    Ok(TestResult {
        kind: TestKind::JarqueBera,
        statistic,
        p_value: Some(p),
        critical_value: None,
        level,
        reject: p < level,
        nobs: t,
        lags: 0,
    })
}

/// Q = T(T+2) Σₕ ρ̂ₕ² / (T−h) against χ²(lags).
pub fn ljung_box(series: &Series, lags: usize, level: f64) -> Result<TestResult> {
    let xs = series.present();
    let t = xs.len();
    if lags == 0 || t <= lags {
        return Err(Error::InsufficientData(format!("Ljung-Box with {lags} lags on {t} values")));
    }
    let mean = xs.iter().sum::<f64>() / t as f64;
    let centered: Vec<f64> = xs.iter().map(|x| x - mean).collect();
    let denom = dot(&centered, &centered);
    if denom <= 1e-26 * mean * mean * t as f64 {
        return Err(Error::Degenerate("zero variance".into()));
    }
    let tf = t as f64;
    let q = (1..=lags)
        .map(|h| {
            let rho = dot(&centered[h..], &centered[..t - h]) / denom;
            rho * rho / (tf - h as f64)
        })
        .sum::<f64>()
        * tf
        * (tf + 2.0);
    let chi2 = ChiSquared::new(lags as f64).expect("positive degrees of freedom");
    let p = chi2.sf(q).clamp(0.0, 1.0);
    Ok(TestResult {
        kind: TestKind::LjungBox,
        statistic: q,
        p_value: Some(p),
        critical_value: None,
        level,
        reject: p < level,
        nobs: t,
        lags,
    })
}
