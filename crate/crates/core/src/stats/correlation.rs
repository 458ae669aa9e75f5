use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::Series;
use crate::pipeline::{Variable, WindowRecord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub rho: f64,
    /// Two-sided, from the t distribution with N−2 degrees of freedom.
    pub p_value: f64,
    /// Pairs used after pairwise deletion.
    pub n: usize,
}

impl CorrelationCell {
    pub fn stars(&self) -> &'static str {
        stars(self.p_value)
    }
}

/// `***` below 0.1%, `**` below 1%, `*` below 5%.
pub fn stars(p_value: f64) -> &'static str {
    if p_value < 0.001 {
        "***"
    } else if p_value < 0.01 {
        "**"
    } else if p_value < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Sample Pearson correlation over positions where both series are present.
/// Missing when fewer than 3 pairs remain or either side has zero variance.
pub fn pearson(x: &Series, y: &Series) -> Option<CorrelationCell> {
    let pairs: Vec<(f64, f64)> = x
        .values
        .iter()
        .zip(&y.values)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .collect();
    let n = pairs.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 1e-26 * mx * mx * nf || syy <= 1e-26 * my * my * nf || sxx == 0.0 || syy == 0.0 {
        return None;
    }
    let rho = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let dof = nf - 2.0;
    let p_value = if rho.abs() >= 1.0 {
        0.0
    } else if dof < 1.0 {
        1.0
    } else {
        let t = rho * (dof / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, dof).expect("positive degrees of freedom");
        (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0)
    };
    Some(CorrelationCell { rho, p_value, n })
}

/// Grid of correlation cells, rows × columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// Row-major.
    pub cells: Vec<Vec<Option<CorrelationCell>>>,
}

impl CorrelationTable {
    pub fn compute(rows: &[(String, Series)], columns: &[(String, Series)]) -> Self {
        let cells = rows
            .iter()
            .map(|(_, x)| columns.iter().map(|(_, y)| pearson(x, y)).collect())
            .collect();
        CorrelationTable {
            rows: rows.iter().map(|(name, _)| name.clone()).collect(),
            columns: columns.iter().map(|(name, _)| name.clone()).collect(),
            cells,
        }
    }

    pub fn cell(&self, row: usize, column: usize) -> Option<&CorrelationCell> {
        self.cells.get(row)?.get(column)?.as_ref()
    }

    pub fn cell_by_name(&self, row: &str, column: &str) -> Option<&CorrelationCell> {
        let r = self.rows.iter().position(|n| n == row)?;
        let c = self.columns.iter().position(|n| n == column)?;
        self.cell(r, c)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    /// Number of defined cells carrying exactly `marks`.
    pub fn count_stars(&self, marks: &str) -> usize {
        self.cells.iter().flatten().flatten().filter(|c| c.stars() == marks).count()
    }
}

/// Financial variables (r, v, τ, w) as rows against the network metrics
/// (C_k, C_s, e_k, e_s, l) as columns, pairwise deletion per cell.
pub fn correlation_table(records: &[WindowRecord]) -> CorrelationTable {
    let series = |vars: &[Variable]| -> Vec<(String, Series)> {
        vars.iter().map(|&v| (v.name().to_string(), v.series(records))).collect()
    };
    CorrelationTable::compute(&series(&Variable::FINANCIAL), &series(&Variable::NETWORK))
}
