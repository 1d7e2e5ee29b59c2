//! Evaluation statistics over a samples × customer-groups count table.

mod correlation;
mod pearson;
pub mod special;
mod tables;

pub use correlation::{
    correlation_matrix, gender_age_correlations, per_product_gender_correlation, Axis,
    CorrelationMatrix,
};
pub use pearson::{pearson, CorrelationResult};
pub use tables::{
    column_share, identity_pairing, percent_correct, row_share, PercentCorrect, ShareTable,
};

use crate::error::{Error, Result};

/// Purchase counts: rows are product samples, columns are customer groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl ContingencyTable {
    pub fn new(
        counts: Vec<Vec<u64>>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        if counts.len() != row_labels.len() {
            return Err(Error::Shape {
                what: "table row labels",
                expected: counts.len(),
                got: row_labels.len(),
            });
        }
        for row in &counts {
            if row.len() != col_labels.len() {
                return Err(Error::Shape {
                    what: "table row width",
                    expected: col_labels.len(),
                    got: row.len(),
                });
            }
        }
        Ok(ContingencyTable {
            counts,
            row_labels,
            col_labels,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.counts.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row][col]
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.counts[row]
    }

    pub fn column(&self, col: usize) -> Vec<u64> {
        self.counts.iter().map(|r| r[col]).collect()
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_total(&self, row: usize) -> u64 {
        self.counts[row].iter().sum()
    }

    pub fn col_total(&self, col: usize) -> u64 {
        self.counts.iter().map(|r| r[col]).sum()
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Row index holding the largest count in `col`; the first row wins ties.
    pub fn column_mode(&self, col: usize) -> Option<usize> {
        let column = self.column(col);
        let max = *column.iter().max()?;
        column.iter().position(|&c| c == max)
    }
}

/// Rounds to one decimal place, halves away from zero.
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Rounds to `places` decimals, halves away from zero.
pub fn round_to(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    (x * scale).round() / scale
}
