use super::ContingencyTable;
use crate::error::{Error, Result};

/// Per-sample accuracy: the share of a paired group's purchases that went to
/// the sample advised for it.
#[derive(Clone, Debug, PartialEq)]
pub struct PercentCorrect {
    pub labels: Vec<String>,
    /// Full-precision percentages, one per pairing.
    pub values: Vec<f64>,
    pub mean: f64,
}

/// Shares in percent, shaped like the source table (samples × groups).
#[derive(Clone, Debug, PartialEq)]
pub struct ShareTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Pairs sample `i` with group `i` for every row.
pub fn identity_pairing(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, i)).collect()
}

/// `100·counts[s][g] / column_total(g)` for each `(s, g)` in `pairing`.
pub fn percent_correct(
    table: &ContingencyTable,
    pairing: &[(usize, usize)],
) -> Result<PercentCorrect> {
    if pairing.is_empty() {
        return Err(Error::EmptyData("no sample/group pairing".into()));
    }
    let mut labels = Vec::with_capacity(pairing.len());
    let mut values = Vec::with_capacity(pairing.len());
    for &(sample, group) in pairing {
        if sample >= table.n_rows() {
            return Err(Error::Shape {
                what: "pairing sample index",
                expected: table.n_rows(),
                got: sample,
            });
        }
        if group >= table.n_cols() {
            return Err(Error::Shape {
                what: "pairing group index",
                expected: table.n_cols(),
                got: group,
            });
        }
        let total = table.col_total(group);
        if total == 0 {
            return Err(Error::DivisionByZero(format!(
                "group {}",
                table.col_labels()[group]
            )));
        }
        labels.push(table.row_labels()[sample].clone());
        values.push(100.0 * table.get(sample, group) as f64 / total as f64);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(PercentCorrect {
        labels,
        values,
        mean,
    })
}

/// Each cell as a percentage of its group (column) total.
pub fn column_share(table: &ContingencyTable) -> Result<ShareTable> {
    let totals: Vec<u64> = (0..table.n_cols()).map(|c| table.col_total(c)).collect();
    if let Some(c) = totals.iter().position(|&t| t == 0) {
        return Err(Error::DivisionByZero(format!(
            "group {}",
            table.col_labels()[c]
        )));
    }
    Ok(share(table, |_, c| totals[c]))
}

/// Each cell as a percentage of its sample (row) total.
pub fn row_share(table: &ContingencyTable) -> Result<ShareTable> {
    let totals: Vec<u64> = (0..table.n_rows()).map(|r| table.row_total(r)).collect();
    if let Some(r) = totals.iter().position(|&t| t == 0) {
        return Err(Error::DivisionByZero(format!(
            "sample {}",
            table.row_labels()[r]
        )));
    }
    Ok(share(table, |r, _| totals[r]))
}

fn share(table: &ContingencyTable, total: impl Fn(usize, usize) -> u64) -> ShareTable {
    let values = table
        .counts()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, &n)| 100.0 * n as f64 / total(r, c) as f64)
                .collect()
        })
        .collect();
    ShareTable {
        row_labels: table.row_labels().to_vec(),
        col_labels: table.col_labels().to_vec(),
        values,
    }
}
