use super::{pearson, ContingencyTable, CorrelationResult};
use crate::error::{Error, Result};

/// Which vectors of a table get correlated with each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Sample rows, each a vector over groups.
    Rows,
    /// Group columns, each a vector over samples.
    Columns,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<CorrelationResult>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: usize, b: usize) -> &CorrelationResult {
        &self.cells[a][b]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn as_f64(v: &[u64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn paired(left: &str, right: &str, x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    pearson(x, y).map_err(|e| Error::Pair {
        left: left.to_string(),
        right: right.to_string(),
        source: Box::new(e),
    })
}

/// Pairwise Pearson correlations along `axis`. The diagonal is r = 1, p = 0.
pub fn correlation_matrix(table: &ContingencyTable, axis: Axis) -> Result<CorrelationMatrix> {
    let (labels, vectors): (Vec<String>, Vec<Vec<f64>>) = match axis {
        Axis::Rows => (
            table.row_labels().to_vec(),
            (0..table.n_rows()).map(|r| as_f64(table.row(r))).collect(),
        ),
        Axis::Columns => (
            table.col_labels().to_vec(),
            (0..table.n_cols())
                .map(|c| as_f64(&table.column(c)))
                .collect(),
        ),
    };
    let k = vectors.len();
    let n = vectors.first().map_or(0, Vec::len);
    let mut cells = vec![vec![CorrelationResult::perfect(n); k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let res = paired(&labels[a], &labels[b], &vectors[a], &vectors[b])?;
            cells[a][b] = res;
            cells[b][a] = res;
        }
    }
    Ok(CorrelationMatrix { labels, cells })
}

fn require_eight_groups(table: &ContingencyTable) -> Result<()> {
    if table.n_cols() != 8 {
        return Err(Error::Shape {
            what: "customer group columns",
            expected: 8,
            got: table.n_cols(),
        });
    }
    Ok(())
}

/// Male versus female sample vectors for the teen, young, adult and senior
/// bands, in that order. Columns must be in customer-group order.
pub fn gender_age_correlations(table: &ContingencyTable) -> Result<[CorrelationResult; 4]> {
    require_eight_groups(table)?;
    let labels = table.col_labels();
    let mut out = [CorrelationResult::perfect(table.n_rows()); 4];
    for (band, slot) in out.iter_mut().enumerate() {
        let male = as_f64(&table.column(band));
        let female = as_f64(&table.column(band + 4));
        *slot = paired(&labels[band], &labels[band + 4], &male, &female)?;
    }
    Ok(out)
}

/// For each sample row, its four male age-band counts against its four
/// female ones.
pub fn per_product_gender_correlation(table: &ContingencyTable) -> Result<Vec<CorrelationResult>> {
    require_eight_groups(table)?;
    (0..table.n_rows())
        .map(|r| {
            let row = as_f64(table.row(r));
            let label = &table.row_labels()[r];
            paired(
                &format!("{label} male"),
                &format!("{label} female"),
                &row[..4],
                &row[4..],
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn duplicated_gender_columns_correlate_perfectly() {
        let counts: Vec<Vec<u64>> = vec![
            vec![5, 1, 2, 0],
            vec![1, 4, 0, 3],
            vec![0, 2, 6, 1],
            vec![2, 0, 1, 7],
        ]
        .into_iter()
        .map(|m| m.iter().chain(m.iter()).copied().collect())
        .collect();
        let t = ContingencyTable::new(counts, labels("S", 4), labels("g", 8)).unwrap();
        for c in gender_age_correlations(&t).unwrap() {
            assert!((c.r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn doubled_female_row_is_perfect() {
        let row: Vec<u64> = vec![1, 3, 2, 5, 2, 6, 4, 10];
        let t = ContingencyTable::new(vec![row], labels("S", 1), labels("g", 8)).unwrap();
        let res = per_product_gender_correlation(&t).unwrap();
        assert!((res[0].r - 1.0).abs() < 1e-12);
        assert_eq!(res[0].n, 4);
    }

    #[test]
    fn constant_row_names_the_pair() {
        let row: Vec<u64> = vec![2, 2, 2, 2, 1, 0, 3, 1];
        let t = ContingencyTable::new(vec![row], labels("S", 1), labels("g", 8)).unwrap();
        let err = per_product_gender_correlation(&t).unwrap_err();
        assert!(
            matches!(&err, Error::Pair { left, .. } if left == "S1 male"),
            "{err}"
        );
        assert!(err.is_data_error());
    }

    #[test]
    fn matrix_is_symmetric_with_unit_diagonal() {
        let t = ContingencyTable::new(
            vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5], vec![3, 5, 8]],
            labels("S", 4),
            labels("g", 3),
        )
        .unwrap();
        for axis in [Axis::Rows, Axis::Columns] {
            let m = correlation_matrix(&t, axis).unwrap();
            for a in 0..m.labels.len() {
                assert_eq!(m.get(a, a).r, 1.0);
                for b in 0..m.labels.len() {
                    assert_eq!(m.get(a, b), m.get(b, a));
                }
            }
        }
    }

    #[test]
    fn wrong_group_count_rejected() {
        let t = ContingencyTable::new(vec![vec![1, 2, 3]], labels("S", 1), labels("g", 3)).unwrap();
        assert!(matches!(
            gender_age_correlations(&t),
            Err(Error::Shape { .. })
        ));
    }
}
