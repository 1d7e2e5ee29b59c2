//! Evaluation report over a count table, as aligned text or tab-separated
//! values.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::dataio::{table2, CustomerGroup};
use crate::error::Result;
use crate::stats::{
    column_share, correlation_matrix, gender_age_correlations, identity_pairing,
    per_product_gender_correlation, percent_correct, round1, row_share, Axis, ContingencyTable,
    CorrelationResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    Tsv,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(Format::Tsv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected tsv or text)")),
        }
    }
}

/// Per-group, per-sample shares of the fixture as originally printed
/// (groups × samples, one decimal).
pub const REFERENCE_ROW_SHARE: [[f64; 8]; 8] = [
    [79.5, 11.5, 8.3, 6.3, 4.6, 3.3, 2.3, 6.3],
    [2.3, 48.1, 8.3, 0.0, 1.5, 11.7, 0.0, 6.3],
    [2.3, 1.9, 50.0, 6.3, 1.5, 11.7, 0.0, 6.3],
    [2.3, 1.9, 0.0, 56.3, 0.0, 3.3, 0.0, 18.0],
    [6.8, 5.8, 8.3, 6.3, 84.6, 21.7, 2.3, 6.3],
    [2.3, 26.9, 8.3, 0.0, 1.5, 48.3, 2.3, 0.0],
    [2.3, 1.9, 16.7, 6.3, 6.2, 6.7, 93.0, 12.5],
    [2.3, 1.9, 0.0, 18.8, 0.0, 3.3, 0.0, 43.8],
];

/// A row-share cell whose computed value differs from the reference printout.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub group: CustomerGroup,
    pub sample: String,
    pub computed: f64,
    pub printed: f64,
}

/// Cells of the fixture's row shares that disagree with
/// [`REFERENCE_ROW_SHARE`] at one decimal. Empty for any other table.
pub fn row_share_discrepancies(table: &ContingencyTable) -> Result<Vec<Discrepancy>> {
    if table != &table2() {
        return Ok(Vec::new());
    }
    let shares = row_share(table)?;
    let mut out = Vec::new();
    for (g, group) in CustomerGroup::all().into_iter().enumerate() {
        for (s, sample) in shares.row_labels.iter().enumerate() {
            let computed = round1(shares.values[s][g]);
            let printed = REFERENCE_ROW_SHARE[g][s];
            if computed != printed {
                out.push(Discrepancy {
                    group,
                    sample: sample.clone(),
                    computed,
                    printed,
                });
            }
        }
    }
    Ok(out)
}

struct Section {
    title: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

fn pct(x: f64) -> String {
    format!("{:.1}", round1(x))
}

fn r2(x: f64) -> String {
    format!("{:.2}", x)
}

fn r3(x: f64) -> String {
    format!("{:.3}", x)
}

fn group_titles(table: &ContingencyTable) -> Vec<String> {
    if table.n_cols() == CustomerGroup::COUNT {
        CustomerGroup::all().iter().map(|g| g.title()).collect()
    } else {
        table.col_labels().to_vec()
    }
}

/// Builds the full analysis report.
pub fn analyze_report(table: &ContingencyTable, format: Format) -> Result<String> {
    let mut sections = Vec::new();
    let groups = group_titles(table);
    let samples = table.row_labels().to_vec();

    // counts with totals
    let mut header = vec!["Sample".to_string()];
    header.extend(groups.iter().cloned());
    header.push("Total".into());
    let mut rows: Vec<Vec<String>> = (0..table.n_rows())
        .map(|r| {
            let mut row = vec![samples[r].clone()];
            row.extend(table.row(r).iter().map(u64::to_string));
            row.push(table.row_total(r).to_string());
            row
        })
        .collect();
    let mut totals = vec!["Total".to_string()];
    totals.extend((0..table.n_cols()).map(|c| table.col_total(c).to_string()));
    totals.push(table.grand_total().to_string());
    rows.push(totals);
    sections.push(Section {
        title: "Purchase counts".into(),
        header,
        rows,
        notes: vec![],
    });

    // accuracy
    let pairing = identity_pairing(table.n_rows().min(table.n_cols()));
    let pc = percent_correct(table, &pairing)?;
    let mut header = vec!["Sample".to_string()];
    header.extend(pc.labels.iter().cloned());
    header.push("Average".into());
    let mut row = vec!["% Correct".to_string()];
    row.extend(pc.values.iter().map(|&v| pct(v)));
    row.push(pct(pc.mean));
    sections.push(Section {
        title: "Accuracy (sample k advised to group k)".into(),
        header,
        rows: vec![row],
        notes: vec![format!("mean accuracy: {}", pct(pc.mean))],
    });

    // column shares
    let cs = column_share(table)?;
    let mut header = vec!["Sample".to_string()];
    header.extend(groups.iter().cloned());
    let rows = cs
        .values
        .iter()
        .zip(&samples)
        .map(|(vals, s)| {
            let mut row = vec![s.clone()];
            row.extend(vals.iter().map(|&v| pct(v)));
            row
        })
        .collect();
    sections.push(Section {
        title: "Share of each group's purchases by sample (%)".into(),
        header,
        rows,
        notes: vec![],
    });

    // row shares, shown groups × samples
    let rs = row_share(table)?;
    let mut header = vec!["Group".to_string()];
    header.extend(samples.iter().cloned());
    let rows = groups
        .iter()
        .enumerate()
        .map(|(g, title)| {
            let mut row = vec![title.clone()];
            row.extend(rs.values.iter().map(|vals| pct(vals[g])));
            row
        })
        .collect();
    let notes = row_share_discrepancies(table)?
        .into_iter()
        .map(|d| {
            format!(
                "known discrepancy: {}/{} computes {:.1}; the reference printout shows {:.1}",
                d.group.title(),
                d.sample,
                d.computed,
                d.printed
            )
        })
        .collect();
    sections.push(Section {
        title: "Share of each sample's purchases by group (%)".into(),
        header,
        rows,
        notes,
    });

    // correlation matrix over groups
    let m = correlation_matrix(table, Axis::Columns)?;
    let mut header = vec![String::new()];
    header.extend(m.labels.iter().cloned());
    let matrix_rows = |cell: &dyn Fn(&CorrelationResult) -> String| -> Vec<Vec<String>> {
        m.labels
            .iter()
            .enumerate()
            .map(|(a, label)| {
                let mut row = vec![label.clone()];
                row.extend((0..m.labels.len()).map(|b| cell(m.get(a, b))));
                row
            })
            .collect()
    };
    sections.push(Section {
        title: "Pearson correlation between groups".into(),
        header: header.clone(),
        rows: matrix_rows(&|c| r3(c.r)),
        notes: vec![format!("n = {} samples per group", table.n_rows())],
    });
    let p_rows = m
        .labels
        .iter()
        .enumerate()
        .map(|(a, label)| {
            let mut row = vec![label.clone()];
            row.extend((0..m.labels.len()).map(|b| {
                if a == b {
                    ".".to_string()
                } else {
                    r3(m.get(a, b).p_two_tailed)
                }
            }));
            row
        })
        .collect();
    sections.push(Section {
        title: "Sig. (2-tailed)".into(),
        header,
        rows: p_rows,
        notes: vec![],
    });

    // male vs female per age band
    let ga = gender_age_correlations(table)?;
    let bands = ["Teen", "Young", "Adult", "Senior"];
    let mut header = vec![String::new()];
    header.extend(bands.iter().map(|b| b.to_string()));
    let mut r_row = vec!["Correlation".to_string()];
    r_row.extend(ga.iter().map(|c| r2(c.r)));
    let mut full_row = vec!["r (3 dp)".to_string()];
    full_row.extend(ga.iter().map(|c| r3(c.r)));
    let mut p_row = vec!["Sig. (2-tailed)".to_string()];
    p_row.extend(ga.iter().map(|c| r3(c.p_two_tailed)));
    sections.push(Section {
        title: "Male vs female correlation by age band".into(),
        header,
        rows: vec![r_row, full_row, p_row],
        notes: vec![],
    });

    // per product
    let pp = per_product_gender_correlation(table)?;
    let rows = pp
        .iter()
        .zip(&samples)
        .map(|(c, s)| vec![s.clone(), r2(c.r), r3(c.p_two_tailed)])
        .collect();
    sections.push(Section {
        title: "Male vs female correlation per sample (n = 4 age bands)".into(),
        header: vec![
            "Sample".into(),
            "Correlation".into(),
            "Sig. (2-tailed)".into(),
        ],
        rows,
        notes: vec![],
    });

    Ok(render(&sections, format))
}

fn render(sections: &[Section], format: Format) -> String {
    let mut out = String::new();
    for (k, s) in sections.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        match format {
            Format::Tsv => {
                writeln!(out, "# {}", s.title).unwrap();
                writeln!(out, "{}", s.header.join("\t")).unwrap();
                for row in &s.rows {
                    writeln!(out, "{}", row.join("\t")).unwrap();
                }
                for note in &s.notes {
                    writeln!(out, "# {note}").unwrap();
                }
            }
            Format::Text => {
                writeln!(out, "{}", s.title).unwrap();
                writeln!(out, "{}", "=".repeat(s.title.chars().count())).unwrap();
                let cols = s.header.len();
                let widths: Vec<usize> = (0..cols)
                    .map(|c| {
                        std::iter::once(&s.header)
                            .chain(&s.rows)
                            .filter_map(|r| r.get(c))
                            .map(|v| v.chars().count())
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                for row in std::iter::once(&s.header).chain(&s.rows) {
                    let line: Vec<String> = row
                        .iter()
                        .enumerate()
                        .map(|(c, v)| {
                            if c == 0 {
                                format!("{v:<w$}", w = widths[c])
                            } else {
                                format!("{v:>w$}", w = widths[c])
                            }
                        })
                        .collect();
                    writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
                }
                for note in &s.notes {
                    writeln!(out, "{note}").unwrap();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_discrepancies() {
        let d = row_share_discrepancies(&table2()).unwrap();
        let cells: Vec<(String, &str, f64, f64)> = d
            .iter()
            .map(|d| (d.group.title(), d.sample.as_str(), d.computed, d.printed))
            .collect();
        assert_eq!(
            cells,
            vec![
                ("MaleAdult".to_string(), "S6", 1.7, 11.7),
                ("MaleSenior".to_string(), "S8", 18.8, 18.0),
            ]
        );
    }

    #[test]
    fn report_headlines() {
        let text = analyze_report(&table2(), Format::Text).unwrap();
        assert!(text.contains("mean accuracy: 62.6"), "{text}");
        assert!(text.lines().any(|l| l.starts_with("Correlation")
            && l.split_whitespace().skip(1).collect::<Vec<_>>()
                == ["-0.11", "0.55", "-0.33", "0.52"]));
        assert!(text.contains("MaleAdult/S6 computes 1.7"));
        let tsv = analyze_report(&table2(), Format::Tsv).unwrap();
        assert!(tsv.contains("Correlation\t-0.11\t0.55\t-0.33\t0.52\n"));
    }

    #[test]
    fn format_tokens() {
        assert_eq!("TSV".parse::<Format>().unwrap(), Format::Tsv);
        assert!("csv".parse::<Format>().is_err());
    }
}
