use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{encode_group, CustomerGroup, SampleCatalog};
use crate::error::{Error, Result};
use crate::nnet::TrainingPair;
use crate::stats::ContingencyTable;

const HEADER: [&str; 3] = ["gender", "age_band", "sample"];

/// One observed purchase.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PurchaseRecord {
    pub group: CustomerGroup,
    pub sample: String,
}

impl PurchaseRecord {
    pub fn new(group: CustomerGroup, sample: impl Into<String>) -> Self {
        PurchaseRecord {
            group,
            sample: sample.into(),
        }
    }
}

pub fn load_records(path: &Path, catalog: &SampleCatalog) -> Result<Vec<PurchaseRecord>> {
    let text = std::fs::read_to_string(path)?;
    parse_records(&text, catalog)
}

/// Parses a `gender,age_band,sample` CSV. Tokens are case-insensitive and
/// sample ids are normalized to the catalog's spelling.
pub fn parse_records(text: &str, catalog: &SampleCatalog) -> Result<Vec<PurchaseRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut records = Vec::new();
    let mut saw_header = false;
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.iter().all(str::is_empty) {
            continue;
        }
        let is_header = row.len() == 3
            && row
                .iter()
                .zip(HEADER)
                .all(|(a, b)| a.eq_ignore_ascii_case(b));
        if !saw_header {
            if !is_header {
                return Err(Error::parse(
                    line,
                    format!("expected header `{}`", HEADER.join(",")),
                ));
            }
            saw_header = true;
            continue;
        }
        if is_header {
            return Err(Error::parse(line, "duplicate header row"));
        }
        if row.len() != 3 {
            return Err(Error::parse(
                line,
                format!("expected 3 fields, got {}", row.len()),
            ));
        }
        let gender = row[0].parse().map_err(|e: String| Error::parse(line, e))?;
        let age = row[1].parse().map_err(|e: String| Error::parse(line, e))?;
        let sample = parse_sample(&row[2], catalog).map_err(|e| Error::parse(line, e))?;
        records.push(PurchaseRecord {
            group: CustomerGroup { gender, age },
            sample,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyData("no purchase records".into()));
    }
    Ok(records)
}

fn parse_sample(token: &str, catalog: &SampleCatalog) -> std::result::Result<String, String> {
    let digits = token
        .strip_prefix('S')
        .or_else(|| token.strip_prefix('s'))
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
    if digits.is_none() {
        return Err(format!("malformed sample `{token}` (expected S<k>)"));
    }
    catalog
        .index_of(token)
        .map(|i| catalog.ids()[i].clone())
        .ok_or_else(|| {
            format!(
                "unknown sample `{token}` (catalog has {} samples)",
                catalog.len()
            )
        })
}

pub fn records_to_csv(records: &[PurchaseRecord]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{}\n",
            r.group.gender.as_str(),
            r.group.age.as_str(),
            r.sample
        ));
    }
    out
}

/// Counts records into a catalog × groups table.
pub fn tabulate(records: &[PurchaseRecord], catalog: &SampleCatalog) -> Result<ContingencyTable> {
    let mut counts = vec![vec![0u64; CustomerGroup::COUNT]; catalog.len()];
    for r in records {
        let s = catalog
            .index_of(&r.sample)
            .ok_or_else(|| Error::Config(format!("sample `{}` is not in the catalog", r.sample)))?;
        counts[s][r.group.index()] += 1;
    }
    ContingencyTable::new(
        counts,
        catalog.ids().to_vec(),
        CustomerGroup::all().iter().map(|g| g.code()).collect(),
    )
}

/// Regenerates the record multiset behind a count table: `counts[s][g]`
/// copies of `(g, s)`, row-major.
pub fn expand_counts(table: &ContingencyTable) -> Result<Vec<PurchaseRecord>> {
    if table.n_cols() != CustomerGroup::COUNT {
        return Err(Error::Shape {
            what: "customer group columns",
            expected: CustomerGroup::COUNT,
            got: table.n_cols(),
        });
    }
    let groups = CustomerGroup::all();
    let mut out = Vec::with_capacity(table.grand_total() as usize);
    for (s, label) in table.row_labels().iter().enumerate() {
        for (g, &group) in groups.iter().enumerate() {
            for _ in 0..table.get(s, g) {
                out.push(PurchaseRecord::new(group, label.clone()));
            }
        }
    }
    Ok(out)
}

/// One-hot group input, one-hot sample target.
pub fn to_training_pairs(
    records: &[PurchaseRecord],
    catalog: &SampleCatalog,
) -> Result<Vec<TrainingPair>> {
    records
        .iter()
        .map(|r| {
            let s = catalog.index_of(&r.sample).ok_or_else(|| {
                Error::Config(format!("sample `{}` is not in the catalog", r.sample))
            })?;
            let mut target = vec![0.0; catalog.len()];
            target[s] = 1.0;
            Ok((encode_group(r.group), target))
        })
        .collect()
}

/// Draws `per_group` purchases for every group, each sample chosen in
/// proportion to that group's column of `table`.
pub fn synthetic_records(
    table: &ContingencyTable,
    per_group: usize,
    seed: u64,
) -> Result<Vec<PurchaseRecord>> {
    if per_group == 0 {
        return Err(Error::Config(
            "per-group sample count must be positive".into(),
        ));
    }
    if table.n_cols() != CustomerGroup::COUNT {
        return Err(Error::Shape {
            what: "customer group columns",
            expected: CustomerGroup::COUNT,
            got: table.n_cols(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_group * CustomerGroup::COUNT);
    for (g, group) in CustomerGroup::all().into_iter().enumerate() {
        let dist = WeightedIndex::new(table.column(g))
            .map_err(|_| Error::DivisionByZero(format!("group {}", table.col_labels()[g])))?;
        for _ in 0..per_group {
            let s = dist.sample(&mut rng);
            out.push(PurchaseRecord::new(group, table.row_labels()[s].clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{table2, AgeBand, Gender};

    #[test]
    fn single_record_tabulates() {
        let catalog = SampleCatalog::eval8();
        let recs = parse_records("gender,age_band,sample\nfemale,adult,S7\n", &catalog).unwrap();
        let t = tabulate(&recs, &catalog).unwrap();
        assert_eq!(t.grand_total(), 1);
        assert_eq!(t.get(6, 6), 1);
    }

    #[test]
    fn case_insensitive_tokens() {
        let catalog = SampleCatalog::eval8();
        let recs = parse_records("Gender,Age_Band,Sample\nMALE, Old ,s2\n", &catalog).unwrap();
        assert_eq!(
            recs[0].group,
            CustomerGroup::new(Gender::Male, AgeBand::Senior)
        );
        assert_eq!(recs[0].sample, "S2");
    }

    #[test]
    fn bad_age_cites_line() {
        let catalog = SampleCatalog::eval8();
        let text = "gender,age_band,sample\nmale,teen,S1\nmale,toddler,S1\n";
        let err = parse_records(text, &catalog).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn unknown_sample_and_duplicate_header() {
        let catalog = SampleCatalog::eval8();
        let err = parse_records("gender,age_band,sample\nmale,teen,S9\n", &catalog).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_records("gender,age_band,sample\nmale,teen,X1\n", &catalog).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let text = "gender,age_band,sample\nmale,teen,S1\ngender,age_band,sample\n";
        let err = parse_records(text, &catalog).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(
            parse_records("teen,male,S1\n", &catalog),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn empty_input_is_empty_data() {
        let catalog = SampleCatalog::eval8();
        assert!(matches!(
            parse_records("", &catalog),
            Err(Error::EmptyData(_))
        ));
        assert!(matches!(
            parse_records("gender,age_band,sample\n", &catalog),
            Err(Error::EmptyData(_))
        ));
    }

    #[test]
    fn fixture_expansion() {
        let recs = expand_counts(&table2()).unwrap();
        assert_eq!(recs.len(), 308);
        let male_teen_s1 = recs
            .iter()
            .filter(|r| r.group.index() == 0 && r.sample == "S1")
            .count();
        assert_eq!(male_teen_s1, 35);
        let pairs = to_training_pairs(&recs, &SampleCatalog::eval8()).unwrap();
        assert_eq!(pairs.len(), 308);
        assert!(pairs.iter().all(|(i, t)| i.len() == 8 && t.len() == 8));
    }

    #[test]
    fn training_target_is_sample_one_hot() {
        let rec = PurchaseRecord::new(CustomerGroup::new(Gender::Female, AgeBand::Young), "S6");
        let pairs = to_training_pairs(&[rec], &SampleCatalog::eval8()).unwrap();
        assert_eq!(pairs[0].1, vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(pairs[0].0[5], 1.0);
    }

    #[test]
    fn all_zero_table_expands_to_nothing() {
        let zero = tabulate(&[], &SampleCatalog::eval8()).unwrap();
        assert!(expand_counts(&zero).unwrap().is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let catalog = SampleCatalog::eval8();
        let recs = expand_counts(&table2()).unwrap();
        let back = parse_records(&records_to_csv(&recs), &catalog).unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn synthetic_is_seeded_and_sized() {
        let a = synthetic_records(&table2(), 10, 4).unwrap();
        let b = synthetic_records(&table2(), 10, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 80);
        assert!(synthetic_records(&table2(), 0, 4).is_err());
    }
}
