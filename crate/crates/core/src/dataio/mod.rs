//! Customer groups, product catalogs, purchase records and the reference
//! count table.

mod fixture;
mod records;

pub use fixture::{table2, TABLE2_COUNTS};
pub use records::{
    expand_counts, load_records, parse_records, records_to_csv, synthetic_records, tabulate,
    to_training_pairs, PurchaseRecord,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gender {
    Male,
    Female,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgeBand {
    /// 13–19
    Teen,
    /// 20–29
    Young,
    /// 30–45
    Adult,
    /// 46 and over
    Senior,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::Male, Gender::Female];
    pub const TOKENS: &'static str = "male, female";

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }
}

impl AgeBand {
    pub const ALL: [AgeBand; 4] = [
        AgeBand::Teen,
        AgeBand::Young,
        AgeBand::Adult,
        AgeBand::Senior,
    ];
    pub const TOKENS: &'static str = "teen, young, adult, senior";

    pub fn as_str(self) -> &'static str {
        match self {
            AgeBand::Teen => "teen",
            AgeBand::Young => "young",
            AgeBand::Adult => "adult",
            AgeBand::Senior => "senior",
        }
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "male" => Ok(Gender::Male),
            "female" => Ok(Gender::Female),
            other => Err(format!(
                "unknown gender `{other}` (expected one of: {})",
                Self::TOKENS
            )),
        }
    }
}

impl FromStr for AgeBand {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "teen" => Ok(AgeBand::Teen),
            "young" => Ok(AgeBand::Young),
            "adult" => Ok(AgeBand::Adult),
            "senior" | "old" => Ok(AgeBand::Senior),
            other => Err(format!(
                "unknown age band `{other}` (expected one of: {})",
                Self::TOKENS
            )),
        }
    }
}

/// One of the eight gender × age segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CustomerGroup {
    pub gender: Gender,
    pub age: AgeBand,
}

impl CustomerGroup {
    pub const COUNT: usize = 8;

    pub fn new(gender: Gender, age: AgeBand) -> Self {
        CustomerGroup { gender, age }
    }

    /// All groups in index order: the four male bands, then the four female.
    pub fn all() -> [CustomerGroup; 8] {
        std::array::from_fn(|i| CustomerGroup::from_index(i).expect("index below 8"))
    }

    pub fn index(self) -> usize {
        let g = match self.gender {
            Gender::Male => 0,
            Gender::Female => 4,
        };
        g + self.age as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        if i >= Self::COUNT {
            return None;
        }
        Some(CustomerGroup {
            gender: Gender::ALL[i / 4],
            age: AgeBand::ALL[i % 4],
        })
    }

    /// Column code, e.g. `M_TEEN` or `F_SENIOR`.
    pub fn code(self) -> String {
        let g = match self.gender {
            Gender::Male => "M",
            Gender::Female => "F",
        };
        format!("{g}_{}", self.age.as_str().to_ascii_uppercase())
    }

    /// Display name, e.g. `MaleTeen`.
    pub fn title(self) -> String {
        fn cap(s: &str) -> String {
            let mut c = s.chars();
            c.next()
                .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
                .unwrap_or_default()
        }
        format!("{}{}", cap(self.gender.as_str()), cap(self.age.as_str()))
    }
}

impl fmt::Display for CustomerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.gender.as_str(), self.age.as_str())
    }
}

impl FromStr for CustomerGroup {
    type Err = String;

    /// Accepts `male-teen`, `male teen` or `male,teen`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s
            .trim()
            .splitn(2, |c: char| c == '-' || c == ',' || c.is_whitespace());
        let gender = parts.next().unwrap_or_default().parse()?;
        let age = parts.next().unwrap_or_default().parse()?;
        Ok(CustomerGroup { gender, age })
    }
}

/// One-hot input vector for a group: 1.0 at its index, 0.0 elsewhere.
pub fn encode_group(group: CustomerGroup) -> Vec<f64> {
    let mut v = vec![0.0; CustomerGroup::COUNT];
    v[group.index()] = 1.0;
    v
}

/// Ordered list of product sample ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCatalog {
    ids: Vec<String>,
    labels: Vec<String>,
}

impl SampleCatalog {
    pub fn new(ids: Vec<String>, labels: Vec<String>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::Config("sample catalog is empty".into()));
        }
        if ids.len() != labels.len() {
            return Err(Error::Shape {
                what: "catalog labels",
                expected: ids.len(),
                got: labels.len(),
            });
        }
        for (k, id) in ids.iter().enumerate() {
            if ids[..k].iter().any(|o| o.eq_ignore_ascii_case(id)) {
                return Err(Error::Config(format!("duplicate sample id `{id}`")));
            }
        }
        Ok(SampleCatalog { ids, labels })
    }

    /// `S1 … Sn`, labelled by their ids.
    pub fn numbered(n: usize) -> Result<Self> {
        let ids: Vec<String> = (1..=n).map(|k| format!("S{k}")).collect();
        Self::new(ids.clone(), ids)
    }

    /// The eight evaluated samples.
    pub fn eval8() -> Self {
        Self::numbered(8).expect("eight ids")
    }

    /// The 52 color mixes of the full catalog.
    pub fn paper52() -> Self {
        Self::numbered(52).expect("52 ids")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Case-insensitive lookup.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        let id = id.trim();
        self.ids.iter().position(|s| s.eq_ignore_ascii_case(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_order() {
        let all = CustomerGroup::all();
        assert_eq!(all[0], CustomerGroup::new(Gender::Male, AgeBand::Teen));
        assert_eq!(all[5], CustomerGroup::new(Gender::Female, AgeBand::Young));
        assert_eq!(all[7], CustomerGroup::new(Gender::Female, AgeBand::Senior));
        for (i, g) in all.iter().enumerate() {
            assert_eq!(g.index(), i);
        }
    }

    #[test]
    fn one_hot_encoding() {
        assert_eq!(
            encode_group(CustomerGroup::new(Gender::Male, AgeBand::Teen)),
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        let fy = encode_group(CustomerGroup::new(Gender::Female, AgeBand::Young));
        assert_eq!(fy[5], 1.0);
        let encodings: Vec<Vec<f64>> = CustomerGroup::all().into_iter().map(encode_group).collect();
        for (i, e) in encodings.iter().enumerate() {
            assert_eq!(e.iter().sum::<f64>(), 1.0);
            assert_eq!(e.iter().filter(|&&x| x == 1.0).count(), 1);
            for other in &encodings[i + 1..] {
                assert_ne!(e, other);
            }
        }
    }

    #[test]
    fn parsing_tokens() {
        let g: CustomerGroup = "Female-Adult".parse().unwrap();
        assert_eq!(g, CustomerGroup::new(Gender::Female, AgeBand::Adult));
        let g: CustomerGroup = "male old".parse().unwrap();
        assert_eq!(g.age, AgeBand::Senior);
        let err = "female child".parse::<CustomerGroup>().unwrap_err();
        assert!(err.contains("teen, young, adult, senior"), "{err}");
        assert!("robot teen".parse::<CustomerGroup>().is_err());
    }

    #[test]
    fn codes_and_titles() {
        let g = CustomerGroup::new(Gender::Female, AgeBand::Senior);
        assert_eq!(g.code(), "F_SENIOR");
        assert_eq!(g.title(), "FemaleSenior");
        assert_eq!(g.to_string(), "female-senior");
    }

    #[test]
    fn catalog_lookup_and_validation() {
        let c = SampleCatalog::eval8();
        assert_eq!(c.index_of("s3"), Some(2));
        assert_eq!(c.index_of("S9"), None);
        assert_eq!(SampleCatalog::paper52().len(), 52);
        assert!(SampleCatalog::new(vec![], vec![]).is_err());
        assert!(
            SampleCatalog::new(vec!["A".into(), "a".into()], vec!["x".into(), "y".into()]).is_err()
        );
    }
}
