//! Forward-chaining rule shell.
//!
//! A knowledge base of if-then [`Rule`]s runs against a working memory of
//! [`Fact`]s. Rules may assert new facts or adjust the score of a product
//! sample; the adjustments are added to network scores by [`recommend`].

mod engine;
mod parse;
mod recommend;

pub use engine::{infer, Consultation, Firing};
pub use parse::parse_rules;
pub use recommend::{consultation_facts, recommend, Recommendation, RecommendationEntry};

use std::cmp::Ordering;
use std::fmt;

use crate::dataio::SampleCatalog;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Number(f64),
}

impl Value {
    /// Numbers where the token parses as one, text otherwise.
    pub fn parse(token: &str) -> Value {
        match token.parse::<f64>() {
            Ok(n) if n.is_finite() => Value::Number(n),
            _ => Value::Text(token.to_string()),
        }
    }

    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => a.partial_cmp(b),
            (Value::Text(a), Value::Text(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Text(s) => f.write_str(s),
            Value::Number(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub key: String,
    pub value: Value,
}

impl Fact {
    pub fn new(key: impl Into<String>, value: Value) -> Self {
        Fact {
            key: key.into(),
            value,
        }
    }

    pub fn text(key: impl Into<String>, value: impl Into<String>) -> Self {
        Fact::new(key, Value::Text(value.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn parse(token: &str) -> Option<Self> {
        Some(match token {
            "=" | "==" => Comparator::Eq,
            "!=" | "≠" => Comparator::Ne,
            "<" => Comparator::Lt,
            "<=" | "≤" => Comparator::Le,
            ">" => Comparator::Gt,
            ">=" | "≥" => Comparator::Ge,
            _ => return None,
        })
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, Comparator::Eq | Comparator::Ne)
    }

    fn holds(self, fact: &Value, expected: &Value) -> bool {
        let ord = fact.partial_cmp(expected);
        match self {
            Comparator::Eq => ord == Some(Ordering::Equal),
            Comparator::Ne => ord != Some(Ordering::Equal),
            Comparator::Lt => ord == Some(Ordering::Less),
            Comparator::Le => matches!(ord, Some(Ordering::Less | Ordering::Equal)),
            Comparator::Gt => ord == Some(Ordering::Greater),
            Comparator::Ge => matches!(ord, Some(Ordering::Greater | Ordering::Equal)),
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub key: String,
    pub op: Comparator,
    pub value: Value,
}

impl Condition {
    pub fn new(key: impl Into<String>, op: Comparator, value: Value) -> Self {
        Condition {
            key: key.into(),
            op,
            value,
        }
    }

    /// A condition on an absent key never holds, `!=` included.
    pub fn holds(&self, memory: &WorkingMemory) -> bool {
        memory
            .get(&self.key)
            .is_some_and(|v| self.op.holds(v, &self.value))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    AssertFact { key: String, value: Value },
    AdjustScore { sample: String, delta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub id: String,
    pub salience: i64,
    pub conditions: Vec<Condition>,
    pub actions: Vec<Action>,
}

impl Rule {
    pub fn new(id: impl Into<String>, conditions: Vec<Condition>, actions: Vec<Action>) -> Self {
        Rule {
            id: id.into(),
            salience: 0,
            conditions,
            actions,
        }
    }

    pub fn with_salience(mut self, salience: i64) -> Self {
        self.salience = salience;
        self
    }

    /// Structural checks that do not depend on a catalog.
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Error::Rule { line: 0, msg };
        if self.id.is_empty() {
            return Err(err("rule without an id".into()));
        }
        if self.conditions.is_empty() {
            return Err(err(format!("rule `{}` has no conditions", self.id)));
        }
        for c in &self.conditions {
            if c.key.is_empty() {
                return Err(err(format!(
                    "rule `{}` has a condition without a key",
                    self.id
                )));
            }
            if c.op.is_ordering() && matches!(c.value, Value::Text(_)) {
                return Err(err(format!(
                    "rule `{}`: `{}` compares the text value `{}`",
                    self.id, c.op, c.value
                )));
            }
        }
        for a in &self.actions {
            if let Action::AdjustScore { delta, .. } = a {
                if !delta.is_finite() {
                    return Err(err(format!("rule `{}` has a non-finite boost", self.id)));
                }
            }
        }
        Ok(())
    }
}

/// Validates a rule set: per-rule checks, unique ids, and every boosted
/// sample present in `catalog`.
pub fn validate_rules(rules: &[Rule], catalog: &SampleCatalog) -> Result<()> {
    for (k, rule) in rules.iter().enumerate() {
        rule.validate()?;
        if rules[..k].iter().any(|r| r.id == rule.id) {
            return Err(Error::Rule {
                line: 0,
                msg: format!("duplicate rule id `{}`", rule.id),
            });
        }
        for a in &rule.actions {
            if let Action::AdjustScore { sample, .. } = a {
                if catalog.index_of(sample).is_none() {
                    return Err(Error::Rule {
                        line: 0,
                        msg: format!("rule `{}` boosts unknown sample `{sample}`", rule.id),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Facts keyed by name. Iteration is in key order.
pub type WorkingMemory = std::collections::BTreeMap<String, Value>;
