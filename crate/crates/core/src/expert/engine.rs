use std::collections::BTreeMap;

use super::{Action, Fact, Rule, Value, WorkingMemory};
use crate::error::{Error, Result};

/// One rule firing and what it changed.
#[derive(Clone, Debug, PartialEq)]
pub struct Firing {
    pub rule_id: String,
    /// `(key, previous value, new value)` for each asserted fact; a previous
    /// value means the assertion overwrote it.
    pub asserted: Vec<(String, Option<Value>, Value)>,
    pub boosts: Vec<(String, f64)>,
}

/// Outcome of running the rule set to a fixpoint.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Consultation {
    pub facts: WorkingMemory,
    pub log: Vec<Firing>,
    /// Summed score adjustments keyed by sample id as written in the rules.
    pub adjustments: BTreeMap<String, f64>,
}

/// Forward chaining with refraction: each cycle fires the unfired rule with
/// the highest salience whose conditions all hold, lowest id first among
/// equals, until no unfired rule matches.
pub fn infer(rules: &[Rule], initial_facts: &[Fact]) -> Result<Consultation> {
    for rule in rules {
        rule.validate()?;
    }
    let mut facts = WorkingMemory::new();
    for fact in initial_facts {
        if fact.key.is_empty() {
            return Err(Error::Config("fact with an empty key".into()));
        }
        if facts.insert(fact.key.clone(), fact.value.clone()).is_some() {
            return Err(Error::Config(format!("duplicate fact `{}`", fact.key)));
        }
    }

    let mut agenda: Vec<&Rule> = rules.iter().collect();
    agenda.sort_by(|a, b| b.salience.cmp(&a.salience).then_with(|| a.id.cmp(&b.id)));
    let mut fired = vec![false; agenda.len()];

    let mut out = Consultation::default();
    while let Some(k) = (0..agenda.len())
        .find(|&k| !fired[k] && agenda[k].conditions.iter().all(|c| c.holds(&facts)))
    {
        fired[k] = true;
        let rule = agenda[k];
        let mut firing = Firing {
            rule_id: rule.id.clone(),
            asserted: Vec::new(),
            boosts: Vec::new(),
        };
        for action in &rule.actions {
            match action {
                Action::AssertFact { key, value } => {
                    let prev = facts.insert(key.clone(), value.clone());
                    firing.asserted.push((key.clone(), prev, value.clone()));
                }
                Action::AdjustScore { sample, delta } => {
                    *out.adjustments.entry(sample.clone()).or_insert(0.0) += delta;
                    firing.boosts.push((sample.clone(), *delta));
                }
            }
        }
        out.log.push(firing);
    }
    out.facts = facts;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expert::{Comparator, Condition};

    fn eq(key: &str, value: &str) -> Condition {
        Condition::new(key, Comparator::Eq, Value::Text(value.into()))
    }

    fn boost(sample: &str, delta: f64) -> Action {
        Action::AdjustScore {
            sample: sample.into(),
            delta,
        }
    }

    fn assert_fact(key: &str, value: &str) -> Action {
        Action::AssertFact {
            key: key.into(),
            value: Value::Text(value.into()),
        }
    }

    #[test]
    fn no_rules_is_immediate_fixpoint() {
        let c = infer(&[], &[Fact::text("gender", "female")]).unwrap();
        assert!(c.log.is_empty());
        assert_eq!(c.facts.len(), 1);
        assert!(c.adjustments.is_empty());
    }

    #[test]
    fn single_rule_fires_once() {
        let rules = [Rule::new(
            "R1",
            vec![eq("group", "female-young")],
            vec![boost("S6", 0.2)],
        )];
        let c = infer(&rules, &[Fact::text("group", "female-young")]).unwrap();
        assert_eq!(c.log.len(), 1);
        assert_eq!(c.log[0].rule_id, "R1");
        assert_eq!(c.adjustments["S6"], 0.2);
    }

    #[test]
    fn two_step_chain() {
        // B is listed first and sorts first by id, but only matches once A
        // has asserted segment=trend.
        let rules = [
            Rule::new("B", vec![eq("segment", "trend")], vec![boost("S2", 0.1)]),
            Rule::new(
                "A",
                vec![eq("age", "young")],
                vec![assert_fact("segment", "trend")],
            ),
        ];
        let c = infer(&rules, &[Fact::text("age", "young")]).unwrap();
        let order: Vec<&str> = c.log.iter().map(|f| f.rule_id.as_str()).collect();
        assert_eq!(order, ["A", "B"]);
        assert_eq!(c.adjustments["S2"], 0.1);
        assert_eq!(c.facts["segment"], Value::Text("trend".into()));
    }

    #[test]
    fn salience_then_id_ordering() {
        let rules = [
            Rule::new("b", vec![eq("k", "v")], vec![boost("S1", 1.0)]),
            Rule::new("a", vec![eq("k", "v")], vec![boost("S1", 1.0)]),
            Rule::new("z", vec![eq("k", "v")], vec![boost("S1", 1.0)]).with_salience(5),
        ];
        let c = infer(&rules, &[Fact::text("k", "v")]).unwrap();
        let order: Vec<&str> = c.log.iter().map(|f| f.rule_id.as_str()).collect();
        assert_eq!(order, ["z", "a", "b"]);
        assert_eq!(c.adjustments["S1"], 3.0);
    }

    #[test]
    fn overwrite_is_logged() {
        let rules = [Rule::new(
            "R",
            vec![eq("tier", "basic")],
            vec![assert_fact("tier", "gold")],
        )];
        let c = infer(&rules, &[Fact::text("tier", "basic")]).unwrap();
        assert_eq!(c.log.len(), 1);
        let (key, prev, new) = &c.log[0].asserted[0];
        assert_eq!(key, "tier");
        assert_eq!(prev, &Some(Value::Text("basic".into())));
        assert_eq!(new, &Value::Text("gold".into()));
    }

    #[test]
    fn rules_fire_at_most_once_even_when_still_matching() {
        let rules = [
            Rule::new("ping", vec![eq("k", "v")], vec![assert_fact("k", "v")]),
            Rule::new("pong", vec![eq("k", "v")], vec![assert_fact("k", "v")]),
        ];
        let c = infer(&rules, &[Fact::text("k", "v")]).unwrap();
        assert_eq!(c.log.len(), 2);
    }

    #[test]
    fn duplicate_facts_rejected() {
        let facts = [Fact::text("k", "a"), Fact::text("k", "b")];
        assert!(infer(&[], &facts).is_err());
    }
}
