//! Rule file reader.
//!
//! ```text
//! # comment
//! rule young-trend salience 10
//! if age = young
//! then assert segment trend
//!
//! rule trend-boost
//! if segment = trend
//! then boost S2 0.1
//! ```
//!
//! Rules are separated by blank lines. Every error carries the 1-based line
//! it was found on.

use super::{Action, Comparator, Condition, Rule, Value};
use crate::dataio::SampleCatalog;
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Rule {
        line,
        msg: msg.into(),
    }
}

/// Parses and validates a rule file against `catalog`.
pub fn parse_rules(text: &str, catalog: &SampleCatalog) -> Result<Vec<Rule>> {
    let mut rules: Vec<(usize, Rule)> = Vec::new();
    let mut current: Option<(usize, Rule)> = None;

    let finish =
        |current: &mut Option<(usize, Rule)>, rules: &mut Vec<(usize, Rule)>| -> Result<()> {
            if let Some((line, rule)) = current.take() {
                if rule.conditions.is_empty() {
                    return Err(err(line, format!("rule `{}` has no `if` lines", rule.id)));
                }
                if let Some((_, _)) = rules.iter().find(|(_, r)| r.id == rule.id) {
                    return Err(err(line, format!("duplicate rule id `{}`", rule.id)));
                }
                rules.push((line, rule));
            }
            Ok(())
        };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            // a blank line (or comment-only line) ends the current block
            if raw.trim().is_empty() {
                finish(&mut current, &mut rules)?;
            }
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "rule" => {
                if current.is_some() {
                    return Err(err(
                        line_no,
                        "`rule` inside an unfinished block; separate rules with a blank line",
                    ));
                }
                let id = words
                    .get(1)
                    .ok_or_else(|| err(line_no, "`rule` needs an id"))?;
                let salience = match &words[2..] {
                    [] => 0,
                    ["salience", n] => n
                        .parse::<i64>()
                        .map_err(|_| err(line_no, format!("salience `{n}` is not an integer")))?,
                    _ => return Err(err(line_no, "expected `rule <id> [salience N]`")),
                };
                current = Some((
                    line_no,
                    Rule::new(*id, Vec::new(), Vec::new()).with_salience(salience),
                ));
            }
            "if" => {
                let rule = &mut current
                    .as_mut()
                    .ok_or_else(|| err(line_no, "`if` outside a rule block"))?
                    .1;
                if words.len() < 4 {
                    return Err(err(line_no, "expected `if <key> <op> <value>`"));
                }
                let op = Comparator::parse(words[2])
                    .ok_or_else(|| err(line_no, format!("unknown comparator `{}`", words[2])))?;
                let value = Value::parse(&words[3..].join(" "));
                if op.is_ordering() && matches!(value, Value::Text(_)) {
                    return Err(err(
                        line_no,
                        format!("`{op}` needs a numeric value, got `{value}`"),
                    ));
                }
                rule.conditions.push(Condition::new(words[1], op, value));
            }
            "then" => {
                let rule = &mut current
                    .as_mut()
                    .ok_or_else(|| err(line_no, "`then` outside a rule block"))?
                    .1;
                let action =
                    match words.get(1) {
                        Some(&"assert") if words.len() >= 4 => Action::AssertFact {
                            key: words[2].to_string(),
                            value: Value::parse(&words[3..].join(" ")),
                        },
                        Some(&"boost") if words.len() == 4 => {
                            let index = catalog.index_of(words[2]).ok_or_else(|| {
                                err(line_no, format!("unknown sample `{}`", words[2]))
                            })?;
                            let delta = words[3]
                                .parse::<f64>()
                                .ok()
                                .filter(|d| d.is_finite())
                                .ok_or_else(|| {
                                    err(line_no, format!("boost `{}` is not a number", words[3]))
                                })?;
                            Action::AdjustScore {
                                sample: catalog.ids()[index].clone(),
                                delta,
                            }
                        }
                        _ => return Err(err(
                            line_no,
                            "expected `then assert <key> <value>` or `then boost <sample> <delta>`",
                        )),
                    };
                rule.actions.push(action);
            }
            other => return Err(err(line_no, format!("unexpected `{other}`"))),
        }
    }
    finish(&mut current, &mut rules)?;
    Ok(rules.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# profile rules
rule young-trend salience 10
if age = young
then assert segment trend

rule trend-boost
if segment = trend
if score >= 0.5
then boost s2 0.1
then boost S3 -0.05
";

    #[test]
    fn parses_blocks() {
        let rules = parse_rules(SAMPLE, &SampleCatalog::eval8()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].id, "young-trend");
        assert_eq!(rules[0].salience, 10);
        assert_eq!(rules[1].conditions.len(), 2);
        assert_eq!(rules[1].conditions[1].value, Value::Number(0.5));
        assert_eq!(
            rules[1].actions[0],
            Action::AdjustScore {
                sample: "S2".into(),
                delta: 0.1
            }
        );
    }

    fn line_of(text: &str) -> usize {
        match parse_rules(text, &SampleCatalog::eval8()) {
            Err(Error::Rule { line, .. }) => line,
            other => panic!("expected rule error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of("rule a\nif gender < male\nthen boost S1 1"), 2);
        assert_eq!(line_of("rule a\nif k = v\nthen boost S9 1"), 3);
        assert_eq!(line_of("rule a\nif k ~ v\n"), 2);
        assert_eq!(line_of("if k = v\n"), 1);
        assert_eq!(line_of("rule a\nthen boost S1 1\n"), 1);
        assert_eq!(line_of("rule a\nif k = v\n\nrule a\nif k = w\n"), 4);
        assert_eq!(line_of("rule a salience high\nif k = v\n"), 1);
        assert_eq!(line_of("rule a\nif k = v\nthen boost S1 lots\n"), 3);
        assert_eq!(line_of("rule a\nif k = v\nwhen x\n"), 3);
    }

    #[test]
    fn empty_file_has_no_rules() {
        assert!(parse_rules("", &SampleCatalog::eval8()).unwrap().is_empty());
        assert!(parse_rules("# nothing\n\n", &SampleCatalog::eval8())
            .unwrap()
            .is_empty());
    }
}
