use super::{infer, validate_rules, Consultation, Fact, Rule};
use crate::dataio::{encode_group, CustomerGroup, SampleCatalog};
use crate::error::{Error, Result};
use crate::nnet::Network;

#[derive(Clone, Debug, PartialEq)]
pub struct RecommendationEntry {
    pub sample: String,
    pub blended: f64,
    pub nn_score: f64,
    pub rule_adjust: f64,
}

/// Every catalog sample, best first.
#[derive(Clone, Debug, PartialEq)]
pub struct Recommendation {
    pub group: CustomerGroup,
    pub entries: Vec<RecommendationEntry>,
    pub consultation: Consultation,
}

impl Recommendation {
    pub fn top(&self) -> &RecommendationEntry {
        &self.entries[0]
    }
}

/// Working memory for a consultation about `group`: `gender`, `age` and `group`.
pub fn consultation_facts(group: CustomerGroup) -> Vec<Fact> {
    vec![
        Fact::text("gender", group.gender.as_str()),
        Fact::text("age", group.age.as_str()),
        Fact::text("group", group.to_string()),
    ]
}

/// Ranks the catalog for `group` by `nn_weight·network output + rule boosts`.
/// Ties go to the lower catalog index.
pub fn recommend(
    net: &Network,
    rules: &[Rule],
    catalog: &SampleCatalog,
    group: CustomerGroup,
    nn_weight: f64,
) -> Result<Recommendation> {
    if net.input_size() != CustomerGroup::COUNT {
        return Err(Error::Config(format!(
            "network takes {} inputs, expected one per customer group ({})",
            net.input_size(),
            CustomerGroup::COUNT
        )));
    }
    if net.output_size() != catalog.len() {
        return Err(Error::Config(format!(
            "network has {} outputs but the catalog lists {} samples",
            net.output_size(),
            catalog.len()
        )));
    }
    if !nn_weight.is_finite() {
        return Err(Error::Config("network weight must be finite".into()));
    }
    validate_rules(rules, catalog)?;

    let scores = net.predict(&encode_group(group))?;
    let consultation = infer(rules, &consultation_facts(group))?;

    let mut adjust = vec![0.0; catalog.len()];
    for (sample, delta) in &consultation.adjustments {
        let i = catalog
            .index_of(sample)
            .expect("validated rules only boost catalog samples");
        adjust[i] += delta;
    }

    let mut ranked: Vec<(usize, RecommendationEntry)> = catalog
        .ids()
        .iter()
        .enumerate()
        .map(|(i, id)| {
            (
                i,
                RecommendationEntry {
                    sample: id.clone(),
                    blended: nn_weight * scores[i] + adjust[i],
                    nn_score: scores[i],
                    rule_adjust: adjust[i],
                },
            )
        })
        .collect();
    ranked.sort_by(|(ia, a), (ib, b)| b.blended.total_cmp(&a.blended).then(ia.cmp(ib)));

    Ok(Recommendation {
        group,
        entries: ranked.into_iter().map(|(_, e)| e).collect(),
        consultation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{AgeBand, Gender};
    use crate::expert::{parse_rules, Action, Comparator, Condition, Value};
    use crate::nnet::{init_weights, NetworkConfig};

    fn female_young() -> CustomerGroup {
        CustomerGroup::new(Gender::Female, AgeBand::Young)
    }

    #[test]
    fn empty_rules_sort_raw_outputs() {
        let net = init_weights(&NetworkConfig {
            seed: 4,
            ..NetworkConfig::eval8()
        })
        .unwrap();
        let catalog = SampleCatalog::eval8();
        let rec = recommend(&net, &[], &catalog, female_young(), 1.0).unwrap();
        let mut raw = net.predict(&encode_group(female_young())).unwrap();
        raw.sort_by(|a, b| b.total_cmp(a));
        let ranked: Vec<f64> = rec.entries.iter().map(|e| e.nn_score).collect();
        assert_eq!(ranked, raw);
        assert!(rec.entries.iter().all(|e| e.rule_adjust == 0.0));
    }

    #[test]
    fn uniform_network_plus_one_boost() {
        let net = Network::zeros(&NetworkConfig::eval8()).unwrap();
        let catalog = SampleCatalog::eval8();
        let rules =
            parse_rules("rule r\nif gender = female\nthen boost S3 0.2\n", &catalog).unwrap();
        let rec = recommend(&net, &rules, &catalog, female_young(), 1.0).unwrap();
        assert_eq!(rec.top().sample, "S3");
        assert!((rec.top().blended - 0.7).abs() < 1e-15);
        let rest: Vec<&str> = rec.entries[1..].iter().map(|e| e.sample.as_str()).collect();
        assert_eq!(rest, ["S1", "S2", "S4", "S5", "S6", "S7", "S8"]);
    }

    #[test]
    fn zero_weight_ranks_by_rules_only() {
        let net = init_weights(&NetworkConfig::eval8()).unwrap();
        let catalog = SampleCatalog::eval8();
        let rules = parse_rules(
            "rule a\nif age = young\nthen boost S5 0.3\nthen boost S8 0.1\n",
            &catalog,
        )
        .unwrap();
        let rec = recommend(&net, &rules, &catalog, female_young(), 0.0).unwrap();
        let order: Vec<&str> = rec.entries.iter().map(|e| e.sample.as_str()).collect();
        assert_eq!(order, ["S5", "S8", "S1", "S2", "S3", "S4", "S6", "S7"]);
    }

    #[test]
    fn size_mismatch_is_config_error() {
        let net = Network::zeros(&NetworkConfig::paper52()).unwrap();
        let err = recommend(&net, &[], &SampleCatalog::eval8(), female_young(), 1.0).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn facts_describe_the_group() {
        let rule = Rule::new(
            "g",
            vec![Condition::new(
                "group",
                Comparator::Eq,
                Value::Text("female-young".into()),
            )],
            vec![Action::AdjustScore {
                sample: "S6".into(),
                delta: 0.2,
            }],
        );
        let net = Network::zeros(&NetworkConfig::eval8()).unwrap();
        let rec = recommend(&net, &[rule], &SampleCatalog::eval8(), female_young(), 1.0).unwrap();
        assert_eq!(rec.top().sample, "S6");
        assert_eq!(rec.consultation.log.len(), 1);
    }
}
