//! Line-oriented text model format.
//!
//! ```text
//! PAMODEL v1
//! layers: 8,30,8
//! learning_rate: 0.2
//! momentum: 0.5
//! use_bias: false
//! w <layer> <to-unit j> <from-unit i> <value>
//! ```
//!
//! Values are written in Rust's shortest round-trip decimal form, so a loaded
//! model reproduces the saved one's outputs bit for bit. Momentum history is
//! not stored.

use std::fmt::Write as _;

use super::{Matrix, Network, NetworkConfig};
use crate::error::{Error, Result};

pub const MODEL_HEADER: &str = "PAMODEL v1";

pub fn save_model(net: &Network) -> Vec<u8> {
    let config = net.config();
    let mut out = String::new();
    let layers: Vec<String> = config.layer_sizes.iter().map(|n| n.to_string()).collect();
    writeln!(out, "{MODEL_HEADER}").unwrap();
    writeln!(out, "layers: {}", layers.join(",")).unwrap();
    writeln!(out, "learning_rate: {}", config.learning_rate).unwrap();
    writeln!(out, "momentum: {}", config.momentum).unwrap();
    writeln!(out, "use_bias: {}", config.use_bias).unwrap();
    for (l, w) in net.weights().iter().enumerate() {
        for j in 0..w.rows() {
            for i in 0..w.cols() {
                writeln!(out, "w {l} {j} {i} {}", w.get(j, i)).unwrap();
            }
        }
    }
    out.into_bytes()
}

pub fn load_model(bytes: &[u8]) -> Result<Network> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::model("encoding", e.to_string()))?;
    let mut lines = text.lines();

    match lines.next().map(str::trim) {
        Some(MODEL_HEADER) => {}
        Some(other) if other.starts_with("PAMODEL") => {
            let tag = other.trim_start_matches("PAMODEL").trim();
            return Err(Error::Version(tag.to_string()));
        }
        _ => return Err(Error::model("header", format!("expected `{MODEL_HEADER}`"))),
    }

    let mut layer_sizes: Option<Vec<usize>> = None;
    let mut learning_rate: Option<f64> = None;
    let mut momentum: Option<f64> = None;
    let mut use_bias: Option<bool> = None;
    let mut weight_lines: Vec<(usize, usize, usize, f64)> = Vec::new();

    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("w ") {
            weight_lines.push(parse_weight(rest)?);
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::model(line, "expected `key: value` or a weight line"))?;
        let value = value.trim();
        match key.trim() {
            "layers" => {
                let sizes = value
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::model("layers", e.to_string()))?;
                set_once(&mut layer_sizes, sizes, "layers")?;
            }
            "learning_rate" => set_once(
                &mut learning_rate,
                parse_f64("learning_rate", value)?,
                "learning_rate",
            )?,
            "momentum" => set_once(&mut momentum, parse_f64("momentum", value)?, "momentum")?,
            "use_bias" => {
                let b = value
                    .parse::<bool>()
                    .map_err(|e| Error::model("use_bias", e.to_string()))?;
                set_once(&mut use_bias, b, "use_bias")?;
            }
            other => return Err(Error::model(other, "unknown key")),
        }
    }

    let config = NetworkConfig {
        layer_sizes: layer_sizes.ok_or_else(|| Error::model("layers", "missing"))?,
        learning_rate: learning_rate.ok_or_else(|| Error::model("learning_rate", "missing"))?,
        momentum: momentum.ok_or_else(|| Error::model("momentum", "missing"))?,
        use_bias: use_bias.ok_or_else(|| Error::model("use_bias", "missing"))?,
        ..NetworkConfig::default()
    };
    config
        .validate()
        .map_err(|e| Error::model("config", e.to_string()))?;

    let mut weights: Vec<Matrix> = Network::zeros(&config)?.weights().to_vec();
    let mut seen: Vec<Vec<bool>> = weights
        .iter()
        .map(|m| vec![false; m.rows() * m.cols()])
        .collect();
    for (l, j, i, value) in weight_lines {
        let field = format!("w {l} {j} {i}");
        let m = weights
            .get_mut(l)
            .ok_or_else(|| Error::model(&field, "layer out of range"))?;
        if j >= m.rows() || i >= m.cols() {
            return Err(Error::model(&field, "unit index out of range"));
        }
        let slot = &mut seen[l][j * m.cols() + i];
        if *slot {
            return Err(Error::model(&field, "duplicate weight"));
        }
        *slot = true;
        m.set(j, i, value);
    }
    for (l, m) in weights.iter().enumerate() {
        if let Some(pos) = seen[l].iter().position(|s| !s) {
            let (j, i) = (pos / m.cols(), pos % m.cols());
            return Err(Error::model(format!("w {l} {j} {i}"), "missing weight"));
        }
    }
    Network::from_weights(config, weights)
}

fn set_once<T>(slot: &mut Option<T>, value: T, field: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::model(field, "given more than once"));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_f64(field: &str, value: &str) -> Result<f64> {
    let v = value
        .parse::<f64>()
        .map_err(|e| Error::model(field, format!("`{value}`: {e}")))?;
    if !v.is_finite() {
        return Err(Error::model(field, "value is not finite"));
    }
    Ok(v)
}

fn parse_weight(rest: &str) -> Result<(usize, usize, usize, f64)> {
    let field = format!("w {rest}");
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(Error::model(field, "expected `w l j i value`"));
    }
    let index = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| Error::model(&field, e.to_string()))
    };
    let (l, j, i) = (index(parts[0])?, index(parts[1])?, index(parts[2])?);
    let value = parse_f64(&field, parts[3])?;
    Ok((l, j, i, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nnet::init_weights;

    fn sample_net() -> Network {
        init_weights(&NetworkConfig {
            layer_sizes: vec![3, 4, 2],
            seed: 5,
            ..NetworkConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn round_trip_preserves_outputs() {
        let net = sample_net();
        let loaded = load_model(&save_model(&net)).unwrap();
        assert_eq!(loaded.weights(), net.weights());
        for input in [[1.0, 0.0, 0.0], [0.3, -0.2, 0.9]] {
            assert_eq!(
                loaded.forward(&input).unwrap(),
                net.forward(&input).unwrap()
            );
        }
    }

    #[test]
    fn header_is_first_line() {
        let bytes = save_model(&sample_net());
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("PAMODEL v1\nlayers: 3,4,2\nlearning_rate: 0.2\n"));
    }

    #[test]
    fn truncated_payload_rejected() {
        let bytes = save_model(&sample_net());
        let cut = &bytes[..bytes.len() / 2];
        // cut may land mid-number; both outcomes are model errors
        assert!(matches!(load_model(cut), Err(Error::Model { .. })));
        let text = String::from_utf8(bytes.clone()).unwrap();
        let without_last: Vec<&str> = text.lines().take(text.lines().count() - 1).collect();
        let err = load_model(without_last.join("\n").as_bytes()).unwrap_err();
        assert!(err.to_string().contains("w 1 1 3"), "{err}");
    }

    #[test]
    fn unknown_version_rejected() {
        let text = String::from_utf8(save_model(&sample_net()))
            .unwrap()
            .replacen("PAMODEL v1", "PAMODEL v7", 1);
        assert!(matches!(load_model(text.as_bytes()), Err(Error::Version(v)) if v == "v7"));
    }

    #[test]
    fn unknown_key_rejected() {
        let text = String::from_utf8(save_model(&sample_net()))
            .unwrap()
            .replacen("use_bias: false", "use_bias: false\ncolour: red", 1);
        let err = load_model(text.as_bytes()).unwrap_err();
        assert!(
            matches!(&err, Error::Model { field, .. } if field == "colour"),
            "{err}"
        );
    }

    #[test]
    fn garbage_rejected() {
        assert!(load_model(b"").is_err());
        assert!(load_model(b"hello").is_err());
        assert!(load_model(&[0xff, 0xfe]).is_err());
    }
}
