//! Feedforward sigmoid network trained by online backpropagation with momentum.
//!
//! Units carry no bias by default: every unit computes `o_j = f(z_j)` with
//! `z_j = Σ_i w_ji·o_i` and `f` the logistic function. Setting
//! [`NetworkConfig::use_bias`] adds a constant-1 input to every layer, stored
//! as the last column of each weight matrix.

mod gradcheck;
mod matrix;
mod model_io;
mod train;

pub use gradcheck::{gradient_check, gradient_check_with};
pub use matrix::Matrix;
pub use model_io::{load_model, save_model, MODEL_HEADER};
pub use train::{train, TrainReport, TrainingPair};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Logistic transfer function, `1 / (1 + e^(-z))`.
pub fn sigmoid(z: f64) -> f64 {
    debug_assert!(z.is_finite(), "sigmoid of non-finite input {z}");
    1.0 / (1.0 + (-z).exp())
}

/// Derivative of the logistic function expressed through its output.
#[inline]
fn sigmoid_slope(activation: f64) -> f64 {
    activation * (1.0 - activation)
}

/// Error slope of an output unit: `(desired − actual)·actual·(1 − actual)`.
pub fn output_delta(desired: f64, actual: f64) -> f64 {
    (desired - actual) * sigmoid_slope(actual)
}

/// Error slope of a hidden unit given the slopes and connecting weights of the
/// units it feeds.
pub fn hidden_delta(
    activation: f64,
    downstream_deltas: &[f64],
    downstream_weights: &[f64],
) -> Result<f64> {
    if downstream_deltas.len() != downstream_weights.len() {
        return Err(Error::Shape {
            what: "downstream weights",
            expected: downstream_deltas.len(),
            got: downstream_weights.len(),
        });
    }
    let back: f64 = downstream_deltas
        .iter()
        .zip(downstream_weights)
        .map(|(d, w)| d * w)
        .sum();
    Ok(sigmoid_slope(activation) * back)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    pub layer_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub max_epochs: usize,
    pub target_mse: f64,
    pub seed: u64,
    pub init_half_range: f64,
    pub use_bias: bool,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            layer_sizes: vec![8, 30, 52],
            learning_rate: 0.2,
            momentum: 0.5,
            max_epochs: 5000,
            target_mse: 0.01,
            seed: 0,
            init_half_range: 0.5,
            use_bias: false,
        }
    }
}

impl NetworkConfig {
    /// 8 customer groups in, 30 hidden units, 52 color mixes out.
    pub fn paper52() -> Self {
        Self::default()
    }

    /// 8 customer groups in, 30 hidden units, the 8 evaluated samples out.
    pub fn eval8() -> Self {
        NetworkConfig {
            layer_sizes: vec![8, 30, 8],
            ..Self::default()
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "paper52" => Some(Self::paper52()),
            "eval8" => Some(Self::eval8()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layer_sizes.len() < 2 {
            return Err(Error::Config(format!(
                "need at least two layers, got {}",
                self.layer_sizes.len()
            )));
        }
        if self.layer_sizes.contains(&0) {
            return Err(Error::Config("layer sizes must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        if !(self.init_half_range.is_finite() && self.init_half_range >= 0.0) {
            return Err(Error::Config(format!(
                "init half range must be non-negative, got {}",
                self.init_half_range
            )));
        }
        if !(self.target_mse.is_finite() && self.target_mse >= 0.0) {
            return Err(Error::Config(format!(
                "target mse must be non-negative, got {}",
                self.target_mse
            )));
        }
        Ok(())
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.layer_sizes.last().expect("validated layer sizes")
    }

    /// Shape `(rows, cols)` of the weight matrix feeding layer `l + 1`.
    fn weight_shape(&self, l: usize) -> (usize, usize) {
        let cols = self.layer_sizes[l] + usize::from(self.use_bias);
        (self.layer_sizes[l + 1], cols)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    config: NetworkConfig,
    weights: Vec<Matrix>,
    prev_delta_w: Vec<Matrix>,
}

/// Activations and weighted inputs recorded during a forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardTrace {
    /// One vector per layer; index 0 is the raw input.
    pub activations: Vec<Vec<f64>>,
    /// One vector per non-input layer; `weighted_inputs[l - 1]` feeds layer `l`.
    pub weighted_inputs: Vec<Vec<f64>>,
}

impl ForwardTrace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("trace has an output layer")
    }
}

/// Per non-input layer error slopes; `deltas[l - 1]` belongs to layer `l`.
pub type Deltas = Vec<Vec<f64>>;

/// Seeded uniform initialization in `[-init_half_range, init_half_range]`.
pub fn init_weights(config: &NetworkConfig) -> Result<Network> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let h = config.init_half_range;
    let weights = (0..config.layer_sizes.len() - 1)
        .map(|l| {
            let (rows, cols) = config.weight_shape(l);
            Matrix::from_fn(rows, cols, |_, _| {
                if h == 0.0 {
                    0.0
                } else {
                    rng.gen_range(-h..=h)
                }
            })
        })
        .collect();
    Ok(Network::with_weights(config.clone(), weights))
}

impl Network {
    /// Network with every weight zero. All outputs are 0.5 for any input.
    pub fn zeros(config: &NetworkConfig) -> Result<Self> {
        config.validate()?;
        let weights = (0..config.layer_sizes.len() - 1)
            .map(|l| {
                let (rows, cols) = config.weight_shape(l);
                Matrix::zeros(rows, cols)
            })
            .collect();
        Ok(Network::with_weights(config.clone(), weights))
    }

    /// Builds a network from explicit weight matrices, checking their shapes.
    pub fn from_weights(config: NetworkConfig, weights: Vec<Matrix>) -> Result<Self> {
        config.validate()?;
        if weights.len() != config.layer_sizes.len() - 1 {
            return Err(Error::Shape {
                what: "weight layers",
                expected: config.layer_sizes.len() - 1,
                got: weights.len(),
            });
        }
        for (l, m) in weights.iter().enumerate() {
            let (rows, cols) = config.weight_shape(l);
            if m.rows() != rows {
                return Err(Error::Shape {
                    what: "weight rows",
                    expected: rows,
                    got: m.rows(),
                });
            }
            if m.cols() != cols {
                return Err(Error::Shape {
                    what: "weight columns",
                    expected: cols,
                    got: m.cols(),
                });
            }
            if m.as_slice().iter().any(|w| !w.is_finite()) {
                return Err(Error::model(format!("w {l}"), "non-finite weight"));
            }
        }
        Ok(Network::with_weights(config, weights))
    }

    fn with_weights(config: NetworkConfig, weights: Vec<Matrix>) -> Self {
        let prev_delta_w = weights
            .iter()
            .map(|m| Matrix::zeros(m.rows(), m.cols()))
            .collect();
        Network {
            config,
            weights,
            prev_delta_w,
        }
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [Matrix] {
        &mut self.weights
    }

    /// The weight change applied by the most recent update, per layer.
    pub fn prev_delta_w(&self) -> &[Matrix] {
        &self.prev_delta_w
    }

    pub fn input_size(&self) -> usize {
        self.config.input_size()
    }

    pub fn output_size(&self) -> usize {
        self.config.output_size()
    }

    /// Clears the momentum history.
    pub fn reset_momentum(&mut self) {
        self.prev_delta_w.iter_mut().for_each(|m| m.fill(0.0));
    }

    pub fn forward(&self, input: &[f64]) -> Result<ForwardTrace> {
        if input.len() != self.input_size() {
            return Err(Error::Shape {
                what: "network input",
                expected: self.input_size(),
                got: input.len(),
            });
        }
        let bias = self.config.use_bias;
        let mut activations = Vec::with_capacity(self.weights.len() + 1);
        let mut weighted_inputs = Vec::with_capacity(self.weights.len());
        activations.push(input.to_vec());
        for w in &self.weights {
            let prev = activations.last().expect("input layer present");
            let z: Vec<f64> = (0..w.rows())
                .map(|j| {
                    let row = w.row(j);
                    let sum: f64 = row.iter().zip(prev).map(|(w, o)| w * o).sum();
                    if bias {
                        sum + row[prev.len()]
                    } else {
                        sum
                    }
                })
                .collect();
            activations.push(z.iter().map(|&z| sigmoid(z)).collect());
            weighted_inputs.push(z);
        }
        Ok(ForwardTrace {
            activations,
            weighted_inputs,
        })
    }

    /// Output activations only.
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>> {
        let mut trace = self.forward(input)?;
        Ok(trace.activations.pop().expect("output layer"))
    }

    /// Backpropagates the output error of `trace` against `target`.
    pub fn backward(&self, trace: &ForwardTrace, target: &[f64]) -> Result<Deltas> {
        let output = trace.output();
        if target.len() != output.len() {
            return Err(Error::Shape {
                what: "network target",
                expected: output.len(),
                got: target.len(),
            });
        }
        let layers = self.weights.len();
        let mut deltas: Deltas = vec![Vec::new(); layers];
        deltas[layers - 1] = target
            .iter()
            .zip(output)
            .map(|(&d, &o)| output_delta(d, o))
            .collect();
        for l in (0..layers - 1).rev() {
            // deltas[l] belongs to layer l + 1, fed forward through weights[l + 1].
            let downstream = &self.weights[l + 1];
            let next = &deltas[l + 1];
            let own: Vec<f64> = trace.activations[l + 1]
                .iter()
                .enumerate()
                .map(|(j, &a)| {
                    let back: f64 = next
                        .iter()
                        .enumerate()
                        .map(|(k, d)| d * downstream.get(k, j))
                        .sum();
                    sigmoid_slope(a) * back
                })
                .collect();
            deltas[l] = own;
        }
        Ok(deltas)
    }

    /// Momentum weight update:
    /// `w ← w + momentum·Δw_prev + learning_rate·δ_j·o_i`, then `Δw_prev ← step`.
    pub fn update_weights(&mut self, trace: &ForwardTrace, deltas: &Deltas) -> Result<()> {
        if deltas.len() != self.weights.len() {
            return Err(Error::Shape {
                what: "delta layers",
                expected: self.weights.len(),
                got: deltas.len(),
            });
        }
        let lr = self.config.learning_rate;
        let momentum = self.config.momentum;
        let bias = self.config.use_bias;
        for (l, (w, prev)) in self
            .weights
            .iter_mut()
            .zip(self.prev_delta_w.iter_mut())
            .enumerate()
        {
            let delta = &deltas[l];
            let input = &trace.activations[l];
            if delta.len() != w.rows() {
                return Err(Error::Shape {
                    what: "layer deltas",
                    expected: w.rows(),
                    got: delta.len(),
                });
            }
            if input.len() + usize::from(bias) != w.cols() {
                return Err(Error::Shape {
                    what: "trace activations",
                    expected: w.cols() - usize::from(bias),
                    got: input.len(),
                });
            }
            for (j, &d) in delta.iter().enumerate() {
                let w_row = w.row_mut(j);
                let p_row = prev.row_mut(j);
                for i in 0..w_row.len() {
                    let o = if i < input.len() { input[i] } else { 1.0 };
                    let step = momentum * p_row[i] + lr * d * o;
                    w_row[i] += step;
                    p_row[i] = step;
                }
            }
        }
        Ok(())
    }

    /// Sum over output units of `(target − output)²` for one pattern.
    pub fn squared_error(&self, input: &[f64], target: &[f64]) -> Result<f64> {
        let out = self.predict(input)?;
        if out.len() != target.len() {
            return Err(Error::Shape {
                what: "network target",
                expected: out.len(),
                got: target.len(),
            });
        }
        Ok(out.iter().zip(target).map(|(o, d)| (d - o).powi(2)).sum())
    }
}

/// Index of the largest value; the first one wins ties.
pub fn argmax(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i)
}
