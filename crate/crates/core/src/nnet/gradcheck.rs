use super::{Deltas, ForwardTrace, Network};
use crate::error::Result;

const ABS_FLOOR: f64 = 1e-8;

/// Compares backpropagated gradients with central finite differences of the
/// per-pattern total squared error `E = Σ_k (d_k − o_k)²`.
///
/// The weight update moves along `δ_j·o_i`, which equals `-½·∂E/∂w_ji`, so the
/// analytical gradient checked here is `-2·δ_j·o_i`. A weight passes when the
/// two agree within `tolerance` relative to the larger magnitude, or within an
/// absolute `1e-8`.
pub fn gradient_check(
    net: &Network,
    record: (&[f64], &[f64]),
    epsilon: f64,
    tolerance: f64,
) -> Result<bool> {
    gradient_check_with(net, record, epsilon, tolerance, |n, t, d| n.backward(t, d))
}

/// [`gradient_check`] with a caller-supplied backward pass.
#[allow(clippy::needless_range_loop)]
pub fn gradient_check_with<F>(
    net: &Network,
    (input, target): (&[f64], &[f64]),
    epsilon: f64,
    tolerance: f64,
    backward: F,
) -> Result<bool>
where
    F: Fn(&Network, &ForwardTrace, &[f64]) -> Result<Deltas>,
{
    let trace = net.forward(input)?;
    let deltas = backward(net, &trace, target)?;
    let mut probe = net.clone();

    for (l, w) in net.weights().iter().enumerate() {
        let layer_input = &trace.activations[l];
        for j in 0..w.rows() {
            for i in 0..w.cols() {
                let o = layer_input.get(i).copied().unwrap_or(1.0);
                let analytic = -2.0 * deltas[l][j] * o;

                let original = w.get(j, i);
                probe.weights_mut()[l].set(j, i, original + epsilon);
                let plus = probe.squared_error(input, target)?;
                probe.weights_mut()[l].set(j, i, original - epsilon);
                let minus = probe.squared_error(input, target)?;
                probe.weights_mut()[l].set(j, i, original);
                let numeric = (plus - minus) / (2.0 * epsilon);

                let diff = (analytic - numeric).abs();
                let scale = analytic.abs().max(numeric.abs());
                if diff > ABS_FLOOR && diff > tolerance * scale {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nnet::{init_weights, NetworkConfig};

    fn small_net(seed: u64, use_bias: bool) -> Network {
        init_weights(&NetworkConfig {
            layer_sizes: vec![3, 4, 2],
            seed,
            init_half_range: 1.0,
            use_bias,
            ..NetworkConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn passes_on_small_net() {
        let net = small_net(11, false);
        let ok = gradient_check(&net, (&[0.3, -0.8, 1.0], &[1.0, 0.0]), 1e-5, 1e-4).unwrap();
        assert!(ok);
    }

    #[test]
    fn passes_with_bias() {
        let net = small_net(12, true);
        let ok = gradient_check(&net, (&[0.3, -0.8, 1.0], &[0.2, 0.9]), 1e-5, 1e-4).unwrap();
        assert!(ok);
    }

    #[test]
    fn target_equal_to_output_passes() {
        let net = small_net(13, false);
        let input = [0.5, 0.5, -0.5];
        let out = net.predict(&input).unwrap();
        let ok = gradient_check(&net, (&input, &out), 1e-5, 1e-4).unwrap();
        assert!(ok);
    }

    #[test]
    fn flipped_delta_sign_fails() {
        let net = small_net(14, false);
        let ok = gradient_check_with(
            &net,
            (&[0.3, -0.8, 1.0], &[1.0, 0.0]),
            1e-5,
            1e-4,
            |n, t, d| {
                let mut deltas = n.backward(t, d)?;
                deltas.iter_mut().flatten().for_each(|x| *x = -*x);
                Ok(deltas)
            },
        )
        .unwrap();
        assert!(!ok);
    }
}
