//! Log-space helpers.

/// `ln Σ exp(x_i)` with a max shift. Empty or all `-inf` input gives `-inf`.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Softmax of log weights, summed in input order. Entries at `-inf` map to
/// exactly 0.
pub(crate) fn normalize_log_weights(log_weights: &[f64]) -> Vec<f64> {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return vec![0.0; log_weights.len()];
    }
    let unnorm: Vec<f64> = log_weights
        .iter()
        .map(|&w| if w == f64::NEG_INFINITY { 0.0 } else { (w - max).exp() })
        .collect();
    let total: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|u| u / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_basics() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[0.0, 0.0]);
        assert!((v - 2f64.ln()).abs() < 1e-15);
        // no overflow for large magnitudes
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        let v = log_sum_exp(&[-1e6, -1e6 - 1.0]);
        assert!(v.is_finite());
    }

    #[test]
    fn normalization_handles_neg_inf() {
        let p = normalize_log_weights(&[0.0, f64::NEG_INFINITY, 0.0]);
        assert_eq!(p, vec![0.5, 0.0, 0.5]);
        let p = normalize_log_weights(&[-5000.0, -5001.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p[0] > p[1]);
    }

    #[test]
    fn shift_invariance() {
        let w = [-1.5, -3.25, 0.0, -10.0];
        let a = normalize_log_weights(&w);
        let shifted: Vec<f64> = w.iter().map(|x| x + 123.456).collect();
        let b = normalize_log_weights(&shifted);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
