//! Independent reference computations for the integration tests. Nothing
//! here calls into the inference code paths it is used to check.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `mantissa · 2^exponent` with `mantissa` in `[0.5, 1)` (or exactly 0).
/// f64 precision, unbounded exponent, so long products of small
/// probabilities never underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    mantissa: f64,
    exponent: i64,
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 {
        return (0.0, 0);
    }
    assert!(
        x.is_finite() && x > 0.0,
        "ExtFloat only holds non-negative finite values"
    );
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: rescale first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, raw_exp - 1022)
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat {
        mantissa: 0.0,
        exponent: 0,
    };

    pub fn from_f64(x: f64) -> Self {
        let (mantissa, exponent) = frexp(x);
        ExtFloat { mantissa, exponent }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn mul(self, other: ExtFloat) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let (m, e) = frexp(self.mantissa * other.mantissa);
        ExtFloat {
            mantissa: m,
            exponent: e + self.exponent + other.exponent,
        }
    }

    pub fn add(self, other: ExtFloat) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= other.exponent {
            (self, other)
        } else {
            (other, self)
        };
        let shift = big.exponent - small.exponent;
        let small_m = if shift > 1100 {
            0.0
        } else {
            small.mantissa * 2f64.powi(-(shift as i32))
        };
        let (m, e) = frexp(big.mantissa + small_m);
        ExtFloat {
            mantissa: m,
            exponent: e + big.exponent,
        }
    }

    /// `self / other` as a plain f64 (the ratio is a probability here).
    pub fn ratio(self, other: ExtFloat) -> f64 {
        assert!(!other.is_zero());
        if self.is_zero() {
            return 0.0;
        }
        let d = self.exponent - other.exponent;
        if d < -1100 {
            return 0.0;
        }
        (self.mantissa / other.mantissa) * 2f64.powi(d as i32)
    }

    /// `exp(-q)` for `q >= 0`, built as a product of `exp(-chunk)` factors.
    pub fn exp_neg(mut q: f64) -> Self {
        assert!(q >= 0.0);
        const CHUNK: f64 = 500.0;
        let chunk = ExtFloat::from_f64((-CHUNK).exp());
        let mut acc = ExtFloat::from_f64(1.0);
        while q > CHUNK {
            acc = acc.mul(chunk);
            q -= CHUNK;
        }
        acc.mul(ExtFloat::from_f64((-q).exp()))
    }
}

/// Rule as `(multiplier, addend, is_compound)`, listed the same way as the
/// default space but built here from scratch.
pub fn default_rules() -> Vec<(u64, u64, bool)> {
    let mut rules: Vec<(u64, u64, bool)> = (1..=10).map(|t| (1, t, false)).collect();
    rules.extend([2u64, 3].iter().map(|&s| (s, 0, false)));
    for s in [2u64, 3] {
        rules.extend((1..=10).map(|t| (s, t, true)));
    }
    rules
}

pub fn rule_label(rule: (u64, u64, bool)) -> String {
    match rule {
        (1, t, false) => format!("A{t}"),
        (s, 0, false) => format!("M{s}"),
        (s, t, true) => format!("M{s}+A{t}"),
        _ => unreachable!(),
    }
}

/// Posterior over the default 32 rules by direct multiplication of the
/// prior and per-transition Gaussian factors, then division by their sum.
/// Returns `(label, probability)` in listing order.
pub fn brute_force_posterior(values: &[u64], beta: f64, sigma2: f64) -> Vec<(String, f64)> {
    let rules = default_rules();
    let denominator = 12.0 + 20.0 * beta;
    let joint: Vec<ExtFloat> = rules
        .iter()
        .map(|&(a, b, compound)| {
            let prior = if compound {
                beta / denominator
            } else {
                1.0 / denominator
            };
            let mut p = ExtFloat::from_f64(prior);
            for w in values.windows(2) {
                let r = w[1] as i128 - (a as i128 * w[0] as i128 + b as i128);
                let q = (r * r) as f64 / (2.0 * sigma2);
                p = p.mul(ExtFloat::exp_neg(q));
            }
            p
        })
        .collect();
    let total = joint.iter().fold(ExtFloat::ZERO, |acc, &p| acc.add(p));
    rules
        .iter()
        .zip(joint)
        .map(|(&r, p)| (rule_label(r), p.ratio(total)))
        .collect()
}

/// A noisy sequence from a random default rule, used as a random test case.
pub struct RandomCase {
    pub values: Vec<u64>,
    pub beta: f64,
    pub sigma2: f64,
}

pub fn random_cases(n: usize, seed: u64) -> Vec<RandomCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rules = default_rules();
    (0..n)
        .map(|i| {
            let (a, b, _) = rules[rng.random_range(0..rules.len())];
            let len = rng.random_range(2..=7);
            let mut values = vec![rng.random_range(1..=20u64)];
            while values.len() < len {
                let prev = *values.last().unwrap();
                let noise: i64 = rng.random_range(-2..=2);
                let next = ((a * prev + b) as i64 + noise).max(prev as i64 + 1);
                values.push(next as u64);
            }
            let beta = match i % 10 {
                0 => 0.0,
                1 => 1.0,
                _ => rng.random_range(0.0..=1.0),
            };
            let sigma2 = rng.random_range(0.25..4.0);
            RandomCase { values, beta, sigma2 }
        })
        .collect()
}

/// Strictly increasing sequences with arbitrary increments, unrelated to any rule.
pub fn random_increasing(n: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let len = rng.random_range(2..=9);
            let mut v = vec![rng.random_range(1..=1000u64)];
            while v.len() < len {
                let step = rng.random_range(1..=5000u64);
                v.push(v.last().unwrap() + step);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {}
