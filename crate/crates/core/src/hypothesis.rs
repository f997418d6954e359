//! The rule space: additive and multiplicative primitives and their
//! compounds `x -> s·x + t`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default domain bound for generated values.
pub const DEFAULT_N_MAX: u64 = 99_999;

pub const MAX_FACTOR: u64 = 1 << 10;
pub const MAX_OFFSET: u64 = 1 << 20;

/// A single-operation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    /// `x -> x + t`, `t >= 1`.
    Additive(u64),
    /// `x -> s·x`, `s >= 2`.
    Multiplicative(u64),
}

/// A generating rule.
///
/// The derived ordering is the enumeration order: additive rules by offset,
/// then multiplicative rules by factor, then compounds by `(factor, offset)`.
/// Tie-breaking everywhere downstream relies on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Hypothesis {
    Add { offset: u64 },
    Mul { factor: u64 },
    Compound { factor: u64, offset: u64 },
}

impl From<Primitive> for Hypothesis {
    fn from(p: Primitive) -> Self {
        match p {
            Primitive::Additive(offset) => Hypothesis::Add { offset },
            Primitive::Multiplicative(factor) => Hypothesis::Mul { factor },
        }
    }
}

impl Hypothesis {
    pub fn additive(offset: u64) -> Result<Self> {
        if offset == 0 {
            return Err(Error::Parameter("additive offset must be >= 1".into()));
        }
        Ok(Hypothesis::Add { offset })
    }

    pub fn multiplicative(factor: u64) -> Result<Self> {
        if factor < 2 {
            return Err(Error::Parameter("multiplicative factor must be >= 2".into()));
        }
        Ok(Hypothesis::Mul { factor })
    }

    pub fn compound(factor: u64, offset: u64) -> Result<Self> {
        Self::multiplicative(factor)?;
        Self::additive(offset)?;
        Ok(Hypothesis::Compound { factor, offset })
    }

    pub fn is_compound(&self) -> bool {
        matches!(self, Hypothesis::Compound { .. })
    }

    /// Multiplier `a` and addend `b` of the linear form `a·x + b`.
    pub fn coefficients(&self) -> (u64, u64) {
        match *self {
            Hypothesis::Add { offset } => (1, offset),
            Hypothesis::Mul { factor } => (factor, 0),
            Hypothesis::Compound { factor, offset } => (factor, offset),
        }
    }

    /// Raw arithmetic, widened so it cannot overflow for any `u64` input
    /// with factors and offsets that fit in `u64`.
    pub fn step(&self, x: u64) -> u128 {
        let (a, b) = self.coefficients();
        a as u128 * x as u128 + b as u128
    }

    /// Applies the rule to `x`, rejecting results above `n_max`.
    pub fn apply(&self, x: u64, n_max: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::Parameter("rules apply to positive integers only".into()));
        }
        let output = self.step(x);
        if output > n_max as u128 {
            return Err(Error::DomainOverflow {
                hypothesis: self.to_string(),
                input: x,
                output,
                n_max,
            });
        }
        Ok(output as u64)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Hypothesis::Add { offset } => write!(f, "A{offset}"),
            Hypothesis::Mul { factor } => write!(f, "M{factor}"),
            Hypothesis::Compound { factor, offset } => write!(f, "M{factor}+A{offset}"),
        }
    }
}

impl From<Hypothesis> for String {
    fn from(h: Hypothesis) -> Self {
        h.to_string()
    }
}

impl TryFrom<String> for Hypothesis {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    /// Grammar: `A<t>` | `M<s>` | `M<s>+A<t>` with `t >= 1`, `s >= 2`.
    fn from_str(label: &str) -> Result<Self> {
        let bad = |token: &str| Error::Label {
            label: label.to_string(),
            token: token.to_string(),
        };
        let number = |token: &str, min: u64| -> Result<u64> {
            let digits = &token[1..];
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad(token));
            }
            match digits.parse::<u64>() {
                Ok(n) if n >= min => Ok(n),
                _ => Err(bad(token)),
            }
        };

        match label.split_once('+') {
            Some((mul, add)) => {
                if !mul.starts_with('M') {
                    return Err(bad(mul));
                }
                if !add.starts_with('A') {
                    return Err(bad(add));
                }
                Ok(Hypothesis::Compound {
                    factor: number(mul, 2)?,
                    offset: number(add, 1)?,
                })
            }
            None if label.starts_with('A') => Ok(Hypothesis::Add {
                offset: number(label, 1)?,
            }),
            None if label.starts_with('M') => Ok(Hypothesis::Mul {
                factor: number(label, 2)?,
            }),
            None => Err(bad(label)),
        }
    }
}

/// Primitive sets and the domain bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceConfig {
    offsets: Vec<u64>,
    factors: Vec<u64>,
    n_max: u64,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        SpaceConfig {
            offsets: (1..=10).collect(),
            factors: vec![2, 3],
            n_max: DEFAULT_N_MAX,
        }
    }
}

impl SpaceConfig {
    /// Offsets and factors are sorted and deduplicated.
    pub fn new(
        offsets: impl IntoIterator<Item = u64>,
        factors: impl IntoIterator<Item = u64>,
        n_max: u64,
    ) -> Result<Self> {
        let mut offsets: Vec<u64> = offsets.into_iter().collect();
        let mut factors: Vec<u64> = factors.into_iter().collect();
        offsets.sort_unstable();
        offsets.dedup();
        factors.sort_unstable();
        factors.dedup();

        let (Some(&min_offset), Some(&max_offset)) = (offsets.first(), offsets.last()) else {
            return Err(Error::Config("no additive offsets".into()));
        };
        let Some(&min_factor) = factors.first() else {
            return Err(Error::Config("no multiplicative factors".into()));
        };
        if min_offset < 1 {
            return Err(Error::Config("additive offsets must be >= 1".into()));
        }
        if min_factor < 2 {
            return Err(Error::Config("multiplicative factors must be >= 2".into()));
        }
        if max_offset > MAX_OFFSET || factors.last().is_some_and(|&f| f > MAX_FACTOR) {
            return Err(Error::Config(format!(
                "offsets must be <= {MAX_OFFSET} and factors <= {MAX_FACTOR}"
            )));
        }
        if n_max < max_offset.saturating_add(1) {
            return Err(Error::Config(format!(
                "n_max {n_max} is below largest offset + 1 ({})",
                max_offset as u128 + 1
            )));
        }
        Ok(SpaceConfig {
            offsets,
            factors,
            n_max,
        })
    }

    /// Default primitives with a different domain bound.
    pub fn with_n_max(n_max: u64) -> Result<Self> {
        let d = Self::default();
        Self::new(d.offsets, d.factors, n_max)
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `n_a`, the number of additive primitives.
    pub fn n_additive(&self) -> usize {
        self.offsets.len()
    }

    /// `n_p`, the number of multiplicative primitives.
    pub fn n_multiplicative(&self) -> usize {
        self.factors.len()
    }

    pub fn len(&self) -> usize {
        let (a, p) = (self.n_additive(), self.n_multiplicative());
        a + p + a * p
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// All hypotheses in enumeration order: additive ascending by offset,
/// multiplicative ascending by factor, then compounds by `(factor, offset)`.
pub fn enumerate(config: &SpaceConfig) -> Vec<Hypothesis> {
    let mut out = Vec::with_capacity(config.len());
    out.extend(config.offsets.iter().map(|&offset| Hypothesis::Add { offset }));
    out.extend(config.factors.iter().map(|&factor| Hypothesis::Mul { factor }));
    for &factor in &config.factors {
        out.extend(
            config
                .offsets
                .iter()
                .map(|&offset| Hypothesis::Compound { factor, offset }),
        );
    }
    out
}

/// The memorized transition pairs `(k, h(k))` with `h(k) <= n_max`, ascending in `k`.
pub fn transition_pairs(h: &Hypothesis, n_max: u64) -> Result<Vec<(u64, u64)>> {
    if h.step(1) > n_max as u128 {
        return Err(Error::Parameter(format!(
            "n_max {n_max} is below {h}(1) = {}",
            h.step(1)
        )));
    }
    Ok((1..)
        .map(|k| (k, h.step(k)))
        .take_while(|&(_, v)| v <= n_max as u128)
        .map(|(k, v)| (k, v as u64))
        .collect())
}
