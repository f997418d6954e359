use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted element. With the factor and offset caps in
/// [`SpaceConfig`](crate::SpaceConfig) every rule application fits in `u64`
/// and every element is exact as `f64`.
pub const MAX_ELEMENT: u64 = 1 << 52;

/// An observed sequence: at least two strictly increasing positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Sequence(Vec<u64>);

impl Sequence {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Sequence("need at least 2 elements".into()));
        }
        if values[0] == 0 {
            return Err(Error::Sequence("elements must be positive integers".into()));
        }
        if values.iter().any(|&v| v > MAX_ELEMENT) {
            return Err(Error::Sequence(format!("elements must not exceed {MAX_ELEMENT}")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Sequence("sequence must be strictly increasing".into()));
        }
        Ok(Sequence(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("length >= 2")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Consecutive `(previous, current)` pairs.
    pub fn transitions(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

impl TryFrom<Vec<u64>> for Sequence {
    type Error = Error;

    fn try_from(values: Vec<u64>) -> Result<Self> {
        Sequence::new(values)
    }
}

impl From<Sequence> for Vec<u64> {
    fn from(s: Sequence) -> Self {
        s.0
    }
}

/// Comma-separated decimal integers; whitespace around elements is ignored.
impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<u64>()
                    .map_err(|_| Error::Sequence(format!("malformed element {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Sequence::new(values)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_csv(f, &self.0)
    }
}

pub(crate) fn write_csv(f: &mut impl fmt::Write, values: &[u64]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

pub(crate) fn to_csv(values: &[u64]) -> String {
    let mut s = String::new();
    write_csv(&mut s, values).expect("writing to String");
    s
}
