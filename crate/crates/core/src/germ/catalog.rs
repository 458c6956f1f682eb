use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{BiPoly, Scalar};

/// Named singularity types with a fixed representative germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NamedKind {
    Node,
    Cusp,
    Tacnode,
    /// `m` smooth pairwise transverse branches.
    Ordinary(u32),
}

impl NamedKind {
    pub fn germ(&self) -> BiPoly {
        let x = BiPoly::x();
        let y = BiPoly::y();
        match self {
            NamedKind::Node => y.pow(2).sub(&x.pow(2)),
            NamedKind::Cusp => y.pow(2).sub(&x.pow(3)),
            NamedKind::Tacnode => y.pow(2).sub(&x.pow(4)),
            NamedKind::Ordinary(m) => (0..*m).fold(BiPoly::one(), |acc, i| {
                acc.mul(&y.sub(&x.scale(&Scalar::from_int(i as i64))))
            }),
        }
    }

    /// Reference values `(μ, δ, r)`.
    pub fn expected(&self) -> (u64, u64, u64) {
        match self {
            NamedKind::Node => (1, 1, 2),
            NamedKind::Cusp => (2, 1, 1),
            NamedKind::Tacnode => (3, 2, 2),
            NamedKind::Ordinary(m) => {
                let m = *m as u64;
                ((m - 1) * (m - 1), m * (m - 1) / 2, m)
            }
        }
    }
}

impl fmt::Display for NamedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedKind::Node => write!(f, "node"),
            NamedKind::Cusp => write!(f, "cusp"),
            NamedKind::Tacnode => write!(f, "tacnode"),
            NamedKind::Ordinary(m) => write!(f, "ordinary({m})"),
        }
    }
}

impl FromStr for NamedKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "node" => Ok(NamedKind::Node),
            "cusp" => Ok(NamedKind::Cusp),
            "tacnode" => Ok(NamedKind::Tacnode),
            other => {
                let m = other
                    .strip_prefix("ordinary(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|n| n.trim().parse::<u32>().ok())
                    .ok_or_else(|| format!("unknown singularity kind `{other}`"))?;
                if !(2..=16).contains(&m) {
                    return Err(format!("ordinary point multiplicity {m} outside 2..=16"));
                }
                Ok(NamedKind::Ordinary(m))
            }
        }
    }
}

impl TryFrom<String> for NamedKind {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<NamedKind> for String {
    fn from(k: NamedKind) -> String {
        k.to_string()
    }
}
