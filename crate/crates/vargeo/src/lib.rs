//! Exact variational geometry for generalized-equation-constrained
//! programs: rational cone algebra, graph-of-normal-cone geometry,
//! constraint-set curvature, and second-order optimality certification,
//! validated by float-based sampling oracles.

pub mod cones;
pub mod gamma;
pub mod gph;
pub mod error;
pub mod io;
pub mod linalg;
pub mod omega;
pub mod optimality;
pub mod oracle;
pub mod poly;
pub mod rat;
pub mod strata;
pub mod subspace;

pub use error::{Error, Result};

/// Exact extended-real value: curvature quantities are rationals or tagged
/// infinities, never sentinel numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtReal {
    NegInf,
    Finite(rat::Rat),
    PosInf,
}

impl ExtReal {
    pub fn neg(&self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }

    pub fn finite(&self) -> Option<&rat::Rat> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ExtReal::NegInf => serde_json::Value::String("-inf".into()),
            ExtReal::PosInf => serde_json::Value::String("+inf".into()),
            ExtReal::Finite(v) => serde_json::Value::String(rat::rat_to_string(v)),
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "+inf"),
            ExtReal::Finite(v) => write!(f, "{}", rat::rat_to_string(v)),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        use ExtReal::*;
        Some(match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Equal,
            (NegInf, _) | (_, PosInf) => Less,
            (PosInf, _) | (_, NegInf) => Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        })
    }
}
