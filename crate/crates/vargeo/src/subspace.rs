//! Linear subspaces with canonical (RREF) bases.

use crate::linalg::{in_span, span_basis};
use crate::rat::{RatVec};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subspace {
    pub dim: usize,
    pub basis: Vec<RatVec>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Subspace {
        Subspace { dim, basis: vec![] }
    }

    pub fn full(dim: usize) -> Subspace {
        Subspace {
            dim,
            basis: span_basis(&crate::rat::RatMat::identity(dim).row_vecs()),
        }
    }

    pub fn from_spanning(dim: usize, vectors: &[RatVec]) -> Subspace {
        for v in vectors {
            assert_eq!(v.len(), dim, "from_spanning: wrong dimension");
        }
        Subspace {
            dim,
            basis: span_basis(vectors),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        in_span(&self.basis, v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.dim, &gens)
    }
}
