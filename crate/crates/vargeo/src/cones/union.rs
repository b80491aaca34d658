//! Finite unions of convex pieces in canonical form.
//!
//! Canonicalization removes pieces contained in another piece and sorts by
//! the pieces' canonical keys, so structural equality decides set equality
//! in the common case. The general case falls back to exact piecewise
//! coverage by recursive subdivision along the other pieces' hyperplanes.

use super::cone::ConvexCone;
use super::polyhedron::ConvexPolyhedron;
use crate::rat::{is_zero_vec, primitive, vneg, Rat, RatVec};
use crate::subspace::Subspace;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConeUnion {
    pub dim: usize,
    pub pieces: Vec<ConvexCone>,
}

impl ConeUnion {
    pub fn new(dim: usize, pieces: Vec<ConvexCone>) -> ConeUnion {
        let mut u = ConeUnion { dim, pieces };
        u.canonicalize();
        u
    }

    pub fn single(c: ConvexCone) -> ConeUnion {
        ConeUnion::new(c.dim, vec![c])
    }

    pub fn empty(dim: usize) -> ConeUnion {
        ConeUnion { dim, pieces: vec![] }
    }

    fn canonicalize(&mut self) {
        self.pieces.sort();
        self.pieces.dedup();
        let pieces = std::mem::take(&mut self.pieces);
        let keep: Vec<bool> = (0..pieces.len())
            .map(|i| {
                !pieces
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.contains_cone(&pieces[i]))
            })
            .collect();
        // when two pieces are equal sets dedup above already removed one
        self.pieces = pieces
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
    }

    pub fn member(&self, v: &RatVec) -> bool {
        self.pieces.iter().any(|p| p.member(v))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Span of the union = span of the piece spans.
    pub fn span(&self) -> Subspace {
        super::cone::union_span(self.dim, &self.pieces)
    }

    /// Tangent cone of the union at a member: union of the tangent cones of
    /// the pieces containing the point.
    pub fn tangent_at(&self, z: &RatVec) -> Option<ConeUnion> {
        let active: Vec<ConvexCone> = self
            .pieces
            .iter()
            .filter(|p| p.member(z))
            .map(|p| p.tangent_cone_at(z))
            .collect();
        if active.is_empty() {
            return None;
        }
        Some(ConeUnion::new(self.dim, active))
    }

    /// Image of every piece under a linear map.
    pub fn image(&self, m: &crate::rat::RatMat) -> ConeUnion {
        ConeUnion::new(m.rows, self.pieces.iter().map(|p| p.image(m)).collect())
    }

    /// Polar of the union (a single convex cone: intersection of polars).
    pub fn polar(&self) -> ConvexCone {
        if self.pieces.is_empty() {
            return ConvexCone::full_space(self.dim);
        }
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for p in &self.pieces {
            let pol = p.polar();
            ineqs.extend(pol.ineqs);
            eqs.extend(pol.eqs);
        }
        ConvexCone::from_hrep(self.dim, ineqs, eqs)
    }

    /// Exact set inclusion of a convex cone in the union.
    pub fn covers_cone(&self, c: &ConvexCone) -> bool {
        let pool = cone_hyperplane_pool(&self.pieces);
        cone_subset_of_union(c, &self.pieces, &pool)
    }

    pub fn subset_of(&self, other: &ConeUnion) -> bool {
        self.pieces.iter().all(|p| other.covers_cone(p))
    }

    /// Exact set equality: canonical structural equality with a subdivision
    /// fallback for differently-stratified representations.
    pub fn set_equal(&self, other: &ConeUnion) -> bool {
        if self == other {
            return true;
        }
        self.subset_of(other) && other.subset_of(self)
    }
}

/// Deduplicated, sign-normalized hyperplanes of all facet/equality rows.
fn cone_hyperplane_pool(pieces: &[ConvexCone]) -> Vec<RatVec> {
    let mut pool: Vec<RatVec> = Vec::new();
    for p in pieces {
        for row in p.ineqs.iter().chain(&p.eqs) {
            if is_zero_vec(row) {
                continue;
            }
            let mut h = primitive(row);
            if let Some(first) = h.iter().find(|x| !x.is_zero()) {
                if *first < Rat::zero() {
                    h = vneg(&h);
                }
            }
            if !pool.contains(&h) {
                pool.push(h);
            }
        }
    }
    pool
}

fn cone_subset_of_union(c: &ConvexCone, pieces: &[ConvexCone], pool: &[RatVec]) -> bool {
    if c.rays.is_empty() && c.lineality.is_empty() {
        // c = {0}: member test
        return pieces.iter().any(|p| p.member(&vec![Rat::zero(); c.dim]));
    }
    if pieces.iter().any(|p| p.contains_cone(c)) {
        return true;
    }
    for (i, h) in pool.iter().enumerate() {
        if c.reaches_positive(h) && c.reaches_negative(h) {
            let mut rest = pool.to_vec();
            rest.remove(i);
            let below = c.cut(h);
            let above = c.cut(&vneg(h));
            return cone_subset_of_union(&below, pieces, &rest)
                && cone_subset_of_union(&above, pieces, &rest);
        }
    }
    false
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PolyhedronUnion {
    pub dim: usize,
    pub pieces: Vec<ConvexPolyhedron>,
}

impl PolyhedronUnion {
    pub fn new(dim: usize, pieces: Vec<ConvexPolyhedron>) -> PolyhedronUnion {
        let mut pieces: Vec<ConvexPolyhedron> =
            pieces.into_iter().filter(|p| !p.empty).collect();
        pieces.sort();
        pieces.dedup();
        let keep: Vec<bool> = (0..pieces.len())
            .map(|i| {
                !pieces
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && other.contains(&pieces[i]))
            })
            .collect();
        let pieces = pieces
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        PolyhedronUnion { dim, pieces }
    }

    pub fn from_cones(u: &ConeUnion) -> PolyhedronUnion {
        PolyhedronUnion::new(
            u.dim,
            u.pieces.iter().map(ConvexPolyhedron::from_cone).collect(),
        )
    }

    pub fn empty(dim: usize) -> PolyhedronUnion {
        PolyhedronUnion { dim, pieces: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn member(&self, x: &RatVec) -> bool {
        self.pieces.iter().any(|p| p.member(x))
    }

    pub fn tangent_at(&self, z: &RatVec) -> Option<ConeUnion> {
        let active: Vec<ConvexCone> = self
            .pieces
            .iter()
            .filter(|p| p.member(z))
            .map(|p| p.tangent_cone_at(z))
            .collect();
        if active.is_empty() {
            return None;
        }
        Some(ConeUnion::new(self.dim, active))
    }

    pub fn covers(&self, c: &ConvexPolyhedron) -> bool {
        if c.empty {
            return true;
        }
        let pool = polyhedron_hyperplane_pool(&self.pieces);
        poly_subset_of_union(c, &self.pieces, &pool)
    }

    pub fn subset_of(&self, other: &PolyhedronUnion) -> bool {
        self.pieces.iter().all(|p| other.covers(p))
    }

    pub fn set_equal(&self, other: &PolyhedronUnion) -> bool {
        if self == other {
            return true;
        }
        self.subset_of(other) && other.subset_of(self)
    }

    /// Exact support over the union (max of piecewise supports).
    pub fn support(&self, zstar: &RatVec) -> super::polyhedron::SupportValue {
        use super::polyhedron::SupportValue::*;
        let mut best = NegInf;
        for p in &self.pieces {
            match p.support(zstar) {
                PosInf => return PosInf,
                Finite(v) => {
                    best = match best {
                        NegInf => Finite(v),
                        Finite(b) => Finite(if v > b { v } else { b }),
                        PosInf => unreachable!(),
                    }
                }
                NegInf => {}
            }
        }
        best
    }
}

fn polyhedron_hyperplane_pool(pieces: &[ConvexPolyhedron]) -> Vec<(RatVec, Rat)> {
    let mut pool: Vec<(RatVec, Rat)> = Vec::new();
    for p in pieces {
        for (row, rhs) in p.ineqs.iter().chain(&p.eqs) {
            if is_zero_vec(row) {
                continue;
            }
            let mut ext = row.clone();
            ext.push(rhs.clone());
            let ext = primitive(&ext);
            let mut h: RatVec = ext[..row.len()].to_vec();
            let mut b = ext[row.len()].clone();
            if let Some(first) = h.iter().find(|x| !x.is_zero()) {
                if *first < Rat::zero() {
                    h = vneg(&h);
                    b = -b;
                }
            }
            if !pool.contains(&(h.clone(), b.clone())) {
                pool.push((h, b));
            }
        }
    }
    pool
}

fn poly_subset_of_union(
    c: &ConvexPolyhedron,
    pieces: &[ConvexPolyhedron],
    pool: &[(RatVec, Rat)],
) -> bool {
    if c.empty {
        return true;
    }
    if pieces.iter().any(|p| p.contains(c)) {
        return true;
    }
    for (i, (h, b)) in pool.iter().enumerate() {
        if c.reaches_above(h, b) && c.reaches_below(h, b) {
            let mut rest = pool.to_vec();
            rest.remove(i);
            let below = c.cut(h, b);
            let above = c.cut(&vneg(h), &(-b.clone()));
            return poly_subset_of_union(&below, pieces, &rest)
                && poly_subset_of_union(&above, pieces, &rest);
        }
    }
    false
}
