//! Exact stratum enumeration: the limiting normal cone of a polyhedral
//! cone union at the origin, computed from first principles by subdividing
//! the pieces along all defining hyperplanes, walking the faces of the
//! cells, and intersecting the regular normal cones of the active pieces.
//!
//! This is the formula-free route; the face-pair construction in the gph
//! module is validated against it.

use crate::cones::{ConeUnion, ConvexCone};
use crate::gph::ProductPiece;
use crate::rat::{is_zero_vec, primitive, vneg, Rat, RatVec};
use num_traits::Zero;

/// Subdivides a cone along a hyperplane pool until every cell lies weakly
/// on one side of every hyperplane.
fn subdivide(c: &ConvexCone, pool: &[RatVec]) -> Vec<ConvexCone> {
    for (i, h) in pool.iter().enumerate() {
        if c.reaches_positive(h) && c.reaches_negative(h) {
            let mut rest = pool.to_vec();
            rest.remove(i);
            let mut out = subdivide(&c.cut(h), &rest);
            out.extend(subdivide(&c.cut(&vneg(h)), &rest));
            return out;
        }
    }
    vec![c.clone()]
}

fn hyperplane_pool(pieces: &[&ConvexCone]) -> Vec<RatVec> {
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

/// Representative points, one per stratum of the union: relative-interior
/// points of the faces of the subdivided cells.
fn stratum_representatives(pieces: &[&ConvexCone]) -> Vec<RatVec> {
    let pool = hyperplane_pool(pieces);
    let mut reps: Vec<RatVec> = Vec::new();
    for piece in pieces {
        for cell in subdivide(piece, &pool) {
            for face in cell.faces() {
                let w = face.relint_point();
                if !reps.contains(&w) {
                    reps.push(w);
                }
            }
        }
    }
    reps
}

/// Regular normal cone of the union at a member point: intersection of the
/// active pieces' regular normal cones.
fn regular_normal_of_union(pieces: &[&ConvexCone], w: &RatVec) -> Option<ConvexCone> {
    let mut acc: Option<ConvexCone> = None;
    for p in pieces {
        if p.member(w) {
            let n = p.normal_cone_at(w);
            acc = Some(match acc {
                None => n,
                Some(a) => a.intersect(&n),
            });
        }
    }
    acc
}

/// Limiting normal cone of a cone union at the origin: the union of the
/// regular normal cones over all strata.
pub fn limiting_normal_at_zero(u: &ConeUnion) -> ConeUnion {
    let pieces: Vec<&ConvexCone> = u.pieces.iter().collect();
    let mut out: Vec<ConvexCone> = Vec::new();
    for w in stratum_representatives(&pieces) {
        if let Some(n) = regular_normal_of_union(&pieces, &w) {
            out.push(n);
        }
    }
    ConeUnion::new(u.dim, out)
}

/// Limiting normal cone of a polyhedral cone union at a member point.
pub fn limiting_normal_at(u: &ConeUnion, z: &RatVec) -> Option<ConeUnion> {
    let local = u.tangent_at(z)?;
    Some(limiting_normal_at_zero(&local))
}

/// Product-structured variant: both blocks are subdivided independently, so
/// the arrangement work stays in the block dimension. Returns the limiting
/// normal cone at the origin of the union of `first x second` pieces.
pub fn limiting_normal_at_zero_products(pieces: &[ProductPiece]) -> Vec<ProductPiece> {
    if pieces.is_empty() {
        return vec![];
    }
    let firsts: Vec<&ConvexCone> = pieces.iter().map(|p| &p.first).collect();
    let seconds: Vec<&ConvexCone> = pieces.iter().map(|p| &p.second).collect();
    let reps1 = stratum_representatives(&firsts);
    let reps2 = stratum_representatives(&seconds);
    let mut out: Vec<ProductPiece> = Vec::new();
    for w1 in &reps1 {
        for w2 in &reps2 {
            let mut acc: Option<(ConvexCone, ConvexCone)> = None;
            for p in pieces {
                if p.first.member(w1) && p.second.member(w2) {
                    let n1 = p.first.normal_cone_at(w1);
                    let n2 = p.second.normal_cone_at(w2);
                    acc = Some(match acc {
                        None => (n1, n2),
                        Some((a1, a2)) => (a1.intersect(&n1), a2.intersect(&n2)),
                    });
                }
            }
            if let Some((n1, n2)) = acc {
                let piece = ProductPiece {
                    first: n1,
                    second: n2,
                };
                if !out.contains(&piece) {
                    out.push(piece);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::ConvexCone;
    use crate::rat::rint;

    #[test]
    fn complementarity_corner() {
        // U = (R_- x {0}) u ({0} x R_+): N_U(0) = (0,R) u (R,0) u (R_+,R_-)
        let a = ConvexCone::from_vrep(2, vec![vec![rint(-1), rint(0)]], vec![]);
        let b = ConvexCone::from_vrep(2, vec![vec![rint(0), rint(1)]], vec![]);
        let u = ConeUnion::new(2, vec![a, b]);
        let n = limiting_normal_at_zero(&u);
        let expect = ConeUnion::new(
            2,
            vec![
                ConvexCone::from_vrep(2, vec![], vec![vec![rint(0), rint(1)]]),
                ConvexCone::from_vrep(2, vec![], vec![vec![rint(1), rint(0)]]),
                ConvexCone::from_hrep(2, vec![vec![rint(-1), rint(0)], vec![rint(0), rint(1)]], vec![]),
            ],
        );
        assert!(n.set_equal(&expect));
    }

    #[test]
    fn convex_piece_gives_polar() {
        // for a convex cone the limiting normal cone at 0 is the polar
        let u = ConeUnion::single(ConvexCone::negative_orthant(2));
        let n = limiting_normal_at_zero(&u);
        let polar = ConeUnion::single(ConvexCone::negative_orthant(2).polar());
        assert!(n.set_equal(&polar));
    }
}
