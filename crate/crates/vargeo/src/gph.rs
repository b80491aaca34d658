//! Variational geometry of the graph of the normal-cone map of a convex
//! polyhedron: tangent cones by reduction to the critical cone, outer
//! second-order tangent sets, regular and directional limiting normal
//! cones via face pairs, with a closed-form fast path when the polyhedron
//! is a product of nonpositive half-lines.

use crate::cones::{critical_cone, ConeUnion, ConvexCone, ConvexPolyhedron};
use crate::error::{Error, Result};
use crate::rat::{dot, vconcat, Rat, RatVec};
use num_traits::Zero;

/// A point of `gph N_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GphPoint {
    pub d: RatVec,
    pub dstar: RatVec,
}

impl GphPoint {
    pub fn new(d: RatVec, dstar: RatVec) -> GphPoint {
        GphPoint { d, dstar }
    }
}

/// A direction `(e, e*)` attached to a graph point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GphDirection {
    pub e: RatVec,
    pub estar: RatVec,
}

impl GphDirection {
    pub fn new(e: RatVec, estar: RatVec) -> GphDirection {
        GphDirection { e, estar }
    }

    pub fn as_vec(&self) -> RatVec {
        vconcat(&self.e, &self.estar)
    }
}

/// A convex piece of a graph-type set, stored as a product of a first-block
/// and a second-block cone. The full piece is `first x second`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPiece {
    pub first: ConvexCone,
    pub second: ConvexCone,
}

impl ProductPiece {
    pub fn cone(&self) -> ConvexCone {
        self.first.product(&self.second)
    }

    pub fn member(&self, e: &RatVec, estar: &RatVec) -> bool {
        self.first.member(e) && self.second.member(estar)
    }
}

pub fn pieces_to_union(dim: usize, pieces: &[ProductPiece]) -> ConeUnion {
    ConeUnion::new(dim, pieces.iter().map(|p| p.cone()).collect())
}

/// True iff `d` lies in `P` and `d*` in the normal cone of `P` at `d`.
pub fn gph_member(p: &ConvexPolyhedron, d: &RatVec, dstar: &RatVec) -> bool {
    p.member(d) && p.normal_cone_at(d).member(dstar)
}

fn validated_critical_cone(p: &ConvexPolyhedron, pt: &GphPoint) -> Result<ConvexCone> {
    if !gph_member(p, &pt.d, &pt.dstar) {
        return Err(Error::NotMember("point not in gph N_P".into()));
    }
    critical_cone(p, &pt.d, &pt.dstar)
}

/// Stratification of `gph N_K` for a convex polyhedral cone `K`: one piece
/// `F x (K-polar ∩ F-perp)` per face `F` of `K`.
pub fn graph_normal_cone_pieces(k: &ConvexCone) -> Vec<ProductPiece> {
    let polar = k.polar();
    let mut pieces = Vec::new();
    for f in k.faces() {
        let second = polar.intersect_subspace_perp(&f.span());
        let piece = ProductPiece { first: f, second };
        if !pieces.contains(&piece) {
            pieces.push(piece);
        }
    }
    pieces
}

/// Pieces of the tangent cone of `gph N_P` at `pt`.
pub fn tangent_gph_pieces(p: &ConvexPolyhedron, pt: &GphPoint) -> Result<Vec<ProductPiece>> {
    Ok(graph_normal_cone_pieces(&validated_critical_cone(p, pt)?))
}

/// Tangent cone of `gph N_P` at `pt` as a canonical union.
pub fn tangent_gph(p: &ConvexPolyhedron, pt: &GphPoint) -> Result<ConeUnion> {
    let pieces = tangent_gph_pieces(p, pt)?;
    Ok(pieces_to_union(2 * p.dim, &pieces))
}

fn validated_direction(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: &GphDirection,
) -> Result<ConvexCone> {
    let k = validated_critical_cone(p, pt)?;
    // (e, e*) must lie in gph N_K
    if !(k.member(&dir.e) && k.polar().member(&dir.estar) && dot(&dir.e, &dir.estar).is_zero())
    {
        return Err(Error::NotTangent(
            "direction not in the tangent cone of gph N_P".into(),
        ));
    }
    Ok(k)
}

/// Pieces of the outer second-order tangent set of `gph N_P` at `pt` in
/// direction `dir`: one recursion of the tangent machinery on the critical
/// cone.
pub fn second_tangent_gph_pieces(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: &GphDirection,
) -> Result<Vec<ProductPiece>> {
    let k = validated_direction(p, pt, dir)?;
    let k2 = k.tangent_cone_at(&dir.e).intersect_perp(&dir.estar);
    Ok(graph_normal_cone_pieces(&k2))
}

pub fn second_tangent_gph(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: &GphDirection,
) -> Result<ConeUnion> {
    let pieces = second_tangent_gph_pieces(p, pt, dir)?;
    Ok(pieces_to_union(2 * p.dim, &pieces))
}

/// Regular normal cone of `gph N_P` at `pt`: the product `K-polar x K`.
pub fn regular_normal_gph(p: &ConvexPolyhedron, pt: &GphPoint) -> Result<ConvexCone> {
    let k = validated_critical_cone(p, pt)?;
    Ok(k.polar().product(&k))
}

/// Pieces of the directional limiting normal cone via admissible face
/// pairs: over faces `F2 ⊆ F1` of the critical cone with `e ∈ F2` and
/// `F1 ⊆ [e*]-perp`, the products `(F1-F2)-polar x (F1-F2)`.
pub fn dir_normal_gph_pieces(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: &GphDirection,
) -> Result<Vec<ProductPiece>> {
    let k = validated_direction(p, pt, dir)?;
    let faces = k.faces();
    let mut pieces: Vec<ProductPiece> = Vec::new();
    for f1 in &faces {
        // F1 ⊆ [e*]-perp: every generator of F1 orthogonal to e*
        let f1_perp_estar = f1.rays.iter().all(|r| dot(r, &dir.estar).is_zero())
            && f1
                .lineality
                .iter()
                .all(|l| dot(l, &dir.estar).is_zero());
        if !f1_perp_estar {
            continue;
        }
        for f2 in &faces {
            if !f2.member(&dir.e) || !f1.contains_cone(f2) {
                continue;
            }
            let diff = f1.minkowski_diff(f2);
            let piece = ProductPiece {
                first: diff.polar(),
                second: diff,
            };
            if !pieces.contains(&piece) {
                pieces.push(piece);
            }
        }
    }
    Ok(pieces)
}

pub fn dir_limiting_normal_gph(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: &GphDirection,
) -> Result<ConeUnion> {
    let pieces = dir_normal_gph_pieces(p, pt, dir)?;
    Ok(pieces_to_union(2 * p.dim, &pieces))
}

/// Regular normal cone of the tangent-cone union at `dir`: the polar of
/// the second-order tangent set (equivalently the intersection of the
/// piece polars).
pub fn regular_normal_of_tangent(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: &GphDirection,
) -> Result<ConvexCone> {
    let t2 = second_tangent_gph(p, pt, dir)?;
    Ok(t2.polar())
}

/// Splits a product cone in `R^(2l)` into its block factors. Panics if a
/// canonical row straddles the blocks (impossible for product cones).
pub fn split_product(c: &ConvexCone, l: usize) -> ProductPiece {
    assert_eq!(c.dim, 2 * l);
    let mut first_ineqs = Vec::new();
    let mut second_ineqs = Vec::new();
    let mut first_eqs = Vec::new();
    let mut second_eqs = Vec::new();
    let sort_row = |row: &RatVec, out1: &mut Vec<RatVec>, out2: &mut Vec<RatVec>| {
        let head = row[..l].to_vec();
        let tail = row[l..].to_vec();
        let head_zero = head.iter().all(|x| x.is_zero());
        let tail_zero = tail.iter().all(|x| x.is_zero());
        assert!(
            head_zero || tail_zero,
            "split_product: row couples the blocks"
        );
        if tail_zero {
            out1.push(head);
        } else {
            out2.push(tail);
        }
    };
    for row in &c.ineqs {
        sort_row(row, &mut first_ineqs, &mut second_ineqs);
    }
    for row in &c.eqs {
        sort_row(row, &mut first_eqs, &mut second_eqs);
    }
    ProductPiece {
        first: ConvexCone::from_hrep(l, first_ineqs, first_eqs),
        second: ConvexCone::from_hrep(l, second_ineqs, second_eqs),
    }
}

// ---------------------------------------------------------------------------
// closed-form fast path for P = prod of R_- factors

/// Which graph-geometry object the fast path should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GphObject {
    Tangent,
    NormalDir,
    RegularOfTangent,
}

/// Returns `Some(l)` when `P` equals the product of `l` copies of `R_-`.
pub fn as_box(p: &ConvexPolyhedron) -> Option<usize> {
    let l = p.dim;
    (*p == ConvexPolyhedron::negative_orthant(l)).then_some(l)
}

/// 1-D building blocks for table entries.
#[derive(Clone, Copy, Debug)]
enum Axis {
    Full,
    Neg,
    Pos,
    Zero,
}

impl Axis {
    fn cone(self) -> ConvexCone {
        use Axis::*;
        match self {
            Full => ConvexCone::full_space(1),
            Neg => ConvexCone::negative_orthant(1),
            Pos => ConvexCone::negative_orthant(1).polar(),
            Zero => ConvexCone::zero(1),
        }
    }
}

/// Per-coordinate strata of `gph N_{R_-}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ScalarStratum {
    /// a < 0, b = 0
    Interior,
    /// a = 0, b = 0
    Corner,
    /// a = 0, b > 0
    Strict,
}

fn scalar_stratum(a: &Rat, b: &Rat) -> Result<ScalarStratum> {
    let zero = Rat::zero();
    if *a < zero && b.is_zero() {
        Ok(ScalarStratum::Interior)
    } else if a.is_zero() && b.is_zero() {
        Ok(ScalarStratum::Corner)
    } else if a.is_zero() && *b > zero {
        Ok(ScalarStratum::Strict)
    } else {
        Err(Error::NotMember(
            "coordinate pair not in gph N_{R_-}".into(),
        ))
    }
}

/// Closed-form table: per-coordinate pieces of the requested object as
/// pairs of 1-D cones on `(e_i, e*_i)`.
fn scalar_pieces(
    stratum: ScalarStratum,
    dir: Option<(&Rat, &Rat)>,
    which: GphObject,
) -> Result<Vec<(Axis, Axis)>> {
    use Axis::*;
    use ScalarStratum::*;
    let zero = Rat::zero();
    match which {
        GphObject::Tangent => Ok(match stratum {
            Interior => vec![(Full, Zero)],
            Corner => vec![(Neg, Zero), (Zero, Pos)],
            Strict => vec![(Zero, Full)],
        }),
        GphObject::NormalDir | GphObject::RegularOfTangent => {
            let (c, d) = dir.ok_or_else(|| {
                Error::NotTangent("normal-cone fast path needs a direction".into())
            })?;
            let bad = || Error::NotTangent("direction not tangent at this stratum".into());
            match stratum {
                Interior => {
                    if !d.is_zero() {
                        return Err(bad());
                    }
                    Ok(vec![(Zero, Full)])
                }
                Strict => {
                    if !c.is_zero() {
                        return Err(bad());
                    }
                    Ok(vec![(Full, Zero)])
                }
                Corner => {
                    if *c < zero && d.is_zero() {
                        Ok(vec![(Zero, Full)])
                    } else if c.is_zero() && *d > zero {
                        Ok(vec![(Full, Zero)])
                    } else if c.is_zero() && d.is_zero() {
                        Ok(match which {
                            GphObject::NormalDir => {
                                vec![(Zero, Full), (Full, Zero), (Pos, Neg)]
                            }
                            GphObject::RegularOfTangent => vec![(Pos, Neg)],
                            GphObject::Tangent => unreachable!(),
                        })
                    } else {
                        Err(bad())
                    }
                }
            }
        }
    }
}

/// Per-coordinate stratum lookup and product assembly for box-type `P`.
/// Produces exactly the same set as the general-path operation selected by
/// `which`.
pub fn box_fast_path(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    dir: Option<&GphDirection>,
    which: GphObject,
) -> Result<Vec<ProductPiece>> {
    let l = as_box(p).ok_or_else(|| {
        Error::AssumptionFailed("fast path requires P to be a product of R_- factors".into())
    })?;
    let mut per_coord: Vec<Vec<(Axis, Axis)>> = Vec::with_capacity(l);
    for i in 0..l {
        let stratum = scalar_stratum(&pt.d[i], &pt.dstar[i])?;
        let d = dir.map(|d| (&d.e[i], &d.estar[i]));
        per_coord.push(scalar_pieces(stratum, d, which)?);
    }
    Ok(assemble_products(&per_coord))
}

/// Cartesian product over per-coordinate table entries, assembled into
/// block-product pieces.
fn assemble_products(per_coord: &[Vec<(Axis, Axis)>]) -> Vec<ProductPiece> {
    let mut combos: Vec<Vec<(Axis, Axis)>> = vec![vec![]];
    for options in per_coord {
        let mut next = Vec::with_capacity(combos.len() * options.len());
        for c in &combos {
            for o in options {
                let mut c2 = c.clone();
                c2.push(*o);
                next.push(c2);
            }
        }
        combos = next;
    }
    let mut pieces = Vec::with_capacity(combos.len());
    for combo in combos {
        let mut first = combo[0].0.cone();
        let mut second = combo[0].1.cone();
        for (a, b) in combo.iter().skip(1) {
            first = first.product(&a.cone());
            second = second.product(&b.cone());
        }
        let piece = ProductPiece { first, second };
        if !pieces.contains(&piece) {
            pieces.push(piece);
        }
    }
    pieces
}

/// Dispatcher that picks the fast path for box-type polyhedra.
#[derive(Clone, Debug)]
pub struct GphOps {
    pub use_fast_path: bool,
}

impl GphOps {
    pub fn general() -> GphOps {
        GphOps {
            use_fast_path: false,
        }
    }

    pub fn auto() -> GphOps {
        GphOps {
            use_fast_path: true,
        }
    }

    fn fast(&self, p: &ConvexPolyhedron) -> bool {
        self.use_fast_path && as_box(p).is_some()
    }

    pub fn tangent_pieces(
        &self,
        p: &ConvexPolyhedron,
        pt: &GphPoint,
    ) -> Result<Vec<ProductPiece>> {
        if self.fast(p) {
            box_fast_path(p, pt, None, GphObject::Tangent)
        } else {
            tangent_gph_pieces(p, pt)
        }
    }

    pub fn second_tangent_pieces(
        &self,
        p: &ConvexPolyhedron,
        pt: &GphPoint,
        dir: &GphDirection,
    ) -> Result<Vec<ProductPiece>> {
        // the second-order tangent set is the tangent cone of the tangent
        // union, so for boxes it is again a per-coordinate table lookup
        if self.fast(p) {
            let mut per: Vec<Vec<(Axis, Axis)>> = Vec::with_capacity(p.dim);
            for i in 0..p.dim {
                let s0 = scalar_stratum(&pt.d[i], &pt.dstar[i])?;
                per.push(scalar_second_tangent(s0, (&dir.e[i], &dir.estar[i]))?);
            }
            Ok(assemble_products(&per))
        } else {
            second_tangent_gph_pieces(p, pt, dir)
        }
    }

    pub fn dir_normal_pieces(
        &self,
        p: &ConvexPolyhedron,
        pt: &GphPoint,
        dir: &GphDirection,
    ) -> Result<Vec<ProductPiece>> {
        if self.fast(p) {
            box_fast_path(p, pt, Some(dir), GphObject::NormalDir)
        } else {
            dir_normal_gph_pieces(p, pt, dir)
        }
    }

    pub fn regular_normal_of_tangent(
        &self,
        p: &ConvexPolyhedron,
        pt: &GphPoint,
        dir: &GphDirection,
    ) -> Result<ConvexCone> {
        if self.fast(p) {
            let pieces = box_fast_path(p, pt, Some(dir), GphObject::RegularOfTangent)?;
            debug_assert_eq!(pieces.len(), 1);
            Ok(pieces[0].cone())
        } else {
            regular_normal_of_tangent(p, pt, dir)
        }
    }
}

/// Tangent of the scalar tangent union at a tangent direction: the
/// second-order strata of `gph N_{R_-}`.
fn scalar_second_tangent(
    stratum: ScalarStratum,
    dir: (&Rat, &Rat),
) -> Result<Vec<(Axis, Axis)>> {
    use Axis::*;
    let (c, d) = dir;
    let zero = Rat::zero();
    let bad = || Error::NotTangent("direction not tangent at this stratum".into());
    Ok(match stratum {
        ScalarStratum::Interior => {
            if !d.is_zero() {
                return Err(bad());
            }
            vec![(Full, Zero)]
        }
        ScalarStratum::Strict => {
            if !c.is_zero() {
                return Err(bad());
            }
            vec![(Zero, Full)]
        }
        ScalarStratum::Corner => {
            if *c < zero && d.is_zero() {
                vec![(Full, Zero)]
            } else if c.is_zero() && *d > zero {
                vec![(Zero, Full)]
            } else if c.is_zero() && d.is_zero() {
                vec![(Neg, Zero), (Zero, Pos)]
            } else {
                return Err(bad());
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;

    fn r_minus() -> ConvexPolyhedron {
        ConvexPolyhedron::negative_orthant(1)
    }

    fn pt(a: i64, b: i64) -> GphPoint {
        GphPoint::new(vec![rint(a)], vec![rint(b)])
    }

    fn dir(c: i64, d: i64) -> GphDirection {
        GphDirection::new(vec![rint(c)], vec![rint(d)])
    }

    fn union_of(entries: &[(Axis, Axis)]) -> ConeUnion {
        ConeUnion::new(
            2,
            entries
                .iter()
                .map(|(a, b)| a.cone().product(&b.cone()))
                .collect(),
        )
    }

    #[test]
    fn scalar_graph_membership() {
        let p = r_minus();
        assert!(gph_member(&p, &vec![rint(0)], &vec![rint(1)]));
        assert!(!gph_member(&p, &vec![rint(-1)], &vec![rint(1)]));
        assert!(gph_member(&p, &vec![rint(-1)], &vec![rint(0)]));
        let p2 = ConvexPolyhedron::negative_orthant(2);
        assert!(gph_member(&p2, &vec![rint(0), rint(-1)], &vec![rint(1), rint(0)]));
    }

    #[test]
    fn scalar_tangent_strata() {
        use Axis::*;
        let p = r_minus();
        let t = tangent_gph(&p, &pt(0, 0)).unwrap();
        assert!(t.set_equal(&union_of(&[(Neg, Zero), (Zero, Pos)])));
        let t = tangent_gph(&p, &pt(-1, 0)).unwrap();
        assert!(t.set_equal(&union_of(&[(Full, Zero)])));
        let t = tangent_gph(&p, &pt(0, 2)).unwrap();
        assert!(t.set_equal(&union_of(&[(Zero, Full)])));
    }

    #[test]
    fn scalar_second_tangent_strata() {
        use Axis::*;
        let p = r_minus();
        let t2 = second_tangent_gph(&p, &pt(0, 0), &dir(-1, 0)).unwrap();
        assert!(t2.set_equal(&union_of(&[(Full, Zero)])));
        let t2 = second_tangent_gph(&p, &pt(0, 0), &dir(0, 1)).unwrap();
        assert!(t2.set_equal(&union_of(&[(Zero, Full)])));
        let t2 = second_tangent_gph(&p, &pt(0, 0), &dir(0, 0)).unwrap();
        assert!(t2.set_equal(&union_of(&[(Neg, Zero), (Zero, Pos)])));
        assert!(second_tangent_gph(&p, &pt(0, 0), &dir(1, 0)).is_err());
    }

    #[test]
    fn scalar_regular_normal() {
        use Axis::*;
        let p = r_minus();
        let n = regular_normal_gph(&p, &pt(0, 0)).unwrap();
        assert_eq!(n, Pos.cone().product(&Neg.cone()));
        let n = regular_normal_gph(&p, &pt(-1, 0)).unwrap();
        assert_eq!(n, Zero.cone().product(&Full.cone()));
        let p2 = ConvexPolyhedron::negative_orthant(2);
        let n = regular_normal_gph(
            &p2,
            &GphPoint::new(vec![rint(0), rint(0)], vec![rint(0), rint(0)]),
        )
        .unwrap();
        // R^2_+ x R^2_-
        let orth = ConvexCone::negative_orthant(2);
        assert_eq!(n, orth.polar().product(&orth));
    }

    #[test]
    fn scalar_dir_normal_strata() {
        use Axis::*;
        let p = r_minus();
        let n = dir_limiting_normal_gph(&p, &pt(0, 0), &dir(0, 0)).unwrap();
        assert!(n.set_equal(&union_of(&[(Zero, Full), (Full, Zero), (Pos, Neg)])));
        let n = dir_limiting_normal_gph(&p, &pt(0, 0), &dir(-1, 0)).unwrap();
        assert!(n.set_equal(&union_of(&[(Zero, Full)])));
        let n = dir_limiting_normal_gph(&p, &pt(0, 0), &dir(0, 1)).unwrap();
        assert!(n.set_equal(&union_of(&[(Full, Zero)])));
    }

    #[test]
    fn scalar_regular_of_tangent_strata() {
        use Axis::*;
        let p = r_minus();
        let n = regular_normal_of_tangent(&p, &pt(0, 0), &dir(0, 0)).unwrap();
        assert_eq!(n, Pos.cone().product(&Neg.cone()));
        let n = regular_normal_of_tangent(&p, &pt(0, 0), &dir(-1, 0)).unwrap();
        assert_eq!(n, Zero.cone().product(&Full.cone()));
        let n = regular_normal_of_tangent(&p, &pt(0, 0), &dir(0, 1)).unwrap();
        assert_eq!(n, Full.cone().product(&Zero.cone()));
    }

    #[test]
    fn fast_path_matches_general() {
        let p = ConvexPolyhedron::negative_orthant(2);
        let pt = GphPoint::new(vec![rint(0), rint(0)], vec![rint(0), rint(1)]);
        let dir = GphDirection::new(vec![rint(-1), rint(0)], vec![rint(0), rint(3)]);
        let fast = box_fast_path(&p, &pt, None, GphObject::Tangent).unwrap();
        let general = tangent_gph_pieces(&p, &pt).unwrap();
        assert!(pieces_to_union(4, &fast).set_equal(&pieces_to_union(4, &general)));

        let fast = box_fast_path(&p, &pt, Some(&dir), GphObject::NormalDir).unwrap();
        let general = dir_normal_gph_pieces(&p, &pt, &dir).unwrap();
        assert!(pieces_to_union(4, &fast).set_equal(&pieces_to_union(4, &general)));

        let fast = box_fast_path(&p, &pt, Some(&dir), GphObject::RegularOfTangent).unwrap();
        let general = regular_normal_of_tangent(&p, &pt, &dir).unwrap();
        assert_eq!(fast.len(), 1);
        assert!(ConeUnion::single(fast[0].cone()).set_equal(&ConeUnion::single(general)));
    }

    #[test]
    fn box_detection() {
        assert_eq!(as_box(&ConvexPolyhedron::negative_orthant(3)), Some(3));
        let not_box = ConvexPolyhedron::from_hrep(
            2,
            vec![(vec![rint(1), rint(1)], rint(0))],
            vec![],
        );
        assert_eq!(as_box(&not_box), None);
        assert!(box_fast_path(
            &not_box,
            &GphPoint::new(vec![rint(0), rint(0)], vec![rint(0), rint(0)]),
            None,
            GphObject::Tangent
        )
        .is_err());
    }
}
