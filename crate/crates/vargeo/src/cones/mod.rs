//! Exact polyhedral convex sets and cones: dual representations, polarity,
//! faces, tangent/normal/critical cones, and canonicalized finite unions.

mod cone;
mod dd;
mod polyhedron;
mod union;

pub use cone::{union_span, ConvexCone};
pub use polyhedron::{AffRow, ArgMax, ConvexPolyhedron, SupportValue};
pub use union::{ConeUnion, PolyhedronUnion};

use crate::error::{Error, Result};
use crate::rat::RatVec;

/// Tangent cone to a convex polyhedron at a member point.
pub fn tangent_cone_polyhedron(p: &ConvexPolyhedron, d: &RatVec) -> Result<ConvexCone> {
    if !p.member(d) {
        return Err(Error::NotMember("tangent_cone_polyhedron".into()));
    }
    Ok(p.tangent_cone_at(d))
}

/// Normal cone to a convex polyhedron at a member point.
pub fn normal_cone_polyhedron(p: &ConvexPolyhedron, d: &RatVec) -> Result<ConvexCone> {
    if !p.member(d) {
        return Err(Error::NotMember("normal_cone_polyhedron".into()));
    }
    Ok(p.normal_cone_at(d))
}

/// Critical cone `T_P(d) ∩ [d*]-perp` for a graph pair `(d, d*)`.
pub fn critical_cone(p: &ConvexPolyhedron, d: &RatVec, dstar: &RatVec) -> Result<ConvexCone> {
    let t = tangent_cone_polyhedron(p, d)?;
    if !t.polar().member(dstar) {
        return Err(Error::NotMember("critical_cone: d* not normal at d".into()));
    }
    Ok(t.intersect_perp(dstar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint, RatMat};

    fn orthant2() -> ConvexPolyhedron {
        ConvexPolyhedron::negative_orthant(2)
    }

    #[test]
    fn dd_convert_examples() {
        // negative orthant: rays (-1,0),(0,-1), no lineality
        let c = ConvexCone::negative_orthant(2);
        assert_eq!(
            c.rays,
            vec![vec![rint(-1), rint(0)], vec![rint(0), rint(-1)]]
        );
        assert!(c.lineality.is_empty());

        // full space
        let f = ConvexCone::full_space(2);
        assert_eq!(f.lineality.len(), 2);
        assert!(f.rays.is_empty() && f.ineqs.is_empty() && f.eqs.is_empty());

        // {x1+x2<=0, -x1<=0} -> rays (0,-1),(1,-1)
        let c = ConvexCone::from_hrep(
            2,
            vec![vec![rint(1), rint(1)], vec![rint(-1), rint(0)]],
            vec![],
        );
        assert_eq!(c.rays, vec![vec![rint(0), rint(-1)], vec![rint(1), rint(-1)]]);
    }

    #[test]
    fn polar_examples() {
        let neg = ConvexCone::negative_orthant(2);
        let pos = neg.polar();
        assert!(pos.member(&vec![rint(3), rint(5)]));
        assert!(!pos.member(&vec![rint(-1), rint(0)]));
        // involution
        assert_eq!(pos.polar(), neg);

        // full space polar = {0}
        let z = ConvexCone::full_space(2).polar();
        assert!(z.is_zero());

        // cone spanned by (0,-1),(1,-1): polar has rays (1,1),(-1,0)
        let c = ConvexCone::from_vrep(
            2,
            vec![vec![rint(0), rint(-1)], vec![rint(1), rint(-1)]],
            vec![],
        );
        let p = c.polar();
        let mut expect = vec![vec![rint(1), rint(1)], vec![rint(-1), rint(0)]];
        expect.sort_by(|a, b| crate::rat::vec_cmp(a, b));
        assert_eq!(p.rays, expect);
        // pairwise inner-product sign check
        for r in &c.rays {
            for s in &p.rays {
                assert!(crate::rat::dot(r, s) <= crate::rat::rzero());
            }
        }
    }

    #[test]
    fn span_and_lineality() {
        // R_- in R^1: span = R, lineality = 0
        let c = ConvexCone::from_hrep(1, vec![vec![rint(1)]], vec![]);
        assert_eq!(c.span().rank(), 1);
        assert_eq!(c.lineality_space().rank(), 0);

        // single ray (1,-1)
        let r = ConvexCone::from_vrep(2, vec![vec![rint(1), rint(-1)]], vec![]);
        assert_eq!(r.span().rank(), 1);
        assert_eq!(r.lineality_space().rank(), 0);

        // {x in R^3 : x1 <= 0}: lineality = span{e2,e3}
        let h = ConvexCone::from_hrep(3, vec![vec![rint(1), rint(0), rint(0)]], vec![]);
        let lin = h.lineality_space();
        assert_eq!(lin.rank(), 2);
        assert!(lin.contains(&vec![rint(0), rint(1), rint(0)]));
        assert!(lin.contains(&vec![rint(0), rint(0), rint(1)]));
    }

    #[test]
    fn tangent_normal_critical() {
        let p = orthant2();
        // boundary point (0,-1): one active constraint
        let t = tangent_cone_polyhedron(&p, &vec![rint(0), rint(-1)]).unwrap();
        assert!(t.member(&vec![rint(-5), rint(7)]));
        assert!(!t.member(&vec![rint(1), rint(0)]));
        // corner: tangent is the orthant itself
        let t0 = tangent_cone_polyhedron(&p, &vec![rint(0), rint(0)]).unwrap();
        assert_eq!(t0, ConvexCone::negative_orthant(2));
        // outside point errors
        assert!(tangent_cone_polyhedron(&p, &vec![rint(1), rint(0)]).is_err());

        // normal cone examples
        let n = normal_cone_polyhedron(&p, &vec![rint(0), rint(-1)]).unwrap();
        assert!(n.member(&vec![rint(2), rint(0)]));
        assert!(!n.member(&vec![rint(0), rint(1)]));
        let interior = ConvexPolyhedron::from_hrep(
            1,
            vec![(vec![rint(1)], rint(0))],
            vec![],
        );
        let ni = normal_cone_polyhedron(&interior, &vec![rint(-1)]).unwrap();
        assert!(ni.is_zero());
        // P=R_-, d=0 -> N = R_+
        let n0 = normal_cone_polyhedron(&interior, &vec![rint(0)]).unwrap();
        assert!(n0.member(&vec![rint(4)]) && !n0.member(&vec![rint(-1)]));

        // critical cones
        let r_minus = interior.clone();
        let k = critical_cone(&r_minus, &vec![rint(0)], &vec![rint(0)]).unwrap();
        assert!(k.member(&vec![rint(-2)])); // K = R_-
        let k2 = critical_cone(&r_minus, &vec![rint(0)], &vec![rint(1)]).unwrap();
        assert!(k2.is_zero());
        let k3 = critical_cone(&p, &vec![rint(0), rint(-1)], &vec![rint(1), rint(0)]).unwrap();
        assert!(k3.member(&vec![rint(0), rint(5)]) && k3.member(&vec![rint(0), rint(-5)]));
        assert!(!k3.member(&vec![rint(-1), rint(0)]));
        assert!(critical_cone(&r_minus, &vec![rint(-1)], &vec![rint(1)]).is_err());
    }

    #[test]
    fn face_enumeration() {
        // R_- has faces {0}, R_-
        let c = ConvexCone::from_hrep(1, vec![vec![rint(1)]], vec![]);
        assert_eq!(c.faces().len(), 2);
        // orthant in R^2: 4 faces
        assert_eq!(ConvexCone::negative_orthant(2).faces().len(), 4);
        // 2^k faces for the k-orthant
        for k in 1..=4 {
            assert_eq!(ConvexCone::negative_orthant(k).faces().len(), 1 << k);
        }
        // cone{(0,-1),(1,-1)}: 4 faces (0, two rays, the cone)
        let c = ConvexCone::from_vrep(
            2,
            vec![vec![rint(0), rint(-1)], vec![rint(1), rint(-1)]],
            vec![],
        );
        let faces = c.faces();
        assert_eq!(faces.len(), 4);
        // lin F = lin K for every face
        for f in &faces {
            assert_eq!(f.lineality, c.lineality);
        }
    }

    #[test]
    fn membership_and_union_equality() {
        let neg = ConvexCone::negative_orthant(2);
        assert!(neg.member(&vec![rint(0), rint(-5)]));

        // order invariance of canonical unions
        let a = ConvexCone::from_vrep(2, vec![vec![rint(-1), rint(0)]], vec![]);
        let b = ConvexCone::from_vrep(2, vec![vec![rint(0), rint(1)]], vec![]);
        let u1 = ConeUnion::new(2, vec![a.clone(), b.clone()]);
        let u2 = ConeUnion::new(2, vec![b, a]);
        assert_eq!(u1, u2);
        assert!(u1.set_equal(&u2));
    }

    #[test]
    fn union_coverage_fallback() {
        // R^2 as one piece equals the union of two halfplanes
        let whole = ConeUnion::single(ConvexCone::full_space(2));
        let left = ConvexCone::from_hrep(2, vec![vec![rint(1), rint(0)]], vec![]);
        let right = ConvexCone::from_hrep(2, vec![vec![rint(-1), rint(0)]], vec![]);
        let halves = ConeUnion::new(2, vec![left, right]);
        assert_ne!(whole, halves);
        assert!(whole.set_equal(&halves));
        // but a quadrant union is not the plane
        let quad = ConeUnion::single(ConvexCone::negative_orthant(2));
        assert!(!whole.set_equal(&quad));
    }

    #[test]
    fn union_tangent_examples() {
        // C = (R_- x {0}) u ({0} x R_+)
        let a = ConvexCone::from_vrep(2, vec![vec![rint(-1), rint(0)]], vec![]);
        let b = ConvexCone::from_vrep(2, vec![vec![rint(0), rint(1)]], vec![]);
        let c = ConeUnion::new(2, vec![a, b]);
        // at the origin: C itself
        let t0 = c.tangent_at(&vec![rint(0), rint(0)]).unwrap();
        assert!(t0.set_equal(&c));
        // at (0,a), a>0: {0} x R
        let t1 = c.tangent_at(&vec![rint(0), rint(3)]).unwrap();
        assert_eq!(t1.pieces.len(), 1);
        assert!(t1.pieces[0].member(&vec![rint(0), rint(-9)]));
        assert!(!t1.pieces[0].member(&vec![rat(1, 2), rint(0)]));
        // at (-1,0): R x {0}
        let t2 = c.tangent_at(&vec![rint(-1), rint(0)]).unwrap();
        assert!(t2.pieces[0].member(&vec![rint(7), rint(0)]));
        assert!(c.tangent_at(&vec![rint(1), rint(1)]).is_none());
    }

    #[test]
    fn polyhedron_roundtrip_and_emptiness() {
        let p = ConvexPolyhedron::from_hrep(
            2,
            vec![
                (vec![rint(1), rint(0)], rint(1)),
                (vec![rint(-1), rint(0)], rint(0)),
                (vec![rint(0), rint(1)], rint(2)),
                (vec![rint(0), rint(-1)], rint(0)),
            ],
            vec![],
        );
        assert!(!p.empty);
        assert_eq!(p.points.len(), 4); // a box has 4 vertices
        assert!(p.member(&vec![rat(1, 2), rint(1)]));
        let q = ConvexPolyhedron::from_vrep(2, p.points.clone(), vec![], vec![]);
        assert_eq!(p, q);

        let e = ConvexPolyhedron::from_hrep(
            1,
            vec![
                (vec![rint(1)], rint(-1)),
                (vec![rint(-1)], rint(0)),
            ],
            vec![],
        );
        assert!(e.empty);
    }

    #[test]
    fn product_matches_hrep_build() {
        let a = ConvexCone::negative_orthant(1);
        let b = ConvexCone::from_vrep(1, vec![vec![rint(1)]], vec![]);
        let prod = a.product(&b);
        let direct = ConvexCone::from_hrep(
            2,
            vec![vec![rint(1), rint(0)], vec![rint(0), rint(-1)]],
            vec![],
        );
        assert_eq!(prod, direct);
        let m = RatMat::identity(2);
        assert_eq!(prod.image(&m), direct);
    }
}
