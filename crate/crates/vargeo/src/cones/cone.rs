//! Convex polyhedral cones with canonical dual representations.
//!
//! Every cone is stored in a canonical form: minimal facet normals and
//! equality rows on the H side, extreme rays and a lineality basis on the
//! V side, all reduced modulo the appropriate subspace, primitively scaled
//! and sorted. Two cones are equal as sets iff the structs are equal, and
//! the polar is a representation swap.

use super::dd::{canonical_generators, dual_description};
use crate::linalg::span_basis;
use crate::rat::{dot, vec_cmp, vneg, Rat, RatMat, RatVec};
use crate::subspace::Subspace;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConvexCone {
    pub dim: usize,
    /// Rows `e` with `e.x = 0`: canonical basis of the span complement.
    pub eqs: Vec<RatVec>,
    /// Facet rows `a` with `a.x <= 0`, reduced onto the span.
    pub ineqs: Vec<RatVec>,
    /// Canonical basis of the lineality space.
    pub lineality: Vec<RatVec>,
    /// Extreme rays, reduced modulo the lineality space.
    pub rays: Vec<RatVec>,
}

impl ConvexCone {
    pub fn from_hrep(dim: usize, ineqs: Vec<RatVec>, eqs: Vec<RatVec>) -> ConvexCone {
        for r in ineqs.iter().chain(&eqs) {
            assert_eq!(r.len(), dim, "from_hrep: row has wrong dimension");
        }
        let (lin, rays) = dual_description(dim, &ineqs, &eqs);
        let (lineality, rays) = canonical_generators(lin, rays);
        let (eqs, ineqs) = minimal_hrep(dim, &rays, &lineality);
        ConvexCone {
            dim,
            eqs,
            ineqs,
            lineality,
            rays,
        }
    }

    pub fn from_vrep(dim: usize, rays: Vec<RatVec>, lineality: Vec<RatVec>) -> ConvexCone {
        for r in rays.iter().chain(&lineality) {
            assert_eq!(r.len(), dim, "from_vrep: generator has wrong dimension");
        }
        let (eqs, ineqs) = minimal_hrep(dim, &rays, &lineality);
        // a second pass through the H-rep yields the extreme rays
        let (lin, rays) = dual_description(dim, &ineqs, &eqs);
        let (lineality, rays) = canonical_generators(lin, rays);
        ConvexCone {
            dim,
            eqs,
            ineqs,
            lineality,
            rays,
        }
    }

    pub fn full_space(dim: usize) -> ConvexCone {
        ConvexCone::from_hrep(dim, vec![], vec![])
    }

    pub fn zero(dim: usize) -> ConvexCone {
        ConvexCone::from_vrep(dim, vec![], vec![])
    }

    pub fn negative_orthant(dim: usize) -> ConvexCone {
        let rows = RatMat::identity(dim).row_vecs();
        ConvexCone::from_hrep(dim, rows, vec![])
    }

    pub fn member(&self, v: &RatVec) -> bool {
        assert_eq!(v.len(), self.dim, "member: dimension mismatch");
        self.eqs.iter().all(|e| dot(e, v).is_zero())
            && self.ineqs.iter().all(|a| dot(a, v) <= Rat::zero())
    }

    /// Strict membership in the relative interior.
    pub fn relint_member(&self, v: &RatVec) -> bool {
        self.eqs.iter().all(|e| dot(e, v).is_zero())
            && self.ineqs.iter().all(|a| dot(a, v) < Rat::zero())
    }

    /// A canonical point of the relative interior (sum of extreme rays).
    pub fn relint_point(&self) -> RatVec {
        let mut p = vec![Rat::zero(); self.dim];
        for r in &self.rays {
            for (pi, ri) in p.iter_mut().zip(r) {
                *pi += ri;
            }
        }
        p
    }

    /// The polar cone; a pure representation swap in canonical form.
    pub fn polar(&self) -> ConvexCone {
        ConvexCone {
            dim: self.dim,
            eqs: self.lineality.clone(),
            ineqs: self.rays.clone(),
            lineality: self.eqs.clone(),
            rays: self.ineqs.clone(),
        }
    }

    pub fn span(&self) -> Subspace {
        let mut gens = self.rays.clone();
        gens.extend(self.lineality.iter().cloned());
        Subspace::from_spanning(self.dim, &gens)
    }

    pub fn lineality_space(&self) -> Subspace {
        Subspace::from_spanning(self.dim, &self.lineality)
    }

    pub fn is_full_space(&self) -> bool {
        self.eqs.is_empty() && self.ineqs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_subspace(&self) -> bool {
        self.rays.is_empty() && self.ineqs.is_empty()
    }

    pub fn intersect(&self, other: &ConvexCone) -> ConvexCone {
        assert_eq!(self.dim, other.dim);
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        ConvexCone::from_hrep(self.dim, ineqs, eqs)
    }

    /// Intersection with the hyperplane `v`-perp.
    pub fn intersect_perp(&self, v: &RatVec) -> ConvexCone {
        let mut eqs = self.eqs.clone();
        eqs.push(v.clone());
        ConvexCone::from_hrep(self.dim, self.ineqs.clone(), eqs)
    }

    /// Intersection with the orthogonal complement of a subspace.
    pub fn intersect_subspace_perp(&self, s: &Subspace) -> ConvexCone {
        let mut eqs = self.eqs.clone();
        eqs.extend(s.basis.iter().cloned());
        ConvexCone::from_hrep(self.dim, self.ineqs.clone(), eqs)
    }

    /// Adds the halfspace `a.x <= 0`.
    pub fn cut(&self, a: &RatVec) -> ConvexCone {
        let mut ineqs = self.ineqs.clone();
        ineqs.push(a.clone());
        ConvexCone::from_hrep(self.dim, ineqs, self.eqs.clone())
    }

    pub fn contains_cone(&self, other: &ConvexCone) -> bool {
        other.rays.iter().all(|r| self.member(r))
            && other
                .lineality
                .iter()
                .all(|l| self.member(l) && self.member(&vneg(l)))
    }

    /// Product cone, assembled directly from the canonical blocks.
    pub fn product(&self, other: &ConvexCone) -> ConvexCone {
        let dim = self.dim + other.dim;
        let left = |v: &RatVec| {
            let mut w = v.clone();
            w.extend(vec![Rat::zero(); other.dim]);
            w
        };
        let right = |v: &RatVec| {
            let mut w = vec![Rat::zero(); self.dim];
            w.extend(v.iter().cloned());
            w
        };
        let mut eqs: Vec<RatVec> = self.eqs.iter().map(&left).collect();
        eqs.extend(other.eqs.iter().map(&right));
        let mut ineqs: Vec<RatVec> = self.ineqs.iter().map(&left).collect();
        ineqs.extend(other.ineqs.iter().map(&right));
        ineqs.sort_by(|a, b| vec_cmp(a, b));
        let mut lineality: Vec<RatVec> = self.lineality.iter().map(&left).collect();
        lineality.extend(other.lineality.iter().map(&right));
        let mut rays: Vec<RatVec> = self.rays.iter().map(&left).collect();
        rays.extend(other.rays.iter().map(&right));
        rays.sort_by(|a, b| vec_cmp(a, b));
        ConvexCone {
            dim,
            eqs,
            ineqs,
            lineality,
            rays,
        }
    }

    /// Image under a linear map (V-rep push-forward).
    pub fn image(&self, m: &RatMat) -> ConvexCone {
        assert_eq!(m.cols, self.dim, "image: matrix shape mismatch");
        let rays = self.rays.iter().map(|r| m.mul_vec(r)).collect();
        let lin = self.lineality.iter().map(|l| m.mul_vec(l)).collect();
        ConvexCone::from_vrep(m.rows, rays, lin)
    }

    /// Preimage `{x : Mx in self}`.
    pub fn preimage(&self, m: &RatMat) -> ConvexCone {
        assert_eq!(m.rows, self.dim, "preimage: matrix shape mismatch");
        let ineqs = self.ineqs.iter().map(|a| m.tr_mul_vec(a)).collect();
        let eqs = self.eqs.iter().map(|e| m.tr_mul_vec(e)).collect();
        ConvexCone::from_hrep(m.cols, ineqs, eqs)
    }

    /// Minkowski difference `self + (-other)`.
    pub fn minkowski_diff(&self, other: &ConvexCone) -> ConvexCone {
        assert_eq!(self.dim, other.dim);
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().map(|r| vneg(r)));
        let mut lin = self.lineality.clone();
        lin.extend(other.lineality.iter().cloned());
        ConvexCone::from_vrep(self.dim, rays, lin)
    }

    /// Minkowski sum with the line spanned by `v`.
    pub fn plus_line(&self, v: &RatVec) -> ConvexCone {
        let mut lin = self.lineality.clone();
        lin.push(v.clone());
        ConvexCone::from_vrep(self.dim, self.rays.clone(), lin)
    }

    /// Tangent cone at a member: the active-constraint cone.
    pub fn tangent_cone_at(&self, v: &RatVec) -> ConvexCone {
        debug_assert!(self.member(v));
        let active: Vec<RatVec> = self
            .ineqs
            .iter()
            .filter(|a| dot(a, v).is_zero())
            .cloned()
            .collect();
        ConvexCone::from_hrep(self.dim, active, self.eqs.clone())
    }

    /// Normal cone at a member (polar of the tangent cone).
    pub fn normal_cone_at(&self, v: &RatVec) -> ConvexCone {
        self.tangent_cone_at(v).polar()
    }

    /// The face `self ∩ [v*]-perp` for `v*` in the polar cone.
    pub fn face_for(&self, vstar: &RatVec) -> ConvexCone {
        self.intersect_perp(vstar)
    }

    /// All faces, enumerated as `K ∩ [v*]-perp` over sums of subsets of the
    /// polar's extreme rays. Complete for polyhedral cones; intended for
    /// desk-scale instances (the subset count is 2^(polar ray count)).
    pub fn faces(&self) -> Vec<ConvexCone> {
        let polar_rays = self.rays_of_polar();
        assert!(
            polar_rays.len() <= 20,
            "face enumeration limit exceeded ({} polar rays)",
            polar_rays.len()
        );
        let mut faces: Vec<ConvexCone> = Vec::new();
        for mask in 0u32..(1u32 << polar_rays.len()) {
            let mut v = vec![Rat::zero(); self.dim];
            for (i, r) in polar_rays.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for (vi, ri) in v.iter_mut().zip(r) {
                        *vi += ri;
                    }
                }
            }
            let f = self.face_for(&v);
            if !faces.contains(&f) {
                faces.push(f);
            }
        }
        faces.sort();
        faces
    }

    fn rays_of_polar(&self) -> Vec<RatVec> {
        // rays of the polar are the facet normals (canonical swap)
        self.ineqs.clone()
    }

    /// Whether the open side `{a.x > 0}` meets the cone.
    pub fn reaches_positive(&self, a: &RatVec) -> bool {
        self.rays.iter().any(|r| dot(a, r) > Rat::zero())
            || self.lineality.iter().any(|l| !dot(a, l).is_zero())
    }

    pub fn reaches_negative(&self, a: &RatVec) -> bool {
        self.reaches_positive(&vneg(a))
    }

    /// Support function value as (finite max-is-zero for cones): for a cone
    /// the support function is 0 on the polar and +inf elsewhere.
    pub fn support_is_finite(&self, zstar: &RatVec) -> bool {
        self.polar().member(zstar)
    }

    /// Exact dimension of the cone (dim of its span).
    pub fn cone_dim(&self) -> usize {
        self.dim - self.eqs.len()
    }
}

/// Minimal canonical H-rep computed from generators via the polar.
fn minimal_hrep(
    dim: usize,
    rays: &[RatVec],
    lineality: &[RatVec],
) -> (Vec<RatVec>, Vec<RatVec>) {
    // polar = {y : r.y <= 0, l.y = 0}
    let (polar_lin, polar_rays) =
        dual_description(dim, &rays.to_vec(), &lineality.to_vec());
    let (polar_lin, polar_rays) = canonical_generators(polar_lin, polar_rays);
    // eqs of C = lineality basis of polar; ineqs of C = extreme rays of polar
    (polar_lin, polar_rays)
}

/// Canonical basis of the span of a list of cones.
pub fn union_span(dim: usize, pieces: &[ConvexCone]) -> Subspace {
    let mut gens: Vec<RatVec> = Vec::new();
    for p in pieces {
        gens.extend(p.rays.iter().cloned());
        gens.extend(p.lineality.iter().cloned());
    }
    Subspace {
        dim,
        basis: span_basis(&gens),
    }
}
