//! Convex polyhedra `{x : Ax <= a, Ex = e}` handled through the cone
//! engine by homogenization.

use super::cone::ConvexCone;
use crate::rat::{dot, vneg, Rat, RatMat, RatVec};
use num_traits::Zero;

/// An inequality or equality row `(normal, rhs)`.
pub type AffRow = (RatVec, Rat);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConvexPolyhedron {
    pub dim: usize,
    pub empty: bool,
    /// Canonical facet rows `a.x <= rhs`.
    pub ineqs: Vec<AffRow>,
    /// Canonical equality rows `e.x = rhs`.
    pub eqs: Vec<AffRow>,
    /// Minimal-face representatives (vertices when the polyhedron is pointed).
    pub points: Vec<RatVec>,
    pub rays: Vec<RatVec>,
    pub lineality: Vec<RatVec>,
}

impl ConvexPolyhedron {
    pub fn from_hrep(dim: usize, ineqs: Vec<AffRow>, eqs: Vec<AffRow>) -> ConvexPolyhedron {
        let mut cone_ineqs: Vec<RatVec> = Vec::with_capacity(ineqs.len() + 1);
        for (row, rhs) in &ineqs {
            assert_eq!(row.len(), dim, "from_hrep: row dimension");
            let mut r = row.clone();
            r.push(-rhs.clone());
            cone_ineqs.push(r);
        }
        // homogenizing constraint t >= 0, as the row -t <= 0
        let mut tneg = vec![Rat::zero(); dim + 1];
        tneg[dim] = -Rat::from_integer(1.into());
        cone_ineqs.push(tneg);
        let cone_eqs: Vec<RatVec> = eqs
            .iter()
            .map(|(row, rhs)| {
                assert_eq!(row.len(), dim, "from_hrep: eq row dimension");
                let mut r = row.clone();
                r.push(-rhs.clone());
                r
            })
            .collect();
        let hom = ConvexCone::from_hrep(dim + 1, cone_ineqs, cone_eqs);
        Self::from_homogenization(dim, hom)
    }

    pub fn from_vrep(
        dim: usize,
        points: Vec<RatVec>,
        rays: Vec<RatVec>,
        lineality: Vec<RatVec>,
    ) -> ConvexPolyhedron {
        let one = Rat::from_integer(1.into());
        let mut hom_rays: Vec<RatVec> = Vec::new();
        for p in &points {
            assert_eq!(p.len(), dim);
            let mut r = p.clone();
            r.push(one.clone());
            hom_rays.push(r);
        }
        for r in &rays {
            assert_eq!(r.len(), dim);
            let mut v = r.clone();
            v.push(Rat::zero());
            hom_rays.push(v);
        }
        let hom_lin: Vec<RatVec> = lineality
            .iter()
            .map(|l| {
                assert_eq!(l.len(), dim);
                let mut v = l.clone();
                v.push(Rat::zero());
                v
            })
            .collect();
        let hom = ConvexCone::from_vrep(dim + 1, hom_rays, hom_lin);
        Self::from_homogenization(dim, hom)
    }

    fn from_homogenization(dim: usize, hom: ConvexCone) -> ConvexPolyhedron {
        let mut points = Vec::new();
        let mut rays = Vec::new();
        for r in &hom.rays {
            let t = &r[dim];
            if t.is_zero() {
                rays.push(r[..dim].to_vec());
            } else {
                points.push(r[..dim].iter().map(|x| x / t).collect());
            }
        }
        let lineality: Vec<RatVec> = hom
            .lineality
            .iter()
            .map(|l| {
                debug_assert!(l[dim].is_zero(), "lineality with nonzero scale");
                l[..dim].to_vec()
            })
            .collect();
        if points.is_empty() {
            return ConvexPolyhedron::empty_set(dim);
        }
        let mut ineqs = Vec::new();
        for row in &hom.ineqs {
            let (a, b) = (row[..dim].to_vec(), row[dim].clone());
            if a.iter().all(|x| x.is_zero()) {
                continue; // the homogenizing facet t >= 0
            }
            ineqs.push((a, -b));
        }
        let mut eqs = Vec::new();
        for row in &hom.eqs {
            let (a, b) = (row[..dim].to_vec(), row[dim].clone());
            if a.iter().all(|x| x.is_zero()) {
                // t = 0 forced: unreachable since a point with t > 0 exists
                unreachable!("degenerate homogenization of a nonempty polyhedron");
            }
            eqs.push((a, -b));
        }
        ConvexPolyhedron {
            dim,
            empty: false,
            ineqs,
            eqs,
            points,
            rays,
            lineality,
        }
    }

    pub fn empty_set(dim: usize) -> ConvexPolyhedron {
        ConvexPolyhedron {
            dim,
            empty: true,
            ineqs: vec![],
            eqs: vec![],
            points: vec![],
            rays: vec![],
            lineality: vec![],
        }
    }

    pub fn full_space(dim: usize) -> ConvexPolyhedron {
        ConvexPolyhedron::from_hrep(dim, vec![], vec![])
    }

    /// The orthant product `prod R_-` (the set `x <= 0` componentwise).
    pub fn negative_orthant(dim: usize) -> ConvexPolyhedron {
        let rows = RatMat::identity(dim)
            .row_vecs()
            .into_iter()
            .map(|r| (r, Rat::zero()))
            .collect();
        ConvexPolyhedron::from_hrep(dim, rows, vec![])
    }

    /// Views a cone as a polyhedron.
    pub fn from_cone(c: &ConvexCone) -> ConvexPolyhedron {
        ConvexPolyhedron::from_vrep(
            c.dim,
            vec![vec![Rat::zero(); c.dim]],
            c.rays.clone(),
            c.lineality.clone(),
        )
    }

    pub fn member(&self, x: &RatVec) -> bool {
        assert_eq!(x.len(), self.dim, "member: dimension mismatch");
        !self.empty
            && self.eqs.iter().all(|(e, b)| dot(e, x) == *b)
            && self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b)
    }

    pub fn relint_member(&self, x: &RatVec) -> bool {
        !self.empty
            && self.eqs.iter().all(|(e, b)| dot(e, x) == *b)
            && self.ineqs.iter().all(|(a, b)| dot(a, x) < *b)
    }

    /// Barycenter of the points plus the ray sum: a relative-interior point.
    pub fn relint_point(&self) -> Option<RatVec> {
        if self.empty {
            return None;
        }
        let k = Rat::from_integer((self.points.len() as i64).into());
        let mut p = vec![Rat::zero(); self.dim];
        for pt in &self.points {
            for (pi, xi) in p.iter_mut().zip(pt) {
                *pi += xi;
            }
        }
        for pi in p.iter_mut() {
            *pi /= &k;
        }
        for r in &self.rays {
            for (pi, ri) in p.iter_mut().zip(r) {
                *pi += ri;
            }
        }
        Some(p)
    }

    /// Tangent cone at a member: active inequality rows.
    pub fn tangent_cone_at(&self, x: &RatVec) -> ConvexCone {
        debug_assert!(self.member(x), "tangent_cone_at: point not a member");
        let active: Vec<RatVec> = self
            .ineqs
            .iter()
            .filter(|(a, b)| dot(a, x) == *b)
            .map(|(a, _)| a.clone())
            .collect();
        let eqs: Vec<RatVec> = self.eqs.iter().map(|(e, _)| e.clone()).collect();
        ConvexCone::from_hrep(self.dim, active, eqs)
    }

    pub fn normal_cone_at(&self, x: &RatVec) -> ConvexCone {
        self.tangent_cone_at(x).polar()
    }

    pub fn contains(&self, other: &ConvexPolyhedron) -> bool {
        if other.empty {
            return true;
        }
        if self.empty {
            return false;
        }
        other.points.iter().all(|p| self.member(p))
            && other.rays.iter().all(|r| self.recession_member(r))
            && other
                .lineality
                .iter()
                .all(|l| self.recession_member(l) && self.recession_member(&vneg(l)))
    }

    /// Membership in the recession cone.
    pub fn recession_member(&self, r: &RatVec) -> bool {
        self.eqs.iter().all(|(e, _)| dot(e, r).is_zero())
            && self.ineqs.iter().all(|(a, _)| dot(a, r) <= Rat::zero())
    }

    pub fn recession_cone(&self) -> ConvexCone {
        ConvexCone::from_vrep(self.dim, self.rays.clone(), self.lineality.clone())
    }

    pub fn intersect(&self, other: &ConvexPolyhedron) -> ConvexPolyhedron {
        if self.empty || other.empty {
            return ConvexPolyhedron::empty_set(self.dim);
        }
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        ConvexPolyhedron::from_hrep(self.dim, ineqs, eqs)
    }

    /// Adds the halfspace `a.x <= b`.
    pub fn cut(&self, a: &RatVec, b: &Rat) -> ConvexPolyhedron {
        if self.empty {
            return self.clone();
        }
        let mut ineqs = self.ineqs.clone();
        ineqs.push((a.clone(), b.clone()));
        ConvexPolyhedron::from_hrep(self.dim, ineqs, self.eqs.clone())
    }

    /// Image under the affine map `x -> Mx + c`.
    pub fn affine_image(&self, m: &RatMat, c: &RatVec) -> ConvexPolyhedron {
        assert_eq!(m.cols, self.dim);
        if self.empty {
            return ConvexPolyhedron::empty_set(m.rows);
        }
        let points = self
            .points
            .iter()
            .map(|p| crate::rat::vadd(&m.mul_vec(p), c))
            .collect();
        let rays = self.rays.iter().map(|r| m.mul_vec(r)).collect();
        let lin = self.lineality.iter().map(|l| m.mul_vec(l)).collect();
        ConvexPolyhedron::from_vrep(m.rows, points, rays, lin)
    }

    /// Whether the open side `{a.x > b}` meets the polyhedron.
    pub fn reaches_above(&self, a: &RatVec, b: &Rat) -> bool {
        if self.empty {
            return false;
        }
        self.points.iter().any(|p| dot(a, p) > *b)
            || self.rays.iter().any(|r| dot(a, r) > Rat::zero())
            || self.lineality.iter().any(|l| !dot(a, l).is_zero())
    }

    pub fn reaches_below(&self, a: &RatVec, b: &Rat) -> bool {
        self.reaches_above(&vneg(a), &(-b))
    }

    /// Exact support function: None encodes -inf (empty set), the bool
    /// flags +inf (unbounded in direction `zstar`).
    pub fn support(&self, zstar: &RatVec) -> SupportValue {
        if self.empty {
            return SupportValue::NegInf;
        }
        let unbounded = self.rays.iter().any(|r| dot(zstar, r) > Rat::zero())
            || self.lineality.iter().any(|l| !dot(zstar, l).is_zero());
        if unbounded {
            return SupportValue::PosInf;
        }
        let m = self
            .points
            .iter()
            .map(|p| dot(zstar, p))
            .max()
            .expect("nonempty polyhedron has points");
        SupportValue::Finite(m)
    }
}

/// Exact extended-real support value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportValue {
    NegInf,
    Finite(Rat),
    PosInf,
}

/// Exact maximizer of a linear functional over a polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArgMax {
    Empty,
    /// Attained maximum and one attaining point.
    Point { point: RatVec, value: Rat },
    /// Unbounded: a feasible point plus an improving recession direction.
    Unbounded { point: RatVec, ray: RatVec },
}

impl ConvexPolyhedron {
    pub fn argmax(&self, c: &RatVec) -> ArgMax {
        if self.empty {
            return ArgMax::Empty;
        }
        let base = self.points[0].clone();
        for r in &self.rays {
            if dot(c, r) > Rat::zero() {
                return ArgMax::Unbounded {
                    point: base,
                    ray: r.clone(),
                };
            }
        }
        for l in &self.lineality {
            let v = dot(c, l);
            if !v.is_zero() {
                let ray = if v > Rat::zero() { l.clone() } else { vneg(l) };
                return ArgMax::Unbounded { point: base, ray };
            }
        }
        let (point, value) = self
            .points
            .iter()
            .map(|p| (p.clone(), dot(c, p)))
            .max_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty polyhedron has points");
        ArgMax::Point { point, value }
    }
}
