//! Variational objects of the preimage system `{z : G(z) in D}` for a
//! polynomial map `G` and a polyhedral `D`: linearization cone, directional
//! nondegeneracy, directional normal cones, second-order tangent sets,
//! multiplier sets and the curvature functionals.

use crate::cones::{ConeUnion, ConvexCone, ConvexPolyhedron, PolyhedronUnion};
use crate::error::{Error, Result};
use crate::gph::{self, GphDirection, GphOps, GphPoint, ProductPiece};
use crate::poly::PolyMap;
use crate::rat::{dot, RatMat, RatVec};
use crate::strata;
use crate::ExtReal;

/// The polyhedral set `D` on the right-hand side of the system.
#[derive(Clone, Debug)]
pub enum DomainSet {
    /// `D = gph N_P` for a convex polyhedron `P`.
    GraphNormalCone(ConvexPolyhedron),
    /// A single convex polyhedron.
    Convex(ConvexPolyhedron),
    /// An explicit finite union of convex polyhedra.
    Union(PolyhedronUnion),
}

impl DomainSet {
    pub fn dim(&self) -> usize {
        match self {
            DomainSet::GraphNormalCone(p) => 2 * p.dim,
            DomainSet::Convex(p) => p.dim,
            DomainSet::Union(u) => u.dim,
        }
    }

    pub fn member(&self, q: &RatVec) -> bool {
        match self {
            DomainSet::GraphNormalCone(p) => {
                let (d, dstar) = split2(q, p.dim);
                gph::gph_member(p, &d, &dstar)
            }
            DomainSet::Convex(p) => p.member(q),
            DomainSet::Union(u) => u.member(q),
        }
    }
}

fn split2(q: &RatVec, l: usize) -> (RatVec, RatVec) {
    (q[..l].to_vec(), q[l..].to_vec())
}

/// The disjunctive system `Gamma = {z : G(z) in D}`.
#[derive(Clone, Debug)]
pub struct GammaSystem {
    pub map: PolyMap,
    pub domain: DomainSet,
    pub ops: GphOps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    /// Constraint cone: regular normal cone of the tangent set.
    S,
    /// Constraint cone: directional limiting normal cone.
    M,
}

/// Affine-plus-cone description of a multiplier set, with the exact
/// members found (a singleton under directional nondegeneracy).
#[derive(Clone, Debug)]
pub struct MultiplierSet {
    pub kind: MultiplierKind,
    pub particular: RatVec,
    pub kernel: Vec<RatVec>,
    pub cone_constraint: ConeUnion,
    pub members: Vec<RatVec>,
}

impl MultiplierSet {
    pub fn unique(&self) -> Option<&RatVec> {
        (self.members.len() == 1).then(|| &self.members[0])
    }
}

/// The three curvature quantities of the system at `(zbar, wbar, zstar)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaCurvature {
    pub sigma: ExtReal,
    pub sigma_hat: ExtReal,
    pub d2delta: ExtReal,
}

impl GammaSystem {
    pub fn new(map: PolyMap, domain: DomainSet) -> Result<GammaSystem> {
        if map.dim_out != domain.dim() {
            return Err(Error::Dim(format!(
                "G maps into dimension {}, D lives in dimension {}",
                map.dim_out,
                domain.dim()
            )));
        }
        Ok(GammaSystem {
            map,
            domain,
            ops: GphOps::general(),
        })
    }

    pub fn with_ops(mut self, ops: GphOps) -> GammaSystem {
        self.ops = ops;
        self
    }

    pub fn feasible(&self, z: &RatVec) -> Result<bool> {
        Ok(self.domain.member(&self.map.eval(z)?))
    }

    fn image_point(&self, zbar: &RatVec) -> Result<RatVec> {
        let q = self.map.eval(zbar)?;
        if !self.domain.member(&q) {
            return Err(Error::Infeasible("G(z) not in D".into()));
        }
        Ok(q)
    }

    // ---- D-level geometry -------------------------------------------------

    fn d_tangent(&self, q: &RatVec) -> Result<ConeUnion> {
        match &self.domain {
            DomainSet::GraphNormalCone(p) => {
                let (d, dstar) = split2(q, p.dim);
                let pieces = self.ops.tangent_pieces(p, &GphPoint::new(d, dstar))?;
                Ok(gph::pieces_to_union(2 * p.dim, &pieces))
            }
            DomainSet::Convex(p) => Ok(ConeUnion::single(p.tangent_cone_at(q))),
            DomainSet::Union(u) => u
                .tangent_at(q)
                .ok_or_else(|| Error::NotMember("point not in D".into())),
        }
    }

    fn d_second_tangent(&self, q: &RatVec, v: &RatVec) -> Result<ConeUnion> {
        match &self.domain {
            DomainSet::GraphNormalCone(p) => {
                let l = p.dim;
                let (d, dstar) = split2(q, l);
                let (e, estar) = split2(v, l);
                let pieces = self.ops.second_tangent_pieces(
                    p,
                    &GphPoint::new(d, dstar),
                    &GphDirection::new(e, estar),
                )?;
                Ok(gph::pieces_to_union(2 * l, &pieces))
            }
            _ => {
                let t = self.d_tangent(q)?;
                t.tangent_at(v)
                    .ok_or_else(|| Error::NotTangent("direction not tangent to D".into()))
            }
        }
    }

    fn d_dir_normal(&self, q: &RatVec, v: &RatVec) -> Result<ConeUnion> {
        match &self.domain {
            DomainSet::GraphNormalCone(p) => {
                let l = p.dim;
                let (d, dstar) = split2(q, l);
                let (e, estar) = split2(v, l);
                let pieces = self.ops.dir_normal_pieces(
                    p,
                    &GphPoint::new(d, dstar),
                    &GphDirection::new(e, estar),
                )?;
                Ok(gph::pieces_to_union(2 * l, &pieces))
            }
            DomainSet::Convex(p) => {
                let t = p.tangent_cone_at(q);
                if !t.member(v) {
                    return Err(Error::NotTangent("direction not tangent to D".into()));
                }
                Ok(ConeUnion::single(t.normal_cone_at(v)))
            }
            DomainSet::Union(_) => {
                let t = self.d_tangent(q)?;
                strata::limiting_normal_at(&t, v)
                    .ok_or_else(|| Error::NotTangent("direction not tangent to D".into()))
            }
        }
    }

    fn d_regular_normal_of_tangent(&self, q: &RatVec, v: &RatVec) -> Result<ConvexCone> {
        match &self.domain {
            DomainSet::GraphNormalCone(p) => {
                let l = p.dim;
                let (d, dstar) = split2(q, l);
                let (e, estar) = split2(v, l);
                self.ops.regular_normal_of_tangent(
                    p,
                    &GphPoint::new(d, dstar),
                    &GphDirection::new(e, estar),
                )
            }
            _ => Ok(self.d_second_tangent(q, v)?.polar()),
        }
    }

    // ---- Gamma-level operations -------------------------------------------

    /// Linearization cone: the piecewise preimage of the tangent cone of
    /// `D` at `G(zbar)` under the Jacobian.
    pub fn linearization_cone(&self, zbar: &RatVec) -> Result<ConeUnion> {
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let t = self.d_tangent(&q)?;
        Ok(ConeUnion::new(
            self.map.dim_in,
            t.pieces.iter().map(|p| p.preimage(&jac)).collect(),
        ))
    }

    pub fn in_linearization_cone(&self, zbar: &RatVec, wbar: &RatVec) -> Result<bool> {
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        Ok(self.d_tangent(&q)?.member(&jac.mul_vec(wbar)))
    }

    /// Directional nondegeneracy: the adjoint Jacobian is injective on the
    /// span of the directional limiting normal cone of `D`.
    pub fn dir_nondegeneracy(&self, zbar: &RatVec, wbar: &RatVec) -> Result<bool> {
        if !self.in_linearization_cone(zbar, wbar)? {
            return Err(Error::NotTangent(
                "direction not in the linearization cone".into(),
            ));
        }
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let n_dir = self.d_dir_normal(&q, &jac.mul_vec(wbar))?;
        let span = n_dir.span();
        if span.rank() == 0 {
            return Ok(true);
        }
        // kernel of J^T restricted to the span must be trivial
        let k = span.rank();
        let mut cols = RatMat::zeros(self.map.dim_in, k);
        for (j, s) in span.basis.iter().enumerate() {
            let col = jac.tr_mul_vec(s);
            for i in 0..self.map.dim_in {
                cols[(i, j)] = col[i].clone();
            }
        }
        Ok(crate::linalg::rank(&cols) == k)
    }

    /// Directional limiting normal cone of the system: the adjoint image
    /// of the directional normal cone of `D`. Licensed by nondegeneracy.
    pub fn dir_normal_gamma(&self, zbar: &RatVec, wbar: &RatVec) -> Result<ConeUnion> {
        if !self.dir_nondegeneracy(zbar, wbar)? {
            return Err(Error::Degenerate(
                "directional normal cone formula requires nondegeneracy".into(),
            ));
        }
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let n_dir = self.d_dir_normal(&q, &jac.mul_vec(wbar))?;
        Ok(n_dir.image(&jac.transpose()))
    }

    /// Outer second-order tangent set of the system: piecewise preimage of
    /// the curvature-shifted second-order tangent set of `D`.
    pub fn second_tangent_gamma(
        &self,
        zbar: &RatVec,
        wbar: &RatVec,
    ) -> Result<PolyhedronUnion> {
        if !self.in_linearization_cone(zbar, wbar)? {
            return Err(Error::NotTangent(
                "direction not in the linearization cone".into(),
            ));
        }
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let shift = self.map.hessian_form(zbar, wbar)?;
        let t2 = self.d_second_tangent(&q, &jac.mul_vec(wbar))?;
        let mut pieces = Vec::new();
        for c in &t2.pieces {
            // {v : A(Jv + shift) <= 0, E(Jv + shift) = 0}
            let ineqs = c
                .ineqs
                .iter()
                .map(|a| (jac.tr_mul_vec(a), -dot(a, &shift)))
                .collect();
            let eqs = c
                .eqs
                .iter()
                .map(|e| (jac.tr_mul_vec(e), -dot(e, &shift)))
                .collect();
            pieces.push(ConvexPolyhedron::from_hrep(self.map.dim_in, ineqs, eqs));
        }
        Ok(PolyhedronUnion::new(self.map.dim_in, pieces))
    }

    /// Multiplier set for covector `zstar` in direction `wbar`.
    pub fn multipliers(
        &self,
        zbar: &RatVec,
        wbar: &RatVec,
        zstar: &RatVec,
        kind: MultiplierKind,
    ) -> Result<MultiplierSet> {
        if !self.in_linearization_cone(zbar, wbar)? {
            return Err(Error::NotTangent(
                "direction not in the linearization cone".into(),
            ));
        }
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let v = jac.mul_vec(wbar);
        let cone_constraint = match kind {
            MultiplierKind::M => self.d_dir_normal(&q, &v)?,
            MultiplierKind::S => ConeUnion::single(self.d_regular_normal_of_tangent(&q, &v)?),
        };
        let jt = jac.transpose();
        let particular = crate::linalg::solve(&jt, zstar).ok_or_else(|| {
            Error::NoSolution("z* not in the range of the adjoint Jacobian".into())
        })?;
        let kernel = crate::linalg::kernel_basis(&jt);
        let mut members: Vec<RatVec> = Vec::new();
        for piece in &cone_constraint.pieces {
            // solutions of J^T p = z* inside the piece
            let eqs: Vec<(RatVec, crate::rat::Rat)> = (0..jt.rows)
                .map(|i| (jt.row(i).to_vec(), zstar[i].clone()))
                .collect();
            let mut ineqs: Vec<(RatVec, crate::rat::Rat)> = piece
                .ineqs
                .iter()
                .map(|a| (a.clone(), crate::rat::rzero()))
                .collect();
            ineqs.extend(
                piece
                    .eqs
                    .iter()
                    .flat_map(|e| {
                        [
                            (e.clone(), crate::rat::rzero()),
                            (crate::rat::vneg(e), crate::rat::rzero()),
                        ]
                    }),
            );
            let sols = ConvexPolyhedron::from_hrep(self.map.dim_out, ineqs, eqs);
            if let Some(p) = sols.relint_point() {
                if !members.contains(&p) {
                    members.push(p);
                }
            }
        }
        if members.is_empty() {
            return Err(Error::NoSolution("multiplier set is empty".into()));
        }
        Ok(MultiplierSet {
            kind,
            particular,
            kernel,
            cone_constraint,
            members,
        })
    }

    /// Exact curvature values under directional nondegeneracy. The support
    /// values are finite on their domains with the single-multiplier
    /// formula, `+inf` outside, and `-inf` only when the second-order
    /// tangent set is empty.
    pub fn curvature(
        &self,
        zbar: &RatVec,
        wbar: &RatVec,
        zstar: &RatVec,
    ) -> Result<GammaCurvature> {
        if !self.dir_nondegeneracy(zbar, wbar)? {
            return Err(Error::Degenerate(
                "exact curvature values require nondegeneracy".into(),
            ));
        }
        if self.second_tangent_gamma(zbar, wbar)?.is_empty() {
            return Ok(GammaCurvature {
                sigma: ExtReal::NegInf,
                sigma_hat: ExtReal::NegInf,
                d2delta: ExtReal::PosInf,
            });
        }
        let hess = self.map.hessian_form(zbar, wbar)?;
        let value_for = |kind: MultiplierKind| -> Result<ExtReal> {
            match self.multipliers(zbar, wbar, zstar, kind) {
                Ok(ms) => {
                    let p0 = ms.unique().ok_or_else(|| {
                        Error::ContractViolation(
                            "multiplier not unique under nondegeneracy".into(),
                        )
                    })?;
                    Ok(ExtReal::Finite(-dot(p0, &hess)))
                }
                Err(Error::NoSolution(_)) => Ok(ExtReal::PosInf),
                Err(e) => Err(e),
            }
        };
        let sigma = value_for(MultiplierKind::S)?;
        let sigma_hat = value_for(MultiplierKind::M)?;
        let d2delta = sigma.neg();
        Ok(GammaCurvature {
            sigma,
            sigma_hat,
            d2delta,
        })
    }

    /// Inf and sup of `<p, hess>` over the M-multiplier solution set,
    /// reported when nondegeneracy fails but the set is nonempty (the
    /// two-sided curvature bounds).
    pub fn multiplier_bounds(
        &self,
        zbar: &RatVec,
        wbar: &RatVec,
        zstar: &RatVec,
    ) -> Result<(ExtReal, ExtReal)> {
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let v = jac.mul_vec(wbar);
        let hess = self.map.hessian_form(zbar, wbar)?;
        let n = self.d_dir_normal(&q, &v)?;
        let jt = jac.transpose();
        let mut lo = ExtReal::PosInf;
        let mut hi = ExtReal::NegInf;
        for piece in &n.pieces {
            let eqs: Vec<(RatVec, crate::rat::Rat)> = (0..jt.rows)
                .map(|i| (jt.row(i).to_vec(), zstar[i].clone()))
                .collect();
            let mut ineqs: Vec<(RatVec, crate::rat::Rat)> = piece
                .ineqs
                .iter()
                .map(|a| (a.clone(), crate::rat::rzero()))
                .collect();
            ineqs.extend(piece.eqs.iter().flat_map(|e| {
                [
                    (e.clone(), crate::rat::rzero()),
                    (crate::rat::vneg(e), crate::rat::rzero()),
                ]
            }));
            let sols = ConvexPolyhedron::from_hrep(self.map.dim_out, ineqs, eqs);
            match sols.support(&hess) {
                crate::cones::SupportValue::NegInf => {}
                crate::cones::SupportValue::PosInf => hi = ExtReal::PosInf,
                crate::cones::SupportValue::Finite(v) => {
                    if ExtReal::Finite(v.clone()) > hi {
                        hi = ExtReal::Finite(v);
                    }
                }
            }
            match sols.support(&crate::rat::vneg(&hess)) {
                crate::cones::SupportValue::NegInf => {}
                crate::cones::SupportValue::PosInf => lo = ExtReal::NegInf,
                crate::cones::SupportValue::Finite(v) => {
                    if ExtReal::Finite(-v.clone()) < lo {
                        lo = ExtReal::Finite(-v);
                    }
                }
            }
        }
        Ok((lo, hi))
    }

    /// Domain of the support function of the second-order tangent set: the
    /// adjoint image of the regular normal cone of the tangent set.
    pub fn sigma_domain(&self, zbar: &RatVec, wbar: &RatVec) -> Result<ConvexCone> {
        let q = self.image_point(zbar)?;
        let jac = self.map.jacobian(zbar)?;
        let v = jac.mul_vec(wbar);
        Ok(self
            .d_regular_normal_of_tangent(&q, &v)?
            .image(&jac.transpose()))
    }
}

/// Graph-type system used by the constraint-set module: `G(x, eta) =
/// (g(x), eta)` with `D = gph N_P`.
pub fn graph_system(
    g: &PolyMap,
    p: &ConvexPolyhedron,
    ops: GphOps,
) -> Result<GammaSystem> {
    let n = g.dim_in;
    let l = g.dim_out;
    assert_eq!(l, p.dim);
    // components: g(x) followed by the eta coordinates
    let mut comps = Vec::with_capacity(2 * l);
    for comp in g.components() {
        let lifted = comp
            .iter()
            .map(|m| crate::poly::Monomial {
                coeff: m.coeff.clone(),
                exps: {
                    let mut e = m.exps.clone();
                    e.extend(std::iter::repeat(0).take(l));
                    e
                },
            })
            .collect();
        comps.push(lifted);
    }
    for i in 0..l {
        let mut e = vec![0u32; n + l];
        e[n + i] = 1;
        comps.push(vec![crate::poly::Monomial {
            coeff: crate::rat::rone(),
            exps: e,
        }]);
    }
    let map = PolyMap::new(n + l, comps)?;
    Ok(GammaSystem::new(map, DomainSet::GraphNormalCone(p.clone()))?.with_ops(ops))
}

/// The pieces of the tangent cone of `D` exposed for callers that need the
/// product structure (witness recovery iterates over them).
pub fn graph_tangent_pieces(
    sys: &GammaSystem,
    zbar: &RatVec,
) -> Result<Vec<ProductPiece>> {
    match &sys.domain {
        DomainSet::GraphNormalCone(p) => {
            let q = sys.map.eval(zbar)?;
            let (d, dstar) = split2(&q, p.dim);
            sys.ops.tangent_pieces(p, &GphPoint::new(d, dstar))
        }
        _ => Err(Error::Dim("not a graph-type system".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rint, RatMat};

    fn scalar_graph() -> DomainSet {
        DomainSet::GraphNormalCone(ConvexPolyhedron::negative_orthant(1))
    }

    /// identity system on gph N_{R_-}
    fn identity_system() -> GammaSystem {
        let map = PolyMap::affine(&RatMat::identity(2), &vec![rint(0), rint(0)]);
        GammaSystem::new(map, scalar_graph()).unwrap()
    }

    #[test]
    fn identity_linearization_matches_tangent() {
        let sys = identity_system();
        let z = vec![rint(0), rint(0)];
        let lin = sys.linearization_cone(&z).unwrap();
        let p = ConvexPolyhedron::negative_orthant(1);
        let t = gph::tangent_gph(&p, &GphPoint::new(vec![rint(0)], vec![rint(0)])).unwrap();
        assert!(lin.set_equal(&t));
    }

    #[test]
    fn identity_dir_normal_matches_graph_formula() {
        let sys = identity_system();
        let z = vec![rint(0), rint(0)];
        let w = vec![rint(-1), rint(0)];
        assert!(sys.dir_nondegeneracy(&z, &w).unwrap());
        let n = sys.dir_normal_gamma(&z, &w).unwrap();
        let p = ConvexPolyhedron::negative_orthant(1);
        let expect = gph::dir_limiting_normal_gph(
            &p,
            &GphPoint::new(vec![rint(0)], vec![rint(0)]),
            &GphDirection::new(vec![rint(-1)], vec![rint(0)]),
        )
        .unwrap();
        assert!(n.set_equal(&expect));
    }

    #[test]
    fn interior_point_normal_is_zero() {
        // G linear surjective onto R^2, D = R^2_-, interior image direction
        let map = PolyMap::affine(&RatMat::identity(2), &vec![rint(-1), rint(-1)]);
        let sys = GammaSystem::new(
            map,
            DomainSet::Convex(ConvexPolyhedron::negative_orthant(2)),
        )
        .unwrap();
        let z = vec![rint(0), rint(0)]; // image (-1,-1), interior
        let w = vec![rint(5), rint(7)];
        assert!(sys.dir_nondegeneracy(&z, &w).unwrap());
        let n = sys.dir_normal_gamma(&z, &w).unwrap();
        assert_eq!(n.pieces.len(), 1);
        assert!(n.pieces[0].is_zero());
        // curvature of a linear system is zero on its domain
        let c = sys
            .curvature(&z, &w, &vec![rint(0), rint(0)])
            .unwrap();
        assert_eq!(c.sigma, ExtReal::Finite(rint(0)));
        assert_eq!(c.sigma_hat, ExtReal::Finite(rint(0)));
        assert_eq!(c.d2delta, ExtReal::Finite(rint(0)));
    }

    #[test]
    fn multiplier_identity_case() {
        // G = id: p0 = z* when z* satisfies the cone constraint, else empty
        let sys = identity_system();
        let z = vec![rint(0), rint(0)];
        let w = vec![rint(0), rint(0)];
        // N_dir at dir 0 = (0,R) u (R,0) u (R_+,R_-); z* = (1,-1) is a member
        let ms = sys
            .multipliers(&z, &w, &vec![rint(1), rint(-1)], MultiplierKind::M)
            .unwrap();
        assert_eq!(ms.unique(), Some(&vec![rint(1), rint(-1)]));
        // z* = (-1, -1) is not in the union: empty multiplier set
        assert!(sys
            .multipliers(&z, &w, &vec![rint(-1), rint(-1)], MultiplierKind::M)
            .is_err());
    }

    #[test]
    fn second_tangent_linear_no_shift() {
        let sys = identity_system();
        let z = vec![rint(0), rint(0)];
        let w = vec![rint(0), rint(0)];
        // w = 0: second tangent set equals the tangent cone
        let t2 = sys.second_tangent_gamma(&z, &w).unwrap();
        let t = sys.linearization_cone(&z).unwrap();
        let as_polys = PolyhedronUnion::from_cones(&t);
        assert!(t2.set_equal(&as_polys));
    }
}
