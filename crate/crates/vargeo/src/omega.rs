//! Geometry of the constraint set `{(x, b(x)^T eta) : eta in N_P(g(x))}`:
//! assumption verification, tangent membership with witness recovery,
//! directional normal membership, the second-order tangent
//! parameterization and the curvature values.

use crate::cones::{ConeUnion, ConvexCone, ConvexPolyhedron, PolyhedronUnion};
use crate::error::{Error, Result};
use crate::gph::{GphDirection, GphOps, GphPoint, ProductPiece};
use crate::linalg::{solve, solve_on_span, SpanSolve};
use crate::poly::PolyMap;
use crate::rat::{dot, rzero, vadd, vconcat, vscale, vsub, zeros, Rat, RatMat, RatVec};
use crate::subspace::Subspace;
use crate::ExtReal;

/// Result of the two injectivity checks on the span of the normal cone.
#[derive(Clone, Debug)]
pub struct AssumptionReport {
    pub g_ok: bool,
    pub b_ok: bool,
    pub span_basis: Vec<RatVec>,
}

impl AssumptionReport {
    pub fn both(&self) -> bool {
        self.g_ok && self.b_ok
    }
}

/// Verifies the two injectivity conditions at `xbar`: the adjoint Jacobian
/// of `g` and the adjoint of `b(xbar)` must be injective on the span of
/// `N_P(g(xbar))`.
pub fn check_basic_assumptions(
    g: &PolyMap,
    b: &PolyMap,
    m_dim: usize,
    p: &ConvexPolyhedron,
    xbar: &RatVec,
) -> Result<AssumptionReport> {
    let l = g.dim_out;
    assert_eq!(b.dim_out, l * m_dim, "b must have l*m components");
    let q = g.eval(xbar)?;
    if !p.member(&q) {
        return Err(Error::Infeasible("g(x) not in P".into()));
    }
    let normal = p.normal_cone_at(&q);
    let span = normal.span();
    let jac_g = g.jacobian(xbar)?; // l x n
    let b_mat = b_matrix(b, m_dim, xbar)?; // l x m
    let inj = |map_adjoint: &dyn Fn(&RatVec) -> RatVec| -> bool {
        let k = span.rank();
        if k == 0 {
            return true;
        }
        let cols: Vec<RatVec> = span.basis.iter().map(|s| map_adjoint(s)).collect();
        crate::linalg::span_basis(&cols).len() == k
    };
    let g_ok = inj(&|s| jac_g.tr_mul_vec(s));
    let b_ok = inj(&|s| b_mat.tr_mul_vec(s));
    Ok(AssumptionReport {
        g_ok,
        b_ok,
        span_basis: span.basis,
    })
}

/// Reshapes the `l*m` components of `b(x)` into the `l x m` matrix.
pub fn b_matrix(b: &PolyMap, m_dim: usize, x: &RatVec) -> Result<RatMat> {
    let vals = b.eval(x)?;
    let l = vals.len() / m_dim;
    let mut out = RatMat::zeros(l, m_dim);
    for i in 0..l {
        for j in 0..m_dim {
            out[(i, j)] = vals[i * m_dim + j].clone();
        }
    }
    Ok(out)
}

/// The unique solution of `b(xbar)^T eta = -F(xbar)` inside `N_P(g(xbar))`.
pub fn compute_eta_star(
    f_map: &PolyMap,
    b: &PolyMap,
    m_dim: usize,
    g: &PolyMap,
    p: &ConvexPolyhedron,
    xbar: &RatVec,
) -> Result<RatVec> {
    let q = g.eval(xbar)?;
    if !p.member(&q) {
        return Err(Error::Infeasible("g(x) not in P".into()));
    }
    let normal = p.normal_cone_at(&q);
    let span = normal.span();
    let b_mat = b_matrix(b, m_dim, xbar)?;
    let rhs: RatVec = f_map.eval(xbar)?.iter().map(|v| -v).collect();
    let bt = b_mat.transpose(); // m x l
    match solve_on_span(&bt, &span.basis, &rhs) {
        SpanSolve::Unique(eta) => {
            if normal.member(&eta) {
                Ok(eta)
            } else {
                Err(Error::NoSolution(
                    "stationarity system has no multiplier in the normal cone".into(),
                ))
            }
        }
        SpanSolve::Inconsistent => Err(Error::NoSolution(
            "stationarity system is inconsistent".into(),
        )),
        SpanSolve::Underdetermined => Err(Error::MultipleSolutions(
            "adjoint of b is not injective on the normal-cone span".into(),
        )),
    }
}

/// Tangent witness `(u, e*)` with the piece that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentWitness {
    pub u: RatVec,
    pub estar: RatVec,
    pub piece_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangentQuery {
    Witness(TangentWitness),
    NotTangent,
}

/// Normal witness `(r, f*)` with the piece that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalWitness {
    pub r: RatVec,
    pub fstar: RatVec,
    pub piece_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalQuery {
    Witness(NormalWitness),
    NotNormal,
    /// The covector cannot be written in the adjoint-image form at all.
    NoDecomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalRegime {
    Limiting,
    RegularOfTangent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecondTangentQuery {
    Witness {
        zeta: RatVec,
        xistar: RatVec,
        piece_id: usize,
    },
    NotMember,
}

/// One stratum of the tangent cone of the constraint set: the graph piece,
/// its preimage in `(u, e*)` space and its image in `(x, w)` space.
#[derive(Clone, Debug)]
pub struct OmegaTangentPiece {
    pub gph_piece: ProductPiece,
    pub preimage: ConvexCone,
    pub image: ConvexCone,
}

#[derive(Clone, Debug)]
pub struct OmegaTangent {
    pub pieces: Vec<OmegaTangentPiece>,
    pub union: ConeUnion,
}

#[derive(Clone, Debug)]
pub struct OmegaSecondPiece {
    pub gph_piece: ProductPiece,
    pub preimage: ConvexPolyhedron,
    pub image: ConvexPolyhedron,
}

#[derive(Clone, Debug)]
pub struct OmegaSecondTangent {
    pub pieces: Vec<OmegaSecondPiece>,
    pub union: PolyhedronUnion,
    /// The affine offset of the second block: `2(∇b u)^T e* + ∇²b(u,u)^T d*`.
    pub second_shift: RatVec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaCurvature {
    pub sigma: ExtReal,
    pub sigma_hat: ExtReal,
    pub d2delta: ExtReal,
    pub regular_witness: Option<NormalWitness>,
    pub limiting_witness: Option<NormalWitness>,
}

/// The constraint-set context at a reference pair `(xbar, d*)`.
#[derive(Clone, Debug)]
pub struct OmegaContext {
    pub g: PolyMap,
    pub b: PolyMap,
    pub m_dim: usize,
    pub p: ConvexPolyhedron,
    pub xbar: RatVec,
    pub dstar: RatVec,
    pub ops: GphOps,
    pub assumptions: AssumptionReport,
    gph_pt: GphPoint,
    b_at: RatMat,     // l x m
    jac_g: RatMat,    // l x n
    grad_btd: RatMat, // m x n, Jacobian of x -> b(x)^T d*
}

impl OmegaContext {
    pub fn new(
        g: PolyMap,
        b: PolyMap,
        m_dim: usize,
        p: ConvexPolyhedron,
        xbar: RatVec,
        dstar: RatVec,
        ops: GphOps,
    ) -> Result<OmegaContext> {
        let l = g.dim_out;
        if b.dim_out != l * m_dim || b.dim_in != g.dim_in || p.dim != l || dstar.len() != l {
            return Err(Error::Dim("constraint data dimensions disagree".into()));
        }
        let assumptions = check_basic_assumptions(&g, &b, m_dim, &p, &xbar)?;
        if !assumptions.both() {
            return Err(Error::AssumptionFailed(format!(
                "injectivity on the normal-cone span: g_ok={}, b_ok={}",
                assumptions.g_ok, assumptions.b_ok
            )));
        }
        let q = g.eval(&xbar)?;
        if !p.normal_cone_at(&q).member(&dstar) {
            return Err(Error::NotMember("d* not in N_P(g(x))".into()));
        }
        let b_at = b_matrix(&b, m_dim, &xbar)?;
        let jac_g = g.jacobian(&xbar)?;
        let grad_btd = contracted_jacobian(&b, m_dim, &xbar, &dstar)?;
        let gph_pt = GphPoint::new(q, dstar.clone());
        Ok(OmegaContext {
            g,
            b,
            m_dim,
            p,
            xbar,
            dstar,
            ops,
            assumptions,
            gph_pt,
            b_at,
            jac_g,
            grad_btd,
        })
    }

    pub fn n_dim(&self) -> usize {
        self.g.dim_in
    }

    pub fn l_dim(&self) -> usize {
        self.g.dim_out
    }

    /// The reference point `(xbar, b(xbar)^T d*)` of the constraint set.
    pub fn omega_bar(&self) -> RatVec {
        vconcat(&self.xbar, &self.b_at.tr_mul_vec(&self.dstar))
    }

    pub fn graph_point(&self) -> &GphPoint {
        &self.gph_pt
    }

    pub fn b_at_xbar(&self) -> &RatMat {
        &self.b_at
    }

    pub fn jac_g_at_xbar(&self) -> &RatMat {
        &self.jac_g
    }

    /// Linear part of the derivative of `(x, eta) -> (x, b(x)^T eta)` at
    /// the reference pair: `(n+m) x (n+l)`.
    pub fn b_derivative(&self) -> RatMat {
        let n = self.n_dim();
        let l = self.l_dim();
        let m = self.m_dim;
        let mut out = RatMat::zeros(n + m, n + l);
        for i in 0..n {
            out[(i, i)] = crate::rat::rone();
        }
        for j in 0..m {
            for k in 0..n {
                out[(n + j, k)] = self.grad_btd[(j, k)].clone();
            }
            for i in 0..l {
                out[(n + j, n + i)] = self.b_at[(i, j)].clone();
            }
        }
        out
    }

    /// Pieces of the tangent cone of the graph at the reference pair.
    pub fn tangent_gph_pieces(&self) -> Result<Vec<ProductPiece>> {
        self.ops.tangent_pieces(&self.p, &self.gph_pt)
    }

    /// Preimage cone `{(u, e*) : ∇g u in C1, e* in C2}` of a graph piece.
    fn piece_preimage(&self, piece: &ProductPiece) -> ConvexCone {
        let n = self.n_dim();
        let l = self.l_dim();
        let lift_first = |row: &RatVec| -> RatVec {
            let mut v = self.jac_g.tr_mul_vec(row);
            v.extend(zeros(l));
            v
        };
        let lift_second = |row: &RatVec| -> RatVec {
            let mut v = zeros(n);
            v.extend(row.iter().cloned());
            v
        };
        let mut ineqs: Vec<RatVec> = piece.first.ineqs.iter().map(&lift_first).collect();
        ineqs.extend(piece.second.ineqs.iter().map(&lift_second));
        let mut eqs: Vec<RatVec> = piece.first.eqs.iter().map(&lift_first).collect();
        eqs.extend(piece.second.eqs.iter().map(&lift_second));
        ConvexCone::from_hrep(n + l, ineqs, eqs)
    }

    /// Tangent cone of the constraint set at the reference point,
    /// parameterized piecewise and materialized as a canonical union.
    pub fn tangent(&self) -> Result<OmegaTangent> {
        let mb = self.b_derivative();
        let mut pieces = Vec::new();
        for gph_piece in self.tangent_gph_pieces()? {
            let preimage = self.piece_preimage(&gph_piece);
            let image = preimage.image(&mb);
            pieces.push(OmegaTangentPiece {
                gph_piece,
                preimage,
                image,
            });
        }
        let union = ConeUnion::new(
            self.n_dim() + self.m_dim,
            pieces.iter().map(|p| p.image.clone()).collect(),
        );
        Ok(OmegaTangent { pieces, union })
    }

    /// Recovers the unique `(u, e*)` with
    /// `eta = (u, (∇b u)^T d* + b^T e*)` and `(∇g u, e*)` tangent to the
    /// graph, by iterating the pieces and solving on each piece's span.
    pub fn recover_ue(&self, eta: &RatVec) -> Result<TangentQuery> {
        let n = self.n_dim();
        if eta.len() != n + self.m_dim {
            return Err(Error::Dim("direction has wrong dimension".into()));
        }
        let u = eta[..n].to_vec();
        let rhs = vsub(&eta[n..].to_vec(), &self.grad_btd.mul_vec(&u));
        let gu = self.jac_g.mul_vec(&u);
        let bt = self.b_at.transpose(); // m x l
        let mut found: Option<TangentWitness> = None;
        for (piece_id, piece) in self.tangent_gph_pieces()?.iter().enumerate() {
            if !piece.first.member(&gu) {
                continue;
            }
            let span = cone_span_vectors(&piece.second);
            match solve_on_span(&bt, &span, &rhs) {
                SpanSolve::Unique(estar) => {
                    if !piece.second.member(&estar) {
                        continue;
                    }
                    let w = TangentWitness {
                        u: u.clone(),
                        estar,
                        piece_id,
                    };
                    if let Some(prev) = &found {
                        if prev.u != w.u || prev.estar != w.estar {
                            return Err(Error::ContractViolation(
                                "tangent witnesses disagree across pieces".into(),
                            ));
                        }
                    } else {
                        found = Some(w);
                    }
                }
                SpanSolve::Inconsistent => continue,
                SpanSolve::Underdetermined => {
                    return Err(Error::ContractViolation(
                        "adjoint of b not injective on a tangent piece span".into(),
                    ));
                }
            }
        }
        Ok(found.map_or(TangentQuery::NotTangent, TangentQuery::Witness))
    }

    fn normal_pieces(
        &self,
        witness: &TangentWitness,
        regime: NormalRegime,
    ) -> Result<Vec<ProductPiece>> {
        let dir = GphDirection::new(
            self.jac_g.mul_vec(&witness.u),
            witness.estar.clone(),
        );
        match regime {
            NormalRegime::Limiting => {
                self.ops.dir_normal_pieces(&self.p, &self.gph_pt, &dir)
            }
            NormalRegime::RegularOfTangent => {
                let c = self
                    .ops
                    .regular_normal_of_tangent(&self.p, &self.gph_pt, &dir)?;
                Ok(vec![crate::gph::split_product(&c, self.l_dim())])
            }
        }
    }

    /// Decomposes `omega* = (mu, r)` and recovers `f*` from
    /// `mu + (∇(b^T d*))^T r = ∇g^T f*`, then tests the required cone
    /// membership of `(f*, b(xbar) r)`.
    pub fn recover_rf(
        &self,
        witness: &TangentWitness,
        omega_star: &RatVec,
        regime: NormalRegime,
    ) -> Result<NormalQuery> {
        let n = self.n_dim();
        if omega_star.len() != n + self.m_dim {
            return Err(Error::Dim("covector has wrong dimension".into()));
        }
        let mu = omega_star[..n].to_vec();
        let r = omega_star[n..].to_vec();
        let rhs = vadd(&mu, &self.grad_btd.tr_mul_vec(&r));
        let gt = self.jac_g.transpose(); // n x l
        if solve(&gt, &rhs).is_none() {
            return Ok(NormalQuery::NoDecomposition);
        }
        let br = self.b_at.mul_vec(&r);
        let mut found: Option<NormalWitness> = None;
        for (piece_id, piece) in self.normal_pieces(witness, regime)?.iter().enumerate() {
            if !piece.second.member(&br) {
                continue;
            }
            let span = cone_span_vectors(&piece.first);
            match solve_on_span(&gt, &span, &rhs) {
                SpanSolve::Unique(fstar) => {
                    if !piece.first.member(&fstar) {
                        continue;
                    }
                    let w = NormalWitness {
                        r: r.clone(),
                        fstar,
                        piece_id,
                    };
                    if let Some(prev) = &found {
                        if prev.fstar != w.fstar {
                            return Err(Error::ContractViolation(
                                "normal witnesses disagree across pieces".into(),
                            ));
                        }
                    } else {
                        found = Some(w);
                    }
                }
                SpanSolve::Inconsistent => continue,
                SpanSolve::Underdetermined => {
                    return Err(Error::ContractViolation(
                        "adjoint of g not injective on a normal piece span".into(),
                    ));
                }
            }
        }
        Ok(found.map_or(NormalQuery::NotNormal, NormalQuery::Witness))
    }

    /// The membership union of the directional limiting normal cone,
    /// materialized in `(x, w)` covector space for reporting.
    pub fn dir_normal_set(
        &self,
        witness: &TangentWitness,
        regime: NormalRegime,
    ) -> Result<Vec<ProductPiece>> {
        self.normal_pieces(witness, regime)
    }

    /// Second derivative data along `u`: `∇²g(u,u)` and
    /// `2(∇b u)^T e* + ∇²b(u,u)^T d*`.
    fn curvature_shifts(&self, witness: &TangentWitness) -> Result<(RatVec, RatVec)> {
        let hess_g = self.g.hessian_form(&self.xbar, &witness.u)?;
        let hess_b = self.b.hessian_form(&self.xbar, &witness.u)?; // l*m entries
        let l = self.l_dim();
        let m = self.m_dim;
        // (∇b u)^T e*: contract the b-Jacobian with u then with e*
        let grad_b_u = contracted_jacobian_dir(&self.b, m, &self.xbar, &witness.u)?; // l x m
        let mut shift = zeros(m);
        for j in 0..m {
            for i in 0..l {
                shift[j] += &grad_b_u[(i, j)] * &witness.estar[i] * Rat::from_integer(2.into());
                shift[j] += &hess_b[i * m + j] * &self.dstar[i];
            }
        }
        Ok((hess_g, shift))
    }

    /// The outer second-order tangent set at the reference point in the
    /// direction certified by `witness`, parameterized piecewise.
    pub fn second_tangent(&self, witness: &TangentWitness) -> Result<OmegaSecondTangent> {
        let n = self.n_dim();
        let l = self.l_dim();
        let dir = GphDirection::new(self.jac_g.mul_vec(&witness.u), witness.estar.clone());
        let gph_pieces = self
            .ops
            .second_tangent_pieces(&self.p, &self.gph_pt, &dir)?;
        let (hess_g, second_shift) = self.curvature_shifts(witness)?;
        let mb = self.b_derivative();
        let offset = vconcat(&zeros(n), &second_shift);
        let mut pieces = Vec::new();
        for gph_piece in gph_pieces {
            // {(zeta, xi*) : ∇g zeta + hess_g in C1, xi* in C2}
            let mut ineqs: Vec<(RatVec, Rat)> = Vec::new();
            let mut eqs: Vec<(RatVec, Rat)> = Vec::new();
            for a in &gph_piece.first.ineqs {
                let mut row = self.jac_g.tr_mul_vec(a);
                row.extend(zeros(l));
                ineqs.push((row, -dot(a, &hess_g)));
            }
            for e in &gph_piece.first.eqs {
                let mut row = self.jac_g.tr_mul_vec(e);
                row.extend(zeros(l));
                eqs.push((row, -dot(e, &hess_g)));
            }
            for a in &gph_piece.second.ineqs {
                let mut row = zeros(n);
                row.extend(a.iter().cloned());
                ineqs.push((row, rzero()));
            }
            for e in &gph_piece.second.eqs {
                let mut row = zeros(n);
                row.extend(e.iter().cloned());
                eqs.push((row, rzero()));
            }
            let preimage = ConvexPolyhedron::from_hrep(n + l, ineqs, eqs);
            let image = preimage.affine_image(&mb, &offset);
            pieces.push(OmegaSecondPiece {
                gph_piece,
                preimage,
                image,
            });
        }
        let union = PolyhedronUnion::new(
            n + self.m_dim,
            pieces.iter().map(|p| p.image.clone()).collect(),
        );
        if union.is_empty() {
            return Err(Error::ContractViolation(
                "second-order tangent set of the constraint set is empty".into(),
            ));
        }
        Ok(OmegaSecondTangent {
            pieces,
            union,
            second_shift,
        })
    }

    /// Membership in the second-order tangent set with `(zeta, xi*)`
    /// recovery by per-piece exact solves.
    pub fn second_tangent_member(
        &self,
        witness: &TangentWitness,
        xi: &RatVec,
    ) -> Result<SecondTangentQuery> {
        let n = self.n_dim();
        if xi.len() != n + self.m_dim {
            return Err(Error::Dim("candidate has wrong dimension".into()));
        }
        let zeta = xi[..n].to_vec();
        let dir = GphDirection::new(self.jac_g.mul_vec(&witness.u), witness.estar.clone());
        let gph_pieces = self
            .ops
            .second_tangent_pieces(&self.p, &self.gph_pt, &dir)?;
        let (hess_g, second_shift) = self.curvature_shifts(witness)?;
        let q1 = vadd(&self.jac_g.mul_vec(&zeta), &hess_g);
        let rhs = vsub(
            &vsub(&xi[n..].to_vec(), &second_shift),
            &self.grad_btd.mul_vec(&zeta),
        );
        let bt = self.b_at.transpose();
        let mut found: Option<(RatVec, usize)> = None;
        for (piece_id, piece) in gph_pieces.iter().enumerate() {
            if !piece.first.member(&q1) {
                continue;
            }
            let span = cone_span_vectors(&piece.second);
            match solve_on_span(&bt, &span, &rhs) {
                SpanSolve::Unique(xistar) => {
                    if !piece.second.member(&xistar) {
                        continue;
                    }
                    if let Some((prev, _)) = &found {
                        if *prev != xistar {
                            return Err(Error::ContractViolation(
                                "second-order witnesses disagree across pieces".into(),
                            ));
                        }
                    } else {
                        found = Some((xistar, piece_id));
                    }
                }
                SpanSolve::Inconsistent => continue,
                SpanSolve::Underdetermined => {
                    return Err(Error::ContractViolation(
                        "adjoint of b not injective on a second-order piece span".into(),
                    ));
                }
            }
        }
        Ok(match found {
            Some((xistar, piece_id)) => SecondTangentQuery::Witness {
                zeta,
                xistar,
                piece_id,
            },
            None => SecondTangentQuery::NotMember,
        })
    }

    /// Support value and second subderivative of the constraint set at the
    /// reference point for covector `omega*` along the certified direction.
    pub fn curvature(
        &self,
        witness: &TangentWitness,
        omega_star: &RatVec,
    ) -> Result<OmegaCurvature> {
        let (hess_g, second_shift) = self.curvature_shifts(witness)?;
        let value = |w: &NormalWitness| -> Rat {
            dot(&w.r, &second_shift) - dot(&w.fstar, &hess_g)
        };
        let regular = self.recover_rf(witness, omega_star, NormalRegime::RegularOfTangent)?;
        let limiting = self.recover_rf(witness, omega_star, NormalRegime::Limiting)?;
        let (sigma, regular_witness) = match regular {
            NormalQuery::Witness(w) => (ExtReal::Finite(value(&w)), Some(w)),
            _ => (ExtReal::PosInf, None),
        };
        let (sigma_hat, limiting_witness) = match limiting {
            NormalQuery::Witness(w) => (ExtReal::Finite(value(&w)), Some(w)),
            _ => (ExtReal::PosInf, None),
        };
        let d2delta = sigma.neg();
        Ok(OmegaCurvature {
            sigma,
            sigma_hat,
            d2delta,
            regular_witness,
            limiting_witness,
        })
    }
}

/// Jacobian of `x -> b(x)^T v` for a fixed contraction vector `v` of
/// length `l`: an `m x n` matrix.
pub fn contracted_jacobian(
    b: &PolyMap,
    m_dim: usize,
    x: &RatVec,
    v: &RatVec,
) -> Result<RatMat> {
    let jac = b.jacobian(x)?; // (l*m) x n
    let n = jac.cols;
    let l = v.len();
    let mut out = RatMat::zeros(m_dim, n);
    for j in 0..m_dim {
        for k in 0..n {
            let mut acc = rzero();
            for (i, vi) in v.iter().enumerate().take(l) {
                acc += vi * &jac[(i * m_dim + j, k)];
            }
            out[(j, k)] = acc;
        }
    }
    Ok(out)
}

/// Directional derivative of the matrix `b` along `u`: the `l x m` matrix
/// with entries `(∇b_{ij}) . u`.
pub fn contracted_jacobian_dir(
    b: &PolyMap,
    m_dim: usize,
    x: &RatVec,
    u: &RatVec,
) -> Result<RatMat> {
    let jac = b.jacobian(x)?; // (l*m) x n
    let l = jac.rows / m_dim;
    let mut out = RatMat::zeros(l, m_dim);
    for i in 0..l {
        for j in 0..m_dim {
            out[(i, j)] = dot(jac.row(i * m_dim + j), u);
        }
    }
    Ok(out)
}

/// Spanning vectors of a cone (rays plus lineality basis).
fn cone_span_vectors(c: &ConvexCone) -> Vec<RatVec> {
    let mut v = c.rays.clone();
    v.extend(c.lineality.iter().cloned());
    v
}

/// Subspace spanned by a cone union (exposed for nondegeneracy checks).
pub fn union_span_of(u: &ConeUnion) -> Subspace {
    u.span()
}

/// Scales a witness direction: tangent witnesses are positively
/// homogeneous.
pub fn scale_witness(w: &TangentWitness, t: &Rat) -> TangentWitness {
    TangentWitness {
        u: vscale(t, &w.u),
        estar: vscale(t, &w.estar),
        piece_id: w.piece_id,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::rat::rint;

    fn mono(c: i64, exps: Vec<u32>) -> Monomial {
        Monomial {
            coeff: rint(c),
            exps,
        }
    }

    /// The toy scalar-complementarity instance: g = x1, b = [1], P = R_-,
    /// reference point the origin with d* = 0.
    pub fn toy_context() -> OmegaContext {
        let g = PolyMap::new(2, vec![vec![mono(1, vec![1, 0])]]).unwrap();
        let b = PolyMap::new(2, vec![vec![mono(1, vec![0, 0])]]).unwrap();
        OmegaContext::new(
            g,
            b,
            1,
            ConvexPolyhedron::negative_orthant(1),
            vec![rint(0), rint(0)],
            vec![rint(0)],
            GphOps::general(),
        )
        .unwrap()
    }

    #[test]
    fn toy_assumptions() {
        let ctx = toy_context();
        assert!(ctx.assumptions.both());
        assert_eq!(ctx.assumptions.span_basis.len(), 1);
        assert_eq!(ctx.omega_bar(), vec![rint(0), rint(0), rint(0)]);
    }

    #[test]
    fn assumptions_fail_for_constant_g() {
        // g constant with boundary image: zero Jacobian, nontrivial span
        let g = PolyMap::new(2, vec![vec![mono(0, vec![0, 0])]]).unwrap();
        let b = PolyMap::new(2, vec![vec![mono(1, vec![0, 0])]]).unwrap();
        let rep = check_basic_assumptions(
            &g,
            &b,
            1,
            &ConvexPolyhedron::negative_orthant(1),
            &vec![rint(0), rint(0)],
        )
        .unwrap();
        assert!(!rep.g_ok);
        assert!(rep.b_ok);
    }

    #[test]
    fn assumptions_vacuous_in_interior() {
        let g = PolyMap::new(
            2,
            vec![vec![mono(1, vec![1, 0]), mono(-1, vec![0, 0])]],
        )
        .unwrap(); // g = x1 - 1, g(0) = -1 interior
        let b = PolyMap::new(2, vec![vec![mono(0, vec![0, 0])]]).unwrap(); // b = 0!
        let rep = check_basic_assumptions(
            &g,
            &b,
            1,
            &ConvexPolyhedron::negative_orthant(1),
            &vec![rint(0), rint(0)],
        )
        .unwrap();
        assert!(rep.g_ok && rep.b_ok);
        assert!(rep.span_basis.is_empty());
    }

    #[test]
    fn eta_star_examples() {
        let g = PolyMap::new(2, vec![vec![mono(1, vec![1, 0])]]).unwrap();
        let b = PolyMap::new(2, vec![vec![mono(1, vec![0, 0])]]).unwrap();
        let f_map = PolyMap::new(2, vec![vec![mono(1, vec![0, 1])]]).unwrap(); // F = x2
        let p = ConvexPolyhedron::negative_orthant(1);
        // at the origin, F = 0, eta* = 0
        let eta =
            compute_eta_star(&f_map, &b, 1, &g, &p, &vec![rint(0), rint(0)]).unwrap();
        assert_eq!(eta, vec![rint(0)]);
        // at (0,-1): F = -1, b^T eta = 1 with N = R_+: eta* = 1
        let eta =
            compute_eta_star(&f_map, &b, 1, &g, &p, &vec![rint(0), rint(-1)]).unwrap();
        assert_eq!(eta, vec![rint(1)]);
        // at (-1,0): N = {0}, F = 0: eta* = 0
        let eta =
            compute_eta_star(&f_map, &b, 1, &g, &p, &vec![rint(-1), rint(0)]).unwrap();
        assert_eq!(eta, vec![rint(0)]);
        // at (0,1): F = 1, need b^T eta = -1 with eta >= 0: no solution
        assert!(matches!(
            compute_eta_star(&f_map, &b, 1, &g, &p, &vec![rint(0), rint(1)]),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn toy_recover_ue() {
        let ctx = toy_context();
        // direction ((-1,0),0): witness ((-1,0), e*=0)
        match ctx.recover_ue(&vec![rint(-1), rint(0), rint(0)]).unwrap() {
            TangentQuery::Witness(w) => {
                assert_eq!(w.u, vec![rint(-1), rint(0)]);
                assert_eq!(w.estar, vec![rint(0)]);
            }
            TangentQuery::NotTangent => panic!("expected witness"),
        }
        // direction ((0,-1),1): witness with e* = 1
        match ctx.recover_ue(&vec![rint(0), rint(-1), rint(1)]).unwrap() {
            TangentQuery::Witness(w) => {
                assert_eq!(w.u, vec![rint(0), rint(-1)]);
                assert_eq!(w.estar, vec![rint(1)]);
            }
            TangentQuery::NotTangent => panic!("expected witness"),
        }
        // ((1,0),0) is not tangent
        assert_eq!(
            ctx.recover_ue(&vec![rint(1), rint(0), rint(0)]).unwrap(),
            TangentQuery::NotTangent
        );
    }

    #[test]
    fn toy_recover_rf() {
        let ctx = toy_context();
        let w = match ctx.recover_ue(&vec![rint(-1), rint(0), rint(0)]).unwrap() {
            TangentQuery::Witness(w) => w,
            _ => unreachable!(),
        };
        // zero covector is always normal
        match ctx
            .recover_rf(&w, &vec![rint(0), rint(0), rint(0)], NormalRegime::Limiting)
            .unwrap()
        {
            NormalQuery::Witness(nw) => {
                assert_eq!(nw.r, vec![rint(0)]);
                assert_eq!(nw.fstar, vec![rint(0)]);
            }
            other => panic!("expected witness, got {other:?}"),
        }
        // covector ((tau,0),0) with tau != 0: the limiting cone at this
        // direction is {0} x R, so membership fails
        assert_eq!(
            ctx.recover_rf(&w, &vec![rint(2), rint(0), rint(0)], NormalRegime::Limiting)
                .unwrap(),
            NormalQuery::NotNormal
        );
        // along the strict-complementarity direction any tau works
        let w2 = match ctx.recover_ue(&vec![rint(0), rint(-1), rint(1)]).unwrap() {
            TangentQuery::Witness(w) => w,
            _ => unreachable!(),
        };
        match ctx
            .recover_rf(&w2, &vec![rint(3), rint(0), rint(0)], NormalRegime::Limiting)
            .unwrap()
        {
            NormalQuery::Witness(nw) => {
                assert_eq!(nw.fstar, vec![rint(3)]);
                assert_eq!(nw.r, vec![rint(0)]);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn toy_second_tangent() {
        let ctx = toy_context();
        let w = match ctx.recover_ue(&vec![rint(-1), rint(0), rint(0)]).unwrap() {
            TangentQuery::Witness(w) => w,
            _ => unreachable!(),
        };
        let t2 = ctx.second_tangent(&w).unwrap();
        assert!(!t2.union.is_empty());
        // candidate 0 is a member via zeta = 0, xi* = 0
        match ctx
            .second_tangent_member(&w, &vec![rint(0), rint(0), rint(0)])
            .unwrap()
        {
            SecondTangentQuery::Witness { zeta, xistar, .. } => {
                assert_eq!(zeta, vec![rint(0), rint(0)]);
                assert_eq!(xistar, vec![rint(0)]);
            }
            SecondTangentQuery::NotMember => panic!("expected member"),
        }
        // the second block must stay 0 along the inactive branch
        assert_eq!(
            ctx.second_tangent_member(&w, &vec![rint(0), rint(0), rint(1)])
                .unwrap(),
            SecondTangentQuery::NotMember
        );
    }

    #[test]
    fn toy_curvature_all_zero() {
        // constant b and linear g: every curvature term vanishes
        let ctx = toy_context();
        let w = match ctx.recover_ue(&vec![rint(0), rint(-1), rint(1)]).unwrap() {
            TangentQuery::Witness(w) => w,
            _ => unreachable!(),
        };
        let c = ctx
            .curvature(&w, &vec![rint(3), rint(0), rint(0)])
            .unwrap();
        assert_eq!(c.sigma, ExtReal::Finite(rint(0)));
        assert_eq!(c.sigma_hat, ExtReal::Finite(rint(0)));
        assert_eq!(c.d2delta, ExtReal::Finite(rint(0)));
    }
}
