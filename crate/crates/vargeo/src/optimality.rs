//! Second-order optimality certification for generalized-equation
//! programs and their variational-inequality specializations: critical
//! directions, qualification, multiplier systems, necessary and sufficient
//! tests, and verdict assembly.

use crate::cones::{ArgMax, ConvexPolyhedron};
use crate::error::{Error, Result};
use crate::gph::{GphOps, ProductPiece};
use crate::omega::{
    check_basic_assumptions, compute_eta_star, AssumptionReport, NormalRegime, OmegaContext,
    TangentQuery, TangentWitness,
};
use crate::poly::PolyMap;
use crate::rat::{dot, rone, rzero, vconcat, vneg, vscale, zeros, Rat, RatMat, RatVec};
use num_traits::Zero;

/// Program data: minimize `f` subject to `0 in F(x) + b(x)^T N_P(g(x))`.
#[derive(Clone, Debug)]
pub struct GepProblem {
    pub objective: PolyMap,
    pub residual: PolyMap,
    pub g: PolyMap,
    pub b: PolyMap,
    pub m_dim: usize,
    pub p: ConvexPolyhedron,
}

impl GepProblem {
    pub fn new(
        objective: PolyMap,
        residual: PolyMap,
        g: PolyMap,
        b: PolyMap,
        m_dim: usize,
        p: ConvexPolyhedron,
    ) -> Result<GepProblem> {
        let n = objective.dim_in;
        let l = g.dim_out;
        if objective.dim_out != 1
            || residual.dim_in != n
            || residual.dim_out != m_dim
            || g.dim_in != n
            || b.dim_in != n
            || b.dim_out != l * m_dim
            || p.dim != l
        {
            return Err(Error::Dim("problem dimensions disagree".into()));
        }
        Ok(GepProblem {
            objective,
            residual,
            g,
            b,
            m_dim,
            p,
        })
    }

    pub fn n_dim(&self) -> usize {
        self.objective.dim_in
    }

    pub fn l_dim(&self) -> usize {
        self.g.dim_out
    }

    pub fn assumptions(&self, xbar: &RatVec) -> Result<AssumptionReport> {
        check_basic_assumptions(&self.g, &self.b, self.m_dim, &self.p, xbar)
    }

    /// Feasibility via the unique stationarity multiplier.
    pub fn eta_star(&self, xbar: &RatVec) -> Result<RatVec> {
        compute_eta_star(&self.residual, &self.b, self.m_dim, &self.g, &self.p, xbar)
    }

    /// Builds the constraint-set context at a feasible candidate point.
    pub fn context(&self, xbar: &RatVec, ops: GphOps) -> Result<(RatVec, OmegaContext)> {
        let eta = self.eta_star(xbar)?;
        let ctx = OmegaContext::new(
            self.g.clone(),
            self.b.clone(),
            self.m_dim,
            self.p.clone(),
            xbar.clone(),
            eta.clone(),
            ops,
        )?;
        Ok((eta, ctx))
    }
}

/// A direction satisfying the first-order criticality system, with its
/// recovered graph witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalDirection {
    pub d: RatVec,
    pub estar: RatVec,
    pub piece_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalQuery {
    Critical(CriticalDirection),
    NotCritical,
}

/// Exact multiplier certificate for one test direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierCertificate {
    pub alpha: Rat,
    pub lambda: RatVec,
    pub taustar: RatVec,
    pub piece_id: usize,
    pub value: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Necessary,
    Sufficient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectionStatus {
    NotCritical,
    Unqualified,
    Passed,
    Failed,
    Certified,
    NotCertified,
}

#[derive(Clone, Debug)]
pub struct DirectionRecord {
    pub direction: RatVec,
    pub estar: Option<RatVec>,
    pub piece_id: Option<usize>,
    pub status: DirectionStatus,
    pub certificates: Vec<MultiplierCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalConclusion {
    /// Necessary condition verified on every qualified tested direction.
    NecessaryHolds,
    /// A qualified direction admits only strictly negative values: local
    /// optimality is disproved.
    NecessaryFails { direction: RatVec },
    /// Some tested directions were unqualified; the condition is reported
    /// only where licensed.
    NecessaryPartial,
    SufficientCertified,
    SufficientNotCertified { direction: RatVec },
    NoCriticalDirections,
}

#[derive(Clone, Debug)]
pub struct Coverage {
    pub critical_pieces: usize,
    pub samples_per_piece: usize,
    pub user_directions: usize,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub mode: CheckMode,
    pub eta_star: RatVec,
    pub assumptions: AssumptionReport,
    pub convexity_attested: Option<bool>,
    pub directions: Vec<DirectionRecord>,
    pub conclusion: GlobalConclusion,
    pub coverage: Coverage,
    pub caveats: Vec<String>,
}

/// Second-derivative data shared by all certificates of one direction.
struct DirectionData {
    hess_f: Rat,    // ∇²f(d,d)
    h_res: RatVec,  // ∇²F(d,d) + ∇²b(d,d)^T eta* + 2(∇b d)^T e*   (m)
    h_g: RatVec,    // ∇²g(d,d)                                     (l)
}

/// Exact value of the second-order quadratic form for a certificate.
pub fn second_order_value(
    problem: &GepProblem,
    xbar: &RatVec,
    eta_star: &RatVec,
    cd: &CriticalDirection,
    lambda: &RatVec,
    taustar: &RatVec,
    alpha: &Rat,
) -> Result<Rat> {
    let data = direction_data(problem, xbar, eta_star, cd)?;
    Ok(alpha * &data.hess_f - dot(lambda, &data.h_res) + dot(taustar, &data.h_g))
}

fn direction_data(
    problem: &GepProblem,
    xbar: &RatVec,
    eta_star: &RatVec,
    cd: &CriticalDirection,
) -> Result<DirectionData> {
    let hess_f = problem.objective.hessian_form(xbar, &cd.d)?[0].clone();
    let hess_res = problem.residual.hessian_form(xbar, &cd.d)?;
    let hess_b = problem.b.hessian_form(xbar, &cd.d)?;
    let h_g = problem.g.hessian_form(xbar, &cd.d)?;
    let m = problem.m_dim;
    let l = problem.l_dim();
    let grad_b_d = crate::omega::contracted_jacobian_dir(&problem.b, m, xbar, &cd.d)?;
    let mut h_res = hess_res;
    for j in 0..m {
        for i in 0..l {
            h_res[j] += &hess_b[i * m + j] * &eta_star[i];
            h_res[j] += &grad_b_d[(i, j)] * &cd.estar[i] * Rat::from_integer(2.into());
        }
    }
    Ok(DirectionData {
        hess_f,
        h_res,
        h_g,
    })
}

/// Criticality test: descent for the objective plus an exact graph-witness
/// recovery for the linearized generalized equation.
pub fn is_critical(
    problem: &GepProblem,
    ctx: &OmegaContext,
    d: &RatVec,
) -> Result<CriticalQuery> {
    let grad_f = problem.objective.jacobian(&ctx.xbar)?;
    if dot(grad_f.row(0), d) > rzero() {
        return Ok(CriticalQuery::NotCritical);
    }
    let jac_res = problem.residual.jacobian(&ctx.xbar)?;
    let eta = vconcat(d, &vneg(&jac_res.mul_vec(d)));
    Ok(match ctx.recover_ue(&eta)? {
        TangentQuery::Witness(w) => CriticalQuery::Critical(CriticalDirection {
            d: d.clone(),
            estar: w.estar,
            piece_id: w.piece_id,
        }),
        TangentQuery::NotTangent => CriticalQuery::NotCritical,
    })
}

/// One stratum of the critical cone: the directions within a tangent
/// piece, with a relative-interior representative.
#[derive(Clone, Debug)]
pub struct CriticalPiece {
    pub piece_id: usize,
    pub cone: crate::cones::ConvexCone,
    pub representative: RatVec,
}

/// Stratifies the critical cone by the tangent pieces; pieces whose
/// critical directions reduce to the origin are omitted.
pub fn enumerate_critical_pieces(
    problem: &GepProblem,
    ctx: &OmegaContext,
) -> Result<Vec<CriticalPiece>> {
    let n = problem.n_dim();
    let l = problem.l_dim();
    let m = problem.m_dim;
    let grad_f = problem.objective.jacobian(&ctx.xbar)?;
    let jac_res = problem.residual.jacobian(&ctx.xbar)?;
    let grad_btd = crate::omega::contracted_jacobian(&problem.b, m, &ctx.xbar, &ctx.dstar)?;
    let jac_g = ctx.jac_g_at_xbar();
    let b_at = ctx.b_at_xbar();
    let pieces = ctx.tangent_gph_pieces()?;
    let mut out = Vec::new();
    for (piece_id, piece) in pieces.iter().enumerate() {
        // cone in (d, e*) space
        let mut ineqs: Vec<RatVec> = Vec::new();
        let mut eqs: Vec<RatVec> = Vec::new();
        let mut grad_row = grad_f.row(0).to_vec();
        grad_row.extend(zeros(l));
        ineqs.push(grad_row);
        // residual equation rows: (∇F + ∇(b^T eta*)) d + b^T e* = 0
        for j in 0..m {
            let mut row = zeros(n + l);
            for k in 0..n {
                row[k] = &jac_res[(j, k)] + &grad_btd[(j, k)];
            }
            for i in 0..l {
                row[n + i] = b_at[(i, j)].clone();
            }
            eqs.push(row);
        }
        for a in &piece.first.ineqs {
            let mut row = jac_g.tr_mul_vec(a);
            row.extend(zeros(l));
            ineqs.push(row);
        }
        for e in &piece.first.eqs {
            let mut row = jac_g.tr_mul_vec(e);
            row.extend(zeros(l));
            eqs.push(row);
        }
        for a in &piece.second.ineqs {
            let mut row = zeros(n);
            row.extend(a.iter().cloned());
            ineqs.push(row);
        }
        for e in &piece.second.eqs {
            let mut row = zeros(n);
            row.extend(e.iter().cloned());
            eqs.push(row);
        }
        let feasible = crate::cones::ConvexCone::from_hrep(n + l, ineqs, eqs);
        let mut proj = RatMat::zeros(n, n + l);
        for k in 0..n {
            proj[(k, k)] = rone();
        }
        let cone = feasible.image(&proj);
        let mut rep = zeros(n);
        for r in &cone.rays {
            for (a, b) in rep.iter_mut().zip(r) {
                *a += b;
            }
        }
        for lv in &cone.lineality {
            for (a, b) in rep.iter_mut().zip(lv) {
                *a += b;
            }
        }
        if rep.iter().all(|x| x.is_zero()) {
            continue;
        }
        out.push(CriticalPiece {
            piece_id,
            cone,
            representative: rep,
        });
    }
    Ok(out)
}

/// Builds the multiplier solution polyhedron in `(lambda, tau*)` for one
/// normal-cone piece: the first-order equation with right-hand side
/// `-alpha ∇f`, the cone rows on `tau*`, and the cone rows on `b lambda`.
fn multiplier_polyhedron(
    problem: &GepProblem,
    ctx: &OmegaContext,
    piece: &ProductPiece,
    alpha: &Rat,
) -> Result<ConvexPolyhedron> {
    let n = problem.n_dim();
    let l = problem.l_dim();
    let m = problem.m_dim;
    let grad_f = problem.objective.jacobian(&ctx.xbar)?;
    let jac_res = problem.residual.jacobian(&ctx.xbar)?;
    let grad_btd = crate::omega::contracted_jacobian(&problem.b, m, &ctx.xbar, &ctx.dstar)?;
    let jac_g = ctx.jac_g_at_xbar();
    let b_at = ctx.b_at_xbar();
    let mut ineqs: Vec<(RatVec, Rat)> = Vec::new();
    let mut eqs: Vec<(RatVec, Rat)> = Vec::new();
    // rows k: -(∇F + ∇(b^T eta*))^T lambda + ∇g^T tau* = -alpha ∇f
    for k in 0..n {
        let mut row = zeros(m + l);
        for j in 0..m {
            row[j] = -(&jac_res[(j, k)] + &grad_btd[(j, k)]);
        }
        for i in 0..l {
            row[m + i] = jac_g[(i, k)].clone();
        }
        eqs.push((row, -(alpha * &grad_f[(0, k)])));
    }
    // tau* in C1
    for a in &piece.first.ineqs {
        let mut row = zeros(m + l);
        for i in 0..l {
            row[m + i] = a[i].clone();
        }
        ineqs.push((row, rzero()));
    }
    for e in &piece.first.eqs {
        let mut row = zeros(m + l);
        for i in 0..l {
            row[m + i] = e[i].clone();
        }
        eqs.push((row, rzero()));
    }
    // b(x) lambda in C2
    for a in &piece.second.ineqs {
        let mut row = zeros(m + l);
        let at_b = b_at.tr_mul_vec(a); // m entries
        row[..m].clone_from_slice(&at_b);
        ineqs.push((row, rzero()));
    }
    for e in &piece.second.eqs {
        let mut row = zeros(m + l);
        let at_b = b_at.tr_mul_vec(e);
        row[..m].clone_from_slice(&at_b);
        eqs.push((row, rzero()));
    }
    Ok(ConvexPolyhedron::from_hrep(m + l, ineqs, eqs))
}

/// Qualification: on every piece of the directional limiting normal cone,
/// the homogeneous multiplier system forces `lambda = 0`.
pub fn check_qualification(
    problem: &GepProblem,
    ctx: &OmegaContext,
    cd: &CriticalDirection,
) -> Result<bool> {
    let m = problem.m_dim;
    let witness = TangentWitness {
        u: cd.d.clone(),
        estar: cd.estar.clone(),
        piece_id: cd.piece_id,
    };
    for piece in ctx.dir_normal_set(&witness, NormalRegime::Limiting)? {
        // homogeneous system: alpha = 0 and ∇f replaced by 0
        let homog = multiplier_polyhedron(problem, ctx, &piece, &rzero())?;
        // all generators must have zero lambda block
        let lambda_zero = |v: &RatVec| v[..m].iter().all(|x| x.is_zero());
        let ok = homog.points.iter().all(|p| lambda_zero(p))
            && homog.rays.iter().all(|r| lambda_zero(r))
            && homog.lineality.iter().all(|l| lambda_zero(l));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches the face-pair pieces for multiplier certificates of the
/// necessary condition, maximizing the second-order value per piece.
pub fn solve_multipliers_necessary(
    problem: &GepProblem,
    ctx: &OmegaContext,
    cd: &CriticalDirection,
) -> Result<Vec<MultiplierCertificate>> {
    let data = direction_data(problem, &ctx.xbar, &ctx.dstar, cd)?;
    let witness = TangentWitness {
        u: cd.d.clone(),
        estar: cd.estar.clone(),
        piece_id: cd.piece_id,
    };
    let mut certs = Vec::new();
    let one = rone();
    for (piece_id, piece) in ctx
        .dir_normal_set(&witness, NormalRegime::Limiting)?
        .iter()
        .enumerate()
    {
        let sols = multiplier_polyhedron(problem, ctx, piece, &one)?;
        if let Some(cert) = best_certificate(&sols, &data, &one, piece_id, false) {
            certs.push(cert);
        }
    }
    Ok(certs)
}

/// Maximizes the second-order value over one multiplier polyhedron. When
/// the value is unbounded above, a concrete certificate beyond the target
/// is constructed from the improving ray. `strict` shifts the target so
/// the returned certificate has value > 0 when possible.
fn best_certificate(
    sols: &ConvexPolyhedron,
    data: &DirectionData,
    alpha: &Rat,
    piece_id: usize,
    strict: bool,
) -> Option<MultiplierCertificate> {
    let m = data.h_res.len();
    let mut c = vneg(&data.h_res);
    c.extend(data.h_g.iter().cloned());
    let constant = alpha * &data.hess_f;
    let make = |point: &RatVec, value: Rat| MultiplierCertificate {
        alpha: alpha.clone(),
        lambda: point[..m].to_vec(),
        taustar: point[m..].to_vec(),
        piece_id,
        value,
    };
    match sols.argmax(&c) {
        ArgMax::Empty => None,
        ArgMax::Point { point, value } => Some(make(&point, &constant + value)),
        ArgMax::Unbounded { point, ray } => {
            let gain = dot(&c, &ray);
            let base = &constant + dot(&c, &point);
            // choose t with base + t*gain strictly above the target
            let target = if strict { rone() } else { rzero() };
            let t = if base > target {
                rzero()
            } else {
                (&target - &base) / &gain + rone()
            };
            let shifted = crate::rat::vadd(&point, &vscale(&t, &ray));
            let value = &base + &t * &gain;
            Some(make(&shifted, value))
        }
    }
}

/// Certificate search for the sufficient condition on one direction: the
/// regular normal cone of the tangent set, scaling normalization
/// `alpha in {1, 0}`, strict positivity required.
fn sufficient_certificate(
    problem: &GepProblem,
    ctx: &OmegaContext,
    cd: &CriticalDirection,
) -> Result<(Option<MultiplierCertificate>, Vec<MultiplierCertificate>)> {
    let data = direction_data(problem, &ctx.xbar, &ctx.dstar, cd)?;
    let witness = TangentWitness {
        u: cd.d.clone(),
        estar: cd.estar.clone(),
        piece_id: cd.piece_id,
    };
    let pieces = ctx.dir_normal_set(&witness, NormalRegime::RegularOfTangent)?;
    debug_assert_eq!(pieces.len(), 1);
    let mut all = Vec::new();
    let mut winner: Option<MultiplierCertificate> = None;
    for alpha in [rone(), rzero()] {
        for (piece_id, piece) in pieces.iter().enumerate() {
            let sols = multiplier_polyhedron(problem, ctx, piece, &alpha)?;
            if let Some(cert) = best_certificate(&sols, &data, &alpha, piece_id, true) {
                let positive = cert.value > rzero();
                let nonzero = !cert.alpha.is_zero()
                    || cert.lambda.iter().any(|x| !x.is_zero())
                    || cert.taustar.iter().any(|x| !x.is_zero());
                if positive && nonzero && winner.is_none() {
                    winner = Some(cert.clone());
                }
                all.push(cert);
            }
        }
    }
    Ok((winner, all))
}

/// Directions to test: user-supplied, or stratum representatives plus
/// random rational samples from each critical piece.
fn assemble_directions(
    problem: &GepProblem,
    ctx: &OmegaContext,
    user: Option<&[RatVec]>,
    samples_per_piece: usize,
    seed: u64,
) -> Result<(Vec<RatVec>, Coverage)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut directions: Vec<RatVec> = Vec::new();
    let push = |d: RatVec, out: &mut Vec<RatVec>| {
        if !d.iter().all(|x| x.is_zero()) && !out.contains(&d) {
            out.push(d);
        }
    };
    let pieces = enumerate_critical_pieces(problem, ctx)?;
    if let Some(user_dirs) = user {
        for d in user_dirs {
            push(d.clone(), &mut directions);
        }
        let coverage = Coverage {
            critical_pieces: pieces.len(),
            samples_per_piece: 0,
            user_directions: directions.len(),
        };
        return Ok((directions, coverage));
    }
    for piece in &pieces {
        push(piece.representative.clone(), &mut directions);
        for _ in 0..samples_per_piece {
            // random positive rational combination of the generators
            let mut d = zeros(problem.n_dim());
            for r in &piece.cone.rays {
                let c = Rat::new((rng.gen_range(1..6) as i64).into(), 1.into());
                for (a, b) in d.iter_mut().zip(r) {
                    *a += &c * b;
                }
            }
            for l in &piece.cone.lineality {
                let c = Rat::new((rng.gen_range(-3..4) as i64).into(), 1.into());
                for (a, b) in d.iter_mut().zip(l) {
                    *a += &c * b;
                }
            }
            push(d, &mut directions);
        }
    }
    let coverage = Coverage {
        critical_pieces: pieces.len(),
        samples_per_piece,
        user_directions: 0,
    };
    Ok((directions, coverage))
}

fn conclude(mode: CheckMode, records: &[DirectionRecord]) -> GlobalConclusion {
    use DirectionStatus::*;
    let critical: Vec<&DirectionRecord> = records
        .iter()
        .filter(|r| r.status != NotCritical)
        .collect();
    if critical.is_empty() {
        return GlobalConclusion::NoCriticalDirections;
    }
    match mode {
        CheckMode::Necessary => {
            if let Some(r) = critical.iter().find(|r| r.status == Failed) {
                GlobalConclusion::NecessaryFails {
                    direction: r.direction.clone(),
                }
            } else if critical.iter().any(|r| r.status == Unqualified) {
                GlobalConclusion::NecessaryPartial
            } else {
                GlobalConclusion::NecessaryHolds
            }
        }
        CheckMode::Sufficient => {
            if let Some(r) = critical.iter().find(|r| r.status == NotCertified) {
                GlobalConclusion::SufficientNotCertified {
                    direction: r.direction.clone(),
                }
            } else {
                GlobalConclusion::SufficientCertified
            }
        }
    }
}

/// Options for a certification run.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub directions: Option<Vec<RatVec>>,
    pub samples_per_piece: usize,
    pub seed: u64,
    pub ops: GphOps,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            directions: None,
            samples_per_piece: 2,
            seed: 0,
            ops: GphOps::general(),
        }
    }
}

/// Second-order necessary test at a candidate point.
pub fn check_necessary(
    problem: &GepProblem,
    xbar: &RatVec,
    opts: &CheckOptions,
) -> Result<Verdict> {
    run_check(problem, xbar, CheckMode::Necessary, opts)
}

/// Second-order sufficient test (essential local minimality of second
/// order on the tested directions).
pub fn check_sufficient(
    problem: &GepProblem,
    xbar: &RatVec,
    opts: &CheckOptions,
) -> Result<Verdict> {
    run_check(problem, xbar, CheckMode::Sufficient, opts)
}

fn run_check(
    problem: &GepProblem,
    xbar: &RatVec,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let (eta_star, ctx) = problem.context(xbar, opts.ops.clone())?;
    let (directions, coverage) = assemble_directions(
        problem,
        &ctx,
        opts.directions.as_deref(),
        opts.samples_per_piece,
        opts.seed,
    )?;
    let mut records = Vec::new();
    for d in directions {
        let record = match is_critical(problem, &ctx, &d)? {
            CriticalQuery::NotCritical => DirectionRecord {
                direction: d,
                estar: None,
                piece_id: None,
                status: DirectionStatus::NotCritical,
                certificates: vec![],
            },
            CriticalQuery::Critical(cd) => match mode {
                CheckMode::Necessary => {
                    if !check_qualification(problem, &ctx, &cd)? {
                        DirectionRecord {
                            direction: d,
                            estar: Some(cd.estar),
                            piece_id: Some(cd.piece_id),
                            status: DirectionStatus::Unqualified,
                            certificates: vec![],
                        }
                    } else {
                        // an empty certificate list is a legitimate outcome:
                        // multipliers exist only at local minimizers, so a
                        // qualified direction without any disproves optimality
                        let certs = solve_multipliers_necessary(problem, &ctx, &cd)?;
                        let passed = certs.iter().any(|c| c.value >= rzero());
                        DirectionRecord {
                            direction: d,
                            estar: Some(cd.estar),
                            piece_id: Some(cd.piece_id),
                            status: if passed {
                                DirectionStatus::Passed
                            } else {
                                DirectionStatus::Failed
                            },
                            certificates: certs,
                        }
                    }
                }
                CheckMode::Sufficient => {
                    let (winner, all) = sufficient_certificate(problem, &ctx, &cd)?;
                    DirectionRecord {
                        direction: d,
                        estar: Some(cd.estar),
                        piece_id: Some(cd.piece_id),
                        status: if winner.is_some() {
                            DirectionStatus::Certified
                        } else {
                            DirectionStatus::NotCertified
                        },
                        certificates: all,
                    }
                }
            },
        };
        records.push(record);
    }
    let conclusion = conclude(mode, &records);
    let mut caveats = vec![];
    if mode == CheckMode::Sufficient {
        caveats.push(format!(
            "sufficiency certified on {} stratum representatives plus {} samples per stratum; \
             the condition quantifies over all nonzero critical directions",
            coverage.critical_pieces, coverage.samples_per_piece
        ));
    }
    Ok(Verdict {
        mode,
        eta_star,
        assumptions: ctx.assumptions.clone(),
        convexity_attested: None,
        directions: records,
        conclusion,
        coverage,
        caveats,
    })
}

// ---------------------------------------------------------------------------
// variational-inequality specialization

/// Program with a parametric variational-inequality constraint over
/// `{y : psi(x,y) <= 0}`.
#[derive(Clone, Debug)]
pub struct MpviProblem {
    pub objective: PolyMap, // f(x, y)
    pub residual: PolyMap,  // F(x, y), n2 components
    pub psi: PolyMap,       // l components
    pub n1: usize,
    pub n2: usize,
    pub convexity_attested: bool,
}

impl MpviProblem {
    pub fn l_dim(&self) -> usize {
        self.psi.dim_out
    }

    /// Lower-level nondegeneracy: injectivity of the adjoint of the
    /// `y`-Jacobian of `psi` on the span of the active normal cone.
    pub fn nondegeneracy(&self, zbar: &RatVec) -> Result<bool> {
        let l = self.l_dim();
        let p = ConvexPolyhedron::negative_orthant(l);
        let q = self.psi.eval(zbar)?;
        if !p.member(&q) {
            return Err(Error::Infeasible("psi(z) not in the orthant".into()));
        }
        let span = p.normal_cone_at(&q).span();
        if span.rank() == 0 {
            return Ok(true);
        }
        let jac = self.psi.jacobian(zbar)?; // l x (n1+n2)
        let cols: Vec<RatVec> = span
            .basis
            .iter()
            .map(|s| {
                // adjoint of the y-block rows
                (self.n1..self.n1 + self.n2)
                    .map(|k| {
                        let mut acc = rzero();
                        for i in 0..l {
                            acc += &jac[(i, k)] * &s[i];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(crate::linalg::span_basis(&cols).len() == span.rank())
    }

    /// Reduction to the generalized-equation form: the coefficient matrix
    /// becomes the `y`-Jacobian of `psi`, with polynomial entries.
    pub fn reduce(&self) -> Result<GepProblem> {
        let l = self.l_dim();
        let n = self.n1 + self.n2;
        assert_eq!(self.residual.dim_out, self.n2);
        let mut b_components = Vec::with_capacity(l * self.n2);
        for i in 0..l {
            let psi_i = self.psi.select_components(&[i]);
            for j in 0..self.n2 {
                let d = psi_i.partial_derivative(self.n1 + j);
                b_components.push(d.components()[0].clone());
            }
        }
        let b = PolyMap::new(n, b_components)?;
        GepProblem::new(
            self.objective.clone(),
            self.residual.clone(),
            self.psi.clone(),
            b,
            self.n2,
            ConvexPolyhedron::negative_orthant(l),
        )
    }

    /// Certification via the reduction, with the box fast path. Verifies
    /// that lower-level nondegeneracy holds and implies both injectivity
    /// conditions of the reduced problem.
    pub fn check(&self, zbar: &RatVec, mode: CheckMode, opts: &CheckOptions) -> Result<Verdict> {
        if !self.nondegeneracy(zbar)? {
            return Err(Error::Degenerate(
                "lower-level nondegeneracy fails at the candidate point".into(),
            ));
        }
        let gep = self.reduce()?;
        let rep = gep.assumptions(zbar)?;
        if !rep.both() {
            return Err(Error::ContractViolation(
                "nondegeneracy holds but a reduced injectivity condition fails".into(),
            ));
        }
        let mut opts = opts.clone();
        opts.ops = GphOps::auto();
        let mut verdict = match mode {
            CheckMode::Necessary => check_necessary(&gep, zbar, &opts)?,
            CheckMode::Sufficient => check_sufficient(&gep, zbar, &opts)?,
        };
        verdict.convexity_attested = Some(self.convexity_attested);
        if !self.convexity_attested {
            verdict
                .caveats
                .push("convexity of psi in y was not attested by the input".into());
        }
        Ok(verdict)
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

    /// The toy scalar-complementarity program: F = x2, g = x1, b = [1],
    /// P = R_-, with a configurable objective.
    fn toy_problem(objective: PolyMap) -> GepProblem {
        GepProblem::new(
            objective,
            PolyMap::new(2, vec![vec![mono(1, vec![0, 1])]]).unwrap(),
            PolyMap::new(2, vec![vec![mono(1, vec![1, 0])]]).unwrap(),
            PolyMap::new(2, vec![vec![mono(1, vec![0, 0])]]).unwrap(),
            1,
            ConvexPolyhedron::negative_orthant(1),
        )
        .unwrap()
    }

    fn quadratic_objective() -> PolyMap {
        PolyMap::new(
            2,
            vec![vec![mono(1, vec![2, 0]), mono(1, vec![0, 2])]],
        )
        .unwrap()
    }

    fn linear_objective() -> PolyMap {
        PolyMap::new(2, vec![vec![mono(1, vec![0, 1])]]).unwrap()
    }

    fn origin() -> RatVec {
        vec![rint(0), rint(0)]
    }

    #[test]
    fn criticality_examples() {
        let problem = toy_problem(quadratic_objective());
        let (eta, ctx) = problem.context(&origin(), GphOps::general()).unwrap();
        assert_eq!(eta, vec![rint(0)]);
        match is_critical(&problem, &ctx, &vec![rint(-1), rint(0)]).unwrap() {
            CriticalQuery::Critical(cd) => assert_eq!(cd.estar, vec![rint(0)]),
            _ => panic!("(-1,0) must be critical"),
        }
        match is_critical(&problem, &ctx, &vec![rint(0), rint(-1)]).unwrap() {
            CriticalQuery::Critical(cd) => assert_eq!(cd.estar, vec![rint(1)]),
            _ => panic!("(0,-1) must be critical"),
        }
        assert_eq!(
            is_critical(&problem, &ctx, &vec![rint(1), rint(0)]).unwrap(),
            CriticalQuery::NotCritical
        );
    }

    #[test]
    fn critical_piece_enumeration() {
        let problem = toy_problem(quadratic_objective());
        let (_, ctx) = problem.context(&origin(), GphOps::general()).unwrap();
        let pieces = enumerate_critical_pieces(&problem, &ctx).unwrap();
        assert_eq!(pieces.len(), 2);
        let reps: Vec<RatVec> = pieces.iter().map(|p| p.representative.clone()).collect();
        assert!(reps.contains(&vec![rint(-1), rint(0)]));
        assert!(reps.contains(&vec![rint(0), rint(-1)]));
    }

    #[test]
    fn qualification_and_multipliers() {
        let problem = toy_problem(quadratic_objective());
        let (_, ctx) = problem.context(&origin(), GphOps::general()).unwrap();
        let cd = match is_critical(&problem, &ctx, &vec![rint(-1), rint(0)]).unwrap() {
            CriticalQuery::Critical(cd) => cd,
            _ => unreachable!(),
        };
        assert!(check_qualification(&problem, &ctx, &cd).unwrap());
        let certs = solve_multipliers_necessary(&problem, &ctx, &cd).unwrap();
        assert!(!certs.is_empty());
        // zero multipliers solve the system; value = hess f = 2
        assert!(certs
            .iter()
            .any(|c| c.lambda == vec![rint(0)] && c.value >= rint(2)));
        let v = second_order_value(
            &problem,
            &origin(),
            &vec![rint(0)],
            &cd,
            &vec![rint(0)],
            &vec![rint(0)],
            &rone(),
        )
        .unwrap();
        assert_eq!(v, rint(2));
    }

    #[test]
    fn necessary_verdicts() {
        let problem = toy_problem(quadratic_objective());
        let v = check_necessary(&problem, &origin(), &CheckOptions::default()).unwrap();
        assert_eq!(v.conclusion, GlobalConclusion::NecessaryHolds);
        // f = x2: the origin is not a local minimizer (the feasible ray
        // (0, s), s < 0 descends), and the necessary test detects it: at
        // d = (0,-1) the equation forces (lambda, tau*) = (1, 0) but the
        // directional normal cone piece (R, {0}) rejects it
        let problem = toy_problem(linear_objective());
        let v = check_necessary(&problem, &origin(), &CheckOptions::default()).unwrap();
        assert_eq!(
            v.conclusion,
            GlobalConclusion::NecessaryFails {
                direction: vec![rint(0), rint(-1)]
            }
        );
        // f = -x2 makes the origin a genuine local minimizer; the only
        // critical directions lie on the inactive branch and pass
        let problem = toy_problem(
            PolyMap::new(2, vec![vec![mono(-1, vec![0, 1])]]).unwrap(),
        );
        let v = check_necessary(&problem, &origin(), &CheckOptions::default()).unwrap();
        assert_eq!(v.conclusion, GlobalConclusion::NecessaryHolds);
        let rec = v
            .directions
            .iter()
            .find(|r| r.status == DirectionStatus::Passed)
            .expect("a passing direction");
        assert!(rec
            .certificates
            .iter()
            .any(|c| c.value == rint(0) && c.lambda == vec![rint(-1)]));
    }

    #[test]
    fn sufficient_verdicts() {
        let problem = toy_problem(quadratic_objective());
        let v = check_sufficient(&problem, &origin(), &CheckOptions::default()).unwrap();
        assert_eq!(v.conclusion, GlobalConclusion::SufficientCertified);
        for rec in v.directions.iter().filter(|r| r.status != DirectionStatus::NotCritical) {
            assert_eq!(rec.status, DirectionStatus::Certified);
        }
        // f = x2 cannot be certified at (0,-1): only value 0 is achievable
        let problem = toy_problem(linear_objective());
        let v = check_sufficient(&problem, &origin(), &CheckOptions::default()).unwrap();
        match &v.conclusion {
            GlobalConclusion::SufficientNotCertified { .. } => {}
            other => panic!("expected not certified, got {other:?}"),
        }
        // the strict-complementarity direction achieves only value 0
        let rec = v
            .directions
            .iter()
            .find(|r| r.direction == vec![rint(0), rint(-1)])
            .expect("direction tested");
        assert_eq!(rec.status, DirectionStatus::NotCertified);
        assert!(rec.certificates.iter().all(|c| c.value <= rint(0)));
    }

    #[test]
    fn vacuous_sufficiency_without_critical_directions() {
        // f = -x1: gradient (-1, 0); critical directions need
        // ∇f d = -d1 <= 0 i.e. d1 >= 0, but tangency needs d1 <= 0, so
        // only d1 = 0; then the pieces force d2 = 0 or d2 <= 0...
        // use f = x1 instead: ∇f d = d1 <= 0 keeps criticality; to get an
        // empty critical cone take f with gradient against both reps
        let objective = PolyMap::new(
            2,
            vec![vec![mono(-1, vec![1, 0]), mono(-1, vec![0, 1])]],
        )
        .unwrap(); // f = -x1 - x2: ∇f d = -d1 - d2 <= 0
        let problem = toy_problem(objective);
        let v = check_sufficient(&problem, &origin(), &CheckOptions::default()).unwrap();
        // critical reps (-1,0) and (0,-1) have ∇f d = 1 > 0: not critical
        assert_eq!(v.conclusion, GlobalConclusion::NoCriticalDirections);
    }

    #[test]
    fn mpvi_reduction_toy() {
        // psi(x, y) = y - x: the coefficient matrix is the constant [1]
        let psi = PolyMap::new(
            2,
            vec![vec![mono(1, vec![0, 1]), mono(-1, vec![1, 0])]],
        )
        .unwrap();
        let mpvi = MpviProblem {
            objective: PolyMap::new(
                2,
                vec![vec![mono(1, vec![2, 0]), mono(1, vec![0, 2])]],
            )
            .unwrap(),
            residual: PolyMap::new(2, vec![vec![mono(1, vec![0, 1])]]).unwrap(),
            psi,
            n1: 1,
            n2: 1,
            convexity_attested: true,
        };
        let gep = mpvi.reduce().unwrap();
        assert_eq!(gep.m_dim, 1);
        let b_val = gep.b.eval(&vec![rint(3), rint(5)]).unwrap();
        assert_eq!(b_val, vec![rint(1)]);
        assert!(mpvi.nondegeneracy(&vec![rint(0), rint(0)]).unwrap());
        let v = mpvi
            .check(&origin(), CheckMode::Sufficient, &CheckOptions::default())
            .unwrap();
        assert_eq!(v.conclusion, GlobalConclusion::SufficientCertified);
        assert_eq!(v.convexity_attested, Some(true));
    }
}
