//! Report assembly: every command produces one deterministic JSON report.

use serde_json::{json, Map, Value};
use vargeo::error::Error;
use vargeo::gph::{pieces_to_union, GphOps};
use vargeo::io::{cone_union_json, polyhedron_union_json, vec_json, vecs_json};
use vargeo::omega::{NormalRegime, OmegaContext, TangentQuery};
use vargeo::optimality::{
    check_necessary, check_sufficient, CheckMode, CheckOptions, DirectionStatus,
    GlobalConclusion, Verdict,
};
use vargeo::oracle::{
    curvature_liminf, dir_normal_probe, essential_min_grid, second_tangent_probe,
    tangent_probe, Thresholds,
};
use vargeo::rat::{rat_to_string, to_f64, vec_to_f64, RatVec};
use vargeo::ExtReal;

use crate::problem::{ProblemFile, ProblemKind};

pub struct ReportBuilder {
    body: Map<String, Value>,
}

impl ReportBuilder {
    pub fn new(command: &str, seed: u64) -> ReportBuilder {
        let mut body = Map::new();
        body.insert("schema_version".into(), json!(1));
        body.insert(
            "tool".into(),
            json!({"name": "vargeo", "version": env!("CARGO_PKG_VERSION")}),
        );
        body.insert("command".into(), json!(command));
        body.insert("seed".into(), json!(seed));
        ReportBuilder { body }
    }

    pub fn input(mut self, input: Value) -> Self {
        self.body.insert("input".into(), input);
        self
    }

    pub fn field(mut self, key: &str, value: Value) -> Self {
        self.body.insert(key.into(), value);
        self
    }

    pub fn error(mut self, err: &Error) -> Self {
        self.body.insert(
            "error".into(),
            json!({"kind": error_kind(err), "message": err.to_string()}),
        );
        self
    }

    pub fn finish(self) -> Value {
        Value::Object(self.body)
    }
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Parse(_) => "parse",
        Error::Dim(_) => "dimension",
        Error::Infeasible(_) | Error::NoSolution(_) => "infeasible",
        Error::AssumptionFailed(_) => "assumption_failed",
        Error::Degenerate(_) => "degenerate",
        Error::NotMember(_) | Error::NotTangent(_) => "not_member",
        Error::MultipleSolutions(_) => "multiple_solutions",
        Error::InconsistentRep(_) => "inconsistent_representation",
        Error::ContractViolation(_) => "contract_violation",
    }
}

pub fn ext_real_json(v: &ExtReal) -> Value {
    v.to_json()
}

pub fn assumption_json(ctx: &OmegaContext, eta: &RatVec) -> Value {
    json!({
        "g_ok": ctx.assumptions.g_ok,
        "b_ok": ctx.assumptions.b_ok,
        "normal_span_basis": vecs_json(&ctx.assumptions.span_basis),
        "eta_star": vec_json(eta),
    })
}

pub fn verdict_json(v: &Verdict) -> Value {
    let status = |s: &DirectionStatus| match s {
        DirectionStatus::NotCritical => "not_critical",
        DirectionStatus::Unqualified => "unqualified",
        DirectionStatus::Passed => "passed",
        DirectionStatus::Failed => "failed",
        DirectionStatus::Certified => "certified",
        DirectionStatus::NotCertified => "not_certified",
    };
    let directions: Vec<Value> = v
        .directions
        .iter()
        .map(|r| {
            json!({
                "direction": vec_json(&r.direction),
                "status": status(&r.status),
                "witness_e_star": r.estar.as_ref().map(|e| vec_json(e)),
                "piece_id": r.piece_id,
                "certificates": r.certificates.iter().map(|c| json!({
                    "alpha": rat_to_string(&c.alpha),
                    "lambda": vec_json(&c.lambda),
                    "tau_star": vec_json(&c.taustar),
                    "piece_id": c.piece_id,
                    "value": rat_to_string(&c.value),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let conclusion = match &v.conclusion {
        GlobalConclusion::NecessaryHolds => json!({"kind": "necessary_holds"}),
        GlobalConclusion::NecessaryFails { direction } => {
            json!({"kind": "necessary_fails", "direction": vec_json(direction)})
        }
        GlobalConclusion::NecessaryPartial => json!({"kind": "necessary_partial"}),
        GlobalConclusion::SufficientCertified => json!({"kind": "sufficient_certified"}),
        GlobalConclusion::SufficientNotCertified { direction } => {
            json!({"kind": "sufficient_not_certified", "direction": vec_json(direction)})
        }
        GlobalConclusion::NoCriticalDirections => json!({"kind": "no_critical_directions"}),
    };
    json!({
        "mode": match v.mode { CheckMode::Necessary => "necessary", CheckMode::Sufficient => "sufficient" },
        "eta_star": vec_json(&v.eta_star),
        "assumptions": { "g_ok": v.assumptions.g_ok, "b_ok": v.assumptions.b_ok },
        "convexity_attested": v.convexity_attested,
        "directions": directions,
        "conclusion": conclusion,
        "coverage": {
            "critical_pieces": v.coverage.critical_pieces,
            "samples_per_piece": v.coverage.samples_per_piece,
            "user_directions": v.coverage.user_directions,
        },
        "caveats": v.caveats,
    })
}

// ---------------------------------------------------------------------------
// command runners

pub struct GeometryArgs {
    pub point: RatVec,
    pub query: String,
    pub direction: Option<RatVec>,
    pub covector: Option<RatVec>,
}

pub fn run_geometry(file: &ProblemFile, args: &GeometryArgs, seed: u64) -> (Value, i32) {
    let builder = ReportBuilder::new("geometry", seed).input(json!({
        "problem": file.raw.clone(),
        "point": vec_json(&args.point),
        "query": args.query,
        "direction": args.direction.as_ref().map(|d| vec_json(d)),
        "covector": args.covector.as_ref().map(|c| vec_json(c)),
    }));
    match geometry_result(file, args) {
        Ok((assumptions, result)) => (
            builder
                .field("assumptions", assumptions)
                .field("result", result)
                .finish(),
            0,
        ),
        Err(e) => {
            let code = match e {
                Error::Parse(_) | Error::Dim(_) => 2,
                Error::ContractViolation(_) => 3,
                _ => 0,
            };
            (builder.error(&e).finish(), code)
        }
    }
}

fn geometry_result(
    file: &ProblemFile,
    args: &GeometryArgs,
) -> Result<(Value, Value), Error> {
    let gep = file.as_gep()?;
    let ops = match &file.kind {
        ProblemKind::Mpvi(_) => GphOps::auto(),
        ProblemKind::Gep(_) => GphOps::general(),
    };
    let (eta, ctx) = gep.context(&args.point, ops)?;
    let assumptions = assumption_json(&ctx, &eta);
    let l = gep.l_dim();
    let result = match args.query.as_str() {
        "tangent" => {
            let t = ctx.tangent()?;
            let gph = pieces_to_union(2 * l, &ctx.tangent_gph_pieces()?);
            json!({
                "graph_tangent": cone_union_json(&gph),
                "omega_tangent": cone_union_json(&t.union),
            })
        }
        "normal_dir" => {
            let dir = args
                .direction
                .clone()
                .ok_or_else(|| Error::Parse("normal_dir requires --direction".into()))?;
            match ctx.recover_ue(&dir)? {
                TangentQuery::NotTangent => json!({"tangent": false}),
                TangentQuery::Witness(w) => {
                    let limiting = ctx.dir_normal_set(&w, NormalRegime::Limiting)?;
                    let regular = ctx.dir_normal_set(&w, NormalRegime::RegularOfTangent)?;
                    let lim_union = pieces_to_union(2 * l, &limiting);
                    let reg_union = pieces_to_union(2 * l, &regular);
                    json!({
                        "tangent": true,
                        "witness": {"u": vec_json(&w.u), "e_star": vec_json(&w.estar), "piece_id": w.piece_id},
                        "graph_dir_normal": cone_union_json(&lim_union),
                        "graph_regular_normal_of_tangent": cone_union_json(&reg_union),
                    })
                }
            }
        }
        "second_tangent" => {
            let dir = args
                .direction
                .clone()
                .ok_or_else(|| Error::Parse("second_tangent requires --direction".into()))?;
            match ctx.recover_ue(&dir)? {
                TangentQuery::NotTangent => json!({"tangent": false}),
                TangentQuery::Witness(w) => {
                    let t2 = ctx.second_tangent(&w)?;
                    json!({
                        "tangent": true,
                        "witness": {"u": vec_json(&w.u), "e_star": vec_json(&w.estar), "piece_id": w.piece_id},
                        "omega_second_tangent": polyhedron_union_json(&t2.union),
                        "second_shift": vec_json(&t2.second_shift),
                    })
                }
            }
        }
        "curvature" => {
            let dir = args
                .direction
                .clone()
                .ok_or_else(|| Error::Parse("curvature requires --direction".into()))?;
            let cov = args
                .covector
                .clone()
                .ok_or_else(|| Error::Parse("curvature requires --covector".into()))?;
            match ctx.recover_ue(&dir)? {
                TangentQuery::NotTangent => json!({"tangent": false}),
                TangentQuery::Witness(w) => {
                    let c = ctx.curvature(&w, &cov)?;
                    json!({
                        "tangent": true,
                        "witness": {"u": vec_json(&w.u), "e_star": vec_json(&w.estar), "piece_id": w.piece_id},
                        "sigma": ext_real_json(&c.sigma),
                        "sigma_hat": ext_real_json(&c.sigma_hat),
                        "d2_delta": ext_real_json(&c.d2delta),
                    })
                }
            }
        }
        other => return Err(Error::Parse(format!("unknown query `{other}`"))),
    };
    Ok((assumptions, result))
}

pub struct CheckArgs {
    pub point: RatVec,
    pub mode: CheckMode,
    pub directions: Option<Vec<RatVec>>,
    pub samples: usize,
    pub seed: u64,
    pub with_oracle: bool,
}

pub fn run_check(file: &ProblemFile, args: &CheckArgs) -> (Value, i32) {
    let builder = ReportBuilder::new("check", args.seed).input(json!({
        "problem": file.raw.clone(),
        "point": vec_json(&args.point),
        "mode": match args.mode { CheckMode::Necessary => "necessary", CheckMode::Sufficient => "sufficient" },
        "directions": args.directions.as_ref().map(|ds| ds.iter().map(|d| vec_json(d)).collect::<Vec<_>>()),
        "samples": args.samples,
        "with_oracle": args.with_oracle,
    }));
    let result = check_result(file, args);
    match result {
        Ok(v) => (builder.field("verdict", v).finish(), 0),
        Err(e) => {
            let code = match e {
                Error::Parse(_) | Error::Dim(_) => 2,
                Error::ContractViolation(_) => 3,
                _ => 0,
            };
            (builder.error(&e).finish(), code)
        }
    }
}

fn check_result(file: &ProblemFile, args: &CheckArgs) -> Result<Value, Error> {
    if args.point.len() != file.ambient_dim() {
        return Err(Error::Dim(format!(
            "point has {} coordinates, problem expects {}",
            args.point.len(),
            file.ambient_dim()
        )));
    }
    // fall back to the direction list shipped in the problem file
    let directions = args
        .directions
        .clone()
        .or_else(|| (!file.directions.is_empty()).then(|| file.directions.clone()));
    let opts = CheckOptions {
        directions,
        samples_per_piece: args.samples,
        seed: args.seed,
        ops: GphOps::general(),
    };
    let verdict = match &file.kind {
        ProblemKind::Gep(p) => match args.mode {
            CheckMode::Necessary => check_necessary(p, &args.point, &opts)?,
            CheckMode::Sufficient => check_sufficient(p, &args.point, &opts)?,
        },
        ProblemKind::Mpvi(p) => p.check(&args.point, args.mode, &opts)?,
    };
    let mut out = verdict_json(&verdict);
    if args.with_oracle {
        if let Some(param) = file.parameterization() {
            let fx = file.fixtures.as_ref().unwrap();
            let gep = file.as_gep()?;
            if !fx.grid_lo.is_empty() {
                let beta = essential_min_grid(
                    &gep.objective,
                    &gep.residual,
                    &param,
                    &vec_to_f64(&args.point),
                    &fx.grid_lo,
                    &fx.grid_hi,
                    fx.grid_step,
                );
                out["oracle"] = json!({
                    "beta_hat": beta,
                    "growth_threshold": fx.growth_threshold,
                    "certifies_growth": beta >= fx.growth_threshold,
                });
            }
        } else {
            out["oracle"] = json!({"error": "no fixtures with charts in the problem file"});
        }
    }
    Ok(out)
}

pub fn run_validate(file: &ProblemFile, seed: u64) -> (Value, i32) {
    let builder = ReportBuilder::new("validate", seed).input(json!({
        "problem": file.raw.clone(),
    }));
    match validate_result(file, seed) {
        Ok(v) => {
            let code = 0;
            (builder.field("validation", v).finish(), code)
        }
        Err(e) => {
            let code = match e {
                Error::Parse(_) | Error::Dim(_) => 2,
                Error::ContractViolation(_) => 3,
                _ => 0,
            };
            (builder.error(&e).finish(), code)
        }
    }
}

fn validate_result(file: &ProblemFile, seed: u64) -> Result<Value, Error> {
    use rand::SeedableRng;
    let fx = file
        .fixtures
        .as_ref()
        .ok_or_else(|| Error::Parse("validate requires a fixtures block".into()))?;
    let param = file
        .parameterization()
        .ok_or_else(|| Error::Parse("validate requires fixture charts".into()))?;
    let gep = file.as_gep()?;
    let th = Thresholds::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut families = Map::new();
    let mut all_ok = true;
    for point in &file.points {
        let (_, ctx) = gep.context(point, GphOps::general())?;
        let omega = vec_to_f64(&ctx.omega_bar());
        // tangent probes: labeled accept/reject directions
        let mut tangent_entries = Vec::new();
        for (dirs, expect) in [(&fx.tangent_accept, true), (&fx.tangent_reject, false)] {
            for eta in dirs.iter() {
                let exact = matches!(ctx.recover_ue(eta)?, TangentQuery::Witness(_));
                let profile = tangent_probe(&param, &omega, &vec_to_f64(eta), 4, &th);
                let ok = exact == expect && profile.accepted == expect;
                all_ok &= ok;
                tangent_entries.push(json!({
                    "direction": vec_json(eta),
                    "expected_tangent": expect,
                    "exact_tangent": exact,
                    "probe_accepted": profile.accepted,
                    "residuals": profile.residuals,
                    "ok": ok,
                }));
            }
        }
        families.insert("tangent_probes".into(), json!(tangent_entries));
        // second-order probes on members generated from accepted dirs
        let mut second_entries = Vec::new();
        for eta in &fx.tangent_accept {
            if let TangentQuery::Witness(w) = ctx.recover_ue(eta)? {
                let t2 = ctx.second_tangent(&w)?;
                for piece in &t2.pieces {
                    let Some(xi) = piece.image.relint_point() else { continue };
                    let profile = second_tangent_probe(
                        &param,
                        &omega,
                        &vec_to_f64(eta),
                        &vec_to_f64(&xi),
                        4,
                        &th,
                    );
                    all_ok &= profile.accepted;
                    second_entries.push(json!({
                        "direction": vec_json(eta),
                        "candidate": vec_json(&xi),
                        "probe_accepted": profile.accepted,
                        "residuals": profile.residuals,
                        "ok": profile.accepted,
                    }));
                }
            }
        }
        families.insert("second_tangent_probes".into(), json!(second_entries));
        // directional normal probes
        let mut normal_entries = Vec::new();
        for (eta, cov, expect) in &fx.normal_probes {
            if let TangentQuery::Witness(w) = ctx.recover_ue(eta)? {
                let exact = matches!(
                    ctx.recover_rf(&w, cov, NormalRegime::Limiting)?,
                    vargeo::omega::NormalQuery::Witness(_)
                );
                let (approach, probe_ok) = dir_normal_probe(
                    &param,
                    &omega,
                    &vec_to_f64(eta),
                    &vec_to_f64(cov),
                    4,
                    &mut rng,
                    &th,
                );
                let ok = exact == *expect && probe_ok == *expect;
                all_ok &= ok;
                normal_entries.push(json!({
                    "direction": vec_json(eta),
                    "covector": vec_json(cov),
                    "expected": expect,
                    "exact": exact,
                    "probe": probe_ok,
                    "approach_distance": approach,
                    "ok": ok,
                }));
            }
        }
        families.insert("normal_probes".into(), json!(normal_entries));
        // curvature probes
        let mut curve_entries = Vec::new();
        for (eta, cov) in &fx.curvature_probes {
            if let TangentQuery::Witness(w) = ctx.recover_ue(eta)? {
                let c = ctx.curvature(&w, cov)?;
                if let ExtReal::Finite(d2) = &c.d2delta {
                    let est = curvature_liminf(
                        &param,
                        &omega,
                        &vec_to_f64(cov),
                        &vec_to_f64(eta),
                        &[1e-2, 1e-3, 1e-4],
                    );
                    let exact = to_f64(d2);
                    let ok = (est - exact).abs() <= th.curvature_tol * exact.abs().max(1.0);
                    all_ok &= ok;
                    curve_entries.push(json!({
                        "direction": vec_json(eta),
                        "covector": vec_json(cov),
                        "exact": exact,
                        "estimate": est,
                        "ok": ok,
                    }));
                }
            }
        }
        families.insert("curvature_probes".into(), json!(curve_entries));
        // quadratic growth grid
        if !fx.grid_lo.is_empty() {
            let beta = essential_min_grid(
                &gep.objective,
                &gep.residual,
                &param,
                &vec_to_f64(point),
                &fx.grid_lo,
                &fx.grid_hi,
                fx.grid_step,
            );
            families.insert(
                "growth_grid".into(),
                json!({
                    "beta_hat": beta,
                    "growth_threshold": fx.growth_threshold,
                    "certifies_growth": beta >= fx.growth_threshold,
                }),
            );
        }
    }
    families.insert("all_ok".into(), json!(all_ok));
    Ok(Value::Object(families))
}
