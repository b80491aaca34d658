//! Problem-file parsing: JSON with rational-string scalars for every
//! exact-path field. Float literals are rejected outside the oracle
//! fixtures.

use serde_json::Value;
use vargeo::cones::ConvexPolyhedron;
use vargeo::error::Error;
use vargeo::io::{rat_from_value, rat_vec_from_value};
use vargeo::oracle::{Chart, FeasibleParameterization};
use vargeo::optimality::{GepProblem, MpviProblem};
use vargeo::poly::{Monomial, PolyMap};
use vargeo::rat::RatVec;

#[derive(Clone, Debug)]
pub enum ProblemKind {
    Gep(GepProblem),
    Mpvi(MpviProblem),
}

/// Oracle fixture block: charts for the feasible parameterization, the
/// growth grid, and labeled probe directions.
#[derive(Clone, Debug, Default)]
pub struct Fixtures {
    pub charts: Vec<Chart>,
    pub grid_lo: Vec<f64>,
    pub grid_hi: Vec<f64>,
    pub grid_step: f64,
    pub growth_threshold: f64,
    pub tangent_accept: Vec<RatVec>,
    pub tangent_reject: Vec<RatVec>,
    pub normal_probes: Vec<(RatVec, RatVec, bool)>, // (direction, covector, expected)
    pub curvature_probes: Vec<(RatVec, RatVec)>,    // (direction, covector)
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub kind: ProblemKind,
    pub points: Vec<RatVec>,
    pub directions: Vec<RatVec>,
    pub fixtures: Option<Fixtures>,
    pub raw: Value,
}

impl ProblemFile {
    pub fn ambient_dim(&self) -> usize {
        match &self.kind {
            ProblemKind::Gep(p) => p.n_dim(),
            ProblemKind::Mpvi(p) => p.n1 + p.n2,
        }
    }

    /// The generalized-equation form (the reduction for VI problems).
    pub fn as_gep(&self) -> Result<GepProblem, Error> {
        match &self.kind {
            ProblemKind::Gep(p) => Ok(p.clone()),
            ProblemKind::Mpvi(p) => p.reduce(),
        }
    }

    pub fn parameterization(&self) -> Option<FeasibleParameterization> {
        let fx = self.fixtures.as_ref()?;
        if fx.charts.is_empty() {
            return None;
        }
        let gep = self.as_gep().ok()?;
        Some(FeasibleParameterization::new(
            gep.n_dim() + gep.m_dim,
            fx.charts.clone(),
        ))
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| perr(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize, Error> {
    get(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| perr(format!("`{key}` must be a nonnegative integer")))
}

fn parse_monomial(v: &Value, dim: usize) -> Result<Monomial, Error> {
    let coeff = rat_from_value(get(v, "coeff")?).map_err(perr)?;
    let exps_v = get(v, "exps")?
        .as_array()
        .ok_or_else(|| perr("`exps` must be an array"))?;
    let exps: Vec<u32> = exps_v
        .iter()
        .map(|e| {
            e.as_u64()
                .map(|x| x as u32)
                .ok_or_else(|| perr("exponents must be nonnegative integers"))
        })
        .collect::<Result<_, _>>()?;
    if exps.len() != dim {
        return Err(perr(format!(
            "exponent vector length {} != expected {dim}",
            exps.len()
        )));
    }
    Ok(Monomial { coeff, exps })
}

fn parse_poly_component(v: &Value, dim: usize) -> Result<Vec<Monomial>, Error> {
    v.as_array()
        .ok_or_else(|| perr("polynomial component must be an array of monomials"))?
        .iter()
        .map(|m| parse_monomial(m, dim))
        .collect()
}

/// A scalar polynomial (one component).
fn parse_scalar_poly(v: &Value, dim: usize) -> Result<PolyMap, Error> {
    PolyMap::new(dim, vec![parse_poly_component(v, dim)?])
}

/// A vector polynomial map: array of components.
fn parse_poly_map(v: &Value, dim: usize) -> Result<PolyMap, Error> {
    let comps = v
        .as_array()
        .ok_or_else(|| perr("polynomial map must be an array of components"))?
        .iter()
        .map(|c| parse_poly_component(c, dim))
        .collect::<Result<Vec<_>, _>>()?;
    PolyMap::new(dim, comps)
}

fn parse_polyhedron(v: &Value, dim: usize) -> Result<ConvexPolyhedron, Error> {
    let rows = |key: &str| -> Result<Vec<(RatVec, vargeo::rat::Rat)>, Error> {
        match v.get(key) {
            None => Ok(vec![]),
            Some(arr) => arr
                .as_array()
                .ok_or_else(|| perr(format!("`{key}` must be an array")))?
                .iter()
                .map(|row| {
                    let r = rat_vec_from_value(get(row, "row")?).map_err(perr)?;
                    if r.len() != dim {
                        return Err(perr("polyhedron row has wrong dimension"));
                    }
                    let rhs = rat_from_value(get(row, "rhs")?).map_err(perr)?;
                    Ok((r, rhs))
                })
                .collect(),
        }
    };
    Ok(ConvexPolyhedron::from_hrep(
        dim,
        rows("inequalities")?,
        rows("equalities")?,
    ))
}

fn parse_rat_vecs(v: &Value, dim: usize, what: &str) -> Result<Vec<RatVec>, Error> {
    v.as_array()
        .ok_or_else(|| perr(format!("`{what}` must be an array")))?
        .iter()
        .map(|p| {
            let x = rat_vec_from_value(p).map_err(perr)?;
            if x.len() != dim {
                return Err(perr(format!("{what} entry has wrong dimension")));
            }
            Ok(x)
        })
        .collect()
}

fn parse_f64_vec(v: &Value, what: &str) -> Result<Vec<f64>, Error> {
    v.as_array()
        .ok_or_else(|| perr(format!("`{what}` must be an array")))?
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| perr(format!("`{what}` entries must be numbers")))
        })
        .collect()
}

fn parse_fixtures(
    v: &Value,
    param_ambient: usize,
    tangent_dim: usize,
) -> Result<Fixtures, Error> {
    let mut fx = Fixtures::default();
    if let Some(charts) = v.get("charts") {
        for c in charts
            .as_array()
            .ok_or_else(|| perr("`charts` must be an array"))?
        {
            let lo = parse_f64_vec(get(c, "lo")?, "lo")?;
            let hi = parse_f64_vec(get(c, "hi")?, "hi")?;
            let map = parse_poly_map(get(c, "map")?, lo.len())?;
            if map.dim_out != param_ambient {
                return Err(perr("chart map has wrong ambient dimension"));
            }
            fx.charts.push(Chart { lo, hi, map });
        }
    }
    if let Some(grid) = v.get("grid") {
        fx.grid_lo = parse_f64_vec(get(grid, "lo")?, "grid lo")?;
        fx.grid_hi = parse_f64_vec(get(grid, "hi")?, "grid hi")?;
        fx.grid_step = get(grid, "step")?
            .as_f64()
            .ok_or_else(|| perr("grid step must be a number"))?;
        fx.growth_threshold = grid
            .get("growth_threshold")
            .and_then(|x| x.as_f64())
            .unwrap_or(0.0);
    }
    if let Some(t) = v.get("tangent_accept") {
        fx.tangent_accept = parse_rat_vecs(t, tangent_dim, "tangent_accept")?;
    }
    if let Some(t) = v.get("tangent_reject") {
        fx.tangent_reject = parse_rat_vecs(t, tangent_dim, "tangent_reject")?;
    }
    if let Some(probes) = v.get("normal_probes") {
        for p in probes
            .as_array()
            .ok_or_else(|| perr("`normal_probes` must be an array"))?
        {
            let dir = rat_vec_from_value(get(p, "direction")?).map_err(perr)?;
            let cov = rat_vec_from_value(get(p, "covector")?).map_err(perr)?;
            let expect = get(p, "expect")?
                .as_bool()
                .ok_or_else(|| perr("`expect` must be a boolean"))?;
            fx.normal_probes.push((dir, cov, expect));
        }
    }
    if let Some(probes) = v.get("curvature_probes") {
        for p in probes
            .as_array()
            .ok_or_else(|| perr("`curvature_probes` must be an array"))?
        {
            let dir = rat_vec_from_value(get(p, "direction")?).map_err(perr)?;
            let cov = rat_vec_from_value(get(p, "covector")?).map_err(perr)?;
            fx.curvature_probes.push((dir, cov));
        }
    }
    Ok(fx)
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, Error> {
    let raw: Value =
        serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))?;
    let kind_str = get(&raw, "kind")?
        .as_str()
        .ok_or_else(|| perr("`kind` must be a string"))?
        .to_string();
    let dims = get(&raw, "dimensions")?;
    let (kind, n, tangent_dim) = match kind_str.as_str() {
        "gep" => {
            let n = as_usize(dims, "n")?;
            let m = as_usize(dims, "m")?;
            let l = as_usize(dims, "l")?;
            let objective = parse_scalar_poly(get(&raw, "objective")?, n)?;
            let residual = parse_poly_map(get(&raw, "residual")?, n)?;
            if residual.dim_out != m {
                return Err(perr("residual component count != m"));
            }
            let g = parse_poly_map(get(&raw, "g")?, n)?;
            if g.dim_out != l {
                return Err(perr("g component count != l"));
            }
            // b: l rows of m polynomial entries
            let b_rows = get(&raw, "b")?
                .as_array()
                .ok_or_else(|| perr("`b` must be an l x m array"))?;
            if b_rows.len() != l {
                return Err(perr("`b` row count != l"));
            }
            let mut b_comps = Vec::with_capacity(l * m);
            for row in b_rows {
                let cols = row
                    .as_array()
                    .ok_or_else(|| perr("`b` rows must be arrays"))?;
                if cols.len() != m {
                    return Err(perr("`b` column count != m"));
                }
                for cell in cols {
                    b_comps.push(parse_poly_component(cell, n)?);
                }
            }
            let b = PolyMap::new(n, b_comps)?;
            let p = parse_polyhedron(get(&raw, "p")?, l)?;
            let gep = GepProblem::new(objective, residual, g, b, m, p)?;
            (ProblemKind::Gep(gep), n, n + m)
        }
        "mpvi" => {
            let n1 = as_usize(dims, "n1")?;
            let n2 = as_usize(dims, "n2")?;
            let l = as_usize(dims, "l")?;
            let n = n1 + n2;
            let objective = parse_scalar_poly(get(&raw, "objective")?, n)?;
            let residual = parse_poly_map(get(&raw, "residual")?, n)?;
            if residual.dim_out != n2 {
                return Err(perr("residual component count != n2"));
            }
            let psi = parse_poly_map(get(&raw, "psi")?, n)?;
            if psi.dim_out != l {
                return Err(perr("psi component count != l"));
            }
            let convexity_attested = raw
                .get("convexity_attested")
                .and_then(|x| x.as_bool())
                .unwrap_or(false);
            let mpvi = MpviProblem {
                objective,
                residual,
                psi,
                n1,
                n2,
                convexity_attested,
            };
            (ProblemKind::Mpvi(mpvi), n, n + n2)
        }
        other => return Err(perr(format!("unknown kind `{other}`"))),
    };
    let points = match raw.get("points") {
        Some(p) => parse_rat_vecs(p, n, "points")?,
        None => vec![],
    };
    let directions = match raw.get("directions") {
        Some(d) => parse_rat_vecs(d, n, "directions")?,
        None => vec![],
    };
    let fixtures = match raw.get("fixtures") {
        Some(f) => Some(parse_fixtures(f, tangent_dim, tangent_dim)?),
        None => None,
    };
    Ok(ProblemFile {
        kind,
        points,
        directions,
        fixtures,
        raw,
    })
}
