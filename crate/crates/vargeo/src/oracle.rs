//! Sampling-based geometric oracles that independently validate the exact
//! formulas at desk scale: tangent and second-order tangent probing,
//! directional normal probing, curvature liminf estimation, a quadratic
//! growth grid, derivative checks, and an exact small-shift membership
//! test for graph tangency.
//!
//! The exact core never depends on this module; everything here is a
//! falsifier, not a proof.

use crate::cones::ConvexPolyhedron;
use crate::error::{Error, Result};
use crate::gph::{gph_member, GphDirection, GphPoint};
use crate::poly::PolyMap;
use crate::rat::{dot, to_f64, vadd, vscale, Rat, RatVec};
use num_traits::Zero;
use rand::Rng;

/// All oracle thresholds in one place; the acceptance suite cites these
/// exact values.
#[derive(Clone, Copy, Debug)]
pub struct Thresholds {
    /// tangent probe: accept when the last residual is below ratio * t
    pub tangent_ratio: f64,
    /// second-order probe: accept below ratio * t^2
    pub second_tangent_ratio: f64,
    /// directional normal probe approach distance
    pub normal_approach: f64,
    /// curvature liminf agreement with the exact value
    pub curvature_tol: f64,
    /// derivative agreement with central differences (relative)
    pub derivative_rel_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tangent_ratio: 1e-3,
            second_tangent_ratio: 1e-3,
            normal_approach: 1e-4,
            curvature_tol: 1e-4,
            derivative_rel_tol: 1e-6,
        }
    }
}

// ---------------------------------------------------------------------------
// feasible parameterizations

/// One analytic chart: a polynomial map on a parameter box whose image
/// lies in the feasible set.
#[derive(Clone, Debug)]
pub struct Chart {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub map: PolyMap,
}

impl Chart {
    pub fn param_dim(&self) -> usize {
        self.map.dim_in
    }
}

/// A finite chart atlas covering the feasible set near the reference point.
#[derive(Clone, Debug)]
pub struct FeasibleParameterization {
    pub ambient_dim: usize,
    pub charts: Vec<Chart>,
}

/// Result of a nearest-point query.
#[derive(Clone, Debug)]
pub struct Projection {
    pub point: Vec<f64>,
    pub params: Vec<f64>,
    pub chart_id: usize,
    pub dist: f64,
}

impl FeasibleParameterization {
    pub fn new(ambient_dim: usize, charts: Vec<Chart>) -> FeasibleParameterization {
        for c in &charts {
            assert_eq!(c.map.dim_out, ambient_dim, "chart has wrong ambient dim");
            assert_eq!(c.lo.len(), c.map.dim_in);
            assert_eq!(c.hi.len(), c.map.dim_in);
        }
        FeasibleParameterization {
            ambient_dim,
            charts,
        }
    }

    /// Nearest point of the chart atlas to `target`: multi-start damped
    /// Gauss-Newton with box clipping per chart, best over charts.
    pub fn project(&self, target: &[f64]) -> Projection {
        let mut best: Option<Projection> = None;
        for (chart_id, chart) in self.charts.iter().enumerate() {
            let (params, point, dist) = project_chart(chart, target);
            if best.as_ref().is_none_or(|b| dist < b.dist) {
                best = Some(Projection {
                    point,
                    params,
                    chart_id,
                    dist,
                });
            }
        }
        best.expect("parameterization has at least one chart")
    }

    pub fn dist(&self, target: &[f64]) -> f64 {
        self.project(target).dist
    }
}

fn starts_per_dim(dim: usize) -> usize {
    match dim {
        0 | 1 => 17,
        2 => 7,
        3 => 5,
        _ => 3,
    }
}

fn project_chart(chart: &Chart, target: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let dim = chart.param_dim();
    if dim == 0 {
        let point = chart.map.eval_f64(&[]);
        let dist = l2_dist(&point, target);
        return (vec![], point, dist);
    }
    let k = starts_per_dim(dim);
    let mut grid_indices = vec![0usize; dim];
    let mut best_p: Vec<f64> = chart.lo.clone();
    let mut best_d = f64::INFINITY;
    loop {
        let p: Vec<f64> = (0..dim)
            .map(|i| {
                let f = grid_indices[i] as f64 / (k - 1) as f64;
                chart.lo[i] + f * (chart.hi[i] - chart.lo[i])
            })
            .collect();
        let d = l2_dist(&chart.map.eval_f64(&p), target);
        if d < best_d {
            best_d = d;
            best_p = p;
        }
        // advance the mixed-radix counter
        let mut carry = true;
        for idx in grid_indices.iter_mut() {
            if carry {
                *idx += 1;
                if *idx == k {
                    *idx = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    let p = gauss_newton_refine(chart, target, best_p);
    let point = chart.map.eval_f64(&p);
    let dist = l2_dist(&point, target);
    (p, point, dist)
}

fn gauss_newton_refine(chart: &Chart, target: &[f64], mut p: Vec<f64>) -> Vec<f64> {
    let dim = chart.param_dim();
    let clip = |p: &mut Vec<f64>| {
        for i in 0..dim {
            p[i] = p[i].clamp(chart.lo[i], chart.hi[i]);
        }
    };
    clip(&mut p);
    let obj = |p: &[f64]| -> f64 {
        let r = chart.map.eval_f64(p);
        r.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum()
    };
    let mut f0 = obj(&p);
    for _ in 0..80 {
        let r: Vec<f64> = chart
            .map
            .eval_f64(&p)
            .iter()
            .zip(target)
            .map(|(a, b)| a - b)
            .collect();
        let jac = chart.map.jacobian_f64(&p);
        // normal equations with Levenberg damping
        let mut a = vec![vec![0.0; dim]; dim];
        let mut g = vec![0.0; dim];
        for i in 0..dim {
            for j in 0..dim {
                a[i][j] = jac.iter().map(|row| row[i] * row[j]).sum();
            }
            a[i][i] += 1e-12;
            g[i] = jac.iter().zip(&r).map(|(row, ri)| row[i] * ri).sum();
        }
        let Some(step) = solve_f64(&a, &g) else { break };
        // backtracking line search on the clipped step
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let mut q = p.clone();
            for i in 0..dim {
                q[i] -= t * step[i];
            }
            clip(&mut q);
            let fq = obj(&q);
            if fq < f0 {
                p = q;
                f0 = fq;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved || f0 < 1e-28 {
            break;
        }
    }
    p
}

fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[piv][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, piv);
        for i in 0..n {
            if i != c {
                let f = m[i][c] / m[c][c];
                for j in c..=n {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn l2_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// probes

/// Residual profile of a first- or second-order probe.
#[derive(Clone, Debug)]
pub struct ResidualProfile {
    pub ts: Vec<f64>,
    pub residuals: Vec<f64>,
    pub accepted: bool,
}

/// First-order probe: distances from `z + t u` to the set for a log grid
/// of step sizes; accepted when the final residual is below `ratio * t`.
pub fn tangent_probe(
    param: &FeasibleParameterization,
    z: &[f64],
    u: &[f64],
    steps: usize,
    thresholds: &Thresholds,
) -> ResidualProfile {
    let mut ts = Vec::new();
    let mut residuals = Vec::new();
    for k in 1..=steps {
        let t = 10f64.powi(-(k as i32));
        let probe: Vec<f64> = z.iter().zip(u).map(|(zi, ui)| zi + t * ui).collect();
        ts.push(t);
        residuals.push(param.dist(&probe));
    }
    let accepted = residuals
        .last()
        .zip(ts.last())
        .map(|(r, t)| *r <= thresholds.tangent_ratio * t)
        .unwrap_or(false);
    ResidualProfile {
        ts,
        residuals,
        accepted,
    }
}

/// Second-order probe along `z + t u + (t^2/2) v`, threshold `ratio * t^2`.
pub fn second_tangent_probe(
    param: &FeasibleParameterization,
    z: &[f64],
    u: &[f64],
    v: &[f64],
    steps: usize,
    thresholds: &Thresholds,
) -> ResidualProfile {
    let mut ts = Vec::new();
    let mut residuals = Vec::new();
    for k in 1..=steps {
        let t = 10f64.powi(-(k as i32));
        let probe: Vec<f64> = z
            .iter()
            .zip(u.iter().zip(v))
            .map(|(zi, (ui, vi))| zi + t * ui + 0.5 * t * t * vi)
            .collect();
        ts.push(t);
        residuals.push(param.dist(&probe));
    }
    let accepted = residuals
        .last()
        .zip(ts.last())
        .map(|(r, t)| *r <= thresholds.second_tangent_ratio * t * t)
        .unwrap_or(false);
    ResidualProfile {
        ts,
        residuals,
        accepted,
    }
}

/// Directional normal probe: walks feasible points along perturbations of
/// the direction and tests whether `z*` is approached by proximal normals
/// (projection displacement test). Returns the best approach distance.
pub fn dir_normal_probe(
    param: &FeasibleParameterization,
    z: &[f64],
    u: &[f64],
    zstar: &[f64],
    trials: usize,
    rng: &mut impl Rng,
    thresholds: &Thresholds,
) -> (f64, bool) {
    let scale = l2_norm(zstar).max(1.0);
    let s = 1e-3;
    let mut best = f64::INFINITY;
    for k in 1..=5 {
        let t = 10f64.powi(-k);
        for trial in 0..trials.max(1) {
            let mut dir: Vec<f64> = u.to_vec();
            if trial > 0 {
                // directional-neighborhood perturbation
                let rho = 0.05 * l2_norm(u).max(1e-9);
                for d in dir.iter_mut() {
                    *d += rng.gen_range(-rho..rho);
                }
            }
            let probe: Vec<f64> = z.iter().zip(&dir).map(|(zi, di)| zi + t * di).collect();
            let base = param.project(&probe);
            let shifted: Vec<f64> = base
                .point
                .iter()
                .zip(zstar)
                .map(|(xi, ni)| xi + s * ni)
                .collect();
            let back = param.project(&shifted);
            let displacement = l2_dist(&back.point, &base.point) / s;
            best = best.min(displacement);
        }
    }
    (best, best <= thresholds.normal_approach * scale)
}

/// Estimate of the second subderivative of the indicator: the liminf of
/// `-2 <z*, u'> / t` over feasible `z + t u'` with `u'` near `u`. Minimizes
/// over each chart by pattern search constrained to a shrinking
/// neighborhood, then extrapolates the two finest grid levels.
pub fn curvature_liminf(
    param: &FeasibleParameterization,
    z: &[f64],
    zstar: &[f64],
    u: &[f64],
    grid: &[f64],
) -> f64 {
    let mut estimates = Vec::new();
    for &t in grid {
        let radius = (4.0 * (1.0 + l2_norm(u))) * t;
        let mut best = f64::INFINITY;
        for chart in &param.charts {
            if let Some(v) = minimize_quotient(chart, z, zstar, u, t, radius) {
                best = best.min(v);
            }
        }
        estimates.push(best);
    }
    // Richardson extrapolation of the O(t) error using the two finest
    // levels (grid assumed decreasing, consecutive ratio 10)
    let n = estimates.len();
    if n >= 2 && estimates[n - 1].is_finite() && estimates[n - 2].is_finite() {
        (10.0 * estimates[n - 1] - estimates[n - 2]) / 9.0
    } else {
        estimates[n - 1]
    }
}

/// Minimizes `-2 <z*, (chart(p) - z)/t> / t` subject to
/// `|(chart(p) - z)/t - u| <= radius` by projected pattern search from the
/// best feasible grid start.
fn minimize_quotient(
    chart: &Chart,
    z: &[f64],
    zstar: &[f64],
    u: &[f64],
    t: f64,
    radius: f64,
) -> Option<f64> {
    let dim = chart.param_dim();
    let uprime = |p: &[f64]| -> Vec<f64> {
        chart
            .map
            .eval_f64(p)
            .iter()
            .zip(z)
            .map(|(c, zi)| (c - zi) / t)
            .collect()
    };
    let feasible = |p: &[f64]| l2_dist(&uprime(p), u) <= radius;
    let objective = |p: &[f64]| -> f64 {
        let up = uprime(p);
        -2.0 * up.iter().zip(zstar).map(|(a, b)| a * b).sum::<f64>() / t
    };
    // start from the projection of z + t*u onto the chart
    let target: Vec<f64> = z.iter().zip(u).map(|(zi, ui)| zi + t * ui).collect();
    let (p0, _, _) = project_chart(chart, &target);
    let mut p = p0;
    if !feasible(&p) {
        return None;
    }
    let mut f0 = objective(&p);
    if dim == 0 {
        return Some(f0);
    }
    let mut step = t; // parameter scale comparable to the neighborhood
    for _ in 0..200 {
        let mut improved = false;
        for i in 0..dim {
            for sgn in [1.0, -1.0] {
                let mut q = p.clone();
                q[i] = (q[i] + sgn * step).clamp(chart.lo[i], chart.hi[i]);
                if feasible(&q) {
                    let fq = objective(&q);
                    if fq < f0 - 1e-15 {
                        p = q;
                        f0 = fq;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 * t.max(1e-9) {
                break;
            }
        }
    }
    Some(f0)
}

/// Quadratic-growth grid oracle: the minimum over grid points of
/// `max(f(x) - f(xbar), dist(phi(x), set)) / |x - xbar|^2`, with
/// `phi(x) = (x, -F(x))`.
pub fn essential_min_grid(
    objective: &PolyMap,
    residual: &PolyMap,
    param: &FeasibleParameterization,
    xbar: &[f64],
    lo: &[f64],
    hi: &[f64],
    step: f64,
) -> f64 {
    let n = xbar.len();
    assert_eq!(lo.len(), n);
    let f0 = objective.eval_f64(xbar)[0];
    let counts: Vec<usize> = (0..n)
        .map(|i| ((hi[i] - lo[i]) / step).round() as usize + 1)
        .collect();
    let mut idx = vec![0usize; n];
    let mut beta = f64::INFINITY;
    loop {
        let x: Vec<f64> = (0..n).map(|i| lo[i] + idx[i] as f64 * step).collect();
        let dx2: f64 = x
            .iter()
            .zip(xbar)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if dx2 > 1e-18 {
            let fx = objective.eval_f64(&x)[0];
            let mut phi = x.clone();
            phi.extend(residual.eval_f64(&x).iter().map(|v| -v));
            let violation = param.dist(&phi);
            let ratio = (fx - f0).max(violation) / dx2;
            beta = beta.min(ratio);
        }
        let mut carry = true;
        for i in 0..n {
            if carry {
                idx[i] += 1;
                if idx[i] == counts[i] {
                    idx[i] = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    beta
}

// ---------------------------------------------------------------------------
// derivative checks

/// Central-difference report for one polynomial map at one point.
#[derive(Clone, Debug)]
pub struct DerivativeReport {
    pub max_jacobian_rel_err: f64,
    pub max_hessian_rel_err: f64,
    pub ok: bool,
}

pub fn fd_derivative_check(
    p: &PolyMap,
    z: &RatVec,
    w: &RatVec,
    thresholds: &Thresholds,
) -> Result<DerivativeReport> {
    let zf: Vec<f64> = z.iter().map(to_f64).collect();
    let wf: Vec<f64> = w.iter().map(to_f64).collect();
    let jac = p.jacobian(z)?;
    let h = 1e-5;
    let mut max_jac = 0.0f64;
    for k in 0..p.dim_in {
        let mut zp = zf.clone();
        let mut zm = zf.clone();
        zp[k] += h;
        zm[k] -= h;
        let vp = p.eval_f64(&zp);
        let vm = p.eval_f64(&zm);
        for i in 0..p.dim_out {
            let fd = (vp[i] - vm[i]) / (2.0 * h);
            let exact = to_f64(&jac[(i, k)]);
            let rel = (fd - exact).abs() / exact.abs().max(1.0);
            max_jac = max_jac.max(rel);
        }
    }
    let hess = p.hessian_form(z, w)?;
    let hh = 1e-4;
    let base = p.eval_f64(&zf);
    let zp: Vec<f64> = zf.iter().zip(&wf).map(|(a, b)| a + hh * b).collect();
    let zm: Vec<f64> = zf.iter().zip(&wf).map(|(a, b)| a - hh * b).collect();
    let vp = p.eval_f64(&zp);
    let vm = p.eval_f64(&zm);
    let mut max_hess = 0.0f64;
    for i in 0..p.dim_out {
        let fd = (vp[i] - 2.0 * base[i] + vm[i]) / (hh * hh);
        let exact = to_f64(&hess[i]);
        let rel = (fd - exact).abs() / exact.abs().max(1.0);
        max_hess = max_hess.max(rel);
    }
    let ok = max_jac <= thresholds.derivative_rel_tol && max_hess <= thresholds.derivative_rel_tol;
    Ok(DerivativeReport {
        max_jacobian_rel_err: max_jac,
        max_hessian_rel_err: max_hess,
        ok,
    })
}

// ---------------------------------------------------------------------------
// exact small-shift membership (reduction-lemma oracle)

/// Decides `(pt + s * probe) in gph N_P` for all sufficiently small
/// `s > 0`, by computing the positive breakpoints of every affine sign
/// condition and evaluating exact graph membership at half the smallest.
pub fn small_shift_membership(
    p: &ConvexPolyhedron,
    pt: &GphPoint,
    probe: &GphDirection,
) -> Result<bool> {
    if !gph_member(p, &pt.d, &pt.dstar) {
        return Err(Error::NotMember("base pair not in gph N_P".into()));
    }
    let mut breakpoints: Vec<Rat> = Vec::new();
    // polyhedron side: slack_i / <a_i, e> for strictly decreasing slacks
    for (row, rhs) in &p.ineqs {
        let slack = rhs - dot(row, &pt.d);
        let speed = dot(row, &probe.e);
        if slack > Rat::zero() && speed > Rat::zero() {
            breakpoints.push(slack / speed);
        }
    }
    // normal-cone side: the active set is constant for small s; facet
    // functions of the resulting cone are affine in s
    let active: Vec<RatVec> = p
        .ineqs
        .iter()
        .filter(|(row, rhs)| dot(row, &pt.d) == *rhs && dot(row, &probe.e).is_zero())
        .map(|(row, _)| row.clone())
        .collect();
    let eq_rows: Vec<RatVec> = p.eqs.iter().map(|(row, _)| row.clone()).collect();
    let cone = crate::cones::ConvexCone::from_vrep(p.dim, active, eq_rows);
    for h in cone.ineqs.iter().chain(&cone.eqs) {
        let at = dot(h, &pt.dstar);
        let speed = dot(h, &probe.estar);
        if !speed.is_zero() {
            let root = -&at / &speed;
            if root > Rat::zero() {
                breakpoints.push(root);
            }
        }
    }
    let s0 = breakpoints
        .into_iter()
        .min()
        .map(|b| b / Rat::from_integer(2.into()))
        .unwrap_or_else(|| Rat::from_integer(1.into()));
    let d = vadd(&pt.d, &vscale(&s0, &probe.e));
    let dstar = vadd(&pt.dstar, &vscale(&s0, &probe.estar));
    Ok(gph_member(p, &d, &dstar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::rat::{rat, rint};

    fn mono(c: i64, exps: Vec<u32>) -> Monomial {
        Monomial {
            coeff: rint(c),
            exps,
        }
    }

    /// Charts for the feasible set of the toy instance in the graph space
    /// of the stationarity map: the set
    /// `(R_- x {0}) u ({0} x R_+)` embedded as the first two coordinates.
    fn complementarity_charts() -> FeasibleParameterization {
        // branch 1: (s, 0) for s in [-1, 0]
        let c1 = Chart {
            lo: vec![-1.0],
            hi: vec![0.0],
            map: PolyMap::new(1, vec![vec![mono(1, vec![1])], vec![]]).unwrap(),
        };
        // branch 2: (0, s) for s in [0, 1]
        let c2 = Chart {
            lo: vec![0.0],
            hi: vec![1.0],
            map: PolyMap::new(1, vec![vec![], vec![mono(1, vec![1])]]).unwrap(),
        };
        FeasibleParameterization::new(2, vec![c1, c2])
    }

    #[test]
    fn tangent_probe_flat_pieces() {
        let param = complementarity_charts();
        let th = Thresholds::default();
        let accept = tangent_probe(&param, &[0.0, 0.0], &[-1.0, 0.0], 4, &th);
        assert!(accept.accepted);
        assert!(accept.residuals.iter().all(|r| *r < 1e-9));
        let reject = tangent_probe(&param, &[0.0, 0.0], &[1.0, 0.0], 4, &th);
        assert!(!reject.accepted);
        // residual for an outward direction stays proportional to t
        let last = *reject.residuals.last().unwrap();
        assert!(last > 0.5 * 1e-4);
    }

    #[test]
    fn normal_probe_scalar_graph() {
        let param = complementarity_charts();
        let th = Thresholds::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        use rand::SeedableRng;
        // zero covector is always accepted
        let (_, ok) = dir_normal_probe(&param, &[0.0, 0.0], &[-1.0, 0.0], &[0.0, 0.0], 3, &mut rng, &th);
        assert!(ok);
        // (0,1) is a limiting normal along u = (-1,0)
        let (_, ok) = dir_normal_probe(&param, &[0.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], 3, &mut rng, &th);
        assert!(ok);
        // (1,0) is not
        let (d, ok) =
            dir_normal_probe(&param, &[0.0, 0.0], &[-1.0, 0.0], &[1.0, 0.0], 3, &mut rng, &th);
        assert!(!ok, "approach distance {d}");
    }

    #[test]
    fn curvature_flat_is_zero() {
        let param = complementarity_charts();
        let est = curvature_liminf(
            &param,
            &[0.0, 0.0],
            &[0.0, 1.0],
            &[-1.0, 0.0],
            &[1e-2, 1e-3, 1e-4],
        );
        assert!(est.abs() < 1e-6, "estimate {est}");
    }

    #[test]
    fn derivative_check_quadratic() {
        let p = PolyMap::new(
            2,
            vec![vec![mono(1, vec![2, 0]), mono(3, vec![1, 1])]],
        )
        .unwrap();
        let rep = fd_derivative_check(
            &p,
            &vec![rat(1, 3), rat(-2, 5)],
            &vec![rint(1), rint(2)],
            &Thresholds::default(),
        )
        .unwrap();
        assert!(rep.ok, "jac {} hess {}", rep.max_jacobian_rel_err, rep.max_hessian_rel_err);
    }

    #[test]
    fn small_shift_agrees_with_tangency() {
        let p = ConvexPolyhedron::negative_orthant(1);
        let pt = GphPoint::new(vec![rint(0)], vec![rint(0)]);
        // members of the tangent cone of the graph
        for (e, es, expect) in [
            (-1, 0, true),
            (0, 1, true),
            (0, 0, true),
            (1, 0, false),
            (-1, 1, false),
            (0, -1, false),
        ] {
            let probe = GphDirection::new(vec![rint(e)], vec![rint(es)]);
            assert_eq!(
                small_shift_membership(&p, &pt, &probe).unwrap(),
                expect,
                "probe ({e},{es})"
            );
        }
    }
}
