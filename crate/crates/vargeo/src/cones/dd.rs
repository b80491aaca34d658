//! Double description: incremental conversion of a homogeneous inequality
//! system into (lineality basis, extreme rays).
//!
//! Inequalities are added one at a time. Rays are pruned after every step by
//! an exact rank test, so intermediate generator sets stay minimal.

use crate::linalg::{project_onto_span, rank, span_basis};
use crate::rat::{dot, is_zero_vec, primitive, vec_cmp, vscale, vsub, Rat, RatMat, RatVec};
use num_traits::Zero;
use std::cmp::Ordering;

/// Generators of `{x : a.x <= 0 for a in ineqs, e.x = 0 for e in eqs}`.
pub fn dual_description(
    dim: usize,
    ineqs: &[RatVec],
    eqs: &[RatVec],
) -> (Vec<RatVec>, Vec<RatVec>) {
    let mut lin: Vec<RatVec> = RatMat::identity(dim).row_vecs();
    let mut rays: Vec<RatVec> = Vec::new();
    let mut processed_eqs: Vec<RatVec> = Vec::new();
    let mut processed_ineqs: Vec<RatVec> = Vec::new();

    for e in eqs {
        add_equality(e, &mut lin, &mut rays);
        processed_eqs.push(e.clone());
        prune(&mut rays, &lin, &processed_ineqs, &processed_eqs, dim);
    }
    for a in ineqs {
        add_inequality(a, &mut lin, &mut rays);
        processed_ineqs.push(a.clone());
        prune(&mut rays, &lin, &processed_ineqs, &processed_eqs, dim);
    }
    (lin, rays)
}

fn add_equality(e: &RatVec, lin: &mut Vec<RatVec>, rays: &mut Vec<RatVec>) {
    if let Some(idx) = lin.iter().position(|l| !dot(e, l).is_zero()) {
        let l0 = lin.remove(idx);
        let d0 = dot(e, &l0);
        project_along(e, &d0, &l0, lin);
        project_along(e, &d0, &l0, rays);
    } else {
        *rays = combine_on_hyperplane(e, rays, false);
    }
}

fn add_inequality(a: &RatVec, lin: &mut Vec<RatVec>, rays: &mut Vec<RatVec>) {
    if let Some(idx) = lin.iter().position(|l| !dot(a, l).is_zero()) {
        let mut l0 = lin.remove(idx);
        let mut d0 = dot(a, &l0);
        if d0 > Rat::zero() {
            l0 = l0.iter().map(|x| -x).collect();
            d0 = -d0;
        }
        // now a.l0 < 0: the cone splits as (projection onto a-perp) + R+ l0
        project_along(a, &d0, &l0, lin);
        project_along(a, &d0, &l0, rays);
        rays.push(l0);
    } else {
        *rays = combine_on_hyperplane(a, rays, true);
    }
}

/// Replaces each `v` by `v - (a.v / a.l0) l0`, which lands on `a`-perp.
fn project_along(a: &RatVec, d0: &Rat, l0: &RatVec, vs: &mut [RatVec]) {
    for v in vs.iter_mut() {
        let c = dot(a, v) / d0;
        if !c.is_zero() {
            *v = vsub(v, &vscale(&c, l0));
        }
    }
}

/// One DD step with `a` orthogonal to the lineality space: keeps the
/// nonviolating rays and adds pairwise combinations landing on the
/// hyperplane. With `keep_minus` false both strict sides are discarded
/// (equality constraint).
fn combine_on_hyperplane(a: &RatVec, rays: &[RatVec], keep_minus: bool) -> Vec<RatVec> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut out = Vec::new();
    for r in rays {
        let v = dot(a, r);
        match v.cmp(&Rat::zero()) {
            Ordering::Greater => plus.push((r.clone(), v)),
            Ordering::Less => minus.push((r.clone(), v)),
            Ordering::Equal => out.push(r.clone()),
        }
    }
    if keep_minus {
        out.extend(minus.iter().map(|(r, _)| r.clone()));
    }
    for (rp, vp) in &plus {
        for (rm, vm) in &minus {
            // vp * rm - vm * rp: positive combination with a.w = 0
            let w = vsub(&vscale(vp, rm), &vscale(vm, rp));
            out.push(w);
        }
    }
    out
}

/// Reduces rays modulo the lineality space, rescales to primitive integer
/// form, removes duplicates and non-extreme rays (exact rank test against
/// the inequalities processed so far).
fn prune(
    rays: &mut Vec<RatVec>,
    lin: &[RatVec],
    processed_ineqs: &[RatVec],
    processed_eqs: &[RatVec],
    dim: usize,
) {
    let lin_basis = span_basis(lin);
    let lin_dim = lin_basis.len();
    let mut reduced: Vec<RatVec> = Vec::new();
    'outer: for r in rays.iter() {
        let mut v = if lin_basis.is_empty() {
            r.clone()
        } else {
            vsub(r, &project_onto_span(&lin_basis, r))
        };
        if is_zero_vec(&v) {
            continue; // ray absorbed by the lineality space
        }
        v = primitive(&v);
        if reduced.iter().any(|u| *u == v) {
            continue;
        }
        // extremality: active constraints must pin down exactly lin + [v]
        let mut active: Vec<RatVec> = processed_eqs.to_vec();
        for a in processed_ineqs {
            if dot(a, &v).is_zero() {
                active.push(a.clone());
            }
        }
        let active_rank = if active.is_empty() {
            0
        } else {
            rank(&RatMat::from_rows(active))
        };
        if dim - active_rank != lin_dim + 1 {
            continue 'outer; // not an extreme ray of the current cone
        }
        reduced.push(v);
    }
    reduced.sort_by(|a, b| vec_cmp(a, b));
    *rays = reduced;
}

/// Canonicalizes a generator pair: RREF lineality basis; rays reduced
/// modulo the lineality, primitive, sorted, deduplicated.
pub fn canonical_generators(
    lin: Vec<RatVec>,
    rays: Vec<RatVec>,
) -> (Vec<RatVec>, Vec<RatVec>) {
    let lin_basis = span_basis(&lin);
    let mut out: Vec<RatVec> = Vec::new();
    for r in rays {
        let mut v = if lin_basis.is_empty() {
            r
        } else {
            vsub(&r, &project_onto_span(&lin_basis, &r))
        };
        if is_zero_vec(&v) {
            continue;
        }
        v = primitive(&v);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| vec_cmp(a, b));
    (lin_basis, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;

    #[test]
    fn negative_orthant() {
        let ineqs = vec![vec![rint(1), rint(0)], vec![rint(0), rint(1)]];
        let (lin, rays) = dual_description(2, &ineqs, &[]);
        assert!(lin.is_empty());
        let mut rays = rays;
        rays.sort_by(|a, b| vec_cmp(a, b));
        assert_eq!(
            rays,
            vec![vec![rint(-1), rint(0)], vec![rint(0), rint(-1)]]
        );
    }

    #[test]
    fn full_space() {
        let (lin, rays) = dual_description(2, &[], &[]);
        assert_eq!(span_basis(&lin).len(), 2);
        assert!(rays.is_empty());
    }

    #[test]
    fn halfplane_cone() {
        // x1 + x2 <= 0, -x1 <= 0 -> rays (0,-1) and (1,-1)
        let ineqs = vec![vec![rint(1), rint(1)], vec![rint(-1), rint(0)]];
        let (lin, rays) = dual_description(2, &ineqs, &[]);
        assert!(lin.is_empty());
        let mut rays = rays;
        rays.sort_by(|a, b| vec_cmp(a, b));
        assert_eq!(rays, vec![vec![rint(0), rint(-1)], vec![rint(1), rint(-1)]]);
    }

    #[test]
    fn equality_collapses() {
        // x1 = 0 in R^2 -> line {0} x R
        let (lin, rays) = dual_description(2, &[], &[vec![rint(1), rint(0)]]);
        let b = span_basis(&lin);
        assert_eq!(b.len(), 1);
        assert!(rays.is_empty());
        assert!(b[0][0].is_zero());
    }
}

