//! Multivariate polynomial maps with exact rational coefficients.
//!
//! Sparse monomial representation with canonical exponent ordering.
//! Derivatives are exact; a float shadow evaluation backs the oracles.

use crate::error::Error;
use crate::rat::{rat_to_string, to_f64, zeros, Rat, RatMat, RatVec};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// One term `coeff * x^exps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    #[serde(with = "crate::io::rat_string")]
    pub coeff: Rat,
    pub exps: Vec<u32>,
}

/// Polynomial map `R^dim_in -> R^dim_out`, one monomial list per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    pub dim_in: usize,
    pub dim_out: usize,
    components: Vec<Vec<Monomial>>,
}

impl PolyMap {
    /// Builds a map, normalizing each component: merge duplicate exponent
    /// vectors, drop zero coefficients, sort exponents lexicographically.
    pub fn new(dim_in: usize, components: Vec<Vec<Monomial>>) -> Result<Self, Error> {
        let dim_out = components.len();
        let mut normalized = Vec::with_capacity(dim_out);
        for comp in components {
            for m in &comp {
                if m.exps.len() != dim_in {
                    return Err(Error::Dim(format!(
                        "exponent vector length {} != dim_in {}",
                        m.exps.len(),
                        dim_in
                    )));
                }
            }
            normalized.push(normalize(comp));
        }
        Ok(PolyMap {
            dim_in,
            dim_out,
            components: normalized,
        })
    }

    pub fn components(&self) -> &[Vec<Monomial>] {
        &self.components
    }

    pub fn constant(dim_in: usize, values: &[Rat]) -> Self {
        let comps = values
            .iter()
            .map(|v| {
                vec![Monomial {
                    coeff: v.clone(),
                    exps: vec![0; dim_in],
                }]
            })
            .collect();
        PolyMap::new(dim_in, comps).unwrap()
    }

    /// The affine map `x -> Mx + c`.
    pub fn affine(m: &RatMat, c: &RatVec) -> Self {
        assert_eq!(m.rows, c.len());
        let comps = (0..m.rows)
            .map(|i| {
                let mut terms = vec![Monomial {
                    coeff: c[i].clone(),
                    exps: vec![0; m.cols],
                }];
                for j in 0..m.cols {
                    let mut e = vec![0; m.cols];
                    e[j] = 1;
                    terms.push(Monomial {
                        coeff: m[(i, j)].clone(),
                        exps: e,
                    });
                }
                terms
            })
            .collect();
        PolyMap::new(m.cols, comps).unwrap()
    }

    pub fn eval(&self, z: &RatVec) -> Result<RatVec, Error> {
        if z.len() != self.dim_in {
            return Err(Error::Dim(format!(
                "eval: point has dimension {}, expected {}",
                z.len(),
                self.dim_in
            )));
        }
        Ok(self
            .components
            .iter()
            .map(|comp| {
                let mut acc = Rat::zero();
                for m in comp {
                    acc += &m.coeff * monomial_value(&m.exps, z);
                }
                acc
            })
            .collect())
    }

    /// Exact `dim_out x dim_in` Jacobian at `z`.
    pub fn jacobian(&self, z: &RatVec) -> Result<RatMat, Error> {
        if z.len() != self.dim_in {
            return Err(Error::Dim(format!(
                "jacobian: point has dimension {}, expected {}",
                z.len(),
                self.dim_in
            )));
        }
        let mut jac = RatMat::zeros(self.dim_out, self.dim_in);
        for (i, comp) in self.components.iter().enumerate() {
            for m in comp {
                for (k, &e) in m.exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let mut exps = m.exps.to_vec();
                    exps[k] -= 1;
                    let term =
                        &m.coeff * Rat::from_integer(e.into()) * monomial_value(&exps, z);
                    jac[(i, k)] += term;
                }
            }
        }
        Ok(jac)
    }

    /// Exact vector of second-derivative quadratic forms
    /// `(w^T H_1(z) w, ..., w^T H_d(z) w)`.
    pub fn hessian_form(&self, z: &RatVec, w: &RatVec) -> Result<RatVec, Error> {
        if z.len() != self.dim_in || w.len() != self.dim_in {
            return Err(Error::Dim("hessian_form: dimension mismatch".into()));
        }
        let mut out = zeros(self.dim_out);
        for (i, comp) in self.components.iter().enumerate() {
            for m in comp {
                for k in 0..self.dim_in {
                    if m.exps[k] == 0 || w[k].is_zero() {
                        continue;
                    }
                    for j in 0..self.dim_in {
                        let factor = if j == k {
                            if m.exps[k] < 2 {
                                continue;
                            }
                            u64::from(m.exps[k]) * u64::from(m.exps[k] - 1)
                        } else {
                            if m.exps[j] == 0 {
                                continue;
                            }
                            u64::from(m.exps[k]) * u64::from(m.exps[j])
                        };
                        let mut exps = m.exps.to_vec();
                        exps[k] -= 1;
                        exps[j] -= 1;
                        let term = &m.coeff
                            * Rat::from_integer(factor.into())
                            * monomial_value(&exps, z)
                            * &w[k]
                            * &w[j];
                        out[i] += term;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Float shadow evaluation, for oracles only.
    pub fn eval_f64(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len(), self.dim_in);
        self.components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|m| {
                        let mut t = to_f64(&m.coeff);
                        for (zi, &e) in z.iter().zip(&m.exps) {
                            t *= zi.powi(e as i32);
                        }
                        t
                    })
                    .sum()
            })
            .collect()
    }

    /// Float Jacobian shadow, for oracle projections.
    pub fn jacobian_f64(&self, z: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(z.len(), self.dim_in);
        let mut jac = vec![vec![0.0; self.dim_in]; self.dim_out];
        for (i, comp) in self.components.iter().enumerate() {
            for m in comp {
                for (k, &e) in m.exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let mut t = to_f64(&m.coeff) * f64::from(e);
                    for (j, (zj, &ej)) in z.iter().zip(&m.exps).enumerate() {
                        let p = if j == k { ej - 1 } else { ej };
                        t *= zj.powi(p as i32);
                    }
                    jac[i][k] += t;
                }
            }
        }
        jac
    }

    /// Exact partial derivative with respect to one input variable.
    pub fn partial_derivative(&self, var: usize) -> PolyMap {
        assert!(var < self.dim_in, "partial_derivative: variable index");
        let comps = self
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .filter(|m| m.exps[var] > 0)
                    .map(|m| {
                        let mut exps = m.exps.clone();
                        exps[var] -= 1;
                        Monomial {
                            coeff: &m.coeff * Rat::from_integer(m.exps[var].into()),
                            exps,
                        }
                    })
                    .collect()
            })
            .collect();
        PolyMap::new(self.dim_in, comps).unwrap()
    }

    /// Restriction to a subset of output components.
    pub fn select_components(&self, idx: &[usize]) -> PolyMap {
        let comps = idx.iter().map(|&i| self.components[i].clone()).collect();
        PolyMap::new(self.dim_in, comps).unwrap()
    }

    pub fn total_degree(&self) -> u32 {
        self.components
            .iter()
            .flatten()
            .map(|m| m.exps.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

impl std::fmt::Display for PolyMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            if comp.is_empty() {
                write!(f, "0")?;
            }
            for (k, m) in comp.iter().enumerate() {
                if k > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{}*x^{:?}", rat_to_string(&m.coeff), m.exps)?;
            }
        }
        Ok(())
    }
}

fn monomial_value(exps: &[u32], z: &[Rat]) -> Rat {
    let mut v = Rat::from_integer(1.into());
    for (zi, &e) in z.iter().zip(exps) {
        for _ in 0..e {
            v *= zi;
        }
    }
    v
}

fn normalize(mut terms: Vec<Monomial>) -> Vec<Monomial> {
    terms.sort_by(|a, b| a.exps.cmp(&b.exps));
    let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.exps == t.exps => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn mono(c: Rat, exps: Vec<u32>) -> Monomial {
        Monomial { coeff: c, exps }
    }

    /// p(x) = (x1*x2, x1 + 2*x2)
    fn sample_map() -> PolyMap {
        PolyMap::new(
            2,
            vec![
                vec![mono(rint(1), vec![1, 1])],
                vec![mono(rint(1), vec![1, 0]), mono(rint(2), vec![0, 1])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        // x1^2 + x2^2 at origin
        let q = PolyMap::new(
            2,
            vec![vec![mono(rint(1), vec![2, 0]), mono(rint(1), vec![0, 2])]],
        )
        .unwrap();
        assert_eq!(q.eval(&vec![rint(0), rint(0)]).unwrap(), vec![rint(0)]);
        // x2 at (0,-1)
        let proj = PolyMap::new(2, vec![vec![mono(rint(1), vec![0, 1])]]).unwrap();
        assert_eq!(
            proj.eval(&vec![rint(0), rint(-1)]).unwrap(),
            vec![rint(-1)]
        );
        // hand evaluation, cross-checked against term-by-term accumulation
        let p = sample_map();
        let z = vec![rat(1, 2), rint(3)];
        let v = p.eval(&z).unwrap();
        assert_eq!(v, vec![rat(3, 2), rat(13, 2)]);
        let mut acc = vec![Rat::zero(); 2];
        for (i, comp) in p.components().iter().enumerate() {
            for m in comp {
                acc[i] += &m.coeff * monomial_value(&m.exps, &z);
            }
        }
        assert_eq!(acc, v);
    }

    #[test]
    fn jacobian_examples() {
        let q = PolyMap::new(
            2,
            vec![vec![mono(rint(1), vec![2, 0]), mono(rint(1), vec![0, 2])]],
        )
        .unwrap();
        let j = q.jacobian(&vec![rint(0), rint(0)]).unwrap();
        assert_eq!(j.row(0), &[rint(0), rint(0)]);

        let proj = PolyMap::new(2, vec![vec![mono(rint(1), vec![0, 1])]]).unwrap();
        let j = proj.jacobian(&vec![rint(5), rat(-7, 3)]).unwrap();
        assert_eq!(j.row(0), &[rint(0), rint(1)]);

        let prod = PolyMap::new(2, vec![vec![mono(rint(1), vec![1, 1])]]).unwrap();
        let j = prod.jacobian(&vec![rint(2), rint(3)]).unwrap();
        assert_eq!(j.row(0), &[rint(3), rint(2)]);
    }

    #[test]
    fn hessian_examples() {
        let q = PolyMap::new(
            2,
            vec![vec![mono(rint(1), vec![2, 0]), mono(rint(1), vec![0, 2])]],
        )
        .unwrap();
        let h = q
            .hessian_form(&vec![rint(0), rint(0)], &vec![rint(3), rint(-2)])
            .unwrap();
        assert_eq!(h, vec![rint(2 * 9 + 2 * 4)]);

        let lin = PolyMap::affine(&RatMat::identity(2), &vec![rint(1), rint(-4)]);
        let h = lin
            .hessian_form(&vec![rat(1, 3), rint(2)], &vec![rint(5), rint(6)])
            .unwrap();
        assert!(h.iter().all(|x| x.is_zero()));

        // x1^2 x2 at (1,1), w=(1,0): d^2/dx1^2 = 2*x2 = 2
        let p = PolyMap::new(2, vec![vec![mono(rint(1), vec![2, 1])]]).unwrap();
        let h = p
            .hessian_form(&vec![rint(1), rint(1)], &vec![rint(1), rint(0)])
            .unwrap();
        assert_eq!(h, vec![rint(2)]);
    }

    #[test]
    fn normalization_merges_duplicates() {
        let p = PolyMap::new(
            1,
            vec![vec![
                mono(rint(1), vec![1]),
                mono(rint(2), vec![1]),
                mono(rint(-3), vec![1]),
            ]],
        )
        .unwrap();
        assert!(p.components()[0].is_empty());
    }

    #[test]
    fn dim_mismatch_rejected() {
        let p = sample_map();
        assert!(p.eval(&vec![rint(1)]).is_err());
        assert!(p.jacobian(&vec![rint(1)]).is_err());
        assert!(PolyMap::new(2, vec![vec![mono(rint(1), vec![1])]]).is_err());
    }
}
