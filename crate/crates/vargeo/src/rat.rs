//! Exact rational scalars, vectors and matrices.
//!
//! All core geometry runs on `Rat`; floats only appear in the oracle module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Dense rational vector.
pub type RatVec = Vec<Rat>;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rint(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

pub fn rzero() -> Rat {
    Rat::zero()
}

pub fn rone() -> Rat {
    Rat::one()
}

/// Parses `"p/q"` or `"p"` with optional sign. Floats are rejected.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(format!("float literal `{s}` not allowed in exact field"));
    }
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("invalid integer `{t}`"))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Rat::new(num, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

pub fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn parse_rat_vec(s: &str) -> Result<RatVec, String> {
    s.split(',').map(parse_rat).collect()
}

// ---------------------------------------------------------------------------
// vector helpers

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn vadd(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vneg(a: &[Rat]) -> RatVec {
    a.iter().map(|x| -x).collect()
}

pub fn vscale(t: &Rat, a: &[Rat]) -> RatVec {
    a.iter().map(|x| t * x).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn zeros(n: usize) -> RatVec {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> RatVec {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

/// Concatenates two block vectors.
pub fn vconcat(a: &[Rat], b: &[Rat]) -> RatVec {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// Scales a nonzero vector by the unique positive factor giving coprime
/// integer entries. The canonical representative of a ray or facet normal.
pub fn primitive(v: &[Rat]) -> RatVec {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    ints.iter()
        .map(|i| Rat::from_integer(i / &gcd))
        .collect()
}

/// Total lexicographic order on rational vectors (used for canonical sorting).
pub fn vec_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

// ---------------------------------------------------------------------------
// matrices

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), nc, "from_rows: ragged rows");
        }
        RatMat {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `self^T v` without materializing the transpose.
    pub fn tr_mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.rows, v.len(), "tr_mul_vec: dimension mismatch");
        let mut out = zeros(self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j] += &v[i] * &self[(i, j)];
            }
        }
        out
    }

    pub fn mul_mat(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "mul_mat: dimension mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RatMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4/2").unwrap(), rint(-2));
        assert_eq!(rat_to_string(&rat(-1, 3)), "-1/3");
        assert_eq!(rat_to_string(&rint(7)), "7");
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1e-3").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![rat(1, 2), rat(-3, 4), rzero()];
        assert_eq!(primitive(&v), vec![rint(2), rint(-3), rint(0)]);
        let w = vec![rint(4), rint(-6)];
        assert_eq!(primitive(&w), vec![rint(2), rint(-3)]);
    }

    #[test]
    fn matvec() {
        let m = RatMat::from_rows(vec![vec![rint(1), rint(2)], vec![rint(0), rint(-1)]]);
        assert_eq!(m.mul_vec(&[rint(3), rint(4)]), vec![rint(11), rint(-4)]);
        assert_eq!(m.tr_mul_vec(&[rint(1), rint(1)]), vec![rint(1), rint(1)]);
    }
}
