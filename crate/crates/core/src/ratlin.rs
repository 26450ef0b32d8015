//! Exact rational scalars and small dense symmetric matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `p/q` as a reduced rational. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"` with `q > 0`; surrounding whitespace is allowed.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let valid_int = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) if valid_int(d, false) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Rational square root when it exists.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A symmetric matrix over the rationals, stored densely row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct SymMatrix {
    order: usize,
    entries: Vec<Rational>,
}

impl SymMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::DimensionMismatch(format!(
                "matrix with {order} rows is not square"
            )));
        }
        for i in 0..order {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InconsistentGram(format!(
                        "not symmetric at ({i}, {j}): {} != {}",
                        rows[i][j], rows[j][i]
                    )));
                }
            }
        }
        Ok(SymMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut entries = vec![Rational::zero(); order * order];
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                entries[j * order + i] = v.clone();
                entries[i * order + j] = v;
            }
        }
        SymMatrix { order, entries }
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.order).map(|i| self.row(i).to_vec()).collect()
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn principal(&self, indices: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(indices.len(), |a, b| {
            self.get(indices[a], indices[b]).clone()
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.order, "vector length must match order");
        (0..self.order).map(|i| dot(self.row(i), v)).collect()
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.mul_vec(y))
    }

    pub fn quadratic(&self, x: &[Rational]) -> Rational {
        self.bilinear(x, x)
    }

    /// Diagonal of the LDLᵀ factorization without pivoting, stopping at the
    /// first zero pivot. The k-th entry is the ratio of consecutive leading
    /// principal minors Δₖ/Δₖ₋₁.
    pub fn ldl_pivots(&self) -> Vec<Rational> {
        let n = self.order;
        let mut a = self.rows();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let d = a[k][k].clone();
            if d.is_zero() {
                pivots.push(d);
                break;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &d;
                for j in k + 1..n {
                    let delta = &f * &a[k][j];
                    a[i][j] -= delta;
                }
            }
            pivots.push(d);
        }
        pivots
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.order {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Solves `M x = v` exactly by Gaussian elimination with full pivoting.
pub fn solve(m: &SymMatrix, v: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.order();
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix order {n}",
            v.len()
        )));
    }
    let mut a = m.rows();
    let mut b = v.to_vec();
    // perm[j] = original variable stored in column j
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if a[i][j].is_zero() {
                    continue;
                }
                // Prefer small-height pivots to keep numerators short.
                let better = match best {
                    None => true,
                    Some((bi, bj)) => height(&a[i][j]) < height(&a[bi][bj]),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        let (pi, pj) = best.ok_or(Error::SingularMatrix { step: k })?;
        a.swap(k, pi);
        b.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            perm.swap(k, pj);
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
            let delta = &f * &b[k];
            b[i] -= delta;
        }
    }

    let mut y = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k].clone();
        for j in k + 1..n {
            acc -= &a[k][j] * &y[j];
        }
        y[k] = acc / &a[k][k];
    }
    let mut x = vec![Rational::zero(); n];
    for (col, var) in perm.into_iter().enumerate() {
        x[var] = y[col].clone();
    }
    Ok(x)
}

fn height(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Exact test via the LDLᵀ pivots: all must be strictly negative.
/// The empty matrix is negative definite.
pub fn is_negative_definite(m: &SymMatrix) -> bool {
    let pivots = m.ldl_pivots();
    pivots.len() == m.order() && pivots.iter().all(|d| d.is_negative())
}
