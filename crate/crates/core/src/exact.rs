//! Exact linear algebra over the rationals.
//!
//! Errorless-code verdicts are yes/no properties of integer kernels, so
//! every computation feeding one runs in exact arithmetic: fraction-free
//! (Bareiss) elimination over `BigInt` for rank and basis selection,
//! rational back-substitution for solves and inverses. A scaled-integer
//! view ([`ScaledInt`]) serves the enumeration hot loops.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::IntMatrix;

/// Dense matrix of exact rationals in reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RationalMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m
                .data()
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RationalMatrix {
        self.mul(&RationalMatrix::from_int(other))
    }

    /// Exact product with an integer vector.
    pub fn mul_ivec(&self, x: &[i64]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, &xv) in x.iter().enumerate() {
                    if xv != 0 {
                        acc += self.get(i, j) * BigRational::from_integer(xv.into());
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = i == j;
                let v = self.get(i, j);
                if want != v.is_one() && !(v.is_zero() && !want) {
                    return false;
                }
                if want && !v.is_one() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(rational_to_f64).collect()
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Rank profile of an integer matrix plus the exact solve of the
/// dependent columns against the basis columns.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub rank: usize,
    /// Lexicographically first maximal independent column set.
    pub basis: Vec<usize>,
    /// Remaining column indices, ascending.
    pub nonbasis: Vec<usize>,
    /// `rank x (cols - rank)` matrix `R` with `A * R = B`, where `A` holds
    /// the basis columns and `B` the rest (original column order kept).
    pub reduced: RationalMatrix,
}

struct Echelon {
    rank: usize,
    basis: Vec<usize>,
    rows: Vec<Vec<BigInt>>,
}

/// Fraction-free Gaussian elimination. Scans columns left to right so the
/// pivot columns are the lexicographically first independent set.
fn bareiss(m: &IntMatrix) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| m.row(i).iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut piv = 0usize;
    let mut basis = Vec::new();
    for col in 0..cols {
        if piv == rows {
            break;
        }
        let Some(r) = (piv..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        let (top, rest) = a.split_at_mut(piv + 1);
        let prow = &top[piv];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                // still needs the Bareiss rescale to keep the minor invariant
                for c in (col + 1)..cols {
                    let v = &prow[col] * &row[c];
                    row[c] = v / &prev;
                }
                continue;
            }
            for c in (col + 1)..cols {
                let v = &prow[col] * &row[c] - &row[col] * &prow[c];
                row[c] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[piv][col].clone();
        basis.push(col);
        piv += 1;
    }
    Echelon {
        rank: piv,
        basis,
        rows: a,
    }
}

/// Exact rank and the lexicographically first independent column set.
pub fn rank_and_basis_columns(m: &IntMatrix) -> (usize, Vec<usize>) {
    let e = bareiss(m);
    (e.rank, e.basis)
}

/// Full reduction: rank, basis columns, and the exact coefficients of the
/// dependent columns in the basis.
pub fn reduce(m: &IntMatrix) -> Reduction {
    let e = bareiss(m);
    let nonbasis: Vec<usize> = (0..m.cols()).filter(|c| !e.basis.contains(c)).collect();
    let mut reduced = RationalMatrix::zeros(e.rank, nonbasis.len());
    for (jj, &col) in nonbasis.iter().enumerate() {
        // back-substitute on the echelon: U * r = v
        let mut r = vec![BigRational::zero(); e.rank];
        for i in (0..e.rank).rev() {
            let mut acc = BigRational::from_integer(e.rows[i][col].clone());
            for t in (i + 1)..e.rank {
                acc -= BigRational::from_integer(e.rows[i][e.basis[t]].clone()) * &r[t];
            }
            let pivot = BigRational::from_integer(e.rows[i][e.basis[i]].clone());
            r[i] = acc / pivot;
        }
        for i in 0..e.rank {
            reduced.set(i, jj, r[i].clone());
        }
    }
    Reduction {
        rank: e.rank,
        basis: e.basis,
        nonbasis,
        reduced,
    }
}

/// Error of [`invert_exact`] on a singular input; carries the exact rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("matrix is singular (rank {rank})")]
pub struct Singular {
    pub rank: usize,
}

/// Exact rational inverse of a square integer matrix.
pub fn invert_exact(m: &IntMatrix) -> Result<RationalMatrix, Singular> {
    let n = m.rows();
    if m.cols() != n {
        // rectangular input is treated as rank-deficient for the caller
        let (rank, _) = rank_and_basis_columns(m);
        return Err(Singular { rank });
    }
    // Gauss-Jordan on [M | I]
    let mut a = RationalMatrix::from_int(m);
    let mut inv = RationalMatrix::identity(n);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
            let (rank, _) = rank_and_basis_columns(m);
            return Err(Singular { rank });
        };
        if p != col {
            for j in 0..n {
                let (x, y) = (a.get(col, j).clone(), a.get(p, j).clone());
                a.set(col, j, y);
                a.set(p, j, x);
                let (x, y) = (inv.get(col, j).clone(), inv.get(p, j).clone());
                inv.set(col, j, y);
                inv.set(p, j, x);
            }
        }
        let pivot = a.get(col, col).clone();
        for j in 0..n {
            let v = a.get(col, j) / &pivot;
            a.set(col, j, v);
            let v = inv.get(col, j) / &pivot;
            inv.set(col, j, v);
        }
        for r in 0..n {
            if r == col || a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col).clone();
            for j in 0..n {
                let v = a.get(r, j) - &f * a.get(col, j);
                a.set(r, j, v);
                let v = inv.get(r, j) - &f * inv.get(col, j);
                inv.set(r, j, v);
            }
        }
    }
    Ok(inv)
}

/// A rational matrix stored as `num / den` with one common denominator,
/// for exact integer arithmetic in enumeration loops.
#[derive(Debug, Clone)]
pub struct ScaledInt {
    rows: usize,
    cols: usize,
    num: Vec<i128>,
    den: i128,
}

impl ScaledInt {
    /// Common-denominator view of `m`. Fails when the scaled entries would
    /// not leave dot products with +/-1 vectors safely inside `i128`.
    pub fn from_rational(m: &RationalMatrix) -> Option<ScaledInt> {
        let mut den = BigInt::one();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                den = den.lcm(m.get(i, j).denom());
            }
        }
        let mut num = Vec::with_capacity(m.rows() * m.cols());
        let mut max_abs = BigInt::zero();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                let scaled = v.numer() * (&den / v.denom());
                if scaled.abs() > max_abs {
                    max_abs = scaled.abs();
                }
                num.push(scaled);
            }
        }
        // headroom: |dot(num_row, x)| <= cols * max_abs must stay in range
        let cap = BigInt::from(i128::MAX / 4) / BigInt::from(m.cols().max(1) as i128);
        if max_abs > cap || den.abs() > BigInt::from(i128::MAX / 4) {
            return None;
        }
        Some(ScaledInt {
            rows: m.rows(),
            cols: m.cols(),
            num: num.iter().map(|v| v.to_i128().unwrap()).collect(),
            den: den.to_i128().unwrap(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i128] {
        &self.num[i * self.cols..(i + 1) * self.cols]
    }

    /// Scaled dot product of row `i` with a small integer vector: the exact
    /// value of `row_i . x` is the returned integer divided by `den`.
    #[inline]
    pub fn row_dot(&self, i: usize, x: &[i8]) -> i128 {
        let row = self.row(i);
        let mut acc = 0i128;
        for (a, &b) in row.iter().zip(x) {
            acc += a * b as i128;
        }
        acc
    }
}
