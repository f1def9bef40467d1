//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: fraction-free
//! (Bareiss) elimination for determinants and ranks, Smith normal form by
//! smallest-pivot gcd reduction, and lattice quotients `Z^n / <gens>`.

// Row operations read one row while writing another, so index loops stay.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry count {got} does not match {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("vector of length {got} where length {expected} was required")]
    Dimension { expected: usize, got: usize },
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape { rows, cols, got: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::Dimension { expected: cols, got: r.len() });
            }
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a `dim x k` matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[i64]>>(dim: usize, columns: &[C]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != dim {
                return Err(LinalgError::Dimension { expected: dim, got: c.len() });
            }
            for (i, &x) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = BigInt::from(x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det_bareiss(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Rank of the column space over the rationals, by fraction-free elimination.
pub fn rank_over_q(m: &IntMatrix) -> usize {
    let mut a = m.row_vecs();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Diagonal of the Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// `d_1 | d_2 | ... | d_m`, with `m = min(rows, cols)`; zeros trail.
    pub diag: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// Largest nonzero elementary divisor, if any.
    pub fn largest(&self) -> Option<&BigInt> {
        self.diag.iter().rev().find(|d| !d.is_zero())
    }
}

/// Smith normal form by repeated gcd reduction around the smallest nonzero pivot.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.row_vecs();
    let n = rows.min(cols);
    for t in 0..n {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &a[i][j] - &q * &a[t][j];
                        a[i][j] = v;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().take(rows).skip(t) {
                        let v = &row[j] - &q * &row[t];
                        row[j] = v;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // A nonzero remainder is smaller than the pivot; move it into place.
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.1 == t {
                    a.swap(t, best.0);
                } else {
                    for row in a.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
    }
    SnfResult { diag: (0..n).map(|i| a[i][i].abs()).collect() }
}

/// Structure of `Z^n / <gens>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeQuotient {
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    /// Product of the nonzero elementary divisors (the covolume of the lattice in its span).
    pub covolume: BigInt,
    pub lattice_rank: usize,
}

impl LatticeQuotient {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

pub fn lattice_quotient<V: AsRef<[i64]>>(dim: usize, gens: &[V]) -> Result<LatticeQuotient, LinalgError> {
    let m = IntMatrix::from_columns(dim, gens)?;
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    Ok(LatticeQuotient {
        torsion: snf.diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect(),
        free_rank: dim - rank,
        covolume: snf.diag.iter().filter(|d| !d.is_zero()).product(),
        lattice_rank: rank,
    })
}

/// Whether `v` lies in the lattice spanned by `gens`.
///
/// Adding `v` keeps the rank and covolume unchanged exactly when `v` is already in the lattice.
pub fn lattice_contains<V: AsRef<[i64]>>(dim: usize, gens: &[V], v: &[i64]) -> Result<bool, LinalgError> {
    let base = lattice_quotient(dim, gens)?;
    let mut ext: Vec<Vec<i64>> = gens.iter().map(|g| g.as_ref().to_vec()).collect();
    ext.push(v.to_vec());
    let grown = lattice_quotient(dim, &ext)?;
    Ok(base.lattice_rank == grown.lattice_rank && base.covolume == grown.covolume)
}

/// Basis of the rational kernel `{x : M x = 0}`, each vector scaled to a primitive integer vector.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigRational>> =
        (0..rows).map(|i| (0..cols).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -a[row][f].clone();
            }
            primitive(&x)
        })
        .collect()
}

/// Clears denominators and divides out the content.
pub fn primitive(x: &[BigRational]) -> Vec<BigInt> {
    let den = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det_bareiss(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(det_bareiss(&m(&[&[1, 2], &[3, 4]])).unwrap(), BigInt::from(-2));
        assert_eq!(det_bareiss(&m(&[&[1, 2, 3], &[1, 2, 3], &[4, 0, 1]])).unwrap(), BigInt::zero());
        assert_eq!(det_bareiss(&m(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert!(matches!(det_bareiss(&m(&[&[1, 2, 3]])), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank_over_q(&IntMatrix::zeros(3, 4)), 0);
        assert_eq!(rank_over_q(&IntMatrix::identity(4)), 4);
        let cols = IntMatrix::from_columns(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(rank_over_q(&cols), 2);
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 3]])).diag, ints(&[1, 6]));
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)).diag, ints(&[1, 1, 1]));
        assert_eq!(smith_normal_form(&m(&[&[2, 4], &[4, 8]])).diag, ints(&[2, 0]));
        assert_eq!(smith_normal_form(&m(&[&[6, 4], &[4, 6]])).diag, ints(&[2, 10]));
    }

    #[test]
    fn quotient_small_cases() {
        let q = lattice_quotient(1, &[vec![2]]).unwrap();
        assert_eq!(q.torsion, ints(&[2]));
        assert_eq!(q.free_rank, 0);
        let q = lattice_quotient::<Vec<i64>>(2, &[]).unwrap();
        assert_eq!((q.torsion.len(), q.free_rank), (0, 2));
        let q = lattice_quotient(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(q.torsion, ints(&[6]));
        assert!(lattice_contains(2, &[vec![2, 0], vec![1, 1]], &[0, 2]).unwrap());
        assert!(!lattice_contains(2, &[vec![2, 0], vec![1, 1]], &[1, 0]).unwrap());
    }

    #[test]
    fn kernel_of_circuit() {
        let a = IntMatrix::from_columns(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        let k = integer_kernel(&a);
        assert_eq!(k, vec![ints(&[1, 1, 1])]);
        let b = IntMatrix::from_columns(1, &[vec![2], vec![-3]]).unwrap();
        assert_eq!(integer_kernel(&b), vec![ints(&[3, 2])]);
    }
}
