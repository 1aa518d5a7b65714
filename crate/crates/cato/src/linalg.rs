//! Exact linear algebra over `BigRational` and `BigInt`: reduced row echelon
//! form, nullspaces, linear solves, Smith normal form, and p-adic valuations.
//! Deterministic pivoting keeps every downstream report byte-stable.

use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, or `p/q` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::BadInput(format!("cannot parse rational `{s}`: {e}")))
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp_int(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut x = x.abs();
    loop {
        let (q, r) = num::Integer::div_rem(&x, &p);
        if r.is_zero() {
            v += 1;
            x = q;
        } else {
            return Some(v);
        }
    }
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn vp_rat(x: &Rat, p: u64) -> Option<i64> {
    let vn = vp_int(x.numer(), p)?;
    let vd = vp_int(x.denom(), p).expect("denominator is never zero");
    Some(vn as i64 - vd as i64)
}

/// Dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMat { rows: r, cols: c, data }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Rat>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = QMat::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j) + add;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace `{v : Av = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rat::zero(); self.cols];
                v[fc] = Rat::one();
                for (ri, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(ri, fc).clone();
                }
                v
            })
            .collect()
    }

    /// One particular solution of `Ax = b`, if the system is consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len(), "shape mismatch");
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(ri, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, if nonsingular.
    pub fn invert(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols, "not square");
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let pivots = aug.rref();
        if pivots.len() != n {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V` and `D` diagonal
/// satisfying the divisibility chain `d1 | d2 | ...`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub rank: usize,
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Snf {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let swap_rows = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        m.swap(a, b);
        u.swap(a, b);
    };
    let swap_cols = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    };
    // row[a] -= q * row[b], and the matching operation on U
    let row_op = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize, q: &BigInt| {
        for j in 0..cols {
            let sub = q * &m[b][j];
            m[a][j] -= sub;
        }
        for j in 0..rows {
            let sub = q * &u[b][j];
            u[a][j] -= sub;
        }
    };
    let col_op = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, a: usize, b: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let sub = q * &row[b];
            row[a] -= sub;
        }
        for row in v.iter_mut() {
            let sub = q * &row[b];
            row[a] -= sub;
        }
    };

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // find a nonzero entry of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() {
                    let better = match &best {
                        None => true,
                        Some((bi, bj)) => m[i][j].abs() < m[*bi][*bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(&mut m, &mut u, t, bi);
        swap_cols(&mut m, &mut v, t, bj);

        let mut clean = true;
        for i in (t + 1)..rows {
            if !m[i][t].is_zero() {
                let q = num::Integer::div_floor(&m[i][t], &m[t][t]);
                row_op(&mut m, &mut u, i, t, &q);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..cols {
            if !m[t][j].is_zero() {
                let q = num::Integer::div_floor(&m[t][j], &m[t][t]);
                col_op(&mut m, &mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // remainders left; repeat with a smaller pivot
        }
        t += 1;
    }

    // enforce the divisibility chain d_i | d_{i+1}
    let mut i = 0;
    while i + 1 < n {
        if m[i][i].is_zero() {
            break;
        }
        let mut fixed = true;
        for j in (i + 1)..n {
            if m[j][j].is_zero() {
                continue;
            }
            if !num::Integer::is_multiple_of(&m[j][j], &m[i][i]) {
                // fold column j into column i and rediagonalize the 2x2 block
                let one = BigInt::one();
                let neg = -&one;
                col_op(&mut m, &mut v, i, j, &neg); // col i += col j
                // re-run elimination from row i
                t = i;
                while t < n {
                    let mut best: Option<(usize, usize)> = None;
                    for r in t..rows {
                        for c in t..cols {
                            if !m[r][c].is_zero() {
                                let better = match &best {
                                    None => true,
                                    Some((br, bc)) => m[r][c].abs() < m[*br][*bc].abs(),
                                };
                                if better {
                                    best = Some((r, c));
                                }
                            }
                        }
                    }
                    let Some((br, bc)) = best else { break };
                    swap_rows(&mut m, &mut u, t, br);
                    swap_cols(&mut m, &mut v, t, bc);
                    let mut clean = true;
                    for r in (t + 1)..rows {
                        if !m[r][t].is_zero() {
                            let q = num::Integer::div_floor(&m[r][t], &m[t][t]);
                            row_op(&mut m, &mut u, r, t, &q);
                            if !m[r][t].is_zero() {
                                clean = false;
                            }
                        }
                    }
                    for c in (t + 1)..cols {
                        if !m[t][c].is_zero() {
                            let q = num::Integer::div_floor(&m[t][c], &m[t][t]);
                            col_op(&mut m, &mut v, c, t, &q);
                            if !m[t][c].is_zero() {
                                clean = false;
                            }
                        }
                    }
                    if clean {
                        t += 1;
                    }
                }
                fixed = false;
                break;
            }
        }
        if fixed {
            i += 1;
        } else {
            i = 0; // earlier chain links may have been disturbed
        }
    }

    let mut diag: Vec<BigInt> = (0..n).map(|k| m[k][k].clone()).collect();
    for d in diag.iter_mut() {
        if d.is_negative() {
            *d = -&*d;
        }
    }
    // sign fixes are column scalings by -1: fold into V
    for (k, row) in m.iter().enumerate().take(n) {
        if row[k].is_negative() {
            for vr in v.iter_mut() {
                vr[k] = -&vr[k];
            }
        }
    }
    let rank = diag.iter().take_while(|d| !d.is_zero()).count();
    Snf { diag, u, v, rank }
}
