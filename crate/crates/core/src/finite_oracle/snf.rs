use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::OracleError;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from rows; `None` if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Option<IntMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().map(Into::into).collect(),
        })
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(d: &[T]) -> IntMatrix {
        let mut m = IntMatrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone().into();
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Diagonal entries `d_i > 1` with `d_1 | d_2 | ...`.
    pub invariant_factors: Vec<BigUint>,
    /// Rank of the cokernel's free part, `rows − rank(A)`.
    pub free_rank: usize,
    /// `U · A · V = D`.
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm, OracleError> {
    if a.rows == 0 || a.cols == 0 {
        return Err(OracleError::EmptyMatrix);
    }
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let mut rank = 0;

    for t in 0..a.rows.min(a.cols) {
        let Some((pi, pj)) = min_abs_nonzero(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                repivot(&mut d, &mut u, &mut v, t);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..d.rows).find(|&i| {
                (t + 1..d.cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }

    let invariant_factors = (0..rank)
        .map(|i| d[(i, i)].magnitude().clone())
        .filter(|x| !x.is_one())
        .collect();
    Ok(SmithForm {
        invariant_factors,
        free_rank: a.rows - rank,
        u,
        v,
        d,
    })
}

fn min_abs_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Move the smallest nonzero entry of row `t` / column `t` to `(t, t)`.
fn repivot(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) {
    let mut best = (t, t);
    for i in t..d.rows {
        let x = &d[(i, t)];
        if !x.is_zero() && x.abs() < d[best].abs() {
            best = (i, t);
        }
    }
    for j in t..d.cols {
        let x = &d[(t, j)];
        if !x.is_zero() && x.abs() < d[best].abs() {
            best = (t, j);
        }
    }
    d.swap_rows(t, best.0);
    u.swap_rows(t, best.0);
    d.swap_cols(t, best.1);
    v.swap_cols(t, best.1);
}

/// Determinant by fraction-free elimination; used to check unimodularity.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = x / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<u64> {
        let m = IntMatrix::from_rows(rows).unwrap();
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert!(determinant(&s.u).magnitude().is_one());
        assert!(determinant(&s.v).magnitude().is_one());
        s.invariant_factors
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![6]);
        assert_eq!(factors(&[vec![4, 2], vec![0, 2]]), vec![2, 4]);
        assert_eq!(factors(&[vec![1, 0], vec![0, 1]]), Vec::<u64>::new());
    }

    #[test]
    fn rank_deficient_reports_free_part() {
        let m = IntMatrix::from_rows(&[vec![2i64, 4], vec![4, 8], vec![0, 0]]).unwrap();
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.invariant_factors, vec![BigUint::from(2u32)]);
        assert_eq!(s.free_rank, 2);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(
            smith_normal_form(&IntMatrix::zeros(0, 3)),
            Err(OracleError::EmptyMatrix)
        );
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2i64, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        assert_eq!(determinant(&m), BigInt::from(18));
    }
}
