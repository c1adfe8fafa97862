use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Rank over ℚ (equivalently the number of invariant factors).
    pub fn rank(&self) -> usize {
        smith_normal_form(self).len()
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

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            if self.get(src, j).is_zero() {
                continue;
            }
            let v = self.get(dst, j) - q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            if self.get(i, src).is_zero() {
                continue;
            }
            let v = self.get(i, dst) - q * self.get(i, src);
            self.set(i, dst, v);
        }
    }
}

/// Nonzero invariant factors `d₁ | d₂ | … | d_r` of an integer matrix.
///
/// Elementary row and column operations, pivoting on the entry of least
/// absolute value in the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let mut factors = Vec::new();
    for t in 0..a.rows.min(a.cols) {
        let Some((pi, pj)) = least_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..a.rows {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t).div_floor(&pivot);
                    a.row_axpy(i, t, &q);
                    clean &= a.get(i, t).is_zero();
                }
            }
            for j in t + 1..a.cols {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j).div_floor(&pivot);
                    a.col_axpy(j, t, &q);
                    clean &= a.get(t, j).is_zero();
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; re-pivot on it
                let (pi, pj) = least_in_cross(&a, t);
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                continue;
            }
            if pivot.magnitude().is_one() {
                break;
            }
            let offender = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => a.row_axpy(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        factors.push(a.get(t, t).abs());
    }
    factors
}

fn least_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.magnitude() < a.get(bi, bj).magnitude()) {
                best = Some((i, j));
                if v.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn least_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let cross = (t..a.rows).map(|i| (i, t)).chain((t + 1..a.cols).map(|j| (t, j)));
    cross
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .min_by(|&(i1, j1), &(i2, j2)| a.get(i1, j1).abs().cmp(&a.get(i2, j2).abs()))
        .expect("pivot row or column is nonzero")
}
