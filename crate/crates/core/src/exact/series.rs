use std::ops::{Add, Mul};

use super::{ExactError, Field, Matrix, Rational};

/// Bigraded series `Σ c[p][d] u^p t^d`: polynomial in `u` (degree ≤ `u_max`),
/// power series in `t` truncated after `t^{t_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSeries<F = Rational> {
    u_max: usize,
    t_max: usize,
    coeffs: Vec<Vec<F>>,
}

impl<F: Field> BiSeries<F> {
    pub fn zero(u_max: usize, t_max: usize) -> Self {
        Self { u_max, t_max, coeffs: vec![vec![F::zero(); t_max + 1]; u_max + 1] }
    }

    pub fn one(u_max: usize, t_max: usize) -> Self {
        let mut s = Self::zero(u_max, t_max);
        s.coeffs[0][0] = F::one();
        s
    }

    pub fn u_max(&self) -> usize {
        self.u_max
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Coefficient of `u^p t^d`; zero outside the stored rectangle.
    pub fn coeff(&self, p: usize, d: usize) -> F {
        self.coeffs.get(p).and_then(|row| row.get(d)).cloned().unwrap_or_else(F::zero)
    }

    pub fn set(&mut self, p: usize, d: usize, value: F) {
        assert!(p <= self.u_max && d <= self.t_max, "({p}, {d}) outside series support");
        self.coeffs[p][d] = value;
    }

    pub fn row(&self, p: usize) -> &[F] {
        &self.coeffs[p]
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.coeffs
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            u_max: self.u_max,
            t_max: self.t_max,
            coeffs: self.coeffs.iter().map(|row| row.iter().map(|x| x.clone() * c.clone()).collect()).collect(),
        }
    }

    /// Same series with `u_max` enlarged to `u_max`, padded with zero rows.
    pub fn widen(&self, u_max: usize) -> Self {
        assert!(u_max >= self.u_max);
        let mut out = Self::zero(u_max, self.t_max);
        for (p, row) in self.coeffs.iter().enumerate() {
            out.coeffs[p].clone_from(row);
        }
        out
    }

    /// Multiplies by `u^k`, keeping the result inside `u_max`.
    pub fn shift_u(&self, k: usize, u_max: usize) -> Self {
        let mut out = Self::zero(u_max, self.t_max);
        for (p, row) in self.coeffs.iter().enumerate() {
            if row.iter().all(Field::is_zero) {
                continue;
            }
            assert!(p + k <= u_max, "u-shift by {k} leaves the support");
            out.coeffs[p + k].clone_from(row);
        }
        out
    }

    /// Sets `u = 0`: the `t`-series of row 0.
    pub fn at_u_zero(&self) -> Vec<F> {
        self.coeffs[0].clone()
    }
}

impl<F: Field> Add for &BiSeries<F> {
    type Output = BiSeries<F>;

    fn add(self, rhs: &BiSeries<F>) -> BiSeries<F> {
        assert_eq!(self.t_max, rhs.t_max, "series truncation mismatch");
        let mut out = BiSeries::zero(self.u_max.max(rhs.u_max), self.t_max);
        for p in 0..=out.u_max {
            for d in 0..=out.t_max {
                out.coeffs[p][d] = self.coeff(p, d) + rhs.coeff(p, d);
            }
        }
        out
    }
}

impl<F: Field> Mul for &BiSeries<F> {
    type Output = BiSeries<F>;

    fn mul(self, rhs: &BiSeries<F>) -> BiSeries<F> {
        assert_eq!(self.t_max, rhs.t_max, "series truncation mismatch");
        let t_max = self.t_max;
        let mut out = BiSeries::<F>::zero(self.u_max + rhs.u_max, t_max);
        for (p1, row1) in self.coeffs.iter().enumerate() {
            for (d1, a) in row1.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (p2, row2) in rhs.coeffs.iter().enumerate() {
                    for (d2, b) in row2.iter().enumerate().take(t_max - d1 + 1) {
                        if b.is_zero() {
                            continue;
                        }
                        let cell = &mut out.coeffs[p1 + p2][d1 + d2];
                        *cell = cell.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// The formal variable substituted into `det(I ± z·M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    T,
    UT,
    /// Bare `u`; used for polyvector factors that carry no `t`-weight in the
    /// stored grading.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `det(I ± z·M)` itself.
    Numerator,
    /// `1 / det(I ± z·M)` expanded as a power series.
    Reciprocal,
}

/// Expands `det(I ± z·M)` or its reciprocal for `z` one of `t`, `u·t`, `u`.
///
/// The reciprocal is only defined for markers involving `t`. For `u·t` the
/// `u`-degree of the reciprocal is bounded by `t_max`.
pub fn det_series_factor<F: Field>(
    m: &Matrix<F>,
    sign: Sign,
    marker: Marker,
    kind: FactorKind,
    t_max: usize,
) -> Result<BiSeries<F>, ExactError> {
    let n = m.rows();
    // det(I − zM) = Σ_j c_{n−j} z^j for det(λI − M) = Σ_k c_k λ^k.
    let charp = m.char_poly()?;
    let poly: Vec<F> = (0..=n)
        .map(|j| {
            let c = charp[n - j].clone();
            match sign {
                Sign::Minus => c,
                Sign::Plus if j % 2 == 1 => -c,
                Sign::Plus => c,
            }
        })
        .collect();
    let z_coeffs = match kind {
        FactorKind::Numerator => poly,
        FactorKind::Reciprocal => {
            if marker == Marker::U {
                return Err(ExactError::Precondition("reciprocal in the bare u marker".into()));
            }
            // b_0 = 1, b_k = −Σ_{j≥1} a_j b_{k−j}
            let mut b: Vec<F> = Vec::with_capacity(t_max + 1);
            b.push(F::one());
            for k in 1..=t_max {
                let s = (1..=k.min(n)).fold(F::zero(), |acc, j| acc + poly[j].clone() * b[k - j].clone());
                b.push(-s);
            }
            b
        }
    };
    let u_max = match (marker, kind) {
        (Marker::T, _) => 0,
        (Marker::UT, FactorKind::Numerator) | (Marker::U, _) => n,
        (Marker::UT, FactorKind::Reciprocal) => t_max,
    };
    let mut out = BiSeries::zero(u_max, t_max);
    for (j, c) in z_coeffs.into_iter().enumerate() {
        let (p, d) = match marker {
            Marker::T => (0, j),
            Marker::UT => (j, j),
            Marker::U => (j, 0),
        };
        if d <= t_max && p <= u_max {
            out.coeffs[p][d] = c;
        }
    }
    Ok(out)
}
