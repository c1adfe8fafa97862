use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::{format_rational, ExactError, Field, Rational, UniPoly};

pub fn euler_phi(m: u64) -> u64 {
    assert!(m > 0, "conductor must be positive");
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `m`-th cyclotomic polynomial, memoized per conductor.
pub fn cyclotomic_polynomial(m: u64) -> Arc<UniPoly<Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UniPoly<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    assert!(m > 0, "conductor must be positive");
    // x^m - 1 = prod_{d | m} Phi_d
    let mut acc = UniPoly::monomial(Rational::one(), m as usize) - UniPoly::constant(Rational::one());
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let (q, r) = acc.div_rem(&cyclotomic_polynomial(d)).expect("monic divisor");
        debug_assert!(r.is_zero());
        acc = q;
    }
    let phi = Arc::new(acc);
    cache.lock().unwrap().insert(m, phi.clone());
    phi
}

/// Element of ℚ(ζ_m) in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
///
/// Conductor-1 values are rational constants and combine with elements of
/// any conductor. Two values of different conductors greater than one cannot
/// be combined arithmetically; embed them into a common field first with
/// [`Cyclotomic::embed`]. Equality is mathematical equality in a common field.
#[derive(Debug, Clone)]
pub struct Cyclotomic {
    conductor: u64,
    coords: Vec<Rational>,
}

impl Cyclotomic {
    fn reduce(conductor: u64, poly: UniPoly<Rational>) -> Self {
        let modulus = cyclotomic_polynomial(conductor);
        let (_, r) = poly.div_rem(&modulus).expect("monic modulus");
        let len = euler_phi(conductor) as usize;
        let coords = (0..len).map(|k| r.coeff(k)).collect();
        Self { conductor, coords }
    }

    pub fn new(conductor: u64, coords: Vec<Rational>) -> Self {
        Self::reduce(conductor, UniPoly::new(coords))
    }

    pub fn rational(q: Rational) -> Self {
        Self { conductor: 1, coords: vec![q] }
    }

    /// A rational constant viewed inside ℚ(ζ_m).
    pub fn rational_in(q: Rational, conductor: u64) -> Self {
        Self::reduce(conductor, UniPoly::constant(q))
    }

    /// `ζ_m^k` for the primitive root `ζ_m = exp(2πi/m)`.
    pub fn zeta_pow(conductor: u64, k: i64) -> Self {
        let k = k.rem_euclid(conductor as i64) as usize;
        Self::reduce(conductor, UniPoly::monomial(Rational::one(), k))
    }

    pub fn zeta(conductor: u64) -> Self {
        Self::zeta_pow(conductor, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    fn as_poly(&self) -> UniPoly<Rational> {
        UniPoly::new(self.coords.clone())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.coords.iter().skip(1).all(Field::is_zero) {
            Some(self.coords.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Image under ℚ(ζ_m) ⊂ ℚ(ζ_M), `ζ_m ↦ ζ_M^{M/m}`.
    pub fn embed(&self, target: u64) -> Result<Self, ExactError> {
        if target == 0 || !target.is_multiple_of(self.conductor) {
            return Err(ExactError::BadEmbedding { from: self.conductor, to: target });
        }
        let step = (target / self.conductor) as usize;
        let mut spread = vec![Rational::zero(); step * self.coords.len().max(1)];
        for (i, c) in self.coords.iter().enumerate() {
            spread[i * step] = c.clone();
        }
        Ok(Self::reduce(target, UniPoly::new(spread)))
    }

    fn align(&self, other: &Self) -> Result<(Self, Self), ExactError> {
        match (self.conductor, other.conductor) {
            (a, b) if a == b => Ok((self.clone(), other.clone())),
            (1, b) => Ok((self.embed(b)?, other.clone())),
            (a, 1) => Ok((self.clone(), other.embed(a)?)),
            (a, b) => Err(ExactError::ConductorMismatch(a, b)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        let (a, b) = self.align(other)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(Self { conductor: a.conductor, coords })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let (a, b) = self.align(other)?;
        Ok(Self::reduce(a.conductor, a.as_poly() * b.as_poly()))
    }

    pub fn checked_inv(&self) -> Result<Self, ExactError> {
        if self.coords.iter().all(Field::is_zero) {
            return Err(ExactError::DivisionByZero);
        }
        let modulus = cyclotomic_polynomial(self.conductor);
        let (g, s, _) = UniPoly::ext_gcd(&self.as_poly(), &modulus)?;
        // Φ_m is irreducible over ℚ, so any nonzero residue is coprime to it.
        debug_assert_eq!(g.degree(), Some(0));
        Ok(Self::reduce(self.conductor, s))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::rational_in(Rational::one(), self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let common = self.conductor.lcm(&other.conductor);
        self.embed(common).expect("lcm").coords == other.embed(common).expect("lcm").coords
    }
}

impl Eq for Cyclotomic {}

impl Add for Cyclotomic {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for Cyclotomic {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Self;

    fn neg(self) -> Self {
        Self { conductor: self.conductor, coords: self.coords.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for Cyclotomic {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Field for Cyclotomic {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    fn one() -> Self {
        Self::rational(Rational::one())
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Field::is_zero)
    }

    fn inv(&self) -> Result<Self, ExactError> {
        self.checked_inv()
    }

    fn from_rational(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_rational(c),
                1 => format!("{}*z{}", format_rational(c), self.conductor),
                _ => format!("{}*z{}^{}", format_rational(c), self.conductor, k),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn phi_values() {
        let expect = [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (8, 4), (12, 4), (9, 6)];
        for (m, phi) in expect {
            assert_eq!(euler_phi(m), phi);
            assert_eq!(cyclotomic_polynomial(m).degree(), Some(phi as usize));
        }
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let ints = |m| -> Vec<i64> {
            cyclotomic_polynomial(m).coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
        };
        assert_eq!(ints(1), vec![-1, 1]);
        assert_eq!(ints(3), vec![1, 1, 1]);
        assert_eq!(ints(4), vec![1, 0, 1]);
        assert_eq!(ints(6), vec![1, -1, 1]);
        assert_eq!(ints(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Cyclotomic::zeta(4);
        let sq = i.clone() * i;
        assert_eq!(sq.coords(), &[q(-1, 1), q(0, 1)]);
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        let s = Cyclotomic::zeta_pow(3, 1) + Cyclotomic::zeta_pow(3, 2);
        assert_eq!(s.to_rational(), Some(q(-1, 1)));
    }

    #[test]
    fn inverse_of_one_minus_zeta3() {
        // Oracle: (1 - ζ) acts on the basis (1, ζ) by the columns (1, -1) and
        // (1, 2) since ζ² = -1 - ζ. Cramer's rule on [[1, 1], [-1, 2]] x = e₁.
        let (a, b, c, d) = (q(1, 1), q(1, 1), q(-1, 1), q(2, 1));
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        let x0 = d / det.clone();
        let x1 = -c / det;
        let one_minus = Cyclotomic::rational(q(1, 1)) - Cyclotomic::zeta(3);
        let inv = one_minus.checked_inv().unwrap();
        assert_eq!(inv.coords(), &[x0.clone(), x1.clone()]);
        assert_eq!((x0, x1), (q(2, 3), q(1, 3)));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Cyclotomic::rational_in(q(0, 1), 5).checked_inv(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn mismatched_conductors_are_rejected() {
        let err = Cyclotomic::zeta(3).checked_add(&Cyclotomic::zeta(4));
        assert_eq!(err, Err(ExactError::ConductorMismatch(3, 4)));
    }

    #[test]
    fn embedding_preserves_roots() {
        let z3 = Cyclotomic::zeta(3).embed(12).unwrap();
        assert_eq!(z3, Cyclotomic::zeta_pow(12, 4));
        assert_eq!(Cyclotomic::zeta_pow(4, 2), Cyclotomic::rational(q(-1, 1)));
        assert!(Cyclotomic::zeta(4).embed(6).is_err());
        assert_eq!(Cyclotomic::zeta(12).pow(12), Cyclotomic::rational(q(1, 1)));
    }

    fn element(m: u64) -> impl Strategy<Value = Cyclotomic> {
        let len = euler_phi(m) as usize;
        proptest::collection::vec((-6i64..7, 1i64..4), len)
            .prop_map(move |cs| Cyclotomic::new(m, cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
        prop_oneof![Just(1u64), Just(2), Just(3), Just(4), Just(5), Just(6), Just(8), Just(12)]
            .prop_flat_map(|m| (element(m), element(m), element(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms((a, b, c) in triple()) {
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
            if !a.is_zero() {
                let inv = a.checked_inv().unwrap();
                prop_assert!((a * inv).is_one());
            }
        }
    }
}
