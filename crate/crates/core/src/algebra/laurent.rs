use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::parse::{parse_terms, render_terms};
use super::AlgebraError;

/// Integer Laurent polynomial in the variable `A`.
///
/// Terms are kept in a sorted map from exponent to coefficient and no stored
/// coefficient is ever zero, so structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * A^exp`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// `A^exp`.
    pub fn a_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn mindeg(&self) -> Result<i64, AlgebraError> {
        self.terms.keys().next().copied().ok_or(AlgebraError::ZeroPolynomial)
    }

    pub fn maxdeg(&self) -> Result<i64, AlgebraError> {
        self.terms.keys().next_back().copied().ok_or(AlgebraError::ZeroPolynomial)
    }

    /// Multiplication by `A^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The substitution `A -> A^-1`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `A = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Reads the polynomial as `A^base * sum_i a_i A^(step*i)`.
    ///
    /// Returns `None` for the zero polynomial or when some exponent is not
    /// congruent to the minimum degree modulo `step`.
    pub fn coefficient_sequence(&self, step: i64) -> Option<(i64, Vec<BigInt>)> {
        let base = self.mindeg().ok()?;
        let top = self.maxdeg().ok()?;
        if self.terms.keys().any(|e| (e - base) % step != 0) {
            return None;
        }
        let len = ((top - base) / step + 1) as usize;
        let mut seq = vec![BigInt::zero(); len];
        for (e, c) in &self.terms {
            seq[((e - base) / step) as usize] = c.clone();
        }
        Some((base, seq))
    }

    /// `(-A^2 - A^-2)`, the value of a trivial circle.
    pub fn loop_value() -> Self {
        Self::from_terms([(2, -1), (-2, -1)])
    }

    /// `A^2 + A^-2`.
    pub fn a2_plus_am2() -> Self {
        Self::from_terms([(2, 1), (-2, 1)])
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter().map(|(e, c)| (*e, c)), 'A'))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::from_terms(parse_terms(s, 'A')?))
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl LaurentPoly {
    /// True when every coefficient is strictly positive.
    pub fn all_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// True when the lowest and highest coefficients are both 1.
    pub fn extremes_are_one(&self) -> bool {
        match (self.terms.values().next(), self.terms.values().next_back()) {
            (Some(lo), Some(hi)) => lo.is_one() && hi.is_one(),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn distributes_over_inverse_pair() {
        let p = lp("1 + A^4") * lp("1 + A^-4");
        assert_eq!(p, lp("A^-4 + 2 + A^4"));
    }

    #[test]
    fn degrees() {
        let p = lp("1+2A^4+A^8+A^12");
        assert_eq!(p.mindeg().unwrap(), 0);
        assert_eq!(p.maxdeg().unwrap(), 12);
        assert_eq!(LaurentPoly::zero().mindeg(), Err(AlgebraError::ZeroPolynomial));
        assert_eq!(LaurentPoly::zero().maxdeg(), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn rendering() {
        assert_eq!(lp("1 + 2A^4 + A^8 + A^12").to_string(), "1 + 2A^4 + A^8 + A^12");
        assert_eq!(lp("A^5 + 3A + A^-3").to_string(), "A^-3 + 3A + A^5");
        assert_eq!(lp("-A^2 - A^-2").to_string(), "-A^-2 - A^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(lp(" 2 * A ^ -1 - 7 ").to_string(), "2A^-1 - 7");
    }

    #[test]
    fn shift_and_invert() {
        let p = lp("1 + A^-4 + A^-8");
        assert_eq!(p.shift(1), lp("A + A^-3 + A^-7"));
        assert_eq!(p.invert_variable(), lp("1 + A^4 + A^8"));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = lp("A^3 + 1") - lp("A^3");
        assert_eq!(p.num_terms(), 1);
        assert!((lp("A") - lp("A")).is_zero());
    }

    #[test]
    fn step_sequence() {
        let (base, seq) = lp("A^-3 + 3A + A^5").coefficient_sequence(4).unwrap();
        assert_eq!(base, -3);
        assert_eq!(seq, vec![BigInt::from(1), BigInt::from(3), BigInt::from(1)]);
        assert!(lp("1 + A^2").coefficient_sequence(4).is_none());
    }
}
