use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::parse::{parse_terms, render_terms};
use super::{AlgebraError, LaurentPoly};

/// Integer polynomial in `q`, stored densely as `a_0, ..., a_N` with `a_N != 0`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut p = Self {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    /// `q^k`.
    pub fn q_pow(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Result<usize, AlgebraError> {
        self.coeffs.len().checked_sub(1).ok_or(AlgebraError::ZeroPolynomial)
    }

    pub fn mindeg(&self) -> Result<usize, AlgebraError> {
        self.coeffs.iter().position(|c| !c.is_zero()).ok_or(AlgebraError::ZeroPolynomial)
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact division. Fails when the divisor is zero or the remainder is not.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly, AlgebraError> {
        let lead = divisor.coeffs.last().ok_or(AlgebraError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() - 1 < dd {
            return Err(AlgebraError::InexactDivision);
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return Err(AlgebraError::InexactDivision);
            }
            let c = top / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::InexactDivision);
        }
        Ok(Self::from_coeffs(quot))
    }

    /// Image under `q -> A^-4`.
    pub fn subst_q_to_a_inv4(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (-4 * i as i64, c.clone())),
        )
    }

    /// True when every coefficient of `self` is at least the matching one of `other`.
    pub fn dominates(&self, other: &QPoly) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|i| self.coeff(i) >= other.coeff(i))
    }

    pub fn predicates(&self) -> Result<SeqReport, AlgebraError> {
        let lo = self.mindeg()?;
        Ok(SeqReport::of(&self.coeffs[lo..]))
    }
}

/// Shape flags of a coefficient sequence, evaluated over its support range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeqReport {
    pub palindromic: bool,
    pub unimodal: bool,
    pub positive: bool,
    pub no_gaps: bool,
}

impl SeqReport {
    /// The slice is trimmed of leading and trailing zeros before inspection.
    pub fn of(seq: &[BigInt]) -> Self {
        let lo = seq.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let hi = seq.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        let s = if lo < hi { &seq[lo..hi] } else { &[][..] };

        let palindromic = s.iter().eq(s.iter().rev());
        let mut unimodal = true;
        let mut falling = false;
        for w in s.windows(2) {
            if w[1] < w[0] {
                falling = true;
            } else if w[1] > w[0] && falling {
                unimodal = false;
            }
        }
        Self {
            palindromic,
            unimodal,
            positive: s.iter().all(Signed::is_positive),
            no_gaps: s.iter().all(|c| !c.is_zero()),
        }
    }

    pub fn all(&self) -> bool {
        self.palindromic && self.unimodal && self.positive && self.no_gaps
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c));
        f.write_str(&render_terms(terms, 'q'))
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl FromStr for QPoly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (e, c) in parse_terms(s, 'q')? {
            let e = usize::try_from(e).map_err(|_| AlgebraError::Parse(format!("negative power of q in {s:?}")))?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c;
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)))
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)))
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl std::iter::Product for QPoly {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| acc * p)
    }
}
