//! Exact polynomial arithmetic: Laurent polynomials in `A`, polynomials in `q`,
//! and the q-analogues built from them.

mod laurent;
mod parse;
mod qpoly;

use thiserror::Error;

pub use laurent::LaurentPoly;
pub use qpoly::{QPoly, SeqReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// `[m]_q = 1 + q + ... + q^(m-1)`; `[0]_q = 0`.
pub fn q_int(m: usize) -> QPoly {
    QPoly::from_coeffs(std::iter::repeat_n(1, m))
}

/// `[m]_q! = [1]_q [2]_q ... [m]_q`; `[0]_q! = 1`.
pub fn q_factorial(m: usize) -> QPoly {
    (1..=m).map(q_int).product()
}

/// The q-multinomial `[a_1 + ... + a_k]_q! / ([a_1]_q! ... [a_k]_q!)`.
///
/// Computed by exact division of q-factorials; a nonzero remainder is an
/// arithmetic bug and is reported as `InexactDivision`.
pub fn q_multinomial(parts: &[usize]) -> Result<QPoly, AlgebraError> {
    let total: usize = parts.iter().sum();
    let mut acc = q_factorial(total);
    for &a in parts {
        acc = acc.div_exact(&q_factorial(a))?;
    }
    Ok(acc)
}

/// Gaussian binomial `[a+b choose a]_q`.
pub fn q_binomial(a: usize, b: usize) -> QPoly {
    q_multinomial(&[a, b]).expect("q-binomial division is exact")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qp(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    fn factorial(n: usize) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    #[test]
    fn q_int_examples() {
        assert_eq!(q_int(3), qp("1 + q + q^2"));
        assert_eq!(q_int(1), QPoly::one());
        assert!(q_int(0).is_zero());
        assert_eq!(q_factorial(0), QPoly::one());
    }

    #[test]
    fn q_multinomial_examples() {
        assert_eq!(q_multinomial(&[1, 1]).unwrap(), qp("1 + q"));
        assert_eq!(q_multinomial(&[2, 2]).unwrap(), qp("1 + q + 2q^2 + q^3 + q^4"));
        assert_eq!(q_multinomial(&[1, 1, 1]).unwrap(), qp("1 + 2q + 2q^2 + q^3"));
    }

    #[test]
    fn q_int_at_one_is_m() {
        for m in 1..20 {
            assert_eq!(q_int(m).eval_at_one(), BigInt::from(m));
        }
    }

    fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 1 {
            return vec![vec![total]];
        }
        (0..=total)
            .flat_map(|first| {
                compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }

    #[test]
    fn q_multinomial_at_one_is_multinomial() {
        for total in 0..=12 {
            for k in 1..=3 {
                for parts in compositions(total, k) {
                    let expected = factorial(total) / parts.iter().map(|&a| factorial(a)).product::<BigInt>();
                    assert_eq!(q_multinomial(&parts).unwrap().eval_at_one(), expected, "{parts:?}");
                }
            }
        }
    }

    #[test]
    fn q_multinomial_symmetric() {
        let base = q_multinomial(&[3, 1, 2]).unwrap();
        for p in [[1, 2, 3], [2, 3, 1], [3, 2, 1], [1, 3, 2], [2, 1, 3]] {
            assert_eq!(q_multinomial(&p).unwrap(), base);
        }
    }

    #[test]
    fn gaussian_binomials_have_all_shape_flags() {
        for a in 0..=10 {
            for b in 0..=(10 - a) {
                let r = q_binomial(a, b).predicates().unwrap();
                assert!(r.all(), "[{a}+{b} choose {a}] -> {r:?}");
            }
        }
    }
}
