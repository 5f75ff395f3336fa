//! Text form shared by `LaurentPoly` (variable `A`) and `QPoly` (variable `q`).
//!
//! Terms are written in ascending exponent order and joined by ` + ` / ` - `:
//! `A^-3 + 3A + A^5`, `1 + 2q + q^2`. The parser is whitespace-insensitive,
//! accepts an optional `*` between coefficient and variable, and allows
//! repeated exponents (they are summed).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (i64, &'a BigInt)>, var: char) -> String {
    let mut out = String::new();
    for (i, (exp, coeff)) in terms.enumerate() {
        let negative = coeff.is_negative();
        let mag = coeff.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if exp == 0 {
            out.push_str(&mag.to_string());
            continue;
        }
        if !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push(var);
        if exp != 1 {
            out.push('^');
            out.push_str(&exp.to_string());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn parse_terms(input: &str, var: char) -> Result<Vec<(i64, BigInt)>, AlgebraError> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |msg: &str| AlgebraError::Parse(format!("{msg} in {input:?}"));
    if chars.is_empty() {
        return Err(err("empty input"));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    while pos < chars.len() {
        let mut sign = BigInt::one();
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -sign;
                pos += 1;
            }
            _ if pos != 0 => return Err(err("expected '+' or '-'")),
            _ => {}
        }
        let digits_start = pos;
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff = if pos > digits_start {
            let s: String = chars[digits_start..pos].iter().collect();
            s.parse::<BigInt>().map_err(|_| err("bad coefficient"))?
        } else {
            BigInt::one()
        };
        let had_coeff = pos > digits_start;
        if pos < chars.len() && chars[pos] == '*' {
            if !had_coeff {
                return Err(err("'*' without coefficient"));
            }
            pos += 1;
            if pos >= chars.len() || chars[pos] != var {
                return Err(err("expected variable after '*'"));
            }
        }
        let mut exp = 0i64;
        if pos < chars.len() && chars[pos] == var {
            pos += 1;
            exp = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let start = pos;
                if pos < chars.len() && (chars[pos] == '-' || chars[pos] == '+') {
                    pos += 1;
                }
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let s: String = chars[start..pos].iter().collect();
                exp = s.parse().map_err(|_| err("bad exponent"))?;
            }
        } else if !had_coeff {
            return Err(err("empty term"));
        }
        let c = sign * coeff;
        if !c.is_zero() {
            terms.push((exp, c));
        }
    }
    Ok(terms)
}
