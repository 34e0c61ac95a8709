//! Exact rational arithmetic and exact linear algebra.
//!
//! Everything downstream of a distinguishability verdict hinges on comparing
//! an optimum against zero, so this substrate never rounds: probabilities are
//! arbitrary-precision rationals, elimination and the simplex solver in
//! [`lp`] work over them directly.

pub mod lp;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, kept in canonical form by `num-rational`.
pub type Rat = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular linear system")]
    Singular,
}

/// Parses `p/q` or a decimal literal, converting decimals exactly
/// (`0.25` becomes `1/4`).
pub fn parse_rat(text: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::BadRational(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    if all_digits.is_empty() || !all_digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = all_digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(Rat::new(BigInt::from(sign) * num, den))
}

/// Formats a rational as `p/q`, or just `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A row-reduced basis of exact vectors over a fixed index set.
///
/// Stored rows are kept in echelon form; inserting a vector reduces it
/// against the current rows first, so membership in the span is decided
/// exactly.
#[derive(Debug, Clone)]
pub struct Basis {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    /// Pivot column of each stored row.
    pivots: Vec<usize>,
}

impl Basis {
    pub fn new(dim: usize) -> Self {
        Basis { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the basis; inserts the residual and returns `true`
    /// iff `v` lies outside the current span.
    pub fn try_extend(&mut self, v: &[Rat]) -> Result<bool, ExactError> {
        if v.len() != self.dim {
            return Err(ExactError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let factor = w[p].clone() / &row[p];
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= &factor * ri;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push(w);
                self.pivots.push(p);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Span membership without modifying the basis.
    pub fn contains(&self, v: &[Rat]) -> Result<bool, ExactError> {
        let mut probe = self.clone();
        Ok(!probe.try_extend(v)?)
    }
}

/// Solves `A x = b` exactly by Gaussian elimination with exact pivoting.
pub fn solve_linear(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>, ExactError> {
    let n = a.len();
    if b.len() != n {
        return Err(ExactError::DimensionMismatch { expected: n, got: b.len() });
    }
    for row in a {
        if row.len() != n {
            return Err(ExactError::DimensionMismatch { expected: n, got: row.len() });
        }
    }
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(ExactError::Singular)?;
        m.swap(col, pivot);
        let lead = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &lead;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant by fraction-free-ish elimination; used as an independence
/// oracle in tests.
pub fn determinant(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        let lead = m[col][col].clone();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let factor = m[r][col].clone() / &lead;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    det
}

/// Converts a rational to the nearest f64. Fine for planners and reporting,
/// never used inside a decision procedure.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
