//! Exact integer Laurent polynomials in one variable `v`.
//!
//! Values are stored densely as a lowest exponent plus a coefficient vector
//! whose first and last entries are nonzero. The zero polynomial is the empty
//! vector. Because zeros are trimmed after every operation, derived equality
//! is equality of polynomials.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LaurentError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `v^{-1}`.
    pub fn v_inv() -> Self {
        Self::monomial(1, -1)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i32) -> Self {
        Self::from_parts(exp, vec![coeff.into()])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let terms: Vec<(i32, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        let Some(low) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (high - low) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        Self::from_parts(low, coeffs)
    }

    fn from_parts(low: i32, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        Self { low: low + lead as i32, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn min_exp(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        let i = exp as i64 - self.low as i64;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    /// The bar involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        let Some(high) = self.max_exp() else {
            return Self::zero();
        };
        let coeffs = self.coeffs.iter().rev().cloned().collect();
        Self { low: -high, coeffs }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// True when every exponent in the support is congruent to `parity` mod 2.
    pub fn has_parity(&self, parity: i32) -> bool {
        self.terms().all(|(e, _)| (e - parity).rem_euclid(2) == 0)
    }

    /// The part of the polynomial supported on strictly positive exponents.
    pub fn positive_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e > 0).map(|(e, c)| (e, c.clone())))
    }

    /// Exact evaluation at a nonzero rational.
    pub fn eval(&self, t: &BigRational) -> Result<BigRational, LaurentError> {
        if t.is_zero() {
            if self.min_exp().is_some_and(|e| e < 0) {
                return Err(LaurentError::DivisionByZero);
            }
            return Ok(BigRational::from_integer(self.coeff(0)));
        }
        // Horner in t over the shifted polynomial, then rescale by t^low.
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + BigRational::from_integer(c.clone());
        }
        Ok(acc * pow_rational(t, self.low))
    }

    /// Evaluation at a nonzero integer; returns an exact rational.
    pub fn eval_int(&self, t: i64) -> Result<BigRational, LaurentError> {
        if t == 0 {
            return Err(LaurentError::DivisionByZero);
        }
        self.eval(&BigRational::from_integer(t.into()))
    }

    /// Sum of coefficients, i.e. the value at `v = 1`.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Renormalises an r-polynomial into the classical R-polynomial in `q`:
    /// the unique `R` with `r = v^d R(v^{-2})`.
    pub fn to_r_form(&self, d: i32) -> Result<QPoly, LaurentError> {
        let mut out = Vec::new();
        for (e, c) in self.terms() {
            if (d - e).rem_euclid(2) != 0 || e > d {
                return Err(LaurentError::MalformedRPoly { exponent: e, degree: d });
            }
            let k = ((d - e) / 2) as usize;
            if out.len() <= k {
                out.resize(k + 1, BigInt::zero());
            }
            out[k] = c.clone();
        }
        Ok(QPoly::new(out))
    }

    /// Inverse of [`to_r_form`](Self::to_r_form): `v^d R(v^{-2})`.
    pub fn from_r_form(r: &QPoly, d: i32) -> Self {
        Self::from_terms(r.coeffs().iter().enumerate().map(|(k, c)| (d - 2 * k as i32, c.clone())))
    }

    fn add_scaled(&mut self, other: &Self, negate: bool) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = if negate { -other.clone() } else { other.clone() };
            return;
        }
        let low = self.low.min(other.low);
        let high = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low) as usize + 1];
        for (i, c) in self.coeffs.drain(..).enumerate() {
            coeffs[(self.low - low) as usize + i] = c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - low) as usize + i];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        *self = Self::from_parts(low, coeffs);
    }
}

fn pow_rational(t: &BigRational, k: i32) -> BigRational {
    let base = if k < 0 { t.recip() } else { t.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, true);
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        self.add_scaled(&rhs, false);
    }
}

impl SubAssign for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        self.add_scaled(&rhs, true);
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_parts(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(mut self, rhs: LaurentPoly) -> LaurentPoly {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(mut self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$assign(rhs);
                self
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Mul<&LaurentPoly> for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        &self * rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    var: &str,
    terms: impl Iterator<Item = (i32, BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        let (neg, mag) = (c.is_negative(), c.abs());
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        match (e, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (_, true) => write_monomial(f, var, e)?,
            (_, false) => {
                write!(f, "{mag}*")?;
                write_monomial(f, var, e)?;
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn write_monomial(f: &mut fmt::Formatter<'_>, var: &str, e: i32) -> fmt::Result {
    if e == 1 {
        f.write_str(var)
    } else {
        write!(f, "{var}^{e}")
    }
}

/// Renders as e.g. `v^-1 + v`, `1 + 2*v^2`, `v^-2 - 2 + v^2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, "v", self.terms().map(|(e, c)| (e, c.clone())))
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts the rendering grammar: signed terms `c`, `v`, `v^k`, `c*v^k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_terms(s, 'v').map(Self::from_terms)
    }
}

fn parse_terms(s: &str, var: char) -> Result<Vec<(i32, BigInt)>, LaurentError> {
    let bad = |msg: &str| LaurentError::Parse { input: s.to_string(), reason: msg.to_string() };
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty input"));
    }
    // Split into signed chunks; a sign directly after '^' belongs to an exponent.
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && prev != Some('^') {
            if !cur.is_empty() {
                chunks.push((neg, std::mem::take(&mut cur)));
            } else if prev.is_some() {
                return Err(bad("dangling sign"));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(bad("dangling sign"));
    }
    chunks.push((neg, cur));

    let mut out = Vec::with_capacity(chunks.len());
    for (neg, chunk) in chunks {
        let (coeff_str, mono) = match chunk.split_once('*') {
            Some((c, m)) => (Some(c), Some(m)),
            None => match chunk.find(var) {
                Some(0) => (None, Some(chunk.as_str())),
                // Juxtaposed coefficient, as in `2v^3`.
                Some(i) => (Some(&chunk[..i]), Some(&chunk[i..])),
                None => (Some(chunk.as_str()), None),
            },
        };
        let mut coeff = match coeff_str {
            Some(c) => c.parse::<BigInt>().map_err(|_| bad("bad coefficient"))?,
            None => BigInt::one(),
        };
        let exp = match mono {
            None => 0,
            Some(m) => {
                let rest = m.strip_prefix(var).ok_or_else(|| bad("expected variable"))?;
                if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(|| bad("expected '^'"))?
                        .parse::<i32>()
                        .map_err(|_| bad("bad exponent"))?
                }
            }
        };
        if neg {
            coeff = -coeff;
        }
        out.push((exp, coeff));
    }
    Ok(out)
}

/// A polynomial in `q` with integer coefficients (ascending powers).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero());
        write_terms(f, "q", terms.map(|(k, c)| (k as i32, c.clone())))
    }
}

impl FromStr for QPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = parse_terms(s, 'q')?;
        let mut coeffs = Vec::new();
        for (e, c) in terms {
            if e < 0 {
                return Err(LaurentError::Parse {
                    input: s.to_string(),
                    reason: "negative power of q".into(),
                });
            }
            if coeffs.len() <= e as usize {
                coeffs.resize(e as usize + 1, BigInt::zero());
            }
            coeffs[e as usize] += c;
        }
        Ok(Self::new(coeffs))
    }
}
