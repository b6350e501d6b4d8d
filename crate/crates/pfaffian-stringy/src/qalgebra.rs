//! Exact Laurent polynomial and rational function arithmetic in the single
//! variable `q`, over arbitrary-precision integers.
//!
//! [`LaurentPoly`] is the universal value type: a sparse map from (possibly
//! negative) exponents to nonzero `BigInt` coefficients. [`RatFunc`] is a
//! quotient of two Laurent polynomials kept in a canonical reduced form, so
//! that equality of values is plain structural equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QAlgebraError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("pole at q = {0}")]
    PoleAt(String),
    #[error("pole at q = 1 (numerator vanishes to lower order than denominator)")]
    PoleAtOne,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A Laurent polynomial in `q` with `BigInt` coefficients.
///
/// Invariants: no stored zero coefficients; the zero polynomial is the empty
/// map. All arithmetic is exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let c: BigInt = coeff.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `q^exp`
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// `q^exp - 1`
    pub fn q_pow_minus_one(exp: i64) -> Self {
        Self::q_pow(exp) - Self::one()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Lowest exponent with nonzero coefficient. `None` for the zero polynomial.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.max_exp().map(|e| self.coeff(e)).unwrap_or_else(BigInt::zero)
    }

    /// True if all exponents are nonnegative.
    pub fn is_ordinary(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    fn insert_term(coeffs: &mut BTreeMap<i64, BigInt>, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match coeffs.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiply by `q^shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Replace `q` by `q^m`.
    pub fn substitute_power(&self, m: i64) -> Self {
        assert!(m >= 1, "substitution power must be positive");
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * m, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = if *e >= 0 {
                pow_rational(x, *e as u32)
            } else {
                pow_rational(x, (-*e) as u32).recip()
            };
            acc += BigRational::from(c.clone()) * p;
        }
        acc
    }

    /// GCD of all coefficients, with the sign of the leading coefficient.
    /// Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = g.gcd(c);
        }
        if self.leading_coeff().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Divide all coefficients by `d` exactly. Panics if not exact.
    fn div_content(&self, d: &BigInt) -> Self {
        assert!(!d.is_zero());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "content division not exact");
                    (*e, q)
                })
                .collect(),
        }
    }
}

fn pow_rational(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            LaurentPoly::insert_term(&mut coeffs, *e, c.clone());
        }
        LaurentPoly { coeffs }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            LaurentPoly::insert_term(&mut coeffs, *e, -c.clone());
        }
        LaurentPoly { coeffs }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let span = |p: &LaurentPoly| (p.max_exp().unwrap() - p.min_exp().unwrap()) as usize + 1;
        // dense convolution when both operands are dense enough for the
        // vector to pay off; sparse double loop otherwise
        if self.num_terms() > 4
            && rhs.num_terms() > 4
            && span(self) < 4 * self.num_terms()
            && span(rhs) < 4 * rhs.num_terms()
        {
            let (amin, bmin) = (self.min_exp().unwrap(), rhs.min_exp().unwrap());
            let mut out = vec![BigInt::zero(); span(self) + span(rhs) - 1];
            for (e1, c1) in &self.coeffs {
                for (e2, c2) in &rhs.coeffs {
                    out[(e1 - amin + e2 - bmin) as usize] += c1 * c2;
                }
            }
            let coeffs = out
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 + amin + bmin, c))
                .collect();
            return LaurentPoly { coeffs };
        }
        let mut coeffs = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                LaurentPoly::insert_term(&mut coeffs, e1 + e2, c1 * c2);
            }
        }
        LaurentPoly { coeffs }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(v: i64) -> Self {
        Self::constant(v)
    }
}

// --- ordinary polynomial helpers (min exponent 0), used for gcd reduction ---

/// Pseudo-remainder of `a` by `b` (both ordinary, `b` nonzero):
/// `lc(b)^(deg a - deg b + 1) * a = q*b + r` with `deg r < deg b`.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let db = b.max_exp().expect("pseudo_rem by zero");
    let lb = b.leading_coeff();
    let mut r = a.clone();
    while let Some(dr) = r.max_exp() {
        if dr < db {
            break;
        }
        let lr = r.leading_coeff();
        // r <- lb * r - lr * q^(dr-db) * b
        let scaled_r = &r * &LaurentPoly::constant(lb.clone());
        let sub = &b.shifted(dr - db) * &LaurentPoly::constant(lr);
        r = &scaled_r - &sub;
    }
    r
}

fn primitive_part(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.div_content(&p.content())
}

/// GCD of two ordinary polynomials over Z, via the primitive pseudo-remainder
/// sequence. The result is primitive with positive leading coefficient
/// (monomial factors q^e are included).
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return primitive_part(b);
    }
    if b.is_zero() {
        return primitive_part(a);
    }
    assert!(a.is_ordinary() && b.is_ordinary(), "poly_gcd needs ordinary polynomials");
    let shift = a.min_exp().unwrap().min(b.min_exp().unwrap());
    let mut f = primitive_part(&a.shifted(-a.min_exp().unwrap()));
    let mut g = primitive_part(&b.shifted(-b.min_exp().unwrap()));
    if f.max_exp() < g.max_exp() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g);
        f = g;
        g = primitive_part(&r);
    }
    f.shifted(shift)
}

/// Exact division of ordinary polynomials: returns `a / b`, panics if the
/// division is not exact over Z.
fn div_exact(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    assert!(!b.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return LaurentPoly::zero();
    }
    let db = b.max_exp().unwrap();
    let lb = b.leading_coeff();
    let mut r = a.clone();
    let mut quo = LaurentPoly::zero();
    while let Some(dr) = r.max_exp() {
        assert!(dr >= db, "division not exact (degree)");
        let (qc, rem) = r.leading_coeff().div_rem(&lb);
        assert!(rem.is_zero(), "division not exact (leading coefficient)");
        let term = LaurentPoly::monomial(qc, dr - db);
        r = &r - &(&term * b);
        quo = &quo + &term;
    }
    quo
}

/// A rational function in `q`, kept in canonical reduced form.
///
/// Invariants: the denominator is an ordinary polynomial with nonzero constant
/// term and positive leading coefficient; numerator and denominator share no
/// polynomial factor and their integer contents are coprime; monomial factors
/// q^e live in the numerator's exponent range (possibly negative).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, QAlgebraError> {
        if den.is_zero() {
            return Err(QAlgebraError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self { num, den: LaurentPoly::one() };
        }
        // push monomial q-powers into the numerator
        let den_shift = den.min_exp().unwrap();
        let mut den = den.shifted(-den_shift);
        let num_shift = num.min_exp().unwrap();
        let mut num = num.shifted(-num_shift);
        let total_shift = num_shift - den_shift;

        let g = poly_gcd(&num, &den);
        if !g.is_one() {
            num = div_exact(&num, &g);
            den = div_exact(&den, &g);
        }
        let cn = num.content();
        let cd = den.content();
        let mut c = cn.abs().gcd(&cd.abs());
        if cd.is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_content(&c);
            den = den.div_content(&c);
        }
        Self { num: num.shifted(total_shift), den }
    }

    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::normalize(p, LaurentPoly::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_poly(LaurentPoly::constant(v))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::normalize(
            LaurentPoly::monomial(r.numer().clone(), 0),
            LaurentPoly::monomial(r.denom().clone(), 0),
        )
    }

    /// `c * q^e` for rational `c`.
    pub fn q_monomial(coeff: &BigRational, exp: i64) -> Self {
        Self::normalize(
            LaurentPoly::monomial(coeff.numer().clone(), exp),
            LaurentPoly::monomial(coeff.denom().clone(), 0),
        )
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::from_poly(LaurentPoly::q_pow(exp))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True if the canonical form has denominator 1, i.e. the value is a
    /// genuine (Laurent) polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a Laurent polynomial, if the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&LaurentPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::normalize(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::normalize(&(&self.num * &rhs.den) - &(&rhs.num * &self.den), &self.den * &rhs.den)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, QAlgebraError> {
        if rhs.is_zero() {
            return Err(QAlgebraError::ZeroDenominator);
        }
        Ok(Self::normalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, n: i64) -> Result<Self, QAlgebraError> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Self::one().div(&self.pow((-n) as u32))
        }
    }

    pub fn eval_at(&self, x: &BigRational) -> Result<BigRational, QAlgebraError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(QAlgebraError::PoleAt(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Exact limit as q -> 1, by repeated division of numerator and
    /// denominator by (q - 1).
    pub fn limit_at_one(&self) -> Result<BigRational, QAlgebraError> {
        let one = BigRational::one();
        let q_minus_1 = LaurentPoly::q_pow_minus_one(1);
        let shift = self.num.min_exp().unwrap_or(0).min(0);
        let mut num = self.num.shifted(-shift);
        let mut den = self.den.clone();
        while den.eval(&one).is_zero() {
            if !num.eval(&one).is_zero() {
                return Err(QAlgebraError::PoleAtOne);
            }
            num = div_exact(&num, &q_minus_1);
            den = div_exact(&den, &q_minus_1);
        }
        Ok(num.eval(&one) / den.eval(&one))
    }

    /// Replace `q` by `q^m`, `m >= 1`.
    pub fn substitute_power(&self, m: i64) -> Self {
        Self::normalize(self.num.substitute_power(m), self.den.substitute_power(m))
    }
}

// --- rendering ---

fn fmt_poly(p: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in p.coeffs.iter().rev() {
        let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
        if first {
            if sign == "-" {
                write!(f, "-")?;
            }
            first = false;
        } else {
            write!(f, " {} ", sign)?;
        }
        match (*e, mag.is_one()) {
            (0, _) => write!(f, "{}", mag)?,
            (1, true) => write!(f, "q")?,
            (1, false) => write!(f, "{}*q", mag)?,
            (_, true) => write!(f, "q^{}", e)?,
            (_, false) => write!(f, "{}*q^{}", mag, e)?,
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            fmt_poly(&self.num, f)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

// --- parsing ---

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Self { chars: s.chars().peekable() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.next()
    }

    fn parse_int(&mut self) -> Result<BigInt, QAlgebraError> {
        let mut s = String::new();
        if self.peek() == Some('-') {
            self.bump();
            s.push('-');
        }
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.chars.next().unwrap());
        }
        s.parse::<BigInt>()
            .map_err(|_| QAlgebraError::Parse(format!("expected integer, got {s:?}")))
    }

    // expr := term (('+' | '-') term)*
    fn parse_expr(&mut self) -> Result<RatFunc, QAlgebraError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Some('-') => {
                    self.bump();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (('*' | '/')? factor)*   -- adjacency means product
    fn parse_term(&mut self) -> Result<RatFunc, QAlgebraError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = acc.mul(&self.parse_factor()?);
                }
                Some('/') => {
                    self.bump();
                    acc = acc.div(&self.parse_factor()?)?;
                }
                Some('(') | Some('q') => {
                    acc = acc.mul(&self.parse_factor()?);
                }
                Some(c) if c.is_ascii_digit() => {
                    acc = acc.mul(&self.parse_factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '-' factor | atom ('^' int)?
    fn parse_factor(&mut self) -> Result<RatFunc, QAlgebraError> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(self.parse_factor()?.neg());
        }
        let base = match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.parse_expr()?;
                if self.bump() != Some(')') {
                    return Err(QAlgebraError::Parse("expected ')'".into()));
                }
                inner
            }
            Some('q') => {
                self.bump();
                RatFunc::q_pow(1)
            }
            Some(c) if c.is_ascii_digit() => RatFunc::from_poly(LaurentPoly::monomial(self.parse_int()?, 0)),
            other => return Err(QAlgebraError::Parse(format!("unexpected {other:?}"))),
        };
        if self.peek() == Some('^') {
            self.bump();
            let e = self.parse_int()?;
            let e: i64 = e
                .try_into()
                .map_err(|_| QAlgebraError::Parse("exponent out of range".into()))?;
            return base.powi(e);
        }
        Ok(base)
    }
}

impl std::str::FromStr for RatFunc {
    type Err = QAlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let v = p.parse_expr()?;
        if let Some(c) = p.peek() {
            return Err(QAlgebraError::Parse(format!("trailing input at {c:?}")));
        }
        Ok(v)
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = QAlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: RatFunc = s.parse()?;
        match r.as_polynomial() {
            Some(p) => Ok(p.clone()),
            None => Err(QAlgebraError::Parse("value is not a polynomial".into())),
        }
    }
}
