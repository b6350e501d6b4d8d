//! Terminating basic hypergeometric series and the four identities used by
//! the linear-section computations.
//!
//! Parameters are rational multiples of q-powers; a series is evaluated as an
//! exact rational function of q. Two independent evaluation paths are
//! provided: the consecutive-term-ratio recursion and direct expansion via
//! Pochhammer quotients.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::qalgebra::{LaurentPoly, QAlgebraError, RatFunc};
use crate::report::{Failure, PointOutcome, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QHypergeomError {
    #[error("series spec invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Algebra(#[from] QAlgebraError),
}

/// A series parameter `coefficient * q^exponent` with nonzero rational
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiParam {
    pub coeff: BigRational,
    pub exp: i64,
}

impl PhiParam {
    pub fn new(coeff: BigRational, exp: i64) -> Self {
        assert!(!coeff.is_zero(), "PhiParam coefficient must be nonzero");
        Self { coeff, exp }
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::new(BigRational::one(), exp)
    }

    pub fn neg_q_pow(exp: i64) -> Self {
        Self::new(-BigRational::one(), exp)
    }

    fn is_q_power(&self, exp: i64) -> bool {
        self.coeff.is_one() && self.exp == exp
    }

    /// `1 - self * q^shift` as an unreduced fraction.
    fn one_minus_times_q(&self, shift: i64) -> Frac {
        let den = LaurentPoly::monomial(self.coeff.denom().clone(), 0);
        let num = &den - &LaurentPoly::monomial(self.coeff.numer().clone(), self.exp + shift);
        Frac { num, den }
    }
}

/// A terminating series `_r phi_s` in base `q^base_power`, summed to index
/// `termination`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSeriesSpec {
    pub upper: Vec<PhiParam>,
    pub lower: Vec<PhiParam>,
    pub base_power: i64,
    pub argument: PhiParam,
    pub termination: u32,
}

impl PhiSeriesSpec {
    /// Validates the termination witness (some upper parameter is `q^{-mN}`)
    /// and the absence of vanishing lower Pochhammer factors before
    /// termination.
    pub fn new(
        upper: Vec<PhiParam>,
        lower: Vec<PhiParam>,
        base_power: i64,
        argument: PhiParam,
        termination: u32,
    ) -> Result<Self, QHypergeomError> {
        if base_power < 1 {
            return Err(QHypergeomError::Invariant("base power must be positive".into()));
        }
        let m = base_power;
        let n = termination as i64;
        if !upper.iter().any(|p| p.is_q_power(-m * n)) {
            return Err(QHypergeomError::Invariant(format!(
                "no upper parameter equals q^{} (termination witness)",
                -m * n
            )));
        }
        for p in &lower {
            for t in 0..n {
                if p.is_q_power(-m * t) {
                    return Err(QHypergeomError::Invariant(format!(
                        "lower parameter q^{} vanishes at term {}",
                        p.exp,
                        t + 1
                    )));
                }
            }
        }
        Ok(Self { upper, lower, base_power, argument, termination })
    }
}

/// Unreduced fraction of Laurent polynomials; gcd reduction is deferred to
/// the final [`RatFunc`] conversion.
#[derive(Debug, Clone)]
struct Frac {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Frac {
    fn one() -> Self {
        Self { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    fn from_poly(num: LaurentPoly) -> Self {
        Self { num, den: LaurentPoly::one() }
    }

    fn mul(&self, rhs: &Frac) -> Frac {
        Frac { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }

    fn into_ratfunc(self) -> Result<RatFunc, QAlgebraError> {
        RatFunc::new(self.num, self.den)
    }
}

/// `(-1)^sign_parity * q^exp` (negative exponents allowed).
fn signed_monomial(sign_parity: i64, exp: i64) -> LaurentPoly {
    let sign = if sign_parity.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentPoly::monomial(sign, exp)
}

/// Evaluate by the consecutive-term-ratio recursion:
/// `c_0 = 1`, `c_{t+1}/c_t = prod(1 - a_u Q^t) / ((1 - Q^{t+1}) prod(1 - b_v Q^t)) * (-Q^t)^{1+s-r} * z`.
pub fn eval_phi(spec: &PhiSeriesSpec) -> Result<RatFunc, QHypergeomError> {
    Ok(eval_phi_frac_ratio(spec).into_ratfunc()?)
}

fn eval_phi_frac_ratio(spec: &PhiSeriesSpec) -> Frac {
    let m = spec.base_power;
    let d = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
    let z = &spec.argument;
    let mut term = Frac::one();
    // running denominators nest, so the partial sum shares the current term's
    // denominator
    let mut sum_num = LaurentPoly::one();
    for t in 0..spec.termination as i64 {
        // (-Q^t)^(1+s-r)
        let mut ratio_num = signed_monomial(d, m * t * d);
        let mut ratio_den = LaurentPoly::one();
        for a in &spec.upper {
            let f = a.one_minus_times_q(m * t);
            ratio_num = &ratio_num * &f.num;
            ratio_den = &ratio_den * &f.den;
        }
        ratio_den = &ratio_den * &(-LaurentPoly::q_pow_minus_one(m * (t + 1)));
        for b in &spec.lower {
            let f = b.one_minus_times_q(m * t);
            ratio_den = &ratio_den * &f.num;
            ratio_num = &ratio_num * &f.den;
        }
        ratio_num = &ratio_num * &LaurentPoly::monomial(z.coeff.numer().clone(), z.exp);
        ratio_den = &ratio_den * &LaurentPoly::monomial(z.coeff.denom().clone(), 0);
        term = term.mul(&Frac { num: ratio_num, den: ratio_den.clone() });
        sum_num = &(&sum_num * &ratio_den) + &term.num;
        if term.num.is_zero() {
            break;
        }
    }
    Frac { num: sum_num, den: term.den }
}

/// Evaluate by direct expansion from the definition, as a check independent
/// of the ratio recursion: each term is a quotient of Pochhammer symbols.
pub fn eval_phi_direct(spec: &PhiSeriesSpec) -> Result<RatFunc, QHypergeomError> {
    Ok(eval_phi_frac_direct(spec).into_ratfunc()?)
}

fn eval_phi_frac_direct(spec: &PhiSeriesSpec) -> Frac {
    let m = spec.base_power;
    let n = spec.termination as i64;
    let d = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
    let z = &spec.argument;
    // common denominator: (Q;Q)_N * prod_v (b_v;Q)_N, with lower-coefficient
    // denominators moved to the numerator side
    let mut sum = Frac::from_poly(LaurentPoly::zero());
    for t in 0..=n {
        let mut num = LaurentPoly::one();
        let mut den = LaurentPoly::one();
        for a in &spec.upper {
            for j in 0..t {
                let f = a.one_minus_times_q(m * j);
                num = &num * &f.num;
                den = &den * &f.den;
            }
        }
        for j in 1..=t {
            den = &den * &(-LaurentPoly::q_pow_minus_one(m * j));
        }
        for b in &spec.lower {
            for j in 0..t {
                let f = b.one_minus_times_q(m * j);
                den = &den * &f.num;
                num = &num * &f.den;
            }
        }
        // ((-1)^t Q^(t(t-1)/2))^(1+s-r), always a Laurent monomial
        num = &num * &signed_monomial(t * d, m * t * (t - 1) / 2 * d);
        for _ in 0..t {
            num = &num * &LaurentPoly::monomial(z.coeff.numer().clone(), z.exp);
            den = &den * &LaurentPoly::monomial(z.coeff.denom().clone(), 0);
        }
        sum = Frac {
            num: &(&sum.num * &den) + &(&num * &sum.den),
            den: &sum.den * &den,
        };
        if num.is_zero() {
            break;
        }
    }
    sum
}

/// The four verified identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityId {
    One,
    Two,
    Three,
    Four,
}

impl IdentityId {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::One),
            2 => Some(Self::Two),
            3 => Some(Self::Three),
            4 => Some(Self::Four),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }
}

/// Exponent ranges for the free parameters and the maximal termination index.
#[derive(Debug, Clone, Copy)]
pub struct IdentityGrid {
    pub exp_min: i64,
    pub exp_max: i64,
    pub max_termination: u32,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        Self { exp_min: -4, exp_max: 8, max_termination: 8 }
    }
}

/// `(q^e; q^m)_count` as an integer polynomial.
fn poch(e: i64, m: i64, count: i64) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for j in 0..count {
        acc = &acc * &(LaurentPoly::one() - LaurentPoly::q_pow(e + m * j));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// One identity instance at a grid point: a left-hand series, an optional
/// right-hand series, and the right-hand prefactor
/// `q^pre_mono_exp * (q^pre_num_start; q)_count / (q^pre_den_start; q)_count`.
struct Instance {
    lhs: PhiSeriesSpec,
    rhs: Option<PhiSeriesSpec>,
    pre_num_start: i64,
    pre_mono_exp: i64,
    pre_den_start: i64,
    count: i64,
}

/// Whether `(q^e; q)_count` has a vanishing factor `1 - q^(e+j)`.
fn poch_vanishes(e: i64, count: i64) -> bool {
    -e >= 0 && -e < count
}

/// Builds the identity instance, or `None` when the point is undefined (a
/// lower Pochhammer factor vanishes before termination, the termination
/// witness is missing, or the prefactor denominator vanishes).
fn instance(id: IdentityId, point: &[i64]) -> Option<Instance> {
    match id {
        IdentityId::One | IdentityId::Two => {
            let (n, beta, gamma) = (point[0], point[1], point[2]);
            if poch_vanishes(gamma, n) {
                return None;
            }
            let z_exp = if id == IdentityId::One { gamma + n - beta } else { 1 };
            let lhs = PhiSeriesSpec::new(
                vec![PhiParam::q_pow(-n), PhiParam::q_pow(beta)],
                vec![PhiParam::q_pow(gamma)],
                1,
                PhiParam::q_pow(z_exp),
                n as u32,
            )
            .ok()?;
            Some(Instance {
                lhs,
                rhs: None,
                pre_num_start: gamma - beta,
                pre_mono_exp: if id == IdentityId::Two { beta * n } else { 0 },
                pre_den_start: gamma,
                count: n,
            })
        }
        IdentityId::Three => {
            let (n, beta, gamma, delta, eps) = (point[0], point[1], point[2], point[3], point[4]);
            if poch_vanishes(eps, n) {
                return None;
            }
            let lhs = PhiSeriesSpec::new(
                vec![PhiParam::q_pow(-n), PhiParam::q_pow(beta), PhiParam::q_pow(gamma)],
                vec![PhiParam::q_pow(delta), PhiParam::q_pow(eps)],
                1,
                PhiParam::q_pow(delta + eps + n - beta - gamma),
                n as u32,
            )
            .ok()?;
            let rhs = PhiSeriesSpec::new(
                vec![PhiParam::q_pow(-n), PhiParam::q_pow(gamma), PhiParam::q_pow(delta - beta)],
                vec![PhiParam::q_pow(delta), PhiParam::q_pow(gamma + 1 - n - eps)],
                1,
                PhiParam::q_pow(1),
                n as u32,
            )
            .ok()?;
            Some(Instance {
                lhs,
                rhs: Some(rhs),
                pre_num_start: eps - gamma,
                pre_mono_exp: 0,
                pre_den_start: eps,
                count: n,
            })
        }
        IdentityId::Four => {
            let (n, alpha, beta, delta) = (point[0], point[1], point[2], point[3]);
            if poch_vanishes(delta, n) {
                return None;
            }
            let lhs = PhiSeriesSpec::new(
                vec![
                    PhiParam::q_pow(-n),
                    PhiParam::q_pow(1 - n),
                    PhiParam::q_pow(alpha),
                    PhiParam::q_pow(alpha + 1),
                ],
                vec![
                    PhiParam::q_pow(1 + 2 * beta),
                    PhiParam::q_pow(delta),
                    PhiParam::q_pow(delta + 1),
                ],
                2,
                PhiParam::q_pow(2),
                (n / 2) as u32,
            )
            .ok()?;
            let rhs = PhiSeriesSpec::new(
                vec![
                    PhiParam::q_pow(-n),
                    PhiParam::q_pow(alpha),
                    PhiParam::q_pow(beta),
                    PhiParam::neg_q_pow(beta),
                ],
                vec![PhiParam::q_pow(2 * beta), PhiParam::q_pow(alpha + 1 - n - delta)],
                1,
                PhiParam::neg_q_pow(1 - delta),
                n as u32,
            )
            .ok()?;
            Some(Instance {
                lhs,
                rhs: Some(rhs),
                pre_num_start: delta - alpha,
                pre_mono_exp: alpha * n,
                pre_den_start: delta,
                count: n,
            })
        }
    }
}

/// Both sides of one identity at one grid point, as unreduced fractions.
fn identity_sides(id: IdentityId, point: &[i64], both_paths: bool) -> Option<Vec<(Frac, Frac)>> {
    let inst = instance(id, point)?;
    let eval = |spec: &PhiSeriesSpec| -> Vec<Frac> {
        if both_paths {
            vec![eval_phi_frac_ratio(spec), eval_phi_frac_direct(spec)]
        } else {
            vec![eval_phi_frac_ratio(spec)]
        }
    };
    let pre = Frac {
        num: &poch(inst.pre_num_start, 1, inst.count) * &LaurentPoly::q_pow(inst.pre_mono_exp),
        den: poch(inst.pre_den_start, 1, inst.count),
    };
    let ls = eval(&inst.lhs);
    let rs: Vec<Frac> = match &inst.rhs {
        Some(spec) => eval(spec).iter().map(|r| pre.mul(r)).collect(),
        None => ls.iter().map(|_| pre.clone()).collect(),
    };
    Some(ls.into_iter().zip(rs).collect())
}

// ---------------------------------------------------------------------------
// Fast exact kernel
//
// Every grid parameter is ±q^e, so each series value is a dense integer
// Laurent polynomial over a denominator that is a pure product of factors
// (1 - s q^e). Keeping the denominator factored (and cancelling factor
// multisets before the final cross-multiplication) avoids every large
// polynomial-times-polynomial product. Coefficients use i128 with a tracked
// 1-norm bound; if the bound could overflow, the point falls back to the
// arbitrary-precision path.
// ---------------------------------------------------------------------------

const FAST_NORM_LIMIT: u128 = 1 << 119;

/// Dense integer Laurent polynomial with a running bound on the sum of
/// absolute coefficient values.
#[derive(Debug, Clone)]
struct FPoly {
    min: i64,
    coeffs: Vec<i128>,
    norm: u128,
    poisoned: bool,
}

impl FPoly {
    fn one() -> Self {
        Self { min: 0, coeffs: vec![1], norm: 1, poisoned: false }
    }

    fn zero() -> Self {
        Self { min: 0, coeffs: Vec::new(), norm: 0, poisoned: false }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min = 0;
        }
    }

    /// `self *= (1 - sign * q^exp)`.
    fn mul_binomial(&mut self, sign: i64, exp: i64) {
        if self.poisoned || self.is_zero() {
            return;
        }
        if self.norm > FAST_NORM_LIMIT {
            self.poisoned = true;
            return;
        }
        let new_min = self.min.min(self.min + exp);
        let mut out = vec![0i128; self.coeffs.len() + exp.unsigned_abs() as usize];
        let off = (self.min - new_min) as usize;
        let off_sh = (self.min + exp - new_min) as usize;
        for (i, &v) in self.coeffs.iter().enumerate() {
            out[off + i] += v;
        }
        if sign >= 0 {
            for (i, &v) in self.coeffs.iter().enumerate() {
                out[off_sh + i] -= v;
            }
        } else {
            for (i, &v) in self.coeffs.iter().enumerate() {
                out[off_sh + i] += v;
            }
        }
        self.coeffs = out;
        self.min = new_min;
        self.norm = self.norm.saturating_mul(2);
        self.trim();
    }

    /// `self *= sign * q^exp` with `sign` in {1, -1}.
    fn mul_monomial(&mut self, sign: i64, exp: i64) {
        if self.is_zero() {
            return;
        }
        self.min += exp;
        if sign < 0 {
            for c in &mut self.coeffs {
                *c = -*c;
            }
        }
    }

    fn add(&self, other: &FPoly) -> FPoly {
        let poisoned = self.poisoned || other.poisoned;
        if self.is_zero() {
            let mut r = other.clone();
            r.poisoned = poisoned;
            return r;
        }
        if other.is_zero() {
            let mut r = self.clone();
            r.poisoned = poisoned;
            return r;
        }
        let min = self.min.min(other.min);
        let max = (self.min + self.coeffs.len() as i64)
            .max(other.min + other.coeffs.len() as i64);
        let mut out = vec![0i128; (max - min) as usize];
        for (i, &v) in self.coeffs.iter().enumerate() {
            out[(self.min - min) as usize + i] += v;
        }
        for (i, &v) in other.coeffs.iter().enumerate() {
            out[(other.min - min) as usize + i] += v;
        }
        let mut r = FPoly {
            min,
            coeffs: out,
            norm: self.norm.saturating_add(other.norm),
            poisoned,
        };
        r.trim();
        r
    }

    /// Structural equality (canonical after `trim`), ignoring the norm bound.
    fn same(&self, other: &FPoly) -> bool {
        self.min == other.min && self.coeffs == other.coeffs
    }
}

/// Fraction with a dense numerator and a factored denominator
/// `prod (1 - s q^e)`.
type FactorList = Vec<(i64, i64)>;

#[derive(Debug, Clone)]
struct FFrac {
    num: FPoly,
    den: FactorList,
}

/// Cancels the common multiset of denominator factors, returning residuals.
fn cancel_dens(a: &[(i64, i64)], b: &[(i64, i64)]) -> (FactorList, FactorList) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut ra, mut rb) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                ra.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                rb.push(b[j]);
                j += 1;
            }
        }
    }
    ra.extend_from_slice(&a[i..]);
    rb.extend_from_slice(&b[j..]);
    (ra, rb)
}

/// Exact equality by cross-multiplication with pre-cancelled denominators;
/// `None` when the norm bound overflowed.
fn frac_eq(a: &FFrac, b: &FFrac) -> Option<bool> {
    let (ra, rb) = cancel_dens(&a.den, &b.den);
    let mut la = a.num.clone();
    for &(s, e) in &rb {
        la.mul_binomial(s, e);
    }
    let mut lb = b.num.clone();
    for &(s, e) in &ra {
        lb.mul_binomial(s, e);
    }
    if la.poisoned || lb.poisoned {
        None
    } else {
        Some(la.same(&lb))
    }
}

/// The parameter as `sign * q^exp` when its coefficient is ±1.
fn as_signed_power(p: &PhiParam) -> Option<(i64, i64)> {
    if p.coeff.is_one() {
        Some((1, p.exp))
    } else if p.coeff == -BigRational::one() {
        Some((-1, p.exp))
    } else {
        None
    }
}

fn pm(parity: i64) -> i64 {
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Ratio-recursion evaluation in the fast kernel.
fn fast_eval_ratio(spec: &PhiSeriesSpec) -> Option<FFrac> {
    let m = spec.base_power;
    let d = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
    let (zs, ze) = as_signed_power(&spec.argument)?;
    let ups: Vec<(i64, i64)> =
        spec.upper.iter().map(as_signed_power).collect::<Option<_>>()?;
    let lows: Vec<(i64, i64)> =
        spec.lower.iter().map(as_signed_power).collect::<Option<_>>()?;
    let mut term = FPoly::one();
    let mut sum = FPoly::one();
    let mut den = Vec::new();
    for t in 0..spec.termination as i64 {
        term.mul_monomial(pm(d), m * t * d);
        for &(s, e) in &ups {
            term.mul_binomial(s, e + m * t);
        }
        term.mul_monomial(zs, ze);
        sum.mul_binomial(1, m * (t + 1));
        den.push((1, m * (t + 1)));
        for &(s, e) in &lows {
            sum.mul_binomial(s, e + m * t);
            den.push((s, e + m * t));
        }
        sum = sum.add(&term);
        if term.is_zero() {
            break;
        }
    }
    if sum.poisoned || term.poisoned {
        return None;
    }
    Some(FFrac { num: sum, den })
}

/// Direct Pochhammer-quotient evaluation in the fast kernel, over the common
/// denominator `(Q; Q)_N * prod_v (b_v; Q)_N`.
fn fast_eval_direct(spec: &PhiSeriesSpec) -> Option<FFrac> {
    let m = spec.base_power;
    let n = spec.termination as i64;
    let d = 1 + spec.lower.len() as i64 - spec.upper.len() as i64;
    let (zs, ze) = as_signed_power(&spec.argument)?;
    let ups: Vec<(i64, i64)> =
        spec.upper.iter().map(as_signed_power).collect::<Option<_>>()?;
    let lows: Vec<(i64, i64)> =
        spec.lower.iter().map(as_signed_power).collect::<Option<_>>()?;
    let mut den = Vec::new();
    for j in 1..=n {
        den.push((1, m * j));
    }
    for &(s, e) in &lows {
        for j in 0..n {
            den.push((s, e + m * j));
        }
    }
    let mut sum = FPoly::zero();
    for t in 0..=n {
        let mut term = FPoly::one();
        term.mul_monomial(pm(t * d), m * t * (t - 1) / 2 * d);
        for &(s, e) in &ups {
            for j in 0..t {
                term.mul_binomial(s, e + m * j);
            }
        }
        term.mul_monomial(pm(if zs < 0 { t } else { 0 }), ze * t);
        for j in (t + 1)..=n {
            term.mul_binomial(1, m * j);
        }
        for &(s, e) in &lows {
            for j in t..n {
                term.mul_binomial(s, e + m * j);
            }
        }
        sum = sum.add(&term);
    }
    if sum.poisoned {
        return None;
    }
    Some(FFrac { num: sum, den })
}

/// Applies the right-hand prefactor to a series value.
fn apply_prefactor(mut rhs: FFrac, inst: &Instance) -> FFrac {
    for j in 0..inst.count {
        rhs.num.mul_binomial(1, inst.pre_num_start + j);
    }
    rhs.num.mul_monomial(1, inst.pre_mono_exp);
    for j in 0..inst.count {
        rhs.den.push((1, inst.pre_den_start + j));
    }
    rhs
}

enum FastOutcome {
    Pass,
    Fail,
    Skip,
}

/// Full point check in the fast kernel; `None` requests the fallback path.
fn check_point_fast(id: IdentityId, point: &[i64], both_paths: bool) -> Option<FastOutcome> {
    let inst = match instance(id, point) {
        None => return Some(FastOutcome::Skip),
        Some(i) => i,
    };
    let one_frac = || FFrac { num: FPoly::one(), den: Vec::new() };
    let lhs_ratio = fast_eval_ratio(&inst.lhs)?;
    let rhs_ratio = apply_prefactor(
        match &inst.rhs {
            Some(spec) => fast_eval_ratio(spec)?,
            None => one_frac(),
        },
        &inst,
    );
    let mut ok = frac_eq(&lhs_ratio, &rhs_ratio)?;
    if ok && both_paths {
        let lhs_direct = fast_eval_direct(&inst.lhs)?;
        let rhs_direct = apply_prefactor(
            match &inst.rhs {
                Some(spec) => fast_eval_direct(spec)?,
                None => one_frac(),
            },
            &inst,
        );
        ok = frac_eq(&lhs_direct, &rhs_direct)?;
    }
    Some(if ok { FastOutcome::Pass } else { FastOutcome::Fail })
}

fn check_point_slow(id: IdentityId, point: &[i64], both_paths: bool) -> PointOutcome {
    match identity_sides(id, point, both_paths) {
        None => PointOutcome::Skip,
        Some(pairs) => {
            for (lhs, rhs) in &pairs {
                // exact equality by cross-multiplication; no gcd needed
                if &lhs.num * &rhs.den != &rhs.num * &lhs.den {
                    let l = RatFunc::new(lhs.num.clone(), lhs.den.clone()).unwrap();
                    let r = RatFunc::new(rhs.num.clone(), rhs.den.clone()).unwrap();
                    return PointOutcome::Fail(Failure {
                        point: format!("{point:?}"),
                        lhs: l.to_string(),
                        rhs: r.to_string(),
                    });
                }
            }
            PointOutcome::Pass
        }
    }
}

fn check_point(id: IdentityId, point: &[i64], both_paths: bool) -> PointOutcome {
    match check_point_fast(id, point, both_paths) {
        Some(FastOutcome::Pass) => PointOutcome::Pass,
        Some(FastOutcome::Skip) => PointOutcome::Skip,
        // failures and norm-bound overflows re-run on the arbitrary-precision
        // path, which is authoritative and produces the failure report
        Some(FastOutcome::Fail) | None => check_point_slow(id, point, both_paths),
    }
}

fn grid_points(id: IdentityId, grid: IdentityGrid) -> Vec<Vec<i64>> {
    let exps = (grid.exp_min..=grid.exp_max).collect::<Vec<_>>();
    let ns = (1..=grid.max_termination as i64).collect::<Vec<_>>();
    let mut points = Vec::new();
    match id {
        IdentityId::One | IdentityId::Two => {
            for &n in &ns {
                for &b in &exps {
                    for &c in &exps {
                        points.push(vec![n, b, c]);
                    }
                }
            }
        }
        IdentityId::Three => {
            for &n in &ns {
                for &b in &exps {
                    for &c in &exps {
                        for &d in &exps {
                            for &e in &exps {
                                points.push(vec![n, b, c, d, e]);
                            }
                        }
                    }
                }
            }
        }
        IdentityId::Four => {
            for &n in &ns {
                for &a in &exps {
                    for &b in &exps {
                        for &d in &exps {
                            points.push(vec![n, a, b, d]);
                        }
                    }
                }
            }
        }
    }
    points
}

/// Verify one identity over the grid, in parallel, checking both evaluation
/// paths at every defined point.
pub fn verify_identity(id: IdentityId, grid: IdentityGrid) -> VerificationReport {
    let points = grid_points(id, grid);
    let outcomes: Vec<PointOutcome> =
        points.par_iter().map(|p| check_point(id, p, true)).collect();
    VerificationReport::collect(
        format!("hypergeometric identity {}", id.index()),
        format!(
            "exponents in [{}, {}], termination <= {}",
            grid.exp_min, grid.exp_max, grid.max_termination
        ),
        outcomes,
    )
}
