//! q-combinatorial building blocks: Pochhammer symbols, Gaussian binomials,
//! and E-polynomials of projective spaces, Grassmannians, nondegenerate skew
//! forms and Pfaffian rank strata.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use thiserror::Error;

use crate::qalgebra::{LaurentPoly, RatFunc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("parameter out of range: {0}")]
    Range(String),
}

/// A q-Pochhammer symbol `(±q^e; q^m)_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QSymbolSpec {
    pub start_exponent: i64,
    pub step: i64,
    pub count: u32,
}

impl QSymbolSpec {
    pub fn new(start_exponent: i64, step: i64, count: u32) -> Self {
        assert!(step >= 1, "step must be positive");
        Self { start_exponent, step, count }
    }
}

/// `(sign * q^e; q^m)_count = prod_{t=0}^{count-1} (1 - sign * q^(e + m t))`.
pub fn q_pochhammer(spec: QSymbolSpec, sign: i64) -> LaurentPoly {
    assert!(sign == 1 || sign == -1);
    let mut acc = LaurentPoly::one();
    for t in 0..spec.count as i64 {
        let factor =
            LaurentPoly::one() - LaurentPoly::monomial(sign, spec.start_exponent + spec.step * t);
        acc = &acc * &factor;
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Pochhammer symbol `(q^e; q^m)_count` with positive base sign.
pub fn q_pochhammer_pos(start_exponent: i64, step: i64, count: u32) -> LaurentPoly {
    q_pochhammer(QSymbolSpec::new(start_exponent, step, count), 1)
}

/// The Gaussian binomial coefficient in base `q^power`.
///
/// Returns 0 for `k < 0` or `k > n`; this matches the silent vanishing of
/// out-of-range product terms used throughout the stratification sums.
pub fn gauss_binomial(n: i64, k: i64, power: i64) -> LaurentPoly {
    assert!(power >= 1);
    if k < 0 || k > n {
        return LaurentPoly::zero();
    }
    let k = k.min(n - k);
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for j in 0..k {
        num = &num * &LaurentPoly::q_pow_minus_one(power * (n - j));
        den = &den * &LaurentPoly::q_pow_minus_one(power * (j + 1));
    }
    let r = RatFunc::new(num, den).expect("nonzero denominator");
    r.as_polynomial().expect("Gaussian binomial is a polynomial").clone()
}

/// E-polynomial of the projective space P^n: `1 + q + ... + q^n`.
pub fn e_projective(n: i64) -> RatFunc {
    assert!(n >= 0);
    RatFunc::new(LaurentPoly::q_pow_minus_one(n + 1), LaurentPoly::q_pow_minus_one(1))
        .expect("nonzero denominator")
}

/// E-polynomial of the Grassmannian G(k, n).
pub fn e_grassmannian(k: i64, n: i64) -> Result<RatFunc, QSeriesError> {
    if k < 0 || k > n {
        return Err(QSeriesError::Range(format!("G({k},{n}) requires 0 <= k <= n")));
    }
    Ok(RatFunc::from_poly(gauss_binomial(n, k, 1)))
}

fn nondeg_skew_cache() -> &'static Mutex<HashMap<i64, RatFunc>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, RatFunc>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// E-polynomial of the variety of non-degenerate skew forms on a
/// 2i-dimensional space, up to scaling.
///
/// Defined by the stratification recursion
/// `e_{2i} = E(P^(binom(2i,2)-1)) - sum_{p<i} e_strata_pf(p, 2i)`;
/// the closed form `q^(i(i-1)) prod_{j=1}^i (q^(2j-1)-1)/(q-1)` is checked
/// against it in tests.
pub fn e_nondeg_skew(i: i64) -> Result<RatFunc, QSeriesError> {
    if i < 1 {
        return Err(QSeriesError::Range(format!("e_nondeg_skew requires i >= 1, got {i}")));
    }
    if let Some(v) = nondeg_skew_cache().lock().unwrap().get(&i) {
        return Ok(v.clone());
    }
    let n = 2 * i;
    let mut acc = e_projective(n * (n - 1) / 2 - 1);
    for p in 1..i {
        acc = acc.sub(&e_strata_pf(p, n)?);
    }
    nondeg_skew_cache().lock().unwrap().insert(i, acc.clone());
    Ok(acc)
}

/// Closed form for `e_nondeg_skew`, used as an independent cross-check.
pub fn e_nondeg_skew_closed(i: i64) -> RatFunc {
    assert!(i >= 1);
    let mut num = LaurentPoly::q_pow(i * (i - 1));
    for j in 1..=i {
        num = &num * &LaurentPoly::q_pow_minus_one(2 * j - 1);
    }
    RatFunc::new(num, LaurentPoly::q_pow_minus_one(1)).unwrap()
}

/// E-polynomial of the rank-2i stratum of P(∧²V), dim V = n:
/// `e_{2i} * g_{n-2i, n}`.
pub fn e_strata_pf(i: i64, n: i64) -> Result<RatFunc, QSeriesError> {
    if i < 1 || i > n / 2 {
        return Err(QSeriesError::Range(format!(
            "e_strata_pf requires 1 <= i <= floor(n/2), got i={i}, n={n}"
        )));
    }
    let skew = e_nondeg_skew(i)?;
    let grass = e_grassmannian(n - 2 * i, n)?;
    Ok(skew.mul(&grass))
}
