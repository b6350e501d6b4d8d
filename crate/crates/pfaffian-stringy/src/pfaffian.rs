//! Discrepancies and (modified) stringy E-functions of Pfaffian varieties:
//! closed-form products, the stratification recursion, and the key lemma
//! relating the two.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use thiserror::Error;

use crate::qalgebra::{LaurentPoly, RatFunc};
use crate::qseries::{self, QSeriesError};
use crate::report::{Failure, PointOutcome, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfaffianError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

/// The Pfaffian variety Pf(2k, V) of skew forms of rank at most 2k on an
/// n-dimensional space V, projectivized in P(∧²V).
///
/// The geometrically interesting range is n ≥ 4, but n = 2 is accepted so
/// that the stratification recursion can bottom out at Pf(2, C²) = point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PfaffianSpec {
    n: i64,
    k: i64,
}

impl PfaffianSpec {
    pub fn new(n: i64, k: i64) -> Result<Self, PfaffianError> {
        if n < 2 {
            return Err(PfaffianError::Range(format!("n must be at least 2, got {n}")));
        }
        if k < 1 || k > n / 2 {
            return Err(PfaffianError::Range(format!(
                "k must satisfy 1 <= k <= floor(n/2), got k={k}, n={n}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn is_even(&self) -> bool {
        self.n % 2 == 0
    }
}

/// Which discrepancy assignment to use for the exceptional divisors of the
/// resolution by complete skew forms. The modified kind is defined only for
/// even n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscrepancyKind {
    Usual,
    Modified,
}

/// Dimension of Pf(2k, V): 2nk - 2k² - k - 1.
pub fn dim_pf(spec: PfaffianSpec) -> i64 {
    2 * spec.n * spec.k - 2 * spec.k * spec.k - spec.k - 1
}

/// Coefficient of the hyperplane class ξ in the canonical class of
/// Pf(2k, V): K = -nk·ξ.
pub fn canonical_coefficient(spec: PfaffianSpec) -> i64 {
    -spec.n * spec.k
}

/// Discrepancy of the exceptional divisor D_j of the resolution of
/// Pf(2k, V) by complete skew forms, for even n and
/// (n-2k+2)/2 <= j <= (n-2)/2.
pub fn discrepancy(j: i64, k: i64, n: i64, kind: DiscrepancyKind) -> Result<i64, PfaffianError> {
    if n % 2 != 0 {
        return Err(PfaffianError::Parity(format!("discrepancies require even n, got {n}")));
    }
    if k < 1 || k > n / 2 {
        return Err(PfaffianError::Range(format!(
            "k must satisfy 1 <= k <= n/2, got k={k}, n={n}"
        )));
    }
    if j < (n - 2 * k + 2) / 2 || j > (n - 2) / 2 {
        return Err(PfaffianError::Range(format!(
            "divisor index j={j} outside [(n-2k+2)/2, (n-2)/2] for k={k}, n={n}"
        )));
    }
    Ok(match kind {
        DiscrepancyKind::Usual => 2 * j * j - j * (n - 2 * k) - 1,
        DiscrepancyKind::Modified => 2 * j * j - j * (n - 2 * k + 1) + (n - 2 * k - 2) / 2,
    })
}

/// The product ∏_{j=lo}^{hi} (q^{2j} - 1)/(q^{2j - shift} - 1), with the
/// convention that a descending range is the empty product.
///
/// A numerator factor with j = 0 makes the whole product zero; this is how
/// out-of-range strata terms vanish in the key lemma.
fn binomial_style_product(lo: i64, hi: i64, shift: i64) -> RatFunc {
    let mut acc = RatFunc::one();
    for j in lo..=hi {
        let factor = RatFunc::new(
            LaurentPoly::q_pow_minus_one(2 * j),
            LaurentPoly::q_pow_minus_one(2 * j - shift),
        )
        .expect("nonzero denominator in discrepancy product");
        acc = acc.mul(&factor);
    }
    acc
}

/// Closed-form (modified) stringy E-function of Pf(2k, V), for even n:
///
/// - usual:    (q^{nk} - 1)/(q - 1) · ∏_{j=1}^{k} (q^{n+1-2j} - 1)/(q^{2j} - 1)
/// - modified: (q^{(n-1)k} - 1)/(q - 1) · ∏_{j=k+1}^{n/2} (q^{2j} - 1)/(q^{2j-2k} - 1)
pub fn stringy_pf_closed(spec: PfaffianSpec, kind: DiscrepancyKind) -> Result<RatFunc, PfaffianError> {
    if !spec.is_even() {
        return Err(PfaffianError::Parity(format!(
            "closed stringy E-functions require even n, got {}",
            spec.n
        )));
    }
    let (n, k) = (spec.n, spec.k);
    Ok(match kind {
        DiscrepancyKind::Usual => {
            let mut num = LaurentPoly::q_pow_minus_one(n * k);
            let mut den = LaurentPoly::q_pow_minus_one(1);
            for j in 1..=k {
                num = &num * &LaurentPoly::q_pow_minus_one(n + 1 - 2 * j);
                den = &den * &LaurentPoly::q_pow_minus_one(2 * j);
            }
            RatFunc::new(num, den).expect("nonzero denominator")
        }
        DiscrepancyKind::Modified => {
            let prefactor = RatFunc::new(
                LaurentPoly::q_pow_minus_one((n - 1) * k),
                LaurentPoly::q_pow_minus_one(1),
            )
            .expect("nonzero denominator");
            prefactor.mul(&binomial_style_product(k + 1, n / 2, 2 * k))
        }
    })
}

type StrataCache = HashMap<(i64, i64, DiscrepancyKind), RatFunc>;

fn strata_cache() -> &'static Mutex<HashMap<(i64, i64, DiscrepancyKind), RatFunc>> {
    static CACHE: OnceLock<Mutex<StrataCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Stringy E-function of Pf(2k, V) via the stratification recursion
///
/// `Σ_{i=1}^{k} e_strata_pf(i, n) · w_i`
///
/// where w_k = 1 (open stratum, empty resolution data) and, for i < k,
/// `w_i = stringy_pf_strata(k-i, n-2i, kind) · (q-1)/(q^{δ+1}-1)` with
/// δ the discrepancy of the divisor D_{(n-2i)/2}. Must agree with
/// [`stringy_pf_closed`] for both kinds.
pub fn stringy_pf_strata(spec: PfaffianSpec, kind: DiscrepancyKind) -> Result<RatFunc, PfaffianError> {
    if !spec.is_even() {
        return Err(PfaffianError::Parity(format!(
            "stringy E-functions require even n, got {}",
            spec.n
        )));
    }
    let key = (spec.n, spec.k, kind);
    if let Some(v) = strata_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let (n, k) = (spec.n, spec.k);
    let mut acc = RatFunc::zero();
    for i in 1..=k {
        let stratum = qseries::e_strata_pf(i, n)?;
        let weight = if i == k {
            RatFunc::one()
        } else {
            let inner = stringy_pf_strata(PfaffianSpec::new(n - 2 * i, k - i)?, kind)?;
            let delta = discrepancy((n - 2 * i) / 2, k, n, kind)?;
            let factor = RatFunc::new(
                LaurentPoly::q_pow_minus_one(1),
                LaurentPoly::q_pow_minus_one(delta + 1),
            )
            .expect("nonzero discrepancy denominator");
            inner.mul(&factor)
        };
        acc = acc.add(&stratum.mul(&weight));
    }
    strata_cache().lock().unwrap().insert(key, acc.clone());
    Ok(acc)
}

/// Checks the lemma underlying the stratification proof: for even n and
/// 1 <= k <= (n-2)/2,
///
/// `Σ_{1<=i<=n/2} e_{2i} g_{n-2i,n} ∏_{j=k-i+1}^{(n-2i)/2} (q^{2j}-1)/(q^{2j-2k+2i}-1)`
///
/// equals the modified closed form. The terms with i > k vanish because the
/// product then contains the numerator factor q^0 - 1; this is not
/// special-cased.
pub fn verify_key_lemma(n: i64, k: i64) -> Result<VerificationReport, PfaffianError> {
    if n % 2 != 0 {
        return Err(PfaffianError::Parity(format!("key lemma requires even n, got {n}")));
    }
    if k < 1 || k > (n - 2) / 2 {
        return Err(PfaffianError::Range(format!(
            "key lemma requires 1 <= k <= (n-2)/2, got k={k}, n={n}"
        )));
    }
    let mut lhs = RatFunc::zero();
    for i in 1..=n / 2 {
        let term = qseries::e_nondeg_skew(i)?
            .mul(&qseries::e_grassmannian(n - 2 * i, n)?)
            .mul(&binomial_style_product(k - i + 1, (n - 2 * i) / 2, 2 * k - 2 * i));
        lhs = lhs.add(&term);
    }
    let rhs = stringy_pf_closed(PfaffianSpec::new(n, k)?, DiscrepancyKind::Modified)?;
    let outcome = if lhs == rhs {
        PointOutcome::Pass
    } else {
        PointOutcome::Fail(Failure {
            point: format!("n={n},k={k}"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    };
    Ok(VerificationReport::collect(
        "key-lemma",
        format!("n={n},k={k}"),
        vec![outcome],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn spec(n: i64, k: i64) -> PfaffianSpec {
        PfaffianSpec::new(n, k).unwrap()
    }

    fn at(f: &RatFunc, x: i64) -> BigRational {
        f.eval_at(&BigRational::from(BigInt::from(x))).unwrap()
    }

    fn int(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_pf(spec(6, 1)), 8); // G(2,6)
        assert_eq!(dim_pf(spec(6, 2)), 13); // hypersurface in P^14
        assert_eq!(dim_pf(spec(7, 3)), 20); // all of P(∧²C⁷)
        assert_eq!(canonical_coefficient(spec(6, 2)), -12);
    }

    #[test]
    fn spec_validation() {
        assert!(PfaffianSpec::new(1, 1).is_err());
        assert!(PfaffianSpec::new(6, 0).is_err());
        assert!(PfaffianSpec::new(6, 4).is_err());
        assert!(PfaffianSpec::new(2, 1).is_ok());
    }

    #[test]
    fn discrepancy_values() {
        assert_eq!(discrepancy(2, 2, 6, DiscrepancyKind::Usual).unwrap(), 3);
        assert_eq!(discrepancy(2, 2, 6, DiscrepancyKind::Modified).unwrap(), 2);
        // out of the divisor index range
        assert!(discrepancy(1, 2, 6, DiscrepancyKind::Usual).is_err());
        assert!(discrepancy(3, 2, 6, DiscrepancyKind::Usual).is_err());
        assert!(discrepancy(2, 2, 7, DiscrepancyKind::Usual).is_err());
    }

    #[test]
    fn discrepancy_difference_is_linear() {
        for n in (6..=20).step_by(2) {
            for k in 2..=(n - 2) / 2 {
                for j in (n - 2 * k + 2) / 2..=(n - 2) / 2 {
                    let usual = discrepancy(j, k, n, DiscrepancyKind::Usual).unwrap();
                    let modified = discrepancy(j, k, n, DiscrepancyKind::Modified).unwrap();
                    assert_eq!(usual - modified, j - (n - 2 * k) / 2, "j={j},k={k},n={n}");
                }
            }
        }
    }

    #[test]
    fn discrepancy_boundary_values() {
        // at j = (n-2i)/2 the discrepancies take the closed boundary values
        // used in the stratification recursion
        for n in (6..=20).step_by(2) {
            for k in 2..=(n - 2) / 2 {
                for i in 1..k {
                    let j = (n - 2 * i) / 2;
                    assert_eq!(
                        discrepancy(j, k, n, DiscrepancyKind::Modified).unwrap(),
                        (n - 2 * i - 1) * (k - i) - 1
                    );
                    assert_eq!(
                        discrepancy(j, k, n, DiscrepancyKind::Usual).unwrap(),
                        (n - 2 * i) * (k - i) - 1
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_displays() {
        let usual: RatFunc = "(q^12 - 1)(q^3 - 1)(q^5 - 1) / ((q - 1)(q^2 - 1)(q^4 - 1))"
            .parse()
            .unwrap();
        assert_eq!(stringy_pf_closed(spec(6, 2), DiscrepancyKind::Usual).unwrap(), usual);
        assert!(!stringy_pf_closed(spec(6, 2), DiscrepancyKind::Usual).unwrap().is_polynomial());
        assert!(stringy_pf_closed(spec(6, 2), DiscrepancyKind::Modified).unwrap().is_polynomial());
        assert_eq!(at(&stringy_pf_closed(spec(6, 2), DiscrepancyKind::Modified).unwrap(), 2), int(21483));
        assert_eq!(at(&stringy_pf_closed(spec(6, 2), DiscrepancyKind::Usual).unwrap(), 2), int(19747));
    }

    #[test]
    fn smooth_case_collapses_to_grassmannian() {
        for n in (4..=12).step_by(2) {
            let g = qseries::e_grassmannian(2, n).unwrap();
            assert_eq!(stringy_pf_closed(spec(n, 1), DiscrepancyKind::Usual).unwrap(), g);
            assert_eq!(stringy_pf_closed(spec(n, 1), DiscrepancyKind::Modified).unwrap(), g);
        }
    }

    #[test]
    fn strata_recursion_matches_closed_form() {
        for n in (4..=10).step_by(2) {
            for k in 1..=n / 2 {
                for kind in [DiscrepancyKind::Usual, DiscrepancyKind::Modified] {
                    assert_eq!(
                        stringy_pf_strata(spec(n, k), kind).unwrap(),
                        stringy_pf_closed(spec(n, k), kind).unwrap(),
                        "n={n},k={k},kind={kind:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn strata_values_at_two() {
        assert_eq!(at(&stringy_pf_strata(spec(6, 2), DiscrepancyKind::Modified).unwrap(), 2), int(21483));
        assert_eq!(at(&stringy_pf_strata(spec(6, 2), DiscrepancyKind::Usual).unwrap(), 2), int(19747));
    }

    #[test]
    fn modified_euler_characteristic() {
        // q -> 1 limit of the modified closed form is (n-1)k * C(n/2, k)
        fn binom(n: i64, k: i64) -> i64 {
            if k < 0 || k > n {
                return 0;
            }
            let mut acc = 1i64;
            for j in 0..k {
                acc = acc * (n - j) / (j + 1);
            }
            acc
        }
        for n in (4..=12).step_by(2) {
            for k in 1..=n / 2 {
                let f = stringy_pf_closed(spec(n, k), DiscrepancyKind::Modified).unwrap();
                assert_eq!(f.limit_at_one().unwrap(), int((n - 1) * k * binom(n / 2, k)));
            }
        }
    }

    #[test]
    fn key_lemma_small_cases() {
        for n in [4i64, 6, 8] {
            for k in 1..=(n - 2) / 2 {
                let report = verify_key_lemma(n, k).unwrap();
                assert!(report.passed(), "n={n},k={k}");
            }
        }
        assert!(verify_key_lemma(6, 3).is_err());
        assert!(verify_key_lemma(7, 1).is_err());
    }
}
