//! The double-mirror comparison relations, their Euler-characteristic
//! shadows, and the numerical semiorthogonal-decomposition predictor for
//! linear sections of dual Pfaffian varieties.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::qalgebra::{LaurentPoly, RatFunc};
use crate::qseries::gauss_binomial;
use crate::report::{Failure, PointOutcome, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HpdError {
    #[error("parameter out of range: {0}")]
    Range(String),
}

/// A generic l-dimensional subspace W of ∧²V∨ with dim V = n, cutting the
/// double mirror pair X_W ⊂ Pf(2k, V∨) and Y_W ⊂ Pf(n-2k, V) (n even) or
/// Pf(n-1-2k, V) (n odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionSpec {
    n: i64,
    k: i64,
    l: i64,
}

impl SectionSpec {
    pub fn new(n: i64, k: i64, l: i64) -> Result<Self, HpdError> {
        if n < 4 {
            return Err(HpdError::Range(format!("n must be at least 4, got {n}")));
        }
        if k < 1 || k >= n / 2 {
            return Err(HpdError::Range(format!(
                "k must satisfy 1 <= k < floor(n/2), got k={k}, n={n}"
            )));
        }
        if l < 0 || l > n * (n - 1) / 2 {
            return Err(HpdError::Range(format!(
                "l must satisfy 0 <= l <= n(n-1)/2, got l={l}, n={n}"
            )));
        }
        Ok(Self { n, k, l })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn is_even(&self) -> bool {
        self.n % 2 == 0
    }

    /// The exponent weighting E(Y): (n-1)k for even n, nk for odd n.
    fn y_exponent(&self) -> i64 {
        if self.is_even() {
            (self.n - 1) * self.k
        } else {
            self.n * self.k
        }
    }

    fn ambient_binomial(&self) -> LaurentPoly {
        if self.is_even() {
            gauss_binomial(self.n / 2, self.k, 2)
        } else {
            gauss_binomial((self.n - 1) / 2, self.k, 2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarietyType {
    #[serde(rename = "Fano")]
    Fano,
    #[serde(rename = "CY")]
    CalabiYau,
    #[serde(rename = "general type")]
    GeneralType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    X,
    Y,
}

/// One maximal run of equal-size ambient blocks in a predicted
/// semiorthogonal decomposition, with its range of twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockGroup {
    pub count: i64,
    pub size: i64,
    pub first_twist: i64,
    pub last_twist: i64,
}

/// Predicted numerical shape of the semiorthogonal decomposition of one
/// side of the double mirror: the ambient blocks surviving the linear
/// section, plus the shared residual component C_W.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SodPrediction {
    pub side: Side,
    pub blocks: Vec<BlockGroup>,
    pub residual: &'static str,
}

impl SodPrediction {
    /// Total Euler-characteristic contribution of the ambient blocks.
    pub fn ambient_euler(&self) -> i64 {
        self.blocks.iter().map(|b| b.count * b.size).sum()
    }
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let mut acc = 1i64;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Right-hand side of the comparison relation:
///
/// - even n: `(q^l - q^{(n-1)k})/(q - 1) · binom(n/2, k)_{q²}`
/// - odd n:  `(q^l - q^{nk})/(q - 1) · binom((n-1)/2, k)_{q²}`
///
/// Always a polynomial.
pub fn relation_rhs(spec: SectionSpec) -> RatFunc {
    let m = spec.y_exponent();
    let num = LaurentPoly::monomial(1, spec.l) - LaurentPoly::monomial(1, m);
    let prefactor = RatFunc::new(num, LaurentPoly::q_pow_minus_one(1)).expect("nonzero denominator");
    prefactor.mul(&RatFunc::from_poly(spec.ambient_binomial()))
}

/// Checks the comparison relation against candidate (modified) stringy
/// E-functions for X_W and Y_W:
/// `q^{(n-1)k}·EY - q^l·EX = relation_rhs` (even; odd uses q^{nk}).
pub fn relation_check(ex: &RatFunc, ey: &RatFunc, spec: SectionSpec) -> bool {
    let lhs = RatFunc::q_pow(spec.y_exponent())
        .mul(ey)
        .sub(&RatFunc::q_pow(spec.l).mul(ex));
    lhs == relation_rhs(spec)
}

/// Verifies that the rewritten form of the even-n relation,
///
/// `(q^{nk-n/2} - q^l)/(q-1) · binom(n/2,k)_{q²}
///    + q^{nk-n/2} (q^n - 1)/((q-1)(q^{n/2-k} + 1)) · binom(n/2-1,k)_{q²}`,
///
/// equals the negated relation_rhs, as a pure rational-function identity.
pub fn rewritten_identity_check(spec: SectionSpec) -> Result<VerificationReport, HpdError> {
    if !spec.is_even() {
        return Err(HpdError::Range(format!("rewritten identity requires even n, got {}", spec.n)));
    }
    let (n, k, l) = (spec.n, spec.k, spec.l);
    let first = RatFunc::new(
        LaurentPoly::monomial(1, n * k - n / 2) - LaurentPoly::monomial(1, l),
        LaurentPoly::q_pow_minus_one(1),
    )
    .expect("nonzero denominator")
    .mul(&RatFunc::from_poly(gauss_binomial(n / 2, k, 2)));
    let second_den = &LaurentPoly::q_pow_minus_one(1)
        * &(LaurentPoly::one() + LaurentPoly::monomial(1, n / 2 - k));
    let second = RatFunc::new(
        &LaurentPoly::q_pow(n * k - n / 2) * &LaurentPoly::q_pow_minus_one(n),
        second_den,
    )
    .expect("nonzero denominator")
    .mul(&RatFunc::from_poly(gauss_binomial(n / 2 - 1, k, 2)));
    let lhs = first.add(&second);
    let rhs = relation_rhs(spec).neg();
    let outcome = if lhs == rhs {
        PointOutcome::Pass
    } else {
        PointOutcome::Fail(Failure {
            point: format!("n={n},k={k},l={l}"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    };
    Ok(VerificationReport::collect(
        "rewritten-identity",
        format!("n={n},k={k},l={l}"),
        vec![outcome],
    ))
}

/// χ(X_W) - χ(Y_W) as predicted by the q → 1 limit of the relation:
///
/// - even n: `(nk - l)·C(n/2, k) - (n/2)·C(n/2-1, n/2-k)`
/// - odd n:  `(nk - l)·C((n-1)/2, k)`
///
/// Both branches are cross-checked against limit_at_one of the negated
/// relation_rhs; a mismatch is an internal error.
pub fn euler_gap(spec: SectionSpec) -> i64 {
    let (n, k, l) = (spec.n, spec.k, spec.l);
    let displayed = if spec.is_even() {
        (n * k - l) * binom(n / 2, k) - (n / 2) * binom(n / 2 - 1, n / 2 - k)
    } else {
        (n * k - l) * binom((n - 1) / 2, k)
    };
    let via_limit = relation_rhs(spec)
        .neg()
        .limit_at_one()
        .expect("relation_rhs is a polynomial, no pole at q = 1");
    assert_eq!(
        via_limit,
        BigRational::from(BigInt::from(displayed)),
        "euler gap paths disagree at n={n},k={k},l={l}"
    );
    displayed
}

/// Fano / Calabi-Yau / general-type classification of (X_W, Y_W) by the
/// signs of the canonical-class coefficients: (l - nk)ξ for X_W and
/// (nk - n/2 - l)ξ (even) resp. (nk - l)ξ (odd) for Y_W.
pub fn classify_types(spec: SectionSpec) -> (VarietyType, VarietyType) {
    fn by_sign(coeff: i64) -> VarietyType {
        match coeff.cmp(&0) {
            std::cmp::Ordering::Less => VarietyType::Fano,
            std::cmp::Ordering::Equal => VarietyType::CalabiYau,
            std::cmp::Ordering::Greater => VarietyType::GeneralType,
        }
    }
    let (n, k, l) = (spec.n, spec.k, spec.l);
    let x = by_sign(l - n * k);
    let y = if spec.is_even() {
        by_sign(n * k - n / 2 - l)
    } else {
        by_sign(n * k - l)
    };
    (x, y)
}

/// Ambient block indices surviving on one side, as (index range, size fn,
/// twist fn) realized into grouped runs.
pub fn sod_predict(spec: SectionSpec, side: Side) -> SodPrediction {
    let (n, k, l) = (spec.n, spec.k, spec.l);
    let indices: Vec<i64>;
    let size_of: Box<dyn Fn(i64) -> i64>;
    let twist_of: Box<dyn Fn(i64) -> i64>;
    if spec.is_even() {
        match side {
            Side::X => {
                indices = (l..n * k).collect();
                size_of = Box::new(move |idx| {
                    if idx < n * k - n / 2 {
                        binom(n / 2, k)
                    } else {
                        binom(n / 2 - 1, k)
                    }
                });
                twist_of = Box::new(move |idx| idx - l + 1);
            }
            Side::Y => {
                let start = n * (n - 1) / 2 - l;
                indices = (start..n * n / 2 - n * k).collect();
                size_of = Box::new(move |idx| {
                    if idx < n * (n - 1) / 2 - n * k {
                        binom(n / 2, n / 2 - k)
                    } else {
                        binom(n / 2 - 1, n / 2 - k)
                    }
                });
                twist_of = Box::new(move |idx| -(idx - start + 1));
            }
        }
    } else {
        match side {
            Side::X => {
                indices = (l..n * k).collect();
                size_of = Box::new(move |_| binom((n - 1) / 2, k));
                twist_of = Box::new(move |idx| idx - l + 1);
            }
            Side::Y => {
                let start = n * (n - 1) / 2 - l;
                indices = (start..n * (n - 1) / 2 - n * k).collect();
                size_of = Box::new(move |_| binom((n - 1) / 2, k));
                twist_of = Box::new(move |idx| -(idx - start + 1));
            }
        }
    }
    let mut blocks: Vec<BlockGroup> = Vec::new();
    for idx in indices {
        let size = size_of(idx);
        let twist = twist_of(idx);
        match blocks.last_mut() {
            Some(g) if g.size == size => {
                g.count += 1;
                g.last_twist = twist;
            }
            _ => blocks.push(BlockGroup { count: 1, size, first_twist: twist, last_twist: twist }),
        }
    }
    SodPrediction { side, blocks, residual: "C_W" }
}

/// Checks that the Euler characteristics of the predicted decompositions
/// are consistent with the relation: Σ(count·size) over X-side ambient
/// blocks minus the Y-side total must equal euler_gap.
pub fn case_consistency(spec: SectionSpec) -> VerificationReport {
    let x = sod_predict(spec, Side::X).ambient_euler();
    let y = sod_predict(spec, Side::Y).ambient_euler();
    let gap = euler_gap(spec);
    let point = format!("n={},k={},l={}", spec.n, spec.k, spec.l);
    let outcome = if x - y == gap {
        PointOutcome::Pass
    } else {
        PointOutcome::Fail(Failure {
            point: point.clone(),
            lhs: format!("{}", x - y),
            rhs: format!("{gap}"),
        })
    };
    VerificationReport::collect("case-consistency", point, vec![outcome])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: i64, k: i64, l: i64) -> SectionSpec {
        SectionSpec::new(n, k, l).unwrap()
    }

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    fn k3() -> RatFunc {
        rf("1 + 22q + q^2")
    }

    fn cubic() -> RatFunc {
        rf("1 + q + 23q^2 + q^3 + q^4")
    }

    #[test]
    fn relation_rhs_examples() {
        assert_eq!(relation_rhs(spec(6, 1, 6)), rf("q^5 (1 + q^2 + q^4)"));
        assert!(relation_rhs(spec(6, 1, 5)).is_zero()); // l = (n-1)k
        assert!(relation_rhs(spec(7, 1, 7)).is_zero()); // l = nk, odd
        for n in [6i64, 7, 8] {
            for k in 1..n / 2 {
                for l in 0..=n * (n - 1) / 2 {
                    assert!(relation_rhs(spec(n, k, l)).is_polynomial());
                }
            }
        }
    }

    #[test]
    fn k3_cubic_instance() {
        assert!(relation_check(&k3(), &cubic(), spec(6, 1, 6)));
        let perturbed = cubic().add(&RatFunc::one());
        assert!(!relation_check(&k3(), &perturbed, spec(6, 1, 6)));
    }

    #[test]
    fn equal_dimension_case() {
        // l = (n-1)k: RHS vanishes and any equal pair passes
        let e = rf("1 + 5q + q^3");
        assert!(relation_check(&e, &e, spec(6, 2, 10)));
        assert!(!relation_check(&e, &e.add(&RatFunc::one()), spec(6, 2, 10)));
    }

    #[test]
    fn duality_symmetry() {
        // switching sides and replacing (k, l) by (n/2-k, n(n-1)/2-l)
        // preserves the relation
        assert!(relation_check(&cubic(), &k3(), spec(6, 2, 9)));
    }

    #[test]
    fn rewritten_identity_small() {
        for (n, k, l) in [(6i64, 1i64, 6i64), (6, 2, 11), (8, 2, 12), (8, 2, 20), (8, 3, 0)] {
            let report = rewritten_identity_check(spec(n, k, l)).unwrap();
            assert!(report.passed(), "n={n},k={k},l={l}");
        }
        assert!(rewritten_identity_check(spec(7, 1, 5)).is_err());
    }

    #[test]
    fn euler_gap_examples() {
        assert_eq!(euler_gap(spec(6, 1, 6)), -3);
        assert_eq!(euler_gap(spec(6, 1, 5)), 0);
        assert_eq!(euler_gap(spec(7, 1, 5)), 2 * 3); // (nk-l) * C(3,1)
    }

    #[test]
    fn type_classification() {
        use VarietyType::*;
        assert_eq!(classify_types(spec(6, 2, 8)), (Fano, GeneralType)); // l < nk - n/2
        assert_eq!(classify_types(spec(6, 2, 9)), (Fano, CalabiYau)); // l = nk - n/2
        assert_eq!(classify_types(spec(6, 2, 10)), (Fano, Fano));
        assert_eq!(classify_types(spec(6, 2, 12)), (CalabiYau, Fano)); // l = nk
        assert_eq!(classify_types(spec(6, 2, 13)), (GeneralType, Fano));
        assert_eq!(classify_types(spec(7, 1, 7)), (CalabiYau, CalabiYau)); // odd, l = nk
    }

    #[test]
    fn sod_shapes() {
        // even (6,2,9): three blocks of size C(2,2)=1, twists 1..3
        let p = sod_predict(spec(6, 2, 9), Side::X);
        assert_eq!(
            p.blocks,
            vec![BlockGroup { count: 3, size: 1, first_twist: 1, last_twist: 3 }]
        );
        // CY case: empty truncation
        assert!(sod_predict(spec(6, 2, 12), Side::X).blocks.is_empty());
        // odd (7,1,5): two blocks of size C(3,1)=3
        let p = sod_predict(spec(7, 1, 5), Side::X);
        assert_eq!(
            p.blocks,
            vec![BlockGroup { count: 2, size: 3, first_twist: 1, last_twist: 2 }]
        );
        // two rectangles on the X side when l is small
        let p = sod_predict(spec(6, 2, 0), Side::X);
        assert_eq!(p.blocks.len(), 2);
        assert_eq!(p.blocks[0].count, 9);
        assert_eq!(p.blocks[0].size, 3); // C(3,2)
        assert_eq!(p.blocks[1].count, 3);
        assert_eq!(p.blocks[1].size, 1); // C(2,2)
        assert_eq!(p.residual, "C_W");
    }

    #[test]
    fn sod_serialization() {
        let p = sod_predict(spec(6, 2, 9), Side::X);
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["side"], "X");
        assert_eq!(json["residual"], "C_W");
        assert_eq!(json["blocks"][0]["count"], 3);
    }

    #[test]
    fn case_consistency_small_grids() {
        for l in 0..=15 {
            assert!(case_consistency(spec(6, 1, l)).passed(), "l={l}");
            assert!(case_consistency(spec(6, 2, l)).passed(), "l={l}");
        }
        for l in 0..=21 {
            assert!(case_consistency(spec(7, 1, l)).passed(), "l={l}");
            assert!(case_consistency(spec(7, 2, l)).passed(), "l={l}");
        }
    }

    #[test]
    fn block_count_identity() {
        // (nk-n/2-l)·C(n/2,k) + (n/2)·C(n/2-1,k)
        //   = (nk-l)·C(n/2,k) - (n/2)·C(n/2-1,n/2-k)
        for n in (4..=16i64).step_by(2) {
            for k in 1..=n / 2 {
                for l in [0i64, 1, n, n * k] {
                    let lhs = (n * k - n / 2 - l) * binom(n / 2, k) + (n / 2) * binom(n / 2 - 1, k);
                    let rhs = (n * k - l) * binom(n / 2, k) - (n / 2) * binom(n / 2 - 1, n / 2 - k);
                    assert_eq!(lhs, rhs, "n={n},k={k},l={l}");
                }
            }
        }
    }
}
