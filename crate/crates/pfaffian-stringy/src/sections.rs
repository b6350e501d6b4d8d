//! Hyperplane cuts of Pfaffian varieties by a skew form of rank 2i:
//! isotropic-subspace counts, the f/f° inversion, the recursive
//! determination of f, its closed form, and the supporting identities.

use thiserror::Error;

use crate::qalgebra::{LaurentPoly, RatFunc};
use crate::qseries::{gauss_binomial, q_pochhammer_pos};
use crate::report::{Failure, PointOutcome, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SectionsError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("parity violation: {0}")]
    Parity(String),
}

/// Parameters of a hyperplane cut of Pf(2k, V∨) ⊂ P(∧²V) by ⟨α,-⟩ = 0,
/// where α is a skew form of rank 2i on V and dim V = n is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutSpec {
    n: i64,
    k: i64,
    i: i64,
}

impl CutSpec {
    pub fn new(n: i64, k: i64, i: i64) -> Result<Self, SectionsError> {
        if n < 2 || n % 2 != 0 {
            return Err(SectionsError::Parity(format!("n must be a positive even integer, got {n}")));
        }
        if k < 1 || k > n / 2 {
            return Err(SectionsError::Range(format!(
                "k must satisfy 1 <= k <= n/2, got k={k}, n={n}"
            )));
        }
        if i < 1 || i > n / 2 {
            return Err(SectionsError::Range(format!(
                "i must satisfy 1 <= i <= n/2, got i={i}, n={n}"
            )));
        }
        Ok(Self { n, k, i })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn i(&self) -> i64 {
        self.i
    }
}

fn one_minus_q_pow(e: i64) -> LaurentPoly {
    LaurentPoly::one() - LaurentPoly::monomial(1, e)
}

/// E-polynomial of the variety of 2k-dimensional subspaces of an
/// n-dimensional space that are isotropic for a skew form of rank 2i:
///
/// `Σ_{0<=r<=2k} g_{r,n-2i} q^{(2k-r)(n-2i-r)}
///     ∏_{j=i+r+1-2k}^{i}(1-q^{2j}) / ∏_{j=1}^{2k-r}(1-q^j)`
///
/// Descending product ranges are empty (= 1); a numerator factor with j = 0
/// makes the term vanish. n need not be even here.
pub fn l_iso(k: i64, i: i64, n: i64) -> Result<RatFunc, SectionsError> {
    if k < 1 || 2 * k > n {
        return Err(SectionsError::Range(format!("l_iso requires 1 <= 2k <= n, got k={k}, n={n}")));
    }
    if i < 1 || i > n / 2 {
        return Err(SectionsError::Range(format!(
            "l_iso requires 1 <= i <= floor(n/2), got i={i}, n={n}"
        )));
    }
    let mut acc = RatFunc::zero();
    for r in 0..=2 * k {
        let g = gauss_binomial(n - 2 * i, r, 1);
        if g.is_zero() {
            continue;
        }
        let mut num = &g * &LaurentPoly::q_pow((2 * k - r) * (n - 2 * i - r));
        for j in i + r + 1 - 2 * k..=i {
            num = &num * &one_minus_q_pow(2 * j);
        }
        if num.is_zero() {
            continue;
        }
        let mut den = LaurentPoly::one();
        for j in 1..=2 * k - r {
            den = &den * &one_minus_q_pow(j);
        }
        acc = acc.add(&RatFunc::new(num, den).expect("nonzero denominator in l_iso"));
    }
    Ok(acc)
}

/// Closed form of the modified stringy E-function f_{k,i,n} of the cut:
///
/// `(q^{(n-1)k-1} - 1)/(q - 1) · binom(n/2, k)_{q²}
///     + q^{(n-1)k-1} · binom((n-2i)/2, k)_{q²}`.
pub fn f_closed(spec: CutSpec) -> RatFunc {
    let (n, k, i) = (spec.n, spec.k, spec.i);
    let prefactor = RatFunc::new(
        LaurentPoly::q_pow_minus_one((n - 1) * k - 1),
        LaurentPoly::q_pow_minus_one(1),
    )
    .expect("nonzero denominator");
    let first = prefactor.mul(&RatFunc::from_poly(gauss_binomial(n / 2, k, 2)));
    let second = RatFunc::q_pow((n - 1) * k - 1)
        .mul(&RatFunc::from_poly(gauss_binomial((n - 2 * i) / 2, k, 2)));
    first.add(&second)
}

/// Coefficient of f_{j,i,n} in the k-th equation of the linear system:
/// `q^{2(k-j)²-(k-j)} (q^{n+2-4k+2j}; q²)_{2k-2j} / (q; q)_{2k-2j}`.
/// The diagonal coefficient (j = k) is identically 1.
fn system_coeff(k: i64, j: i64, n: i64) -> RatFunc {
    let d = k - j;
    let num = &LaurentPoly::q_pow(2 * d * d - d)
        * &q_pochhammer_pos(n + 2 - 4 * k + 2 * j, 2, (2 * d) as u32);
    let den = q_pochhammer_pos(1, 1, (2 * d) as u32);
    RatFunc::new(num, den).expect("nonzero (q;q) denominator")
}

/// Right-hand side of the k-th equation:
/// `(q^{2k²-k-1} - 1)/(q - 1) · g_{2k,n} + q^{2k²-k-1} · l_{k,i,n}`.
fn system_rhs(k: i64, i: i64, n: i64) -> Result<RatFunc, SectionsError> {
    let e = 2 * k * k - k - 1;
    let prefactor = RatFunc::new(LaurentPoly::q_pow_minus_one(e), LaurentPoly::q_pow_minus_one(1))
        .expect("nonzero denominator");
    let first = prefactor.mul(&RatFunc::from_poly(gauss_binomial(n, 2 * k, 1)));
    let second = RatFunc::q_pow(e).mul(&l_iso(k, i, n)?);
    Ok(first.add(&second))
}

/// f_{k,i,n} obtained by solving the triangular linear system
/// `Σ_{j=1}^{k} f_{j,i,n} · system_coeff(k,j,n) = system_rhs(k,i,n)`
/// for increasing k, using that the diagonal coefficient is 1.
pub fn f_recursive(spec: CutSpec) -> Result<RatFunc, SectionsError> {
    let (n, k, i) = (spec.n, spec.k, spec.i);
    let mut solved: Vec<RatFunc> = Vec::with_capacity(k as usize);
    for kk in 1..=k {
        let mut value = system_rhs(kk, i, n)?;
        for (idx, f) in solved.iter().enumerate() {
            let j = idx as i64 + 1;
            value = value.sub(&f.mul(&system_coeff(kk, j, n)));
        }
        solved.push(value);
    }
    Ok(solved.pop().expect("k >= 1"))
}

/// E-polynomial f°_{k,i,n} of the cut of the open stratum, computed from
/// the closed form of f via the inversion formula
/// `f°_k = Σ_{1<=j<=k} f_j (-1)^{k-j} q^{(k-j)(k-j-1)} binom(n/2-j, k-j)_{q²}`.
pub fn f_circ(spec: CutSpec) -> RatFunc {
    let (n, k, i) = (spec.n, spec.k, spec.i);
    let mut acc = RatFunc::zero();
    for j in 1..=k {
        let d = k - j;
        let sign = if d % 2 == 0 { 1 } else { -1 };
        let weight = &LaurentPoly::monomial(sign, d * (d - 1)) * &gauss_binomial(n / 2 - j, d, 2);
        let f = f_closed(CutSpec::new(n, j, i).expect("valid sub-spec"));
        acc = acc.add(&f.mul(&RatFunc::from_poly(weight)));
    }
    acc
}

/// The alternating sum `Σ_{0<=s<=a} (-1)^s q^{s(s-1)} binom(a,s)_{q²}`,
/// which equals 1 for a = 0 and 0 otherwise. This is the cancellation that
/// makes the f/f° inversion a bijection.
pub fn delta_sum(a: i64) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for s in 0..=a {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        acc = acc + &LaurentPoly::monomial(sign, s * (s - 1)) * &gauss_binomial(a, s, 2);
    }
    acc
}

/// Verifies the roundtrip f -> f° -> f: recomposing
/// `Σ_{1<=p<=k} f°_p · binom(n/2-p, k-p)_{q²}` must reproduce the closed
/// form of f_{k,i,n}.
pub fn inversion_check(spec: CutSpec) -> VerificationReport {
    let (n, k, i) = (spec.n, spec.k, spec.i);
    let mut recomposed = RatFunc::zero();
    for p in 1..=k {
        let circ = f_circ(CutSpec::new(n, p, i).expect("valid sub-spec"));
        recomposed = recomposed.add(&circ.mul(&RatFunc::from_poly(gauss_binomial(n / 2 - p, k - p, 2))));
    }
    let expected = f_closed(spec);
    let outcome = if recomposed == expected {
        PointOutcome::Pass
    } else {
        PointOutcome::Fail(Failure {
            point: format!("k={k},i={i},n={n}"),
            lhs: recomposed.to_string(),
            rhs: expected.to_string(),
        })
    };
    VerificationReport::collect("inversion-roundtrip", format!("k={k},i={i},n={n}"), vec![outcome])
}

/// Both sides of the combinatorial identity
/// `Σ_{s=0}^{a} (-1)^s q^{s²-s} binom(2b-2s, 2a-2s)_q binom(b,s)_{q²}
///     = q^{2a²-a} (q^{2b-4a+2}; q²)_{2a} / (q; q)_{2a}`.
pub fn comb_identity_sides(a: i64, b: i64) -> (RatFunc, RatFunc) {
    let mut lhs = LaurentPoly::zero();
    for s in 0..=a {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let term = &(&LaurentPoly::monomial(sign, s * s - s)
            * &gauss_binomial(2 * b - 2 * s, 2 * a - 2 * s, 1))
            * &gauss_binomial(b, s, 2);
        lhs = lhs + term;
    }
    let rhs_num =
        &LaurentPoly::q_pow(2 * a * a - a) * &q_pochhammer_pos(2 * b - 4 * a + 2, 2, (2 * a) as u32);
    let rhs_den = q_pochhammer_pos(1, 1, (2 * a) as u32);
    (
        RatFunc::from_poly(lhs),
        RatFunc::new(rhs_num, rhs_den).expect("nonzero (q;q) denominator"),
    )
}

/// The four sums whose equalities A = C and B = D prove that the closed
/// form of f satisfies the linear system. The j = 0 terms are included
/// exactly as displayed (they carry a q^{-1} prefactor).
fn abcd(n: i64, k: i64, i: i64) -> Result<[RatFunc; 4], SectionsError> {
    let q_inv = RatFunc::q_pow(-1);
    let mut a = RatFunc::zero();
    let mut b = RatFunc::zero();
    for j in 0..=k {
        let coeff = system_coeff(k, j, n);
        let a_pref = RatFunc::new(
            LaurentPoly::q_pow_minus_one((n - 1) * j - 1),
            LaurentPoly::q_pow_minus_one(1),
        )
        .expect("nonzero denominator");
        a = a.add(&a_pref.mul(&RatFunc::from_poly(gauss_binomial(n / 2, j, 2))).mul(&coeff));
        let b_pref = RatFunc::q_pow((n - 1) * j).mul(&q_inv);
        b = b.add(
            &b_pref
                .mul(&RatFunc::from_poly(gauss_binomial((n - 2 * i) / 2, j, 2)))
                .mul(&coeff),
        );
    }
    let e = 2 * k * k - k - 1;
    let c = RatFunc::new(LaurentPoly::q_pow_minus_one(e), LaurentPoly::q_pow_minus_one(1))
        .expect("nonzero denominator")
        .mul(&RatFunc::from_poly(gauss_binomial(n, 2 * k, 1)));
    let d = RatFunc::q_pow(e).mul(&l_iso(k, i, n)?);
    Ok([a, b, c, d])
}

/// Checks A_{k,n} = C_{k,n} and B_{k,i,n} = D_{k,i,n}, plus the standalone
/// combinatorial identity over a small (a, b) grid.
pub fn verify_abcd(n: i64, k: i64, i: i64) -> Result<VerificationReport, SectionsError> {
    CutSpec::new(n, k, i)?;
    let [a, b, c, d] = abcd(n, k, i)?;
    let mut outcomes = Vec::new();
    let mut check = |label: String, lhs: &RatFunc, rhs: &RatFunc| {
        outcomes.push(if lhs == rhs {
            PointOutcome::Pass
        } else {
            PointOutcome::Fail(Failure {
                point: label,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            })
        });
    };
    check(format!("A=C k={k},n={n}"), &a, &c);
    check(format!("B=D k={k},i={i},n={n}"), &b, &d);
    for aa in 0..=k {
        for bb in 0..=n / 2 {
            let (lhs, rhs) = comb_identity_sides(aa, bb);
            check(format!("comb a={aa},b={bb}"), &lhs, &rhs);
        }
    }
    Ok(VerificationReport::collect("abcd", format!("k={k},i={i},n={n}"), outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn at(f: &RatFunc, x: i64) -> BigRational {
        f.eval_at(&BigRational::from(BigInt::from(x))).unwrap()
    }

    fn int(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    /// Brute-force count over F_q of d-dimensional subspaces of F_q^n that
    /// are isotropic for the standard alternating form of rank 2i.
    fn isotropic_count(d: usize, i: usize, n: usize, q: u64) -> u64 {
        // standard form: A[2t][2t+1] = 1, A[2t+1][2t] = q-1 for t < i
        let mut form = vec![vec![0u64; n]; n];
        for t in 0..i {
            form[2 * t][2 * t + 1] = 1;
            form[2 * t + 1][2 * t] = q - 1;
        }
        let mut count = 0u64;
        // enumerate reduced-row-echelon bases: pivot columns, then free entries
        let mut pivots = (0..d).collect::<Vec<_>>();
        loop {
            // free positions: (row r, col c) with c not a pivot and c > pivots[r]
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..n {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let total = q.pow(free.len() as u32);
            for mut code in 0..total {
                let mut rows = vec![vec![0u64; n]; d];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = 1;
                }
                for &(r, c) in &free {
                    rows[r][c] = code % q;
                    code /= q;
                }
                let pairing = |u: &[u64], v: &[u64]| -> u64 {
                    let mut s = 0u64;
                    for x in 0..n {
                        for y in 0..n {
                            s = (s + u[x] * form[x][y] % q * v[y]) % q;
                        }
                    }
                    s
                };
                let isotropic = (0..d)
                    .all(|a| (a + 1..d).all(|b| pairing(&rows[a], &rows[b]) == 0));
                if isotropic {
                    count += 1;
                }
            }
            // next combination of pivot columns
            let mut idx = d;
            loop {
                if idx == 0 {
                    return count;
                }
                idx -= 1;
                if pivots[idx] < n - (d - idx) {
                    pivots[idx] += 1;
                    for t in idx + 1..d {
                        pivots[t] = pivots[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn l_iso_matches_enumeration_small() {
        for (k, i, n) in [(1i64, 1i64, 4i64), (1, 2, 4), (2, 1, 4), (2, 2, 4), (1, 1, 6)] {
            for q in [2u64, 3] {
                let expected = isotropic_count(2 * k as usize, i as usize, n as usize, q);
                assert_eq!(
                    at(&l_iso(k, i, n).unwrap(), q as i64),
                    int(expected as i64),
                    "l_iso({k},{i},{n}) at q={q}"
                );
            }
        }
    }

    #[test]
    fn l_iso_is_polynomial() {
        for n in [4i64, 6] {
            for k in 1..=n / 2 {
                for i in 1..=n / 2 {
                    assert!(l_iso(k, i, n).unwrap().is_polynomial(), "l_iso({k},{i},{n})");
                }
            }
        }
        assert!(l_iso(3, 1, 4).is_err());
        assert!(l_iso(1, 0, 4).is_err());
    }

    #[test]
    fn f_closed_values() {
        let spec = CutSpec::new(6, 1, 1).unwrap();
        assert_eq!(at(&f_closed(spec), 2), int(395));
        // second summand vanishes when the cutting form is nondegenerate
        let full_rank = CutSpec::new(6, 1, 3).unwrap();
        let expected: RatFunc = "(q^4 - 1)(1 + q^2 + q^4)/(q - 1)".parse().unwrap();
        assert_eq!(f_closed(full_rank), expected);
    }

    #[test]
    fn f_recursive_matches_closed() {
        for n in [4i64, 6, 8] {
            for k in 1..=n / 2 {
                for i in 1..=n / 2 {
                    let spec = CutSpec::new(n, k, i).unwrap();
                    assert_eq!(f_recursive(spec).unwrap(), f_closed(spec), "k={k},i={i},n={n}");
                }
            }
        }
    }

    #[test]
    fn delta_identity() {
        assert!(delta_sum(0).is_one());
        for a in 1..=8 {
            assert!(delta_sum(a).is_zero(), "a={a}");
        }
    }

    #[test]
    fn inversion_roundtrip() {
        for n in [4i64, 6] {
            for k in 1..=n / 2 {
                for i in 1..=n / 2 {
                    let report = inversion_check(CutSpec::new(n, k, i).unwrap());
                    assert!(report.passed(), "k={k},i={i},n={n}");
                }
            }
        }
    }

    #[test]
    fn comb_identity_small() {
        for a in 0..=4 {
            for b in 0..=6 {
                let (lhs, rhs) = comb_identity_sides(a, b);
                assert_eq!(lhs, rhs, "a={a},b={b}");
            }
        }
        let (lhs, rhs) = comb_identity_sides(0, 3);
        assert!(lhs.is_one() && rhs.is_one());
    }

    #[test]
    fn abcd_small() {
        for (n, k, i) in [(6i64, 1i64, 1i64), (6, 2, 1), (6, 2, 3), (8, 2, 2)] {
            let report = verify_abcd(n, k, i).unwrap();
            assert!(report.passed(), "k={k},i={i},n={n}: {:?}", report.failures);
        }
    }
}
