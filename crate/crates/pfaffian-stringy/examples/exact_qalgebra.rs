//! Exact arithmetic with Laurent polynomials and rational functions in q:
//! parsing, canonical forms, specialization, and the limit at q = 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use pfaffian_stringy::{LaurentPoly, RatFunc};

fn main() {
    // parse and normalize
    let a: RatFunc = "(q^5 - q^2) / (q - 1)".parse().unwrap();
    println!("a              = {a}");
    println!("a is poly?     = {}", a.is_polynomial());

    // ring operations are exact
    let b: RatFunc = "1 + q + q^2".parse().unwrap();
    println!("a * b          = {}", a.mul(&b));
    println!("a - a          = {}", a.sub(&a));

    // negative exponents are first-class
    let c = RatFunc::from_poly(LaurentPoly::monomial(3, -2));
    println!("3 q^-2 * q^5   = {}", c.mul(&RatFunc::q_pow(5)));

    // substitution q -> q^2 and evaluation at a rational point
    println!("b(q^2)         = {}", b.substitute_power(2));
    let two = BigRational::from(BigInt::from(2));
    println!("a(2)           = {}", a.eval_at(&two).unwrap());

    // the limit at q = 1 of (q^n - 1)/(q - 1) style quotients
    let g: RatFunc = "(q^6 - 1)(q^5 - 1) / ((q - 1)(q^2 - 1))".parse().unwrap();
    println!("lim_{{q->1}} g   = {}", g.limit_at_one().unwrap());
}
