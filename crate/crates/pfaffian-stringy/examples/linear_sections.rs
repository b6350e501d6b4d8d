//! Invariants of linear sections: isotropic-subspace E-polynomials, the
//! stringy E-function f of cut Pfaffians, and the triangular-system and
//! inversion cross-checks.

use pfaffian_stringy::sections::{
    f_closed, f_recursive, inversion_check, l_iso, verify_abcd, CutSpec,
};

fn main() {
    // E-polynomial of isotropic 2k-planes for a rank-2i form on C^n
    for (k, i, n) in [(1, 1, 6), (1, 3, 6), (2, 2, 8)] {
        println!("l({k},{i};{n}) = {}", l_iso(k, i, n).unwrap());
    }
    println!();

    // f computed by the closed form and by solving the triangular system
    for (n, k, i) in [(6, 1, 1), (6, 1, 3), (8, 2, 2)] {
        let spec = CutSpec::new(n, k, i).unwrap();
        let closed = f_closed(spec);
        let recursive = f_recursive(spec).unwrap();
        assert_eq!(closed, recursive);
        println!("f({k},{i};{n}) = {closed}");
    }
    println!();

    // the inversion roundtrip and the A=C, B=D summation identities
    let spec = CutSpec::new(8, 2, 3).unwrap();
    let inv = inversion_check(spec);
    println!("inversion roundtrip: tested={} failed={}", inv.tested, inv.failed);
    assert!(inv.passed());
    let abcd = verify_abcd(8, 2, 3).unwrap();
    println!("A=C and B=D:         tested={} failed={}", abcd.tested, abcd.failed);
    assert!(abcd.passed());
}
