//! Stringy E-functions of Pfaffian varieties Pf(2k, n) for the usual and the
//! modified discrepancies, computed two independent ways.

use pfaffian_stringy::pfaffian::{
    dim_pf, stringy_pf_closed, stringy_pf_strata, DiscrepancyKind, PfaffianSpec,
};

fn main() {
    for (n, k) in [(6, 1), (6, 2), (8, 2), (10, 3)] {
        let spec = PfaffianSpec::new(n, k).unwrap();
        println!("Pf(2*{k}, {n}), dimension {}", dim_pf(spec));
        for kind in [DiscrepancyKind::Usual, DiscrepancyKind::Modified] {
            let closed = stringy_pf_closed(spec, kind).unwrap();
            let strata = stringy_pf_strata(spec, kind).unwrap();
            assert_eq!(closed, strata, "the two computations must agree");
            println!(
                "  {kind:?}: polynomial = {:<5}  E_st = {closed}",
                closed.is_polynomial()
            );
        }
        println!();
    }
}
