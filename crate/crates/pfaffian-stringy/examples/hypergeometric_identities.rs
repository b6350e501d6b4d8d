//! Terminating basic hypergeometric series: exact evaluation by two
//! independent paths, and grid verification of the four summation identities.

use pfaffian_stringy::qhypergeom::{
    eval_phi, eval_phi_direct, verify_identity, IdentityGrid, IdentityId, PhiParam,
    PhiSeriesSpec,
};

fn main() {
    // a single terminating 2phi1 evaluated exactly as a rational function
    let spec = PhiSeriesSpec::new(
        vec![PhiParam::q_pow(-3), PhiParam::q_pow(2)],
        vec![PhiParam::q_pow(5)],
        1,
        PhiParam::q_pow(6),
        3,
    )
    .unwrap();
    let by_ratio = eval_phi(&spec).unwrap();
    let by_expansion = eval_phi_direct(&spec).unwrap();
    assert_eq!(by_ratio, by_expansion);
    println!("2phi1(q^-3, q^2; q^5; q, q^6) = {by_ratio}\n");

    // verify all four identities on a small grid, both evaluation paths
    let grid = IdentityGrid { exp_min: -3, exp_max: 4, max_termination: 5 };
    for id in [IdentityId::One, IdentityId::Two, IdentityId::Three, IdentityId::Four] {
        let report = verify_identity(id, grid);
        println!(
            "{} [{}]: tested={} skipped={} failed={}",
            report.identity, report.grid, report.tested, report.skipped, report.failed
        );
        assert!(report.passed());
    }
}
