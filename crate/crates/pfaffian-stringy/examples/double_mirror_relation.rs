//! The double-mirror relation between linear sections X_W and Y_W: the
//! relation right-hand side, Euler-characteristic gap, birational type
//! classification, and predicted semiorthogonal-decomposition shapes.

use pfaffian_stringy::hpd::{
    classify_types, euler_gap, relation_check, relation_rhs, sod_predict, SectionSpec, Side,
};
use pfaffian_stringy::RatFunc;

fn main() {
    // the K3 / cubic-fourfold instance: n=6, k=1, l=6
    let spec = SectionSpec::new(6, 1, 6).unwrap();
    let e_x: RatFunc = "1 + 22q + q^2".parse().unwrap();
    let e_y: RatFunc = "1 + q + 23q^2 + q^3 + q^4".parse().unwrap();
    assert!(relation_check(&e_x, &e_y, spec));
    println!("E_Y = q E_X + (1 + q^2 + q^4):   relation holds");
    println!("relation rhs  = {}", relation_rhs(spec));
    println!("euler gap     = {}", euler_gap(spec));
    let (tx, ty) = classify_types(spec);
    println!("types         = X: {tx:?}, Y: {ty:?}\n");

    // predicted decompositions on both sides for a Calabi-Yau pair
    let spec = SectionSpec::new(6, 2, 9).unwrap();
    for side in [Side::X, Side::Y] {
        let p = sod_predict(spec, side);
        println!("n=6 k=2 l=9, side {side:?}:");
        for b in &p.blocks {
            println!(
                "  {} blocks of size {} (twists {}..{})",
                b.count, b.size, b.first_twist, b.last_twist
            );
        }
        println!("  residual {}", p.residual);
    }
}
