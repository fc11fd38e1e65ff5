//! Rational relation spaces and the twisted-relation identity: the
//! relations satisfied by the reciprocal circumferences equal the modulus
//! relations twisted entrywise by the rel signs.
//!
//! ```bash
//! cargo run -p cyldeck --example relation_spaces
//! ```

use cyldeck::deform::build_eta;
use cyldeck::fixtures;
use cyldeck::relations::{
    arithmeticity_diagnostic, relation_space, verify_facts2, RelationSource,
};
use cyldeck::scalar::FieldScalar as FS;

fn main() {
    // Relation spaces of plain tuples.
    let w = relation_space(
        &[FS::one(), FS::sqrt_term(1, 1, 2), FS::one() + FS::sqrt_term(1, 1, 2)],
        RelationSource::Other,
    )
    .unwrap();
    println!("relations of (1, sqrt2, 1+sqrt2):\n{w}");

    // The quadratic fixture satisfies the full identity.
    let surface = fixtures::quad3();
    let eta = build_eta(&surface).unwrap();
    let report = verify_facts2(&surface, &eta).unwrap();
    println!("moduli relations W:\n{}", report.w);
    println!("reciprocal-length relations U:\n{}", report.u);
    println!("W twisted by the rel signs:\n{}", report.w_twisted);
    println!("dimension check: {}", report.dim_ok);
    println!(
        "memberships: moduli {}, signed reciprocals {}",
        report.membership_moduli, report.membership_signed_reciprocals
    );
    println!("U = W.diag(q): {}", report.twisted_match);
    assert!(report.pass());

    // Corrupting any single sign breaks the identity.
    let mut bad = eta.clone();
    bad.signs[2] = -bad.signs[2];
    let broken = verify_facts2(&surface, &bad).unwrap();
    println!("after flipping one sign, U = W.diag(q): {}", broken.twisted_match);

    // The arithmeticity diagnostic distinguishes square-tiled data.
    for name in ["MNEMONIC", "QUAD3"] {
        let d = fixtures::by_name(name).unwrap();
        let a = arithmeticity_diagnostic(&d);
        println!(
            "{name}: reciprocal span dimension {} ({})",
            a.reciprocal_span_dim,
            if a.arithmetic_type { "arithmetic-type" } else { "nonarithmetic-compatible" }
        );
    }
}
