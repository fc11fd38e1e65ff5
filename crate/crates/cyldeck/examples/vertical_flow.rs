//! Trace the vertical flow exactly: decompose a surface into vertical
//! cylinders, then rotate it a quarter turn so they become the horizontal
//! cylinders of a new diagram.
//!
//! ```bash
//! cargo run -p cyldeck --example vertical_flow
//! ```

use cyldeck::canonical::isomorphic;
use cyldeck::fixtures;
use cyldeck::flow::{rotate_vertical, vertical_decomposition, FlowError};
use cyldeck::scalar::FieldScalar as FS;

fn main() {
    // A torus with twist 1/2: vertical circles wrap twice around.
    let twisted = fixtures::torus_with_twist(FS::from_ratio(1, 2));
    let dec = vertical_decomposition(&twisted, 10_000).unwrap();
    println!("half-twisted torus:");
    for v in &dec.cylinders {
        println!("  vertical cylinder: circumference {}, width {}", v.circumference, v.height);
    }

    // An irrational twist never closes up: the budget reports back instead
    // of spinning forever.
    let irrational = fixtures::torus_with_twist(FS::sqrt_term(1, 2, 2));
    match vertical_decomposition(&irrational, 256) {
        Err(FlowError::NotPeriodicWithinBudget { budget }) => {
            println!("irrational twist: not periodic within {budget} crossings");
        }
        other => println!("unexpected: {other:?}"),
    }

    // The worked surface decomposes and rotates; stratum and area survive.
    let surface = fixtures::mnemonic();
    let dec = vertical_decomposition(&surface, 100_000).unwrap();
    println!("\nthree-cylinder surface: {} vertical cylinders", dec.cylinders.len());
    for v in &dec.cylinders {
        println!(
            "  circumference {} width {} crossings {:?}",
            v.circumference, v.height, v.crossing_profile
        );
    }
    let rotated = rotate_vertical(&surface, &dec);
    println!("rotated stratum: {:?} (original {:?})", rotated.stratum(), surface.stratum());
    assert_eq!(rotated.area(), surface.area());

    // Rotating twice realizes the -1 map, which the hyperelliptic
    // involution absorbs: the diagram returns to itself.
    let dec2 = vertical_decomposition(&rotated, 100_000).unwrap();
    let twice = rotate_vertical(&rotated, &dec2);
    println!("rotate twice isomorphic to original: {}", isomorphic(&twice, &surface));
}
