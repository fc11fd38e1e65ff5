//! Verify a branched translation cover: the degree-two slit construction
//! over the quadratic three-cylinder surface, and the quotient template
//! built from sub-equivalence data.
//!
//! ```bash
//! cargo run -p cyldeck --example cover_check
//! ```

use cyldeck::cover::{build_quotient, derive_assignment, verify_cover};
use cyldeck::deform::{build_eta, partition_subequivalence, Direction};
use cyldeck::fixtures;
use cyldeck::flow::classify_saddle_lengths;
use cyldeck::scalar::FieldScalar as FS;

fn main() {
    // The slit cover: two copies of the base cut along a vertical saddle
    // connection between its zeros, cross-glued.
    let cover = fixtures::bc2();
    let base = fixtures::quad3();
    println!("cover stratum {:?}, base stratum {:?}", cover.stratum(), base.stratum());
    println!(
        "areas: {} = 2 x {}",
        cover.area(),
        base.area()
    );
    assert_eq!(cover.area(), base.area() * FS::from_int(2));

    let assignment = derive_assignment(&cover, &base, |id| match id {
        "C1a" | "C1b" => "C1".to_string(),
        "C2a" | "C2b" => "C2".to_string(),
        _ => "C3".to_string(),
    })
    .unwrap();
    let witness = verify_cover(&cover, &base, &assignment).unwrap();
    println!("verified: degree {}", witness.degree);
    for (up, down, local) in &witness.branch_orders {
        println!("  zero of order {up} over order {down}: local degree {local}");
    }

    // Quotient template from the deformation data of a bigger surface.
    let surface = fixtures::doubled();
    let eta = build_eta(&surface).unwrap();
    let partition = partition_subequivalence(&surface, &eta, Direction::Minus).unwrap();
    let classes = classify_saddle_lengths(&surface, &partition).unwrap();
    let built = build_quotient(&surface, &partition, &classes).unwrap();
    println!(
        "\nquotient of the doubled surface: stratum {:?}, alpha = {}",
        built.quotient.stratum(),
        built.alpha
    );
    let witness = verify_cover(&surface, &built.quotient, &built.assignment).unwrap();
    println!("covering degree {}", witness.degree);
}
