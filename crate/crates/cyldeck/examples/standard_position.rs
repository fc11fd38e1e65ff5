//! Put a saddle connection in standard position: twist the expanding-side
//! cylinder so the saddle sits exactly over its involution image, shear the
//! contracting side to align the other cylinder, and certify the vertical
//! cylinder through both.
//!
//! ```bash
//! cargo run -p cyldeck --example standard_position
//! ```

use cyldeck::deform::{build_eta, partition_subequivalence, standard_position, Direction};
use cyldeck::fixtures;
use cyldeck::flow::{classify_saddle_lengths, vertical_decomposition, vertical_subequivalence_classes};
use cyldeck::involution::find_involution;

fn main() {
    let surface = fixtures::quad3();
    let involution = find_involution(&surface).expect("hyperelliptic");
    println!("involution pairs:");
    for label in surface.saddle_labels() {
        println!("  {label} <-> {}", involution.image_of(&label).unwrap());
    }

    let eta = build_eta(&surface).unwrap();
    let partition = partition_subequivalence(&surface, &eta, Direction::Minus).unwrap();
    println!(
        "classes: A1 = {:?}, A2 = {:?}, A3 = {:?}",
        partition.a1, partition.a2, partition.a3
    );
    let classes = classify_saddle_lengths(&surface, &partition).unwrap();
    println!("long saddles (length {}): {:?}", classes.ell, classes.ell_saddles);

    let saddle = &classes.ell_saddles[0];
    let sp = standard_position(&surface, &eta, Direction::Minus, saddle).unwrap();
    println!("\naligned {saddle}; contracting-side shear alpha = {}", sp.alpha);
    println!(
        "vertical witness: circumference {} (sum of the two bordering heights), width {}",
        sp.witness.circumference, sp.witness.height
    );
    println!("crossings: {:?}", sp.witness.crossing_profile);

    // The aligned surface is vertically periodic with exactly two vertical
    // sub-equivalence classes.
    let dec = vertical_decomposition(&sp.diagram, 100_000).unwrap();
    let vclasses = vertical_subequivalence_classes(&dec);
    println!("\nvertical cylinders: {}", dec.cylinders.len());
    for v in &dec.cylinders {
        println!(
            "  circumference {} width {} crossings {:?}",
            v.circumference, v.height, v.crossing_profile
        );
    }
    println!("vertical sub-equivalence classes: {}", vclasses.len());
}
