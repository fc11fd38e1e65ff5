//! The full deformation walk on the worked three-cylinder surface: build
//! the rel direction from graph parities, move until the small cylinder
//! collapses, continue through the degeneration so a fresh cylinder opens
//! on the far side, and compare rel signs across the transition.
//!
//! ```bash
//! cargo run -p cyldeck --example deformation_pipeline
//! ```

use cyldeck::deform::{build_eta, d_eigenvalues, Direction};
use cyldeck::fixtures;
use cyldeck::scalar::FieldScalar as FS;
use cyldeck::surgery::{continue_through_collapse, move_until_collapse};
use cyldeck::trace::PipelineTrace;

fn main() {
    let surface = fixtures::mnemonic();
    let mut trace = PipelineTrace::new();
    trace.record("start", "MNEMONIC", &surface);

    // Rel signs alternate with graph distance from the base cylinder.
    let eta = build_eta(&surface).unwrap();
    for (id, s) in eta.cylinder_ids.iter().zip(&eta.signs) {
        println!("q({id}) = {s:+}");
    }

    // Moving against eta contracts C1 and C2; C1 is shortest and pinches
    // first, at exactly half a unit.
    let event = move_until_collapse(&surface, &eta, Direction::Minus).unwrap();
    println!("\nfirst collapse at t* = {}", event.time);
    println!("collapsed: {:?}", event.collapsed);
    for c in &event.resulting.cylinders {
        println!("  surviving {}: height {}", c.id, c.height);
    }
    trace.record("collapse", "direction -", &event.resulting);

    // Push through the degeneration: the sinking zero keeps moving and a
    // new cylinder opens, fused from boundary panels of both survivors.
    let continued =
        continue_through_collapse(&event, Direction::Minus, &FS::from_ratio(1, 2)).unwrap();
    println!("\ncontinued 1/2 beyond the collapse:");
    for c in &continued.cylinders {
        println!(
            "  {}: circumference {} height {}",
            c.id,
            c.circumference(),
            c.height
        );
    }
    trace.record("continue", "u = 1/2", &continued);

    // Rel signs after the transition: the surviving contracting cylinder
    // keeps its sign, the old expanding one flips.
    let eta2 = build_eta(&continued).unwrap();
    let dd = d_eigenvalues(
        &eta,
        &eta2,
        &["C2".to_string(), "C3".to_string()],
        "C2",
    )
    .unwrap();
    println!("\nsign products across the transition:");
    for (id, s) in &dd {
        println!("  D({id}) = {s:+}");
    }

    println!("\npipeline trace (canonical-form hashes):\n{trace}");
}
