//! Build a cylinder diagram by hand, validate it, read off its stratum,
//! graph and moduli, and round-trip it through the surface file format.
//!
//! ```bash
//! cargo run -p cyldeck --example build_a_surface
//! ```

use cyldeck::diagram::{cyl, CylinderDiagram};
use cyldeck::format::{parse_surface, write_surface};
use cyldeck::scalar::FieldScalar as FS;

fn main() {
    // The worked three-cylinder genus-two surface: C1 and C2 sit over the
    // two halves of the long cylinder C3. Each saddle appears once in a
    // `top` word (the cylinder below it) and once in a `bottom` word (the
    // cylinder above it).
    let surface = CylinderDiagram::new(
        vec![
            cyl("C1", FS::from_ratio(1, 2), FS::from_ratio(1, 2), &[("s1p", FS::one())], &[("s1", FS::one())]),
            cyl("C2", FS::from_ratio(3, 2), FS::zero(), &[("s2p", FS::one())], &[("s2", FS::one())]),
            cyl(
                "C3",
                FS::one(),
                FS::zero(),
                &[("s1", FS::one()), ("s2", FS::one())],
                &[("s1p", FS::one()), ("s2p", FS::one())],
            ),
        ],
        1,
    );

    let report = surface.validate();
    println!("valid: {}", report.is_valid());
    println!("genus: {:?}, zero orders: {:?}", report.genus, report.zero_orders);

    let (orders, genus) = surface.stratum();
    println!("stratum H{orders:?}, genus {genus}");

    let graph = surface.cylinder_graph();
    for (&(a, b), labels) in &graph.edges {
        println!(
            "adjacent: {} -- {} through {}",
            graph.vertex_ids[a],
            graph.vertex_ids[b],
            labels.join(", ")
        );
    }

    for (c, (circ, h, m)) in surface.cylinders.iter().zip(surface.moduli()) {
        println!("{}: circumference {circ}, height {h}, modulus {m}", c.id);
    }
    println!("area: {}", surface.area());

    // The text format round-trips bit-exactly.
    let text = write_surface(&surface);
    print!("\n{text}");
    let back = parse_surface(&text).unwrap();
    assert_eq!(back, surface);
    println!("file format round trip: ok");
}
