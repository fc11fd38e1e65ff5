//! Draw cylinder diagrams as SVG files in the current directory.
//!
//! ```bash
//! cargo run -p cyldeck --example render_svg
//! ```

use cyldeck::fixtures;
use cyldeck::render::render_svg;

fn main() -> std::io::Result<()> {
    for name in ["TORUS", "MNEMONIC", "QUAD3"] {
        let d = fixtures::by_name(name).unwrap();
        let svg = render_svg(&d);
        let path = format!("{}.svg", name.to_lowercase());
        std::fs::write(&path, &svg)?;
        println!("wrote {path} ({} bytes)", svg.len());
    }
    Ok(())
}
