//! SVG pictures of cylinder diagrams: one rectangle per cylinder, one arc
//! per gluing, labels on every saddle occurrence. Coordinates are converted
//! to doubles for drawing only; nothing here feeds back into any predicate.

use crate::diagram::CylinderDiagram;
use std::fmt::Write as _;

const SCALE: f64 = 80.0;
const GAP: f64 = 28.0;
const MARGIN: f64 = 24.0;

/// Render the diagram as a standalone SVG document.
pub fn render_svg(diagram: &CylinderDiagram) -> String {
    let mut rows = Vec::new();
    let mut y = MARGIN;
    let mut max_w: f64 = 0.0;
    for c in &diagram.cylinders {
        let w = c.circumference().to_f64() * SCALE;
        let h = c.height.to_f64() * SCALE;
        rows.push((y, w, h));
        y += h + GAP;
        max_w = max_w.max(w);
    }
    let width = max_w + 2.0 * MARGIN;
    let height = y + MARGIN;
    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.1} {height:.1}\" font-family=\"monospace\" font-size=\"11\">"
    )
    .unwrap();
    writeln!(svg, "<!-- cylinder diagram: {} cylinders -->", diagram.cylinders.len()).unwrap();
    // Rectangles plus boundary tick marks and labels.
    for (ci, c) in diagram.cylinders.iter().enumerate() {
        let (ry, rw, rh) = rows[ci];
        writeln!(
            svg,
            "<rect x=\"{MARGIN:.1}\" y=\"{ry:.1}\" width=\"{rw:.1}\" height=\"{rh:.1}\" fill=\"#eef4ff\" stroke=\"#334\" stroke-width=\"1\"/>"
        )
        .unwrap();
        writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#334\">{} (h={}, t={})</text>",
            MARGIN + 4.0,
            ry + rh / 2.0 + 4.0,
            c.id,
            c.height,
            c.twist
        )
        .unwrap();
        let circ = c.circumference();
        for k in 0..c.top.len() {
            let p = c.top_position(k).rem_euclid(&circ).to_f64() * SCALE + MARGIN;
            let len = c.top[k].1.to_f64() * SCALE;
            writeln!(
                svg,
                "<line x1=\"{p:.1}\" y1=\"{ry:.1}\" x2=\"{p:.1}\" y2=\"{:.1}\" stroke=\"#a33\" stroke-width=\"1\"/>",
                ry + 5.0
            )
            .unwrap();
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#a33\">{}</text>",
                p + len / 2.0 - 4.0,
                ry - 3.0,
                c.top[k].0
            )
            .unwrap();
        }
        for k in 0..c.bottom.len() {
            let p = c.bottom_position(k).rem_euclid(&circ).to_f64() * SCALE + MARGIN;
            let len = c.bottom[k].1.to_f64() * SCALE;
            writeln!(
                svg,
                "<line x1=\"{p:.1}\" y1=\"{:.1}\" x2=\"{p:.1}\" y2=\"{:.1}\" stroke=\"#383\" stroke-width=\"1\"/>",
                ry + rh - 5.0,
                ry + rh
            )
            .unwrap();
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#383\">{}</text>",
                p + len / 2.0 - 4.0,
                ry + rh + 12.0,
                c.bottom[k].0
            )
            .unwrap();
        }
    }
    // Gluing arcs: from each saddle's top occurrence to its bottom one.
    for label in diagram.saddle_labels() {
        let (tc, tk) = diagram.top_occurrence(&label).expect("valid diagram");
        let (bc, bk) = diagram.bottom_occurrence(&label).expect("valid diagram");
        let tcyl = &diagram.cylinders[tc];
        let bcyl = &diagram.cylinders[bc];
        let (ty, _, _) = rows[tc];
        let (by, _, bh) = rows[bc];
        let tcirc = tcyl.circumference();
        let bcirc = bcyl.circumference();
        let x1 = tcyl.top_position(tk).rem_euclid(&tcirc).to_f64() * SCALE
            + tcyl.top[tk].1.to_f64() * SCALE / 2.0
            + MARGIN;
        let x2 = bcyl.bottom_position(bk).rem_euclid(&bcirc).to_f64() * SCALE
            + bcyl.bottom[bk].1.to_f64() * SCALE / 2.0
            + MARGIN;
        let y1 = ty;
        let y2 = by + bh;
        let ymid = (y1 + y2) / 2.0 - 10.0;
        writeln!(
            svg,
            "<path d=\"M {x1:.1} {y1:.1} Q {:.1} {ymid:.1} {x2:.1} {y2:.1}\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.7\" stroke-dasharray=\"3 2\"/>",
            (x1 + x2) / 2.0
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    svg
}
