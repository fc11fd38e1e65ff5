//! Canonical forms for cylinder diagrams.
//!
//! Two diagrams are isomorphic when one maps onto the other by renaming
//! saddles and cylinders and re-anchoring boundary words (rotating a word
//! moves the coordinate origin, which shifts the twist accordingly). The
//! canonical encoding is the lexicographic minimum over an
//! isomorphism-equivariant family of presentations: every choice of start
//! cylinder and start bottom anchor, with all remaining anchors forced by
//! the breadth-first discovery order. Isomorphic diagrams therefore share
//! the same minimum, and distinct minima certify non-isomorphism.

use crate::diagram::{CylinderDiagram, CylinderSpec, Side};
use crate::scalar::FieldScalar;
use std::collections::{HashMap, VecDeque};

fn scalar_key(s: &FieldScalar) -> String {
    format!(
        "{}/{}:{}/{}:{}",
        s.rational_part().numer(),
        s.rational_part().denom(),
        s.radical_part().numer(),
        s.radical_part().denom(),
        s.disc()
    )
}

/// A cylinder re-anchored at a chosen boundary segment. The opposite word is
/// anchored at its breakpoint closest to the new origin (measuring rightward)
/// so the presentation carries no residual choice.
fn anchored(c: &CylinderSpec, side: Side, seg: usize) -> CylinderSpec {
    let circ = c.circumference();
    let mut out = c.clone();
    match side {
        Side::Bottom => {
            let b0 = c.bottom_position(seg);
            out.bottom.rotate_left(seg);
            // Top anchor: breakpoint with minimal offset from b0.
            let mut best: Option<(FieldScalar, usize)> = None;
            for k in 0..c.top.len() {
                let off = (c.top_position(k) - &b0).rem_euclid(&circ);
                if best.as_ref().is_none_or(|(b, _)| off.cmp_real(b) == std::cmp::Ordering::Less) {
                    best = Some((off, k));
                }
            }
            let (off, k) = best.expect("nonempty top word");
            out.top.rotate_left(k);
            out.twist = off;
        }
        Side::Top => {
            let t0 = c.top_position(seg);
            out.top.rotate_left(seg);
            let mut best: Option<(FieldScalar, usize)> = None;
            for k in 0..c.bottom.len() {
                let off = (c.bottom_position(k) - &t0).rem_euclid(&circ);
                if best.as_ref().is_none_or(|(b, _)| off.cmp_real(b) == std::cmp::Ordering::Less) {
                    best = Some((off, k));
                }
            }
            let (off, k) = best.expect("nonempty bottom word");
            out.bottom.rotate_left(k);
            // New origin is the chosen bottom breakpoint; the top word starts
            // `circ - off` to its right (mod circ).
            out.twist = (circ.clone() - off).rem_euclid(&circ);
        }
    }
    out
}

/// Encode relative to one start presentation; anchors of later cylinders are
/// forced by the first saddle through which each is discovered.
fn encode_from(diagram: &CylinderDiagram, start: usize, start_seg: usize) -> String {
    let n = diagram.cylinders.len();
    let mut view: Vec<Option<CylinderSpec>> = vec![None; n];
    view[start] = Some(anchored(&diagram.cylinders[start], Side::Bottom, start_seg));
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut discovered = vec![false; n];
    discovered[start] = true;
    let mut saddle_number: HashMap<String, usize> = HashMap::new();
    while let Some(ci) = queue.pop_front() {
        let c = view[ci].clone().expect("anchored before queueing");
        // Bottom word first, then top: a fixed convention.
        for (l, _) in c.bottom.iter() {
            let next = saddle_number.len();
            saddle_number.entry(l.clone()).or_insert(next);
            let (tc, tk) = diagram.top_occurrence(l).expect("valid diagram");
            if !discovered[tc] {
                discovered[tc] = true;
                view[tc] = Some(anchored(&diagram.cylinders[tc], Side::Top, tk));
                order.push(tc);
                queue.push_back(tc);
            }
        }
        for (l, _) in c.top.iter() {
            let next = saddle_number.len();
            saddle_number.entry(l.clone()).or_insert(next);
            let (bc, bk) = diagram.bottom_occurrence(l).expect("valid diagram");
            if !discovered[bc] {
                discovered[bc] = true;
                view[bc] = Some(anchored(&diagram.cylinders[bc], Side::Bottom, bk));
                order.push(bc);
                queue.push_back(bc);
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!("d{};n{};", diagram.disc, order.len()));
    for &ci in &order {
        let c = view[ci].as_ref().unwrap();
        out.push_str(&format!("[h{};t{};B", scalar_key(&c.height), scalar_key(&c.twist)));
        for (l, len) in &c.bottom {
            out.push_str(&format!("({},{})", saddle_number[l], scalar_key(len)));
        }
        out.push_str(";T");
        for (l, len) in &c.top {
            out.push_str(&format!("({},{})", saddle_number[l], scalar_key(len)));
        }
        out.push(']');
    }
    out
}

/// The canonical encoding of a connected diagram.
pub fn canonical_encoding(diagram: &CylinderDiagram) -> String {
    assert!(!diagram.cylinders.is_empty(), "empty diagram has no canonical form");
    let mut best: Option<String> = None;
    for (ci, c) in diagram.cylinders.iter().enumerate() {
        for seg in 0..c.bottom.len() {
            let enc = encode_from(diagram, ci, seg);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.unwrap()
}

/// Isomorphism up to relabeling and word re-anchoring.
pub fn isomorphic(a: &CylinderDiagram, b: &CylinderDiagram) -> bool {
    if a.cylinders.len() != b.cylinders.len() || a.disc != b.disc {
        return false;
    }
    canonical_encoding(a) == canonical_encoding(b)
}
