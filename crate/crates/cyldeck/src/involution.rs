//! Hyperelliptic involution search.
//!
//! The involution acts on each cylinder as the point reflection
//! `(x, y) -> (sigma - x, h - y)` for a per-cylinder constant `sigma`: it
//! fixes every cylinder setwise, reverses the core orientation and swaps the
//! two boundary circles. It maps the top saddle occupying `[p, p + len)` to
//! the bottom saddle occupying `[sigma - p - len, sigma - p)`. The search
//! enumerates the finitely many `sigma` candidates for one cylinder and
//! propagates through the gluing; cylinder-swapping symmetries are out of
//! scope.

use crate::diagram::CylinderDiagram;
use crate::scalar::FieldScalar;
use std::collections::HashMap;

/// A verified order-two symmetry acting by -1 on holonomy and fixing each
/// cylinder setwise.
#[derive(Clone, Debug)]
pub struct Involution {
    /// Pairing of saddles; fixed saddles map to themselves.
    pub saddle_map: HashMap<String, String>,
    /// Identity on cylinders (setwise-fixed symmetries only).
    pub cylinder_map: HashMap<String, String>,
    /// The reflection constant of each cylinder.
    pub reflect: HashMap<String, FieldScalar>,
}

impl Involution {
    pub fn image_of(&self, saddle: &str) -> Option<&str> {
        self.saddle_map.get(saddle).map(|s| s.as_str())
    }
}

/// The bottom saddle of `cyl` whose left end sits at `pos` (mod c), if any.
fn bottom_saddle_at(d: &CylinderDiagram, ci: usize, pos: &FieldScalar) -> Option<usize> {
    let c = &d.cylinders[ci];
    let circ = c.circumference();
    let want = pos.rem_euclid(&circ);
    (0..c.bottom.len()).find(|&k| c.bottom_position(k).rem_euclid(&circ) == want)
}

fn top_saddle_at(d: &CylinderDiagram, ci: usize, pos: &FieldScalar) -> Option<usize> {
    let c = &d.cylinders[ci];
    let circ = c.circumference();
    let want = pos.rem_euclid(&circ);
    (0..c.top.len()).find(|&k| c.top_position(k).rem_euclid(&circ) == want)
}

/// Check one full assignment of reflection constants; returns the saddle map
/// when every saddle image is consistent from both of its sides.
fn check_sigmas(d: &CylinderDiagram, sigmas: &[FieldScalar]) -> Option<HashMap<String, String>> {
    let mut saddle_map: HashMap<String, String> = HashMap::new();
    for (ci, c) in d.cylinders.iter().enumerate() {
        let circ = c.circumference();
        for (k, (label, len)) in c.top.iter().enumerate() {
            let p = c.top_position(k);
            let image_pos = (sigmas[ci].clone() - p - len.clone()).rem_euclid(&circ);
            let bk = bottom_saddle_at(d, ci, &image_pos)?;
            let (blabel, blen) = &c.bottom[bk];
            if blen != len {
                return None;
            }
            // Cross-check from the other cylinder bordering `label`.
            let (di, dk) = d.bottom_occurrence(label).expect("valid diagram");
            let dcyl = &d.cylinders[di];
            let dcirc = dcyl.circumference();
            let p2 = dcyl.bottom_position(dk);
            let image_pos2 = (sigmas[di].clone() - p2 - len.clone()).rem_euclid(&dcirc);
            let tk = top_saddle_at(d, di, &image_pos2)?;
            if dcyl.top[tk].0 != *blabel {
                return None;
            }
            saddle_map.insert(label.clone(), blabel.clone());
            saddle_map.insert(blabel.clone(), label.clone());
        }
    }
    // Order two: pairing is already symmetric by construction; make sure
    // every saddle got an image.
    if saddle_map.len() != d.saddle_labels().len() {
        return None;
    }
    Some(saddle_map)
}

/// Propagate reflection constants from a seed through the gluing graph.
/// The image of each saddle determines the neighbor's constant.
fn propagate(d: &CylinderDiagram, seed: usize, sigma0: FieldScalar) -> Option<Vec<FieldScalar>> {
    let n = d.cylinders.len();
    let mut sigmas: Vec<Option<FieldScalar>> = vec![None; n];
    sigmas[seed] = Some(sigma0);
    let mut queue = std::collections::VecDeque::from([seed]);
    while let Some(ci) = queue.pop_front() {
        let sigma = sigmas[ci].clone().unwrap();
        let c = &d.cylinders[ci];
        let circ = c.circumference();
        for (k, (label, len)) in c.top.iter().enumerate() {
            let p = c.top_position(k);
            let image_pos = (sigma.clone() - p - len.clone()).rem_euclid(&circ);
            let bk = bottom_saddle_at(d, ci, &image_pos)?;
            let image_label = &c.bottom[bk].0;
            // In the neighbor D above `label`, the image saddle must appear
            // on the top at position sigma_D - p' - len, which pins sigma_D.
            let (di, dk) = d.bottom_occurrence(label).expect("valid diagram");
            let (ti, tk) = d.top_occurrence(image_label).expect("valid diagram");
            if ti != di {
                return None;
            }
            let dcyl = &d.cylinders[di];
            let dcirc = dcyl.circumference();
            let p2 = dcyl.bottom_position(dk);
            let q2 = dcyl.top_position(tk);
            let sigma_d = (p2 + len.clone() + q2).rem_euclid(&dcirc);
            match &sigmas[di] {
                Some(existing) => {
                    if *existing != sigma_d {
                        return None;
                    }
                }
                None => {
                    sigmas[di] = Some(sigma_d);
                    queue.push_back(di);
                }
            }
        }
    }
    sigmas.into_iter().collect()
}

/// Search for the hyperelliptic involution. Returns `None` when no
/// cylinder-setwise-fixed symmetry exists.
pub fn find_involution(d: &CylinderDiagram) -> Option<Involution> {
    if d.cylinders.is_empty() {
        return None;
    }
    let c0 = &d.cylinders[0];
    let circ0 = c0.circumference();
    // sigma candidates for cylinder 0: the first top saddle must land on a
    // bottom breakpoint.
    let p0 = c0.top_position(0);
    let l0 = c0.top[0].1.clone();
    for j in 0..c0.bottom.len() {
        let sigma0 = (c0.bottom_position(j) + p0.clone() + l0.clone()).rem_euclid(&circ0);
        let Some(sigmas) = propagate(d, 0, sigma0) else {
            continue;
        };
        if let Some(saddle_map) = check_sigmas(d, &sigmas) {
            let cylinder_map = d
                .cylinders
                .iter()
                .map(|c| (c.id.clone(), c.id.clone()))
                .collect();
            let reflect = d
                .cylinders
                .iter()
                .zip(&sigmas)
                .map(|(c, s)| (c.id.clone(), s.clone()))
                .collect();
            return Some(Involution {
                saddle_map,
                cylinder_map,
                reflect,
            });
        }
    }
    None
}
