//! Exact vertical flow: separatrix tracing, vertical cylinder
//! decomposition, rotation into a horizontal diagram, saddle-length
//! classification and boundary alternation.
//!
//! The tracer follows upward separatrices from every singular vertex with
//! exact position bookkeeping. When each one terminates at a vertex within
//! the step budget, the traced vertical saddle connections cut the surface
//! into vertical cylinders, recovered as orbits of the boundary arcs under
//! the upward first-return map. Hitting a breakpoint exactly is a vertex
//! hit; positions compare exactly, so there is no tolerance anywhere.

use crate::deform::SubequivalencePartition;
use crate::diagram::{CylinderDiagram, CylinderSpec};
use crate::scalar::FieldScalar;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowError {
    /// Some separatrix exceeded the budget: the direction is not certified
    /// periodic (nor aperiodic) at this budget.
    NotPeriodicWithinBudget { budget: usize },
    ClassificationFailed { saddle: String, reason: String },
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::NotPeriodicWithinBudget { budget } => {
                write!(f, "not vertically periodic within {budget} crossings")
            }
            FlowError::ClassificationFailed { saddle, reason } => {
                write!(f, "saddle-length classification failed at {saddle}: {reason}")
            }
        }
    }
}

impl std::error::Error for FlowError {}

/// One vertical saddle connection: the cylinders it crosses with exact
/// horizontal positions, bottom to top.
#[derive(Clone, Debug)]
pub struct VerticalSaddle {
    pub crossings: Vec<(usize, FieldScalar)>,
    pub length: FieldScalar,
}

/// A maximal vertical cylinder.
#[derive(Clone, Debug)]
pub struct VerticalCylinder {
    /// Length of the vertical core curve.
    pub circumference: FieldScalar,
    /// Transversal width.
    pub height: FieldScalar,
    /// Crossing counts per horizontal cylinder id.
    pub crossing_profile: Vec<(String, usize)>,
    /// Horizontal saddles the core passes through, in cycle order.
    pub cross_saddles: Vec<String>,
    /// The arcs (horizontal cylinder index, left endpoint) in cycle order.
    pub arcs: Vec<(usize, FieldScalar)>,
}

impl VerticalCylinder {
    pub fn crossing_count(&self, id: &str) -> usize {
        self.crossing_profile
            .iter()
            .find(|(cid, _)| cid == id)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }

    pub fn total_crossings(&self) -> usize {
        self.crossing_profile.iter().map(|(_, n)| n).sum()
    }

    pub fn area(&self) -> FieldScalar {
        self.circumference.clone() * self.height.clone()
    }
}

#[derive(Clone, Debug)]
pub struct VerticalDecomposition {
    pub cylinders: Vec<VerticalCylinder>,
    pub saddles: Vec<VerticalSaddle>,
}

/// Where the upward flow leaving the top of cylinder `ci` at position `x`
/// goes: a vertex, or (cylinder, position) at the bottom of the next one.
enum UpStep {
    Vertex,
    Continue(usize, FieldScalar),
}

fn step_up(diagram: &CylinderDiagram, ci: usize, x: &FieldScalar) -> UpStep {
    let c = &diagram.cylinders[ci];
    let circ = c.circumference();
    let x = x.rem_euclid(&circ);
    // Find the top segment containing x: the one whose start has the
    // smallest offset measured leftward from x.
    let mut best: Option<(FieldScalar, usize)> = None;
    for k in 0..c.top.len() {
        let start = c.top_position(k).rem_euclid(&circ);
        let off = (x.clone() - start).rem_euclid(&circ);
        if best
            .as_ref()
            .is_none_or(|(b, _)| off.cmp_real(b) == std::cmp::Ordering::Less)
        {
            best = Some((off, k));
        }
    }
    let (off, k) = best.expect("nonempty top word");
    if off.is_zero() {
        return UpStep::Vertex;
    }
    let label = &c.top[k].0;
    let (di, dk) = diagram.bottom_occurrence(label).expect("valid diagram");
    let d = &diagram.cylinders[di];
    let pos = d.bottom_position(dk) + off;
    UpStep::Continue(di, pos.rem_euclid(&d.circumference()))
}

/// The horizontal saddle of `ci`'s top circle whose interior or left end
/// contains position `x`.
fn top_saddle_through(diagram: &CylinderDiagram, ci: usize, x: &FieldScalar) -> (usize, FieldScalar) {
    let c = &diagram.cylinders[ci];
    let circ = c.circumference();
    let x = x.rem_euclid(&circ);
    let mut best: Option<(FieldScalar, usize)> = None;
    for k in 0..c.top.len() {
        let start = c.top_position(k).rem_euclid(&circ);
        let off = (x.clone() - start).rem_euclid(&circ);
        if best
            .as_ref()
            .is_none_or(|(b, _)| off.cmp_real(b) == std::cmp::Ordering::Less)
        {
            best = Some((off, k));
        }
    }
    let (off, k) = best.expect("nonempty top word");
    (k, off)
}

/// Decompose the vertical direction into cylinders, tracing each upward
/// separatrix through at most `step_budget` cylinder crossings.
pub fn vertical_decomposition(
    diagram: &CylinderDiagram,
    step_budget: usize,
) -> Result<VerticalDecomposition, FlowError> {
    // Separatrix starts: the upward ray at every bottom breakpoint.
    let mut starts: Vec<(usize, FieldScalar)> = Vec::new();
    for (ci, c) in diagram.cylinders.iter().enumerate() {
        let circ = c.circumference();
        for k in 0..c.bottom.len() {
            starts.push((ci, c.bottom_position(k).rem_euclid(&circ)));
        }
    }
    starts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp_real(&b.1)));

    let mut saddles: Vec<VerticalSaddle> = Vec::new();
    // (cylinder, position) -> (saddle index, step index)
    let mut crossing_index: HashMap<(usize, String), usize> = HashMap::new();
    let pos_key = |ci: usize, x: &FieldScalar| (ci, format!("{x}"));
    for (ci0, x0) in starts {
        let mut crossings = Vec::new();
        let mut length = FieldScalar::zero();
        let mut ci = ci0;
        let mut x = x0;
        loop {
            if crossings.len() >= step_budget {
                return Err(FlowError::NotPeriodicWithinBudget { budget: step_budget });
            }
            crossings.push((ci, x.clone()));
            length = length + diagram.cylinders[ci].height.clone();
            match step_up(diagram, ci, &x) {
                UpStep::Vertex => break,
                UpStep::Continue(di, nx) => {
                    ci = di;
                    x = nx;
                }
            }
        }
        let idx = saddles.len();
        for (c, p) in &crossings {
            crossing_index.insert(pos_key(*c, p), idx);
        }
        saddles.push(VerticalSaddle { crossings, length });
    }

    // Cut positions per cylinder, sorted.
    let mut cuts: Vec<Vec<FieldScalar>> = vec![Vec::new(); diagram.cylinders.len()];
    for s in &saddles {
        for (ci, x) in &s.crossings {
            if !cuts[*ci].iter().any(|y| y == x) {
                cuts[*ci].push(x.clone());
            }
        }
    }
    for list in cuts.iter_mut() {
        list.sort_by(|a, b| a.cmp_real(b));
    }
    for (ci, list) in cuts.iter().enumerate() {
        assert!(
            !list.is_empty(),
            "every cylinder is crossed by some separatrix (cylinder {})",
            diagram.cylinders[ci].id
        );
    }

    // Arc orbits under the upward return map.
    let arc_count: usize = cuts.iter().map(|l| l.len()).sum();
    let mut seen: Vec<Vec<bool>> = cuts.iter().map(|l| vec![false; l.len()]).collect();
    let mut cylinders = Vec::new();
    let mut processed = 0usize;
    for ci0 in 0..cuts.len() {
        for k0 in 0..cuts[ci0].len() {
            if seen[ci0][k0] {
                continue;
            }
            // Walk the orbit of arc (ci0, k0).
            let mut arcs = Vec::new();
            let mut circumference = FieldScalar::zero();
            let mut profile: HashMap<usize, usize> = HashMap::new();
            let mut cross_saddles = Vec::new();
            let (mut ci, mut k) = (ci0, k0);
            loop {
                seen[ci][k] = true;
                processed += 1;
                let c = &diagram.cylinders[ci];
                let circ = c.circumference();
                let a = cuts[ci][k].clone();
                arcs.push((ci, a.clone()));
                circumference = circumference + c.height.clone();
                *profile.entry(ci).or_insert(0) += 1;
                // Image of the arc's left end through the top.
                let (tk, off) = top_saddle_through(diagram, ci, &a);
                let label = &c.top[tk].0;
                cross_saddles.push(label.clone());
                let (di, dk) = diagram.bottom_occurrence(label).expect("valid diagram");
                let d = &diagram.cylinders[di];
                let image = (d.bottom_position(dk) + off).rem_euclid(&d.circumference());
                let nk = cuts[di]
                    .iter()
                    .position(|y| *y == image)
                    .expect("arc endpoints map to cut positions");
                let _ = circ;
                if di == ci0 && nk == k0 {
                    break;
                }
                ci = di;
                k = nk;
                assert!(
                    !seen[ci][k] || (ci == ci0 && k == k0),
                    "arc orbits partition the cuts"
                );
            }
            // Width: distance to the next cut on the starting circle.
            let c0 = &diagram.cylinders[ci0];
            let circ0 = c0.circumference();
            let a0 = &cuts[ci0][k0];
            let b0 = &cuts[ci0][(k0 + 1) % cuts[ci0].len()];
            let width = if cuts[ci0].len() == 1 {
                circ0.clone()
            } else {
                let w = (b0.clone() - a0.clone()).rem_euclid(&circ0);
                if w.is_zero() {
                    circ0.clone()
                } else {
                    w
                }
            };
            let mut crossing_profile: Vec<(String, usize)> = profile
                .into_iter()
                .map(|(i, n)| (diagram.cylinders[i].id.clone(), n))
                .collect();
            crossing_profile.sort();
            cylinders.push(VerticalCylinder {
                circumference,
                height: width,
                crossing_profile,
                cross_saddles,
                arcs,
            });
        }
    }
    assert_eq!(processed, arc_count);
    Ok(VerticalDecomposition { cylinders, saddles })
}

/// Group vertical cylinders into sub-equivalence classes: transitive
/// closure of sharing the width exactly and a rational modulus ratio.
pub fn vertical_subequivalence_classes(dec: &VerticalDecomposition) -> Vec<Vec<usize>> {
    let n = dec.cylinders.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let a = &dec.cylinders[i];
            let b = &dec.cylinders[j];
            if a.height != b.height {
                continue;
            }
            let ma = a.height.checked_div(&a.circumference).unwrap();
            let mb = b.height.checked_div(&b.circumference).unwrap();
            if ma.rational_ratio_to(&mb).unwrap().is_some() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    out
}

/// Rotate a vertically periodic surface by a quarter turn `(x, y) -> (y, -x)`:
/// the vertical cylinders become the horizontal cylinders of the new
/// diagram, vertical saddle connections become its horizontal saddles.
pub fn rotate_vertical(
    diagram: &CylinderDiagram,
    dec: &VerticalDecomposition,
) -> CylinderDiagram {
    // Identify which saddle crosses each (cylinder, position).
    let mut crossing_of: HashMap<(usize, String), (usize, usize)> = HashMap::new();
    for (si, s) in dec.saddles.iter().enumerate() {
        for (step, (ci, x)) in s.crossings.iter().enumerate() {
            crossing_of.insert((*ci, format!("{x}")), (si, step));
        }
    }
    let saddle_name = |si: usize| format!("v{si}");

    let mut cylinders = Vec::new();
    for (vi, v) in dec.cylinders.iter().enumerate() {
        let circ = v.circumference.clone();
        // Walk the arc cycle accumulating core positions; group wall pieces
        // into runs belonging to one vertical saddle.
        #[derive(Clone)]
        struct Wall {
            saddle: usize,
            step: usize,
            pos: FieldScalar,
            len: FieldScalar,
        }
        let mut left_walls: Vec<Wall> = Vec::new();
        let mut right_walls: Vec<Wall> = Vec::new();
        let mut pos = FieldScalar::zero();
        for (ci, a) in &v.arcs {
            let c = &diagram.cylinders[*ci];
            let cc = c.circumference();
            let (si, step) = crossing_of[&(*ci, format!("{a}"))];
            left_walls.push(Wall {
                saddle: si,
                step,
                pos: pos.clone(),
                len: c.height.clone(),
            });
            // Right wall: the cut at the arc's right end.
            let cuts_here: Vec<&FieldScalar> = dec
                .cylinders
                .iter()
                .flat_map(|w| w.arcs.iter())
                .filter(|(cj, _)| cj == ci)
                .map(|(_, x)| x)
                .collect();
            let mut b: Option<FieldScalar> = None;
            for x in cuts_here {
                let off = (x.clone() - a.clone()).rem_euclid(&cc);
                if off.is_zero() {
                    continue;
                }
                if b.as_ref().is_none_or(|best| {
                    off.cmp_real(&(best.clone() - a.clone()).rem_euclid(&cc))
                        == std::cmp::Ordering::Less
                }) {
                    b = Some((a.clone() + off).rem_euclid(&cc));
                }
            }
            let b = b.unwrap_or_else(|| a.clone());
            let (sj, stepj) = crossing_of[&(*ci, format!("{b}"))];
            right_walls.push(Wall {
                saddle: sj,
                step: stepj,
                pos: pos.clone(),
                len: c.height.clone(),
            });
            pos = pos + c.height.clone();
        }
        // Group a wall sequence into saddle runs: a run continues while the
        // next piece is the same saddle's next step upward.
        let group = |walls: &[Wall]| -> Vec<(String, FieldScalar, FieldScalar)> {
            let n = walls.len();
            // A piece starts a run when the previous piece is not its
            // predecessor within the same vertical saddle.
            let starts: Vec<bool> = (0..n)
                .map(|i| {
                    let prev = &walls[(i + n - 1) % n];
                    let curw = &walls[i];
                    !(prev.saddle == curw.saddle && prev.step + 1 == curw.step)
                })
                .collect();
            let mut out = Vec::new();
            let first = starts.iter().position(|&s| s).expect("some run starts");
            let mut i = first;
            loop {
                let mut len = walls[i].len.clone();
                let posn = walls[i].pos.clone();
                let saddle = walls[i].saddle;
                let mut j = (i + 1) % n;
                while j != first && !starts[j] {
                    len = len + walls[j].len.clone();
                    j = (j + 1) % n;
                }
                out.push((saddle_name(saddle), len, posn));
                i = j;
                if i == first {
                    break;
                }
            }
            out
        };
        let top_runs = group(&left_walls);
        let bottom_runs = group(&right_walls);
        let mut bottom = bottom_runs;
        bottom.sort_by(|a, b| a.2.cmp_real(&b.2));
        let b0 = bottom[0].2.clone();
        let mut top = top_runs;
        top.sort_by(|a, b| {
            let oa = (a.2.clone() - b0.clone()).rem_euclid(&circ);
            let ob = (b.2.clone() - b0.clone()).rem_euclid(&circ);
            oa.cmp_real(&ob)
        });
        let twist = (top[0].2.clone() - b0).rem_euclid(&circ);
        cylinders.push(CylinderSpec {
            id: format!("V{vi}"),
            height: v.height.clone(),
            twist,
            top: top.into_iter().map(|(l, len, _)| (l, len)).collect(),
            bottom: bottom.into_iter().map(|(l, len, _)| (l, len)).collect(),
        });
    }
    CylinderDiagram::new(cylinders, diagram.disc)
}

/// The length classification of horizontal saddles by bordering class.
#[derive(Clone, Debug)]
pub struct SaddleLengthClasses {
    pub ell: FieldScalar,
    pub x: FieldScalar,
    /// Saddles bordering the first class (lengths all `ell`).
    pub ell_saddles: Vec<String>,
    pub x_saddles: Vec<String>,
    /// The long class borders A1 when true, A2 otherwise.
    pub ell_borders_a1: bool,
    /// `ell / x` rational: the arithmetic degeneracy diagnostic.
    pub arithmetic_degenerate: bool,
}

/// Classify the horizontal saddles: each must border exactly one
/// contracting-class cylinder (A1 or A2) and one expanding cylinder, all
/// saddles in a class share one length, and the two lengths are `ell >= x`.
pub fn classify_saddle_lengths(
    diagram: &CylinderDiagram,
    partition: &SubequivalencePartition,
) -> Result<SaddleLengthClasses, FlowError> {
    let mut s1: Vec<String> = Vec::new();
    let mut s2: Vec<String> = Vec::new();
    for label in diagram.saddle_labels() {
        let (below, _) = diagram.top_occurrence(&label).expect("valid diagram");
        let (above, _) = diagram.bottom_occurrence(&label).expect("valid diagram");
        let cb = partition
            .class_of(&diagram.cylinders[below].id)
            .ok_or_else(|| FlowError::ClassificationFailed {
                saddle: label.clone(),
                reason: "bordering cylinder outside the partition".into(),
            })?;
        let ca = partition
            .class_of(&diagram.cylinders[above].id)
            .ok_or_else(|| FlowError::ClassificationFailed {
                saddle: label.clone(),
                reason: "bordering cylinder outside the partition".into(),
            })?;
        match (cb, ca) {
            (1, 3) | (3, 1) => s1.push(label),
            (2, 3) | (3, 2) => s2.push(label),
            other => {
                return Err(FlowError::ClassificationFailed {
                    saddle: label,
                    reason: format!("borders classes A{} and A{}", other.0, other.1),
                })
            }
        }
    }
    let common_length = |saddles: &[String]| -> Result<FieldScalar, FlowError> {
        let mut len: Option<FieldScalar> = None;
        for s in saddles {
            let l = diagram.saddle_length(s).expect("saddle exists");
            match &len {
                None => len = Some(l),
                Some(prev) if *prev != l => {
                    return Err(FlowError::ClassificationFailed {
                        saddle: s.clone(),
                        reason: format!("length {l} differs from class length {prev}"),
                    })
                }
                _ => {}
            }
        }
        len.ok_or_else(|| FlowError::ClassificationFailed {
            saddle: "<none>".into(),
            reason: "empty saddle class".into(),
        })
    };
    let len1 = common_length(&s1)?;
    let len2 = common_length(&s2)?;
    let (ell, x, ell_saddles, x_saddles, ell_borders_a1) =
        if len1.cmp_real(&len2) == std::cmp::Ordering::Less {
            (len2, len1, s2, s1, false)
        } else {
            (len1, len2, s1, s2, true)
        };
    let arithmetic_degenerate = ell.rational_ratio_to(&x).expect("x positive").is_some();
    Ok(SaddleLengthClasses {
        ell,
        x,
        ell_saddles,
        x_saddles,
        ell_borders_a1,
        arithmetic_degenerate,
    })
}

/// Alternation of contracting-class saddles around every expanding cylinder.
#[derive(Clone, Debug)]
pub struct AlternationReport {
    /// (cylinder id, side, class word) for each violation.
    pub violations: Vec<(String, String, Vec<usize>)>,
}

impl AlternationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Read the cyclic word of saddle classes (A1 = 1, A2 = 2) along both
/// boundaries of every A3 cylinder and check strict alternation.
pub fn check_alternation(
    diagram: &CylinderDiagram,
    partition: &SubequivalencePartition,
) -> AlternationReport {
    let class_of_saddle = |label: &str| -> Option<usize> {
        let (below, _) = diagram.top_occurrence(label)?;
        let (above, _) = diagram.bottom_occurrence(label)?;
        let cb = partition.class_of(&diagram.cylinders[below].id)?;
        let ca = partition.class_of(&diagram.cylinders[above].id)?;
        match (cb, ca) {
            (1, 3) | (3, 1) => Some(1),
            (2, 3) | (3, 2) => Some(2),
            _ => None,
        }
    };
    let mut violations = Vec::new();
    for id in &partition.a3 {
        let c = diagram.cylinder(id).expect("partition ids exist");
        for (side_name, word) in [("top", &c.top), ("bottom", &c.bottom)] {
            let classes: Vec<usize> = word
                .iter()
                .map(|(l, _)| class_of_saddle(l).unwrap_or(0))
                .collect();
            let alternates = classes.len().is_multiple_of(2)
                && !classes.contains(&0)
                && (0..classes.len()).all(|i| classes[i] != classes[(i + 1) % classes.len()]);
            if !alternates {
                violations.push((id.clone(), side_name.to_string(), classes));
            }
        }
    }
    AlternationReport { violations }
}

/// A first-return oracle used by the acceptance tests: simulate the upward
/// flow from a sample of exact points and report the closed-orbit data it
/// finds. Independent of the arc-orbit machinery above.
pub fn first_return_oracle(
    diagram: &CylinderDiagram,
    samples: &[(usize, FieldScalar)],
    budget: usize,
) -> Option<Vec<FieldScalar>> {
    let mut lengths = Vec::new();
    for (ci0, x0) in samples {
        let mut ci = *ci0;
        let mut x = x0.clone();
        let mut length = FieldScalar::zero();
        let mut steps = 0usize;
        loop {
            if steps > budget {
                return None;
            }
            steps += 1;
            length = length + diagram.cylinders[ci].height.clone();
            match step_up(diagram, ci, &x) {
                UpStep::Vertex => {
                    // Sample on a singular leaf: skip it.
                    length = FieldScalar::zero();
                    break;
                }
                UpStep::Continue(di, nx) => {
                    ci = di;
                    x = nx;
                    if ci == *ci0 && x == *x0 {
                        break;
                    }
                }
            }
        }
        if !length.is_zero() {
            lengths.push(length);
        }
    }
    Some(lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::isomorphic;
    use crate::deform::{build_eta, partition_subequivalence, Direction};
    use crate::fixtures;
    use crate::scalar::FieldScalar as FS;

    #[test]
    fn unit_torus_is_one_vertical_cylinder() {
        let d = fixtures::torus();
        let dec = vertical_decomposition(&d, 1000).unwrap();
        assert_eq!(dec.cylinders.len(), 1);
        assert_eq!(dec.cylinders[0].circumference, FS::from_int(1));
        assert_eq!(dec.cylinders[0].height, FS::from_int(1));
    }

    #[test]
    fn half_twisted_torus_doubles_circumference() {
        // First-return oracle on the core circle: the return map is
        // x -> x - 1/2, so the orbit closes after two crossings.
        let d = fixtures::torus_with_twist(FS::from_ratio(1, 2));
        let dec = vertical_decomposition(&d, 1000).unwrap();
        assert_eq!(dec.cylinders.len(), 1);
        assert_eq!(dec.cylinders[0].circumference, FS::from_int(2));
        assert_eq!(dec.cylinders[0].height, FS::from_ratio(1, 2));
        let oracle = first_return_oracle(
            &d,
            &[(0, FS::from_ratio(1, 4))],
            1000,
        )
        .unwrap();
        assert_eq!(oracle, vec![FS::from_int(2)]);
    }

    #[test]
    fn irrational_twist_exhausts_budget() {
        let d = fixtures::torus_with_twist(FS::sqrt_term(1, 2, 2));
        match vertical_decomposition(&d, 64) {
            Err(FlowError::NotPeriodicWithinBudget { budget }) => assert_eq!(budget, 64),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn decomposition_area_matches_surface_area() {
        for name in ["TORUS", "MNEMONIC", "DOUBLED", "QUAD3"] {
            let d = fixtures::by_name(name).unwrap();
            if let Ok(dec) = vertical_decomposition(&d, 100_000) {
                let total = dec
                    .cylinders
                    .iter()
                    .fold(FS::zero(), |acc, v| acc + v.area());
                assert_eq!(total, d.area(), "{name} vertical area");
                // Crossing-profile consistency: circumference equals the sum
                // of crossed heights.
                for v in &dec.cylinders {
                    let mut sum = FS::zero();
                    for (id, n) in &v.crossing_profile {
                        let h = d.cylinder(id).unwrap().height.clone();
                        sum = sum + h * FS::from_int(*n as i64);
                    }
                    assert_eq!(sum, v.circumference);
                }
            }
        }
    }

    #[test]
    fn dehn_twist_invariance() {
        // twist -> twist + circumference is the identity on the diagram, and
        // a full Dehn twist preserves the vertical structure up to relabel.
        let d = fixtures::mnemonic();
        let dec1 = vertical_decomposition(&d, 100_000).unwrap();
        let mut e = d.clone();
        let c3 = e.cylinder_index("C3").unwrap();
        let circ = e.cylinders[c3].circumference();
        let shifted = (e.cylinders[c3].twist.clone() + circ.clone()).rem_euclid(&circ);
        e.cylinders[c3].twist = shifted;
        let dec2 = vertical_decomposition(&e, 100_000).unwrap();
        let mut a: Vec<String> = dec1
            .cylinders
            .iter()
            .map(|v| format!("{}x{}", v.circumference, v.height))
            .collect();
        let mut b: Vec<String> = dec2
            .cylinders
            .iter()
            .map(|v| format!("{}x{}", v.circumference, v.height))
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn rotate_torus_is_torus() {
        let d = fixtures::torus();
        let dec = vertical_decomposition(&d, 1000).unwrap();
        let r = rotate_vertical(&d, &dec);
        assert!(r.validate().is_valid());
        assert!(isomorphic(&r, &d));
    }

    #[test]
    fn rotate_preserves_stratum_and_area() {
        for name in ["TORUS", "MNEMONIC", "DOUBLED"] {
            let d = fixtures::by_name(name).unwrap();
            let dec = vertical_decomposition(&d, 100_000).unwrap();
            let r = rotate_vertical(&d, &dec);
            assert!(r.validate().is_valid(), "{name}: {:?}", r.validate().violations);
            assert_eq!(r.stratum(), d.stratum(), "{name} stratum");
            assert_eq!(r.area(), d.area(), "{name} area");
        }
    }

    #[test]
    fn rotate_twice_on_hyperelliptic_fixture() {
        // The quarter turn applied twice is the -1 map, realized by the
        // hyperelliptic involution: the diagram comes back to itself.
        let d = fixtures::mnemonic();
        let dec = vertical_decomposition(&d, 100_000).unwrap();
        let r = rotate_vertical(&d, &dec);
        let dec2 = vertical_decomposition(&r, 100_000).unwrap();
        let rr = rotate_vertical(&r, &dec2);
        assert!(isomorphic(&rr, &d));
    }

    #[test]
    fn mnemonic_classification_is_degenerate() {
        let d = fixtures::mnemonic();
        let eta = build_eta(&d).unwrap();
        let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
        let classes = classify_saddle_lengths(&d, &p).unwrap();
        // All lengths 1: ell = x = 1 with the rational-ratio warning, and
        // the boundary split puts C1's saddles in one class, C2's in the
        // other (length-table oracle: the fixture is square-tiled).
        assert_eq!(classes.ell, FS::from_int(1));
        assert_eq!(classes.x, FS::from_int(1));
        assert!(classes.arithmetic_degenerate);
        let mut a: Vec<String> = classes.ell_saddles.clone();
        a.sort();
        let mut b = classes.x_saddles.clone();
        b.sort();
        if classes.ell_borders_a1 {
            assert_eq!(a, vec!["s1", "s1p"]);
            assert_eq!(b, vec!["s2", "s2p"]);
        } else {
            assert_eq!(a, vec!["s2", "s2p"]);
            assert_eq!(b, vec!["s1", "s1p"]);
        }
    }

    #[test]
    fn quad3_classification_is_clean() {
        let d = fixtures::quad3();
        let eta = build_eta(&d).unwrap();
        let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
        let classes = classify_saddle_lengths(&d, &p).unwrap();
        assert!(!classes.arithmetic_degenerate);
        assert_eq!(classes.ell, FS::sqrt_term(1, 1, 2));
        assert_eq!(classes.x, FS::from_int(1));
    }

    #[test]
    fn all_equal_rational_lengths_flagged() {
        // equal saddle lengths and all-rational data: the ratio ell/x is
        // rational (here 1), which is precisely the degeneracy flag.
        let d = fixtures::doubled();
        let eta = build_eta(&d).unwrap();
        let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
        let classes = classify_saddle_lengths(&d, &p).unwrap();
        assert!(classes.arithmetic_degenerate);
    }

    #[test]
    fn alternation_holds_on_fixtures_and_fails_on_nonalt() {
        for name in ["MNEMONIC", "QUAD3", "DOUBLED"] {
            let d = fixtures::by_name(name).unwrap();
            let eta = build_eta(&d).unwrap();
            let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
            let report = check_alternation(&d, &p);
            assert!(report.ok(), "{name}: {:?}", report.violations);
        }
        let d = fixtures::non_alternating();
        let eta = build_eta(&d).unwrap();
        let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
        let report = check_alternation(&d, &p);
        assert!(!report.ok());
        // The violating word reads (A1, A2, A2).
        assert!(report
            .violations
            .iter()
            .any(|(_, _, w)| w == &vec![1, 2, 2]));
    }
}
