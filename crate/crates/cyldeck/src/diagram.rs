//! Cylinder diagrams: horizontally periodic translation surfaces.
//!
//! A surface is a list of cylinders. Each cylinder is an annulus of
//! circumference `c` and height `h` whose boundary circles are partitioned
//! into labeled saddle connections: the `top` word lists the saddles along
//! the upper boundary (the cylinder sits *below* them), the `bottom` word
//! those along the lower boundary (the cylinder sits *above* them). Every
//! label occurs exactly once among all tops and exactly once among all
//! bottoms; the two occurrences are glued left endpoint to left endpoint.
//!
//! Twist convention: within a cylinder the bottom word starts at internal
//! coordinate 0 and the top word starts at coordinate `twist`, so the shear
//! `(1 t; 0 1)` sends `twist` to `twist + t*h`. This one convention is used
//! everywhere, including the file format and the vertical-flow tracer.

use crate::scalar::FieldScalar;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

/// One horizontal cylinder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderSpec {
    pub id: String,
    pub height: FieldScalar,
    pub twist: FieldScalar,
    /// Saddles along the upper boundary, left to right from `twist`.
    pub top: Vec<(String, FieldScalar)>,
    /// Saddles along the lower boundary, left to right from 0.
    pub bottom: Vec<(String, FieldScalar)>,
}

impl CylinderSpec {
    pub fn circumference(&self) -> FieldScalar {
        self.top
            .iter()
            .fold(FieldScalar::zero(), |acc, (_, l)| acc + l)
    }

    pub fn bottom_circumference(&self) -> FieldScalar {
        self.bottom
            .iter()
            .fold(FieldScalar::zero(), |acc, (_, l)| acc + l)
    }

    /// Position of the left end of `top[k]`, in cylinder coordinates.
    pub fn top_position(&self, k: usize) -> FieldScalar {
        let mut p = self.twist.clone();
        for (_, l) in &self.top[..k] {
            p = p + l;
        }
        p
    }

    /// Position of the left end of `bottom[k]`.
    pub fn bottom_position(&self, k: usize) -> FieldScalar {
        let mut p = FieldScalar::zero();
        for (_, l) in &self.bottom[..k] {
            p = p + l;
        }
        p
    }

    pub fn modulus(&self) -> FieldScalar {
        self.height.checked_div(&self.circumference()).expect("positive circumference")
    }
}

/// A horizontally periodic translation surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderDiagram {
    pub cylinders: Vec<CylinderSpec>,
    pub disc: u64,
}

/// Which boundary of a cylinder a corner sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top,
    Bottom,
}

/// A breakpoint on a boundary circle: the left endpoint of segment `seg` of
/// the given side of cylinder `cyl`. Each corner carries a half-disk of
/// surface angle pi, so cone angles are pi times orbit sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub cyl: usize,
    pub side: Side,
    pub seg: usize,
}

/// A singularity: one orbit of corners under the rotation successor map.
#[derive(Clone, Debug)]
pub struct Zero {
    pub corners: Vec<Corner>,
    /// Cone angle is `2*pi*(order+1)`; order 0 is a regular marked point.
    pub order: usize,
}

/// Adjacency structure of the horizontal cylinders.
#[derive(Clone, Debug)]
pub struct CylinderGraph {
    pub vertex_ids: Vec<String>,
    /// Labels shared between each unordered pair, keyed by (min, max) index.
    pub edges: BTreeMap<(usize, usize), Vec<String>>,
    /// BFS distances; `None` when disconnected (validation rejects that).
    pub dist: Vec<Vec<Option<usize>>>,
}

impl CylinderGraph {
    pub fn distance(&self, i: usize, j: usize) -> Option<usize> {
        self.dist[i][j]
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.keys().any(|&(a, b)| a == b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonPositiveHeight(String),
    NonPositiveLength { cylinder: String, label: String },
    BoundaryLengthMismatch(String),
    LabelCount { label: String, tops: usize, bottoms: usize },
    OccurrenceLengthMismatch(String),
    Disconnected,
    TwistOutOfRange(String),
    DiscMismatch(String),
    EmptyBoundary(String),
    NoCylinders,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveHeight(c) => write!(f, "cylinder {c}: height must be positive"),
            Violation::NonPositiveLength { cylinder, label } => {
                write!(f, "cylinder {cylinder}: saddle {label} has non-positive length")
            }
            Violation::BoundaryLengthMismatch(c) => {
                write!(f, "cylinder {c}: top and bottom lengths disagree")
            }
            Violation::LabelCount { label, tops, bottoms } => write!(
                f,
                "label {label}: appears {tops} time(s) on tops and {bottoms} on bottoms (want 1 and 1)"
            ),
            Violation::OccurrenceLengthMismatch(l) => {
                write!(f, "label {l}: lengths differ between its two occurrences")
            }
            Violation::Disconnected => write!(f, "surface is not connected"),
            Violation::TwistOutOfRange(c) => write!(f, "cylinder {c}: twist not in [0, circumference)"),
            Violation::DiscMismatch(c) => write!(f, "cylinder {c}: scalar discriminant differs from header"),
            Violation::EmptyBoundary(c) => write!(f, "cylinder {c}: empty boundary word"),
            Violation::NoCylinders => write!(f, "diagram has no cylinders"),
        }
    }
}

/// Result of [`CylinderDiagram::validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub genus: Option<usize>,
    pub zero_orders: Vec<usize>,
    pub connected: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CylinderDiagram {
    pub fn new(cylinders: Vec<CylinderSpec>, disc: u64) -> Self {
        CylinderDiagram { cylinders, disc }
    }

    pub fn cylinder_index(&self, id: &str) -> Option<usize> {
        self.cylinders.iter().position(|c| c.id == id)
    }

    pub fn cylinder(&self, id: &str) -> Option<&CylinderSpec> {
        self.cylinders.iter().find(|c| c.id == id)
    }

    /// Index of the top occurrence of a label: (cylinder, segment).
    pub fn top_occurrence(&self, label: &str) -> Option<(usize, usize)> {
        for (ci, c) in self.cylinders.iter().enumerate() {
            if let Some(k) = c.top.iter().position(|(l, _)| l == label) {
                return Some((ci, k));
            }
        }
        None
    }

    pub fn bottom_occurrence(&self, label: &str) -> Option<(usize, usize)> {
        for (ci, c) in self.cylinders.iter().enumerate() {
            if let Some(k) = c.bottom.iter().position(|(l, _)| l == label) {
                return Some((ci, k));
            }
        }
        None
    }

    pub fn saddle_labels(&self) -> Vec<String> {
        let mut labels = Vec::new();
        for c in &self.cylinders {
            for (l, _) in &c.top {
                labels.push(l.clone());
            }
        }
        labels.sort();
        labels
    }

    pub fn saddle_length(&self, label: &str) -> Option<FieldScalar> {
        self.top_occurrence(label)
            .map(|(ci, k)| self.cylinders[ci].top[k].1.clone())
    }

    /// Structural validation; returns a report rather than failing fast.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.cylinders.is_empty() {
            violations.push(Violation::NoCylinders);
            return ValidationReport {
                violations,
                genus: None,
                zero_orders: Vec::new(),
                connected: false,
            };
        }
        let mut tops: HashMap<&str, usize> = HashMap::new();
        let mut bottoms: HashMap<&str, usize> = HashMap::new();
        for c in &self.cylinders {
            if !c.height.is_positive() {
                violations.push(Violation::NonPositiveHeight(c.id.clone()));
            }
            if c.top.is_empty() || c.bottom.is_empty() {
                violations.push(Violation::EmptyBoundary(c.id.clone()));
                continue;
            }
            for (l, len) in c.top.iter().chain(&c.bottom) {
                if !len.is_positive() {
                    violations.push(Violation::NonPositiveLength {
                        cylinder: c.id.clone(),
                        label: l.clone(),
                    });
                }
                if len.disc() != 1 && len.disc() != self.disc {
                    violations.push(Violation::DiscMismatch(c.id.clone()));
                }
            }
            if c.circumference() != c.bottom_circumference() {
                violations.push(Violation::BoundaryLengthMismatch(c.id.clone()));
            }
            let circ = c.circumference();
            if circ.is_positive()
                && (c.twist.is_negative() || c.twist.cmp_real(&circ) != std::cmp::Ordering::Less)
            {
                violations.push(Violation::TwistOutOfRange(c.id.clone()));
            }
            for (l, _) in &c.top {
                *tops.entry(l).or_insert(0) += 1;
            }
            for (l, _) in &c.bottom {
                *bottoms.entry(l).or_insert(0) += 1;
            }
        }
        let all_labels: HashSet<&str> = tops.keys().chain(bottoms.keys()).copied().collect();
        for l in &all_labels {
            let t = tops.get(l).copied().unwrap_or(0);
            let b = bottoms.get(l).copied().unwrap_or(0);
            if t != 1 || b != 1 {
                violations.push(Violation::LabelCount {
                    label: l.to_string(),
                    tops: t,
                    bottoms: b,
                });
            }
        }
        if violations.is_empty() {
            for l in &all_labels {
                let (tc, tk) = self.top_occurrence(l).unwrap();
                let (bc, bk) = self.bottom_occurrence(l).unwrap();
                if self.cylinders[tc].top[tk].1 != self.cylinders[bc].bottom[bk].1 {
                    violations.push(Violation::OccurrenceLengthMismatch(l.to_string()));
                }
            }
        }
        let connected = violations.is_empty() && self.is_connected();
        if violations.is_empty() && !connected {
            violations.push(Violation::Disconnected);
        }
        let (genus, zero_orders) = if violations.is_empty() {
            let zeros = self.zeros();
            let orders: Vec<usize> = {
                let mut o: Vec<usize> =
                    zeros.iter().map(|z| z.order).filter(|&k| k > 0).collect();
                o.sort_unstable_by(|a, b| b.cmp(a));
                o
            };
            let total: usize = zeros.iter().map(|z| z.order).sum();
            (Some(total / 2 + 1), orders)
        } else {
            (None, Vec::new())
        };
        ValidationReport {
            violations,
            genus,
            zero_orders,
            connected,
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.cylinders.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut label_to_cyls: HashMap<&str, Vec<usize>> = HashMap::new();
        for (ci, c) in self.cylinders.iter().enumerate() {
            for (l, _) in c.top.iter().chain(&c.bottom) {
                label_to_cyls.entry(l).or_default().push(ci);
            }
        }
        while let Some(ci) = queue.pop_front() {
            for (l, _) in self.cylinders[ci].top.iter().chain(&self.cylinders[ci].bottom) {
                for &cj in &label_to_cyls[l.as_str()] {
                    if !seen[cj] {
                        seen[cj] = true;
                        queue.push_back(cj);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn corners(&self) -> Vec<Corner> {
        let mut out = Vec::new();
        for (ci, c) in self.cylinders.iter().enumerate() {
            for k in 0..c.top.len() {
                out.push(Corner { cyl: ci, side: Side::Top, seg: k });
            }
            for k in 0..c.bottom.len() {
                out.push(Corner { cyl: ci, side: Side::Bottom, seg: k });
            }
        }
        out
    }

    /// Rotating counterclockwise around the vertex by one half-disk.
    ///
    /// From a lower half-disk (top breakpoint) the exit ray points right
    /// along the segment starting there; crossing it lands at the start of
    /// that segment's bottom occurrence. From an upper half-disk (bottom
    /// breakpoint) the exit ray points left along the segment ending there;
    /// crossing it lands at the end of that segment's top occurrence.
    pub fn corner_successor(&self, corner: Corner) -> Corner {
        match corner.side {
            Side::Top => {
                let label = &self.cylinders[corner.cyl].top[corner.seg].0;
                let (bc, bk) = self
                    .bottom_occurrence(label)
                    .expect("valid diagram: label has a bottom occurrence");
                Corner { cyl: bc, side: Side::Bottom, seg: bk }
            }
            Side::Bottom => {
                let n = self.cylinders[corner.cyl].bottom.len();
                let prev = (corner.seg + n - 1) % n;
                let label = &self.cylinders[corner.cyl].bottom[prev].0;
                let (tc, tk) = self
                    .top_occurrence(label)
                    .expect("valid diagram: label has a top occurrence");
                let m = self.cylinders[tc].top.len();
                Corner { cyl: tc, side: Side::Top, seg: (tk + 1) % m }
            }
        }
    }

    /// Corner orbits of the rotation map: one per singular (or marked) point.
    pub fn zeros(&self) -> Vec<Zero> {
        let mut remaining: std::collections::BTreeSet<Corner> = self.corners().into_iter().collect();
        let mut zeros = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut orbit = Vec::new();
            let mut cur = start;
            loop {
                remaining.remove(&cur);
                orbit.push(cur);
                cur = self.corner_successor(cur);
                if cur == start {
                    break;
                }
            }
            debug_assert!(orbit.len() % 2 == 0, "cone angle must be a multiple of 2 pi");
            let order = orbit.len() / 2 - 1;
            zeros.push(Zero { corners: orbit, order });
        }
        zeros
    }

    /// Zero orders (descending, order-0 marked points omitted) plus genus.
    pub fn stratum(&self) -> (Vec<usize>, usize) {
        let zeros = self.zeros();
        let mut orders: Vec<usize> = zeros.iter().map(|z| z.order).filter(|&k| k > 0).collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let total: usize = zeros.iter().map(|z| z.order).sum();
        (orders, total / 2 + 1)
    }

    /// Zero index (into `zeros()`) containing each corner.
    pub fn zero_of_corner(&self, zeros: &[Zero]) -> HashMap<Corner, usize> {
        let mut map = HashMap::new();
        for (zi, z) in zeros.iter().enumerate() {
            for &c in &z.corners {
                map.insert(c, zi);
            }
        }
        map
    }

    pub fn cylinder_graph(&self) -> CylinderGraph {
        let n = self.cylinders.len();
        let mut edges: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        for (ci, c) in self.cylinders.iter().enumerate() {
            for (l, _) in &c.top {
                let (above, _) = self.bottom_occurrence(l).expect("valid diagram");
                let key = (ci.min(above), ci.max(above));
                edges.entry(key).or_default().push(l.clone());
            }
        }
        for labels in edges.values_mut() {
            labels.sort();
        }
        let mut dist = vec![vec![None; n]; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in edges.keys() {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for s in 0..n {
            dist[s][s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let du = dist[s][u].unwrap();
                for &v in &adj[u] {
                    if dist[s][v].is_none() {
                        dist[s][v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        CylinderGraph {
            vertex_ids: self.cylinders.iter().map(|c| c.id.clone()).collect(),
            edges,
            dist,
        }
    }

    /// `(circumference, height, modulus)` per cylinder, in file order.
    pub fn moduli(&self) -> Vec<(FieldScalar, FieldScalar, FieldScalar)> {
        self.cylinders
            .iter()
            .map(|c| (c.circumference(), c.height.clone(), c.modulus()))
            .collect()
    }

    /// Total flat area, exactly.
    pub fn area(&self) -> FieldScalar {
        self.cylinders.iter().fold(FieldScalar::zero(), |acc, c| {
            acc + c.circumference() * c.height.clone()
        })
    }

    /// Apply an upper-triangular matrix `(a b; 0 d)` with `a, d > 0`:
    /// lengths scale by `a`, heights by `d`, twists map to `a*t + b*h`.
    pub fn apply_matrix(
        &self,
        a: &FieldScalar,
        b: &FieldScalar,
        d: &FieldScalar,
    ) -> Result<CylinderDiagram, MatrixError> {
        if !a.is_positive() || !d.is_positive() {
            return Err(MatrixError::Unsupported);
        }
        let mut out = self.clone();
        for c in out.cylinders.iter_mut() {
            let circ = c.circumference();
            let new_circ = a.clone() * circ;
            let t = a.clone() * c.twist.clone() + b.clone() * c.height.clone();
            c.twist = t.rem_euclid(&new_circ);
            c.height = d.clone() * c.height.clone();
            for (_, l) in c.top.iter_mut().chain(c.bottom.iter_mut()) {
                *l = a.clone() * l.clone();
            }
        }
        Ok(out)
    }

    /// Shear `(1 t; 0 1)`.
    pub fn shear(&self, t: &FieldScalar) -> CylinderDiagram {
        self.apply_matrix(&FieldScalar::one(), t, &FieldScalar::one())
            .expect("shear is always supported")
    }

    /// Rename every saddle and cylinder through the given maps (missing keys
    /// keep their names).
    pub fn relabeled(
        &self,
        saddle_map: &HashMap<String, String>,
        cylinder_map: &HashMap<String, String>,
    ) -> CylinderDiagram {
        let mut out = self.clone();
        for c in out.cylinders.iter_mut() {
            if let Some(n) = cylinder_map.get(&c.id) {
                c.id = n.clone();
            }
            for (l, _) in c.top.iter_mut().chain(c.bottom.iter_mut()) {
                if let Some(n) = saddle_map.get(l) {
                    *l = n.clone();
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// Only upper-triangular matrices with positive diagonal act on
    /// horizontal cylinder diagrams; rotate through the flow module instead.
    Unsupported,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::Unsupported => {
                write!(f, "unsupported matrix: only upper-triangular with positive diagonal")
            }
        }
    }
}

impl std::error::Error for MatrixError {}

/// Convenience builder used by fixtures and tests.
pub fn cyl(
    id: &str,
    height: FieldScalar,
    twist: FieldScalar,
    top: &[(&str, FieldScalar)],
    bottom: &[(&str, FieldScalar)],
) -> CylinderSpec {
    CylinderSpec {
        id: id.to_string(),
        height,
        twist,
        top: top.iter().map(|(l, s)| (l.to_string(), s.clone())).collect(),
        bottom: bottom.iter().map(|(l, s)| (l.to_string(), s.clone())).collect(),
    }
}
