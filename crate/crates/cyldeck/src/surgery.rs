//! Collapse of cylinders and continuation of the rel motion through the
//! degeneration.
//!
//! Moving along the rel direction shrinks the contracting cylinders; at the
//! first collapse the shrunk cylinders are removed and their two boundary
//! circles are glued with the twist offset, splitting and merging saddles at
//! the exact merged breakpoints. Continuing the motion afterwards is a zero
//! surgery: the sinking zeros detach from the scar circles and slide
//! vertically, opening fresh cylinders fused from the slit panels while the
//! remaining bands keep their identities. Moving the other way undoes the
//! collapse. Both directions are implemented exactly; the upward move
//! reuses the downward one on the vertically flipped diagram.

use crate::deform::{DeformError, Direction, EtaVector};
use crate::diagram::{Corner, CylinderDiagram, CylinderSpec, Side};
use crate::scalar::FieldScalar;
use std::collections::{HashMap, HashSet};

/// Result of `move_until_collapse`.
#[derive(Clone, Debug)]
pub struct CollapseEvent {
    /// First collapse time along the chosen direction.
    pub time: FieldScalar,
    /// Ids of the cylinders that reached height zero.
    pub collapsed: Vec<String>,
    /// The degenerate surface with those cylinders merged out.
    pub resulting: CylinderDiagram,
    pub direction: Direction,
    /// Labels in `resulting` whose top-occurrence start marks a sinking
    /// zero; the continuation recovers the moving zero set from these.
    pub sink_markers: Vec<String>,
}

fn fresh_label(used: &mut HashSet<String>, base: &str) -> String {
    if used.insert(base.to_string()) {
        return base.to_string();
    }
    for i in 0.. {
        let cand = format!("{base}_{i}");
        if used.insert(cand.clone()) {
            return cand;
        }
    }
    unreachable!()
}

/// Merge out one zero-height cylinder: its bottom and top circles become a
/// single circle whose breakpoints are the union of both partitions (offset
/// by the twist), and every straddling saddle splits at those points.
/// Returns the rewritten diagram plus, per top saddle of the collapsed
/// cylinder, the label of the piece starting at its old left end (a sinking
/// zero marker).
fn collapse_cylinder(
    diagram: &CylinderDiagram,
    k: usize,
) -> Result<(CylinderDiagram, Vec<String>), DeformError> {
    let cyl = diagram.cylinders[k].clone();
    let circ = cyl.circumference();
    // Self-gluing would mean a contracting cylinder adjacent to itself,
    // which the rel parity already excludes.
    for (l, _) in &cyl.top {
        if cyl.bottom.iter().any(|(b, _)| b == l) {
            return Err(DeformError::ParityObstruction {
                left: cyl.id.clone(),
                right: cyl.id.clone(),
            });
        }
    }
    let bottom_points: Vec<FieldScalar> = (0..cyl.bottom.len())
        .map(|j| cyl.bottom_position(j).rem_euclid(&circ))
        .collect();
    let top_points: Vec<FieldScalar> = (0..cyl.top.len())
        .map(|m| cyl.top_position(m).rem_euclid(&circ))
        .collect();
    for t in &top_points {
        if let Some(b) = bottom_points.iter().find(|b| *b == t) {
            return Err(DeformError::VerticalSaddleVanishes {
                cylinder: cyl.id.clone(),
                position: b.clone(),
            });
        }
    }
    // All breakpoints in circle order.
    let mut points: Vec<FieldScalar> = bottom_points
        .iter()
        .chain(top_points.iter())
        .cloned()
        .collect();
    points.sort_by(|a, b| a.cmp_real(b));
    let npieces = points.len();
    // Piece i runs from points[i] to points[i+1] (cyclically).
    let piece_len = |i: usize| -> FieldScalar {
        if i + 1 < npieces {
            points[i + 1].clone() - points[i].clone()
        } else {
            circ.clone() + points[0].clone() - points[i].clone()
        }
    };
    // Which bottom/top saddle contains each piece: the saddle whose start is
    // the last partition point at or before the piece start.
    let owner = |starts: &[FieldScalar], p: &FieldScalar| -> usize {
        let mut best: Option<(FieldScalar, usize)> = None;
        for (j, s) in starts.iter().enumerate() {
            let off = (p.clone() - s.clone()).rem_euclid(&circ);
            if best
                .as_ref()
                .is_none_or(|(b, _)| off.cmp_real(b) == std::cmp::Ordering::Less)
            {
                best = Some((off, j));
            }
        }
        best.expect("nonempty partition").1
    };
    let mut used: HashSet<String> = diagram.saddle_labels().into_iter().collect();
    // Name pieces: keep an old label when the piece covers it entirely.
    let mut piece_labels: Vec<String> = Vec::with_capacity(npieces);
    let mut bottom_pieces: Vec<Vec<usize>> = vec![Vec::new(); cyl.bottom.len()];
    let mut top_pieces: Vec<Vec<usize>> = vec![Vec::new(); cyl.top.len()];
    for i in 0..npieces {
        let p = &points[i];
        let len = piece_len(i);
        let bj = owner(&bottom_points, p);
        let tm = owner(&top_points, p);
        bottom_pieces[bj].push(i);
        top_pieces[tm].push(i);
        let label = if len == cyl.bottom[bj].1 {
            cyl.bottom[bj].0.clone()
        } else if len == cyl.top[tm].1 {
            cyl.top[tm].0.clone()
        } else {
            fresh_label(&mut used, &format!("{}.{}", cyl.bottom[bj].0, i))
        };
        piece_labels.push(label);
    }
    // Order pieces within each old saddle by offset from its start.
    for (j, list) in bottom_pieces.iter_mut().enumerate() {
        let s = &bottom_points[j];
        list.sort_by(|&a, &b| {
            let oa = (points[a].clone() - s.clone()).rem_euclid(&circ);
            let ob = (points[b].clone() - s.clone()).rem_euclid(&circ);
            oa.cmp_real(&ob)
        });
    }
    for (m, list) in top_pieces.iter_mut().enumerate() {
        let s = &top_points[m];
        list.sort_by(|&a, &b| {
            let oa = (points[a].clone() - s.clone()).rem_euclid(&circ);
            let ob = (points[b].clone() - s.clone()).rem_euclid(&circ);
            oa.cmp_real(&ob)
        });
    }
    let markers: Vec<String> = (0..cyl.top.len())
        .map(|m| piece_labels[top_pieces[m][0]].clone())
        .collect();
    // Rewrite every other cylinder's words.
    let mut out = diagram.clone();
    out.cylinders.remove(k);
    for c in out.cylinders.iter_mut() {
        let mut new_top = Vec::new();
        for (l, len) in &c.top {
            if let Some(j) = cyl.bottom.iter().position(|(b, _)| b == l) {
                for &pi in &bottom_pieces[j] {
                    new_top.push((piece_labels[pi].clone(), piece_len(pi)));
                }
            } else {
                new_top.push((l.clone(), len.clone()));
            }
        }
        c.top = new_top;
        let mut new_bottom = Vec::new();
        for (l, len) in &c.bottom {
            if let Some(m) = cyl.top.iter().position(|(t, _)| t == l) {
                for &pi in &top_pieces[m] {
                    new_bottom.push((piece_labels[pi].clone(), piece_len(pi)));
                }
            } else {
                new_bottom.push((l.clone(), len.clone()));
            }
        }
        c.bottom = new_bottom;
    }
    Ok((out, markers))
}

/// Move along eta in the given direction until the first collapse; remove
/// the collapsed cylinders by boundary surgery.
pub fn move_until_collapse(
    diagram: &CylinderDiagram,
    eta: &EtaVector,
    dir: Direction,
) -> Result<CollapseEvent, DeformError> {
    let n = diagram.cylinders.len();
    if eta.signs.len() != n {
        return Err(DeformError::DimensionMismatch {
            expected: n,
            got: eta.signs.len(),
        });
    }
    let contracting: Vec<usize> = (0..n)
        .filter(|&j| dir.sign() * (eta.signs[j] as i64) < 0)
        .collect();
    if contracting.is_empty() {
        return Err(DeformError::NothingContracts);
    }
    let t_star = contracting
        .iter()
        .map(|&j| diagram.cylinders[j].height.clone())
        .fold(None::<FieldScalar>, |acc, h| match acc {
            None => Some(h),
            Some(m) => Some(FieldScalar::min_of(&m, &h)),
        })
        .unwrap();
    let collapsed_idx: Vec<usize> = contracting
        .iter()
        .copied()
        .filter(|&j| diagram.cylinders[j].height == t_star)
        .collect();
    // Advance all heights to the collapse time (twists are untouched: eta is
    // purely imaginary).
    let mut at_tstar = diagram.clone();
    for (j, c) in at_tstar.cylinders.iter_mut().enumerate() {
        let delta = t_star.clone() * FieldScalar::from_int(dir.sign() * eta.signs[j] as i64);
        c.height = c.height.clone() + delta;
    }
    let collapsed_ids: Vec<String> = collapsed_idx
        .iter()
        .map(|&j| diagram.cylinders[j].id.clone())
        .collect();
    // Markers for surviving contracting cylinders: their top labels mark
    // sinking zeros directly.
    let mut markers: Vec<String> = Vec::new();
    for &j in &contracting {
        if !collapsed_idx.contains(&j) {
            for (l, _) in &diagram.cylinders[j].top {
                markers.push(l.clone());
            }
        }
    }
    // Collapse in file order; collapsed cylinders are pairwise non-adjacent.
    let mut result = at_tstar;
    for id in &collapsed_ids {
        let k = result
            .cylinder_index(id)
            .expect("collapsed cylinder still present");
        for (l, _) in &result.cylinders[k].top {
            let (above, _) = result.bottom_occurrence(l).expect("valid diagram");
            if collapsed_ids.contains(&result.cylinders[above].id) {
                return Err(DeformError::ParityObstruction {
                    left: id.clone(),
                    right: result.cylinders[above].id.clone(),
                });
            }
        }
        let (next, piece_markers) = collapse_cylinder(&result, k)?;
        result = next;
        markers.extend(piece_markers);
    }
    Ok(CollapseEvent {
        time: t_star,
        collapsed: collapsed_ids,
        resulting: result,
        direction: dir,
        sink_markers: markers,
    })
}

/// Boundary word with explicit start positions (reduced mod circumference).
type Positioned = Vec<(String, FieldScalar, FieldScalar)>;

#[derive(Clone, Debug)]
enum SideWord {
    Word(Positioned),
    /// Every vertex healed: a zero-free circle that must fuse with the
    /// neighboring band. Entries keep positions for alignment.
    Open(Positioned),
}

#[derive(Clone, Debug)]
struct Proto {
    id: String,
    height: FieldScalar,
    circ: FieldScalar,
    top: SideWord,
    bottom: SideWord,
}

fn finalize(protos: Vec<Proto>, disc: u64) -> CylinderDiagram {
    let mut cylinders = Vec::with_capacity(protos.len());
    for p in protos {
        let (SideWord::Word(mut top), SideWord::Word(mut bottom)) = (p.top, p.bottom) else {
            panic!("unresolved open circle in surgery result");
        };
        bottom.sort_by(|a, b| a.2.cmp_real(&b.2));
        let b0 = bottom[0].2.clone();
        top.sort_by(|a, b| {
            let oa = (a.2.clone() - b0.clone()).rem_euclid(&p.circ);
            let ob = (b.2.clone() - b0.clone()).rem_euclid(&p.circ);
            oa.cmp_real(&ob)
        });
        let twist = (top[0].2.clone() - b0.clone()).rem_euclid(&p.circ);
        cylinders.push(CylinderSpec {
            id: p.id,
            height: p.height,
            twist,
            top: top.into_iter().map(|(l, len, _)| (l, len)).collect(),
            bottom: bottom.into_iter().map(|(l, len, _)| (l, len)).collect(),
        });
    }
    CylinderDiagram::new(cylinders, disc)
}

/// Sink the given zero classes by `u`: slit their downward separatrices,
/// split each slit cylinder into a main band and a panel band, fuse panels
/// through the slits into new cylinders, and heal the departed vertices.
pub fn move_zeros_down(
    diagram: &CylinderDiagram,
    sink: &HashSet<usize>,
    u: &FieldScalar,
) -> Result<CylinderDiagram, DeformError> {
    if !u.is_positive() {
        return Err(DeformError::SecondCollapse {
            bound: FieldScalar::zero(),
        });
    }
    let zeros = diagram.zeros();
    let zero_of = diagram.zero_of_corner(&zeros);
    let n = diagram.cylinders.len();

    // Slits: top corners belonging to sinking zeros, per cylinder, sorted by
    // position.
    let mut slits: Vec<Vec<(FieldScalar, usize)>> = vec![Vec::new(); n];
    for (&corner, &z) in &zero_of {
        if corner.side == Side::Top && sink.contains(&z) {
            let c = &diagram.cylinders[corner.cyl];
            let pos = c.top_position(corner.seg).rem_euclid(&c.circumference());
            slits[corner.cyl].push((pos, corner.seg));
        }
    }
    for list in slits.iter_mut() {
        list.sort_by(|a, b| a.0.cmp_real(&b.0));
    }
    // Continuation bound: the main band of every slit cylinder must keep
    // positive height.
    let mut bound: Option<FieldScalar> = None;
    for (ci, list) in slits.iter().enumerate() {
        if !list.is_empty() {
            let h = &diagram.cylinders[ci].height;
            bound = Some(match bound {
                None => h.clone(),
                Some(b) => FieldScalar::min_of(&b, h),
            });
        }
    }
    let Some(bound) = bound else {
        // Nothing to move: sinking zeros sit on no top circle, which cannot
        // happen for genuine zeros.
        return Err(DeformError::EtaUndefined);
    };
    if u.cmp_real(&bound) != std::cmp::Ordering::Less {
        return Err(DeformError::SecondCollapse { bound });
    }

    // Healed-vertex merge relation: across every sinking bottom vertex the
    // two adjacent saddles of that bottom word join up.
    let mut merge_right: HashMap<String, String> = HashMap::new();
    for (&corner, &z) in &zero_of {
        if corner.side == Side::Bottom && sink.contains(&z) {
            let c = &diagram.cylinders[corner.cyl];
            let m = c.bottom.len();
            let left = c.bottom[(corner.seg + m - 1) % m].0.clone();
            let right = c.bottom[corner.seg].0.clone();
            merge_right.insert(left, right);
        }
    }
    // Chains of merged labels; cyclic chains correspond to zero-free
    // circles and are resolved by band fusion later.
    let mut chain_of: HashMap<String, (String, bool)> = HashMap::new(); // label -> (chain label, is_cycle)
    let mut chain_members: HashMap<String, Vec<String>> = HashMap::new();
    {
        let mut used: HashSet<String> = diagram.saddle_labels().into_iter().collect();
        let values: HashSet<&String> = merge_right.values().collect();
        let mut in_chain: HashSet<String> = HashSet::new();
        let keys: Vec<String> = {
            let mut k: Vec<String> = merge_right.keys().cloned().collect();
            k.sort();
            k
        };
        for start in &keys {
            if values.contains(start) || in_chain.contains(start) {
                continue;
            }
            let mut members = vec![start.clone()];
            let mut cur = start.clone();
            while let Some(next) = merge_right.get(&cur) {
                members.push(next.clone());
                cur = next.clone();
            }
            let label = fresh_label(&mut used, &format!("m_{start}"));
            for m in &members {
                in_chain.insert(m.clone());
                chain_of.insert(m.clone(), (label.clone(), false));
            }
            chain_members.insert(label, members);
        }
        // Remaining keys are in cycles.
        for start in &keys {
            if in_chain.contains(start) {
                continue;
            }
            let mut members = vec![start.clone()];
            let mut cur = merge_right[start].clone();
            while cur != *start {
                members.push(cur.clone());
                cur = merge_right[&cur].clone();
            }
            let label = fresh_label(&mut used, &format!("cyc_{start}"));
            for m in &members {
                in_chain.insert(m.clone());
                chain_of.insert(m.clone(), (label.clone(), true));
            }
            chain_members.insert(label, members);
        }
    }

    // Sunk saddle labels, one per slit.
    let mut used_labels: HashSet<String> = diagram.saddle_labels().into_iter().collect();
    for labels in chain_members.keys() {
        used_labels.insert(labels.clone());
    }
    let mut sunk_label: HashMap<(usize, usize), String> = HashMap::new();
    for (ci, list) in slits.iter().enumerate() {
        for k in 0..list.len() {
            let label = fresh_label(
                &mut used_labels,
                &format!("f_{}_{k}", diagram.cylinders[ci].id),
            );
            sunk_label.insert((ci, k), label);
        }
    }

    // Heal a bottom word; None when every vertex healed (cycle).
    let heal_bottom = |ci: usize| -> SideWord {
        let c = &diagram.cylinders[ci];
        let m = c.bottom.len();
        let circ = c.circumference();
        let keep: Vec<bool> = (0..m)
            .map(|seg| {
                let z = zero_of[&Corner {
                    cyl: ci,
                    side: Side::Bottom,
                    seg,
                }];
                !sink.contains(&z)
            })
            .collect();
        if keep.iter().all(|k| !k) {
            let entries: Positioned = (0..m)
                .map(|j| {
                    (
                        c.bottom[j].0.clone(),
                        c.bottom[j].1.clone(),
                        c.bottom_position(j).rem_euclid(&circ),
                    )
                })
                .collect();
            return SideWord::Open(entries);
        }
        let mut entries: Positioned = Vec::new();
        // Runs starting at each kept vertex.
        for start in 0..m {
            if !keep[start] {
                continue;
            }
            let mut len = c.bottom[start].1.clone();
            let mut labels = vec![c.bottom[start].0.clone()];
            let mut j = (start + 1) % m;
            while !keep[j] {
                len = len + c.bottom[j].1.clone();
                labels.push(c.bottom[j].0.clone());
                j = (j + 1) % m;
            }
            let label = if labels.len() == 1 {
                labels[0].clone()
            } else {
                let (chain, is_cycle) = chain_of
                    .get(&labels[0])
                    .expect("merged run is a chain")
                    .clone();
                assert!(!is_cycle, "cycle chain inside a kept run");
                assert_eq!(chain_members[&chain], labels, "chain/run mismatch");
                chain
            };
            entries.push((label, len, c.bottom_position(start).rem_euclid(&circ)));
        }
        SideWord::Word(entries)
    };

    let mut protos: Vec<Proto> = Vec::new();
    // Mains (every old cylinder keeps a band and its id).
    for (ci, c) in diagram.cylinders.iter().enumerate() {
        let circ = c.circumference();
        let top = if slits[ci].is_empty() {
            let entries: Positioned = (0..c.top.len())
                .map(|k| {
                    let l = &c.top[k].0;
                    assert!(!chain_of.contains_key(l), "non-slit top label in a chain");
                    (l.clone(), c.top[k].1.clone(), c.top_position(k).rem_euclid(&circ))
                })
                .collect();
            SideWord::Word(entries)
        } else {
            let list = &slits[ci];
            let entries: Positioned = (0..list.len())
                .map(|k| {
                    let p = list[k].0.clone();
                    let next = &list[(k + 1) % list.len()].0;
                    let len = if list.len() == 1 {
                        circ.clone()
                    } else {
                        (next.clone() - p.clone()).rem_euclid(&circ)
                    };
                    let len = if len.is_zero() { circ.clone() } else { len };
                    (sunk_label[&(ci, k)].clone(), len, p)
                })
                .collect();
            SideWord::Word(entries)
        };
        let height = if slits[ci].is_empty() {
            c.height.clone()
        } else {
            c.height.clone() - u.clone()
        };
        protos.push(Proto {
            id: c.id.clone(),
            height,
            circ,
            top,
            bottom: heal_bottom(ci),
        });
    }

    // Fused panel cylinders. A panel arriving at a slit's left bank
    // continues through the slit pair glued at the healed vertex: the left
    // bank of a slit is identified with the right bank of the previous
    // Lower corner in the counterclockwise orbit order.
    let mut panel_continuation: HashMap<Corner, Corner> = HashMap::new();
    for (zi, z) in zeros.iter().enumerate() {
        if !sink.contains(&zi) {
            continue;
        }
        let lowers: Vec<Corner> = z
            .corners
            .iter()
            .copied()
            .filter(|c| c.side == Side::Top)
            .collect();
        let m = lowers.len();
        for (i, &l) in lowers.iter().enumerate() {
            panel_continuation.insert(l, lowers[(i + m - 1) % m]);
        }
    }
    let mut all_slits: Vec<Corner> = Vec::new();
    for (ci, list) in slits.iter().enumerate() {
        for &(_, seg) in list {
            all_slits.push(Corner {
                cyl: ci,
                side: Side::Top,
                seg,
            });
        }
    }
    all_slits.sort();
    let mut visited: HashSet<Corner> = HashSet::new();
    let mut fresh_cyl = {
        let mut used: HashSet<String> =
            diagram.cylinders.iter().map(|c| c.id.clone()).collect();
        let mut counter = 0usize;
        move || loop {
            counter += 1;
            let cand = format!("N{counter}");
            if used.insert(cand.clone()) {
                return cand;
            }
        }
    };
    for &start in &all_slits {
        if visited.contains(&start) {
            continue;
        }
        let mut top_entries: Positioned = Vec::new();
        let mut top_breaks: Vec<bool> = Vec::new(); // per entry: healed junction after it?
        let mut bottom_entries: Positioned = Vec::new();
        let mut offset = FieldScalar::zero();
        let mut cur = start;
        loop {
            visited.insert(cur);
            let ci = cur.cyl;
            let c = &diagram.cylinders[ci];
            let circ = c.circumference();
            let list = &slits[ci];
            let pos = c.top_position(cur.seg).rem_euclid(&circ);
            let k = list
                .iter()
                .position(|(_, seg)| *seg == cur.seg)
                .expect("slit is registered");
            let next_k = (k + 1) % list.len();
            let width = if list.len() == 1 {
                circ.clone()
            } else {
                let w = (list[next_k].0.clone() - pos.clone()).rem_euclid(&circ);
                if w.is_zero() {
                    circ.clone()
                } else {
                    w
                }
            };
            bottom_entries.push((sunk_label[&(ci, k)].clone(), width.clone(), offset.clone()));
            // Panel top segments: from cur.seg up to the segment before the
            // next slit's segment.
            let m = c.top.len();
            let mut seg = cur.seg;
            loop {
                let seg_pos = c.top_position(seg).rem_euclid(&circ);
                let rel = (seg_pos - pos.clone()).rem_euclid(&circ);
                top_entries.push((
                    c.top[seg].0.clone(),
                    c.top[seg].1.clone(),
                    offset.clone() + rel,
                ));
                top_breaks.push(false);
                let nxt = (seg + 1) % m;
                if nxt == list[next_k].1 {
                    break;
                }
                seg = nxt;
            }
            // Junction after the panel's last segment is healed.
            *top_breaks.last_mut().expect("panel has segments") = true;
            offset = offset + width;
            let mu = Corner {
                cyl: ci,
                side: Side::Top,
                seg: list[next_k].1,
            };
            cur = panel_continuation[&mu];
            if cur == start {
                break;
            }
        }
        let circ = offset;
        // Group the top entries into saddles: adjacent entries merge where
        // the junction healed or where the vertex between them sank; with
        // panels the only healed points are the panel junctions, and
        // interior vertices are kept by construction.
        let entry_count = top_entries.len();
        let healed_after = top_breaks;
        let all_healed = healed_after.iter().all(|&b| b);
        let top = if all_healed {
            SideWord::Open(top_entries)
        } else {
            let mut entries: Positioned = Vec::new();
            let start_idx = (0..entry_count)
                .find(|&i| !healed_after[(i + entry_count - 1) % entry_count])
                .expect("some break survives");
            let mut i = start_idx;
            loop {
                let mut labels = vec![top_entries[i].0.clone()];
                let mut len = top_entries[i].1.clone();
                let posn = top_entries[i].2.clone();
                while healed_after[i] {
                    i = (i + 1) % entry_count;
                    labels.push(top_entries[i].0.clone());
                    len = len + top_entries[i].1.clone();
                    if i == start_idx {
                        break;
                    }
                }
                let label = if labels.len() == 1 {
                    labels[0].clone()
                } else {
                    let (chain, is_cycle) =
                        chain_of.get(&labels[0]).expect("merged labels chain").clone();
                    assert!(!is_cycle);
                    assert_eq!(chain_members[&chain], labels, "fused chain mismatch");
                    chain
                };
                entries.push((label, len, posn));
                i = (i + 1) % entry_count;
                if i == start_idx {
                    break;
                }
            }
            SideWord::Word(entries)
        };
        protos.push(Proto {
            id: fresh_cyl(),
            height: u.clone(),
            circ,
            top,
            bottom: SideWord::Word(bottom_entries),
        });
    }

    // Resolve zero-free circles: fuse the band below (open top) with the
    // band above (open bottom) carrying the same labels.
    loop {
        let Some(pi) = protos
            .iter()
            .position(|p| matches!(p.top, SideWord::Open(_)))
        else {
            break;
        };
        let lower = protos.remove(pi);
        let SideWord::Open(lower_top) = lower.top.clone() else {
            unreachable!()
        };
        let labels: HashSet<&String> = lower_top.iter().map(|(l, _, _)| l).collect();
        let qi = protos
            .iter()
            .position(|p| match &p.bottom {
                SideWord::Open(entries) => entries.iter().any(|(l, _, _)| labels.contains(l)),
                _ => false,
            })
            .expect("open top has a matching open bottom");
        let upper = protos.remove(qi);
        let SideWord::Open(upper_bottom) = upper.bottom.clone() else {
            unreachable!()
        };
        // Align coordinates through a shared label.
        let (l0, _, p_low) = &lower_top[0];
        let (_, _, p_up) = upper_bottom
            .iter()
            .find(|(l, _, _)| l == l0)
            .expect("shared label on the open circle");
        let shift = (p_low.clone() - p_up.clone()).rem_euclid(&lower.circ);
        assert_eq!(lower.circ, upper.circ, "fused circles must match");
        let move_side = |side: SideWord| -> SideWord {
            match side {
                SideWord::Word(entries) => SideWord::Word(
                    entries
                        .into_iter()
                        .map(|(l, len, p)| {
                            (l, len, (p + shift.clone()).rem_euclid(&lower.circ))
                        })
                        .collect(),
                ),
                SideWord::Open(entries) => SideWord::Open(
                    entries
                        .into_iter()
                        .map(|(l, len, p)| {
                            (l, len, (p + shift.clone()).rem_euclid(&lower.circ))
                        })
                        .collect(),
                ),
            }
        };
        let merged = Proto {
            // Prefer the original cylinder's id over a synthetic one.
            id: if upper.id.starts_with('N') {
                lower.id.clone()
            } else {
                upper.id.clone()
            },
            height: lower.height.clone() + upper.height.clone(),
            circ: lower.circ.clone(),
            top: move_side(upper.top),
            bottom: lower.bottom,
        };
        protos.push(merged);
    }

    Ok(finalize(protos, diagram.disc))
}

/// Mirror the surface across a horizontal line: tops and bottoms exchange,
/// coordinates shift so the new bottom word is anchored at zero.
pub fn flip_vertical(diagram: &CylinderDiagram) -> CylinderDiagram {
    let mut out = diagram.clone();
    for c in out.cylinders.iter_mut() {
        let circ = c.circumference();
        let new_bottom = c.top.clone();
        let new_top = c.bottom.clone();
        let new_twist = (circ.clone() - c.twist.clone()).rem_euclid(&circ);
        c.bottom = new_bottom;
        c.top = new_top;
        c.twist = new_twist;
    }
    out
}

/// Continue the motion through a collapse by `u`. With the collapse's own
/// direction the sinking zeros keep moving and fresh cylinders open on the
/// far side; with the reversed direction the collapse is undone (at
/// `u = t*` this restores the pre-collapse surface up to isomorphism).
pub fn continue_through_collapse(
    event: &CollapseEvent,
    dir: Direction,
    u: &FieldScalar,
) -> Result<CylinderDiagram, DeformError> {
    if !u.is_positive() {
        return Err(DeformError::SecondCollapse {
            bound: FieldScalar::zero(),
        });
    }
    let y = &event.resulting;
    if dir == event.direction {
        let zeros = y.zeros();
        let zero_of = y.zero_of_corner(&zeros);
        let mut sink: HashSet<usize> = HashSet::new();
        for marker in &event.sink_markers {
            let (tc, tk) = y
                .top_occurrence(marker)
                .ok_or(DeformError::IndexMismatch)?;
            sink.insert(zero_of[&Corner {
                cyl: tc,
                side: Side::Top,
                seg: tk,
            }]);
        }
        move_zeros_down(y, &sink, u)
    } else {
        let flipped = flip_vertical(y);
        let zeros = flipped.zeros();
        let zero_of = flipped.zero_of_corner(&zeros);
        let mut sink: HashSet<usize> = HashSet::new();
        for marker in &event.sink_markers {
            // The marker's vertex is the start of its bottom occurrence in
            // the flipped picture; moving it "down" there moves it up here.
            let (bc, bk) = flipped
                .bottom_occurrence(marker)
                .ok_or(DeformError::IndexMismatch)?;
            // Start of bottom[bk] is the corner (bc, Bottom, bk).
            sink.insert(zero_of[&Corner {
                cyl: bc,
                side: Side::Bottom,
                seg: bk,
            }]);
        }
        // Sinking in the mirror world needs the slits at the flipped TOP
        // corners of the same vertices; the vertex of (bc, Bottom, bk) also
        // has top corners in its orbit, so the orbit index is what matters.
        let moved = move_zeros_down(&flipped, &sink, u)?;
        Ok(flip_vertical(&moved))
    }
}

/// Exact area bookkeeping across a collapse: area lost equals the collapsed
/// cylinders' area at time zero minus what the motion traded, i.e.
/// `area(X) - area(Y) = t* * sum_c dir*q_c*circ_c` over all cylinders.
pub fn collapse_area_delta(
    diagram: &CylinderDiagram,
    eta: &EtaVector,
    dir: Direction,
    t_star: &FieldScalar,
) -> FieldScalar {
    let mut delta = FieldScalar::zero();
    for (c, &q) in diagram.cylinders.iter().zip(&eta.signs) {
        let rate = FieldScalar::from_int(dir.sign() * q as i64);
        delta = delta + t_star.clone() * rate * c.circumference();
    }
    delta
}
