//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines even on success. Every tolerance is zero: all comparisons are
//! exact field arithmetic.

use cyldeck::canonical::isomorphic;
use cyldeck::deform::{
    apply_twist, build_eta, d_eigenvalues, partition_subequivalence, standard_position,
    Direction, TwistVector,
};
use cyldeck::diagram::{cyl, CylinderDiagram, CylinderSpec};
use cyldeck::fixtures;
use cyldeck::flow::{
    check_alternation, classify_saddle_lengths, first_return_oracle, vertical_decomposition,
    vertical_subequivalence_classes, FlowError,
};
use cyldeck::linalg::{rank, RationalVec};
use cyldeck::relations::{relation_space, verify_facts2, RelationSource};
use cyldeck::scalar::FieldScalar as FS;
use cyldeck::surgery::{continue_through_collapse, move_until_collapse};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

fn criterion(n: usize, description: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("criterion {n}: PASS - {description}"),
        Err(e) => {
            println!("criterion {n}: FAIL - {description}");
            std::panic::resume_unwind(e);
        }
    }
}

/// Deterministic generator state (SplitMix64).
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            p.swap(i, j);
        }
        p
    }
}

fn transitive(sigma: &[usize], tau: &[usize]) -> bool {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(s) = stack.pop() {
        for t in [sigma[s], tau[s]] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// A random valid diagram built from a transitive square-tiled pair of
/// permutations, rescaled by a random positive scalar with random heights
/// and twists.
fn random_diagram(rng: &mut Rng) -> CylinderDiagram {
    let n = 2 + rng.below(6) as usize;
    let (sigma, tau) = loop {
        let sigma = rng.permutation(n);
        let tau = rng.permutation(n);
        if transitive(&sigma, &tau) {
            break (sigma, tau);
        }
    };
    let tau_inv = inverse(&tau);
    // Rows = cycles of sigma.
    let mut row_of = vec![usize::MAX; n];
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if row_of[start] != usize::MAX {
            continue;
        }
        let mut cycle = vec![start];
        row_of[start] = rows.len();
        let mut s = sigma[start];
        while s != start {
            row_of[s] = rows.len();
            cycle.push(s);
            s = sigma[s];
        }
        rows.push(cycle);
    }
    // Saddle runs along a boundary circle: `next_up[i]` is the square above
    // position i; a breakpoint sits before position i when the square above
    // does not continue the run.
    let runs = |cycle: &[usize], above: &dyn Fn(usize) -> usize| -> Vec<(usize, usize)> {
        let len = cycle.len();
        let breaks: Vec<bool> = (0..len)
            .map(|i| {
                let prev = cycle[(i + len - 1) % len];
                above(cycle[i]) != sigma[above(prev)]
            })
            .collect();
        if breaks.iter().all(|b| !b) {
            return vec![(0, len)];
        }
        let mut out = Vec::new();
        let first = breaks.iter().position(|&b| b).unwrap();
        let mut i = first;
        loop {
            let mut w = 1;
            let mut j = (i + 1) % len;
            while !breaks[j] {
                w += 1;
                j = (j + 1) % len;
            }
            out.push((i, w));
            i = j;
            if i == first {
                break;
            }
        }
        out
    };
    // Random positive scalar: rational, or a + b sqrt2 checked positive.
    let scalar = |rng: &mut Rng| -> FS {
        loop {
            let a = FS::from_ratio(rng.below(6) as i64 + 1, rng.below(4) as i64 + 1);
            if rng.below(3) == 0 {
                let b = FS::sqrt_term(rng.below(4) as i64 + 1, rng.below(3) as i64 + 1, 2);
                let v = a + b;
                if v.is_positive() {
                    return v;
                }
            } else {
                return a;
            }
        }
    };
    let unit = scalar(rng);
    let mut cylinders = Vec::new();
    for cycle in &rows {
        let tau_ref = &tau;
        let tau_inv_ref = &tau_inv;
        let top_runs = runs(cycle, &|s| tau_ref[s]);
        let bottom_runs = runs(cycle, &|s| tau_inv_ref[s]);
        // Label by the minimal square index on the upper side of the run.
        let label_top = |start: usize, w: usize| {
            let m = (0..w).map(|k| tau_ref[cycle[(start + k) % cycle.len()]]).min().unwrap();
            format!("e{m}")
        };
        let label_bottom = |start: usize, w: usize| {
            let m = (0..w).map(|k| cycle[(start + k) % cycle.len()]).min().unwrap();
            format!("e{m}")
        };
        let top: Vec<(String, FS)> = top_runs
            .iter()
            .map(|&(s, w)| (label_top(s, w), unit.clone() * FS::from_int(w as i64)))
            .collect();
        let bottom: Vec<(String, FS)> = bottom_runs
            .iter()
            .map(|&(s, w)| (label_bottom(s, w), unit.clone() * FS::from_int(w as i64)))
            .collect();
        let circ = unit.clone() * FS::from_int(cycle.len() as i64);
        let twist_num = rng.below(7) as i64;
        let twist = (circ.clone() * FS::from_ratio(twist_num, 7)).rem_euclid(&circ);
        cylinders.push(CylinderSpec {
            id: format!("R{}", row_of[cycle[0]]),
            height: scalar(rng),
            twist,
            top,
            bottom,
        });
    }
    CylinderDiagram::new(cylinders, 2)
}

#[test]
fn criterion_1_deformation_pipeline() {
    criterion(1, "three-cylinder deformation pipeline reproduced exactly", || {
        let d = fixtures::mnemonic();
        let eta = build_eta(&d).unwrap();
        // Expected sign pattern (-1, -1, +1) on (C1, C2, C3), up to one
        // global flip.
        let signs: Vec<i8> = ["C1", "C2", "C3"]
            .iter()
            .map(|id| eta.sign_of(id).unwrap())
            .collect();
        assert!(signs == vec![-1, -1, 1] || signs == vec![1, 1, -1]);
        // First collapse at exactly 1/2 with the two-cylinder picture.
        let event = move_until_collapse(&d, &eta, Direction::Minus).unwrap();
        assert_eq!(event.time, FS::from_ratio(1, 2));
        assert_eq!(event.collapsed, vec!["C1"]);
        let y = &event.resulting;
        assert_eq!(y.cylinders.len(), 2);
        assert_eq!(y.cylinder("C3").unwrap().height, FS::from_ratio(3, 2));
        assert_eq!(y.cylinder("C2").unwrap().height, FS::from_int(1));
        // Continue by 1/2: a three-cylinder surface whose new rel signs
        // read (+1, -1, -1) on (new, C3, C2) up to a global flip.
        let xp = continue_through_collapse(&event, Direction::Minus, &FS::from_ratio(1, 2))
            .unwrap();
        assert_eq!(xp.cylinders.len(), 3);
        let eta2 = build_eta(&xp).unwrap();
        let new_id = xp
            .cylinders
            .iter()
            .map(|c| c.id.clone())
            .find(|id| id != "C2" && id != "C3")
            .unwrap();
        let triple: Vec<i8> = [new_id.as_str(), "C3", "C2"]
            .iter()
            .map(|id| eta2.sign_of(id).unwrap())
            .collect();
        assert!(triple == vec![1, -1, -1] || triple == vec![-1, 1, 1]);
        // D-eigenvalues: the surviving contracting cylinder keeps +1, the
        // other flips.
        let dd = d_eigenvalues(
            &eta,
            &eta2,
            &["C2".to_string(), "C3".to_string()],
            "C2",
        )
        .unwrap();
        assert_eq!(dd, vec![("C2".to_string(), 1), ("C3".to_string(), -1)]);
    });
}

#[test]
fn criterion_2_conservation_suite() {
    criterion(2, "area and stratum conservation on 200 seeded diagrams", || {
        let mut rng = Rng(0xC0FFEE);
        for case in 0..200 {
            let d = random_diagram(&mut rng);
            let report = d.validate();
            assert!(report.is_valid(), "case {case}: {:?}", report.violations);
            let n = d.cylinders.len();
            let ids: Vec<String> = d.cylinders.iter().map(|c| c.id.clone()).collect();
            // Real twist: area exactly invariant.
            let re: Vec<FS> = (0..n)
                .map(|_| FS::from_ratio((rng.below(9) as i64) - 4, rng.below(3) as i64 + 1))
                .collect();
            let v = TwistVector {
                cylinder_ids: ids.clone(),
                re,
                im: vec![FS::zero(); n],
            };
            let t = FS::from_ratio(rng.below(5) as i64 + 1, rng.below(4) as i64 + 1);
            let moved = apply_twist(&d, &v, &t).unwrap();
            assert_eq!(moved.area(), d.area(), "case {case}: real twist area");
            assert!(moved.validate().is_valid());
            // Complex twist: area changes by exactly t * sum c_i im_i.
            let im: Vec<FS> = (0..n)
                .map(|_| FS::from_int((rng.below(3) as i64) - 1))
                .collect();
            let w = TwistVector {
                cylinder_ids: ids.clone(),
                re: vec![FS::zero(); n],
                im: im.clone(),
            };
            // Stay strictly before any collapse.
            let mut bound: Option<FS> = None;
            for (c, imj) in d.cylinders.iter().zip(&im) {
                if imj.is_negative() {
                    let b = c.height.checked_div(&imj.abs()).unwrap();
                    bound = Some(match bound {
                        None => b,
                        Some(m) => FS::min_of(&m, &b),
                    });
                }
            }
            let t2 = bound
                .map(|b| b * FS::from_ratio(1, 3))
                .unwrap_or_else(|| FS::from_ratio(1, 3));
            if t2.is_positive() {
                let moved = apply_twist(&d, &w, &t2).unwrap();
                let mut expected = d.area();
                for (c, imj) in d.cylinders.iter().zip(&im) {
                    expected = expected + t2.clone() * imj.clone() * c.circumference();
                }
                assert_eq!(moved.area(), expected, "case {case}: complex twist area law");
            }
            // Stratum and genus invariant under shear, Dehn twist, relabel.
            let before = d.stratum();
            let sheared = d.shear(&FS::from_ratio(rng.below(5) as i64 + 1, 3));
            assert_eq!(sheared.stratum(), before, "case {case}: shear");
            let mut dehn = d.clone();
            let j = rng.below(n as u64) as usize;
            let circ = dehn.cylinders[j].circumference();
            dehn.cylinders[j].twist =
                (dehn.cylinders[j].twist.clone() + circ.clone()).rem_euclid(&circ);
            assert_eq!(dehn.stratum(), before, "case {case}: Dehn twist");
            let mut saddle_map = HashMap::new();
            for (i, l) in d.saddle_labels().into_iter().enumerate() {
                saddle_map.insert(l, format!("w{i}"));
            }
            let relabeled = d.relabeled(&saddle_map, &HashMap::new());
            assert_eq!(relabeled.stratum(), before, "case {case}: relabel");
        }
    });
}

/// Independent kernel oracle: enumerate pivot-column subsets, solve each
/// triangular system by Cramer-style elimination, and span-compare.
fn bruteforce_kernel(rows: &[RationalVec], n: usize) -> Vec<RationalVec> {
    let r = rank(rows);
    let mut vectors: Vec<RationalVec> = Vec::new();
    // All pivot subsets of size r.
    let subsets = |n: usize, r: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == r {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, r, cur, out);
                cur.pop();
            }
        }
        go(0, n, r, &mut cur, &mut out);
        out
    };
    for pivots in subsets(n, r) {
        // Solve rows restricted to the pivot columns for each free column.
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        // Build square system: pick r independent rows.
        let mut system: Vec<RationalVec> = Vec::new();
        for row in rows {
            let mut cand = system.clone();
            cand.push(row.clone());
            if rank(&cand) > system.len() {
                system.push(row.clone());
            }
            if system.len() == r {
                break;
            }
        }
        let sub = |row: &RationalVec, cols: &[usize]| -> RationalVec {
            cols.iter().map(|&c| row[c].clone()).collect()
        };
        let pivot_mat: Vec<RationalVec> = system.iter().map(|row| sub(row, &pivots)).collect();
        if rank(&pivot_mat) < r {
            continue;
        }
        for &f in &free {
            // Solve pivot_mat * x = -column_f by Gaussian elimination on an
            // augmented copy (independent of the library's kernel path).
            let mut aug: Vec<RationalVec> = system
                .iter()
                .map(|row| {
                    let mut v = sub(row, &pivots);
                    v.push(-row[f].clone());
                    v
                })
                .collect();
            for col in 0..r {
                let p = (col..r).find(|&i| !aug[i][col].is_zero()).unwrap();
                aug.swap(col, p);
                let inv = aug[col][col].recip();
                for x in aug[col].iter_mut() {
                    *x = &*x * &inv;
                }
                for i in 0..r {
                    if i != col && !aug[i][col].is_zero() {
                        let factor = aug[i][col].clone();
                        for c in 0..=r {
                            let t = &aug[col][c] * &factor;
                            aug[i][c] = &aug[i][c] - t;
                        }
                    }
                }
            }
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = aug[i][r].clone();
            }
            vectors.push(v);
        }
        break; // one valid pivot set spans the kernel
    }
    if r == 0 {
        for f in 0..n {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            vectors.push(v);
        }
    }
    vectors
}

fn same_span(a: &[RationalVec], b: &[RationalVec]) -> bool {
    if a.is_empty() && b.is_empty() {
        return true;
    }
    let ra = rank(a);
    let rb = rank(b);
    let mut both: Vec<RationalVec> = a.to_vec();
    both.extend(b.to_vec());
    ra == rb && rank(&both) == ra
}

#[test]
fn criterion_3_oracle_equivalence() {
    criterion(3, "kernel and vertical-flow oracles agree", || {
        // Relation spaces versus the pivot-enumeration oracle: 500 cases.
        let mut rng = Rng(0x5EED);
        let mut done = 0;
        while done < 500 {
            let n = 2 + rng.below(5) as usize; // up to 6
            let values: Vec<FS> = (0..n)
                .map(|_| FS::from_ratio(rng.below(13) as i64 - 6, rng.below(5) as i64 + 1))
                .collect();
            if values.iter().all(|v| v.is_zero()) {
                continue;
            }
            done += 1;
            let space = relation_space(&values, RelationSource::Other).unwrap();
            let rows: Vec<RationalVec> = vec![
                values.iter().map(|v| v.rational_part().clone()).collect(),
                values.iter().map(|v| v.radical_part().clone()).collect(),
            ];
            let oracle = bruteforce_kernel(&rows, n);
            assert!(
                same_span(&space.basis, &oracle),
                "case {done}: spans differ for {values:?}"
            );
            // The library's canonical basis is the reduced echelon form of
            // the oracle's span.
            let mut oracle_rref = oracle.clone();
            cyldeck::linalg::rref(&mut oracle_rref);
            assert_eq!(space.basis, oracle_rref, "canonical forms agree");
        }
        // Vertical decomposition versus the first-return simulation on
        // two-cylinder diagrams with entries from the stated set: 50 cases.
        let lens = [
            FS::from_int(1),
            FS::from_ratio(1, 2),
            FS::from_ratio(1, 3),
            FS::sqrt_term(1, 1, 2),
            FS::from_int(1) + FS::sqrt_term(1, 1, 2),
        ];
        let twists = [
            FS::zero(),
            FS::from_ratio(1, 2),
            FS::from_ratio(1, 3),
            FS::sqrt_term(1, 2, 2),
        ];
        let mut cases = 0;
        'outer: for a in &lens {
            for b in &lens {
                for h1 in &lens[..3] {
                    for t2 in &twists {
                        if cases >= 50 {
                            break 'outer;
                        }
                        cases += 1;
                        // C1: top [u], bottom [v]; C2: top [v, w], bottom
                        // [u, w]: circumferences a and a + b.
                        let c2 = a.clone() + b.clone();
                        let d = CylinderDiagram::new(
                            vec![
                                cyl(
                                    "C1",
                                    h1.clone(),
                                    FS::zero(),
                                    &[("u", a.clone())],
                                    &[("v", a.clone())],
                                ),
                                cyl(
                                    "C2",
                                    FS::from_ratio(1, 2),
                                    t2.rem_euclid(&c2),
                                    &[("v", a.clone()), ("w", b.clone())],
                                    &[("u", a.clone()), ("w", b.clone())],
                                ),
                            ],
                            2,
                        );
                        assert!(d.validate().is_valid(), "case {cases} invalid");
                        let budget = 3000;
                        match vertical_decomposition(&d, budget) {
                            Ok(dec) => {
                                let total =
                                    dec.cylinders.iter().fold(FS::zero(), |s, v| s + v.area());
                                assert_eq!(total, d.area(), "case {cases}: area");
                                // The oracle's closed orbit through each
                                // cylinder's interior matches its
                                // circumference.
                                for v in &dec.cylinders {
                                    let (ci, ref left) = v.arcs[0];
                                    let sample = left.clone()
                                        + v.height.clone() * FS::from_ratio(1, 2);
                                    let lengths = first_return_oracle(
                                        &d,
                                        &[(ci, sample)],
                                        budget * 2,
                                    )
                                    .expect("oracle within budget");
                                    assert_eq!(
                                        lengths,
                                        vec![v.circumference.clone()],
                                        "case {cases}: return length"
                                    );
                                }
                            }
                            Err(FlowError::NotPeriodicWithinBudget { .. }) => {
                                // The oracle must also fail to close.
                                let sample = (0usize, FS::from_ratio(1, 7) * a.clone());
                                let res = first_return_oracle(&d, &[sample], budget);
                                assert!(
                                    res.is_none() || res == Some(vec![]),
                                    "case {cases}: oracle disagrees on periodicity"
                                );
                            }
                            Err(e) => panic!("case {cases}: {e}"),
                        }
                    }
                }
            }
        }
        assert_eq!(cases, 50);
    });
}

#[test]
fn criterion_4_twisted_relation_identity() {
    criterion(4, "twisted-relation identity on the quadratic fixture", || {
        let d = fixtures::quad3();
        let eta = build_eta(&d).unwrap();
        let report = verify_facts2(&d, &eta).unwrap();
        assert!(report.dim_ok, "(i) dimension");
        assert!(report.membership_moduli, "(ii) moduli membership");
        assert!(report.membership_signed_reciprocals, "(ii) signed reciprocals");
        assert!(report.twisted_match, "(iii) twisted identity");
        for i in 0..eta.signs.len() {
            let mut bad = eta.clone();
            bad.signs[i] = -bad.signs[i];
            let broken = verify_facts2(&d, &bad).unwrap();
            assert!(!broken.twisted_match, "flip {i} must break (iii)");
        }
    });
}

#[test]
fn criterion_5_roundtrip_collapse() {
    criterion(5, "collapse and reversed continuation restore the surface", || {
        for name in ["MNEMONIC", "QUAD3", "DOUBLED"] {
            let d = fixtures::by_name(name).unwrap();
            let eta = build_eta(&d).unwrap();
            let event = move_until_collapse(&d, &eta, Direction::Minus).unwrap();
            let back =
                continue_through_collapse(&event, Direction::Plus, &event.time).unwrap();
            assert!(back.validate().is_valid(), "{name}");
            assert!(isomorphic(&back, &d), "{name} round trip");
        }
    });
}

#[test]
fn criterion_6_standard_position() {
    criterion(6, "standard position certifies the vertical cylinder", || {
        for name in ["QUAD3", "DOUBLED"] {
            let d = fixtures::by_name(name).unwrap();
            let eta = build_eta(&d).unwrap();
            let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
            let classes = classify_saddle_lengths(&d, &p).unwrap();
            let saddle = classes.ell_saddles[0].clone();
            let sp = standard_position(&d, &eta, Direction::Minus, &saddle).unwrap();
            // Crossing profile exactly (1, 1, 0, ...).
            assert_eq!(sp.witness.total_crossings(), 2, "{name}");
            let crossed: Vec<&str> = sp
                .witness
                .crossing_profile
                .iter()
                .filter(|(_, n)| *n > 0)
                .map(|(id, _)| id.as_str())
                .collect();
            assert_eq!(crossed.len(), 2, "{name}");
            // Circumference is the sum of the two bordering class heights
            // (the contracting class of the saddle plus the expanding one).
            let h_con = if p.a1.iter().any(|c| crossed.contains(&c.as_str())) {
                p.class_heights[0].clone().unwrap()
            } else {
                p.class_heights[1].clone().unwrap()
            };
            let h_exp = p.class_heights[2].clone().unwrap();
            assert_eq!(
                sp.witness.circumference,
                h_con + h_exp,
                "{name}: circumference h1 + h3"
            );
            // Two vertical sub-equivalence classes after alignment.
            let dec = vertical_decomposition(&sp.diagram, 100_000).unwrap();
            let classes = vertical_subequivalence_classes(&dec);
            assert_eq!(classes.len(), 2, "{name}: vertical classes");
        }
    });
}

#[test]
fn criterion_7_cover_verification() {
    criterion(7, "degree-two slit cover verified exactly", || {
        let x = fixtures::bc2();
        let y = fixtures::quad3();
        assert_eq!(x.stratum(), (vec![3, 3], 4));
        assert_eq!(x.area(), y.area() * FS::from_int(2));
        let assignment = cyldeck::cover::derive_assignment(&x, &y, |id| match id {
            "C1a" | "C1b" => "C1".to_string(),
            "C2a" | "C2b" => "C2".to_string(),
            _ => "C3".to_string(),
        })
        .unwrap();
        let witness = cyldeck::cover::verify_cover(&x, &y, &assignment).unwrap();
        assert_eq!(witness.degree, 2);
        let mut orders = witness.branch_orders.clone();
        orders.sort();
        assert_eq!(orders, vec![(3, 1, 2), (3, 1, 2)]);
        // Corrupting one tile count is caught.
        let mut bad = assignment.clone();
        bad.get_mut("C3x").unwrap().count = 1;
        assert!(matches!(
            cyldeck::cover::verify_cover(&x, &y, &bad),
            Err(cyldeck::cover::CoverError::TilingMismatch { .. })
        ));
    });
}

#[test]
fn criterion_8_alternation_and_classification() {
    criterion(8, "alternation holds and lengths classify as stated", || {
        for name in ["MNEMONIC", "QUAD3", "DOUBLED"] {
            let d = fixtures::by_name(name).unwrap();
            let eta = build_eta(&d).unwrap();
            let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
            assert!(check_alternation(&d, &p).ok(), "{name} alternates");
        }
        let bad = fixtures::non_alternating();
        let eta = build_eta(&bad).unwrap();
        let p = partition_subequivalence(&bad, &eta, Direction::Minus).unwrap();
        assert!(!check_alternation(&bad, &p).ok(), "negative fixture fails");
        // All-rational fixture carries the arithmetic-degeneracy diagnosis.
        let d = fixtures::mnemonic();
        let eta = build_eta(&d).unwrap();
        let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
        let classes = classify_saddle_lengths(&d, &p).unwrap();
        assert!(classes.arithmetic_degenerate);
        // Quadratic fixture splits cleanly: (ell, x) = (sqrt2, 1).
        let d = fixtures::quad3();
        let eta = build_eta(&d).unwrap();
        let p = partition_subequivalence(&d, &eta, Direction::Minus).unwrap();
        let classes = classify_saddle_lengths(&d, &p).unwrap();
        assert!(!classes.arithmetic_degenerate);
        assert_eq!(classes.ell, FS::sqrt_term(1, 1, 2));
        assert_eq!(classes.x, FS::from_int(1));
    });
}

/// Supporting check: the generator itself must emit valid, connected
/// diagrams so the conservation suite exercises real surfaces.
#[test]
fn generator_sanity() {
    let mut rng = Rng(42);
    let mut max_cyls = 0;
    for _ in 0..50 {
        let d = random_diagram(&mut rng);
        let report = d.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        max_cyls = max_cyls.max(d.cylinders.len());
        // Euler characteristic bookkeeping holds on every sample.
        let (orders, genus) = d.stratum();
        let total: usize = orders.iter().sum();
        assert_eq!(total, 2 * genus - 2);
    }
    assert!(max_cyls >= 2, "generator produces multi-cylinder diagrams");
}
