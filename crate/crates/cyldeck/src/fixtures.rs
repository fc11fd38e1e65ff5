//! Shipped surfaces used by the command line tool, the examples and the
//! test suites.
//!
//! * `torus`: unit square, one cylinder glued to itself.
//! * `mnemonic`: the square-tiled three-cylinder genus-two surface with
//!   cylinders (c, h) = ((1, 1/2), (1, 3/2), (2, 1)). The twist of `C1` is
//!   1/2 so that collapsing it splits the merged boundary into two length
//!   1/2 saddles instead of killing a vertical saddle connection.
//! * `quad3`: the same combinatorics over Q(sqrt 2) with circumferences
//!   (1, sqrt2, 1+sqrt2); heights solve the relation-space membership
//!   conditions, so the reciprocal-length relation space equals the modulus
//!   relation space twisted by the rel signs.
//! * `doubled`: every class doubled: two isometric cylinders per class,
//!   boundary words arranged so the hyperelliptic involution survives.
//! * `bc2`: degree-two cover of `quad3` slit along a vertical saddle
//!   connection joining its two zeros; lands in stratum (3,3).

use crate::diagram::{cyl, CylinderDiagram};
use crate::scalar::FieldScalar as FS;

fn r(n: i64, d: i64) -> FS {
    FS::from_ratio(n, d)
}

fn int(n: i64) -> FS {
    FS::from_int(n)
}

/// `n/d * sqrt(2)`
fn rt2(n: i64, d: i64) -> FS {
    FS::sqrt_term(n, d, 2)
}

/// Unit square torus: one cylinder, one saddle, zero twist.
pub fn torus() -> CylinderDiagram {
    CylinderDiagram::new(
        vec![cyl("C1", int(1), int(0), &[("s", int(1))], &[("s", int(1))])],
        1,
    )
}

/// Torus with an arbitrary twist, used by vertical-flow tests.
pub fn torus_with_twist(twist: FS) -> CylinderDiagram {
    CylinderDiagram::new(
        vec![cyl("C1", int(1), twist, &[("s", int(1))], &[("s", int(1))])],
        1,
    )
}

/// The worked three-cylinder example: C1 (c=1, h=1/2), C2 (c=1, h=3/2),
/// C3 (c=2, h=1); C3's top carries the bottoms of C1 and C2, C3's bottom
/// their tops. Square-tiled, genus 2, stratum (1,1).
pub fn mnemonic() -> CylinderDiagram {
    CylinderDiagram::new(
        vec![
            cyl("C1", r(1, 2), r(1, 2), &[("s1p", int(1))], &[("s1", int(1))]),
            cyl("C2", r(3, 2), int(0), &[("s2p", int(1))], &[("s2", int(1))]),
            cyl(
                "C3",
                int(1),
                int(0),
                &[("s1", int(1)), ("s2", int(1))],
                &[("s1p", int(1)), ("s2p", int(1))],
            ),
        ],
        1,
    )
}

/// Quadratic variant of `mnemonic` over Q(sqrt 2).
///
/// Circumferences (1, sqrt2, 1+sqrt2) and rel signs (+1, +1, -1) force the
/// reciprocal-length relations to be spanned by (1, -2, -1); heights are
/// chosen with moduli satisfying exactly that relation:
/// h = (3/2 sqrt2 - 1, 1/2, 1), m = (3/2 sqrt2 - 1, sqrt2/4, sqrt2 - 1).
pub fn quad3() -> CylinderDiagram {
    let h1 = FS::new(
        num_rational::BigRational::from_integer((-1).into()),
        num_rational::BigRational::new(3.into(), 2.into()),
        2,
    );
    let one = int(1);
    let root2 = rt2(1, 1);
    CylinderDiagram::new(
        vec![
            cyl("C1", h1, r(1, 2), &[("t1", one.clone())], &[("s1", one.clone())]),
            cyl("C2", r(1, 2), rt2(1, 2), &[("t2", root2.clone())], &[("s2", root2.clone())]),
            cyl(
                "C3",
                int(1),
                int(0),
                &[("s1", one.clone()), ("s2", root2.clone())],
                &[("t1", one), ("t2", root2)],
            ),
        ],
        2,
    )
}

/// Each sub-equivalence class doubled: A1 = {P, Q} (c=2, h=1/2),
/// A2 = {R, S} (c=2, h=3/2), A3 = {T, U} (c=4, h=1). The bottom words of
/// T and U are ordered so the hyperelliptic involution exists.
pub fn doubled() -> CylinderDiagram {
    let one = int(1);
    CylinderDiagram::new(
        vec![
            cyl(
                "P",
                r(1, 2),
                r(1, 2),
                &[("pA", one.clone()), ("pB", one.clone())],
                &[("p1", one.clone()), ("p2", one.clone())],
            ),
            cyl(
                "Q",
                r(1, 2),
                r(1, 2),
                &[("qA", one.clone()), ("qB", one.clone())],
                &[("q1", one.clone()), ("q2", one.clone())],
            ),
            cyl(
                "R",
                r(3, 2),
                int(0),
                &[("rA", one.clone()), ("rB", one.clone())],
                &[("r1", one.clone()), ("r2", one.clone())],
            ),
            cyl(
                "S",
                r(3, 2),
                int(0),
                &[("sA", one.clone()), ("sB", one.clone())],
                &[("s1", one.clone()), ("s2", one.clone())],
            ),
            cyl(
                "T",
                int(1),
                int(0),
                &[("p1", one.clone()), ("r1", one.clone()), ("q1", one.clone()), ("s1", one.clone())],
                &[("pA", one.clone()), ("sB", one.clone()), ("qA", one.clone()), ("rB", one.clone())],
            ),
            cyl(
                "U",
                int(1),
                int(0),
                &[("p2", one.clone()), ("r2", one.clone()), ("q2", one.clone()), ("s2", one.clone())],
                &[("pB", one.clone()), ("sA", one.clone()), ("qB", one.clone()), ("rA", one)],
            ),
        ],
        1,
    )
}

/// Degree-two cover of `quad3`, slit along the vertical saddle connection
/// at position 0 of C3 (its bottom and top breakpoints there are vertically
/// aligned since the twist is 0). Crossing the slit swaps sheets, so the two
/// copies of C3 merge into one cylinder of doubled circumference while C1
/// and C2 lift to two disjoint copies each.
pub fn bc2() -> CylinderDiagram {
    let base = quad3();
    let h1 = base.cylinder("C1").unwrap().height.clone();
    let h2 = base.cylinder("C2").unwrap().height.clone();
    let one = int(1);
    let root2 = rt2(1, 1);
    CylinderDiagram::new(
        vec![
            cyl("C1a", h1.clone(), r(1, 2), &[("t1a", one.clone())], &[("s1a", one.clone())]),
            cyl("C1b", h1, r(1, 2), &[("t1b", one.clone())], &[("s1b", one.clone())]),
            cyl("C2a", h2.clone(), rt2(1, 2), &[("t2a", root2.clone())], &[("s2a", root2.clone())]),
            cyl("C2b", h2, rt2(1, 2), &[("t2b", root2.clone())], &[("s2b", root2.clone())]),
            cyl(
                "C3x",
                int(1),
                int(0),
                &[
                    ("s1a", one.clone()),
                    ("s2a", root2.clone()),
                    ("s1b", one.clone()),
                    ("s2b", root2.clone()),
                ],
                &[
                    ("t1a", one.clone()),
                    ("t2a", root2.clone()),
                    ("t1b", one),
                    ("t2b", root2),
                ],
            ),
        ],
        2,
    )
}

/// Four cylinders glued in a path; used by graph tests.
pub fn chain4() -> CylinderDiagram {
    let one = int(1);
    CylinderDiagram::new(
        vec![
            cyl("C1", one.clone(), int(0), &[("a", one.clone())], &[("b", one.clone())]),
            cyl(
                "C2",
                one.clone(),
                int(0),
                &[("b", one.clone()), ("c", one.clone())],
                &[("a", one.clone()), ("d", one.clone())],
            ),
            cyl(
                "C3",
                one.clone(),
                int(0),
                &[("d", one.clone()), ("e", one.clone())],
                &[("c", one.clone()), ("f", one.clone())],
            ),
            cyl("C4", one.clone(), int(0), &[("f", one.clone())], &[("e", one)]),
        ],
        1,
    )
}

/// Four cylinders glued in a cycle; the rel signs alternate around it.
pub fn cycle4() -> CylinderDiagram {
    let one = int(1);
    CylinderDiagram::new(
        vec![
            cyl("C1", one.clone(), int(0), &[("a1", one.clone())], &[("a4", one.clone())]),
            cyl("C2", one.clone(), int(0), &[("a2", one.clone())], &[("a1", one.clone())]),
            cyl("C3", one.clone(), int(0), &[("a3", one.clone())], &[("a2", one.clone())]),
            cyl("C4", one.clone(), int(0), &[("a4", one.clone())], &[("a3", one)]),
        ],
        1,
    )
}

/// Two unit cylinders with equal heights; both rel directions collapse all
/// their contracting cylinders simultaneously (arithmetic obstruction).
pub fn equal_heights2() -> CylinderDiagram {
    let one = int(1);
    CylinderDiagram::new(
        vec![
            cyl("C1", one.clone(), int(0), &[("u", one.clone())], &[("v", one.clone())]),
            cyl("C2", one.clone(), int(0), &[("v", one.clone())], &[("u", one)]),
        ],
        1,
    )
}

/// Deliberately non-alternating: the big cylinder's boundary words read
/// (A1, A2, A2).
pub fn non_alternating() -> CylinderDiagram {
    let one = int(1);
    CylinderDiagram::new(
        vec![
            cyl("C1", r(1, 2), r(1, 2), &[("ta", one.clone())], &[("sa", one.clone())]),
            cyl("C2a", r(3, 2), int(0), &[("tb", one.clone())], &[("sb", one.clone())]),
            cyl("C2b", r(3, 2), int(0), &[("tc", one.clone())], &[("sc", one.clone())]),
            cyl(
                "C3",
                int(1),
                int(0),
                &[("sa", one.clone()), ("sb", one.clone()), ("sc", one.clone())],
                &[("ta", one.clone()), ("tb", one.clone()), ("tc", one)],
            ),
        ],
        1,
    )
}

/// All shipped fixtures by name, as the CLI exposes them.
pub fn by_name(name: &str) -> Option<CylinderDiagram> {
    match name {
        "TORUS" => Some(torus()),
        "MNEMONIC" => Some(mnemonic()),
        "QUAD3" => Some(quad3()),
        "DOUBLED" => Some(doubled()),
        "BC2" => Some(bc2()),
        "NONALT" => Some(non_alternating()),
        _ => None,
    }
}

pub const FIXTURE_NAMES: [&str; 6] = ["TORUS", "MNEMONIC", "QUAD3", "DOUBLED", "BC2", "NONALT"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_validate() {
        for name in FIXTURE_NAMES {
            let d = by_name(name).unwrap();
            let report = d.validate();
            assert!(report.is_valid(), "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn quad3_is_genus_two() {
        let (orders, genus) = quad3().stratum();
        assert_eq!(orders, vec![1, 1]);
        assert_eq!(genus, 2);
    }

    #[test]
    fn bc2_is_stratum_three_three_genus_four() {
        // Riemann-Hurwitz oracle for a degree-2 cover of a genus-2 surface
        // branched at its two simple zeros: 2 - 2g = 2(2 - 2*2) - 2, so
        // g = 4, and each zero's angle doubles: order 2*1 + 1 = 3.
        let (orders, genus) = bc2().stratum();
        assert_eq!(orders, vec![3, 3]);
        assert_eq!(genus, 4);
    }

    #[test]
    fn bc2_area_doubles_base() {
        assert_eq!(bc2().area(), quad3().area() * FS::from_int(2));
    }

    #[test]
    fn doubled_area_and_genus() {
        let d = doubled();
        assert_eq!(d.area(), FS::from_int(16));
        let report = d.validate();
        assert!(report.is_valid());
    }
}
