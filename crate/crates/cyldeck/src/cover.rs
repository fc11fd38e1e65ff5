//! Branched translation covers of three-cylinder genus-two surfaces:
//! quotient construction from the sub-equivalence data and exact
//! verification of a claimed covering.

use crate::deform::SubequivalencePartition;
use crate::diagram::{cyl, Corner, CylinderDiagram, Side};
use crate::flow::SaddleLengthClasses;
use crate::scalar::FieldScalar;
use std::collections::HashMap;
use std::fmt;

/// One cylinder's tiling data: which quotient cylinder it covers, how many
/// tiles wide, and the horizontal phase of the covering map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSpec {
    pub quotient_id: String,
    pub count: usize,
    pub offset: FieldScalar,
}

pub type TileAssignment = HashMap<String, TileSpec>;

/// Verified covering data.
#[derive(Clone, Debug)]
pub struct CoverWitness {
    pub quotient: CylinderDiagram,
    pub assignment: TileAssignment,
    pub degree: usize,
    /// Per covered zero: (order upstairs, order downstairs, local degree).
    pub branch_orders: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverError {
    PreconditionFailed { check: String },
    TilingMismatch { cylinder: String, reason: String },
    BoundaryIncompatible { saddle: String, reason: String },
    FiberCountVaries { detail: String },
}

impl fmt::Display for CoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverError::PreconditionFailed { check } => write!(f, "precondition failed: {check}"),
            CoverError::TilingMismatch { cylinder, reason } => {
                write!(f, "tiling mismatch at {cylinder}: {reason}")
            }
            CoverError::BoundaryIncompatible { saddle, reason } => {
                write!(f, "boundary incompatible at {saddle}: {reason}")
            }
            CoverError::FiberCountVaries { detail } => write!(f, "fiber count varies: {detail}"),
        }
    }
}

impl std::error::Error for CoverError {}

/// The quotient template: three cylinders with circumferences
/// `(ell, x, ell + x)`, glued so the long cylinder's boundary words
/// alternate between the two short ones. The result is a genus-two
/// surface with two simple zeros.
#[derive(Clone, Debug)]
pub struct QuotientBuild {
    pub quotient: CylinderDiagram,
    /// Residual shear on the first class recorded as data: the twist of the
    /// short class-one cylinder.
    pub alpha: FieldScalar,
    pub assignment: TileAssignment,
}

/// Build the candidate quotient from the class data. Preconditions: the
/// boundary words of expanding cylinders alternate between the two
/// contracting classes, the saddle lengths classify cleanly, every
/// cylinder's circumference is the appropriate tile multiple, and each
/// class shares one height. Twists are inherited from class
/// representatives and checked across members through `verify_cover`.
pub fn build_quotient(
    diagram: &CylinderDiagram,
    partition: &SubequivalencePartition,
    classes: &SaddleLengthClasses,
) -> Result<QuotientBuild, CoverError> {
    let alternation = crate::flow::check_alternation(diagram, partition);
    if !alternation.ok() {
        return Err(CoverError::PreconditionFailed {
            check: "alternation".into(),
        });
    }
    if !partition.verified() {
        return Err(CoverError::PreconditionFailed {
            check: "sub-equivalence verification".into(),
        });
    }
    let heights: [&FieldScalar; 3] = [
        partition.class_heights[0].as_ref().ok_or(CoverError::PreconditionFailed {
            check: "class A1 empty".into(),
        })?,
        partition.class_heights[1].as_ref().ok_or(CoverError::PreconditionFailed {
            check: "class A2 empty".into(),
        })?,
        partition.class_heights[2].as_ref().ok_or(CoverError::PreconditionFailed {
            check: "class A3 empty".into(),
        })?,
    ];
    // Tile lengths per class: the long saddles border A1 exactly when
    // `ell_borders_a1`.
    let (len1, len2) = if classes.ell_borders_a1 {
        (classes.ell.clone(), classes.x.clone())
    } else {
        (classes.x.clone(), classes.ell.clone())
    };
    let len3 = len1.clone() + len2.clone();
    // Twists inherited from the first member of each class.
    let rep_twist = |ids: &[String], tile: &FieldScalar| -> FieldScalar {
        let c = diagram.cylinder(&ids[0]).expect("class member exists");
        c.twist.rem_euclid(tile)
    };
    let t1 = rep_twist(&partition.a1, &len1);
    let t2 = rep_twist(&partition.a2, &len2);
    let t3 = rep_twist(&partition.a3, &len3);
    let quotient = CylinderDiagram::new(
        vec![
            cyl("Q1", heights[0].clone(), t1.clone(), &[("e1t", len1.clone())], &[("e1b", len1.clone())]),
            cyl("Q2", heights[1].clone(), t2, &[("e2t", len2.clone())], &[("e2b", len2.clone())]),
            cyl(
                "Q3",
                heights[2].clone(),
                t3,
                &[("e1b", len1.clone()), ("e2b", len2.clone())],
                &[("e1t", len1.clone()), ("e2t", len2)],
            ),
        ],
        diagram.disc,
    );
    let report = quotient.validate();
    if !report.is_valid() {
        return Err(CoverError::PreconditionFailed {
            check: format!("quotient invalid: {:?}", report.violations),
        });
    }
    if report.zero_orders != vec![1, 1] {
        return Err(CoverError::PreconditionFailed {
            check: format!("quotient stratum {:?}, want (1,1)", report.zero_orders),
        });
    }
    let assignment = derive_assignment(diagram, &quotient, |id| {
        match partition.class_of(id) {
            Some(1) => "Q1".to_string(),
            Some(2) => "Q2".to_string(),
            _ => "Q3".to_string(),
        }
    })?;
    Ok(QuotientBuild {
        quotient,
        alpha: t1,
        assignment,
    })
}

/// Find per-cylinder offsets making the covering map match boundary words,
/// given the target quotient cylinder of each cylinder.
pub fn derive_assignment(
    x: &CylinderDiagram,
    y: &CylinderDiagram,
    target: impl Fn(&str) -> String,
) -> Result<TileAssignment, CoverError> {
    let mut assignment = TileAssignment::new();
    for c in &x.cylinders {
        let qid = target(&c.id);
        let q = y.cylinder(&qid).ok_or_else(|| CoverError::TilingMismatch {
            cylinder: c.id.clone(),
            reason: format!("no quotient cylinder {qid}"),
        })?;
        let cq = q.circumference();
        let cc = c.circumference();
        let ratio = cc.rational_ratio_to(&cq).map_err(|e| CoverError::TilingMismatch {
            cylinder: c.id.clone(),
            reason: e.to_string(),
        })?;
        let count = match ratio.and_then(|r| {
            if r.is_integer() && r.numer() > &num_bigint::BigInt::from(0) {
                Some(r.numer().clone())
            } else {
                None
            }
        }) {
            Some(k) => k.to_string().parse::<usize>().map_err(|_| CoverError::TilingMismatch {
                cylinder: c.id.clone(),
                reason: "tile count out of range".into(),
            })?,
            None => {
                return Err(CoverError::TilingMismatch {
                    cylinder: c.id.clone(),
                    reason: "circumference is not an integer multiple of the tile".into(),
                })
            }
        };
        // Candidate offsets: align the first top entry with each top entry
        // of the quotient.
        let p0 = c.top_position(0);
        let mut found = None;
        for k in 0..q.top.len() {
            let offset = (q.top_position(k) - p0.clone()).rem_euclid(&cq);
            let spec = TileSpec {
                quotient_id: qid.clone(),
                count,
                offset,
            };
            if check_cylinder_tiling(x, y, &c.id, &spec).is_ok() {
                found = Some(spec);
                break;
            }
        }
        let spec = found.ok_or_else(|| CoverError::TilingMismatch {
            cylinder: c.id.clone(),
            reason: "no horizontal phase matches the boundary words".into(),
        })?;
        assignment.insert(c.id.clone(), spec);
    }
    Ok(assignment)
}

/// Saddle images induced by one cylinder's tiling: each boundary entry must
/// land exactly on a quotient entry of the same length.
fn check_cylinder_tiling(
    x: &CylinderDiagram,
    y: &CylinderDiagram,
    cid: &str,
    spec: &TileSpec,
) -> Result<Vec<(String, String)>, CoverError> {
    let c = x.cylinder(cid).expect("cylinder exists");
    let q = y
        .cylinder(&spec.quotient_id)
        .ok_or_else(|| CoverError::TilingMismatch {
            cylinder: cid.to_string(),
            reason: format!("no quotient cylinder {}", spec.quotient_id),
        })?;
    let cq = q.circumference();
    let expected = cq.clone() * FieldScalar::from_int(spec.count as i64);
    if c.circumference() != expected {
        return Err(CoverError::TilingMismatch {
            cylinder: cid.to_string(),
            reason: format!(
                "circumference {} is not {} tiles of {}",
                c.circumference(),
                spec.count,
                cq
            ),
        });
    }
    if c.height != q.height {
        return Err(CoverError::TilingMismatch {
            cylinder: cid.to_string(),
            reason: format!("height {} differs from tile height {}", c.height, q.height),
        });
    }
    let mut images = Vec::new();
    for (side, word_len, pos_of, q_word_len, q_pos_of) in [
        (
            Side::Top,
            c.top.len(),
            Box::new(|k: usize| c.top_position(k)) as Box<dyn Fn(usize) -> FieldScalar>,
            q.top.len(),
            Box::new(|k: usize| q.top_position(k)) as Box<dyn Fn(usize) -> FieldScalar>,
        ),
        (
            Side::Bottom,
            c.bottom.len(),
            Box::new(|k: usize| c.bottom_position(k)),
            q.bottom.len(),
            Box::new(|k: usize| q.bottom_position(k)),
        ),
    ] {
        for k in 0..word_len {
            let (label, len) = match side {
                Side::Top => &c.top[k],
                Side::Bottom => &c.bottom[k],
            };
            let image_pos = (pos_of(k) + spec.offset.clone()).rem_euclid(&cq);
            let mut matched = None;
            for j in 0..q_word_len {
                let qp = q_pos_of(j).rem_euclid(&cq);
                if qp == image_pos {
                    let (qlabel, qlen) = match side {
                        Side::Top => &q.top[j],
                        Side::Bottom => &q.bottom[j],
                    };
                    if qlen != len {
                        return Err(CoverError::BoundaryIncompatible {
                            saddle: label.clone(),
                            reason: format!("length {len} maps onto {qlabel} of length {qlen}"),
                        });
                    }
                    matched = Some(qlabel.clone());
                    break;
                }
            }
            match matched {
                Some(qlabel) => images.push((label.clone(), qlabel)),
                None => {
                    return Err(CoverError::BoundaryIncompatible {
                        saddle: label.clone(),
                        reason: "endpoint does not land on a quotient breakpoint".into(),
                    })
                }
            }
        }
    }
    Ok(images)
}

/// Verify a claimed covering: per-cylinder tilings, globally consistent
/// saddle images, constant fiber count, branching only at singularities,
/// and the Euler-characteristic bookkeeping. Emits the witness.
pub fn verify_cover(
    x: &CylinderDiagram,
    y: &CylinderDiagram,
    assignment: &TileAssignment,
) -> Result<CoverWitness, CoverError> {
    // Every cylinder assigned.
    for c in &x.cylinders {
        if !assignment.contains_key(&c.id) {
            return Err(CoverError::TilingMismatch {
                cylinder: c.id.clone(),
                reason: "missing from the assignment".into(),
            });
        }
    }
    // Local tilings plus a globally consistent saddle map.
    let mut saddle_image: HashMap<String, String> = HashMap::new();
    for c in &x.cylinders {
        let spec = &assignment[&c.id];
        let images = check_cylinder_tiling(x, y, &c.id, spec)?;
        for (s, qs) in images {
            if let Some(prev) = saddle_image.get(&s) {
                if *prev != qs {
                    return Err(CoverError::BoundaryIncompatible {
                        saddle: s.clone(),
                        reason: format!("maps to {prev} from one side and {qs} from the other"),
                    });
                }
            } else {
                saddle_image.insert(s, qs);
            }
        }
    }
    // Constant fiber count over every quotient cylinder.
    let mut fiber: HashMap<&str, usize> = HashMap::new();
    for c in &x.cylinders {
        let spec = &assignment[&c.id];
        *fiber.entry(spec.quotient_id.as_str()).or_insert(0) += spec.count;
    }
    let mut degree: Option<usize> = None;
    for q in &y.cylinders {
        let d = fiber.get(q.id.as_str()).copied().unwrap_or(0);
        match degree {
            None => degree = Some(d),
            Some(prev) if prev != d => {
                return Err(CoverError::FiberCountVaries {
                    detail: format!(
                        "{} covered {} times but {} covered {}",
                        y.cylinders[0].id, prev, q.id, d
                    ),
                });
            }
            _ => {}
        }
    }
    let degree = degree.ok_or(CoverError::FiberCountVaries {
        detail: "empty quotient".into(),
    })?;
    if x.area() != y.area() * FieldScalar::from_int(degree as i64) {
        return Err(CoverError::FiberCountVaries {
            detail: "area does not equal degree times quotient area".into(),
        });
    }
    // Zero images and local degrees.
    let x_zeros = x.zeros();
    let y_zeros = y.zeros();
    let y_corner_zero = y.zero_of_corner(&y_zeros);
    // Map an X corner to the Y corner its vertex covers.
    let corner_image = |corner: &Corner| -> Result<Corner, CoverError> {
        let c = &x.cylinders[corner.cyl];
        let spec = &assignment[&c.id];
        let q = y.cylinder(&spec.quotient_id).expect("checked above");
        let qi = y.cylinder_index(&q.id).expect("exists");
        let cq = q.circumference();
        let pos = match corner.side {
            Side::Top => c.top_position(corner.seg),
            Side::Bottom => c.bottom_position(corner.seg),
        };
        let image = (pos + spec.offset.clone()).rem_euclid(&cq);
        let count = match corner.side {
            Side::Top => q.top.len(),
            Side::Bottom => q.bottom.len(),
        };
        for j in 0..count {
            let qp = match corner.side {
                Side::Top => q.top_position(j),
                Side::Bottom => q.bottom_position(j),
            }
            .rem_euclid(&cq);
            if qp == image {
                return Ok(Corner {
                    cyl: qi,
                    side: corner.side,
                    seg: j,
                });
            }
        }
        Err(CoverError::BoundaryIncompatible {
            saddle: format!("corner of {}", c.id),
            reason: "vertex does not cover a quotient vertex".into(),
        })
    };
    let mut branch_orders = Vec::new();
    let mut fiber_angle: HashMap<usize, usize> = HashMap::new();
    for z in &x_zeros {
        let mut image_zero: Option<usize> = None;
        for corner in &z.corners {
            let img = corner_image(corner)?;
            let zi = y_corner_zero[&img];
            match image_zero {
                None => image_zero = Some(zi),
                Some(prev) if prev != zi => {
                    return Err(CoverError::BoundaryIncompatible {
                        saddle: "zero".into(),
                        reason: "one vertex covers two quotient vertices".into(),
                    })
                }
                _ => {}
            }
        }
        let zi = image_zero.expect("zero has corners");
        let up = z.order + 1;
        let down = y_zeros[zi].order + 1;
        if up % down != 0 {
            return Err(CoverError::FiberCountVaries {
                detail: format!("cone angle {up} pi over angle {down} pi is not integral"),
            });
        }
        let local = up / down;
        if local > 1 && y_zeros[zi].order == 0 {
            return Err(CoverError::FiberCountVaries {
                detail: "branching over a regular point".into(),
            });
        }
        *fiber_angle.entry(zi).or_insert(0) += local;
        branch_orders.push((z.order, y_zeros[zi].order, local));
    }
    for (zi, z) in y_zeros.iter().enumerate() {
        let total = fiber_angle.get(&zi).copied().unwrap_or(0);
        if total != degree {
            return Err(CoverError::FiberCountVaries {
                detail: format!(
                    "fiber over zero of order {} has total local degree {total}, want {degree}",
                    z.order
                ),
            });
        }
    }
    // Riemann-Hurwitz bookkeeping, exactly.
    let (_, gx) = x.stratum();
    let (_, gy) = y.stratum();
    let chi_x = 2i64 - 2 * gx as i64;
    let chi_y = 2i64 - 2 * gy as i64;
    let ramification: i64 = branch_orders.iter().map(|(_, _, m)| *m as i64 - 1).sum();
    if chi_x != degree as i64 * chi_y - ramification {
        return Err(CoverError::FiberCountVaries {
            detail: format!(
                "Euler characteristic mismatch: {chi_x} vs {} * {chi_y} - {ramification}",
                degree
            ),
        });
    }
    Ok(CoverWitness {
        quotient: y.clone(),
        assignment: assignment.clone(),
        degree,
        branch_orders,
    })
}
