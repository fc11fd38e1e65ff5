//! Exact linear algebra over Q: reduced row echelon form and kernels.
//!
//! Kernels are returned in a canonical basis (the RREF of the standard
//! null-space basis), so results are bit-stable across runs and platforms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A vector with rational entries.
pub type RationalVec = Vec<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rvec(entries: &[(i64, i64)]) -> RationalVec {
    entries.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn rvec_int(entries: &[i64]) -> RationalVec {
    entries.iter().map(|&n| rat(n, 1)).collect()
}

/// In-place reduced row echelon form. Returns the pivot column of each
/// surviving row; zero rows are dropped.
pub fn rref(rows: &mut Vec<RationalVec>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row_at = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (row_at..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row_at, pivot_row);
        let inv = rows[row_at][col].recip();
        for x in rows[row_at].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows.len() {
            if r != row_at && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let t = &rows[row_at][c] * &factor;
                    rows[r][c] = &rows[r][c] - t;
                }
            }
        }
        pivots.push(col);
        row_at += 1;
        if row_at == rows.len() {
            break;
        }
    }
    rows.truncate(row_at);
    pivots
}

/// Canonical basis of `{ v : row . v = 0 for every row }` in Q^n.
/// Empty input spans nothing, so the kernel is all of Q^n.
pub fn rational_kernel(rows: &[RationalVec], ncols: usize) -> Vec<RationalVec> {
    for r in rows {
        assert_eq!(r.len(), ncols, "row length mismatch");
    }
    let mut mat: Vec<RationalVec> = rows.to_vec();
    let pivots = rref(&mut mat);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis: Vec<RationalVec> = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (ri, &p) in pivots.iter().enumerate() {
            v[p] = -mat[ri][f].clone();
        }
        basis.push(v);
    }
    // Canonicalize the basis itself.
    rref(&mut basis);
    basis
}

/// Exact dot product.
pub fn dot(u: &[BigRational], v: &[BigRational]) -> BigRational {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b).fold(BigRational::zero(), |s, t| s + t)
}

/// Rank of a rational matrix.
pub fn rank(rows: &[RationalVec]) -> usize {
    let mut mat = rows.to_vec();
    rref(&mut mat);
    mat.len()
}

/// Clears denominators, divides out content and normalizes the first nonzero
/// entry positive: the integer print form used by relation reports.
pub fn integer_form(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut content = BigInt::zero();
    for x in &out {
        content = content.gcd(x);
    }
    if !content.is_zero() && !content.is_one() {
        for x in out.iter_mut() {
            *x = &*x / &content;
        }
    }
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    out
}
