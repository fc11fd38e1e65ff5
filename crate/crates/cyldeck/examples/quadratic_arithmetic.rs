//! Exact arithmetic in Q(sqrt d): construction, the four operations,
//! decidable signs and comparisons, and rational-ratio detection.
//!
//! ```bash
//! cargo run -p cyldeck --example quadratic_arithmetic
//! ```

use cyldeck::scalar::FieldScalar;

fn main() {
    // 1 + sqrt2 and its conjugate multiply to the norm, exactly.
    let x = FieldScalar::from_int(1) + FieldScalar::sqrt_term(1, 1, 2);
    let y = FieldScalar::from_int(1) - FieldScalar::sqrt_term(1, 1, 2);
    println!("(1+sqrt2)(1-sqrt2) = {}", &x * &y);

    // Signs come from case analysis plus one exact squaring; there is no
    // epsilon anywhere. 3 - 2 sqrt2 is positive because 9 > 8.
    let z = FieldScalar::from_int(3) - FieldScalar::sqrt_term(2, 1, 2);
    println!("sign(3 - 2 sqrt2) = {}", z.signum());
    println!("sign(1 - sqrt2)   = {}", (FieldScalar::one() - FieldScalar::sqrt_term(1, 1, 2)).signum());

    // Division is exact through the conjugate.
    let q = x.checked_div(&z).unwrap();
    println!("(1+sqrt2)/(3-2 sqrt2) = {q}");
    println!("check: back = {}", q * z);

    // Rational-ratio detection decides sub-equivalence questions: is
    // 3 - sqrt5 a rational multiple of 6 - 2 sqrt5?
    let a = FieldScalar::from_int(3) - FieldScalar::sqrt_term(1, 1, 5);
    let b = FieldScalar::from_int(6) - FieldScalar::sqrt_term(2, 1, 5);
    println!("(3 - sqrt5) = q (6 - 2 sqrt5)? q = {:?}", a.rational_ratio_to(&b).unwrap());
    let one = FieldScalar::one();
    let r2 = FieldScalar::sqrt_term(1, 1, 2);
    println!("1 = q sqrt2? {:?}", one.rational_ratio_to(&r2).unwrap());

    // Total order consistent with the real embedding.
    println!("1 + sqrt2 vs 5/2: {:?}", x.cmp_real(&FieldScalar::from_ratio(5, 2)));
}
