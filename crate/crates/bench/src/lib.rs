//! Shared inputs for the pipeline benchmarks.

use compack::exactalg::{AlgebraicReal, RationalPoly};
use num_rational::BigRational;

/// The root of `p` in (0, 1), assumed unique.
pub fn radius(desc: &[i64]) -> AlgebraicReal {
    let p = RationalPoly::from_ints_desc(desc);
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    AlgebraicReal::roots_in(&p, &zero, &one).remove(0)
}

/// r = √2 − 1, the only radius with large necklaces.
pub fn compact_radius() -> AlgebraicReal {
    radius(&[1, 2, -1])
}

/// r = 3 − 2√2, the only radius with small necklaces.
pub fn small_radius() -> AlgebraicReal {
    radius(&[1, -6, 1])
}
