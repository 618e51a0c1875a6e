//! Exact algebra: rational polynomials, factorization, real-root isolation,
//! resultants, algebraic number fields, radical towers and outward-rounded
//! interval arithmetic.

pub mod factor;
pub mod field;
pub mod interval;
pub mod poly;
pub mod radical;
pub mod resultant;
pub mod ring;
pub mod roots;

pub use factor::{factor, irreducible_factors};
pub use field::{NumberField, NumberFieldElem, OrderedScalar, RatFunc};
pub use interval::DyadicInterval;
pub use poly::RationalPoly;
pub use radical::{positive_branch, radical_mul, RadicalElement, RadicalTower, SignBranch};
pub use resultant::{berkowitz_det, resultant, resultant_generic, BiPoly, Var};
pub use ring::Ring;
pub use roots::{isolate_real_roots, sturm_sequence, AlgebraicReal};
