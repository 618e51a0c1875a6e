//! Certified classification of compact packings of 3-space by spheres of
//! radius 1 and r.
//!
//! The pipeline runs in four stages, each exact:
//!
//! - [`necklace`] finds the radii admitting a skew necklace, then the large
//!   and small necklaces at those radii;
//! - [`shell`] completes every labeled triangulation around a large sphere
//!   and embeds it in space;
//! - [`packing`] builds the filled Barlow stackings and certifies that they
//!   tile space by tetrahedra;
//! - [`exactalg`] and [`geom`] supply the arithmetic underneath.
//!
//! ```
//! use compack::packing::{build_close_packing, fill_octahedral_holes, verify_compact};
//!
//! let hcp = build_close_packing(&"AB".parse().unwrap());
//! let filled = fill_octahedral_holes(&hcp).unwrap();
//! assert!(verify_compact(&filled).is_compact());
//! assert!(!verify_compact(&hcp).is_compact());
//! ```

pub mod error;
pub mod exactalg;
pub mod geom;
pub mod necklace;
pub mod packing;
pub mod shell;

pub use error::{Error, Result};
