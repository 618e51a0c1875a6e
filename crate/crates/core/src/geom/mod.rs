//! Exact coordinates in Q(√2, √3), where every shell and close-packing
//! coordinate of interest lives.

mod field;
mod vec3;

pub use field::Q23;
pub use vec3::Vec3;
