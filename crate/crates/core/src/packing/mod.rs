//! Close-packings, hole filling and compactness certificates.

mod compact;
mod export;
mod model;
mod stacking;
mod structure;

pub use compact::{
    density, solid_angle_at_small, verify_compact, CompactReport, CompactVerdict, PackingMetrics,
    SolidAngle, Tetrahedron,
};
pub use export::{metrics_json, packing_to_xyz, tiling_to_off};
pub use model::{
    build_close_packing, contact_graph, fcc_conventional, fill_octahedral_holes, layer_spacing,
    radius_of, small_radius, ContactGraph, Neighbor, PackingModel, Sphere, Translate, RANGE2,
};
pub use stacking::{all_stackings, stacking_classes, Layer, StackingSequence};
pub use structure::{classify_shells, recover_stacking, reference_shells};
