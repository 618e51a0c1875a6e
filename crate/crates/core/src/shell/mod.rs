//! Neighborhoods of a large sphere at r = √2 − 1.

mod complex;
mod embed;
mod export;

pub use complex::{
    complete_shells, search_shells, shell_word_sets, ShellComplex, ShellSearch, ShellStatus,
    DEFAULT_NODE_BUDGET, KISSING_BOUND,
};
pub use embed::{
    embed_shell, radius_in_field, reference_polyhedron, rings_per_vertex, shell_ring_property,
    EmbeddedShell, Ring, ShapeClass,
};
pub use export::{shell_to_json, shell_to_off};
