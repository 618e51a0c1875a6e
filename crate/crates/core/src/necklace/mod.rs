//! Necklaces of beads around a body–head pair: candidate words, exact
//! dihedral-angle formulas, the radius search and the triple search.

pub mod dihedral;
pub mod skew;
pub mod triples;
pub mod word;

pub use dihedral::{AngleContext, AngleStatus, DihedralCosineSet, PairKind};
pub use skew::{
    angle_sum_equation, certify_angle_sum, certify_detailed, eliminated_polynomial,
    run_skew_search, skew_radius_candidates, AngleSumEquation, CandidateRadius, CandidateStatus,
    Certification, SkewSearch, DEFAULT_MAX_BITS, ELIMINATION_ORDER,
};
pub use triples::{search_triples, triple_bounds, TripleBounds, TripleResult};
pub use word::{
    enumerate_skew_candidates, realize_words, words_of_length, Bead, NecklaceWord, TripleCount,
};
