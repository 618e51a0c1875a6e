//! Search for triples `(i, j, k)` with `i·δ_LL + j·δ_LS + k·δ_SS = 2π`.

use serde::Serialize;

use crate::error::Result;
use crate::exactalg::{AlgebraicReal, DyadicInterval, NumberFieldElem};

use super::dihedral::{AngleContext, AngleStatus, DihedralCosineSet, PairKind};
use super::skew::{certify_counts, sum_enclosure, CandidateStatus};
use super::word::{realize_words, NecklaceWord, TripleCount};

const SCREEN_BITS: u32 = 96;

/// Upper bounds on the pair counts, from lower enclosures of the angles.
/// An angle that is flat or undefined at `r` gets bound 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleBounds {
    pub i_max: u32,
    pub j_max: u32,
    pub k_max: u32,
}

impl TripleBounds {
    pub fn as_array(&self) -> [u32; 3] {
        [self.i_max, self.j_max, self.k_max]
    }
}

/// A triple surviving the interval screen, with its exact verdict.
#[derive(Clone, Debug, Serialize)]
pub struct TripleResult {
    pub triple: TripleCount,
    pub certified: bool,
    pub winding: Option<i64>,
    /// Canonical words realizing the triple (empty when none exists).
    pub words: Vec<NecklaceWord>,
}

fn bound_for(set: &DihedralCosineSet<NumberFieldElem>, kind: PairKind) -> Result<u32> {
    if set.angle_status(kind) != AngleStatus::Defined {
        return Ok(0);
    }
    let angle = set.angle_enclosure(kind, SCREEN_BITS)?;
    let two_pi = DyadicInterval::pi(SCREEN_BITS).mul_int(2);
    let lower = DyadicInterval::from_rational(&angle.lo(), SCREEN_BITS);
    let ratio = two_pi.div(&lower).expect("defined angles are positive");
    Ok(u32::try_from(ratio.floor_hi()).unwrap_or(u32::MAX))
}

fn bounds_of(set: &DihedralCosineSet<NumberFieldElem>) -> Result<TripleBounds> {
    Ok(TripleBounds {
        i_max: bound_for(set, PairKind::LL)?,
        j_max: bound_for(set, PairKind::LS)?,
        k_max: bound_for(set, PairKind::SS)?,
    })
}

/// Bounds `floor(2π / δ)` for each pair kind at radius `r`.
pub fn triple_bounds(context: AngleContext, r: &AlgebraicReal) -> Result<TripleBounds> {
    bounds_of(&DihedralCosineSet::symbolic(context).at(r)?)
}

/// All nonzero triples within the bounds whose angle sum may equal 2π by
/// interval screening, each decided exactly.
pub fn search_triples(
    context: AngleContext,
    r: &AlgebraicReal,
    max_bits: u32,
) -> Result<Vec<TripleResult>> {
    let set = DihedralCosineSet::symbolic(context).at(r)?;
    let b = bounds_of(&set)?;
    let two_pi = DyadicInterval::pi(SCREEN_BITS).mul_int(2);
    let mut out = Vec::new();
    for i in 0..=b.i_max {
        for j in 0..=b.j_max {
            for k in 0..=b.k_max {
                let t = TripleCount::new(i, j, k);
                if t.total() == 0 {
                    continue;
                }
                let sum = sum_enclosure(&set, t, SCREEN_BITS)?;
                if !sum.overlaps(&two_pi) {
                    continue;
                }
                let cert = certify_counts(&set, t, max_bits)?;
                let certified = cert.status == CandidateStatus::Certified;
                out.push(TripleResult {
                    triple: t,
                    certified,
                    winding: cert.winding,
                    words: if certified {
                        realize_words(t)
                    } else {
                        Vec::new()
                    },
                });
            }
        }
    }
    Ok(out)
}
