//! Radius candidates from skew necklaces: elimination of the radicals from
//! `cos Σ = 1`, root isolation in `(0, 1)`, and exact certification of
//! `Σ = 2π` on the geometric branch.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{AlgebraicReal, DyadicInterval, RatFunc, RationalPoly, Ring};

use super::dihedral::{AngleContext, AngleStatus, DihedralCosineSet, PairKind};
use super::word::{enumerate_skew_candidates, NecklaceWord, TripleCount};

/// Order in which the generators are eliminated (highest index first).
pub const ELIMINATION_ORDER: [usize; 4] = [3, 2, 1, 0];

/// Default precision cap, in bits, for interval refinement.
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// `Σ (multiplicity · δ_pair) = 2π` for a word in a context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleSumEquation {
    pub context: AngleContext,
    pub counts: TripleCount,
}

impl fmt::Display for AngleSumEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (kind, n) in PairKind::ALL.iter().zip(self.counts.as_array()) {
            if n == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if n > 1 {
                write!(f, "{n}")?;
            }
            write!(f, "{kind}")?;
        }
        write!(f, " = 2π")
    }
}

/// The angle-sum equation of `word`: each adjacent pair contributes its
/// dihedral angle once.
pub fn angle_sum_equation(word: &NecklaceWord, context: AngleContext) -> AngleSumEquation {
    AngleSumEquation {
        context,
        counts: word.triple(),
    }
}

/// Verdict on a candidate radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateStatus {
    /// Root of the eliminated polynomial, not yet examined.
    PreFilter,
    /// The angles sum to exactly 2π.
    Certified,
    /// The cosine equation holds on some branch but the angles do not sum to 2π.
    Rejected,
    /// Some dihedral angle in the word is flat (|cos| = 1) or does not exist.
    Degenerate,
}

impl fmt::Display for CandidateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateStatus::PreFilter => "pre_filter",
            CandidateStatus::Certified => "certified",
            CandidateStatus::Rejected => "rejected",
            CandidateStatus::Degenerate => "degenerate",
        })
    }
}

/// A root in `(0, 1)` of the eliminated polynomial of some word.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateRadius {
    pub value: AlgebraicReal,
    pub witness_word: NecklaceWord,
    pub status: CandidateStatus,
    /// `k` with `Σ = 2kπ`, when the cosine equation holds exactly.
    pub winding: Option<i64>,
    /// Working precision at which the verdict was reached.
    pub precision_bits: Option<u32>,
}

/// Detailed outcome of [`certify_angle_sum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub status: CandidateStatus,
    pub winding: Option<i64>,
    pub precision_bits: Option<u32>,
}

/// Eliminates every generator from `cos Σ − 1` for the word, returning the
/// numerator (primitive) of the resulting rational function of `r`.
pub fn eliminated_polynomial(word: &NecklaceWord) -> Result<RationalPoly> {
    let set = DihedralCosineSet::symbolic(AngleContext::Skew);
    let (c, _) = set.angle_sum_exp(word.triple());
    let mut e = c.sub(&c.one_like());
    if e.is_zero() {
        return Err(Error::EliminationDegenerate(format!(
            "{word}: cos Σ − 1 is identically zero"
        )));
    }
    for i in ELIMINATION_ORDER {
        e = e.eliminate(i);
        if e.is_zero() {
            return Err(Error::EliminationDegenerate(format!(
                "{word}: resultant vanishes after eliminating {}",
                set.tower.name(i)
            )));
        }
    }
    let f: RatFunc = e.as_scalar().expect("all generators eliminated");
    Ok(f.num().primitive())
}

/// Pre-filter candidates of a word: distinct roots in `(0, 1)` of its
/// eliminated polynomial, by descending value.
pub fn skew_radius_candidates(word: &NecklaceWord) -> Result<Vec<CandidateRadius>> {
    let poly = eliminated_polynomial(word)?;
    let mut roots = AlgebraicReal::roots_in(&poly, &BigRational::zero(), &BigRational::one());
    roots.reverse();
    Ok(roots
        .into_iter()
        .map(|value| CandidateRadius {
            value,
            witness_word: word.clone(),
            status: CandidateStatus::PreFilter,
            winding: None,
            precision_bits: None,
        })
        .collect())
}

/// Exact verdict on `Σ = 2π` for `word` in `context` at radius `r`.
///
/// The cosine of the sum is compared with 1 exactly in the radical tower
/// over `ℚ(r)`; if equal, `Σ = 2kπ` and an interval enclosure of `Σ / 2π`
/// pins down `k`, doubling precision up to `max_bits`.
pub fn certify_detailed(
    word: &NecklaceWord,
    context: AngleContext,
    r: &AlgebraicReal,
    max_bits: u32,
) -> Result<Certification> {
    let set = DihedralCosineSet::symbolic(context).at(r)?;
    certify_counts(&set, word.triple(), max_bits)
}

pub(crate) fn certify_counts(
    set: &DihedralCosineSet<crate::exactalg::NumberFieldElem>,
    t: TripleCount,
    max_bits: u32,
) -> Result<Certification> {
    let used: Vec<PairKind> = PairKind::ALL
        .iter()
        .zip(t.as_array())
        .filter(|(_, n)| *n > 0)
        .map(|(k, _)| *k)
        .collect();
    if used
        .iter()
        .any(|k| set.angle_status(*k) != AngleStatus::Defined)
    {
        return Ok(Certification {
            status: CandidateStatus::Degenerate,
            winding: None,
            precision_bits: None,
        });
    }
    let branch = vec![true; set.tower.len()];
    let (c, s) = set.angle_sum_exp(t);
    let cos_is_one = c.sub(&c.one_like()).sign(&branch)? == 0;
    if !cos_is_one {
        return Ok(Certification {
            status: CandidateStatus::Rejected,
            winding: None,
            precision_bits: None,
        });
    }
    debug_assert_eq!(s.sign(&branch)?, 0);
    let (k, bits) = winding_number(set, t, max_bits)?;
    let status = if k == 1 {
        CandidateStatus::Certified
    } else {
        CandidateStatus::Rejected
    };
    Ok(Certification {
        status,
        winding: Some(k),
        precision_bits: Some(bits),
    })
}

/// Enclosure of `Σ = i·δ_LL + j·δ_LS + k·δ_SS` at `prec` bits.
pub(crate) fn sum_enclosure(
    set: &DihedralCosineSet<crate::exactalg::NumberFieldElem>,
    t: TripleCount,
    prec: u32,
) -> Result<DyadicInterval> {
    let mut acc = DyadicInterval::zero(prec);
    for (kind, n) in PairKind::ALL.iter().zip(t.as_array()) {
        if n > 0 {
            acc = acc.add(&set.angle_enclosure(*kind, prec)?.mul_int(n as i64));
        }
    }
    Ok(acc)
}

/// The integer `k` with `Σ = 2kπ`, assuming that identity is already known.
fn winding_number(
    set: &DihedralCosineSet<crate::exactalg::NumberFieldElem>,
    t: TripleCount,
    max_bits: u32,
) -> Result<(i64, u32)> {
    let mut prec = 64u32.min(max_bits);
    loop {
        let sum = sum_enclosure(set, t, prec)?;
        let two_pi = DyadicInterval::pi(prec).mul_int(2);
        if let Some(q) = sum.div(&two_pi) {
            let width_ok = q.width() < BigRational::new(BigInt::one(), BigInt::from(2));
            if let (true, Some(k)) = (width_ok, q.unique_integer()) {
                return Ok((i64::try_from(k).unwrap_or(i64::MAX), prec));
            }
        }
        if prec >= max_bits {
            return Err(Error::PrecisionExhausted {
                stage: "angle-sum winding number".into(),
                bits: prec,
            });
        }
        prec = (prec * 2).min(max_bits);
    }
}

/// Whether the angles of `word` sum to exactly 2π at `r`.
pub fn certify_angle_sum(
    word: &NecklaceWord,
    context: AngleContext,
    r: &AlgebraicReal,
) -> Result<bool> {
    Ok(certify_detailed(word, context, r, DEFAULT_MAX_BITS)?.status == CandidateStatus::Certified)
}

/// Outcome of the full skew search over all candidate words.
#[derive(Clone, Debug, Serialize)]
pub struct SkewSearch {
    /// Every examined `(word, root)` pair, by descending root.
    pub candidates: Vec<CandidateRadius>,
}

impl SkewSearch {
    /// Distinct pre-filter values over all words.
    pub fn distinct_values(&self) -> Vec<&AlgebraicReal> {
        let mut out: Vec<&AlgebraicReal> = Vec::new();
        for c in &self.candidates {
            if !out.iter().any(|v| v.cmp_value(&c.value).is_eq()) {
                out.push(&c.value);
            }
        }
        out
    }

    pub fn certified(&self) -> Vec<&CandidateRadius> {
        self.candidates
            .iter()
            .filter(|c| c.status == CandidateStatus::Certified)
            .collect()
    }

    /// Certified radii, descending, without repetition.
    pub fn certified_values(&self) -> Vec<AlgebraicReal> {
        let mut out: Vec<AlgebraicReal> = Vec::new();
        for c in self.certified() {
            if !out.iter().any(|v| v.cmp_value(&c.value).is_eq()) {
                out.push(c.value.clone());
            }
        }
        out
    }
}

/// Runs elimination and certification for every candidate word.
pub fn run_skew_search(max_bits: u32) -> Result<SkewSearch> {
    let words = enumerate_skew_candidates();
    let per_word: Vec<Result<Vec<CandidateRadius>>> = words
        .par_iter()
        .map(|w| {
            let mut cands = skew_radius_candidates(w)?;
            for c in cands.iter_mut() {
                let cert = certify_detailed(w, AngleContext::Skew, &c.value, max_bits)?;
                c.status = cert.status;
                c.winding = cert.winding;
                c.precision_bits = cert.precision_bits;
            }
            Ok(cands)
        })
        .collect();
    let mut candidates = Vec::new();
    for r in per_word {
        candidates.extend(r?);
    }
    // descending value, ties by word
    candidates.sort_by(|a, b| {
        b.value
            .cmp_value(&a.value)
            .then_with(|| a.witness_word.cmp(&b.witness_word))
    });
    Ok(SkewSearch { candidates })
}
