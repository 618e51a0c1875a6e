//! Exact cosines and sines of the dihedral angles around a body–head axis.
//!
//! Every sine is written as a positive rational function of `r` times a
//! product of generators taken with their nonnegative roots, so on the
//! positive sign branch each sine is the nonnegative root `√(1 − cos²)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{
    AlgebraicReal, DyadicInterval, NumberField, NumberFieldElem, OrderedScalar, RadicalElement,
    RadicalTower, RatFunc, RationalPoly, Ring,
};

use super::word::{Bead, TripleCount};

/// Radii of the body and head spheres around whose axis beads are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleContext {
    /// Body of radius 1, head of radius r.
    Skew,
    /// Body and head of radius 1.
    Large,
    /// Body and head of radius r.
    Small,
}

impl fmt::Display for AngleContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleContext::Skew => "skew",
            AngleContext::Large => "large",
            AngleContext::Small => "small",
        })
    }
}

/// Type of a pair of adjacent beads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairKind {
    LL,
    LS,
    SS,
}

impl PairKind {
    pub const ALL: [PairKind; 3] = [PairKind::LL, PairKind::LS, PairKind::SS];

    pub fn of(a: Bead, b: Bead) -> Self {
        match (a, b) {
            (Bead::L, Bead::L) => PairKind::LL,
            (Bead::S, Bead::S) => PairKind::SS,
            _ => PairKind::LS,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Bead radii `(s, t)` for this pair given the small radius.
    pub fn radii(self, r: f64) -> (f64, f64) {
        match self {
            PairKind::LL => (1.0, 1.0),
            PairKind::LS => (1.0, r),
            PairKind::SS => (r, r),
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairKind::LL => "δ(L,L)",
            PairKind::LS => "δ(L,S)",
            PairKind::SS => "δ(S,S)",
        })
    }
}

/// `(cos δ, sin δ)` for the three pair kinds in one context, as elements of
/// a radical tower over the coefficient field `F`.
#[derive(Clone, Debug)]
pub struct DihedralCosineSet<F> {
    pub context: AngleContext,
    pub tower: Arc<RadicalTower<F>>,
    cos: [RadicalElement<F>; 3],
    sin: [RadicalElement<F>; 3],
}

fn p(c: &[i64]) -> RationalPoly {
    RationalPoly::from_ints(c)
}

fn rf(num: RationalPoly, den: RationalPoly) -> RatFunc {
    RatFunc::new(num, den)
}

impl DihedralCosineSet<RatFunc> {
    /// Symbolic set with `r` an indeterminate.
    pub fn symbolic(context: AngleContext) -> Self {
        let one = RatFunc::from_poly(RationalPoly::one());
        let q = |n: i64, d: i64| rf(p(&[n]), p(&[d]));
        let (names, squares): (Vec<&str>, Vec<RatFunc>) = match context {
            AngleContext::Skew => (
                vec!["X0", "X1", "X2", "X3"],
                vec![
                    rf(p(&[0, 1]), p(&[2, 1]).mul(&p(&[1, 2]))),
                    RatFunc::from_poly(p(&[-1, 6, 3])),
                    rf(p(&[2]), p(&[2, 1]).mul(&p(&[1, 2]))),
                    RatFunc::from_poly(p(&[3, 6, -1])),
                ],
            ),
            AngleContext::Large => (
                vec!["G0", "G1", "G2", "G3"],
                vec![
                    RatFunc::from_poly(p(&[0, 6, 3])),
                    q(2, 1),
                    RatFunc::from_poly(p(&[-1, 6, 3])),
                    RatFunc::from_poly(p(&[0, 2])),
                ],
            ),
            AngleContext::Small => (
                vec!["H0", "H1", "H2", "H3"],
                vec![
                    RatFunc::from_poly(p(&[3, 6])),
                    q(2, 1),
                    RatFunc::from_poly(p(&[3, 6, -1])),
                    RatFunc::from_poly(p(&[0, 2])),
                ],
            ),
        };
        let tower = RadicalTower::new(names.into_iter().map(String::from).collect(), squares);
        let s = |c: RatFunc| RadicalElement::scalar(&tower, c);
        let g = |mask: u32, c: RatFunc| RadicalElement::term(&tower, mask, c);
        let (cos, sin) = match context {
            AngleContext::Skew => (
                [
                    s(rf(p(&[-1, 2, 1]), p(&[0, 4, 2]))),
                    g(0b0001, one.clone()),
                    s(rf(p(&[1, 2, -1]), p(&[2, 4]))),
                ],
                [
                    g(0b0010, rf(p(&[1, 1]), p(&[0, 4, 2]))),
                    g(0b0100, RatFunc::from_poly(p(&[1, 1]))),
                    g(0b1000, rf(p(&[1, 1]), p(&[2, 4]))),
                ],
            ),
            AngleContext::Large => (
                [
                    s(q(1, 3)),
                    g(0b0001, rf(p(&[1]), p(&[0, 6, 3]))),
                    s(rf(p(&[2, -1]), p(&[2, 1]))),
                ],
                [
                    g(0b0010, q(2, 3)),
                    g(0b0101, rf(p(&[1]), p(&[0, 6, 3]))),
                    g(0b1000, rf(p(&[2]), p(&[2, 1]))),
                ],
            ),
            AngleContext::Small => (
                [
                    s(rf(p(&[-1, 2]), p(&[1, 2]))),
                    g(0b0001, rf(p(&[0, 1]), p(&[3, 6]))),
                    s(q(1, 3)),
                ],
                [
                    g(0b1000, rf(p(&[2]), p(&[1, 2]))),
                    g(0b0101, rf(p(&[1]), p(&[3, 6]))),
                    g(0b0010, q(2, 3)),
                ],
            ),
        };
        DihedralCosineSet {
            context,
            tower,
            cos,
            sin,
        }
    }

    /// Specializes `r` to a concrete algebraic number.
    pub fn at(&self, r: &AlgebraicReal) -> Result<DihedralCosineSet<NumberFieldElem>> {
        let field = NumberField::new(r.clone());
        let conv = |f: &RatFunc| NumberFieldElem::from_ratfunc(&field, f);
        let pole = || Error::DegenerateInput(format!("dihedral formula has a pole at r = {r}"));
        let tower = self.tower.map(conv).ok_or_else(pole)?;
        let map = |e: &RadicalElement<RatFunc>| e.map(&tower, conv).ok_or_else(pole);
        Ok(DihedralCosineSet {
            context: self.context,
            tower: tower.clone(),
            cos: [map(&self.cos[0])?, map(&self.cos[1])?, map(&self.cos[2])?],
            sin: [map(&self.sin[0])?, map(&self.sin[1])?, map(&self.sin[2])?],
        })
    }
}

impl<F: Ring> DihedralCosineSet<F> {
    pub fn cos(&self, k: PairKind) -> &RadicalElement<F> {
        &self.cos[k.index()]
    }

    pub fn sin(&self, k: PairKind) -> &RadicalElement<F> {
        &self.sin[k.index()]
    }

    /// Generators occurring in the sine of `k` (their squares vanish exactly
    /// when the angle is flat).
    fn sine_generators(&self, k: PairKind) -> u32 {
        self.sin[k.index()].support()
    }

    /// `(cos Σ, sin Σ)` for `Σ = i·δ_LL + j·δ_LS + k·δ_SS`.
    pub fn angle_sum_exp(&self, t: TripleCount) -> (RadicalElement<F>, RadicalElement<F>) {
        let one = self.cos[0].one_like();
        let mut acc = (one.clone(), one.zero_like());
        for (kind, n) in PairKind::ALL.iter().zip(t.as_array()) {
            let base = (self.cos(*kind).clone(), self.sin(*kind).clone());
            for _ in 0..n {
                acc = complex_mul(&acc, &base);
            }
        }
        acc
    }
}

fn complex_mul<R: Ring>(a: &(R, R), b: &(R, R)) -> (R, R) {
    (
        a.0.mul(&b.0).sub(&a.1.mul(&b.1)),
        a.0.mul(&b.1).add(&a.1.mul(&b.0)),
    )
}

/// Whether a dihedral angle exists at a concrete radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleStatus {
    /// `|cos δ| < 1`.
    Defined,
    /// `|cos δ| = 1`: beads collinear with the axis.
    Flat,
    /// `|cos δ| > 1`: the configuration does not exist.
    Undefined,
}

impl DihedralCosineSet<NumberFieldElem> {
    /// The radius this set is specialized to.
    pub fn radius(&self) -> &AlgebraicReal {
        self.tower.square_of(0).field().generator()
    }

    /// Exact classification of `δ_k` via the sign of `sin² δ_k`.
    pub fn angle_status(&self, k: PairKind) -> AngleStatus {
        let gens = self.sine_generators(k);
        let mut status = AngleStatus::Defined;
        for i in 0..self.tower.len() {
            if gens & (1 << i) != 0 {
                match self.tower.square_of(i).sign() {
                    -1 => return AngleStatus::Undefined,
                    0 => status = AngleStatus::Flat,
                    _ => {}
                }
            }
        }
        status
    }

    /// Enclosure of `cos δ_k` at `prec` bits on the geometric branch.
    pub fn cos_enclosure(&self, k: PairKind, prec: u32) -> Result<DyadicInterval> {
        self.cos(k).enclose_at(&vec![true; self.tower.len()], prec)
    }

    /// Enclosure of `δ_k` at `prec` bits.
    pub fn angle_enclosure(&self, k: PairKind, prec: u32) -> Result<DyadicInterval> {
        if self.angle_status(k) == AngleStatus::Undefined {
            return Err(Error::UndefinedAngle(format!(
                "{k} in {} context",
                self.context
            )));
        }
        let c = self.cos_enclosure(k, prec + 8)?;
        c.acos()
            .map(|a| a.with_prec(prec))
            .ok_or_else(|| Error::UndefinedAngle(format!("{k} in {} context", self.context)))
    }
}
