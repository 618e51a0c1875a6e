//! Multilinear radical towers `F[X₀, …, X_{n−1}] / (Xᵢ² − sᵢ)` over a
//! coefficient field `F`.
//!
//! Elements are maps from monomials (bitmasks over the generators) to
//! coefficients. Over an ordered coefficient field with a chosen sign for
//! every generator, each element has a definite real value whose sign is
//! decided exactly by recursive norm comparison, with no floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::OrderedScalar;
use super::interval::DyadicInterval;
use super::resultant::resultant_generic;
use super::ring::Ring;
use crate::error::{Error, Result};

/// Generator names and their squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalTower<F> {
    names: Vec<String>,
    squares: Vec<F>,
}

impl<F: Ring> RadicalTower<F> {
    pub fn new(names: Vec<String>, squares: Vec<F>) -> Arc<Self> {
        assert_eq!(names.len(), squares.len());
        assert!(squares.len() <= 16, "too many generators");
        Arc::new(RadicalTower { names, squares })
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn square_of(&self, i: usize) -> &F {
        &self.squares[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Same generators with coefficients mapped into another field.
    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Arc<RadicalTower<G>>> {
        let squares = self.squares.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(RadicalTower::new(self.names.clone(), squares))
    }
}

/// Sign branch for each generator: `true` for the nonnegative root.
pub type SignBranch = Vec<bool>;

/// The branch with every generator taken as the nonnegative square root.
pub fn positive_branch(n: usize) -> SignBranch {
    vec![true; n]
}

/// Element of a [`RadicalTower`].
#[derive(Clone, PartialEq, Eq)]
pub struct RadicalElement<F> {
    tower: Arc<RadicalTower<F>>,
    coeffs: BTreeMap<u32, F>,
}

impl<F: Ring> RadicalElement<F> {
    pub fn zero(tower: &Arc<RadicalTower<F>>) -> Self {
        RadicalElement {
            tower: tower.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(tower: &Arc<RadicalTower<F>>, c: F) -> Self {
        Self::term(tower, 0, c)
    }

    /// `c · Π_{i ∈ mask} Xᵢ`.
    pub fn term(tower: &Arc<RadicalTower<F>>, mask: u32, c: F) -> Self {
        let mut e = Self::zero(tower);
        if !c.is_zero() {
            e.coeffs.insert(mask, c);
        }
        e
    }

    /// The generator `Xᵢ` with coefficient `c`.
    pub fn generator(tower: &Arc<RadicalTower<F>>, i: usize, c: F) -> Self {
        Self::term(tower, 1 << i, c)
    }

    pub fn tower(&self) -> &Arc<RadicalTower<F>> {
        &self.tower
    }

    /// Nonzero `(monomial mask, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &F)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> Option<&F> {
        self.coeffs.get(&mask)
    }

    /// Union of the monomial masks in use.
    pub fn support(&self) -> u32 {
        self.coeffs.keys().fold(0, |a, m| a | m)
    }

    pub fn as_scalar(&self) -> Option<F> {
        match self.coeffs.len() {
            0 => Some(self.zero_scalar()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    fn zero_scalar(&self) -> F {
        // every tower has at least one square or a coefficient to clone from
        self.coeffs
            .values()
            .next()
            .or_else(|| self.tower.squares.first())
            .expect("empty tower with empty element")
            .zero_like()
    }

    fn insert(&mut self, mask: u32, c: F) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mask) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.coeffs.remove(&mask);
                }
            }
            None => {
                self.coeffs.insert(mask, c);
            }
        }
    }

    fn same_tower(&self, rhs: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &rhs.tower)
    }

    /// Product of the squares of the generators in `mask`.
    fn square_product(&self, mask: u32) -> Option<F> {
        let mut acc: Option<F> = None;
        for i in 0..self.tower.len() {
            if mask & (1 << i) != 0 {
                let s = &self.tower.squares[i];
                acc = Some(match acc {
                    None => s.clone(),
                    Some(a) => a.mul(s),
                });
            }
        }
        acc
    }

    /// Multiplication that reports operands from different towers.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if !self.same_tower(rhs) && self.tower != rhs.tower {
            return Err(Error::MismatchedBase);
        }
        let mut out = Self::zero(&self.tower);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &rhs.coeffs {
                let mut c = c1.mul(c2);
                if let Some(s) = self.square_product(m1 & m2) {
                    c = c.mul(&s);
                }
                out.insert(m1 ^ m2, c);
            }
        }
        Ok(out)
    }

    /// Splits `self = a + b·Xᵢ` with `a`, `b` free of `Xᵢ`.
    pub fn split(&self, i: usize) -> (Self, Self) {
        let bit = 1u32 << i;
        let mut a = Self::zero(&self.tower);
        let mut b = Self::zero(&self.tower);
        for (m, c) in &self.coeffs {
            if m & bit == 0 {
                a.coeffs.insert(*m, c.clone());
            } else {
                b.coeffs.insert(m & !bit, c.clone());
            }
        }
        (a, b)
    }

    /// Conjugate under `Xᵢ ↦ −Xᵢ`.
    pub fn conjugate(&self, i: usize) -> Self {
        let bit = 1u32 << i;
        let mut out = self.clone();
        for (m, c) in out.coeffs.iter_mut() {
            if m & bit != 0 {
                *c = c.neg();
            }
        }
        out
    }

    /// Eliminates `Xᵢ`: the resultant of `a + b·X` and `X² − sᵢ` in `X`,
    /// i.e. `a² − sᵢ·b²`, the product of `self` with its `Xᵢ`-conjugate.
    pub fn eliminate(&self, i: usize) -> Self {
        let (a, b) = self.split(i);
        if b.is_zero() {
            return a;
        }
        let s = Self::scalar(&self.tower, self.tower.squares[i].clone());
        let x2 = [
            s.neg(),
            Self::zero(&self.tower),
            Self::scalar(&self.tower, s.one_scalar()),
        ];
        resultant_generic(&[a, b], &x2)
    }

    fn one_scalar(&self) -> F {
        self.as_scalar()
            .unwrap_or_else(|| self.zero_scalar())
            .one_like()
    }

    /// Maps coefficients into another field over the image tower.
    pub fn map<G: Ring>(
        &self,
        tower: &Arc<RadicalTower<G>>,
        f: impl Fn(&F) -> Option<G>,
    ) -> Option<RadicalElement<G>> {
        let mut out = RadicalElement::zero(tower);
        for (m, c) in &self.coeffs {
            out.insert(*m, f(c)?);
        }
        Some(out)
    }
}

/// Canonical product; errors on operands from different towers.
pub fn radical_mul<F: Ring>(
    a: &RadicalElement<F>,
    b: &RadicalElement<F>,
) -> Result<RadicalElement<F>> {
    a.checked_mul(b)
}

impl<F: Ring> Ring for RadicalElement<F> {
    fn add(&self, rhs: &Self) -> Self {
        assert!(
            self.same_tower(rhs) || self.tower == rhs.tower,
            "tower mismatch"
        );
        let mut out = self.clone();
        for (m, c) in &rhs.coeffs {
            out.insert(*m, c.clone());
        }
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("tower mismatch")
    }
    fn neg(&self) -> Self {
        RadicalElement {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.tower)
    }
    fn one_like(&self) -> Self {
        Self::scalar(&self.tower, self.one_scalar())
    }
}

impl<F: OrderedScalar> RadicalElement<F> {
    /// Exact sign of the value under `branch`.
    ///
    /// Writing `self = a + b·g` for the highest generator present, the sign
    /// follows from the signs of `a`, `b·g` and, when those disagree, of
    /// `a² − g²·b²`. Fails when some generator in use has a negative square.
    pub fn sign(&self, branch: &[bool]) -> Result<i32> {
        let support = self.support();
        if support == 0 {
            return Ok(self.coeffs.get(&0).map_or(0, |c| c.sign()));
        }
        let i = 31 - support.leading_zeros() as usize;
        let sq = &self.tower.squares[i];
        let sq_sign = sq.sign();
        if sq_sign < 0 {
            return Err(Error::UndefinedAngle(format!(
                "generator {} has a negative square",
                self.tower.names[i]
            )));
        }
        let (a, b) = self.split(i);
        if sq_sign == 0 {
            return a.sign(branch);
        }
        let sa = a.sign(branch)?;
        let sb = b.sign(branch)? * if branch[i] { 1 } else { -1 };
        if sa == 0 {
            return Ok(sb);
        }
        if sb == 0 || sa == sb {
            return Ok(sa);
        }
        let d = a
            .square()
            .sub(&b.square().mul(&Self::scalar(&self.tower, sq.clone())));
        Ok(match d.sign(branch)? {
            1 => sa,
            -1 => sb,
            _ => 0,
        })
    }

    /// Whether the value under `branch` is exactly zero.
    pub fn is_zero_value(&self, branch: &[bool]) -> Result<bool> {
        Ok(self.sign(branch)? == 0)
    }

    /// Enclosure of the value under `branch` at fixed precision `prec`.
    pub fn enclose_at(&self, branch: &[bool], prec: u32) -> Result<DyadicInterval> {
        let w = prec + 8;
        let mut gens: Vec<Option<DyadicInterval>> = vec![None; self.tower.len()];
        let mut acc = DyadicInterval::zero(w);
        for (m, c) in &self.coeffs {
            let mut t = c.enclose(w);
            for (i, g) in gens.iter_mut().enumerate() {
                if m & (1 << i) == 0 {
                    continue;
                }
                if g.is_none() {
                    let sq = self.tower.squares[i].enclose(w);
                    let root = sq.sqrt().ok_or_else(|| {
                        Error::UndefinedAngle(format!(
                            "generator {} has a negative square",
                            self.tower.names[i]
                        ))
                    })?;
                    *g = Some(if branch[i] { root } else { root.neg() });
                }
                t = t.mul(g.as_ref().unwrap());
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Enclosure of width at most `2^-width_bits`, doubling the working
    /// precision from 64 bits up to `max_bits`.
    pub fn enclose(
        &self,
        branch: &[bool],
        width_bits: u32,
        max_bits: u32,
    ) -> Result<DyadicInterval> {
        let target = num_rational::BigRational::new(
            1.into(),
            num_bigint::BigInt::from(1) << width_bits as usize,
        );
        let mut prec = 64u32.max(width_bits + 8).min(max_bits.max(64));
        loop {
            let iv = self.enclose_at(branch, prec)?;
            if iv.width() <= target {
                return Ok(iv);
            }
            if prec >= max_bits {
                return Err(Error::PrecisionExhausted {
                    stage: "radical enclosure".into(),
                    bits: prec,
                });
            }
            prec = (prec * 2).min(max_bits);
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for RadicalElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (i, name) in self.tower.names.iter().enumerate() {
                if m & (1 << i) != 0 {
                    write!(f, "·{name}")?;
                }
            }
        }
        Ok(())
    }
}
