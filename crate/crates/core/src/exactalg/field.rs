//! Coefficient fields for radical towers: rational functions `ℚ(r)` with `r`
//! symbolic, and number fields `ℚ(α)` with `α` a concrete real algebraic
//! number.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::DyadicInterval;
use super::poly::RationalPoly;
use super::ring::Ring;
use super::roots::{eval_interval, AlgebraicReal};

/// Exact scalars with a decidable sign and interval enclosures.
pub trait OrderedScalar: Ring {
    /// Exact sign: −1, 0 or 1.
    fn sign(&self) -> i32;
    /// Enclosure at fixed-point precision `prec`.
    fn enclose(&self, prec: u32) -> DyadicInterval;
}

impl OrderedScalar for BigRational {
    fn sign(&self) -> i32 {
        match self.cmp(&BigRational::zero()) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    fn enclose(&self, prec: u32) -> DyadicInterval {
        DyadicInterval::from_rational(self, prec)
    }
}

/// Element of `ℚ(r)`: a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: RationalPoly,
    den: RationalPoly,
}

impl RatFunc {
    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn new(num: RationalPoly, den: RationalPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(RationalPoly::zero());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let lc = d.leading();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: RationalPoly) -> Self {
        RatFunc {
            num: p,
            den: RationalPoly::one(),
        }
    }

    pub fn from_ints(num: &[i64], den: &[i64]) -> Self {
        Self::new(RationalPoly::from_ints(num), RationalPoly::from_ints(den))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(RationalPoly::constant(c))
    }

    /// The indeterminate `r`.
    pub fn r() -> Self {
        Self::from_poly(RationalPoly::x())
    }

    pub fn num(&self) -> &RationalPoly {
        &self.num
    }

    pub fn den(&self) -> &RationalPoly {
        &self.den
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.num.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| Ring::mul(self, &i))
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!Zero::is_zero(&d)).then(|| self.num.eval(x) / d)
    }

    /// Substitutes `r ↦ s(r)`.
    pub fn substitute(&self, s: &RatFunc) -> Option<RatFunc> {
        let ev = |p: &RationalPoly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFunc::from_poly(RationalPoly::zero()), |acc, c| {
                    Ring::add(&Ring::mul(&acc, s), &RatFunc::constant(c.clone()))
                })
        };
        ev(&self.num).div(&ev(&self.den))
    }
}

impl Ring for RatFunc {
    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        Ring::add(self, &Ring::neg(rhs))
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn zero_like(&self) -> Self {
        Self::from_poly(RationalPoly::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_poly(RationalPoly::one())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == RationalPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// The field `ℚ(α) ≅ ℚ[x]/(m)` for a real algebraic `α` with minimal
/// polynomial `m`.
pub struct NumberField {
    generator: AlgebraicReal,
    // narrowest isolator computed so far, shared by all enclosures
    refined: Mutex<AlgebraicReal>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl Eq for NumberField {}

impl std::hash::Hash for NumberField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.generator.hash(state);
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({:?})", self.generator)
    }
}

impl NumberField {
    pub fn new(generator: AlgebraicReal) -> Arc<Self> {
        Arc::new(NumberField {
            refined: Mutex::new(generator.clone()),
            generator,
        })
    }

    /// Enclosure of the generator, reusing earlier refinement work.
    pub fn generator_enclosure(&self, prec: u32) -> DyadicInterval {
        let mut g = self.refined.lock().unwrap();
        g.refine(&BigRational::new(
            One::one(),
            num_bigint::BigInt::one() << prec as usize,
        ));
        g.enclosure(prec)
    }

    pub fn generator(&self) -> &AlgebraicReal {
        &self.generator
    }

    pub fn modulus(&self) -> &RationalPoly {
        self.generator.minpoly()
    }

    pub fn degree(&self) -> usize {
        self.generator.degree()
    }
}

/// Element of a [`NumberField`], stored as a polynomial of degree below the
/// field degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldElem {
    field: Arc<NumberField>,
    poly: RationalPoly,
}

impl NumberFieldElem {
    pub fn new(field: &Arc<NumberField>, poly: &RationalPoly) -> Self {
        NumberFieldElem {
            poly: poly.rem(field.modulus()),
            field: field.clone(),
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        Self::new(field, &RationalPoly::constant(q))
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::new(field, &RationalPoly::x())
    }

    /// Image of a rational function under `r ↦ α`; `None` at a pole.
    pub fn from_ratfunc(field: &Arc<NumberField>, f: &RatFunc) -> Option<Self> {
        Self::new(field, f.num()).div(&Self::new(field, f.den()))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn inv(&self) -> Option<Self> {
        if self.poly.is_zero() {
            return None;
        }
        // s·a + t·m = g, g a nonzero constant since m is irreducible
        let (g, s, _) = self.poly.xgcd(self.field.modulus());
        debug_assert!(g.is_constant());
        Some(Self::new(&self.field, &s.scale(&g.coeff(0).recip())))
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| Ring::mul(self, &i))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.poly.is_constant().then(|| self.poly.coeff(0))
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).mid_f64()
    }

    fn same_field(&self, rhs: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &rhs.field) || self.field == rhs.field,
            "number field mismatch"
        );
    }
}

impl Ring for NumberFieldElem {
    fn add(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        NumberFieldElem {
            poly: self.poly.add(&rhs.poly),
            field: self.field.clone(),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        NumberFieldElem {
            poly: self.poly.sub(&rhs.poly),
            field: self.field.clone(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        Self::new(&self.field, &self.poly.mul(&rhs.poly))
    }
    fn neg(&self) -> Self {
        NumberFieldElem {
            poly: self.poly.neg(),
            field: self.field.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn zero_like(&self) -> Self {
        NumberFieldElem {
            poly: RationalPoly::zero(),
            field: self.field.clone(),
        }
    }
    fn one_like(&self) -> Self {
        NumberFieldElem {
            poly: RationalPoly::one(),
            field: self.field.clone(),
        }
    }
}

impl OrderedScalar for NumberFieldElem {
    fn sign(&self) -> i32 {
        self.field.generator.sign_of(&self.poly)
    }

    fn enclose(&self, prec: u32) -> DyadicInterval {
        if let Some(q) = self.as_rational() {
            return DyadicInterval::from_rational(&q, prec);
        }
        // guard bits absorb the growth of Horner evaluation
        let coeff_bits = self
            .poly
            .coeffs()
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .max()
            .unwrap_or(0);
        let guard = 8 + 4 * self.poly.degree().unwrap_or(0) as u32 + coeff_bits as u32;
        let x = self.field.generator_enclosure(prec + guard);
        eval_interval(&self.poly, &x).with_prec(prec)
    }
}

impl fmt::Debug for NumberFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod ({})", self.poly, self.field.modulus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::ratio;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    fn sqrt2_minus_1() -> Arc<NumberField> {
        NumberField::new(
            AlgebraicReal::roots_in(&p(&[-1, 2, 1]), &ratio(0, 1), &ratio(1, 1))[0].clone(),
        )
    }

    #[test]
    fn ratfunc_reduces() {
        // (r² − 1)/(2r − 2) = (r + 1)/2
        let f = RatFunc::from_ints(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(f.num(), &p(&[1, 1]).scale(&ratio(1, 2)));
        assert_eq!(f.den(), &RationalPoly::one());
        let g = RatFunc::from_ints(&[1], &[0, 1]);
        assert!(Ring::is_zero(&Ring::sub(
            &Ring::mul(&g, &RatFunc::r()),
            &g.one_like()
        )));
    }

    #[test]
    fn ratfunc_inverse_substitution() {
        // X0² = r/((2+r)(2r+1)) is invariant under r ↦ 1/r
        let x0 = RatFunc::new(p(&[0, 1]), p(&[2, 1]).mul(&p(&[1, 2])));
        let inv_r = RatFunc::r().inv().unwrap();
        assert_eq!(x0.substitute(&inv_r).unwrap(), x0);
    }

    #[test]
    fn number_field_inverse() {
        let k = sqrt2_minus_1();
        let a = NumberFieldElem::new(&k, &p(&[3, 5]));
        let prod = Ring::mul(&a, &a.inv().unwrap());
        assert_eq!(prod.as_rational(), Some(ratio(1, 1)));
        // r² = 1 − 2r
        let r = NumberFieldElem::generator(&k);
        assert_eq!(Ring::square(&r).poly(), &p(&[1, -2]));
    }

    #[test]
    fn number_field_sign_and_enclosure() {
        let k = sqrt2_minus_1();
        let r = NumberFieldElem::generator(&k);
        let e = r.enclose(80);
        assert!((e.mid_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let d = Ring::sub(
            &r,
            &NumberFieldElem::from_rational(&k, ratio(41421, 100000)),
        );
        assert_eq!(d.sign(), 1);
        // (r+1)² − 2 vanishes
        let z = Ring::sub(
            &Ring::square(&Ring::add(&r, &r.one_like())),
            &NumberFieldElem::from_rational(&k, ratio(2, 1)),
        );
        assert_eq!(z.sign(), 0);
    }

    #[test]
    fn ratfunc_maps_into_number_field() {
        let k = sqrt2_minus_1();
        // 2/((2+r)(1+2r)) at r = √2 − 1
        let f = RatFunc::new(p(&[2]), p(&[2, 1]).mul(&p(&[1, 2])));
        let v = NumberFieldElem::from_ratfunc(&k, &f).unwrap();
        let r = 2f64.sqrt() - 1.0;
        assert!((v.to_f64() - 2.0 / ((2.0 + r) * (1.0 + 2.0 * r))).abs() < 1e-14);
    }
}
