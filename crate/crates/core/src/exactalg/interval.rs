//! Outward-rounded interval arithmetic on fixed-point dyadic endpoints.
//!
//! An interval at precision `p` stores integers `lo ≤ hi` and denotes
//! `[lo·2⁻ᵖ, hi·2⁻ᵖ]`. Every operation rounds its lower endpoint down and its
//! upper endpoint up, so the exact result for any members of the operands
//! is contained in the output.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Closed interval with dyadic endpoints `lo·2^-prec`, `hi·2^-prec`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// `a · 2^-shift` rounded down.
fn shr_floor(a: &BigInt, shift: u32) -> BigInt {
    a >> shift as usize
}

/// `a · 2^-shift` rounded up.
fn shr_ceil(a: &BigInt, shift: u32) -> BigInt {
    -((-a) >> shift as usize)
}

impl DyadicInterval {
    /// Interval from raw fixed-point endpoints. Panics if `lo > hi`.
    pub fn from_raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        DyadicInterval { lo, hi, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_raw(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        let v = BigInt::from(n) << prec as usize;
        Self::from_raw(v.clone(), v, prec)
    }

    /// Tightest enclosure of a rational at precision `prec`.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled = q.numer() << prec as usize;
        Self::from_raw(
            floor_div(&scaled, q.denom()),
            ceil_div(&scaled, q.denom()),
            prec,
        )
    }

    /// Enclosure of the rational interval `[a, b]`.
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, prec: u32) -> Self {
        let lo = Self::from_rational(a, prec).lo;
        let hi = Self::from_rational(b, prec).hi;
        Self::from_raw(lo, hi, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(
            &self.lo + &self.hi,
            BigInt::one() << (self.prec as usize + 1),
        )
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    /// Re-expresses the interval at precision `prec`, rounding outward when
    /// the precision decreases.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            std::cmp::Ordering::Equal => self.clone(),
            std::cmp::Ordering::Greater => {
                let s = (prec - self.prec) as usize;
                Self::from_raw(&self.lo << s, &self.hi << s, prec)
            }
            std::cmp::Ordering::Less => {
                let s = self.prec - prec;
                Self::from_raw(shr_floor(&self.lo, s), shr_ceil(&self.hi, s), prec)
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo() <= q && q <= &self.hi()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Whether `self ⊆ other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        b.lo <= a.lo && a.hi <= b.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.hi && b.lo <= a.hi
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = self.aligned(rhs);
        Self::from_raw(a.lo + b.lo, a.hi + b.hi, a.prec)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let (a, b) = self.aligned(rhs);
        Self::from_raw(a.lo - b.hi, a.hi - b.lo, a.prec)
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(-&self.hi, -&self.lo, self.prec)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = self.aligned(rhs);
        let p = a.prec;
        let prods = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        Self::from_raw(shr_floor(min, p), shr_ceil(max, p), p)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        if a <= b {
            Self::from_raw(a, b, self.prec)
        } else {
            Self::from_raw(b, a, self.prec)
        }
    }

    pub fn square(&self) -> Self {
        let sq = self.mul(self);
        if self.contains_zero() {
            let hi = sq.hi.clone();
            Self::from_raw(BigInt::zero(), hi, sq.prec)
        } else {
            sq
        }
    }

    /// Division; `None` when the divisor contains zero.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        if rhs.contains_zero() {
            return None;
        }
        let (a, b) = self.aligned(rhs);
        let p = a.prec as usize;
        let nums = [&a.lo << p, &a.hi << p];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in &nums {
            for d in [&b.lo, &b.hi] {
                let f = floor_div(n, d);
                let c = ceil_div(n, d);
                lo = Some(match lo {
                    Some(x) if x <= f => x,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(x) if x >= c => x,
                    _ => c,
                });
            }
        }
        Some(Self::from_raw(lo.unwrap(), hi.unwrap(), a.prec))
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.div(&Self::from_int(k, self.prec))
            .expect("nonzero integer divisor")
    }

    pub fn recip(&self) -> Option<Self> {
        Self::from_int(1, self.prec).div(self)
    }

    /// Square root of the nonnegative part. `None` if the interval is
    /// entirely negative.
    pub fn sqrt(&self) -> Option<Self> {
        if self.hi.is_negative() {
            return None;
        }
        let p = self.prec as usize;
        let lo = if self.lo.is_positive() {
            self.lo.clone()
        } else {
            BigInt::zero()
        };
        let lo_s = (&lo << p).sqrt();
        let hi_scaled = &self.hi << p;
        let mut hi_s = hi_scaled.sqrt();
        if &hi_s * &hi_s < hi_scaled {
            hi_s += 1;
        }
        Some(Self::from_raw(lo_s, hi_s, self.prec))
    }

    pub fn abs_hi(&self) -> BigRational {
        let m = self.lo.abs().max(self.hi.abs());
        BigRational::new(m, BigInt::one() << self.prec as usize)
    }

    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::from_raw(a.lo.min(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Endpoints as decimals with `digits` fractional digits, rounded outward.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        let scale = BigInt::from(10).pow(digits as u32);
        let den = BigInt::one() << self.prec as usize;
        let lo = floor_div(&(&self.lo * &scale), &den);
        let hi = ceil_div(&(&self.hi * &scale), &den);
        (fixed_point(&lo, digits), fixed_point(&hi, digits))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo().to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi().to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// The unique integer contained in the interval, if the interval
    /// contains exactly one.
    pub fn unique_integer(&self) -> Option<BigInt> {
        let lo = ceil_div(&self.lo, &(BigInt::one() << self.prec as usize));
        let hi = floor_div(&self.hi, &(BigInt::one() << self.prec as usize));
        (lo == hi).then_some(lo)
    }

    /// Whether the interval contains at least one integer.
    pub fn contains_integer(&self) -> bool {
        let lo = ceil_div(&self.lo, &(BigInt::one() << self.prec as usize));
        let hi = floor_div(&self.hi, &(BigInt::one() << self.prec as usize));
        lo <= hi
    }

    /// Floor of the lower endpoint.
    pub fn floor_lo(&self) -> BigInt {
        floor_div(&self.lo, &(BigInt::one() << self.prec as usize))
    }

    /// Floor of the upper endpoint.
    pub fn floor_hi(&self) -> BigInt {
        floor_div(&self.hi, &(BigInt::one() << self.prec as usize))
    }

    // ---- elementary functions ------------------------------------------

    /// Enclosure of π by Machin's formula.
    pub fn pi(prec: u32) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u32, DyadicInterval>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(v) = cache.lock().unwrap().get(&prec) {
            return v.clone();
        }
        let v = Self::pi_uncached(prec);
        cache.lock().unwrap().insert(prec, v.clone());
        v
    }

    fn pi_uncached(prec: u32) -> Self {
        let w = prec + 16;
        let a = atan_small(&Self::from_rational(
            &BigRational::new(1.into(), 5.into()),
            w,
        ));
        let b = atan_small(&Self::from_rational(
            &BigRational::new(1.into(), 239.into()),
            w,
        ));
        a.mul_int(16).sub(&b.mul_int(4)).with_prec(prec)
    }

    /// Enclosure of `atan` over the interval (monotone, so endpoints suffice).
    pub fn atan(&self) -> Self {
        let p = self.prec;
        let lo = atan_point(&Self::from_raw(self.lo.clone(), self.lo.clone(), p));
        let hi = atan_point(&Self::from_raw(self.hi.clone(), self.hi.clone(), p));
        Self::from_raw(lo.with_prec(p).lo, hi.with_prec(p).hi, p)
    }

    /// Enclosure of `acos` over the interval. `None` unless the interval
    /// meets `[-1, 1]`; endpoints beyond ±1 are clamped.
    pub fn acos(&self) -> Option<Self> {
        let p = self.prec;
        let one = BigInt::one() << p as usize;
        if self.lo > one || self.hi < -&one {
            return None;
        }
        let a = self.lo.clone().max(-&one);
        let b = self.hi.clone().min(one);
        // acos is decreasing
        let at_b = acos_point(&Self::from_raw(b.clone(), b, p));
        let at_a = acos_point(&Self::from_raw(a.clone(), a, p));
        Some(Self::from_raw(
            at_b.with_prec(p).lo,
            at_a.with_prec(p).hi,
            p,
        ))
    }
}

/// Series for `atan` on an interval with `|x| ≤ 1/2`, with the alternating
/// tail bound added as an error term.
fn atan_small(x: &DyadicInterval) -> DyadicInterval {
    let p = x.prec;
    let x2 = x.square();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (p as usize + 2));
    let mut power = x.clone();
    let mut sum = DyadicInterval::zero(p);
    let mut k: i64 = 0;
    loop {
        let term = power.div_int(2 * k + 1);
        sum = if k % 2 == 0 {
            sum.add(&term)
        } else {
            sum.sub(&term)
        };
        power = power.mul(&x2);
        k += 1;
        let bound = power.abs_hi() / BigRational::from_integer(BigInt::from(2 * k + 1));
        if bound < eps {
            let b = DyadicInterval::from_rational(&bound, p);
            let tail = DyadicInterval::from_raw(-b.hi.clone(), b.hi, p);
            return sum.add(&tail);
        }
    }
}

/// `atan` of a (narrow) interval via argument halving
/// `atan x = 2 atan(x / (1 + √(1+x²)))` and reflection for large arguments.
fn atan_point(x: &DyadicInterval) -> DyadicInterval {
    let p = x.prec;
    let w = p + 24;
    let xw = x.with_prec(w);
    let one = DyadicInterval::from_int(1, w);
    if xw.lo > one.lo {
        // atan x = π/2 − atan(1/x)
        let inv = xw.recip().expect("x > 1");
        let half_pi = DyadicInterval::pi(w).div_int(2);
        return half_pi.sub(&atan_point(&inv)).with_prec(p);
    }
    if xw.hi < -&one.lo {
        return atan_point(&x.neg()).neg();
    }
    let mut t = xw;
    let mut doublings = 0;
    let quarter = BigInt::one() << (w as usize - 2);
    while t.lo.abs() > quarter || t.hi.abs() > quarter {
        let denom = one.add(&one.add(&t.square()).sqrt().expect("nonnegative"));
        t = t.div(&denom).expect("denominator ≥ 1");
        doublings += 1;
    }
    let mut r = atan_small(&t);
    for _ in 0..doublings {
        r = r.mul_int(2);
    }
    r.with_prec(p)
}

/// `acos` of a narrow interval inside `[-1, 1]`.
fn acos_point(x: &DyadicInterval) -> DyadicInterval {
    let p = x.prec;
    let w = p + 24;
    let xw = x.with_prec(w);
    let one = DyadicInterval::from_int(1, w);
    let half = BigInt::one() << (w as usize - 1);
    let s = one.sub(&xw.square()).sqrt().expect("|x| ≤ 1");
    let pi = DyadicInterval::pi(w);
    let r = if xw.lo >= half {
        // acos x = atan(s/x)
        s.div(&xw).expect("x ≥ 1/2").atan()
    } else if xw.hi <= -half.clone() {
        pi.sub(&s.div(&xw.neg()).expect("x ≤ -1/2").atan())
    } else {
        // acos x = π/2 − atan(x/s), s ≥ √3/2 here
        pi.div_int(2).sub(&xw.div(&s).expect("s > 0").atan())
    };
    r.with_prec(p)
}

/// `n · 10^-digits` written out in positional notation.
fn fixed_point(n: &BigInt, digits: usize) -> String {
    let sign = if n.is_negative() { "-" } else { "" };
    let s = n.abs().to_string();
    if digits == 0 {
        return format!("{sign}{s}");
    }
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{sign}{int}.{frac}")
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12e}, {:.12e}]@{}",
            self.lo_f64(),
            self.hi_f64(),
            self.prec
        )
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_f64(), self.hi_f64())
    }
}

impl Serialize for DyadicInterval {
    /// `[lo, hi]` as decimal floats (rounded outward is not guaranteed by
    /// float printing; the exact endpoints are available through the API).
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo_f64(), self.hi_f64()].serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let i = DyadicInterval::from_rational(&q(1, 3), 64);
        assert!(i.contains(&q(1, 3)));
        assert!(i.width() <= q(1, 1) / BigRational::from_integer(BigInt::one() << 64usize));
        let h = DyadicInterval::from_rational(&q(1, 2), 64);
        assert_eq!(h.lo(), h.hi());
    }

    #[test]
    fn decimal_endpoints_round_outward() {
        let i = DyadicInterval::from_rational(&q(-1, 3), 64);
        assert_eq!(
            i.to_decimal(4),
            ("-0.3334".to_string(), "-0.3333".to_string())
        );
        let h = DyadicInterval::from_rational(&q(5, 2), 8);
        assert_eq!(h.to_decimal(2), ("2.50".to_string(), "2.50".to_string()));
        assert_eq!(DyadicInterval::from_int(-7, 8).to_decimal(0).0, "-7");
        let (lo, hi) = DyadicInterval::pi(128).to_decimal(10);
        assert_eq!((lo.as_str(), hi.as_str()), ("3.1415926535", "3.1415926536"));
    }

    #[test]
    fn pi_digits() {
        let pi = DyadicInterval::pi(200);
        assert!(pi.lo_f64() <= std::f64::consts::PI && std::f64::consts::PI <= pi.hi_f64());
        assert!(pi.width() < q(1, 1) / BigRational::from_integer(BigInt::one() << 190usize));
        // 3.14159265358979323846264338327950288
        let lo = BigRational::new(
            314159265358979323846264338327950288i128.into(),
            BigInt::from(10).pow(35),
        );
        let hi = lo.clone() + q(1, 1) / BigRational::from_integer(BigInt::from(10).pow(35));
        assert!(pi.lo() > lo - q(1, 1) / BigRational::from_integer(BigInt::from(10).pow(34)));
        assert!(pi.hi() < hi);
    }

    #[test]
    fn acos_known_values() {
        let p = 128;
        let pi = DyadicInterval::pi(p);
        let half = DyadicInterval::from_rational(&q(1, 2), p).acos().unwrap();
        assert!(half.overlaps(&pi.div_int(3)));
        assert!(half.width() < q(1, 1_000_000_000_000));
        let zero = DyadicInterval::zero(p).acos().unwrap();
        assert!(zero.overlaps(&pi.div_int(2)));
        let m1 = DyadicInterval::from_int(-1, p).acos().unwrap();
        assert!(m1.overlaps(&pi));
        let third = DyadicInterval::from_rational(&q(1, 3), p).acos().unwrap();
        assert!((third.mid_f64() - (1.0f64 / 3.0).acos()).abs() < 1e-15);
        let neg = DyadicInterval::from_rational(&q(-9, 10), p).acos().unwrap();
        assert!((neg.mid_f64() - (-0.9f64).acos()).abs() < 1e-15);
    }

    #[test]
    fn atan_large_and_negative() {
        let p = 96;
        for v in [-50.0, -3.0, -0.7, 0.0, 0.2, 1.0, 4.5, 1000.0] {
            let x = DyadicInterval::from_rational(&BigRational::from_float(v).unwrap(), p);
            let a = x.atan();
            assert!(
                a.lo_f64() <= f64::atan(v) + 1e-15 && f64::atan(v) - 1e-15 <= a.hi_f64(),
                "{v}"
            );
            assert!(a.width() < q(1, 1_000_000_000_000));
        }
    }

    #[test]
    fn sqrt_encloses() {
        let two = DyadicInterval::from_int(2, 80);
        let s = two.sqrt().unwrap();
        assert!(s.square().contains(&q(2, 1)));
        assert!(DyadicInterval::from_int(-1, 10).sqrt().is_none());
    }

    #[test]
    fn division_by_zero_interval() {
        let a = DyadicInterval::from_int(1, 10);
        let z = DyadicInterval::from_rational_bounds(&q(-1, 4), &q(1, 4), 10);
        assert!(a.div(&z).is_none());
    }

    #[test]
    fn unique_integer_detection() {
        let i = DyadicInterval::from_rational_bounds(&q(19, 10), &q(21, 10), 20);
        assert_eq!(i.unique_integer(), Some(BigInt::from(2)));
        let j = DyadicInterval::from_rational_bounds(&q(11, 10), &q(19, 10), 20);
        assert_eq!(j.unique_integer(), None);
        assert!(!j.contains_integer());
    }
}
