//! Real-root isolation by Sturm sequences, and real algebraic numbers
//! represented by an irreducible polynomial plus an isolating interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::factor::irreducible_factors;
use super::interval::DyadicInterval;
use super::poly::RationalPoly;

/// Sturm sequence `p, p', -rem(p, p'), …` of a nonzero polynomial.
pub fn sturm_sequence(p: &RationalPoly) -> Vec<RationalPoly> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    let mut a = p.clone();
    let mut b = p.derivative();
    while !b.is_zero() {
        let r = a.rem(&b).neg();
        seq.push(b.clone());
        a = b;
        b = r;
    }
    seq
}

fn variations_at(seq: &[RationalPoly], x: &BigRational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for q in seq {
        let s = q.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
pub fn count_roots(seq: &[RationalPoly], a: &BigRational, b: &BigRational) -> usize {
    variations_at(seq, a).saturating_sub(variations_at(seq, b))
}

/// Power of two strictly exceeding the modulus of every root (Cauchy bound).
pub fn root_bound(p: &RationalPoly) -> BigRational {
    let lc = p.leading().abs();
    let m = p
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(BigRational::zero(), |a, b| a.max(b));
    let bound = BigRational::one() + m;
    let mut pow = BigRational::one();
    while pow <= bound {
        pow *= BigRational::from_integer(BigInt::from(2));
    }
    pow
}

/// Closed isolating intervals, in increasing order, for the distinct real
/// roots of `p` in the open interval `(lo, hi)`. Endpoints are dyadic when
/// `lo`, `hi` are; a rational root hit exactly by bisection is reported as
/// a point interval.
pub fn isolate_real_roots(
    p: &RationalPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    if p.degree().unwrap_or(0) == 0 || lo >= hi {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let seq = sturm_sequence(&sf);
    let mut out = Vec::new();
    // roots in (lo, hi) = roots in (lo, hi] minus a possible root at hi
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((a, b)) = stack.pop() {
        let mut n = count_roots(&seq, &a, &b);
        let b_root = sf.sign_at(&b) == 0;
        if b_root {
            if &b != hi {
                out.push((b.clone(), b.clone()));
            }
            n -= 1;
        }
        if n == 0 {
            continue;
        }
        let a_root = &a != lo && sf.sign_at(&a) == 0;
        if n == 1 && !a_root && !b_root {
            out.push((a, b));
            continue;
        }
        let m = (&a + &b) / &two;
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.dedup();
    out
}

/// Real algebraic number: the unique root of an irreducible primitive
/// integer polynomial inside a closed rational interval. Rational numbers
/// carry a degree-one polynomial and a point interval.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicReal {
    minpoly: RationalPoly,
    lo: BigRational,
    hi: BigRational,
}

impl AlgebraicReal {
    pub fn from_rational(q: BigRational) -> Self {
        let minpoly = RationalPoly::new(vec![-q.clone(), BigRational::one()]).primitive();
        AlgebraicReal {
            minpoly,
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// Builds from an irreducible polynomial and an interval that isolates
    /// exactly one of its roots. Panics if the interval does not isolate.
    pub fn new(minpoly: RationalPoly, lo: BigRational, hi: BigRational) -> Self {
        let minpoly = minpoly.primitive();
        if minpoly.degree() == Some(1) {
            let c = minpoly.coeffs();
            return Self::from_rational(-&c[0] / &c[1]);
        }
        let seq = sturm_sequence(&minpoly);
        assert!(minpoly.sign_at(&lo) != 0, "endpoint is a root");
        assert_eq!(
            count_roots(&seq, &lo, &hi),
            1,
            "interval does not isolate a root"
        );
        AlgebraicReal { minpoly, lo, hi }
    }

    /// All real roots of `p` in the open interval `(lo, hi)` in increasing
    /// order, each carrying its irreducible minimal polynomial.
    pub fn roots_in(p: &RationalPoly, lo: &BigRational, hi: &BigRational) -> Vec<Self> {
        let mut out = Vec::new();
        for f in irreducible_factors(p) {
            for (a, b) in isolate_real_roots(&f, lo, hi) {
                out.push(Self::new(f.clone(), a, b));
            }
        }
        out.sort_by(|x, y| x.cmp_value(y));
        out
    }

    /// All real roots of `p`.
    pub fn real_roots(p: &RationalPoly) -> Vec<Self> {
        let b = root_bound(p);
        Self::roots_in(p, &-b.clone(), &b)
    }

    pub fn minpoly(&self) -> &RationalPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.lo.clone())
    }

    pub fn isolating_interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    /// Bisects the isolating interval until its width is at most `width`.
    pub fn refine(&mut self, width: &BigRational) {
        if self.is_rational() {
            return;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let s_lo = self.minpoly.sign_at(&self.lo);
        while &(&self.hi - &self.lo) > width {
            let m = (&self.lo + &self.hi) / &two;
            let s = self.minpoly.sign_at(&m);
            debug_assert!(s != 0, "irreducible of degree ≥ 2 has no rational root");
            if s == s_lo {
                self.lo = m;
            } else {
                self.hi = m;
            }
        }
    }

    /// Enclosure at fixed-point precision `prec`, of width about `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> DyadicInterval {
        let mut a = self.clone();
        a.refine(&BigRational::new(
            BigInt::one(),
            BigInt::one() << prec as usize,
        ));
        DyadicInterval::from_rational_bounds(&a.lo, &a.hi, prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(64).mid_f64()
    }

    /// Exact sign of `q(self)`.
    pub fn sign_of(&self, q: &RationalPoly) -> i32 {
        if q.is_zero() {
            return 0;
        }
        if let Some(v) = self.as_rational() {
            return q.sign_at(&v);
        }
        if self.minpoly.divides(q) {
            return 0;
        }
        // q(α) ≠ 0: refine until the interval image excludes zero
        let mut prec = 64;
        loop {
            let v = eval_interval(q, &self.enclosure(prec));
            if v.is_positive() {
                return 1;
            }
            if v.is_negative() {
                return -1;
            }
            prec *= 2;
        }
    }

    /// Total order on values.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        if let Some(b) = other.as_rational() {
            return match self.sign_of(&RationalPoly::new(vec![-b, BigRational::one()])) {
                1 => Ordering::Greater,
                -1 => Ordering::Less,
                _ => Ordering::Equal,
            };
        }
        if self.as_rational().is_some() {
            return other.cmp_value(self).reverse();
        }
        if self.minpoly == other.minpoly {
            let lo = (&self.lo).max(&other.lo).clone();
            let hi = (&self.hi).min(&other.hi).clone();
            if lo <= hi && count_roots(&sturm_sequence(&self.minpoly), &lo, &hi) == 1 {
                return Ordering::Equal;
            }
        }
        // distinct values: refine both until the intervals separate
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            let wa = (&a.hi - &a.lo) / BigRational::from_integer(BigInt::from(2));
            let wb = (&b.hi - &b.lo) / BigRational::from_integer(BigInt::from(2));
            a.refine(&wa);
            b.refine(&wb);
        }
    }
}

/// Interval image of a polynomial by Horner's rule.
pub fn eval_interval(p: &RationalPoly, x: &DyadicInterval) -> DyadicInterval {
    let prec = x.prec();
    let mut acc = DyadicInterval::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&DyadicInterval::from_rational(c, prec));
    }
    acc
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in [{}, {}]", self.minpoly, self.lo, self.hi)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{:.12} (root of {})", self.to_f64(), self.minpoly),
        }
    }
}

impl Serialize for AlgebraicReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraicReal", 3)?;
        st.serialize_field("minpoly", &self.minpoly)?;
        st.serialize_field(
            "isolating_interval",
            &[self.lo.to_string(), self.hi.to_string()],
        )?;
        st.serialize_field(
            "approx",
            &self
                .lo
                .to_f64()
                .zip(self.hi.to_f64())
                .map(|(a, b)| (a + b) / 2.0),
        )?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn isolates_quartic_roots() {
        // r^4 + 4r^3 + r^2 - 6r + 1: two roots in (0, 1)
        let f = p(&[1, -6, 1, 4, 1]);
        let iv = isolate_real_roots(&f, &q(0, 1), &q(1, 1));
        assert_eq!(iv.len(), 2);
        let roots = AlgebraicReal::roots_in(&f, &q(0, 1), &q(1, 1));
        assert!((roots[0].to_f64() - 0.17557).abs() < 1e-4);
        assert!((roots[1].to_f64() - 0.90211).abs() < 1e-4);
    }

    #[test]
    fn rational_roots_found_exactly() {
        let f = p(&[-1, 6]).mul(&p(&[-1, 2])).mul(&p(&[-3, 4]));
        let roots = AlgebraicReal::roots_in(&f, &q(0, 1), &q(1, 1));
        let vals: Vec<_> = roots.iter().map(|r| r.as_rational().unwrap()).collect();
        assert_eq!(vals, vec![q(1, 6), q(1, 2), q(3, 4)]);
    }

    #[test]
    fn refine_reaches_width() {
        let mut a = AlgebraicReal::real_roots(&p(&[-2, 0, 1]))[1].clone();
        a.refine(&q(1, 1 << 40));
        let (lo, hi) = a.isolating_interval();
        assert!(hi - lo <= q(1, 1 << 40));
        assert!((a.to_f64() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn compare_and_sign() {
        let sqrt2 = AlgebraicReal::real_roots(&p(&[-2, 0, 1]))[1].clone();
        let r = AlgebraicReal::real_roots(&p(&[-1, 2, 1]))[1].clone(); // √2 - 1
        assert_eq!(r.cmp_value(&sqrt2), Ordering::Less);
        assert_eq!(r.sign_of(&p(&[-1, 2, 1])), 0);
        // (r+1)^2 - 2 = 0 exactly; r - 0.4142 > 0
        assert_eq!(r.sign_of(&p(&[-2071, 5000])), 1);
        let same = AlgebraicReal::new(p(&[-1, 2, 1]), q(2, 5), q(1, 2));
        assert_eq!(r.cmp_value(&same), Ordering::Equal);
        assert_eq!(AlgebraicReal::from_int(1).cmp_value(&r), Ordering::Greater);
    }

    #[test]
    fn sturm_counts_match_float_roots() {
        let f = p(&[4, -20, 9, 2]).mul(&p(&[1, -6, 1]));
        let seq = sturm_sequence(&f);
        assert_eq!(count_roots(&seq, &q(-100, 1), &q(100, 1)), 5);
    }
}
