//! The biquadratic field Q(√2, √3) with basis (1, √2, √3, √6).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::exactalg::DyadicInterval;

/// `a + b√2 + c√3 + d√6` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Q23 {
    c: [BigRational; 4],
}

/// Element of Q(√2) as `u + v√2`, used for norms and square roots.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Q2 {
    u: BigRational,
    v: BigRational,
}

fn rq(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `x + y·√k` for rationals `x, y` and a positive nonsquare `k`.
fn sign_quadratic(x: i32, y: i32, norm: impl FnOnce() -> i32) -> i32 {
    if y == 0 || x == y {
        x
    } else if x == 0 {
        y
    } else {
        // x and y have opposite signs; |x| vs |y|√k decided by x² − k y²
        x * norm()
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

impl Q2 {
    fn new(u: BigRational, v: BigRational) -> Self {
        Q2 { u, v }
    }

    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Q2::new(&self.u + &o.u, &self.v + &o.v)
    }

    fn sub(&self, o: &Self) -> Self {
        Q2::new(&self.u - &o.u, &self.v - &o.v)
    }

    fn mul(&self, o: &Self) -> Self {
        Q2::new(
            &self.u * &o.u + rq(2) * &self.v * &o.v,
            &self.u * &o.v + &self.v * &o.u,
        )
    }

    fn scale(&self, k: &BigRational) -> Self {
        Q2::new(&self.u * k, &self.v * k)
    }

    fn norm(&self) -> BigRational {
        &self.u * &self.u - rq(2) * &self.v * &self.v
    }

    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Q2::new(&self.u / &n, -&self.v / &n))
    }

    fn sign(&self) -> i32 {
        sign_quadratic(sign_of(&self.u), sign_of(&self.v), || sign_of(&self.norm()))
    }

    /// Square root inside Q(√2), if there is one.
    fn sqrt(&self) -> Option<Self> {
        if self.sign() < 0 {
            return None;
        }
        if self.v.is_zero() {
            if let Some(s) = rational_sqrt(&self.u) {
                return Some(Q2::new(s, rq(0)));
            }
            // u = 2t² gives t√2
            return rational_sqrt(&(&self.u / rq(2))).map(|t| Q2::new(rq(0), t));
        }
        // (s + t√2)² = s² + 2t² + 2st√2
        let m = rational_sqrt(&self.norm())?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for s2 in [(&self.u + &m) * &half, (&self.u - &m) * &half] {
            if let Some(s) = rational_sqrt(&s2) {
                if s.is_zero() {
                    continue;
                }
                let t = &self.v / (rq(2) * &s);
                return Some(Q2::new(s, t));
            }
        }
        None
    }
}

impl Q23 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Q23 { c: [a, b, c, d] }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Q23::new(rq(a), rq(b), rq(c), rq(d))
    }

    pub fn rational(q: BigRational) -> Self {
        Q23::new(q, rq(0), rq(0), rq(0))
    }

    pub fn int(n: i64) -> Self {
        Q23::rational(rq(n))
    }

    pub fn zero() -> Self {
        Q23::int(0)
    }

    pub fn one() -> Self {
        Q23::int(1)
    }

    pub fn sqrt2() -> Self {
        Q23::from_ints(0, 1, 0, 0)
    }

    pub fn sqrt3() -> Self {
        Q23::from_ints(0, 0, 1, 0)
    }

    pub fn sqrt6() -> Self {
        Q23::from_ints(0, 0, 0, 1)
    }

    /// Coordinates over the basis (1, √2, √3, √6).
    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.c[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.c[0].clone())
    }

    /// Split as `P + Q√3` with `P, Q` in Q(√2).
    fn split(&self) -> (Q2, Q2) {
        let [a, b, c, d] = &self.c;
        (Q2::new(a.clone(), b.clone()), Q2::new(c.clone(), d.clone()))
    }

    fn join(p: Q2, q: Q2) -> Self {
        Q23::new(p.u, p.v, q.u, q.v)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Q23 {
            c: self.c.clone().map(|x| x * k),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Exact sign.
    pub fn sign(&self) -> i32 {
        let (p, q) = self.split();
        sign_quadratic(p.sign(), q.sign(), || {
            p.mul(&p).sub(&q.mul(&q).scale(&rq(3))).sign()
        })
    }

    pub fn inv(&self) -> Option<Self> {
        let (p, q) = self.split();
        // (P + Q√3)(P − Q√3) = P² − 3Q² in Q(√2)
        let n = p.mul(&p).sub(&q.mul(&q).scale(&rq(3)));
        let ni = n.inv()?;
        Some(Q23::join(p.mul(&ni), q.mul(&ni).scale(&rq(-1))))
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self * &i)
    }

    /// Nonnegative square root when it lies in the field.
    pub fn sqrt(&self) -> Option<Self> {
        if self.sign() < 0 {
            return None;
        }
        let (p, q) = self.split();
        let root = if q.is_zero() {
            // √P or √(P/3)·√3
            match p.sqrt() {
                Some(s) => Some(Q23::join(s, Q2::new(rq(0), rq(0)))),
                None => p
                    .scale(&BigRational::new(BigInt::one(), BigInt::from(3)))
                    .sqrt()
                    .map(|t| Q23::join(Q2::new(rq(0), rq(0)), t)),
            }
        } else {
            // (U + V√3)² = U² + 3V² + 2UV√3
            let m = p.mul(&p).sub(&q.mul(&q).scale(&rq(3))).sqrt();
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            m.and_then(|m| {
                [p.add(&m).scale(&half), p.sub(&m).scale(&half)]
                    .into_iter()
                    .find_map(|u2| {
                        let u = u2.sqrt().filter(|u| !u.is_zero())?;
                        let v = q.mul(&u.inv()?).scale(&half);
                        Some(Q23::join(u, v))
                    })
            })
        }?;
        let root = if root.sign() < 0 { -root } else { root };
        (&root * &root == *self).then_some(root)
    }

    pub fn enclose(&self, prec: u32) -> DyadicInterval {
        let p = prec + 8;
        let s2 = DyadicInterval::from_int(2, p).sqrt().expect("positive");
        let s3 = DyadicInterval::from_int(3, p).sqrt().expect("positive");
        let s6 = DyadicInterval::from_int(6, p).sqrt().expect("positive");
        let [a, b, c, d] = &self.c;
        DyadicInterval::from_rational(a, p)
            .add(&DyadicInterval::from_rational(b, p).mul(&s2))
            .add(&DyadicInterval::from_rational(c, p).mul(&s3))
            .add(&DyadicInterval::from_rational(d, p).mul(&s6))
    }

    pub fn to_f64(&self) -> f64 {
        let w = [1.0, 2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt()];
        self.c
            .iter()
            .zip(w)
            .map(|(x, w)| x.to_f64().unwrap_or(f64::NAN) * w)
            .sum()
    }

    /// Coordinates as strings, e.g. `["0", "1/2", "0", "-1"]`.
    pub fn coord_strings(&self) -> [String; 4] {
        self.c.clone().map(|x| x.to_string())
    }
}

impl Add for &Q23 {
    type Output = Q23;
    fn add(self, o: &Q23) -> Q23 {
        Q23 {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
        }
    }
}

impl Sub for &Q23 {
    type Output = Q23;
    fn sub(self, o: &Q23) -> Q23 {
        Q23 {
            c: std::array::from_fn(|i| &self.c[i] - &o.c[i]),
        }
    }
}

impl Neg for Q23 {
    type Output = Q23;
    fn neg(self) -> Q23 {
        Q23 {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for &Q23 {
    type Output = Q23;
    fn mul(self, o: &Q23) -> Q23 {
        let [a1, b1, c1, d1] = &self.c;
        let [a2, b2, c2, d2] = &o.c;
        Q23::new(
            a1 * a2 + rq(2) * b1 * b2 + rq(3) * c1 * c2 + rq(6) * d1 * d2,
            a1 * b2 + b1 * a2 + rq(3) * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + rq(2) * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
    }
}

impl PartialOrd for Q23 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order of the real numbers represented.
impl Ord for Q23 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl fmt::Display for Q23 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "√2", "√3", "√6"];
        let mut first = true;
        for (x, name) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            let neg = x.is_negative();
            let mag = x.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(name)?;
            } else if mag.denom().is_one() {
                write!(f, "{}{name}", mag.numer())?;
            } else if mag.numer().is_one() {
                write!(f, "{name}/{}", mag.denom())?;
            } else {
                write!(f, "{}{name}/{}", mag.numer(), mag.denom())?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for Q23 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coord_strings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, c: i64, d: i64) -> Q23 {
        Q23::from_ints(a, b, c, d)
    }

    #[test]
    fn basis_products() {
        assert_eq!(&Q23::sqrt2() * &Q23::sqrt3(), Q23::sqrt6());
        assert_eq!(&Q23::sqrt6() * &Q23::sqrt6(), Q23::int(6));
        assert_eq!(&Q23::sqrt2() * &Q23::sqrt6(), q(0, 0, 2, 0));
        assert_eq!(&Q23::sqrt3() * &Q23::sqrt6(), q(0, 3, 0, 0));
    }

    #[test]
    fn signs_near_cancellation() {
        // 5√2 − 7 ≈ 0.0711, 7 − 4√3 ≈ 0.0718, √6 − √2 − √3 + 0.7 ≈ −0.0956 + ...
        assert_eq!(q(-7, 5, 0, 0).sign(), 1);
        assert_eq!(q(7, 0, -4, 0).sign(), 1);
        assert_eq!(q(-5, 0, 0, 2).sign(), -1);
        assert_eq!(q(0, 0, 0, 0).sign(), 0);
        let x = q(3, -1, -1, 1);
        assert_eq!(x.sign(), if x.to_f64() > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn square_roots() {
        assert_eq!(q(3, 2, 0, 0).sqrt(), Some(q(1, 1, 0, 0)));
        assert_eq!(q(5, 0, 0, 2).sqrt(), Some(q(0, 1, 1, 0)));
        assert_eq!(Q23::int(3).sqrt(), Some(Q23::sqrt3()));
        assert_eq!(Q23::int(6).sqrt(), Some(Q23::sqrt6()));
        let h = Q23::rational(BigRational::new(8.into(), 3.into()));
        assert_eq!(
            h.sqrt(),
            Some(Q23::sqrt6().scale(&BigRational::new(2.into(), 3.into())))
        );
        assert_eq!(Q23::int(5).sqrt(), None);
        assert_eq!(Q23::int(-4).sqrt(), None);
    }

    #[test]
    fn display() {
        assert_eq!(q(-1, 1, 0, 0).to_string(), "-1 + √2");
        assert_eq!(
            Q23::new(rq(0), rq(0), rq(0), BigRational::new(2.into(), 3.into())).to_string(),
            "2√6/3"
        );
        assert_eq!(Q23::zero().to_string(), "0");
        assert_eq!(
            Q23::sqrt2()
                .scale(&BigRational::new(1.into(), 6.into()))
                .to_string(),
            "√2/6"
        );
    }

    fn small() -> impl Strategy<Value = Q23> {
        prop::array::uniform4(-20i64..20).prop_map(|[a, b, c, d]| q(a, b, c, d))
    }

    proptest! {
        #[test]
        fn sign_matches_float(x in small()) {
            let f = x.to_f64();
            prop_assume!(f.abs() > 1e-9 || x.is_zero());
            prop_assert_eq!(x.sign(), if x.is_zero() { 0 } else if f > 0.0 { 1 } else { -1 });
        }

        #[test]
        fn inverse_and_sqrt_round_trip(x in small()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inv().unwrap(), Q23::one());
            let sq = x.square();
            let root = sq.sqrt().unwrap();
            prop_assert!(root == x || root == -x.clone());
        }

        #[test]
        fn enclosure_contains_float(x in small()) {
            let e = x.enclose(64);
            prop_assert!(e.lo_f64() <= x.to_f64() + 1e-9 && x.to_f64() - 1e-9 <= e.hi_f64());
        }
    }
}
