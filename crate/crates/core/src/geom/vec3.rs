use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use serde::Serialize;

use super::field::Q23;

/// Point or vector with coordinates in Q(√2, √3).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Vec3(pub [Q23; 3]);

impl Vec3 {
    pub fn new(x: Q23, y: Q23, z: Q23) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3::new(Q23::zero(), Q23::zero(), Q23::zero())
    }

    pub fn x(&self) -> &Q23 {
        &self.0[0]
    }

    pub fn y(&self) -> &Q23 {
        &self.0[1]
    }

    pub fn z(&self) -> &Q23 {
        &self.0[2]
    }

    pub fn dot(&self, o: &Self) -> Q23 {
        let mut s = &self.0[0] * &o.0[0];
        s = &s + &(&self.0[1] * &o.0[1]);
        &s + &(&self.0[2] * &o.0[2])
    }

    pub fn norm2(&self) -> Q23 {
        self.dot(self)
    }

    pub fn dist2(&self, o: &Self) -> Q23 {
        (self - o).norm2()
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a1, a2, a3] = &self.0;
        let [b1, b2, b3] = &o.0;
        Vec3::new(
            &(a2 * b3) - &(a3 * b2),
            &(a3 * b1) - &(a1 * b3),
            &(a1 * b2) - &(a2 * b1),
        )
    }

    pub fn scale(&self, k: &Q23) -> Self {
        Vec3(std::array::from_fn(|i| &self.0[i] * k))
    }

    pub fn scale_q(&self, k: &BigRational) -> Self {
        Vec3(std::array::from_fn(|i| self.0[i].scale(k)))
    }

    /// `det[a, b, c] = a · (b × c)`.
    pub fn triple(a: &Self, b: &Self, c: &Self) -> Q23 {
        a.dot(&b.cross(c))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.0[0].to_f64(), self.0[1].to_f64(), self.0[2].to_f64()]
    }
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, o: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|x| -x))
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64, c: i64) -> Vec3 {
        Vec3::new(Q23::int(a), Q23::int(b), Q23::int(c))
    }

    #[test]
    fn cross_and_triple() {
        assert_eq!(v(1, 0, 0).cross(&v(0, 1, 0)), v(0, 0, 1));
        assert_eq!(
            Vec3::triple(&v(1, 0, 0), &v(0, 1, 0), &v(0, 0, 1)),
            Q23::one()
        );
        let s = Vec3::new(Q23::sqrt2(), Q23::sqrt2(), Q23::zero());
        assert_eq!(s.norm2(), Q23::int(4));
        assert_eq!(
            s.dist2(&Vec3::new(Q23::sqrt2(), Q23::zero(), Q23::sqrt2())),
            Q23::int(4)
        );
    }
}
