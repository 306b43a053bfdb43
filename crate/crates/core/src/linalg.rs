//! Plane vectors and 2×2 matrices over any [`Scalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn e1() -> Self {
        Self::new(T::one(), T::zero())
    }

    pub fn e2() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(T::from_int(x), T::from_int(y))
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    /// z-component of the 3D cross product.
    pub fn cross(&self, other: &Self) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn to_f64(&self) -> Vec2<f64> {
        Vec2::new(self.x.to_f64(), self.y.to_f64())
    }

    /// True when `other` is a positive multiple of `self` (both nonzero).
    pub fn same_direction(&self, other: &Self) -> bool {
        self.cross(other).is_zero() && self.dot(other) > T::zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl Vec2<Rational> {
    pub fn cast<U: Scalar>(&self) -> Vec2<U> {
        Vec2::new(U::from_rational(&self.x), U::from_rational(&self.y))
    }
}

impl Vec2<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(theta: f64) -> Self {
        Vec2::new(theta.cos(), theta.sin())
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Vec2<T>;
    fn add(self, rhs: Self) -> Self {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Add for &Vec2<T> {
    type Output = Vec2<T>;
    fn add(self, rhs: Self) -> Vec2<T> {
        Vec2::new(self.x.clone() + rhs.x.clone(), self.y.clone() + rhs.y.clone())
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Vec2<T>;
    fn sub(self, rhs: Self) -> Self {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Sub for &Vec2<T> {
    type Output = Vec2<T>;
    fn sub(self, rhs: Self) -> Vec2<T> {
        Vec2::new(self.x.clone() - rhs.x.clone(), self.y.clone() - rhs.y.clone())
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Vec2<T>;
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<T: Scalar> fmt::Display for Vec2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Row-major 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn diag(x: T, y: T) -> Self {
        Self::new(x, T::zero(), T::zero(), y)
    }

    pub fn scalar(k: T) -> Self {
        Self::diag(k.clone(), k)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(T::from_int(a), T::from_int(b), T::from_int(c), T::from_int(d))
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn rot90() -> Self {
        Self::from_ints(0, -1, 1, 0)
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Self::new(
            self.d.clone() / det.clone(),
            -self.b.clone() / det.clone(),
            -self.c.clone() / det.clone(),
            self.a.clone() / det,
        ))
    }

    pub fn apply(&self, v: &Vec2<T>) -> Vec2<T> {
        Vec2::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    pub fn col1(&self) -> Vec2<T> {
        Vec2::new(self.a.clone(), self.c.clone())
    }

    pub fn col2(&self) -> Vec2<T> {
        Vec2::new(self.b.clone(), self.d.clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        Mat2::new(self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.d.to_f64())
    }
}

impl Mat2<Rational> {
    pub fn cast<U: Scalar>(&self) -> Mat2<U> {
        Mat2::new(
            U::from_rational(&self.a),
            U::from_rational(&self.b),
            U::from_rational(&self.c),
            U::from_rational(&self.d),
        )
    }
}

impl Mat2<f64> {
    /// Singular values `(σ_min, σ_max)`.
    pub fn singular_values(&self) -> (f64, f64) {
        let m = &self.transpose() * self;
        let tr = m.trace();
        let det = m.det().max(0.0);
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let big = 0.5 * (tr + disc);
        let small = if big > 0.0 { det / big } else { 0.0 };
        (small.max(0.0).sqrt(), big.max(0.0).sqrt())
    }

    /// Operator norm `σ_max`.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().1
    }
}

impl<T: Scalar> Mul for &Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Self) -> Mat2<T> {
        Mat2::new(
            self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        )
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Self) -> Mat2<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Mul<&Vec2<T>> for &Mat2<T> {
    type Output = Vec2<T>;
    fn mul(self, rhs: &Vec2<T>) -> Vec2<T> {
        self.apply(rhs)
    }
}

impl<T: Scalar> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn inverse_is_exact() {
        let m = Mat2::new(int(1), int(2), int(3), int(7));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(Mat2::<Rational>::from_ints(1, 2, 2, 4).inverse().is_none());
    }

    #[test]
    fn rot90_has_order_four() {
        let r = Mat2::<Rational>::rot90();
        let r4 = &(&r * &r) * &(&r * &r);
        assert!(r4.is_identity());
        assert_eq!(r.apply(&Vec2::e1()), Vec2::e2());
    }

    #[test]
    fn generic_over_floats() {
        let m = Mat2::<f32>::diag(2.0, 0.5);
        assert_eq!(m.det(), 1.0);
        let (lo, hi) = Mat2::<f64>::diag(2.0, 0.5).singular_values();
        assert!((lo - 0.5).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        let q = Mat2::diag(rat(3, 5), int(2)).cast::<f64>();
        assert_eq!(q.a, 0.6);
    }
}

mod serde_impls {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{Mat2, Vec2};
    use crate::scalar::{format_rational, parse_rational, Rational};

    fn parse<E: serde::de::Error>(s: &str) -> Result<Rational, E> {
        parse_rational(s).map_err(E::custom)
    }

    /// `[["a","b"],["c","d"]]` with `"p/q"` entries.
    impl Serialize for Mat2<Rational> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            [
                [format_rational(&self.a), format_rational(&self.b)],
                [format_rational(&self.c), format_rational(&self.d)],
            ]
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Mat2<Rational> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
            if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                return Err(D::Error::custom("expected a 2x2 array of rational strings"));
            }
            Ok(Mat2::new(
                parse(&rows[0][0])?,
                parse(&rows[0][1])?,
                parse(&rows[1][0])?,
                parse(&rows[1][1])?,
            ))
        }
    }

    impl Serialize for Vec2<Rational> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            [format_rational(&self.x), format_rational(&self.y)].serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for Vec2<Rational> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let [x, y]: [String; 2] = Deserialize::deserialize(d)?;
            Ok(Vec2::new(parse(&x)?, parse(&y)?))
        }
    }
}
