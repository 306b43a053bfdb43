//! Closed-form mark families and their inverses.

use crate::linalg::Vec2;
use crate::scalar::{Rational, Scalar};

use super::sheet::{Family, SheetKind, Side};

/// Which end of an oriented mark `p → q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Start,
    Finish,
}

/// Geometry of one family, indexed by `i ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape<T> {
    /// Horizontal unit segments `[offset + period·i, offset + period·i + 1] × {y}`.
    Row { y: T, offset: T, period: T },
    /// Horizontal unit segments `[x0, x0 + 1] × {y0 + period·i}`.
    Stack { x0: T, y0: T, period: T },
    /// A single segment `p → q`.
    Single { p: Vec2<T>, q: Vec2<T> },
}

/// Endpoints of the negative marks `m^{-n}`, one per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MnegTable {
    segments: Vec<(Vec2<Rational>, Vec2<Rational>)>,
}

impl MnegTable {
    pub fn new(segments: Vec<(Vec2<Rational>, Vec2<Rational>)>) -> Self {
        Self { segments }
    }

    /// Segment for generator `n` (1-based).
    pub fn get(&self, n: usize) -> Option<&(Vec2<Rational>, Vec2<Rational>)> {
        n.checked_sub(1).and_then(|k| self.segments.get(k))
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Vec2<Rational>, Vec2<Rational>)> {
        self.segments.iter()
    }
}

fn v<T: Scalar>(x: i64, y: i64) -> Vec2<T> {
    Vec2::from_ints(x, y)
}

/// Shape of a family; `None` for a negative mark missing from the table.
pub fn family_shape<T: Scalar>(family: Family, mneg: &MnegTable) -> Option<Shape<T>> {
    let row = |y: i64, offset: i64, period: i64| Shape::Row {
        y: T::from_int(y),
        offset: T::from_int(offset),
        period: T::from_int(period),
    };
    let single = |p: Vec2<T>, q: Vec2<T>| Shape::Single { p, q };
    Some(match family {
        Family::McheckJ(_) => row(0, 0, 4),
        Family::L => row(0, 2, 4),
        Family::Lprime => Shape::Stack {
            x0: T::zero(),
            y0: T::one(),
            period: T::from_int(2),
        },
        Family::HjCheck(_) => single(v(0, 2), v(1, 2)),
        Family::M | Family::Mtilde => row(0, -1, 4),
        Family::Mj(j) => row(j as i64, -1, 2),
        Family::Mneg(n) => {
            let (p, q) = mneg.get(n)?;
            single(p.cast(), q.cast())
        }
        Family::T1 | Family::Ttilde1 => single(v(0, 1), v(0, 2)),
        Family::T2 | Family::Ttilde2 => single(v(0, -1), v(0, -2)),
    })
}

impl<T: Scalar> Shape<T> {
    /// Oriented endpoints of member `i`.
    pub fn segment(&self, i: u64) -> (Vec2<T>, Vec2<T>) {
        let i = T::from_int(i as i64);
        match self {
            Shape::Row { y, offset, period } => {
                let x = offset.clone() + period.clone() * i;
                (
                    Vec2::new(x.clone(), y.clone()),
                    Vec2::new(x + T::one(), y.clone()),
                )
            }
            Shape::Stack { x0, y0, period } => {
                let y = y0.clone() + period.clone() * i;
                (
                    Vec2::new(x0.clone(), y.clone()),
                    Vec2::new(x0.clone() + T::one(), y),
                )
            }
            Shape::Single { p, q } => (p.clone(), q.clone()),
        }
    }

    /// Index of the member whose closed segment lies within `tol` of `x`,
    /// solved arithmetically from the family formula.
    pub fn locate(&self, x: &Vec2<T>, tol: &T) -> Option<u64> {
        match self {
            Shape::Row { y, offset, period } => {
                if (x.y.clone() - y.clone()).abs() > *tol {
                    return None;
                }
                let i = ((x.x.clone() - offset.clone() + tol.clone()) / period.clone()).floor_int();
                if i < 1 {
                    return None;
                }
                let (p, q) = self.segment(i as u64);
                (x.x >= p.x.clone() - tol.clone() && x.x <= q.x.clone() + tol.clone()).then_some(i as u64)
            }
            Shape::Stack { x0, y0, period } => {
                if x.x < x0.clone() - tol.clone() || x.x > x0.clone() + T::one() + tol.clone() {
                    return None;
                }
                let i = ((x.y.clone() - y0.clone()) / period.clone() + T::half()).floor_int();
                if i < 1 {
                    return None;
                }
                let row_y = y0.clone() + period.clone() * T::from_int(i);
                ((x.y.clone() - row_y).abs() <= *tol).then_some(i as u64)
            }
            Shape::Single { p, q } => {
                let d = q - p;
                let len_sq = d.norm_sq();
                let mut t = (x - p).dot(&d) / len_sq;
                if t < T::zero() {
                    t = T::zero();
                } else if t > T::one() {
                    t = T::one();
                }
                let closest = p + &d.scale(&t);
                ((x - &closest).norm_sq() <= tol.clone() * tol.clone()).then_some(1)
            }
        }
    }
}

/// Endpoints of member `index` of `family`.
pub fn mark_endpoints<T: Scalar>(family: Family, index: u64, mneg: &MnegTable) -> Option<(Vec2<T>, Vec2<T>)> {
    family_shape::<T>(family, mneg).map(|s| s.segment(index))
}

/// The mark on a sheet of `kind` whose closed segment contains `x`.
///
/// On the cover the marks live on fold 0 only; callers handle the fold.
pub fn locate_mark<T: Scalar>(
    kind: SheetKind,
    x: &Vec2<T>,
    num_generators: usize,
    mneg: &MnegTable,
    tol: &T,
) -> Option<(Family, u64)> {
    Family::on_sheet(kind, num_generators).into_iter().find_map(|family| {
        family_shape::<T>(family, mneg)
            .and_then(|shape| shape.locate(x, tol))
            .map(|i| (family, i))
    })
}

/// Side of the oriented segment `p → q` on which `x` lies; `None` if collinear.
pub fn side_of<T: Scalar>(p: &Vec2<T>, q: &Vec2<T>, x: &Vec2<T>) -> Option<Side> {
    let c = (q - p).cross(&(x - p));
    if c > T::zero() {
        Some(Side::Left)
    } else if c < T::zero() {
        Some(Side::Right)
    } else {
        None
    }
}

/// Affine parameter of the projection of `x` onto `p → q`.
pub fn segment_param<T: Scalar>(p: &Vec2<T>, q: &Vec2<T>, x: &Vec2<T>) -> T {
    let d = q - p;
    (x - p).dot(&d) / d.norm_sq()
}

impl Shape<f64> {
    /// Members with an endpoint inside the box `[lo, hi]`, as `(i, end, point)`.
    ///
    /// Enumeration is bounded by the box, never by the family.
    pub fn endpoints_in_box(&self, lo: &Vec2<f64>, hi: &Vec2<f64>) -> Vec<(u64, End, Vec2<f64>)> {
        let inside = |p: &Vec2<f64>| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
        let range = match self {
            Shape::Row { y, offset, period } => {
                if *y < lo.y || *y > hi.y {
                    return Vec::new();
                }
                ((lo.x - offset - 1.0) / period).floor()..=((hi.x - offset) / period).ceil()
            }
            Shape::Stack { y0, period, .. } => ((lo.y - y0) / period).floor()..=((hi.y - y0) / period).ceil(),
            Shape::Single { .. } => 1.0..=1.0,
        };
        let (a, b) = (range.start().max(1.0), *range.end());
        if !(b >= a) {
            return Vec::new();
        }
        assert!(b - a < 1e7, "endpoint enumeration box too large");
        let mut out = Vec::new();
        for i in (a as u64)..=(b as u64) {
            let (p, q) = self.segment(i);
            if inside(&p) {
                out.push((i, End::Start, p));
            }
            if inside(&q) {
                out.push((i, End::Finish, q));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn table() -> MnegTable {
        MnegTable::new(vec![(Vec2::from_ints(1, -3), Vec2::from_ints(1, -4))])
    }

    fn ends(f: Family, i: u64) -> (Vec2<Rational>, Vec2<Rational>) {
        mark_endpoints(f, i, &table()).unwrap()
    }

    #[test]
    fn closed_form_endpoints() {
        assert_eq!(ends(Family::McheckJ(1), 1), (Vec2::from_ints(4, 0), Vec2::from_ints(5, 0)));
        assert_eq!(ends(Family::M, 1), (Vec2::from_ints(3, 0), Vec2::from_ints(4, 0)));
        assert_eq!(ends(Family::Lprime, 2), (Vec2::from_ints(0, 5), Vec2::from_ints(1, 5)));
        assert_eq!(ends(Family::L, 1), (Vec2::from_ints(6, 0), Vec2::from_ints(7, 0)));
        assert_eq!(ends(Family::HjCheck(1), 1), (Vec2::from_ints(0, 2), Vec2::from_ints(1, 2)));
        assert_eq!(ends(Family::Mj(3), 2), (Vec2::from_ints(3, 3), Vec2::from_ints(4, 3)));
        assert_eq!(ends(Family::T2, 1), (Vec2::from_ints(0, -1), Vec2::from_ints(0, -2)));
        assert_eq!(ends(Family::Mneg(1), 1), (Vec2::from_ints(1, -3), Vec2::from_ints(1, -4)));
        assert!(mark_endpoints::<Rational>(Family::Mneg(2), 1, &table()).is_none());
    }

    #[test]
    fn locate_examples() {
        let zero = int(0);
        let base = SheetKind::Base;
        let at = |x: Rational, y: Rational| Vec2::new(x, y);
        assert_eq!(locate_mark(base, &at(rat(7, 2), int(0)), 1, &table(), &zero), Some((Family::M, 1)));
        assert_eq!(locate_mark(base, &at(rat(3, 2), int(1)), 1, &table(), &zero), Some((Family::Mj(1), 1)));
        assert_eq!(locate_mark(base, &at(int(0), int(5)), 1, &table(), &zero), None);
        assert_eq!(locate_mark(base, &at(int(1), rat(-7, 2)), 1, &table(), &zero), Some((Family::Mneg(1), 1)));
        assert_eq!(locate_mark(base, &at(int(0), rat(3, 2)), 1, &table(), &zero), Some((Family::T1, 1)));
        // Between two members of the same row.
        assert_eq!(locate_mark(base, &at(rat(9, 2), int(0)), 1, &table(), &zero), None);
        // Indices start at 1: x = -1/2 would be member 0 of M.
        assert_eq!(locate_mark(base, &at(rat(-1, 2), int(0)), 1, &table(), &zero), None);
    }

    #[test]
    fn sides() {
        let p = Vec2::<f64>::new(0.0, 0.0);
        let q = Vec2::new(1.0, 0.0);
        assert_eq!(side_of(&p, &q, &Vec2::new(0.5, 1.0)), Some(Side::Left));
        assert_eq!(side_of(&p, &q, &Vec2::new(0.5, -1.0)), Some(Side::Right));
        assert_eq!(side_of(&p, &q, &Vec2::new(2.0, 0.0)), None);
    }

    #[test]
    fn box_enumeration() {
        let m = family_shape::<f64>(Family::M, &table()).unwrap();
        let found = m.endpoints_in_box(&Vec2::new(-10.0, -1.0), &Vec2::new(8.5, 1.0));
        let xs: Vec<f64> = found.iter().map(|e| e.2.x).collect();
        assert_eq!(xs, vec![3.0, 4.0, 7.0, 8.0]);
        let lp = family_shape::<f64>(Family::Lprime, &table()).unwrap();
        assert_eq!(lp.endpoints_in_box(&Vec2::new(-1.0, 0.0), &Vec2::new(0.5, 6.0)).len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn families() -> Vec<Family> {
            let mut v = Family::on_sheet(SheetKind::Base, 1);
            v.extend(Family::on_sheet(SheetKind::Cover, 1));
            v.extend(Family::on_sheet(SheetKind::Buffer1(1), 1));
            v.extend(Family::on_sheet(SheetKind::Buffer2(1), 1));
            v
        }

        fn kind_of(f: Family) -> SheetKind {
            SheetKind::all(1).into_iter().find(|k| f.admissible_on(*k)).unwrap()
        }

        #[test]
        fn locate_inverts_endpoints_exhaustively() {
            let zero = int(0);
            for f in families() {
                let top = if f.is_singleton() { 1 } else { 100 };
                for i in 1..=top {
                    let (p, q) = ends(f, i);
                    let mid = (&p + &q).scale(&rat(1, 2));
                    assert_eq!(locate_mark(kind_of(f), &mid, 1, &table(), &zero), Some((f, i)), "{f:?} {i}");
                }
            }
        }

        proptest! {
            #[test]
            fn locate_inverts_endpoints_float(i in 1u64..5000, t in 0.01f64..0.99) {
                for f in families() {
                    let i = if f.is_singleton() { 1 } else { i };
                    let (p, q) = mark_endpoints::<f64>(f, i, &table()).unwrap();
                    let x = &p + &(&q - &p).scale(&t);
                    prop_assert_eq!(locate_mark(kind_of(f), &x, 1, &table(), &1e-9), Some((f, i)));
                }
            }
        }
    }
}
