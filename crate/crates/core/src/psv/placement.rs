use num_bigint::BigInt;

use crate::group::GenSet;
use crate::linalg::Vec2;
use crate::scalar::{ceil_sqrt, Rational, Scalar};
use crate::surface::MnegTable;

use super::PsvError;

/// Where the negative marks `m^{-n}` go on the base plane.
///
/// Mark `n` starts at `(x_n, y_n) = (1, −n·c)` and has holonomy `h_n⁻¹e₁`.
/// With `c = 1 + 2·⌈max_j ‖h_j⁻¹e₁‖⌉` each mark stays inside its own open
/// horizontal strip of half-width `c/2` below `y = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementParams {
    pub strip_gap: Rational,
    pub starts: Vec<Vec2<Rational>>,
}

impl PlacementParams {
    pub fn for_generators(h: &GenSet) -> Self {
        let reach = h
            .indices()
            .map(|j| {
                let inv = h.generator(h.inverse_index(j));
                ceil_sqrt(&inv.col1().norm_sq())
            })
            .max()
            .unwrap_or_else(|| BigInt::from(0));
        let strip_gap = Rational::from_integer(BigInt::from(1) + BigInt::from(2) * reach);
        let starts = h
            .indices()
            .map(|n| Vec2::new(Rational::from_int(1), -strip_gap.clone() * Rational::from_int(n as i64)))
            .collect();
        Self { strip_gap, starts }
    }
}

/// Whether the closed segments `ab` and `cd` share a point (exact).
pub(crate) fn segments_meet(a: &Vec2<Rational>, b: &Vec2<Rational>, c: &Vec2<Rational>, d: &Vec2<Rational>) -> bool {
    let orient = |p: &Vec2<Rational>, q: &Vec2<Rational>, r: &Vec2<Rational>| (q - p).cross(&(r - p));
    let zero = Rational::from_int(0);
    let sign = |x: Rational| (x > zero) as i8 - (x < zero) as i8;
    let within = |p: &Vec2<Rational>, q: &Vec2<Rational>, r: &Vec2<Rational>| {
        let (lo_x, hi_x) = if p.x <= q.x { (&p.x, &q.x) } else { (&q.x, &p.x) };
        let (lo_y, hi_y) = if p.y <= q.y { (&p.y, &q.y) } else { (&q.y, &p.y) };
        &r.x >= lo_x && &r.x <= hi_x && &r.y >= lo_y && &r.y <= hi_y
    };
    let (o1, o2) = (sign(orient(a, b, c)), sign(orient(a, b, d)));
    let (o3, o4) = (sign(orient(c, d, a)), sign(orient(c, d, b)));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within(a, b, c))
        || (o2 == 0 && within(a, b, d))
        || (o3 == 0 && within(c, d, a))
        || (o4 == 0 && within(c, d, b))
}

/// Segments `m^{-n}` for `n = 1..=J`, with disjointness verified exactly.
pub fn place_negative_marks(h: &GenSet) -> Result<MnegTable, PsvError> {
    let params = PlacementParams::for_generators(h);
    let segments: Vec<(Vec2<Rational>, Vec2<Rational>)> = h
        .indices()
        .zip(&params.starts)
        .map(|(n, start)| {
            let step = h.generator(h.inverse_index(n)).col1();
            (start.clone(), start + &step)
        })
        .collect();
    let zero = Rational::from_int(0);
    for (k, (p, q)) in segments.iter().enumerate() {
        // M and every M^j live on rows y ≥ 0.
        if p.y >= zero || q.y >= zero {
            return Err(PsvError::Placement(format!("negative mark {} reaches y ≥ 0", k + 1)));
        }
        // Reference segments t1, t2 on the y-axis.
        for (a, b) in [((0, 1), (0, 2)), ((0, -1), (0, -2))] {
            if segments_meet(p, q, &Vec2::from_ints(a.0, a.1), &Vec2::from_ints(b.0, b.1)) {
                return Err(PsvError::Placement(format!("negative mark {} meets a reference segment", k + 1)));
            }
        }
        for (l, (r, s)) in segments.iter().enumerate().skip(k + 1) {
            if segments_meet(p, q, r, s) {
                return Err(PsvError::Placement(format!("negative marks {} and {} meet", k + 1, l + 1)));
            }
        }
    }
    Ok(MnegTable::new(segments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat2;
    use crate::scalar::{int, rat};

    #[test]
    fn rotation_example() {
        let h = GenSet::validate(&[Mat2::rot90()]).unwrap();
        let table = place_negative_marks(&h).unwrap();
        assert_eq!(table.len(), 2);
        // h_1⁻¹ = rot270 sends e1 to -e2; c = 1 + 2·1 = 3.
        assert_eq!(table.get(1).unwrap(), &(Vec2::from_ints(1, -3), Vec2::from_ints(1, -4)));
        // h_2⁻¹ = rot90 sends e1 to e2.
        assert_eq!(table.get(2).unwrap(), &(Vec2::from_ints(1, -6), Vec2::from_ints(1, -5)));
        assert!(table.iter().all(|(p, q)| p.y < int(0) && q.y < int(0)));
    }

    #[test]
    fn long_holonomy_widens_strips() {
        let h = GenSet::validate(&[Mat2::from_ints(1, 0, 2, 1), Mat2::from_ints(1, 2, 0, 1)]).unwrap();
        let params = PlacementParams::for_generators(&h);
        // ‖(1, ∓2)‖ = √5, ceiling 3.
        assert_eq!(params.strip_gap, int(7));
        assert_eq!(place_negative_marks(&h).unwrap().len(), 4);
    }

    #[test]
    fn intersection_predicate() {
        let p = |x: i64, y: i64| Vec2::<Rational>::from_ints(x, y);
        assert!(segments_meet(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(segments_meet(&p(0, 0), &p(1, 0), &p(1, 0), &p(2, 0)));
        assert!(!segments_meet(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)));
        assert!(!segments_meet(&p(0, 0), &p(1, 1), &p(1, 0), &p(2, 0)));
        let half = Vec2::new(rat(1, 2), rat(1, 2));
        assert!(segments_meet(&p(0, 0), &p(1, 1), &half, &p(1, 0)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn strips_are_disjoint(a in 1i64..6, b in -5i64..6, d in 1i64..6, c in -5i64..6) {
                let m = Mat2::from_ints(a, b, c, d);
                prop_assume!(m.det() > int(0));
                let Ok(h) = GenSet::validate(&[m]) else { return Ok(()); };
                let table = place_negative_marks(&h).unwrap();
                prop_assert_eq!(table.len(), h.len());
            }
        }
    }
}
