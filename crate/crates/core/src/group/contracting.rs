use crate::linalg::Mat2;
use crate::scalar::Scalar;

use super::GroupError;

/// Whether `‖Av‖ < ‖v‖` for every nonzero `v`, i.e. `σ_max(A) < 1`.
///
/// Decided on the characteristic polynomial of `M = AᵀA`: both eigenvalues
/// of `M` lie strictly below one iff `tr M < 2` and `1 − tr M + det M > 0`.
/// No square roots are taken, so the answer is exact for rational input.
pub fn is_contracting<T: Scalar>(a: &Mat2<T>) -> Result<bool, GroupError> {
    if a.det().is_zero() {
        return Err(GroupError::InvalidInput(format!("singular matrix {a}")));
    }
    let m = &a.transpose() * a;
    let tr = m.trace();
    let two = T::from_int(2);
    let shifted = T::one() - tr.clone() + m.det();
    Ok(tr < two && shifted > T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec2;
    use crate::scalar::{int, rat, Rational};

    /// Sampling oracle: largest `‖Av‖` over `n` unit vectors.
    fn sampled_max_stretch(a: &Mat2<Rational>, n: usize) -> f64 {
        let af = a.to_f64();
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                af.apply(&Vec2::from_angle(t)).norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_is_not_contracting() {
        assert!(!is_contracting(&Mat2::<Rational>::identity()).unwrap());
    }

    #[test]
    fn half_identity_contracts() {
        assert!(is_contracting(&Mat2::scalar(rat(1, 2))).unwrap());
    }

    #[test]
    fn stretched_diagonal_does_not_contract() {
        let a = Mat2::diag(int(2), rat(3, 5));
        assert!(!is_contracting(&a).unwrap());
        assert!(sampled_max_stretch(&a, 10_000) >= 1.0);
    }

    #[test]
    fn rotation_is_isometry() {
        assert!(!is_contracting(&Mat2::<Rational>::rot90()).unwrap());
    }

    #[test]
    fn borderline_singular_value_one() {
        // σ_max = 1 exactly: not contracting.
        assert!(!is_contracting(&Mat2::diag(int(1), rat(1, 3))).unwrap());
        assert!(is_contracting(&Mat2::diag(rat(999, 1000), rat(1, 3))).unwrap());
    }

    #[test]
    fn singular_is_rejected() {
        assert!(matches!(
            is_contracting(&Mat2::<Rational>::from_ints(1, 1, 1, 1)),
            Err(GroupError::InvalidInput(_))
        ));
    }

    #[test]
    fn works_for_floats() {
        assert!(is_contracting(&Mat2::<f64>::diag(0.5, 0.9)).unwrap());
        assert!(!is_contracting(&Mat2::<f32>::diag(0.5, 1.1)).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // The exact criterion agrees with unit-vector sampling whenever
            // σ_max is at least 1e-6 away from one.
            #[test]
            fn agrees_with_sampling(a in -40i64..40, b in -40i64..40, c in -40i64..40, d in -40i64..40) {
                let m = Mat2::new(rat(a, 20), rat(b, 20), rat(c, 20), rat(d, 20));
                prop_assume!(!num_traits::Zero::is_zero(&m.det()));
                let sigma = m.to_f64().op_norm();
                prop_assume!((sigma - 1.0).abs() > 1e-6);
                let sampled = sampled_max_stretch(&m, 10_000);
                let delta = 1e-6;
                let by_sampling = sampled < 1.0 - delta;
                prop_assert_eq!(is_contracting(&m).unwrap(), by_sampling);
            }
        }
    }
}
