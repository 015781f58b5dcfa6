use super::EstimationError;
use crate::scalar::Scalar;

/// Euclidean projection of `v` onto `{x >= 0, sum x = 1, x_i = 0 off support}`.
///
/// Sort-based: with the supported coordinates sorted in decreasing order
/// `u_1 >= u_2 >= ...`, the threshold is `theta = (sum_{i<=r} u_i - 1) / r`
/// for the largest `r` with `u_r > theta_r`, and `x_i = max(v_i - theta, 0)`.
pub fn project_to_simplex<T: Scalar>(v: &[T], support: &[bool]) -> Result<Vec<T>, EstimationError> {
    if v.len() != support.len() {
        return Err(EstimationError::SupportLength {
            vector: v.len(),
            support: support.len(),
        });
    }
    let mut sorted: Vec<T> = v.iter().zip(support).filter(|(_, &s)| s).map(|(&x, _)| x).collect();
    if sorted.is_empty() {
        return Err(EstimationError::EmptySupport);
    }
    if sorted.iter().any(|x| !x.is_finite()) {
        return Err(EstimationError::NonFinite);
    }
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));

    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (k, &u) in sorted.iter().enumerate() {
        cumulative = cumulative + u;
        let candidate = (cumulative - T::one()) / T::from_usize(k + 1).expect("small count");
        if u > candidate {
            theta = candidate;
        } else {
            break;
        }
    }

    Ok(v.iter()
        .zip(support)
        .map(|(&x, &s)| if s { (x - theta).max(T::zero()) } else { T::zero() })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn already_on_simplex() {
        assert_close(&project_to_simplex(&[0.5, 0.5], &[true, true]).unwrap(), &[0.5, 0.5]);
    }

    #[test]
    fn nearest_vertex() {
        assert_close(&project_to_simplex(&[2.0, 0.0], &[true, true]).unwrap(), &[1.0, 0.0]);
    }

    #[test]
    fn symmetric_point() {
        let third = 1.0 / 3.0;
        assert_close(
            &project_to_simplex(&[0.6, 0.6, 0.6], &[true; 3]).unwrap(),
            &[third, third, third],
        );
    }

    #[test]
    fn off_support_is_zeroed() {
        assert_close(
            &project_to_simplex(&[0.9, 5.0, 0.3], &[true, false, true]).unwrap(),
            &[0.8, 0.0, 0.2],
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            project_to_simplex(&[1.0, 2.0], &[false, false]),
            Err(EstimationError::EmptySupport)
        );
        assert!(matches!(
            project_to_simplex(&[1.0], &[true, true]),
            Err(EstimationError::SupportLength { .. })
        ));
        assert_eq!(
            project_to_simplex(&[f64::NAN, 1.0], &[true, true]),
            Err(EstimationError::NonFinite)
        );
    }

    #[test]
    fn single_precision() {
        let x = project_to_simplex(&[0.2f32, 0.2, 0.2, 0.2], &[true; 4]).unwrap();
        assert!(x.iter().all(|&v| (v - 0.25).abs() < 1e-7));
    }

    /// Brute-force check of the optimality (KKT) conditions: on the support
    /// `x_i > 0 => v_i - x_i = tau` and `x_i = 0 => v_i - x_i <= tau`.
    fn kkt_holds(v: &[f64], support: &[bool], x: &[f64]) -> bool {
        let active: Vec<f64> = (0..v.len())
            .filter(|&i| support[i] && x[i] > 0.0)
            .map(|i| v[i] - x[i])
            .collect();
        let tau = active[0];
        active.iter().all(|t| (t - tau).abs() < 1e-9)
            && (0..v.len())
                .filter(|&i| support[i] && x[i] == 0.0)
                .all(|i| v[i] <= tau + 1e-9)
    }

    proptest! {
        #[test]
        fn projection_properties(
            pairs in prop::collection::vec((-3.0f64..3.0, any::<bool>()), 1..10)
        ) {
            let v: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut support: Vec<bool> = pairs.iter().map(|p| p.1).collect();
            support[0] = true;
            let x = project_to_simplex(&v, &support).unwrap();
            let sum: f64 = x.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(x.iter().all(|&xi| xi >= 0.0));
            prop_assert!(x.iter().zip(&support).all(|(&xi, &s)| s || xi == 0.0));
            prop_assert!(kkt_holds(&v, &support, &x));
            let again = project_to_simplex(&x, &support).unwrap();
            for (a, b) in x.iter().zip(&again) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
