use crate::scalar::Scalar;
use crate::state::STATE_COUNT;

pub(crate) type Square<T> = [[T; STATE_COUNT]; STATE_COUNT];

pub(crate) fn identity<T: Scalar>() -> Square<T> {
    let mut m = [[T::zero(); STATE_COUNT]; STATE_COUNT];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub(crate) fn mul<T: Scalar>(a: &Square<T>, b: &Square<T>) -> Square<T> {
    let mut out = [[T::zero(); STATE_COUNT]; STATE_COUNT];
    for i in 0..STATE_COUNT {
        for k in 0..STATE_COUNT {
            let aik = a[i][k];
            if aik == T::zero() {
                continue;
            }
            for j in 0..STATE_COUNT {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

/// `base^n` by binary exponentiation. No validation.
pub(crate) fn pow<T: Scalar>(base: &Square<T>, mut n: u32) -> Square<T> {
    let mut result = identity();
    let mut square = *base;
    let mut first = true;
    while n > 0 {
        if n & 1 == 1 {
            result = if first { square } else { mul(&result, &square) };
            first = false;
        }
        n >>= 1;
        if n > 0 {
            square = mul(&square, &square);
        }
    }
    result
}

/// Row vector times matrix.
pub(crate) fn vec_mul<T: Scalar>(v: &[T; STATE_COUNT], m: &Square<T>) -> [T; STATE_COUNT] {
    let mut out = [T::zero(); STATE_COUNT];
    for (i, &vi) in v.iter().enumerate() {
        for j in 0..STATE_COUNT {
            out[j] = out[j] + vi * m[i][j];
        }
    }
    out
}

/// Inverse of a dense square matrix by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` when a pivot vanishes.
pub(crate) fn invert<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut work: Vec<Vec<T>> = a.to_vec();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let scale = norm_one(a);
    let tiny = T::epsilon() * scale.max(T::one());

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                work[x][col]
                    .abs()
                    .partial_cmp(&work[y][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if !(work[pivot][col].abs() > tiny) {
            return None;
        }
        work.swap(col, pivot);
        inv.swap(col, pivot);

        let p = work[col][col];
        for j in 0..n {
            work[col][j] = work[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work[row][col];
            if factor == T::zero() {
                continue;
            }
            for j in 0..n {
                work[row][j] = work[row][j] - factor * work[col][j];
                inv[row][j] = inv[row][j] - factor * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Maximum absolute column sum.
pub(crate) fn norm_one<T: Scalar>(a: &[Vec<T>]) -> T {
    let n = a.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| a.iter().map(|row| row[j].abs()).sum::<T>())
        .fold(T::zero(), T::max)
}
