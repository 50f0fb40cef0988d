//! Truncated convolution kernels over `BigInt` coefficient slices.

use num_bigint::BigInt;
use num_traits::Zero;

/// Products whose truncated length exceeds this switch to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 512;

const KARATSUBA_BASE: usize = 32;

/// First `n` coefficients of the product `a * b`.
pub fn convolve_truncated(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    if n > KARATSUBA_THRESHOLD && a.len().min(n) > KARATSUBA_BASE && b.len().min(n) > KARATSUBA_BASE
    {
        let mut full = karatsuba(&a[..a.len().min(n)], &b[..b.len().min(n)]);
        full.resize(n, BigInt::zero());
        full
    } else {
        schoolbook(a, b, n)
    }
}

pub fn schoolbook(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Full (untruncated) product, length `a.len() + b.len() - 1`.
pub fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let full_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= KARATSUBA_BASE {
        return schoolbook(a, b, full_len);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));

    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sa = add_slices(a0, a1);
    let sb = add_slices(b0, b1);
    let mut z1 = karatsuba(&sa, &sb);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }

    let mut out = vec![BigInt::zero(); full_len];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + half < full_len {
            out[i + half] += c;
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * half] += c;
    }
    out
}

fn add_slices(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let len = x.len().max(y.len());
    (0..len)
        .map(|i| match (x.get(i), y.get(i)) {
            (Some(p), Some(q)) => p + q,
            (Some(p), None) => p.clone(),
            (None, Some(q)) => q.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn schoolbook_small() {
        let a = big(&[1, -1]);
        let b = big(&[1, 1, 1, 1]);
        assert_eq!(schoolbook(&a, &b, 4), big(&[1, 0, 0, 0]));
    }

    #[test]
    fn karatsuba_empty_and_unit() {
        assert!(karatsuba(&[], &big(&[1])).is_empty());
        assert_eq!(karatsuba(&big(&[3]), &big(&[2, 5])), big(&[6, 15]));
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(
            a in proptest::collection::vec(-1000i64..1000, 1..200),
            b in proptest::collection::vec(-1000i64..1000, 1..200),
        ) {
            let (a, b) = (big(&a), big(&b));
            let n = a.len() + b.len() - 1;
            prop_assert_eq!(karatsuba(&a, &b), schoolbook(&a, &b, n));
        }
    }

    #[test]
    fn threshold_path_matches_schoolbook() {
        let a: Vec<BigInt> = (0..700)
            .map(|i| BigInt::from((i * 37 % 101) - 50))
            .collect();
        let b: Vec<BigInt> = (0..650).map(|i| BigInt::from((i * 53 % 97) - 48)).collect();
        assert_eq!(convolve_truncated(&a, &b, 600), schoolbook(&a, &b, 600));
    }
}
