//! Exact integer helpers: checked binomials and `log2` of big counts.

use crate::error::{Error, Result};

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `C(n, k)`, or `None` when it does not fit in 128 bits.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c = C(n, i); C(n, i+1) = c * (n-i) / (i+1) with the division applied first.
        let num = u128::from(n - i);
        let den = u128::from(i + 1);
        let g = gcd(c, den);
        c = (c / g).checked_mul(num / (den / g))?;
    }
    Some(c)
}

pub fn binomial_checked(n: u64, k: u64) -> Result<u128> {
    binomial(n, k).ok_or(Error::Overflow("binomial coefficient"))
}

/// `C(n, k)` for `k = 0..=n`, built by Pascal's rule.
pub fn binomial_row(n: u64) -> Result<Vec<u128>> {
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        for k in 1..m as usize {
            next.push(
                row[k - 1]
                    .checked_add(row[k])
                    .ok_or(Error::Overflow("binomial row"))?,
            );
        }
        next.push(1);
        row = next;
    }
    Ok(row)
}

pub fn pow2(e: u32) -> Result<u128> {
    1u128
        .checked_shl(e)
        .filter(|_| e < 128)
        .ok_or(Error::Overflow("power of two"))
}

/// `log2(x)` from the bit length and a normalized 64-bit mantissa; `-inf` for 0.
pub fn log2_u128(x: u128) -> f64 {
    if x == 0 {
        return f64::NEG_INFINITY;
    }
    let bits = 128 - x.leading_zeros();
    if bits <= 64 {
        return (x as u64 as f64).log2();
    }
    let shift = bits - 64;
    let mantissa = (x >> shift) as u64;
    f64::from(shift) + (mantissa as f64).log2()
}

/// `log2 C(n, k)` in floating point, for sizes past 128-bit range.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if let Some(c) = binomial(n, k) {
        return log2_u128(c);
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64 / (i + 1) as f64).log2())
        .sum()
}

/// `log2(Σ 2^x_i)` without overflow.
pub fn log2_sum_exp2(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| t.is_finite()).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..=130u64 {
            let row = binomial_row(n.min(120)).unwrap();
            if n <= 120 {
                for (k, &c) in row.iter().enumerate() {
                    assert_eq!(binomial(n, k as u64), Some(c), "C({n},{k})");
                }
            }
        }
        assert_eq!(binomial(5, 7), Some(0));
        assert_eq!(binomial(186, 93), None);
        assert!(binomial(130, 65).is_some());
        assert!(binomial(132, 66).is_none());
        assert_eq!(binomial(130, 2), Some(8385));
    }

    #[test]
    fn log2_precision() {
        assert_eq!(log2_u128(1), 0.0);
        assert_eq!(log2_u128(1 << 100), 100.0);
        let x: u128 = (1 << 90) * 3 + 12345;
        let exact = 90.0 + 3f64.log2();
        assert!(((log2_u128(x) - exact) / exact).abs() < 1e-12);
        assert_eq!(log2_u128(0), f64::NEG_INFINITY);
    }

    #[test]
    fn log_binomial_large() {
        let exact = log2_u128(binomial(100, 50).unwrap());
        assert!((log2_binomial(100, 50) - exact).abs() < 1e-12);
        let big = log2_binomial(1000, 500);
        assert!((big - 994.69).abs() < 0.05, "{big}");
    }

    #[test]
    fn sum_exp() {
        assert!((log2_sum_exp2([3.0, 3.0]) - 4.0).abs() < 1e-12);
        assert_eq!(log2_sum_exp2([]), f64::NEG_INFINITY);
    }

    #[test]
    fn pow2_checked() {
        assert_eq!(pow2(127).unwrap(), 1 << 127);
        assert!(pow2(128).is_err());
    }
}
