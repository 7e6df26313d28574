//! Ramanujan's τ from `Δ(q) = q ∏ (1 − qⁿ)²⁴`.
//!
//! `∏(1 − qⁿ)` is expanded through Euler's pentagonal series and raised to
//! the 24th power with exact wide integers. Only τ(n) itself has to fit in
//! `i128`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Coefficients of `∏_{n≥1} (1 − xⁿ)` up to `x^len−1`, from
/// `Σ_{k∈ℤ} (−1)^k x^{k(3k−1)/2}`.
pub fn euler_product_series(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    if len == 0 {
        return out;
    }
    out[0] = 1;
    for k in 1usize.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let (lo, hi) = (k * (3 * k - 1) / 2, k * (3 * k + 1) / 2);
        if lo >= len {
            break;
        }
        out[lo] += sign;
        if hi < len {
            out[hi] += sign;
        }
    }
    out
}

fn mul_truncated(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    let nz_b: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &nz_b {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// `τ(0), τ(1), …, τ(bound)` with `τ(0) = 0`.
pub fn ramanujan_tau(bound: usize) -> Result<Vec<i128>> {
    // τ(n) is the coefficient of x^{n−1} in ∏(1 − xⁿ)²⁴.
    let len = bound.max(1);
    let e: Vec<BigInt> = euler_product_series(len).into_iter().map(BigInt::from).collect();
    let e2 = mul_truncated(&e, &e, len);
    let e4 = mul_truncated(&e2, &e2, len);
    let e8 = mul_truncated(&e4, &e4, len);
    let e16 = mul_truncated(&e8, &e8, len);
    let e24 = mul_truncated(&e16, &e8, len);
    let mut tau = Vec::with_capacity(bound + 1);
    tau.push(0);
    for (n, c) in e24.iter().enumerate().take(bound) {
        let v = c.to_i128().ok_or_else(|| Error::Overflow(format!("tau({}) exceeds i128", n + 1)))?;
        tau.push(v);
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagonal_series_matches_direct_product() {
        let len = 60;
        let mut direct = vec![0i64; len];
        direct[0] = 1;
        for n in 1..len {
            for i in (n..len).rev() {
                direct[i] -= direct[i - n];
            }
        }
        assert_eq!(euler_product_series(len), direct);
    }

    #[test]
    fn known_values() {
        let t = ramanujan_tau(12).unwrap();
        assert_eq!(t[..], [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]);
    }

    #[test]
    fn multiplicativity_and_hecke() {
        let t = ramanujan_tau(200).unwrap();
        assert_eq!(t[6], t[2] * t[3]);
        assert_eq!(t[35], t[5] * t[7]);
        for p in [2usize, 3, 5, 7, 11, 13] {
            let p11 = (p as i128).pow(11);
            assert_eq!(t[p * p], t[p] * t[p] - p11);
        }
    }

    #[test]
    fn deligne_bound() {
        let t = ramanujan_tau(100).unwrap();
        for p in crate::arith::sieve_primes(100).unwrap().primes() {
            let bound = 2.0 * (*p as f64).powf(5.5);
            assert!((t[*p as usize] as f64).abs() <= bound);
        }
    }
}
