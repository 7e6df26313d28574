//! Exact integer primitives: primes, factorization, quadratic symbols and
//! Dirichlet characters of prime modulus.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::domain;
use crate::math::{cos, ln, sin, PI};
use crate::Result;

/// Primes up to a limit with cached natural logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    log_p: Vec<f64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn logs(&self) -> &[f64] {
        &self.log_p
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `(p, log p)` pairs with `p <= bound`.
    pub fn iter_upto(&self, bound: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.primes
            .iter()
            .zip(&self.log_p)
            .take_while(move |(&p, _)| p <= bound)
            .map(|(&p, &l)| (p, l))
    }

    /// Primes `<= bound` (bound may exceed the table limit; the table is
    /// then truncated at its limit).
    pub fn upto(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }
}

/// Sieve of Eratosthenes over odd numbers, one bit per candidate.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(domain!("sieve limit must be at least 2, got {limit}"));
    }
    // bit i stands for 2i + 1
    let n_odd = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![0u64; n_odd.div_ceil(64)];
    let set = |bits: &mut [u64], i: usize| bits[i / 64] |= 1 << (i % 64);
    let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !get(&composite, i) {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < n_odd {
                set(&mut composite, j);
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    for i in 1..n_odd {
        let n = 2 * i as u64 + 1;
        if n > limit {
            break;
        }
        if !get(&composite, i) {
            primes.push(n);
        }
    }
    let log_p = primes.iter().map(|&p| ln(p as f64)).collect();
    Ok(PrimeTable { limit, primes, log_p })
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(a: u128, b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    let mut a = a >> a.trailing_zeros();
    let mut b = b;
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Prime factorization `[(p, e)]`, ascending in `p`. `factor(1)` is empty.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut found = Vec::new();
    if n <= 1 {
        return Vec::new();
    }
    let mut rest = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while rest.is_multiple_of(p) {
            found.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            found.push(m);
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }
    found.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in found {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q, mut r) = (2u64, 2u64, 1u64, 1u64, 1u64);
        let mut ys = 2u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Kronecker symbol `(a/n)`, the fully multiplicative extension of the
/// Legendre symbol.
pub fn kronecker_symbol(a: i64, n: i64) -> Result<i8> {
    if n == 0 {
        return Err(domain!("kronecker symbol undefined for n = 0"));
    }
    let mut sign = 1i8;
    let mut n = n as i128;
    let a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= twos;
    }
    Ok(sign * jacobi(a.rem_euclid(n), n))
}

// Jacobi symbol for odd positive n and 0 <= a < n.
fn jacobi(mut a: i128, mut n: i128) -> i8 {
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbols `(x/p)` for `x = 0..p`, for an odd prime `p`.
pub fn legendre_table(p: u64) -> Vec<i8> {
    let mut table = vec![-1i8; p as usize];
    table[0] = 0;
    for x in 1..p {
        table[mul_mod(x, x, p) as usize] = 1;
    }
    table
}

/// Smallest primitive root of the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    if p == 2 {
        return Ok(1);
    }
    let order_factors: Vec<u64> = factor(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| order_factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or_else(|| domain!("no primitive root for {p}"))
}

/// A Dirichlet character of prime modulus.
///
/// Values are kept as exact root-of-unity exponents: residue `a` maps to
/// `exp(2πi·k/order)` with `k = exponent(a)`, or to 0 when `m | a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    label: u64,
    exponents: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Index `j` of the character `g^k ↦ e^{2πi jk/(m-1)}` for the smallest
    /// primitive root `g`.
    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    /// Root-of-unity exponent of `χ(a)`, `None` when `χ(a) = 0`.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        self.exponents[r]
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.exponent(a) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k, self.order),
        }
    }

    /// `Re χ(a)^ν`.
    pub fn real_power(&self, a: i64, nu: u32) -> f64 {
        match self.exponent(a) {
            None => 0.0,
            Some(k) => {
                let e = (k * nu as u64) % self.order;
                root_of_unity(e, self.order).re
            }
        }
    }
}

fn root_of_unity(k: u64, order: u64) -> Complex64 {
    match (4 * k) % (4 * order) {
        0 => return Complex64::new(1.0, 0.0),
        x if x == 2 * order => return Complex64::new(-1.0, 0.0),
        x if x == order => return Complex64::new(0.0, 1.0),
        x if x == 3 * order => return Complex64::new(0.0, -1.0),
        _ => {}
    }
    let theta = 2.0 * PI * k as f64 / order as f64;
    Complex64::new(cos(theta), sin(theta))
}

/// All `m - 1` characters modulo the prime `m >= 3`, trivial first.
pub fn characters_mod(m: u64) -> Result<Vec<DirichletCharacter>> {
    if m < 3 || !is_prime(m) {
        return Err(domain!("character modulus must be a prime >= 3, got {m}"));
    }
    let g = primitive_root(m)?;
    let phi = m - 1;
    // discrete log table: dlog[g^k] = k
    let mut dlog = vec![None; m as usize];
    let mut x = 1u64;
    for k in 0..phi {
        dlog[x as usize] = Some(k);
        x = mul_mod(x, g, m);
    }
    let chars = (0..phi)
        .map(|j| {
            let order = phi / gcd_u64(j, phi);
            let step = phi / order;
            let exponents = dlog.iter().map(|d| d.map(|k| (j * k % phi) / step)).collect();
            DirichletCharacter { modulus: m, order, label: j, exponents }
        })
        .collect();
    Ok(chars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(n: u64) -> Vec<u64> {
        (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
    }

    #[test]
    fn sieve_small_cases() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(3).unwrap().primes(), &[2, 3]);
        assert!(sieve_primes(1).is_err());
        assert!(sieve_primes(0).is_err());
    }

    #[test]
    fn sieve_matches_trial_division_and_pi_table() {
        let t = sieve_primes(10_000).unwrap();
        assert_eq!(t.len(), 1229);
        assert_eq!(t.primes(), trial_division_primes(10_000).as_slice());
        for (limit, pi) in [(10, 4), (100, 25), (1000, 168), (10_000, 1229), (100_000, 9592)] {
            assert_eq!(sieve_primes(limit).unwrap().len(), pi, "pi({limit})");
        }
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
        assert!(t.primes().iter().all(|&p| is_prime(p)));
        assert!((t.logs()[3] - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn upto_and_iter_respect_bound() {
        let t = sieve_primes(100).unwrap();
        assert_eq!(t.upto(10), &[2, 3, 5, 7]);
        assert_eq!(t.upto(1000).len(), 25);
        assert_eq!(t.iter_upto(5).count(), 3);
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [1u64, 2, 12, 496, 7936, 1_000_000_007 * 998_244_353, 600_851_475_143, u64::MAX] {
            let f = factor(n);
            let prod: u128 = f.iter().map(|&(p, e)| (p as u128).pow(e)).product();
            assert_eq!(prod, n as u128);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        assert_eq!(factor(496), vec![(2, 4), (31, 1)]);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(4, 7).unwrap(), 1);
        assert_eq!(kronecker_symbol(3, 5).unwrap(), -1);
        assert_eq!(kronecker_symbol(5, 2).unwrap(), -1);
        assert_eq!(kronecker_symbol(8, 3).unwrap(), -1);
        assert_eq!(kronecker_symbol(-1, -1).unwrap(), -1);
        assert!(kronecker_symbol(3, 0).is_err());
    }

    #[test]
    fn kronecker_agrees_with_square_testing() {
        let primes = sieve_primes(200).unwrap();
        for &p in primes.primes().iter().skip(1) {
            let squares: Vec<bool> = {
                let mut s = vec![false; p as usize];
                for x in 1..p {
                    s[(x * x % p) as usize] = true;
                }
                s
            };
            let table = legendre_table(p);
            for a in 0..p {
                let expected = if a == 0 { 0 } else if squares[a as usize] { 1 } else { -1 };
                assert_eq!(kronecker_symbol(a as i64, p as i64).unwrap(), expected, "({a}/{p})");
                assert_eq!(table[a as usize], expected);
            }
        }
    }

    #[test]
    fn characters_mod_small_moduli() {
        let c3 = characters_mod(3).unwrap();
        assert_eq!(c3.len(), 2);
        assert!(c3[0].is_trivial());
        assert!(c3[1].is_quadratic());
        assert_eq!(c3[1].value(2), Complex64::new(-1.0, 0.0));

        let c5 = characters_mod(5).unwrap();
        assert_eq!(c5.iter().filter(|c| c.order() == 2).count(), 1);
        assert_eq!(c5.iter().filter(|c| c.order() == 4).count(), 2);

        assert!(characters_mod(9).is_err());
        assert!(characters_mod(2).is_err());
    }

    #[test]
    fn characters_are_multiplicative_and_orthogonal() {
        for m in [3u64, 5, 7, 11, 13, 101] {
            let chars = characters_mod(m).unwrap();
            assert_eq!(chars.len() as u64, m - 1);
            for chi in &chars {
                assert_eq!(chi.value(1), Complex64::new(1.0, 0.0));
                assert_eq!(chi.value(0), Complex64::new(0.0, 0.0));
                for a in 1..m as i64 {
                    for b in 1..m as i64 {
                        let lhs = chi.value(a * b);
                        let rhs = chi.value(a) * chi.value(b);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                    // value is an order-th root of unity
                    let k = chi.exponent(a).unwrap();
                    assert!(k < chi.order());
                }
            }
            for a in 2..m as i64 {
                let s: Complex64 = chars.iter().map(|c| c.value(a)).sum();
                assert!(s.norm() < 1e-12, "orthogonality failed at m={m}, a={a}");
            }
        }
    }
}
