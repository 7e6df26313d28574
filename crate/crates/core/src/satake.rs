//! Local coefficients `b(p^ν)` (power sums of Satake parameters), Hecke
//! recursions, symmetric-power lifts and Rankin–Selberg products.
//!
//! Self-dual data with real coefficients is the working representation;
//! [`SatakeSpectrum`] holds explicit complex parameters and serves as the
//! reference for checking the real recursions.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::domain;
use crate::math::{abs, sqrt};
use crate::Result;

/// Default number of prime powers carried per prime.
pub const DEFAULT_NU_MAX: usize = 10;

/// `b(p), b(p²), …, b(p^{ν_max})` at one prime for one L-function of
/// degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCoefficients {
    prime: u64,
    degree: u32,
    b: Vec<f64>,
}

impl LocalCoefficients {
    pub fn new(prime: u64, degree: u32, b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(domain!("local coefficients need at least b(p)"));
        }
        if degree == 0 {
            return Err(domain!("degree must be positive"));
        }
        Ok(Self { prime, degree, b })
    }

    /// Coefficients at a ramified prime where all parameters vanish.
    pub fn ramified(prime: u64, degree: u32, nu_max: usize) -> Self {
        Self { prime, degree, b: vec![0.0; nu_max.max(1)] }
    }

    /// The degree-1 trivial factor, `b(p^ν) = 1`.
    pub fn trivial(prime: u64, nu_max: usize) -> Self {
        Self { prime, degree: 1, b: vec![1.0; nu_max.max(1)] }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nu_max(&self) -> usize {
        self.b.len()
    }

    /// `b(p^ν)` for `1 <= ν <= nu_max`.
    pub fn get(&self, nu: usize) -> f64 {
        assert!(nu >= 1 && nu <= self.b.len(), "ν = {nu} outside 1..={}", self.b.len());
        self.b[nu - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.b
    }

    /// `|b(p^ν)| <= n` for every stored ν (holds under Ramanujan).
    pub fn satisfies_ramanujan(&self, slack: f64) -> bool {
        self.b.iter().all(|x| abs(*x) <= self.degree as f64 + slack)
    }
}

/// Explicit Satake parameters `{α_j}` at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct SatakeSpectrum {
    prime: u64,
    params: Vec<Complex64>,
}

impl SatakeSpectrum {
    pub fn new(prime: u64, params: Vec<Complex64>) -> Self {
        Self { prime, params }
    }

    /// `{α, α⁻¹}` with `α + α⁻¹ = a_p` (unitary when `|a_p| <= 2`).
    pub fn from_hecke(prime: u64, a_p: f64) -> Self {
        let disc = Complex64::new(a_p * a_p - 4.0, 0.0).sqrt();
        let alpha = (Complex64::new(a_p, 0.0) + disc) / 2.0;
        Self { prime, params: vec![alpha, alpha.inv()] }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn degree(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[Complex64] {
        &self.params
    }

    /// `Σ_j α_j^ν`.
    pub fn power_sum(&self, nu: i32) -> Complex64 {
        self.params.iter().map(|a| a.powi(nu)).sum()
    }

    /// All products `α_i β_j`.
    pub fn rankin_product(&self, other: &SatakeSpectrum) -> Result<SatakeSpectrum> {
        if self.prime != other.prime {
            return Err(domain!("prime mismatch: {} vs {}", self.prime, other.prime));
        }
        let params = self.params.iter().flat_map(|a| other.params.iter().map(move |b| a * b)).collect();
        Ok(SatakeSpectrum { prime: self.prime, params })
    }

    /// Real parts of the power sums as local coefficients.
    pub fn to_local(&self, nu_max: usize) -> LocalCoefficients {
        let b = (1..=nu_max.max(1)).map(|nu| self.power_sum(nu as i32).re).collect();
        LocalCoefficients { prime: self.prime, degree: self.params.len() as u32, b }
    }
}

/// `a(p^n)` for `n = 0..=n_max` from `a(p⁰) = 1`, `a(p) = a_p`,
/// `a(p^{n+1}) = a_p·a(p^n) − a(p^{n−1})` (trivial central character,
/// unitary normalization).
pub fn hecke_a_powers(a_p: f64, n_max: usize) -> Vec<f64> {
    let mut a = Vec::with_capacity(n_max + 1);
    a.push(1.0);
    if n_max >= 1 {
        a.push(a_p);
    }
    for n in 2..=n_max {
        let next = a_p * a[n - 1] - a[n - 2];
        a.push(next);
    }
    a
}

/// Degree-2 local coefficients from a normalized Hecke eigenvalue:
/// `b(p) = a_p`, `b(p^{ν+1}) = a_p·b(p^ν) − b(p^{ν−1})`, `b(p⁰) = 2`.
pub fn hecke_b(prime: u64, a_p: f64, nu_max: usize) -> Result<LocalCoefficients> {
    if nu_max < 2 {
        return Err(domain!("nu_max must be at least 2, got {nu_max}"));
    }
    Ok(LocalCoefficients { prime, degree: 2, b: hecke_power_sums(a_p, nu_max) })
}

fn hecke_power_sums(a_p: f64, nu_max: usize) -> Vec<f64> {
    let mut b = vec![0.0; nu_max];
    hecke_power_sums_into(a_p, &mut b);
    b
}

/// Fill `out[ν−1] = α^ν + α^{−ν}` where `α + α⁻¹ = a_p`.
pub fn hecke_power_sums_into(a_p: f64, out: &mut [f64]) {
    let (mut prev, mut cur) = (2.0, a_p);
    for slot in out.iter_mut() {
        *slot = cur;
        let next = a_p * cur - prev;
        prev = cur;
        cur = next;
    }
}

/// Entrywise product `b_{x×y}(p^ν) = b_x(p^ν)·b_y(p^ν)`.
pub fn rankin_product(x: &LocalCoefficients, y: &LocalCoefficients) -> Result<LocalCoefficients> {
    if x.prime != y.prime {
        return Err(domain!("prime mismatch: {} vs {}", x.prime, y.prime));
    }
    let b = x.b.iter().zip(&y.b).map(|(u, v)| u * v).collect();
    Ok(LocalCoefficients { prime: x.prime, degree: x.degree * y.degree, b })
}

/// `{α^M, α^{M−2}, …, α^{−M}}` from a degree-2 spectrum `{α, α⁻¹}`.
pub fn sym_power_spectrum(spec: &SatakeSpectrum, m: u32) -> Result<SatakeSpectrum> {
    if spec.degree() != 2 {
        return Err(domain!("symmetric powers need a degree-2 spectrum, got degree {}", spec.degree()));
    }
    let alpha = spec.params[0];
    let m = m as i32;
    let params = (0..=m).map(|j| alpha.powi(m - 2 * j)).collect();
    Ok(SatakeSpectrum { prime: spec.prime, params })
}

/// Local coefficients of `sym^M` of a degree-2 self-dual form with
/// normalized eigenvalue `a_p`.
///
/// `B(p) = a(p^M)`; `B(p²)` is the alternating sum
/// `Σ_{j=0}^{M} (−1)^{M−j} a(p^{2j})`; for `ν >= 3`, `B(p^ν)` is the value of
/// the degree-`M` Hecke polynomial at `b(p^ν)`, which equals the power sum
/// of the lifted spectrum.
pub fn sym_power_b(prime: u64, a_p: f64, m: u32, nu_max: usize) -> Result<LocalCoefficients> {
    if nu_max < 2 {
        return Err(domain!("nu_max must be at least 2, got {nu_max}"));
    }
    if m == 0 {
        return Err(domain!("symmetric power must be positive"));
    }
    let m = m as usize;
    let a = hecke_a_powers(a_p, 2 * m);
    let base = hecke_power_sums(a_p, nu_max);
    let mut b = Vec::with_capacity(nu_max);
    b.push(a[m]);
    let alternating: f64 = (0..=m).map(|j| if (m - j).is_multiple_of(2) { a[2 * j] } else { -a[2 * j] }).sum();
    b.push(alternating);
    for &x in base.iter().skip(2) {
        b.push(hecke_a_powers(x, m)[m]);
    }
    Ok(LocalCoefficients { prime, degree: m as u32 + 1, b })
}

/// Normalized eigenvalue from an elliptic-curve trace: `a_p/√p`.
pub fn normalize_trace(a_p: i64, p: u64) -> f64 {
    a_p as f64 / sqrt(p as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hecke_b_examples() {
        let two = hecke_b(7, 2.0, 8).unwrap();
        assert!(two.as_slice().iter().all(|&x| close(x, 2.0, 1e-12)));

        let zero = hecke_b(7, 0.0, 4).unwrap();
        assert_eq!(zero.as_slice(), &[0.0, -2.0, 0.0, 2.0]);

        // α = e^{iπ/3}
        let one = hecke_b(7, 1.0, 6).unwrap();
        assert!(close(one.get(2), -1.0, 1e-12));
        assert!(close(one.get(6), 2.0, 1e-12));
        let spec = SatakeSpectrum::from_hecke(7, 1.0);
        for nu in 1..=6 {
            assert!(close(one.get(nu), spec.power_sum(nu as i32).re, 1e-12));
        }

        assert!(hecke_b(7, 1.0, 1).is_err());
    }

    #[test]
    fn b_p2_is_a_squared_minus_two() {
        for a in [-1.7, -0.3, 0.0, 0.9, 1.99] {
            let b = hecke_b(11, a, 2).unwrap();
            assert!(close(b.get(2), a * a - 2.0, 1e-14));
        }
    }

    #[test]
    fn rankin_product_examples() {
        let x = hecke_b(5, 0.7, 6).unwrap();
        let y = hecke_b(5, -1.2, 6).unwrap();
        let xy = rankin_product(&x, &y).unwrap();
        assert_eq!(xy.degree(), 4);
        assert!(close(xy.get(1), 0.7 * -1.2, 1e-15));

        let unit = LocalCoefficients::trivial(5, 6);
        assert_eq!(rankin_product(&x, &unit).unwrap().as_slice(), x.as_slice());

        let z = hecke_b(7, 0.1, 6).unwrap();
        assert!(rankin_product(&x, &z).is_err());
    }

    #[test]
    fn rankin_square_matches_explicit_product_spectrum() {
        let a = 0.83;
        let x = hecke_b(13, a, 8).unwrap();
        let xx = rankin_product(&x, &x).unwrap();
        let s = SatakeSpectrum::from_hecke(13, a);
        let alpha = s.params()[0];
        let explicit = SatakeSpectrum::new(13, vec![alpha * alpha, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), alpha.inv() * alpha.inv()]);
        for nu in 1..=8 {
            assert!(close(xx.get(nu), explicit.power_sum(nu as i32).re, 1e-10));
        }
    }

    #[test]
    fn sym_power_spectrum_examples() {
        let s = SatakeSpectrum::from_hecke(3, 0.4);
        let s1 = sym_power_spectrum(&s, 1).unwrap();
        for (u, v) in s1.params().iter().zip(s.params()) {
            assert!((u - v).norm() < 1e-12);
        }
        let si = SatakeSpectrum::from_hecke(3, 0.0);
        let s2 = sym_power_spectrum(&si, 2).unwrap();
        let expected = [-1.0, 1.0, -1.0];
        for (u, v) in s2.params().iter().zip(expected) {
            assert!((u - Complex64::new(v, 0.0)).norm() < 1e-12);
        }
        let bad = SatakeSpectrum::new(3, vec![Complex64::new(1.0, 0.0)]);
        assert!(sym_power_spectrum(&bad, 2).is_err());
    }

    #[test]
    fn sym_power_b_examples() {
        let a = 0.6;
        let b2 = sym_power_b(5, a, 2, 6).unwrap();
        assert!(close(b2.get(1), a * a - 1.0, 1e-14));
        assert_eq!(b2.degree(), 3);

        let z = sym_power_b(5, 0.0, 2, 4).unwrap();
        assert!(close(z.get(1), -1.0, 1e-14));
        assert!(close(z.get(2), 3.0, 1e-14));

        let one = sym_power_b(5, a, 1, 6).unwrap();
        let h = hecke_b(5, a, 6).unwrap();
        for nu in 1..=6 {
            assert!(close(one.get(nu), h.get(nu), 1e-12));
        }
    }

    #[test]
    fn sym_power_b_degree_one_coefficient_is_hecke_value() {
        for m in 1..=6u32 {
            let a = -1.3;
            let b = sym_power_b(2, a, m, 3).unwrap();
            let hecke = hecke_a_powers(a, m as usize);
            assert!(close(b.get(1), hecke[m as usize], 1e-12));
            let spec = sym_power_spectrum(&SatakeSpectrum::from_hecke(2, a), m).unwrap();
            assert!(close(spec.power_sum(1).re, hecke[m as usize], 1e-10));
        }
    }

    #[test]
    fn ramified_coefficients_vanish() {
        let r = LocalCoefficients::ramified(3, 2, 5);
        assert_eq!(r.as_slice(), &[0.0; 5]);
        assert!(r.satisfies_ramanujan(0.0));
    }
}
