//! Elliptic curves `y² = x³ + Ax + B` and one-parameter families of them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{factor, gcd_u128, is_prime, legendre_table};
use crate::error::domain;
use crate::math::ln;
use crate::{Error, Result};

/// Integer polynomial in one variable, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1·T`
    pub fn linear(c0: i64, c1: i64) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> BigInt {
        let t = BigInt::from(t);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &t + c)
    }

    /// Value at `t` reduced into `[0, p)`.
    pub fn eval_mod(&self, t: u64, p: u64) -> u64 {
        let p128 = p as i128;
        let t = (t % p) as i128;
        let mut acc: i128 = 0;
        for c in self.coeffs.iter().rev() {
            acc = (acc * t + (*c as i128).rem_euclid(p128)) % p128;
        }
        acc as u64
    }

    fn big(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| BigInt::from(*c)).collect()
    }

    /// Parse text like `3T^2 - T + 1`; any single letter names the variable.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(domain!("empty polynomial"));
        }
        let bytes = cleaned.as_bytes();
        let mut coeffs: Vec<i64> = Vec::new();
        let mut var: Option<char> = None;
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if start != 0 {
                return Err(domain!("expected '+' or '-' at position {i} in {text:?}"));
            }
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coef: i64 = if i > digits_start {
                cleaned[digits_start..i].parse().map_err(|_| domain!("coefficient too large in {text:?}"))?
            } else {
                1
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let mut power = 0usize;
            if i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                let v = bytes[i] as char;
                match var {
                    Some(w) if w != v => return Err(domain!("mixed variables {w} and {v} in {text:?}")),
                    _ => var = Some(v),
                }
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ps = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ps == i {
                        return Err(domain!("missing exponent at position {i} in {text:?}"));
                    }
                    power = cleaned[ps..i].parse().map_err(|_| domain!("bad exponent in {text:?}"))?;
                }
            } else if i == digits_start {
                return Err(domain!("expected a term at position {i} in {text:?}"));
            }
            coef *= sign;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = coeffs[power]
                .checked_add(coef)
                .ok_or_else(|| Error::Overflow(format!("coefficient overflow in {text:?}")))?;
        }
        Ok(Poly::new(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "T")?,
                (1, m) => write!(f, "{m}T")?,
                (_, 1) => write!(f, "T^{k}")?,
                (_, m) => write!(f, "{m}T^{k}")?,
            }
        }
        Ok(())
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_scale_add(a: &[BigInt], sa: i64, b: &[BigInt], sb: i64) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default() * sa;
            let y = b.get(i).cloned().unwrap_or_default() * sb;
            x + y
        })
        .collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Invariants of one short Weierstrass curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInvariants {
    pub a: BigInt,
    pub b: BigInt,
    /// `−16(4A³ + 27B²)`
    pub delta: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    /// `6912A³/(4A³ + 27B²)`, `None` when singular.
    pub j: Option<Ratio<BigInt>>,
}

impl CurveInvariants {
    pub fn is_singular(&self) -> bool {
        self.delta.is_zero()
    }
}

fn reduced_discriminant(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from(4) * a * a * a + BigInt::from(27) * b * b
}

pub fn j_invariant(a: &BigInt, b: &BigInt) -> Option<Ratio<BigInt>> {
    let d = reduced_discriminant(a, b);
    if d.is_zero() {
        return None;
    }
    Some(Ratio::new(BigInt::from(6912) * a * a * a, d))
}

pub fn invariants(a: &BigInt, b: &BigInt) -> CurveInvariants {
    let d = reduced_discriminant(a, b);
    CurveInvariants {
        a: a.clone(),
        b: b.clone(),
        delta: BigInt::from(-16) * &d,
        c4: BigInt::from(-48) * a,
        c6: BigInt::from(-864) * b,
        j: j_invariant(a, b),
    }
}

fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Conductor proxy `∏ p^{e_p}`.
///
/// For `p >= 5` the curve is first made minimal at `p`; then `e_p = 1` if
/// `p ∤ c₄` and `2` otherwise. The exponents at 2 and 3 are capped at their
/// maxima 8 and 5 and charged whenever the prime divides `Δ`.
pub fn conductor_proxy(a: &BigInt, b: &BigInt) -> Result<BigUint> {
    let d = reduced_discriminant(a, b);
    if d.is_zero() {
        return Err(Error::SingularCurve);
    }
    let d_abs = d
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("|4A^3 + 27B^2| = {} does not fit in 64 bits", d.abs())))?;
    // 16 | Δ always
    let mut out = BigUint::from(256u32);
    for (p, e) in factor(d_abs) {
        match p {
            2 => {}
            3 => out *= BigUint::from(243u32),
            _ => {
                let va = valuation(a, p);
                let vb = valuation(b, p);
                let k = (va / 4).min(vb / 6);
                if e > 12 * k {
                    // A = 0 means c₄ = 0
                    let additive = va == u32::MAX || va > 4 * k;
                    out *= BigUint::from(p).pow(if additive { 2 } else { 1 });
                }
            }
        }
    }
    Ok(out)
}

/// [`conductor_proxy`] as `u128`.
pub fn conductor_proxy_u128(a: &BigInt, b: &BigInt) -> Result<u128> {
    let c = conductor_proxy(a, b)?;
    c.to_u128().ok_or_else(|| Error::Overflow(format!("conductor proxy {c} does not fit in 128 bits")))
}

/// `((C₁C₂)²/(C₁,C₂)⁴, (C₁C₂)²/(C₁,C₂))`.
pub fn rs_conductor_bounds(c1: &BigUint, c2: &BigUint) -> Result<(BigUint, BigUint)> {
    if c1.is_zero() || c2.is_zero() {
        return Err(domain!("conductors must be positive"));
    }
    let g = c1.gcd(c2);
    let sq = (c1 * c2).pow(2);
    let g4 = g.pow(4);
    Ok((&sq / g4, sq / g))
}

/// Which of the two Rankin–Selberg conductor bounds feeds `log R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConductorPolicy {
    Lower,
    Upper,
    /// Geometric mean of the two bounds.
    #[default]
    Midpoint,
}

impl ConductorPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(ConductorPolicy::Lower),
            "upper" => Ok(ConductorPolicy::Upper),
            "midpoint" | "mid" => Ok(ConductorPolicy::Midpoint),
            _ => Err(domain!("unknown conductor policy {s:?}")),
        }
    }

    fn gcd_weight(&self) -> f64 {
        match self {
            ConductorPolicy::Lower => 4.0,
            ConductorPolicy::Upper => 1.0,
            ConductorPolicy::Midpoint => 2.5,
        }
    }
}

/// `log Q(C₁ × C₂)` under `policy`.
pub fn log_rs_conductor(c1: u128, c2: u128, policy: ConductorPolicy) -> f64 {
    let g = gcd_u128(c1, c2) as f64;
    2.0 * (ln(c1 as f64) + ln(c2 as f64)) - policy.gcd_weight() * ln(g)
}

/// `y² = x³ + A(T)x + B(T)` for `T` in `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticFamilySpec {
    pub a: Poly,
    pub b: Poly,
    pub start: i64,
    pub end: i64,
}

impl EllipticFamilySpec {
    pub fn new(a: Poly, b: Poly, start: i64, end: i64) -> Result<Self> {
        let spec = EllipticFamilySpec { a, b, start, end };
        if spec.discriminant_poly().is_empty() {
            return Err(domain!("4A(T)^3 + 27B(T)^2 vanishes identically"));
        }
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        (self.end - self.start).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn params(&self) -> impl Iterator<Item = i64> {
        self.start..self.end
    }

    pub fn coefficients_at(&self, t: i64) -> (BigInt, BigInt) {
        (self.a.eval(t), self.b.eval(t))
    }

    /// `4A(T)³ + 27B(T)²` with big coefficients.
    fn discriminant_poly(&self) -> Vec<BigInt> {
        let a = self.a.big();
        let b = self.b.big();
        poly_scale_add(&poly_mul(&poly_mul(&a, &a), &a), 4, &poly_mul(&b, &b), 27)
    }

    /// `j(T)` is non-constant iff `A³` and `B²` are both nonzero and not
    /// proportional.
    pub fn j_is_nonconstant(&self) -> bool {
        if self.a.is_zero() || self.b.is_zero() {
            return false;
        }
        let a = self.a.big();
        let b = self.b.big();
        let a3 = poly_mul(&poly_mul(&a, &a), &a);
        let b2 = poly_mul(&b, &b);
        if a3.len() != b2.len() {
            return true;
        }
        let la = a3.last().expect("nonzero").clone();
        let lb = b2.last().expect("nonzero").clone();
        a3.iter().zip(&b2).any(|(x, y)| x * &lb != y * &la)
    }
}

impl fmt::Display for EllipticFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({}), T in [{}, {})", self.a, self.b, self.start, self.end)
    }
}

/// Point-count machinery over `F_p` for one prime `p >= 5`.
#[derive(Debug, Clone)]
pub struct TraceTable {
    p: u64,
    legendre: Vec<i8>,
    cubes: Vec<u64>,
}

impl TraceTable {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(domain!("trace tables need a prime p >= 5, got {p}"));
        }
        let cubes = (0..p).map(|x| ((x as u128 * x as u128 % p as u128) * x as u128 % p as u128) as u64).collect();
        Ok(TraceTable { p, legendre: legendre_table(p), cubes })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `a_p = −Σ_x (x³ + ax + b | p)` for `a, b` already reduced mod `p`.
    pub fn trace(&self, a: u64, b: u64) -> i64 {
        let p = self.p;
        let mut ax = 0u64;
        let mut s: i64 = 0;
        for &c in &self.cubes {
            let mut v = c + ax + b;
            if v >= p {
                v -= p;
            }
            if v >= p {
                v -= p;
            }
            s += self.legendre[v as usize] as i64;
            ax += a;
            if ax >= p {
                ax -= p;
            }
        }
        -s
    }

    /// `(a_t(p), p | Δ(t))` for every residue `t mod p`.
    pub fn fiber_traces(&self, spec: &EllipticFamilySpec) -> FiberTraces {
        let p = self.p;
        let mut traces = Vec::with_capacity(p as usize);
        let mut bad = Vec::with_capacity(p as usize);
        for r in 0..p {
            let a = spec.a.eval_mod(r, p);
            let b = spec.b.eval_mod(r, p);
            traces.push(self.trace(a, b));
            let a3 = (a as u128).pow(3) % p as u128;
            let d = (4 * a3 + 27 * ((b as u128 * b as u128) % p as u128)) % p as u128;
            bad.push(d == 0);
        }
        FiberTraces { p, traces, bad }
    }
}

/// `a_t(p)` and bad-reduction flags indexed by `t mod p`.
#[derive(Debug, Clone)]
pub struct FiberTraces {
    pub p: u64,
    pub traces: Vec<i64>,
    pub bad: Vec<bool>,
}

impl FiberTraces {
    pub fn at(&self, t: i64) -> i64 {
        self.traces[t.rem_euclid(self.p as i64) as usize]
    }

    pub fn is_bad(&self, t: i64) -> bool {
        self.bad[t.rem_euclid(self.p as i64) as usize]
    }

    /// `Σ_{t mod p} a_t(p)^r`
    pub fn power_sum(&self, r: u32) -> i128 {
        self.traces.iter().map(|a| (*a as i128).pow(r)).sum()
    }
}

/// `a_t(p)` for every `t mod p`.
pub fn fiber_traces(spec: &EllipticFamilySpec, p: u64) -> Result<FiberTraces> {
    Ok(TraceTable::new(p)?.fiber_traces(spec))
}

/// `Σ_{t mod p} a_t(p)`, the per-prime term of the Nagao sum.
pub fn nagao_term(spec: &EllipticFamilySpec, p: u64) -> Result<i64> {
    Ok(fiber_traces(spec, p)?.traces.iter().sum())
}

/// Nagao statistic at cutoff `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct NagaoReport {
    pub cutoff: u64,
    /// `(1/X) Σ_{5≤p≤X} (log p / p) Σ_t a_t(p)`
    pub average: f64,
    /// `−average`
    pub rank_estimate: f64,
    /// `(p, Σ_t a_t(p))` for each prime used.
    pub terms: Vec<(u64, i64)>,
}

/// Assemble the Nagao statistic from per-prime terms.
pub fn nagao_from_terms(cutoff: u64, terms: Vec<(u64, i64)>) -> NagaoReport {
    let total: f64 = crate::math::compensated_sum(terms.iter().map(|(p, s)| ln(*p as f64) / *p as f64 * *s as f64));
    let average = total / cutoff as f64;
    NagaoReport { cutoff, average, rank_estimate: -average, terms }
}

pub fn nagao_sum(spec: &EllipticFamilySpec, cutoff: u64) -> Result<NagaoReport> {
    if cutoff < 11 {
        return Err(domain!("Nagao cutoff must be at least 11, got {cutoff}"));
    }
    let primes = crate::arith::sieve_primes(cutoff)?;
    let mut terms = Vec::new();
    for &p in primes.primes().iter().filter(|p| **p >= 5) {
        terms.push((p, nagao_term(spec, p)?));
    }
    Ok(nagao_from_terms(cutoff, terms))
}

/// `Σ_{t mod p} a_t(p)²`, exact.
pub fn michel_moment(spec: &EllipticFamilySpec, p: u64) -> Result<u128> {
    if !spec.j_is_nonconstant() {
        return Err(Error::Precondition(format!("j(T) is constant for {spec}")));
    }
    Ok(fiber_traces(spec, p)?.power_sum(2) as u128)
}

/// Both sides of `Σ_{t mod p₁p₂} a_t(p₁)^{r₁} a_t(p₂)^{r₂} =
/// (Σ_{t mod p₁} a_t(p₁)^{r₁})(Σ_{t mod p₂} a_t(p₂)^{r₂})`.
pub fn independence_sides(spec: &EllipticFamilySpec, p1: u64, p2: u64, r1: u32, r2: u32) -> Result<(i128, i128)> {
    if p1 == p2 {
        return Err(domain!("the primes must be distinct"));
    }
    let f1 = fiber_traces(spec, p1)?;
    let f2 = fiber_traces(spec, p2)?;
    let mut lhs: i128 = 0;
    for t in 0..(p1 * p2) as i64 {
        lhs += (f1.at(t) as i128).pow(r1) * (f2.at(t) as i128).pow(r2);
    }
    Ok((lhs, f1.power_sum(r1) * f2.power_sum(r2)))
}

/// Pairs `(t, s)` with `j_F(t) = j_G(s)`, singular fibers skipped.
pub fn j_collision_pairs(f: &EllipticFamilySpec, g: &EllipticFamilySpec) -> Vec<(i64, i64)> {
    let mut by_j: BTreeMap<Ratio<BigInt>, Vec<i64>> = BTreeMap::new();
    for s in g.params() {
        let (a, b) = g.coefficients_at(s);
        if let Some(j) = j_invariant(&a, &b) {
            by_j.entry(j).or_default().push(s);
        }
    }
    let mut out = Vec::new();
    for t in f.params() {
        let (a, b) = f.coefficients_at(t);
        if let Some(ss) = j_invariant(&a, &b).and_then(|j| by_j.get(&j)) {
            out.extend(ss.iter().map(|s| (t, *s)));
        }
    }
    out
}

/// Result of a j-collision scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionReport {
    pub count: usize,
    /// At most [`CollisionReport::SAMPLE_CAP`] pairs.
    pub sample: Vec<(i64, i64)>,
}

impl CollisionReport {
    pub const SAMPLE_CAP: usize = 100;
}

pub fn j_collision_count(f: &EllipticFamilySpec, g: &EllipticFamilySpec) -> Result<CollisionReport> {
    for spec in [f, g] {
        if !spec.j_is_nonconstant() {
            return Err(Error::Precondition(format!("j(T) is constant for {spec}")));
        }
    }
    let mut pairs = j_collision_pairs(f, g);
    let count = pairs.len();
    pairs.truncate(CollisionReport::SAMPLE_CAP);
    Ok(CollisionReport { count, sample: pairs })
}

fn is_rational_power(q: &Ratio<BigInt>, k: u32) -> Option<Ratio<BigInt>> {
    if q.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        (r.pow(k) == n.abs()).then(|| if n.is_negative() { -r } else { r })
    };
    Some(Ratio::new(root(q.numer())?, root(q.denom())?))
}

/// Whether `y² = x³ + A₁x + B₁` and `y² = x³ + A₂x + B₂` are isomorphic over
/// ℚ, i.e. `A₂ = u⁴A₁`, `B₂ = u⁶B₁` for some rational `u ≠ 0`.
pub fn is_isomorphic(a1: &BigInt, b1: &BigInt, a2: &BigInt, b2: &BigInt) -> bool {
    if a1.is_zero() != a2.is_zero() || b1.is_zero() != b2.is_zero() {
        return false;
    }
    let ra = (!a1.is_zero()).then(|| Ratio::new(a2.clone(), a1.clone()));
    let rb = (!b1.is_zero()).then(|| Ratio::new(b2.clone(), b1.clone()));
    match (ra, rb) {
        (None, None) => true,
        (Some(ra), None) => is_rational_power(&ra, 4).is_some(),
        (None, Some(rb)) => is_rational_power(&rb, 6).is_some(),
        (Some(ra), Some(rb)) => {
            // u² = (B₂/B₁)/(A₂/A₁)
            let u2 = &rb / &ra;
            match is_rational_power(&u2, 2) {
                Some(_) => &u2 * &u2 == ra && &u2 * &u2 * &u2 == rb,
                None => false,
            }
        }
    }
}

/// Average log-conductor over a product of two families.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgLogConductor {
    pub value: f64,
    pub pairs: usize,
    pub singular_f: usize,
    pub singular_g: usize,
}

/// Conductor proxies of the nonsingular fibers, with the singular count.
pub fn family_conductors(spec: &EllipticFamilySpec) -> Result<(Vec<(i64, u128)>, usize)> {
    let mut out = Vec::with_capacity(spec.len());
    let mut singular = 0;
    for t in spec.params() {
        let (a, b) = spec.coefficients_at(t);
        match conductor_proxy_u128(&a, &b) {
            Ok(c) => out.push((t, c)),
            Err(Error::SingularCurve) => singular += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((out, singular))
}

/// `(1/NM) Σ_t Σ_s log Q(C_F(t), C_G(s))` with `Q` chosen by `policy`.
pub fn avg_log_conductor(
    f: &EllipticFamilySpec,
    g: &EllipticFamilySpec,
    policy: ConductorPolicy,
) -> Result<AvgLogConductor> {
    let (cf, singular_f) = family_conductors(f)?;
    let (cg, singular_g) = family_conductors(g)?;
    if cf.is_empty() || cg.is_empty() {
        return Err(Error::EmptyFamily(String::from("every fiber is singular")));
    }
    let mut sum = crate::math::CompensatedSum::new();
    for (_, c1) in &cf {
        let mut row = crate::math::CompensatedSum::new();
        for (_, c2) in &cg {
            row.add(log_rs_conductor(*c1, *c2, policy));
        }
        sum.add(row.value());
    }
    let pairs = cf.len() * cg.len();
    Ok(AvgLogConductor { value: sum.value() / pairs as f64, pairs, singular_f, singular_g })
}
