//! Prime and prime-square sums over a family, the one-level density on the
//! prime side of the explicit formula, and the family constant `(c, ε, r)`.
//!
//! Everything runs off a [`Profile`]: the per-prime [`PrimeMoments`] of a
//! family up to a cutoff together with the scale `log R`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::PrimeTable;
use crate::error::domain;
use crate::families::{Family, PrimeMoments};
use crate::math::{exp, powf, sqrt, CompensatedSum};
use crate::rmt::TestFunction;
use crate::{Error, Result};

/// Largest prime that can contribute to a sum weighted by `φ̂(log p/log R)`:
/// `min(P, e^{σ log R})`.
pub fn support_cutoff(phi: &TestFunction, log_r: f64, p_max: u64) -> u64 {
    let edge = exp(phi.support() * log_r);
    if edge >= p_max as f64 {
        p_max
    } else {
        edge as u64
    }
}

/// Per-prime family moments at primes up to a cutoff, with the scale
/// `log R` (the family's mean log-conductor unless overridden).
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub label: String,
    pub members: usize,
    pub total_weight: f64,
    pub log_r: f64,
    pub cutoff: u64,
    /// One entry per prime `<= cutoff`, ascending.
    pub moments: Vec<PrimeMoments>,
}

impl Profile {
    /// Moments of `family` at every prime of `primes` up to `cutoff`,
    /// clamped to the family's own prime limit.
    pub fn compute(family: &dyn Family, primes: &PrimeTable, cutoff: u64, nu_max: usize) -> Result<Profile> {
        let cutoff = Self::clamp_cutoff(family, cutoff);
        let moments =
            primes.upto(cutoff).iter().map(|&p| family.prime_moments(p, nu_max)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(family, cutoff, moments)
    }

    /// `cutoff` lowered to what the family can serve.
    pub fn clamp_cutoff(family: &dyn Family, cutoff: u64) -> u64 {
        family.prime_limit().map_or(cutoff, |l| cutoff.min(l))
    }

    /// Assemble a profile from moments computed elsewhere (e.g. in parallel).
    pub fn from_parts(family: &dyn Family, cutoff: u64, moments: Vec<PrimeMoments>) -> Result<Profile> {
        if family.is_empty() {
            return Err(Error::EmptyFamily(family.label()));
        }
        if moments.windows(2).any(|w| w[0].prime >= w[1].prime) {
            return Err(Error::Precondition("prime moments must be strictly ascending".into()));
        }
        let log_r = family.mean_log_conductor();
        if !(log_r > 0.0) {
            return Err(domain!("log R must be positive, got {log_r}"));
        }
        Ok(Profile {
            label: family.label(),
            members: family.len(),
            total_weight: family.total_weight(),
            log_r,
            cutoff,
            moments,
        })
    }

    /// Same moments at a different scale.
    pub fn with_log_r(mut self, log_r: f64) -> Result<Profile> {
        if !(log_r > 0.0) {
            return Err(domain!("log R must be positive, got {log_r}"));
        }
        self.log_r = log_r;
        Ok(self)
    }

    /// Keep only primes `<= cutoff`.
    pub fn truncated(&self, cutoff: u64) -> Profile {
        let mut out = self.clone();
        out.cutoff = cutoff.min(self.cutoff);
        out.moments.retain(|m| m.prime <= out.cutoff);
        out
    }

    pub fn nu_max(&self) -> usize {
        self.moments.first().map_or(0, |m| m.nu_max())
    }

    /// `Σ_p w(p, log p) · x(p)` over the profile in ascending prime order.
    fn sum_over(&self, mut term: impl FnMut(&PrimeMoments, f64) -> f64) -> f64 {
        let mut s = CompensatedSum::new();
        for m in &self.moments {
            s.add(term(m, crate::math::ln(m.prime as f64)));
        }
        s.value()
    }
}

/// `b(p^ν)` weight `(log p)/(p^{ν/2} log R) · φ̂(ν log p/log R)`.
fn nu_weight(phi: &TestFunction, p: u64, log_p: f64, log_r: f64, nu: usize) -> f64 {
    let x = nu as f64 * log_p / log_r;
    let h = phi.phi_hat(x);
    if h == 0.0 {
        return 0.0;
    }
    let scale = if nu == 2 { p as f64 } else { powf(p as f64, nu as f64 / 2.0) };
    log_p / (scale * log_r) * h
}

/// Prime sum and the rank read off from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeSum {
    /// `−2 Σ_p p^{−1/2} (log p/log R) φ̂(log p/log R) avg b(p)`
    pub value: f64,
    /// `value/φ(0)`
    pub rank_raw: f64,
    /// `value / (2 Σ_p (log p)/(p log R) φ̂(log p/log R))` with averages
    /// over good members: exact for `avg b(p) = −r/√p`.
    pub rank: f64,
}

pub fn prime_sum(profile: &Profile, phi: &TestFunction) -> Result<PrimeSum> {
    let phi0 = nonzero_phi0(phi)?;
    let l = profile.log_r;
    let value = -2.0 * profile.sum_over(|m, lp| nu_weight(phi, m.prime, lp, l, 1) * m.total_average(1));
    let good = -2.0
        * profile.sum_over(|m, lp| nu_weight(phi, m.prime, lp, l, 1) * m.good_average(1).unwrap_or(0.0));
    let norm = 2.0 * profile.sum_over(|m, lp| nu_weight(phi, m.prime, lp, l, 1) / sqrt(m.prime as f64));
    let rank = if norm > 0.0 { good / norm } else { 0.0 };
    Ok(PrimeSum { value, rank_raw: value / phi0, rank })
}

/// Prime-square sum and the symmetry constant read off from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeSquareSum {
    /// `S = −2 Σ_p p^{−1} (log p/log R) φ̂(2 log p/log R) avg b(p²)`
    pub value: f64,
    /// `−2S/φ(0)`
    pub c_raw: f64,
    /// Weighted mean of the good-member averages of `b(p²)` with the same
    /// weights as `S`: exact when `avg b(p²) ≡ c`.
    pub c: f64,
}

pub fn prime_square_sum(profile: &Profile, phi: &TestFunction) -> Result<PrimeSquareSum> {
    let phi0 = nonzero_phi0(phi)?;
    let l = profile.log_r;
    if profile.nu_max() < 2 {
        return Err(domain!("prime-square sums need nu_max >= 2"));
    }
    let value = -2.0 * profile.sum_over(|m, lp| nu_weight(phi, m.prime, lp, l, 2) * m.total_average(2));
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for m in &profile.moments {
        let w = nu_weight(phi, m.prime, crate::math::ln(m.prime as f64), l, 2);
        if let Some(avg) = m.good_average(2) {
            num.add(w * avg);
            den.add(w);
        }
    }
    let c = if den.value() > 0.0 { num.value() / den.value() } else { f64::NAN };
    Ok(PrimeSquareSum { value, c_raw: -2.0 * value / phi0, c })
}

fn nonzero_phi0(phi: &TestFunction) -> Result<f64> {
    let v = phi.phi0();
    if v == 0.0 {
        Err(Error::DegenerateTestFunction)
    } else {
        Ok(v)
    }
}

/// `Σ_{p <= P} F̂(ν log p/log R) (log p)/(p log R)`, which tends to
/// `F(0)/(2ν)` as `R → ∞`.
pub fn pnt_prime_sum(fhat: &TestFunction, nu: u32, r: f64, primes: &PrimeTable, p_max: u64) -> Result<f64> {
    if nu == 0 {
        return Err(domain!("nu must be positive"));
    }
    if !(r > core::f64::consts::E) {
        return Err(domain!("R must exceed e, got {r}"));
    }
    let log_r = crate::math::ln(r);
    let edge = support_cutoff(fhat, log_r / nu as f64, p_max);
    let mut s = CompensatedSum::new();
    for (p, lp) in primes.iter_upto(edge) {
        let h = fhat.phi_hat(nu as f64 * lp / log_r);
        if h != 0.0 {
            s.add(h * lp / (p as f64 * log_r));
        }
    }
    Ok(s.value())
}

/// Prime side of the one-level density with its breakdown by `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub empirical: f64,
    pub predicted: f64,
    pub phi_hat0: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Sum of the `ν >= 3` terms.
    pub tail: f64,
    pub log_r: f64,
    pub members: usize,
    pub cutoff: u64,
    /// `Σ_p (bad share) · 2 (log p)/(√p log R) φ̂(log p/log R)`: the `ν = 1`
    /// weight the excluded bad members would have carried.
    pub bad_mass: f64,
}

/// `D₁ = φ̂(0) + Σ_ν (−2 Σ_p avg b(p^ν) (log p)/(p^{ν/2} log R) φ̂(ν log p/log R))`
/// over the profile, against the model `φ̂(0) − c φ(0)/2 + r φ(0)`.
pub fn one_level_density(profile: &Profile, phi: &TestFunction, c: f64, rank: f64) -> Result<DensityReport> {
    let l = profile.log_r;
    let nu_max = profile.nu_max();
    if nu_max == 0 {
        return Err(Error::EmptySupport);
    }
    let term = |nu: usize| -2.0 * profile.sum_over(|m, lp| nu_weight(phi, m.prime, lp, l, nu) * m.total_average(nu));
    let nu1 = term(1);
    let nu2 = if nu_max >= 2 { term(2) } else { 0.0 };
    let mut tail = CompensatedSum::new();
    for nu in 3..=nu_max {
        tail.add(term(nu));
    }
    let tail = tail.value();
    let bad_mass = profile.sum_over(|m, lp| 2.0 * m.bad_fraction() * nu_weight(phi, m.prime, lp, l, 1));
    let phi_hat0 = phi.phi_hat0();
    Ok(DensityReport {
        empirical: phi_hat0 + nu1 + nu2 + tail,
        predicted: phi_hat0 - 0.5 * c * phi.phi0() + rank * phi.phi0(),
        phi_hat0,
        nu1,
        nu2,
        tail,
        log_r: l,
        members: profile.members,
        cutoff: profile.cutoff,
        bad_mass,
    })
}

/// A symmetry constant or sign read against `{−1, 0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    Minus,
    Zero,
    Plus,
    Indeterminate,
}

impl Class {
    pub fn value(&self) -> Option<i8> {
        match self {
            Class::Minus => Some(-1),
            Class::Zero => Some(0),
            Class::Plus => Some(1),
            Class::Indeterminate => None,
        }
    }

    fn from_value(v: i8) -> Class {
        match v {
            -1 => Class::Minus,
            0 => Class::Zero,
            _ => Class::Plus,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("indeterminate"),
        }
    }
}

/// Nearest of `{−1, 0, 1}` when it is within `tol` and the other two are
/// farther than `2·tol`.
pub fn classify(estimate: f64, tol: f64) -> Class {
    if !estimate.is_finite() {
        return Class::Indeterminate;
    }
    let mut best = None;
    for v in [-1i8, 0, 1] {
        let d = (estimate - v as f64).abs();
        if d < tol {
            best = Some(v);
        }
    }
    match best {
        Some(v) if [-1i8, 0, 1].iter().all(|&w| w == v || (estimate - w as f64).abs() > 2.0 * tol) => {
            Class::from_value(v)
        }
        _ => Class::Indeterminate,
    }
}

/// Sign distribution of a family: `+1` all even, `−1` all odd, `0` when the
/// even share is within `tol` of ½, indeterminate otherwise or when any
/// member's sign is unknown.
pub fn sign_class(family: &dyn Family, tol: f64) -> Class {
    let mut even = 0.0;
    let mut total = 0.0;
    for i in 0..family.len() {
        let w = family.multiplicity(i) as f64;
        match family.sign(i) {
            Some(1) => even += w,
            Some(-1) => {}
            _ => return Class::Indeterminate,
        }
        total += w;
    }
    if total == 0.0 {
        return Class::Indeterminate;
    }
    let share = even / total;
    if share == 1.0 {
        Class::Plus
    } else if share == 0.0 {
        Class::Minus
    } else if (share - 0.5).abs() < tol {
        Class::Zero
    } else {
        Class::Indeterminate
    }
}

/// Estimated `(c, ε, r)` with the settings used.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyConstant {
    pub c: f64,
    pub c_raw: f64,
    pub c_class: Class,
    pub epsilon: Class,
    pub r: f64,
    pub r_raw: f64,
    pub tolerance: f64,
    pub cutoff: u64,
    pub sigma: f64,
}

/// Classify `c` (indeterminate for a single member, which cannot average),
/// read `ε` from member signs for orthogonal families (`0` otherwise), and
/// estimate `r`.
pub fn family_constant(family: &dyn Family, profile: &Profile, phi: &TestFunction, tol: f64) -> Result<FamilyConstant> {
    let sq = prime_square_sum(profile, phi)?;
    let ps = prime_sum(profile, phi)?;
    let c_class = if family.len() < 2 { Class::Indeterminate } else { classify(sq.c, tol) };
    let epsilon = match c_class {
        Class::Minus => sign_class(family, tol),
        Class::Indeterminate => Class::Indeterminate,
        _ => Class::Zero,
    };
    Ok(FamilyConstant {
        c: sq.c,
        c_raw: sq.c_raw,
        c_class,
        epsilon,
        r: ps.rank,
        r_raw: ps.rank_raw,
        tolerance: tol,
        cutoff: profile.cutoff,
        sigma: phi.support(),
    })
}
