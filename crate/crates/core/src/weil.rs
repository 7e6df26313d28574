//! Admissible representations of the Weil group of ℝ, `W_ℝ = ℂ^× ∪ jℂ^×`.
//!
//! Irreducibles are the characters `[+,t]`, `[−,t]` and the two-dimensional
//! `[k,t]` (`k >= 2`). A representation is a multiset of irreducibles kept in
//! canonical sorted form, so structurally equal decompositions compare equal.
//! Twists are exact rationals.
//!
//! `[1,t]` is not an irreducible; asking for it yields `[+,t] ⊕ [−,t]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::domain;
use crate::math::ln;
use crate::{Error, Result};

/// Twist parameter `t`.
pub type Twist = Ratio<i64>;

fn tw(n: i64) -> Twist {
    Ratio::from_integer(n)
}

/// Irreducible representation of `W_ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeilIrr {
    /// `[k,t]`, `k >= 2`.
    Disc { k: u32, t: Twist },
    /// `[+,t]`
    Plus(Twist),
    /// `[−,t]`
    Minus(Twist),
}

impl WeilIrr {
    pub fn disc(k: u32, t: Twist) -> Result<Self> {
        if k < 2 {
            return Err(domain!("[k,t] needs k >= 2, got k = {k}"));
        }
        Ok(WeilIrr::Disc { k, t })
    }

    /// `[(−)^κ, t]`: `[+,t]` for κ even, `[−,t]` for κ odd.
    pub fn signed(kappa: u64, t: Twist) -> Self {
        if kappa.is_multiple_of(2) {
            WeilIrr::Plus(t)
        } else {
            WeilIrr::Minus(t)
        }
    }

    pub fn dimension(&self) -> u32 {
        match self {
            WeilIrr::Disc { .. } => 2,
            _ => 1,
        }
    }

    pub fn twist(&self) -> Twist {
        match *self {
            WeilIrr::Disc { t, .. } | WeilIrr::Plus(t) | WeilIrr::Minus(t) => t,
        }
    }
}

impl fmt::Display for WeilIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, t) = match self {
            WeilIrr::Disc { k, t } => (format!("{k}"), *t),
            WeilIrr::Plus(t) => (String::from("+"), *t),
            WeilIrr::Minus(t) => (String::from("-"), *t),
        };
        if t.is_zero() {
            write!(f, "[{head}]")
        } else {
            write!(f, "[{head},{t}]")
        }
    }
}

/// Finite-dimensional admissible representation as a multiset of
/// irreducibles.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WeilRep {
    parts: BTreeMap<WeilIrr, u32>,
}

impl WeilRep {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn irreducible(x: WeilIrr) -> Self {
        let mut rep = Self::zero();
        rep.push(x, 1);
        rep
    }

    pub fn plus(t: Twist) -> Self {
        Self::irreducible(WeilIrr::Plus(t))
    }

    pub fn minus(t: Twist) -> Self {
        Self::irreducible(WeilIrr::Minus(t))
    }

    /// `[k,t]` with `[1,t] := [+,t] ⊕ [−,t]`.
    pub fn disc(k: u32, t: Twist) -> Result<Self> {
        match k {
            0 => Err(domain!("[k,t] needs k >= 1")),
            1 => Ok(Self::plus(t).direct_sum(&Self::minus(t))),
            _ => Ok(Self::irreducible(WeilIrr::Disc { k, t })),
        }
    }

    pub fn push(&mut self, x: WeilIrr, multiplicity: u32) {
        if multiplicity > 0 {
            *self.parts.entry(x).or_insert(0) += multiplicity;
        }
    }

    pub fn direct_sum(&self, other: &WeilRep) -> WeilRep {
        let mut out = self.clone();
        for (x, m) in &other.parts {
            out.push(*x, *m);
        }
        out
    }

    pub fn dimension(&self) -> u32 {
        self.parts.iter().map(|(x, m)| x.dimension() * m).sum()
    }

    /// Constituents with multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&WeilIrr, u32)> {
        self.parts.iter().map(|(x, m)| (x, *m))
    }

    /// Constituents repeated by multiplicity.
    pub fn constituents(&self) -> Vec<WeilIrr> {
        self.parts.iter().flat_map(|(x, m)| core::iter::repeat_n(*x, *m as usize)).collect()
    }

    pub fn as_irreducible(&self) -> Option<WeilIrr> {
        match self.parts.iter().next() {
            Some((x, 1)) if self.parts.len() == 1 => Some(*x),
            _ => None,
        }
    }

    pub fn multiplicity(&self, x: &WeilIrr) -> u32 {
        self.parts.get(x).copied().unwrap_or(0)
    }
}

impl fmt::Display for WeilRep {
    /// Two-dimensional pieces by decreasing weight, then `[+]`, then `[−]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut items = self.constituents();
        items.sort_by_key(display_key);
        for (i, x) in items.iter().enumerate() {
            if i > 0 {
                write!(f, " (+) ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn display_key(x: &WeilIrr) -> (u8, core::cmp::Reverse<u32>, Twist) {
    match *x {
        WeilIrr::Disc { k, t } => (0, core::cmp::Reverse(k), t),
        WeilIrr::Plus(t) => (1, core::cmp::Reverse(0), t),
        WeilIrr::Minus(t) => (2, core::cmp::Reverse(0), t),
    }
}

/// Tensor product of two irreducibles.
pub fn tensor_irr(x: &WeilIrr, y: &WeilIrr) -> WeilRep {
    use WeilIrr::*;
    let t = x.twist() + y.twist();
    match (*x, *y) {
        (Plus(_), Plus(_)) | (Minus(_), Minus(_)) => WeilRep::plus(t),
        (Plus(_), Minus(_)) | (Minus(_), Plus(_)) => WeilRep::minus(t),
        (Plus(_) | Minus(_), Disc { k, .. }) | (Disc { k, .. }, Plus(_) | Minus(_)) => {
            WeilRep::irreducible(Disc { k, t })
        }
        (Disc { k: k1, .. }, Disc { k: k2, .. }) => {
            let (hi, lo) = if k1 >= k2 { (k1, k2) } else { (k2, k1) };
            let big = WeilRep::irreducible(Disc { k: hi + lo - 1, t });
            // hi - lo + 1 >= 1, so this cannot fail
            let small = WeilRep::disc(hi - lo + 1, t).expect("weight >= 1");
            big.direct_sum(&small)
        }
    }
}

/// Tensor product, extended bilinearly over direct sums.
pub fn tensor(x: &WeilRep, y: &WeilRep) -> WeilRep {
    let mut out = WeilRep::zero();
    for (a, ma) in x.iter() {
        for (b, mb) in y.iter() {
            for (c, mc) in tensor_irr(a, b).iter() {
                out.push(*c, ma * mb * mc);
            }
        }
    }
    out
}

/// `sym^m` of an irreducible. `sym^0` is the trivial representation.
pub fn sym_power(x: &WeilIrr, m: u32) -> WeilRep {
    use WeilIrr::*;
    if m == 0 {
        return WeilRep::plus(tw(0));
    }
    let mt = x.twist() * tw(m as i64);
    match *x {
        Plus(_) => WeilRep::plus(mt),
        Minus(_) => WeilRep::irreducible(WeilIrr::signed(m as u64, mt)),
        Disc { k, .. } => {
            let km1 = k - 1;
            let mut out = WeilRep::zero();
            if m % 2 == 1 {
                let half = (m - 1) / 2;
                for l in 0..=half {
                    out.push(Disc { k: (2 * l + 1) * km1 + 1, t: mt }, 1);
                }
            } else {
                let half = m / 2;
                out.push(WeilIrr::signed(half as u64 * km1 as u64, mt), 1);
                for l in 1..=half {
                    out.push(Disc { k: 2 * l * km1 + 1, t: mt }, 1);
                }
            }
            out
        }
    }
}

/// `sym^m` of a representation; only irreducible arguments are accepted.
pub fn sym_power_rep(x: &WeilRep, m: u32) -> Result<WeilRep> {
    let irr = x
        .as_irreducible()
        .ok_or_else(|| Error::Unsupported(format!("sym^{m} of the reducible representation {x}")))?;
    Ok(sym_power(&irr, m))
}

/// `∧²[k,t] = [(−)^k, 2t]`.
pub fn wedge2(x: &WeilIrr) -> Result<WeilRep> {
    match *x {
        WeilIrr::Disc { k, t } => Ok(WeilRep::irreducible(WeilIrr::signed(k as u64, t * tw(2)))),
        other => Err(domain!("wedge2 needs a two-dimensional irreducible, got {other}")),
    }
}

/// An exact power of `i`, stored as its exponent mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IPower(u8);

impl IPower {
    pub const ONE: IPower = IPower(0);
    pub const I: IPower = IPower(1);
    pub const MINUS_ONE: IPower = IPower(2);
    pub const MINUS_I: IPower = IPower(3);

    pub fn new(exponent: i64) -> Self {
        IPower(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(&self) -> u8 {
        self.0
    }

    /// `(−1)^e`.
    pub fn sign(e: i64) -> Self {
        IPower::new(2 * e.rem_euclid(2))
    }

    /// `±1` when the value is real.
    pub fn as_sign(&self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl core::ops::Mul for IPower {
    type Output = IPower;
    fn mul(self, rhs: IPower) -> IPower {
        IPower((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for IPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// ε-factor: `ε([+,t]) = 1`, `ε([−,t]) = i`, `ε([k,t]) = i^k`, multiplicative
/// over direct sums.
pub fn epsilon_factor(x: &WeilRep) -> IPower {
    let e: u64 = x
        .iter()
        .map(|(irr, m)| {
            let per = match irr {
                WeilIrr::Plus(_) => 0,
                WeilIrr::Minus(_) => 1,
                WeilIrr::Disc { k, .. } => *k as u64,
            };
            per * m as u64
        })
        .sum();
    IPower::new((e % 4) as i64)
}

/// Archimedean L-factor as products of `Γ_ℝ(s + T)` and `Γ_ℂ(s + T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaFactor {
    pub real_shifts: Vec<Twist>,
    pub complex_shifts: Vec<Twist>,
}

impl GammaFactor {
    /// Degree, counting each `Γ_ℂ` as 2.
    pub fn degree(&self) -> usize {
        self.real_shifts.len() + 2 * self.complex_shifts.len()
    }
}

impl fmt::Display for GammaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, shifts) in [("GammaR", &self.real_shifts), ("GammaC", &self.complex_shifts)] {
            for s in shifts.iter() {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                if s.is_negative() {
                    write!(f, "{name}(s-{})", -s)?;
                } else {
                    write!(f, "{name}(s+{s})")?;
                }
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// `L(s,[+,t]) = Γ_ℝ(s+t)`, `L(s,[−,t]) = Γ_ℝ(s+t+1)`,
/// `L(s,[k,t]) = Γ_ℂ(s+t+(k−1)/2)`.
pub fn gamma_factor(x: &WeilRep) -> GammaFactor {
    let mut real_shifts = Vec::new();
    let mut complex_shifts = Vec::new();
    for irr in x.constituents() {
        match irr {
            WeilIrr::Plus(t) => real_shifts.push(t),
            WeilIrr::Minus(t) => real_shifts.push(t + tw(1)),
            WeilIrr::Disc { k, t } => complex_shifts.push(t + Ratio::new(k as i64 - 1, 2)),
        }
    }
    real_shifts.sort();
    complex_shifts.sort();
    GammaFactor { real_shifts, complex_shifts }
}

/// Log of the archimedean analytic conductor: each `Γ_ℝ(s+T)` contributes
/// `max(T/2, 1)` and each `Γ_ℂ(s+T)` contributes `max(T(T+1)/4, 1)`.
pub fn log_analytic_conductor(x: &WeilRep) -> Result<f64> {
    let g = gamma_factor(x);
    let mut total = 0.0;
    for s in &g.real_shifts {
        let t = nonnegative_shift(s)?;
        total += ln((t / 2.0).max(1.0));
    }
    for s in &g.complex_shifts {
        let t = nonnegative_shift(s)?;
        total += ln((t * (t + 1.0) / 4.0).max(1.0));
    }
    Ok(total)
}

fn nonnegative_shift(s: &Twist) -> Result<f64> {
    if s.is_negative() {
        return Err(domain!("negative Gamma shift {s}"));
    }
    Ok(s.to_f64().unwrap_or(f64::NAN))
}

/// Exponent in `sym^A`: odd `2m+1` or even `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymExponent {
    /// `sym^{2m+1}`
    Odd(u32),
    /// `sym^{2n}`
    Even(u32),
}

impl SymExponent {
    pub fn from_power(a: u32) -> Self {
        if a % 2 == 1 {
            SymExponent::Odd((a - 1) / 2)
        } else {
            SymExponent::Even(a / 2)
        }
    }

    pub fn power(&self) -> u32 {
        match *self {
            SymExponent::Odd(m) => 2 * m + 1,
            SymExponent::Even(n) => 2 * n,
        }
    }
}

/// Closed-form root number of `sym^A[k] ⊗ sym^B[k]` for even `k`.
///
/// Equal parities give `+1`. For `sym^{2m+1}[k] ⊗ sym^{2n}[k]` the sign is
/// `(−1)^{(m+1)(n−m) + (m+1)²k/2}` when `m < n` and
/// `(−1)^{(m−n)(m+n+1)/2 + (m+1)²k/2}` when `m >= n`.
pub fn convolution_root_number(a: SymExponent, b: SymExponent, k: u32) -> Result<IPower> {
    if k < 2 || k % 2 == 1 {
        return Err(domain!("weight must be even and >= 2, got {k}"));
    }
    let (m, n) = match (a, b) {
        (SymExponent::Odd(_), SymExponent::Odd(_)) | (SymExponent::Even(_), SymExponent::Even(_)) => {
            return Ok(IPower::ONE)
        }
        (SymExponent::Odd(m), SymExponent::Even(n)) | (SymExponent::Even(n), SymExponent::Odd(m)) => {
            (m as i64, n as i64)
        }
    };
    let weight_part = (m + 1) * (m + 1) * (k as i64 / 2);
    let e = if m < n {
        (m + 1) * (n - m) + weight_part
    } else {
        (m - n) * (m + n + 1) / 2 + weight_part
    };
    Ok(IPower::sign(e))
}

/// `ε(sym^A[k] ⊗ sym^B[k])` computed from the symbolic decomposition.
pub fn symbolic_convolution_root_number(a: u32, b: u32, k: u32) -> Result<IPower> {
    let base = WeilIrr::disc(k, tw(0))?;
    Ok(epsilon_factor(&tensor(&sym_power(&base, a), &sym_power(&base, b))))
}
