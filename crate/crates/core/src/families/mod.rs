//! Families of L-functions and the data the statistics need from them.
//!
//! A family serves, prime by prime, a [`CoefficientTable`] with one row
//! `b(p), …, b(p^{ν_max})` per member, and the [`PrimeMoments`] reduced from
//! it. Members with bad reduction at `p` are flagged and contribute zero.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::satake::LocalCoefficients;
use crate::Result;

mod constant;
mod convolution;
mod delta;
mod dirichlet;
mod elliptic;
mod lift;
mod quadratic;

pub use constant::ConstantFamily;
pub use convolution::{convolve, CollisionPolicy, Convolution};
pub use delta::{cusp_form_delta, DeltaFamily, DEFAULT_TAU_BOUND};
pub use dirichlet::{dirichlet_family, DirichletFamily};
pub use elliptic::{elliptic_family, EllipticFamily};
pub use lift::{sym_lift, twist_by_fixed, SymLift, Twist};
pub use quadratic::{is_fundamental_discriminant, quadratic_family, QuadraticFamily};

/// Shared handle to a family.
pub type FamilyRef = Arc<dyn Family>;

/// Default classification tolerance bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToleranceClass {
    /// Dirichlet-character families; averages converge quickly.
    Character,
    /// Families built from elliptic curves or cusp forms.
    Elliptic,
}

impl ToleranceClass {
    pub fn default_tolerance(&self) -> f64 {
        match self {
            ToleranceClass::Character => 0.05,
            ToleranceClass::Elliptic => 0.2,
        }
    }

    /// The coarser of two classes.
    pub fn join(self, other: ToleranceClass) -> ToleranceClass {
        if self == ToleranceClass::Elliptic || other == ToleranceClass::Elliptic {
            ToleranceClass::Elliptic
        } else {
            ToleranceClass::Character
        }
    }
}

/// Row-major `len × ν_max` table of `b(p^ν)` with good-reduction flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    prime: u64,
    nu_max: usize,
    values: Vec<f64>,
    good: Vec<bool>,
}

impl CoefficientTable {
    /// All members bad, all coefficients zero.
    pub fn new(prime: u64, len: usize, nu_max: usize) -> Self {
        CoefficientTable { prime, nu_max, values: vec![0.0; len * nu_max], good: vec![false; len] }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn nu_max(&self) -> usize {
        self.nu_max
    }

    pub fn len(&self) -> usize {
        self.good.len()
    }

    pub fn is_empty(&self) -> bool {
        self.good.is_empty()
    }

    /// Mark member `i` good and return its row for filling.
    pub fn good_row_mut(&mut self, i: usize) -> &mut [f64] {
        self.good[i] = true;
        &mut self.values[i * self.nu_max..(i + 1) * self.nu_max]
    }

    pub fn is_good(&self, i: usize) -> bool {
        self.good[i]
    }

    /// Row of member `i`; zeros when bad.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.nu_max..(i + 1) * self.nu_max]
    }

    /// Reduce to moments using per-member weights.
    pub fn moments(&self, weight: impl Fn(usize) -> f64) -> PrimeMoments {
        let mut m = PrimeMoments::zero(self.prime, self.nu_max);
        for i in 0..self.len() {
            let w = weight(i);
            m.total_weight += w;
            if self.good[i] {
                m.good_weight += w;
                for (s, b) in m.sums.iter_mut().zip(self.row(i)) {
                    *s += w * b;
                }
            }
        }
        m
    }
}

/// Family-wide sums at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeMoments {
    pub prime: u64,
    /// `sums[ν−1] = Σ_{good f} μ_f b_f(p^ν)`
    pub sums: Vec<f64>,
    /// `Σ_{good f} μ_f`
    pub good_weight: f64,
    /// `Σ_f μ_f`
    pub total_weight: f64,
}

impl PrimeMoments {
    pub fn zero(prime: u64, nu_max: usize) -> Self {
        PrimeMoments { prime, sums: vec![0.0; nu_max], good_weight: 0.0, total_weight: 0.0 }
    }

    /// Average of `b(p^ν)` over members good at `p`.
    pub fn good_average(&self, nu: usize) -> Option<f64> {
        (self.good_weight > 0.0).then(|| self.sums[nu - 1] / self.good_weight)
    }

    /// `Σ b(p^ν)/|F|` with bad members counted as zero.
    pub fn total_average(&self, nu: usize) -> f64 {
        if self.total_weight > 0.0 {
            self.sums[nu - 1] / self.total_weight
        } else {
            0.0
        }
    }

    /// Share of the family (by weight) with bad reduction at `p`.
    pub fn bad_fraction(&self) -> f64 {
        if self.total_weight > 0.0 {
            1.0 - self.good_weight / self.total_weight
        } else {
            0.0
        }
    }

    pub fn nu_max(&self) -> usize {
        self.sums.len()
    }
}

/// A finite family of self-dual L-functions given by local data.
pub trait Family: Send + Sync {
    /// Short human-readable description.
    fn label(&self) -> String;

    /// Number of distinct members.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn multiplicity(&self, _i: usize) -> u32 {
        1
    }

    /// `|F|` counted with multiplicity.
    fn total_weight(&self) -> f64 {
        (0..self.len()).map(|i| self.multiplicity(i) as f64).sum()
    }

    /// Degree of every member's L-function.
    fn degree(&self) -> u32;

    fn tolerance_class(&self) -> ToleranceClass;

    fn log_conductor(&self, i: usize) -> f64;

    /// Multiplicity-weighted mean of `log_conductor`.
    fn mean_log_conductor(&self) -> f64 {
        let mut s = crate::math::CompensatedSum::new();
        for i in 0..self.len() {
            s.add(self.multiplicity(i) as f64 * self.log_conductor(i));
        }
        s.value() / self.total_weight()
    }

    /// Root number of member `i` when known.
    fn sign(&self, _i: usize) -> Option<i8> {
        None
    }

    fn is_bad(&self, i: usize, p: u64) -> bool;

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable>;

    fn local_coefficients(&self, i: usize, p: u64, nu_max: usize) -> Result<LocalCoefficients> {
        let table = self.coefficient_table(p, nu_max)?;
        if table.is_good(i) {
            LocalCoefficients::new(p, self.degree(), table.row(i).into())
        } else {
            Ok(LocalCoefficients::ramified(p, self.degree(), nu_max))
        }
    }

    fn prime_moments(&self, p: u64, nu_max: usize) -> Result<PrimeMoments> {
        Ok(self.coefficient_table(p, nu_max)?.moments(|i| self.multiplicity(i) as f64))
    }

    /// Integer conductor of member `i` when the family has one.
    fn integer_conductor(&self, _i: usize) -> Option<u128> {
        None
    }

    /// The elliptic-curve data behind the family, if any.
    fn as_elliptic(&self) -> Option<&EllipticFamily> {
        None
    }

    /// Largest prime the family can serve, if bounded.
    fn prime_limit(&self) -> Option<u64> {
        None
    }
}
