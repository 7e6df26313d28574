use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Ratio;

use super::{CoefficientTable, Family, ToleranceClass};
use crate::math::powf;
use crate::satake::hecke_power_sums_into;
use crate::tau::ramanujan_tau;
use crate::weil::{epsilon_factor, log_analytic_conductor, WeilRep};
use crate::{Error, Result};

/// Default number of τ values computed by [`cusp_form_delta`].
pub const DEFAULT_TAU_BOUND: usize = 10_000;

/// The single weight-12 level-1 cusp form Δ with `a(p) = τ(p)/p^{11/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFamily {
    tau: Vec<i128>,
    log_conductor: f64,
    sign: i8,
}

/// Δ with τ precomputed up to `bound`.
pub fn cusp_form_delta(bound: usize) -> Result<DeltaFamily> {
    let tau = ramanujan_tau(bound)?;
    let arch = WeilRep::disc(12, Ratio::from_integer(0))?;
    let log_conductor = log_analytic_conductor(&arch)?;
    let sign = epsilon_factor(&arch).as_sign().unwrap_or(0);
    Ok(DeltaFamily { tau, log_conductor, sign })
}

impl DeltaFamily {
    pub fn tau(&self, n: usize) -> Result<i128> {
        self.tau
            .get(n)
            .copied()
            .ok_or_else(|| Error::Range(format!("tau({n}) beyond the precomputed bound {}", self.tau.len() - 1)))
    }

    /// `τ(p)/p^{11/2}`
    pub fn normalized(&self, p: u64) -> Result<f64> {
        Ok(self.tau(p as usize)? as f64 / powf(p as f64, 5.5))
    }
}

impl Family for DeltaFamily {
    fn label(&self) -> String {
        String::from("delta")
    }

    fn len(&self) -> usize {
        1
    }

    fn degree(&self) -> u32 {
        2
    }

    fn tolerance_class(&self) -> ToleranceClass {
        ToleranceClass::Elliptic
    }

    fn log_conductor(&self, _i: usize) -> f64 {
        self.log_conductor
    }

    fn sign(&self, _i: usize) -> Option<i8> {
        Some(self.sign)
    }

    fn is_bad(&self, _i: usize, _p: u64) -> bool {
        false
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let a = self.normalized(p)?;
        let mut t = CoefficientTable::new(p, 1, nu_max);
        hecke_power_sums_into(a, t.good_row_mut(0));
        Ok(t)
    }

    fn prime_limit(&self) -> Option<u64> {
        Some(self.tau.len() as u64 - 1)
    }
}
