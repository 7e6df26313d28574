//! Parallel profiles and the `constants` / `density` experiments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use symfam_core::arith::{sieve_primes, PrimeTable};
use symfam_core::families::{Family, FamilyRef};
use symfam_core::rmt::TestFunction;
use symfam_core::stats::{
    family_constant, one_level_density, support_cutoff, Class, DensityReport, FamilyConstant, Profile,
};

use crate::config::{ExperimentConfig, FamilyKind};
use crate::error::{RunError, RunResult};
use crate::registry::Registry;

/// Moments at every prime up to the support cutoff, one rayon task per
/// prime, collected in prime order so the result does not depend on the
/// thread count.
pub fn parallel_profile(
    family: &dyn Family,
    primes: &PrimeTable,
    phi: &TestFunction,
    p_max: u64,
    nu_max: usize,
    log_r: Option<f64>,
) -> RunResult<Profile> {
    let l = log_r.unwrap_or_else(|| family.mean_log_conductor());
    let cutoff = Profile::clamp_cutoff(family, support_cutoff(phi, l, p_max));
    let moments = primes
        .upto(cutoff)
        .par_iter()
        .map(|&p| family.prime_moments(p, nu_max))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = Profile::from_parts(family, cutoff, moments)?;
    Ok(match log_r {
        Some(l) => profile.with_log_r(l)?,
        None => profile,
    })
}

/// `c_F · c_G` against the classified `c_{F×G}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductCheck {
    pub left: Option<i8>,
    pub right: Option<i8>,
    pub expected: Option<i8>,
    pub observed: Option<i8>,
    pub pass: bool,
}

impl ProductCheck {
    fn new(left: Class, right: Class, observed: Class) -> Self {
        let expected = left.value().zip(right.value()).map(|(a, b)| a * b);
        let observed = observed.value();
        ProductCheck { left: left.value(), right: right.value(), expected, observed, pass: expected.is_some() && expected == observed }
    }

    /// `(-1)*(-1)=1:pass`
    pub fn render(&self) -> String {
        let v = |x: Option<i8>| x.map_or("?".to_string(), |x| x.to_string());
        format!(
            "({})*({})={} vs {}:{}",
            v(self.left),
            v(self.right),
            v(self.expected),
            v(self.observed),
            if self.pass { "pass" } else { "fail" }
        )
    }
}

/// One family's constant and density at the configured settings.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub id: String,
    pub label: String,
    pub primes: u64,
    pub constant: FamilyConstant,
    pub density: DensityReport,
    pub product_check: Option<ProductCheck>,
}

impl FamilyResult {
    /// Every reported number is finite.
    pub fn is_finite(&self) -> bool {
        let c = &self.constant;
        let d = &self.density;
        [c.c, c.c_raw, c.r, c.r_raw, d.empirical, d.predicted, d.nu1, d.nu2, d.tail, d.bad_mass, d.log_r]
            .iter()
            .all(|x| x.is_finite())
    }
}

/// Shared state for a run: the sieved primes and the test function.
pub struct Runner {
    pub config: ExperimentConfig,
    pub registry: Registry,
    pub primes: PrimeTable,
    pub phi: TestFunction,
}

impl Runner {
    pub fn new(config: ExperimentConfig) -> RunResult<Runner> {
        let registry = Registry::build(&config)?;
        let phi = config.test_function.build()?;
        let primes = sieve_primes(config.max_primes())?;
        Ok(Runner { config, registry, primes, phi })
    }

    fn tolerance(&self, id: &str, family: &dyn Family) -> f64 {
        use symfam_core::families::ToleranceClass;
        let decl = self.config.family(id).and_then(|d| d.tolerance);
        let class = family.tolerance_class();
        let global = match class {
            ToleranceClass::Character => self.config.tolerance.character,
            ToleranceClass::Elliptic => self.config.tolerance.elliptic,
        };
        decl.or(global).unwrap_or_else(|| class.default_tolerance())
    }

    pub fn evaluate(&self, id: &str, family: &FamilyRef) -> RunResult<FamilyResult> {
        let p_max = self.config.family(id).and_then(|d| d.primes).unwrap_or(self.config.primes);
        let profile =
            parallel_profile(family.as_ref(), &self.primes, &self.phi, p_max, self.config.nu_max, self.config.log_r)?;
        let constant = family_constant(family.as_ref(), &profile, &self.phi, self.tolerance(id, family.as_ref()))?;
        let (c, r) = model_parameters(&constant);
        let density = one_level_density(&profile, &self.phi, c, r)?;
        Ok(FamilyResult { id: id.to_string(), label: family.label(), primes: p_max, constant, density, product_check: None })
    }

    /// Every declared family, with product checks on convolutions whose
    /// factors are declared too.
    pub fn run(&self) -> RunResult<Vec<FamilyResult>> {
        self.run_selected(None)
    }

    /// Like [`Runner::run`], restricted to the given ids when present.
    pub fn run_selected(&self, ids: Option<&[String]>) -> RunResult<Vec<FamilyResult>> {
        let wanted = |id: &str| ids.is_none_or(|ids| ids.iter().any(|x| x == id));
        let mut results: Vec<FamilyResult> = self
            .registry
            .iter()
            .filter(|(id, _)| wanted(id))
            .map(|(id, f)| self.evaluate(id, f))
            .collect::<RunResult<_>>()?;
        let classes: BTreeMap<String, Class> = results.iter().map(|r| (r.id.clone(), r.constant.c_class)).collect();
        for r in &mut results {
            if let Some(FamilyKind::Convolve { left, right, .. }) = self.config.family(&r.id).map(|d| &d.kind) {
                if let (Some(l), Some(rt)) = (classes.get(left), classes.get(right)) {
                    r.product_check = Some(ProductCheck::new(*l, *rt, r.constant.c_class));
                }
            }
        }
        if let Some(bad) = results.iter().find(|r| !r.is_finite()) {
            return Err(RunError::Numeric(format!("non-finite value for family {:?}", bad.id)));
        }
        Ok(results)
    }
}

/// `(c, r)` for the random-matrix model: the classified `c` when there is
/// one (the raw estimate otherwise) and the rank rounded to a nonnegative
/// integer.
pub fn model_parameters(k: &FamilyConstant) -> (f64, f64) {
    let c = k.c_class.value().map_or(k.c, f64::from);
    (c, k.r.max(0.0).round())
}

/// Problems `--check` reports for the constants experiment.
pub fn constant_violations(results: &[FamilyResult]) -> Vec<String> {
    let mut out = Vec::new();
    for r in results {
        if r.constant.c_class == Class::Indeterminate && r.density.members > 1 {
            out.push(format!("{}: c = {:.4} is indeterminate", r.id, r.constant.c));
        }
        if let Some(pc) = &r.product_check {
            if !pc.pass {
                out.push(format!("{}: product check {}", r.id, pc.render()));
            }
        }
    }
    out
}

/// Problems `--check` reports for the density experiment.
pub fn density_violations(results: &[FamilyResult], tolerance: f64) -> Vec<String> {
    results
        .iter()
        .filter(|r| (r.density.empirical - r.density.predicted).abs() > tolerance)
        .map(|r| format!("{}: |D1 emp - pred| = {:.4} > {tolerance}", r.id, (r.density.empirical - r.density.predicted).abs()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = ExperimentConfig::from_toml(
            "primes = 3000\n[[family]]\nid = \"q\"\nkind = \"quadratic\"\nlo = 1000\nhi = 1600\n\
             [[family]]\nid = \"d\"\nkind = \"dirichlet\"\nmodulus = 101\n\
             [[family]]\nid = \"qd\"\nkind = \"convolve\"\nleft = \"q\"\nright = \"d\"\n",
        )
        .unwrap();
        let runner = Runner::new(cfg).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| runner.run().unwrap());
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| runner.run().unwrap());
        assert_eq!(one, four);
        let pc = four[2].product_check.unwrap();
        assert_eq!(pc.expected, Some(0));
    }
}
