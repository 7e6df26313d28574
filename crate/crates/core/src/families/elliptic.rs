use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CoefficientTable, Family, ToleranceClass};
use crate::ec::{conductor_proxy_u128, EllipticFamilySpec, TraceTable};
use crate::math::{ln, sqrt};
use crate::satake::hecke_power_sums_into;
use crate::{Error, Result};

/// Fibers `E_t: y² = x³ + A(t)x + B(t)` of a one-parameter family.
///
/// `b_t(p) = a_t(p)/√p` and higher powers follow the Hecke recursion, so
/// `b_t(p²) = a_t(p)²/p − 2`. Primes 2 and 3 are always bad; `p >= 5` is
/// bad for `E_t` when `p | Δ(t)`. Singular fibers are dropped and recorded.
#[derive(Debug, Clone)]
pub struct EllipticFamily {
    spec: EllipticFamilySpec,
    members: Vec<i64>,
    conductors: Vec<u128>,
    log_conductors: Vec<f64>,
    singular: Vec<i64>,
}

pub fn elliptic_family(spec: EllipticFamilySpec) -> Result<EllipticFamily> {
    let mut members = Vec::with_capacity(spec.len());
    let mut conductors = Vec::with_capacity(spec.len());
    let mut singular = Vec::new();
    for t in spec.params() {
        let (a, b) = spec.coefficients_at(t);
        match conductor_proxy_u128(&a, &b) {
            Ok(c) => {
                members.push(t);
                conductors.push(c);
            }
            Err(Error::SingularCurve) => singular.push(t),
            Err(e) => return Err(e),
        }
    }
    if members.is_empty() {
        return Err(Error::EmptyFamily(format!("no nonsingular fiber in {spec}")));
    }
    let log_conductors = conductors.iter().map(|c| ln(*c as f64)).collect();
    Ok(EllipticFamily { spec, members, conductors, log_conductors, singular })
}

impl EllipticFamily {
    pub fn spec(&self) -> &EllipticFamilySpec {
        &self.spec
    }

    /// Parameters `t` of the members, ascending.
    pub fn members(&self) -> &[i64] {
        &self.members
    }

    /// Parameters skipped because `Δ(t) = 0`.
    pub fn singular_fibers(&self) -> &[i64] {
        &self.singular
    }

    pub fn index_of(&self, t: i64) -> Option<usize> {
        self.members.binary_search(&t).ok()
    }

    /// `a_t(p)` for member `i` and `p >= 5`.
    pub fn trace(&self, i: usize, p: u64) -> Result<i64> {
        let table = TraceTable::new(p)?;
        let r = self.members[i].rem_euclid(p as i64) as u64;
        Ok(table.trace(self.spec.a.eval_mod(r, p), self.spec.b.eval_mod(r, p)))
    }

    fn fill_row(row: &mut [f64], a_p: i64, p: u64) {
        hecke_power_sums_into(a_p as f64 / sqrt(p as f64), row);
    }
}

impl Family for EllipticFamily {
    fn label(&self) -> String {
        format!("elliptic({})", self.spec)
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn degree(&self) -> u32 {
        2
    }

    fn tolerance_class(&self) -> ToleranceClass {
        ToleranceClass::Elliptic
    }

    fn log_conductor(&self, i: usize) -> f64 {
        self.log_conductors[i]
    }

    fn is_bad(&self, i: usize, p: u64) -> bool {
        p < 5 || {
            let r = self.members[i].rem_euclid(p as i64) as u64;
            let a = self.spec.a.eval_mod(r, p) as u128;
            let b = self.spec.b.eval_mod(r, p) as u128;
            let p = p as u128;
            (4 * (a * a % p * a % p) + 27 * (b * b % p)).is_multiple_of(p)
        }
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let mut table = CoefficientTable::new(p, self.len(), nu_max);
        if p < 5 {
            return Ok(table);
        }
        let traces = TraceTable::new(p)?;
        if (p as usize) <= self.len() {
            // every residue class is hit; one point count per class
            let fibers = traces.fiber_traces(&self.spec);
            for (i, t) in self.members.iter().enumerate() {
                if !fibers.is_bad(*t) {
                    Self::fill_row(table.good_row_mut(i), fibers.at(*t), p);
                }
            }
        } else {
            for i in 0..self.len() {
                if self.is_bad(i, p) {
                    continue;
                }
                let r = self.members[i].rem_euclid(p as i64) as u64;
                let a_p = traces.trace(self.spec.a.eval_mod(r, p), self.spec.b.eval_mod(r, p));
                Self::fill_row(table.good_row_mut(i), a_p, p);
            }
        }
        Ok(table)
    }

    fn integer_conductor(&self, i: usize) -> Option<u128> {
        Some(self.conductors[i])
    }

    fn as_elliptic(&self) -> Option<&EllipticFamily> {
        Some(self)
    }
}
