use alloc::format;
use alloc::string::String;

use super::{CoefficientTable, Family, FamilyRef, PrimeMoments, ToleranceClass};
use crate::satake::sym_power_b;
use crate::{Error, Result};

/// `sym^M` of every member of a degree-2 self-dual family.
///
/// The conductor follows the archimedean growth `Q ≍ (k/2)^{M+1}` for odd
/// `M` and `(k/2)^M` for even `M`, applied as `log Q_sym = e/2 · log Q`
/// with `e = M + 1` or `M`.
#[derive(Clone)]
pub struct SymLift {
    inner: FamilyRef,
    m: u32,
}

pub fn sym_lift(inner: FamilyRef, m: u32) -> Result<SymLift> {
    if m == 0 {
        return Err(crate::error::domain!("symmetric power must be positive"));
    }
    if inner.degree() != 2 {
        return Err(Error::Unsupported(format!("sym^{m} needs degree-2 members, {} has degree {}", inner.label(), inner.degree())));
    }
    Ok(SymLift { inner, m })
}

impl SymLift {
    fn conductor_scale(&self) -> f64 {
        let e = if self.m % 2 == 1 { self.m + 1 } else { self.m };
        e as f64 / 2.0
    }
}

impl Family for SymLift {
    fn label(&self) -> String {
        format!("sym^{}({})", self.m, self.inner.label())
    }

    fn len(&self) -> usize {
        self.inner.len()
    }

    fn multiplicity(&self, i: usize) -> u32 {
        self.inner.multiplicity(i)
    }

    fn degree(&self) -> u32 {
        self.m + 1
    }

    fn tolerance_class(&self) -> ToleranceClass {
        self.inner.tolerance_class()
    }

    fn log_conductor(&self, i: usize) -> f64 {
        self.conductor_scale() * self.inner.log_conductor(i)
    }

    fn sign(&self, i: usize) -> Option<i8> {
        // ε(sym^{2m} f) = 1; odd powers need more than the base sign
        if self.m.is_multiple_of(2) {
            Some(1)
        } else if self.m == 1 {
            self.inner.sign(i)
        } else {
            None
        }
    }

    fn is_bad(&self, i: usize, p: u64) -> bool {
        self.inner.is_bad(i, p)
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let base = self.inner.coefficient_table(p, nu_max.max(2))?;
        let mut out = CoefficientTable::new(p, self.len(), nu_max);
        for i in 0..self.len() {
            if base.is_good(i) {
                let lifted = sym_power_b(p, base.row(i)[0], self.m, nu_max.max(2))?;
                out.good_row_mut(i).copy_from_slice(&lifted.as_slice()[..nu_max]);
            }
        }
        Ok(out)
    }

    fn prime_limit(&self) -> Option<u64> {
        self.inner.prime_limit()
    }
}

/// `h × g` for a fixed member `h` and every `g` in a family:
/// `b(p^ν) = b_h(p^ν) · b_g(p^ν)`.
#[derive(Clone)]
pub struct Twist {
    fixed: FamilyRef,
    fixed_index: usize,
    family: FamilyRef,
}

pub fn twist_by_fixed(fixed: FamilyRef, fixed_index: usize, family: FamilyRef) -> Result<Twist> {
    if fixed_index >= fixed.len() {
        return Err(Error::Range(format!("member {fixed_index} of {} (size {})", fixed.label(), fixed.len())));
    }
    Ok(Twist { fixed, fixed_index, family })
}

impl Family for Twist {
    fn label(&self) -> String {
        format!("twist({}[{}] x {})", self.fixed.label(), self.fixed_index, self.family.label())
    }

    fn len(&self) -> usize {
        self.family.len()
    }

    fn multiplicity(&self, i: usize) -> u32 {
        self.family.multiplicity(i)
    }

    fn degree(&self) -> u32 {
        self.fixed.degree() * self.family.degree()
    }

    fn tolerance_class(&self) -> ToleranceClass {
        self.fixed.tolerance_class().join(self.family.tolerance_class())
    }

    fn log_conductor(&self, i: usize) -> f64 {
        self.fixed.log_conductor(self.fixed_index) + self.family.log_conductor(i)
    }

    fn is_bad(&self, i: usize, p: u64) -> bool {
        self.fixed.is_bad(self.fixed_index, p) || self.family.is_bad(i, p)
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let h = self.fixed.local_coefficients(self.fixed_index, p, nu_max)?;
        let base = self.family.coefficient_table(p, nu_max)?;
        let mut out = CoefficientTable::new(p, self.len(), nu_max);
        if self.fixed.is_bad(self.fixed_index, p) {
            return Ok(out);
        }
        for i in 0..self.len() {
            if base.is_good(i) {
                let row = out.good_row_mut(i);
                for ((slot, x), y) in row.iter_mut().zip(h.as_slice()).zip(base.row(i)) {
                    *slot = x * y;
                }
            }
        }
        Ok(out)
    }

    /// The fixed factor is common to every member, so the family moments
    /// just scale.
    fn prime_moments(&self, p: u64, nu_max: usize) -> Result<PrimeMoments> {
        let mut m = self.family.prime_moments(p, nu_max)?;
        if self.fixed.is_bad(self.fixed_index, p) {
            m.sums.iter_mut().for_each(|s| *s = 0.0);
            m.good_weight = 0.0;
            return Ok(m);
        }
        let h = self.fixed.local_coefficients(self.fixed_index, p, nu_max)?;
        for (s, x) in m.sums.iter_mut().zip(h.as_slice()) {
            *s *= x;
        }
        Ok(m)
    }

    fn prime_limit(&self) -> Option<u64> {
        match (self.fixed.prime_limit(), self.family.prime_limit()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}
