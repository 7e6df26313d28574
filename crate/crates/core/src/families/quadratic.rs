use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CoefficientTable, Family, ToleranceClass};
use crate::arith::{factor, kronecker_symbol};
use crate::math::ln;
use crate::{Error, Result};

fn is_squarefree(n: u64) -> bool {
    n != 0 && factor(n).iter().all(|(_, e)| *e == 1)
}

/// `d ≡ 1 (mod 4)` squarefree, or `d = 4m` with `m ≡ 2, 3 (mod 4)`
/// squarefree; `d = 1` excluded.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Quadratic characters `χ_d` for fundamental discriminants `d` in a range.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFamily {
    discriminants: Vec<i64>,
}

/// Fundamental discriminants in `[lo, hi]`.
pub fn quadratic_family(lo: i64, hi: i64) -> Result<QuadraticFamily> {
    let discriminants: Vec<i64> = (lo..=hi).filter(|d| is_fundamental_discriminant(*d)).collect();
    if discriminants.is_empty() {
        return Err(Error::EmptyFamily(format!("no fundamental discriminant in [{lo}, {hi}]")));
    }
    Ok(QuadraticFamily { discriminants })
}

impl QuadraticFamily {
    pub fn discriminants(&self) -> &[i64] {
        &self.discriminants
    }
}

impl Family for QuadraticFamily {
    fn label(&self) -> String {
        let (first, last) = (self.discriminants[0], self.discriminants[self.discriminants.len() - 1]);
        format!("quadratic(d in [{first}, {last}])")
    }

    fn len(&self) -> usize {
        self.discriminants.len()
    }

    fn degree(&self) -> u32 {
        1
    }

    fn tolerance_class(&self) -> ToleranceClass {
        ToleranceClass::Character
    }

    fn log_conductor(&self, i: usize) -> f64 {
        ln(self.discriminants[i].unsigned_abs() as f64)
    }

    fn sign(&self, _i: usize) -> Option<i8> {
        Some(1)
    }

    fn is_bad(&self, i: usize, p: u64) -> bool {
        self.discriminants[i].unsigned_abs().is_multiple_of(p)
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let mut t = CoefficientTable::new(p, self.len(), nu_max);
        for (i, d) in self.discriminants.iter().enumerate() {
            let k = kronecker_symbol(*d, p as i64)?;
            if k == 0 {
                continue;
            }
            let row = t.good_row_mut(i);
            let mut v = 1.0;
            for slot in row.iter_mut() {
                v *= k as f64;
                *slot = v;
            }
        }
        Ok(t)
    }
}
