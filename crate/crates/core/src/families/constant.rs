use alloc::format;
use alloc::string::String;

use super::{CoefficientTable, Family, ToleranceClass};
use crate::error::domain;
use crate::Result;

/// `size` identical degree-1 members with `b(p^ν) = value` at every prime.
/// A calibration stub: `value = 0` isolates the `φ̂(0)` term of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantFamily {
    size: usize,
    value: f64,
    log_conductor: f64,
}

impl ConstantFamily {
    pub fn new(size: usize, value: f64, log_conductor: f64) -> Result<Self> {
        if size == 0 {
            return Err(crate::Error::EmptyFamily(String::from("constant family of size 0")));
        }
        if !(log_conductor > 0.0) {
            return Err(domain!("log-conductor must be positive, got {log_conductor}"));
        }
        Ok(ConstantFamily { size, value, log_conductor })
    }
}

impl Family for ConstantFamily {
    fn label(&self) -> String {
        format!("constant(b = {}, size {})", self.value, self.size)
    }

    fn len(&self) -> usize {
        self.size
    }

    fn degree(&self) -> u32 {
        1
    }

    fn tolerance_class(&self) -> ToleranceClass {
        ToleranceClass::Character
    }

    fn log_conductor(&self, _i: usize) -> f64 {
        self.log_conductor
    }

    fn is_bad(&self, _i: usize, _p: u64) -> bool {
        false
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let mut t = CoefficientTable::new(p, self.size, nu_max);
        for i in 0..self.size {
            t.good_row_mut(i).fill(self.value);
        }
        Ok(t)
    }
}
