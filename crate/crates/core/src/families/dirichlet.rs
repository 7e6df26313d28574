use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CoefficientTable, Family, ToleranceClass};
use crate::arith::{characters_mod, is_prime, DirichletCharacter};
use crate::error::domain;
use crate::math::ln;
use crate::Result;

/// The nontrivial Dirichlet characters to a prime modulus `m`.
///
/// Characters keep exact root-of-unity exponents. The family contract is
/// real: `b_χ(p^ν) = Re χ(p)^ν`. The family is closed under conjugation, so
/// family sums of the real parts equal the sums of the complex values.
#[derive(Debug, Clone)]
pub struct DirichletFamily {
    modulus: u64,
    characters: Vec<DirichletCharacter>,
}

pub fn dirichlet_family(m: u64) -> Result<DirichletFamily> {
    if m < 3 || !is_prime(m) {
        return Err(domain!("Dirichlet families need a prime modulus >= 3, got {m}"));
    }
    let characters = characters_mod(m)?.into_iter().filter(|c| !c.is_trivial()).collect();
    Ok(DirichletFamily { modulus: m, characters })
}

impl DirichletFamily {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    /// Index of the first member of the given order.
    pub fn index_of_order(&self, order: u64) -> Option<usize> {
        self.characters.iter().position(|c| c.order() == order)
    }
}

impl Family for DirichletFamily {
    fn label(&self) -> String {
        format!("dirichlet(m = {})", self.modulus)
    }

    fn len(&self) -> usize {
        self.characters.len()
    }

    fn degree(&self) -> u32 {
        1
    }

    fn tolerance_class(&self) -> ToleranceClass {
        ToleranceClass::Character
    }

    fn log_conductor(&self, _i: usize) -> f64 {
        ln(self.modulus as f64)
    }

    fn is_bad(&self, _i: usize, p: u64) -> bool {
        p == self.modulus
    }

    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let mut t = CoefficientTable::new(p, self.len(), nu_max);
        if p == self.modulus {
            return Ok(t);
        }
        for (i, chi) in self.characters.iter().enumerate() {
            let row = t.good_row_mut(i);
            for (nu, slot) in row.iter_mut().enumerate() {
                *slot = chi.real_power(p as i64, nu as u32 + 1);
            }
        }
        Ok(t)
    }
}
