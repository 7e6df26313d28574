use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{CoefficientTable, Family, FamilyRef, PrimeMoments, ToleranceClass};
use crate::ec::{is_isomorphic, j_collision_pairs, log_rs_conductor, ConductorPolicy};
use crate::error::domain;
use crate::math::CompensatedSum;
use crate::{Error, Result};

/// Which pairs `(f, g)` are dropped from `F × G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionPolicy {
    /// Keep every pair.
    KeepAll,
    /// Drop `(f, f)` when both factors are the same family.
    Identical,
    /// Drop elliptic pairs with `j(E_t) = j(E'_s)`.
    EqualJ,
    /// Drop elliptic pairs that are isomorphic over ℚ.
    Isomorphic,
}

impl CollisionPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "keep_all" | "none" => Ok(CollisionPolicy::KeepAll),
            "identical" => Ok(CollisionPolicy::Identical),
            "equal_j" | "j" => Ok(CollisionPolicy::EqualJ),
            "isomorphic" => Ok(CollisionPolicy::Isomorphic),
            _ => Err(domain!("unknown collision policy {s:?}")),
        }
    }

    /// `EqualJ` for two elliptic families, `Identical` otherwise.
    pub fn default_for(f: &dyn Family, g: &dyn Family) -> Self {
        if f.as_elliptic().is_some() && g.as_elliptic().is_some() {
            CollisionPolicy::EqualJ
        } else {
            CollisionPolicy::Identical
        }
    }
}

/// Rankin–Selberg family `F × G`: all pairs except the excluded ones, with
/// multiplicity `μ_f μ_g` and `b_{f×g}(p^ν) = b_f(p^ν) b_g(p^ν)`.
///
/// The log-conductor of an elliptic pair comes from the Rankin–Selberg
/// conductor bounds on the two conductor proxies; other pairs add their
/// log-conductors.
#[derive(Clone)]
pub struct Convolution {
    f: FamilyRef,
    g: FamilyRef,
    policy: CollisionPolicy,
    conductor_policy: ConductorPolicy,
    /// Sorted raw indices `a·|G| + b` of dropped pairs.
    excluded: Vec<u64>,
    total_weight: f64,
    mean_log_conductor: f64,
}

pub fn convolve(
    f: FamilyRef,
    g: FamilyRef,
    policy: Option<CollisionPolicy>,
    conductor_policy: ConductorPolicy,
) -> Result<Convolution> {
    let policy = policy.unwrap_or_else(|| CollisionPolicy::default_for(f.as_ref(), g.as_ref()));
    let ng = g.len() as u64;
    let mut excluded: Vec<u64> = match policy {
        CollisionPolicy::KeepAll => Vec::new(),
        CollisionPolicy::Identical => {
            if core::ptr::addr_eq(Arc::as_ptr(&f), Arc::as_ptr(&g)) {
                (0..f.len() as u64).map(|a| a * ng + a).collect()
            } else {
                Vec::new()
            }
        }
        CollisionPolicy::EqualJ | CollisionPolicy::Isomorphic => {
            let (ef, eg) = match (f.as_elliptic(), g.as_elliptic()) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(Error::Unsupported(format!("{policy:?} collisions need two elliptic families"))),
            };
            let mut out = Vec::new();
            for (t, s) in j_collision_pairs(ef.spec(), eg.spec()) {
                if policy == CollisionPolicy::Isomorphic {
                    let (a1, b1) = ef.spec().coefficients_at(t);
                    let (a2, b2) = eg.spec().coefficients_at(s);
                    if !is_isomorphic(&a1, &b1, &a2, &b2) {
                        continue;
                    }
                }
                if let (Some(a), Some(b)) = (ef.index_of(t), eg.index_of(s)) {
                    out.push(a as u64 * ng + b as u64);
                }
            }
            out
        }
    };
    excluded.sort_unstable();
    excluded.dedup();

    let mut conv =
        Convolution { f, g, policy, conductor_policy, excluded, total_weight: 0.0, mean_log_conductor: 0.0 };
    let (weight, log_sum) = conv.weighted_log_conductor_sum();
    if weight <= 0.0 {
        return Err(Error::EmptyFamily(format!("every pair of {} is excluded", conv.label())));
    }
    conv.total_weight = weight;
    conv.mean_log_conductor = log_sum / weight;
    Ok(conv)
}

impl Convolution {
    pub fn factors(&self) -> (&FamilyRef, &FamilyRef) {
        (&self.f, &self.g)
    }

    pub fn policy(&self) -> CollisionPolicy {
        self.policy
    }

    /// Number of dropped pairs.
    pub fn collision_count(&self) -> usize {
        self.excluded.len()
    }

    /// Dropped pairs as member indices.
    pub fn excluded_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let ng = self.g.len() as u64;
        self.excluded.iter().map(move |r| ((r / ng) as usize, (r % ng) as usize))
    }

    /// Member index `i` to the pair of factor indices.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        let mut raw = i as u64;
        loop {
            let skipped = self.excluded.partition_point(|e| *e <= raw) as u64;
            let next = i as u64 + skipped;
            if next == raw {
                break;
            }
            raw = next;
        }
        let ng = self.g.len() as u64;
        ((raw / ng) as usize, (raw % ng) as usize)
    }

    fn pair_log_conductor(&self, a: usize, b: usize) -> f64 {
        match (self.f.integer_conductor(a), self.g.integer_conductor(b)) {
            (Some(c1), Some(c2)) => log_rs_conductor(c1, c2, self.conductor_policy),
            _ => self.f.log_conductor(a) + self.g.log_conductor(b),
        }
    }

    fn weighted_log_conductor_sum(&self) -> (f64, f64) {
        let (nf, ng) = (self.f.len(), self.g.len());
        let mu_f: Vec<f64> = (0..nf).map(|a| self.f.multiplicity(a) as f64).collect();
        let mu_g: Vec<f64> = (0..ng).map(|b| self.g.multiplicity(b) as f64).collect();
        let wf: f64 = mu_f.iter().sum();
        let wg: f64 = mu_g.iter().sum();
        let integral = nf > 0 && ng > 0 && self.f.integer_conductor(0).is_some() && self.g.integer_conductor(0).is_some();
        let mut sum = CompensatedSum::new();
        if integral {
            for a in 0..nf {
                let mut row = CompensatedSum::new();
                for b in 0..ng {
                    row.add(mu_g[b] * self.pair_log_conductor(a, b));
                }
                sum.add(mu_f[a] * row.value());
            }
        } else {
            for a in 0..nf {
                sum.add(mu_f[a] * wg * self.f.log_conductor(a));
            }
            for b in 0..ng {
                sum.add(mu_g[b] * wf * self.g.log_conductor(b));
            }
        }
        let mut weight = wf * wg;
        for (a, b) in self.excluded_pairs() {
            let w = mu_f[a] * mu_g[b];
            weight -= w;
            sum.add(-w * self.pair_log_conductor(a, b));
        }
        (weight, sum.value())
    }
}

impl Family for Convolution {
    fn label(&self) -> String {
        format!("{} x {}", self.f.label(), self.g.label())
    }

    fn len(&self) -> usize {
        self.f.len() * self.g.len() - self.excluded.len()
    }

    fn multiplicity(&self, i: usize) -> u32 {
        let (a, b) = self.pair(i);
        self.f.multiplicity(a) * self.g.multiplicity(b)
    }

    fn total_weight(&self) -> f64 {
        self.total_weight
    }

    fn degree(&self) -> u32 {
        self.f.degree() * self.g.degree()
    }

    fn tolerance_class(&self) -> ToleranceClass {
        self.f.tolerance_class().join(self.g.tolerance_class())
    }

    fn log_conductor(&self, i: usize) -> f64 {
        let (a, b) = self.pair(i);
        self.pair_log_conductor(a, b)
    }

    fn mean_log_conductor(&self) -> f64 {
        self.mean_log_conductor
    }

    fn is_bad(&self, i: usize, p: u64) -> bool {
        let (a, b) = self.pair(i);
        self.f.is_bad(a, p) || self.g.is_bad(b, p)
    }

    /// Materializes all `|F|·|G|` rows; prefer [`Family::prime_moments`].
    fn coefficient_table(&self, p: u64, nu_max: usize) -> Result<CoefficientTable> {
        let tf = self.f.coefficient_table(p, nu_max)?;
        let tg = self.g.coefficient_table(p, nu_max)?;
        let mut out = CoefficientTable::new(p, self.len(), nu_max);
        for i in 0..self.len() {
            let (a, b) = self.pair(i);
            if tf.is_good(a) && tg.is_good(b) {
                let row = out.good_row_mut(i);
                for ((slot, x), y) in row.iter_mut().zip(tf.row(a)).zip(tg.row(b)) {
                    *slot = x * y;
                }
            }
        }
        Ok(out)
    }

    /// `(Σ_F)(Σ_G)` minus the excluded pairs.
    fn prime_moments(&self, p: u64, nu_max: usize) -> Result<PrimeMoments> {
        let (mf, mg, tables) = if self.excluded.is_empty() {
            (self.f.prime_moments(p, nu_max)?, self.g.prime_moments(p, nu_max)?, None)
        } else {
            let tf = self.f.coefficient_table(p, nu_max)?;
            let tg = self.g.coefficient_table(p, nu_max)?;
            let mf = tf.moments(|a| self.f.multiplicity(a) as f64);
            let mg = tg.moments(|b| self.g.multiplicity(b) as f64);
            (mf, mg, Some((tf, tg)))
        };
        let mut out = PrimeMoments {
            prime: p,
            sums: mf.sums.iter().zip(&mg.sums).map(|(x, y)| x * y).collect(),
            good_weight: mf.good_weight * mg.good_weight,
            total_weight: mf.total_weight * mg.total_weight,
        };
        if let Some((tf, tg)) = tables {
            for (a, b) in self.excluded_pairs() {
                let w = (self.f.multiplicity(a) * self.g.multiplicity(b)) as f64;
                out.total_weight -= w;
                if tf.is_good(a) && tg.is_good(b) {
                    out.good_weight -= w;
                    for ((s, x), y) in out.sums.iter_mut().zip(tf.row(a)).zip(tg.row(b)) {
                        *s -= w * x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    fn prime_limit(&self) -> Option<u64> {
        match (self.f.prime_limit(), self.g.prime_limit()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}
