//! Turns family declarations into shared family objects, resolving
//! references between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use symfam_core::ec::{ConductorPolicy, EllipticFamilySpec, Poly};
use symfam_core::families::{
    convolve, cusp_form_delta, dirichlet_family, elliptic_family, quadratic_family, sym_lift, twist_by_fixed,
    CollisionPolicy, ConstantFamily, FamilyRef, DEFAULT_TAU_BOUND,
};

use crate::config::{ExperimentConfig, FamilyDecl, FamilyKind};
use crate::error::{RunError, RunResult};

/// Built families by id, in declaration order.
pub struct Registry {
    order: Vec<String>,
    built: BTreeMap<String, FamilyRef>,
}

impl Registry {
    pub fn build(config: &ExperimentConfig) -> RunResult<Registry> {
        let mut reg = Registry { order: Vec::new(), built: BTreeMap::new() };
        let mut visiting = Vec::new();
        for d in &config.families {
            reg.resolve(config, &d.id, &mut visiting)?;
            reg.order.push(d.id.clone());
        }
        Ok(reg)
    }

    pub fn get(&self, id: &str) -> Option<&FamilyRef> {
        self.built.get(id)
    }

    /// `(id, family)` in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &FamilyRef)> {
        self.order.iter().map(|id| (id.as_str(), &self.built[id]))
    }

    fn resolve(&mut self, config: &ExperimentConfig, id: &str, visiting: &mut Vec<String>) -> RunResult<FamilyRef> {
        if let Some(f) = self.built.get(id) {
            return Ok(f.clone());
        }
        if visiting.iter().any(|v| v == id) {
            return Err(RunError::Config(format!("reference cycle through family {id:?}")));
        }
        let decl = config.family(id).ok_or_else(|| RunError::Config(format!("unknown family id {id:?}")))?;
        visiting.push(id.to_string());
        let family = self.construct(config, decl, visiting)?;
        visiting.pop();
        self.built.insert(id.to_string(), family.clone());
        Ok(family)
    }

    fn construct(&mut self, config: &ExperimentConfig, decl: &FamilyDecl, visiting: &mut Vec<String>) -> RunResult<FamilyRef> {
        let ctx = |e: symfam_core::Error| RunError::Config(format!("family {:?}: {e}", decl.id));
        let family: FamilyRef = match &decl.kind {
            FamilyKind::Dirichlet { modulus } => Arc::new(dirichlet_family(*modulus).map_err(ctx)?),
            FamilyKind::Quadratic { lo, hi } => Arc::new(quadratic_family(*lo, *hi).map_err(ctx)?),
            FamilyKind::Elliptic { a, b, start, end } => {
                let a = Poly::parse(a).map_err(ctx)?;
                let b = Poly::parse(b).map_err(ctx)?;
                let spec = EllipticFamilySpec::new(a, b, *start, *end).map_err(ctx)?;
                Arc::new(elliptic_family(spec).map_err(ctx)?)
            }
            FamilyKind::Delta { bound } => Arc::new(cusp_form_delta(bound.unwrap_or(DEFAULT_TAU_BOUND)).map_err(ctx)?),
            FamilyKind::SymLift { of, m } => {
                let inner = self.resolve(config, of, visiting)?;
                Arc::new(sym_lift(inner, *m).map_err(ctx)?)
            }
            FamilyKind::Convolve { left, right, collisions, conductor } => {
                let f = self.resolve(config, left, visiting)?;
                let g = self.resolve(config, right, visiting)?;
                let policy = collisions.as_deref().map(CollisionPolicy::parse).transpose().map_err(ctx)?;
                let cond = conductor.as_deref().map(ConductorPolicy::parse).transpose().map_err(ctx)?.unwrap_or_default();
                Arc::new(convolve(f, g, policy, cond).map_err(ctx)?)
            }
            FamilyKind::Twist { fixed, index, order, family } => {
                let h = self.resolve(config, fixed, visiting)?;
                let g = self.resolve(config, family, visiting)?;
                let idx = match (index, order) {
                    (Some(_), Some(_)) => {
                        return Err(RunError::Config(format!("family {:?}: give index or order, not both", decl.id)))
                    }
                    (Some(i), None) => *i,
                    (None, Some(ord)) => match &config.family(fixed).map(|d| &d.kind) {
                        Some(FamilyKind::Dirichlet { modulus }) => dirichlet_family(*modulus)
                            .map_err(ctx)?
                            .index_of_order(*ord)
                            .ok_or_else(|| {
                                RunError::Config(format!("family {:?}: no character of order {ord} mod {modulus}", decl.id))
                            })?,
                        _ => {
                            return Err(RunError::Config(format!(
                                "family {:?}: order selection needs a dirichlet family",
                                decl.id
                            )))
                        }
                    },
                    (None, None) => 0,
                };
                Arc::new(twist_by_fixed(h, idx, g).map_err(ctx)?)
            }
            FamilyKind::Constant { size, value, log_conductor } => {
                Arc::new(ConstantFamily::new(*size, *value, *log_conductor).map_err(ctx)?)
            }
        };
        Ok(family)
    }
}
