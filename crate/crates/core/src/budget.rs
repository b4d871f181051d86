//! Resource budgets gating every potentially exploding enumeration.
//!
//! Defaults suit desk-scale runs; each one can be overridden from the
//! environment as `HITSET_BUDGET_<NAME>` (upper-case field name).

use crate::design::DesignBudget;

#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    /// Max term count during circuit/ABP expansion.
    pub expand_terms: usize,
    pub design_universe: u64,
    pub design_family: u64,
    /// Max points in one materialized grid.
    pub grid_points: u64,
    /// Max candidate polynomials in exhaustive hitting verification.
    pub enum_candidates: u64,
    /// Max monomials in the annihilator linear system.
    pub annihilator_monomials: u64,
    /// Max points materialized by a toy bootstrap stage.
    pub toy_points: u64,
    /// Max assignments searched during extraction.
    pub ki_assignments: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            expand_terms: crate::circuit::DEFAULT_EXPAND_TERMS,
            design_universe: 1 << 20,
            design_family: 1 << 20,
            grid_points: 1 << 22,
            enum_candidates: 1 << 26,
            annihilator_monomials: 1 << 20,
            toy_points: 1 << 22,
            ki_assignments: 1 << 20,
        }
    }
}

impl Budgets {
    /// Applies HITSET_BUDGET_* environment overrides on top of the defaults.
    pub fn from_env() -> Budgets {
        let mut b = Budgets::default();
        fn get(name: &str) -> Option<u64> {
            std::env::var(name).ok().and_then(|v| v.parse().ok())
        }
        if let Some(v) = get("HITSET_BUDGET_EXPAND_TERMS") {
            b.expand_terms = v as usize;
        }
        if let Some(v) = get("HITSET_BUDGET_DESIGN_UNIVERSE") {
            b.design_universe = v;
        }
        if let Some(v) = get("HITSET_BUDGET_DESIGN_FAMILY") {
            b.design_family = v;
        }
        if let Some(v) = get("HITSET_BUDGET_GRID_POINTS") {
            b.grid_points = v;
        }
        if let Some(v) = get("HITSET_BUDGET_ENUM_CANDIDATES") {
            b.enum_candidates = v;
        }
        if let Some(v) = get("HITSET_BUDGET_ANNIHILATOR_MONOMIALS") {
            b.annihilator_monomials = v;
        }
        if let Some(v) = get("HITSET_BUDGET_TOY_POINTS") {
            b.toy_points = v;
        }
        if let Some(v) = get("HITSET_BUDGET_KI_ASSIGNMENTS") {
            b.ki_assignments = v;
        }
        b
    }

    pub fn design(&self) -> DesignBudget {
        DesignBudget { max_universe: self.design_universe, max_family: self.design_family }
    }
}
