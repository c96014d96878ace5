//! Budgets and objectives shared by the solvers.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Any,
    Perfect,
    /// Minimize egalitarian cost; with `eta`, also require cost at most `eta`.
    Egalitarian {
        eta: Option<u64>,
    },
}

/// Distance semantics for near stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Total swaps over all lists.
    Global,
    /// Swaps per list.
    Local,
}

/// Budgets for one analysis: `d` for robustness, `d_g`/`d_l` for global and
/// local near stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisQuery {
    pub d: usize,
    pub d_g: usize,
    pub d_l: usize,
    pub objective: Objective,
}

impl AnalysisQuery {
    pub fn new(d: usize, d_g: usize, d_l: usize, objective: Objective) -> Self {
        AnalysisQuery { d, d_g, d_l, objective }
    }

    /// Builds the objective from a name and an optional bound; a bound is
    /// only meaningful for the egalitarian objective.
    pub fn objective_from(name: &str, eta: Option<u64>) -> Result<Objective> {
        let obj = match name {
            "any" => Objective::Any,
            "perfect" => Objective::Perfect,
            "egalitarian" => Objective::Egalitarian { eta },
            other => return Err(Error::InvalidInput(format!("unknown objective {other:?}"))),
        };
        if eta.is_some() && !matches!(obj, Objective::Egalitarian { .. }) {
            return Err(Error::InvalidInput("--eta only applies to the egalitarian objective".into()));
        }
        Ok(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_requires_egalitarian() {
        assert!(AnalysisQuery::objective_from("perfect", Some(3)).is_err());
        assert_eq!(
            AnalysisQuery::objective_from("egalitarian", Some(3)).unwrap(),
            Objective::Egalitarian { eta: Some(3) }
        );
        assert!(AnalysisQuery::objective_from("best", None).is_err());
    }
}
