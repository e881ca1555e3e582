//! Edge costs of the reachability multigraph.
//!
//! Synchronous moves cost a decreasing function of their probability `p`
//! with `cost(1) = 0`:
//!
//! | kind        | cost                |
//! |-------------|---------------------|
//! | exponential | `1 - e^(1 - 1/p)`   |
//! | linear      | `1 - p`             |
//! | logarithmic | `-ln(p) / c`        |
//!
//! Visible model moves cost 1 and silent ones 0. Log moves cost
//! `1 + epsilon * (1 - p)`, so among otherwise equal nonsynchronous options
//! the more probable trace label wins.

use core::fmt;

use thiserror::Error;

use crate::log::SkTrace;
use crate::product::{Move, MoveKind};

pub const DEFAULT_LOG_C: f64 = 2.4;
pub const DEFAULT_EPSILON: f64 = 1e-4;
pub const DEFAULT_P_MIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostKind {
    Exponential,
    Linear,
    Logarithmic { c: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("normalization constant must be positive and finite, got {0}")]
    BadConstant(f64),
    #[error("epsilon must lie in [0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("probability clamp must lie in (0, 1), got {0}")]
    BadClamp(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostFunction {
    pub kind: CostKind,
    /// Log-move perturbation.
    pub epsilon: f64,
    /// Probabilities are clamped to `[p_min, 1]` before evaluation.
    pub p_min: f64,
}

impl CostFunction {
    pub fn new(kind: CostKind) -> Self {
        CostFunction {
            kind,
            epsilon: DEFAULT_EPSILON,
            p_min: DEFAULT_P_MIN,
        }
    }

    pub fn exponential() -> Self {
        Self::new(CostKind::Exponential)
    }

    pub fn linear() -> Self {
        Self::new(CostKind::Linear)
    }

    pub fn logarithmic(c: f64) -> Self {
        Self::new(CostKind::Logarithmic { c })
    }

    /// Logarithmic cost normalized so that no synchronous edge of `trace`
    /// costs more than 1: `c = max(-ln p)` over all event supports.
    pub fn logarithmic_auto(trace: &SkTrace) -> Self {
        let c = trace
            .events()
            .iter()
            .flat_map(|e| e.distribution().iter().map(|(_, p)| -libm::log(*p)))
            .fold(0.0, f64::max);
        // a fully certain trace has only zero-cost syncs; any c works
        Self::logarithmic(if c > 0.0 { c } else { 1.0 })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_p_min(mut self, p_min: f64) -> Self {
        self.p_min = p_min;
        self
    }

    pub fn validate(&self) -> Result<(), CostError> {
        if let CostKind::Logarithmic { c } = self.kind {
            if !(c > 0.0 && c.is_finite()) {
                return Err(CostError::BadConstant(c));
            }
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(CostError::BadEpsilon(self.epsilon));
        }
        if !(self.p_min > 0.0 && self.p_min < 1.0) {
            return Err(CostError::BadClamp(self.p_min));
        }
        Ok(())
    }

    fn clamp(&self, p: f64) -> f64 {
        p.clamp(self.p_min, 1.0)
    }

    /// Cost of a synchronous move with probability `p`.
    pub fn sync_cost(&self, p: f64) -> f64 {
        let p = self.clamp(p);
        let cost = match self.kind {
            CostKind::Exponential => 1.0 - libm::exp(1.0 - 1.0 / p),
            CostKind::Linear => 1.0 - p,
            CostKind::Logarithmic { c } => -libm::log(p) / c,
        };
        cost.max(0.0)
    }

    /// Cost of a log move on a trace transition with probability `p`.
    pub fn log_move_cost(&self, p: f64) -> f64 {
        1.0 + self.epsilon * (1.0 - self.clamp(p))
    }

    pub fn model_move_cost(&self, silent: bool) -> f64 {
        if silent {
            0.0
        } else {
            1.0
        }
    }

    /// Cost of a product move.
    pub fn edge_cost(&self, m: &Move) -> f64 {
        match m.kind {
            MoveKind::Sync => self.sync_cost(m.probability.unwrap_or(1.0)),
            MoveKind::Log => self.log_move_cost(m.probability.unwrap_or(1.0)),
            MoveKind::Model => self.model_move_cost(m.is_silent()),
        }
    }

    /// Short name used in reports: `exp`, `lin`, `log:<c>`.
    pub fn name(&self) -> CostName {
        CostName(self.kind)
    }
}

pub struct CostName(CostKind);

impl fmt::Display for CostName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            CostKind::Exponential => f.write_str("exp"),
            CostKind::Linear => f.write_str("lin"),
            CostKind::Logarithmic { c } => write!(f, "log:{c}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::TransitionLabel;
    use alloc::string::ToString;

    fn sync(p: f64) -> Move {
        Move {
            kind: MoveKind::Sync,
            model_transition: None,
            log_transition: None,
            model_label: Some(TransitionLabel::Visible("A".into())),
            log_label: Some("A".into()),
            probability: Some(p),
        }
    }

    #[test]
    fn certain_sync_is_free_for_every_kind() {
        for f in [CostFunction::exponential(), CostFunction::linear(), CostFunction::logarithmic(2.4)] {
            assert_eq!(f.edge_cost(&sync(1.0)), 0.0);
        }
    }

    #[test]
    fn reference_values() {
        assert!((CostFunction::exponential().sync_cost(0.5) - 0.632_120_558_828_557_7).abs() < 1e-12);
        assert!((CostFunction::logarithmic(2.4).sync_cost(0.2) - 0.670_599_130_180_875_1).abs() < 1e-12);
        assert!((CostFunction::linear().log_move_cost(0.8) - 1.00002).abs() < 1e-12);
    }

    #[test]
    fn log_moves_prefer_probable_labels() {
        let f = CostFunction::linear();
        assert!(f.log_move_cost(0.8) < f.log_move_cost(0.2));
        assert!(f.log_move_cost(0.8) > 1.0);
        assert_eq!(f.with_epsilon(0.0).log_move_cost(0.2), 1.0);
    }

    #[test]
    fn model_move_costs() {
        let f = CostFunction::exponential();
        let mut m = sync(1.0);
        m.kind = MoveKind::Model;
        m.log_label = None;
        m.probability = None;
        assert_eq!(f.edge_cost(&m), 1.0);
        m.model_label = Some(TransitionLabel::Silent);
        assert_eq!(f.edge_cost(&m), 0.0);
    }

    #[test]
    fn strictly_decreasing_and_bounded_near_zero() {
        for f in [CostFunction::exponential(), CostFunction::linear(), CostFunction::logarithmic(2.4)] {
            // 1 - e^(1-1/p) rounds to exactly 1.0 below p ≈ 0.027, so strictness
            // is only checked where binary64 can resolve it
            let mut prev = f64::INFINITY;
            for i in 1..=1000 {
                let p = i as f64 / 1000.0;
                let c = f.sync_cost(p);
                if p >= 0.05 {
                    assert!(c < prev, "{} not decreasing at {p}", f.name());
                } else {
                    assert!(c <= prev, "{} increasing at {p}", f.name());
                }
                prev = c;
            }
            assert!(f.sync_cost(0.0).is_finite());
        }
    }

    #[test]
    fn auto_constant_caps_sync_costs_at_one() {
        let t = SkTrace::new(
            "c",
            alloc::vec![crate::log::SkEvent::new("e", alloc::vec![("A".into(), 0.05), ("B".into(), 0.95)], None).unwrap()],
        )
        .unwrap();
        let f = CostFunction::logarithmic_auto(&t);
        assert!((f.sync_cost(0.05) - 1.0).abs() < 1e-12);
        assert!(f.sync_cost(0.95) < 1.0);
    }

    #[test]
    fn validation_and_names() {
        assert!(CostFunction::logarithmic(0.0).validate().is_err());
        assert!(CostFunction::linear().with_epsilon(1.0).validate().is_err());
        assert!(CostFunction::linear().with_p_min(0.0).validate().is_err());
        assert!(CostFunction::exponential().validate().is_ok());
        assert_eq!(CostFunction::logarithmic(2.4).name().to_string(), "log:2.4");
        assert_eq!(CostFunction::exponential().name().to_string(), "exp");
    }
}
