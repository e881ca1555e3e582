//! Exhaustive alignment oracle for small products.
//!
//! Enumerates complete firing sequences of the product by depth-first
//! search and keeps the cheapest. Only simple paths (no repeated marking)
//! are enumerated: edge costs are non-negative, so cutting a cycle out of a
//! path never makes it more expensive. Branches already costlier than the
//! best complete sequence are pruned. No priority queue, no closed set and
//! no shared code with [`crate::align`] beyond the firing rule.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::align::{AlignedMove, Alignment, COST_TOLERANCE};
use crate::cost::{CostError, CostFunction};
use crate::net::{Marking, TransitionIdx};
use crate::product::SyncProduct;
use crate::Activity;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration hit the depth cap of {0} before it was exhaustive")]
    DepthCap(usize),
    #[error("no complete firing sequence exists")]
    Infeasible,
    #[error("invalid cost function: {0}")]
    Cost(#[from] CostError),
}

struct Dfs<'a> {
    sp: &'a SyncProduct,
    costs: Vec<f64>,
    depth_cap: usize,
    stack: Vec<Marking>,
    path: Vec<TransitionIdx>,
    best: f64,
    best_path: Vec<TransitionIdx>,
    best_traces: BTreeSet<Vec<Activity>>,
    truncated: f64,
    visited: usize,
}

impl Dfs<'_> {
    fn trace_of(&self, path: &[TransitionIdx]) -> Vec<Activity> {
        path.iter()
            .filter_map(|&t| self.sp.get_move(t).log_label.clone())
            .collect()
    }

    fn visit(&mut self, m: &Marking, cost: f64) {
        self.visited += 1;
        if cost > self.best + COST_TOLERANCE {
            return;
        }
        if m == self.sp.final_marking() {
            let trace = self.trace_of(&self.path);
            if cost < self.best - COST_TOLERANCE {
                self.best = cost;
                self.best_path = self.path.clone();
                self.best_traces.clear();
            } else if cost < self.best {
                self.best = cost;
            }
            self.best_traces.insert(trace);
            return;
        }
        if self.path.len() >= self.depth_cap {
            self.truncated = self.truncated.min(cost);
            return;
        }
        let net = self.sp.net();
        for (t, _) in net.transitions() {
            if !net.is_enabled(m, t) {
                continue;
            }
            let next = net.fire_unchecked(m, t);
            if self.stack.contains(&next) {
                continue;
            }
            self.stack.push(next.clone());
            self.path.push(t);
            self.visit(&next, cost + self.costs[t.index()]);
            self.path.pop();
            self.stack.pop();
        }
    }
}

/// The true minimum-cost alignment, by exhaustive enumeration of firing
/// sequences up to `depth_cap` moves.
///
/// Fails with [`OracleError::DepthCap`] when a truncated branch could still
/// have undercut the reported optimum.
pub fn brute_force_alignment(
    sp: &SyncProduct,
    f: &CostFunction,
    depth_cap: usize,
) -> Result<Alignment, OracleError> {
    f.validate()?;
    let m0 = sp.initial_marking().clone();
    let mut dfs = Dfs {
        sp,
        costs: sp.moves().iter().map(|m| f.edge_cost(m)).collect(),
        depth_cap,
        stack: alloc::vec![m0.clone()],
        path: Vec::new(),
        best: f64::INFINITY,
        best_path: Vec::new(),
        best_traces: BTreeSet::new(),
        truncated: f64::INFINITY,
        visited: 0,
    };
    dfs.visit(&m0, 0.0);

    if dfs.best.is_infinite() {
        return Err(if dfs.truncated.is_finite() {
            OracleError::DepthCap(depth_cap)
        } else {
            OracleError::Infeasible
        });
    }
    if dfs.truncated < dfs.best - COST_TOLERANCE {
        return Err(OracleError::DepthCap(depth_cap));
    }

    let moves: Vec<AlignedMove> = dfs
        .best_path
        .iter()
        .map(|&t| AlignedMove {
            transition: t,
            mv: sp.get_move(t).clone(),
            cost: dfs.costs[t.index()],
        })
        .collect();
    let recovered = dfs.trace_of(&dfs.best_path);
    let tie_candidates: Vec<Vec<Activity>> = dfs.best_traces.into_iter().collect();
    Ok(Alignment {
        total_cost: moves.iter().map(|m| m.cost).sum(),
        recovered,
        moves,
        is_tie: tie_candidates.len() >= 2,
        tie_candidates,
        states_expanded: dfs.visited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::{build_trace_net, SkEvent, SkTrace};
    use crate::net::{NetBuilder, TransitionLabel};
    use crate::product::build_sync_product;
    use crate::tree::running_example_model;
    use alloc::vec;

    fn table1() -> SkTrace {
        let ev = |id: &str, d: &[(&str, f64)]| {
            SkEvent::new(id, d.iter().map(|&(l, p)| (l.into(), p)).collect(), None).unwrap()
        };
        SkTrace::new(
            "1",
            vec![
                ev("e1", &[("A", 0.8), ("B", 0.2)]),
                ev("e2", &[("C", 0.7), ("D", 0.3)]),
                ev("e3", &[("E", 0.6), ("F", 0.4)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn running_example_costs() {
        let sp = build_sync_product(&running_example_model(), &build_trace_net(&table1()).unwrap());
        let exp = brute_force_alignment(&sp, &CostFunction::exponential(), 20).unwrap();
        assert!((exp.total_cost - 1.816_828_184_547_618).abs() < 1e-9);
        assert_eq!(exp.tie_candidates.len(), 1);
        let lin = brute_force_alignment(&sp, &CostFunction::linear(), 20).unwrap();
        assert!((lin.total_cost - 1.5).abs() < 1e-9);
        assert!(lin.is_tie);
        let log = brute_force_alignment(&sp, &CostFunction::logarithmic(2.4), 20).unwrap();
        assert!((log.total_cost - 0.976_419_619_797_625_4).abs() < 1e-9);
    }

    #[test]
    fn single_event_hand_computation() {
        // model ⟨A⟩, trace ⟨{A:0.6, B:0.4}⟩ under linear cost. Candidates:
        // sync A = 0.4; log A + model A = 2 + 0.4e; log B + model A = 2 + 0.6e
        let mut b = NetBuilder::new();
        b.add_place("i").unwrap();
        b.add_place("o").unwrap();
        b.add_transition("t", TransitionLabel::Visible("A".into())).unwrap();
        b.add_arc("i", "t").unwrap();
        b.add_arc("t", "o").unwrap();
        b.set_initial_by_id("i", 1).unwrap();
        b.set_final_by_id("o", 1).unwrap();
        let trace = SkTrace::new(
            "c",
            vec![SkEvent::new("e", vec![("A".into(), 0.6), ("B".into(), 0.4)], None).unwrap()],
        )
        .unwrap();
        let sp = build_sync_product(&b.build().unwrap(), &build_trace_net(&trace).unwrap());
        let a = brute_force_alignment(&sp, &CostFunction::linear(), 5).unwrap();
        assert!((a.total_cost - 0.4).abs() < 1e-12);
        assert_eq!(a.recovered, vec![Activity::from("A")]);
    }

    #[test]
    fn depth_cap_is_reported() {
        let sp = build_sync_product(&running_example_model(), &build_trace_net(&table1()).unwrap());
        assert_eq!(
            brute_force_alignment(&sp, &CostFunction::exponential(), 2).unwrap_err(),
            OracleError::DepthCap(2)
        );
    }
}
