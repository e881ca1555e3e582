//! Trace recovery from stochastically known (SK) event logs.
//!
//! An SK trace carries, for every event, a probability distribution over
//! activity labels. This crate encodes such a trace as a chain-shaped
//! stochastic trace net, composes it with a reference process model into a
//! stochastic synchronous product, and searches the product's reachability
//! multigraph for a minimum-cost alignment. The trace side of that alignment
//! is the recovered trace.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! tool and anything touching the clock or the file system live in the
//! companion `sktr` crate.
//!
//! Module map:
//!
//! * [`net`]: labeled Petri nets, markings and the firing rule.
//! * [`log`]: SK events and traces, trace-net construction, Argmax baseline.
//! * [`product`]: the stochastic synchronous product and its moves.
//! * [`cost`]: cost functions over move probabilities.
//! * [`align`]: on-the-fly shortest-path search for optimal alignments.
//! * [`oracle`]: exhaustive enumeration used to validate the search.
//! * [`noise`]: noise injection, accuracy scoring and `P_a` sweeps.
//! * [`tree`]: process trees, their Petri-net translation and random instances.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod align;
pub mod cost;
pub mod log;
pub mod net;
pub mod noise;
pub mod oracle;
pub mod product;
pub mod tree;

mod activity;

pub use activity::Activity;
pub use align::{
    conformance_cost, extract_recovered_trace, search_optimal_alignment, AlignError, AlignedMove,
    Alignment, Heuristic, SearchLimits, SearchOptions,
};
pub use cost::{CostFunction, CostKind};
pub use log::{argmax_recover, build_trace_net, LogError, SkEvent, SkTrace, StochasticTraceNet};
pub use net::{Marking, NetBuilder, NetError, PlaceIdx, SystemNet, TransitionIdx, TransitionLabel};
pub use noise::{LabelPool, Method, NoiseConfig, NoiseError, SweepReport, SweepRow};
pub use oracle::brute_force_alignment;
pub use product::{build_sync_product, Move, MoveKind, SyncProduct};
