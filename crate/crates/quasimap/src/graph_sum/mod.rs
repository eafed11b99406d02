//! Localization graph sum for local P¹×P¹: Hodge integrals, vertex
//! correlators, decorated graphs, and edge and leg terms.

pub mod anomaly;
pub mod assemble;
pub mod correlator;
pub mod edge;
pub mod graphs;
pub mod hodge;

pub use anomaly::{anomaly_check, AnomalyReport};
pub use assemble::{assemble, graph_contribution, hodge_class, vertex_contribution, GraphWeights, LocalCorrelatorProvider, LocalWeights, TableProvider};
pub use correlator::{correlator_t, reduce_correlator, PFunction, TPoly};
pub use edge::{coefficient_identity, edge_checks, edge_contribution, leg_contribution, CoeffCheck, EdgeCheck, EdgeData, EdgeMatrix};
pub use graphs::{enumerate_graphs, enumerate_graphs_over, DecoratedGraph, Flag, FlagKind, FIXED_POINTS};
pub use hodge::{HodgeTable, LambdaMono};
