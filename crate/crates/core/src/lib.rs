//! Scattering quantum-walk search on the complete graph.
//!
//! The walker moves on the directed edges of `K_N`; `v` of the `N` vertices
//! are marked and reflect with phase `e^{iφ}`. Alongside the search success
//! probability the crate tracks the relative-entropy and l1-norm coherence of
//! the walker, the oracle-query cost as a function of `φ`, and the behaviour
//! of incoherent (diagonal) initial states.
//!
//! Two engines are provided: [`walk::EdgeStateVector`] simulates the full
//! `N (N - 1)`-dimensional state, and [`reduced::ReducedState`] runs the
//! equivalent four-dimensional dynamics for symmetric states. The reduced
//! engine is the source of truth for coherence traces and query costs; the
//! full engine is used for basis-state ensembles and cross-checks.

pub mod coherence;
pub mod config;
pub mod edges;
pub mod error;
pub mod incoherent;
pub mod queries;
pub mod reduced;
pub mod stats;
pub mod validate;
pub mod walk;

pub use coherence::{coherence_direct, coherence_symmetric, trace_run, Coherence, CoherenceSample};
pub use config::WalkConfig;
pub use edges::{classify_edge, EdgeIndexer, SubspaceLabel};
pub use error::{Result, WalkError};
pub use incoherent::DiagonalEnsemble;
pub use queries::{PhasePoint, QueryCurve, SweepOptions};
pub use reduced::{ReducedCoefficients, ReducedState};
pub use walk::EdgeStateVector;

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
