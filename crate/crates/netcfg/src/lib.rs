//! Configuration inequalities for networks of independent sources.
//!
//! A network is a hypergraph: parties are vertices and every independent
//! source — classical variable, quantum state, or no-signalling box — is a
//! hyperedge over the parties it reaches. Whatever the sources are, the
//! joint outcome distribution of local measurements obeys
//!
//! ```text
//! P(a_1 .. a_n)  <=  prod_j  p(a_j)^(s_j)
//! ```
//!
//! whenever the exponent vector `s` is a fractional independent set of the
//! hypergraph: `0 <= s_j <= 1` and the weights across every source sum to at
//! most 1. Violating such an inequality therefore refutes the topology
//! itself, not just a particular physical model.
//!
//! The crate synthesizes exponent vectors ([`fis`]), simulates classical
//! ([`classical`]) and quantum ([`quantum`]) networks exactly, evaluates the
//! inequalities ([`inequality`]), applies them to entanglement witnessing
//! and topology compatibility ([`witness`]), and reproduces noisy-state
//! visibility regions ([`experiments`]). The `netcfg` binary wires it all
//! into a command line.
//!
//! ```
//! use netcfg::fis::{fis_greedy, is_valid_fis};
//! use netcfg::topology::{BuiltinKind, NetworkTopology};
//!
//! let triangle = NetworkTopology::builtin(BuiltinKind::Complete, 3, 2)?;
//! let weights = fis_greedy(&triangle);
//! assert_eq!(weights.render(), "1/2 1/2 1/2");
//! assert!(is_valid_fis(&triangle, &weights)?);
//! # Ok::<(), netcfg::Error>(())
//! ```

pub mod classical;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod fis;
pub mod inequality;
pub mod quantum;
pub mod topology;
pub mod witness;

pub use dist::OutcomeDistribution;
pub use error::{Error, Result};
pub use fis::FractionalWeights;
pub use topology::NetworkTopology;
