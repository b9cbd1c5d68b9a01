//! Circuit machinery for binary matroids assembled from decomposition trees.
//!
//! The crate provides, end to end:
//!
//! - GF(2) binary matroids with exhaustive, filterable circuit oracles
//!   ([`gf2`]);
//! - weighted graphs, their graphic/cographic matroids, near-minimum cycle
//!   and cut-set enumeration, and a seeded random-contraction cut sampler
//!   ([`graph`]);
//! - 1-, 2- and 3-sums of binary matroids, unordered decomposition trees,
//!   and circuit projection onto tree vertices ([`ksum`], [`udt`]);
//! - the signature-classified near-minimum circuit enumerator over
//!   decomposition trees, plus light-codeword enumeration and bound
//!   reporting ([`decomp`]);
//! - totally unimodular matrices, their signed circuits, conformal
//!   decomposition and near-shortest kernel-vector enumeration ([`lattice`]);
//! - exact big-integer evaluations of the closed-form counting bounds
//!   ([`bounds`]) and stable CSV/JSONL report rows ([`report`]).
//!
//! Each enumerator is paired with an independent brute-force route, and the
//! acceptance suite in the CLI crate checks the two sides against each other
//! on seeded instance families.

pub mod bounds;
pub mod decomp;
pub mod gf2;
pub mod graph;
pub mod ksum;
pub mod lattice;
pub mod report;
pub mod types;
pub mod udt;

pub use decomp::{
    balanced_division, bound_report, enumerate_class, enumerate_light_codewords,
    enumerate_near_min_circuits, find_center, run_enumeration, signature_of, BoundReport,
    ClassEnumeration, CodewordSource, DecompError, EnumerationRun, Signature, Tree,
};
pub use gf2::{BinaryMatroid, Builtin, CircuitQuery, Gf2Error};
pub use graph::{
    graphic_set_bound, small_cut, CutQuery, CycleQuery, GraphEdge, GraphError, WeightedGraph,
};
pub use ksum::{check_associativity, classify_circuit, delta_sum, CircuitCase, KsumError, SumKind};
pub use lattice::{
    conformal_decompose, enumerate_short_vectors, is_conformal, short_vectors_box_oracle,
    LatticeError, LatticeVector, MatrixCircuit, MinorWitness, TuMatrix,
};
pub use types::{Alpha, Circuit, CutSet, Label, OracleCaps};
pub use udt::{
    random_udt, LeafKind, LeafPayload, Projection, RandomUdtParams, Udt, UdtEdge, UdtVertex,
};
