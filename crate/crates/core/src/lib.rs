//! Equational probabilities, probabilistic spectra, clones and quantitative
//! primality of finite algebras given by operation tables.

pub mod algebra;
pub mod approx;
pub mod builtins;
pub mod checks;
pub mod cli;
pub mod clone;
pub mod codec;
pub mod corpus;
pub mod discrepancy;
pub mod error;
pub mod hom;
pub mod lattice;
pub mod oracles;
pub mod packed;
pub mod rational;
pub mod spectrum;
pub mod symmetry;
pub mod table;
pub mod term;

pub use algebra::{parse_algebra, FiniteAlgebra, Operation, Signature};
pub use builtins::{builtin, builtin_algebra, BuiltinSpec};
pub use codec::{index_tuple, tuple_index};
pub use error::{Error, Result};
pub use rational::ExactRational;
pub use table::FunctionTable;
pub use term::{compile_term, eval_term, parse_equation, parse_term, Equation, Term};
pub use clone::{clone_contains, generate_clone, CloneSet, Membership};
pub use symmetry::{automorphism_group, orbit_bound_at, orbit_partition, sigma_subset_sums, AutomorphismGroup, OrbitPartition};
pub use approx::{best_approximation, coincidence_mu, covering_radius, hamming_distance, prim_at, prim_at_with, PrimBudget, PrimMethod, PrimReport};
pub use spectrum::{equation_probability, pspec_at, spectrum_prefix, SpectrumReport};
pub use hom::{check_homomorphism, lemma_elementary_check, AlgebraMap, HomClassification, LemmaCheck, LemmaInput, LemmaKind};
pub use oracles::{c2_phi, closed_form, s3_power_prob, BoundKind, BoundValue};
