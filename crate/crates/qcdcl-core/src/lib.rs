//! A laboratory for QCDCL-style QBF proof search, parametrized by decision
//! policy, dependency scheme, and cube-learning policy. Solves and refutes
//! PCNF formulas, emits machine-checkable derivation traces, computes
//! dependency schemes, and generates the benchmark formula families.

pub mod calculus;
pub mod deps;
pub mod gen;
pub mod harness;
pub mod learning;
pub mod qbf;
pub mod solver;
pub mod trail;

pub use deps::{DepRelation, SchemeTag};
pub use gen::{Family, FamilySpec};
pub use qbf::{Assignment, Constraint, ConstraintKind, Literal, Prefix, Quant, Variable, PCNF};
pub use solver::{DerivationTrace, SolverConfig, Validity, Verdict};
pub use trail::{Trail, TrailOutcome};
