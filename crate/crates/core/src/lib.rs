//! Set-family calculus, Horn inference, and matroid representation
//! machinery on ground sets of up to 64 vertices.
//!
//! Families of subsets are bitmask-based ([`set_family`]); definite Horn
//! formulas run forward chaining and implicate analysis ([`horn`],
//! [`boolfn`]); circuit families become matroids with rank, closure,
//! duality, and recognition ([`matroid`]); minimum circuit presentations
//! are certified by exhaustive search and closed-form constructions
//! ([`minrep`]); covering, Turán, Steiner and implication systems round
//! out the toolkit ([`designs`]). Everything that enumerates a power set
//! is metered by a [`budget::Budget`] so desk-scale experiments fail fast
//! instead of hanging.
//!
//! The `parallel` feature (on by default) runs the power-set sweeps on a
//! rayon pool; disabling it swaps in sequential loops with identical
//! results.

pub mod boolfn;
pub mod budget;
pub mod designs;
pub mod error;
pub mod horn;
pub mod matroid;
pub mod minrep;
pub mod par;
pub mod set_family;

pub use boolfn::{hypergraph_horn_violation, is_hypergraph_horn, BoolFn};
pub use budget::Budget;
pub use designs::{
    covering_number_bruteforce, fort_hedlund, greedy_covering, implication_number_bruteforce,
    schonheim_bound, steiner_number_bruteforce, steiner_triple_bose, turan_covering_complement,
    verify_design, DesignDefect, DesignKind, DesignReport, DesignSpec,
};
pub use error::{Error, Result};
pub use horn::{DefiniteClause, DefiniteCnf};
pub use matroid::{
    binomial, characterization_report, check_circuit_axioms, is_matroid_horn, BinaryMatrix,
    CharacterizationReport, CircuitAxiomViolation, Criterion, Matroid, MatroidHornReason,
    MatroidHornReport,
};
pub use minrep::{
    chordless_circuits, covering_doubling_representation, generate_closure, generate_one_step,
    min_circuit_clauses, min_circuit_subsystem, min_generator, phi_shift,
    rank2_group_representation, uniform_clause_representation, uniform_interval_generator,
    uniform_star_representation, Method, Objective, Rank2Representation, RepresentationCost,
    Witness,
};
pub use set_family::{bases_of, circuits_of, GroundSet, SetFamily, VSet};
