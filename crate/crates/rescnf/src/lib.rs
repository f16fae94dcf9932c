//! Resolution toolkit: CNF core with DIMACS I/O, a level-saturation
//! resolution engine with Horn and brute-force solvers, the RCNF
//! meta-encoding and Horn gadget reduction, simplex-gadget CCNF instance
//! generation over cubic graphs, and saturation growth measurement.

pub mod dimacs;
pub mod formula;
pub mod growth;
pub mod rcnf;
pub mod resolution;
pub mod scnf;

pub use dimacs::{emit_dimacs, parse_dimacs, DimacsError};
pub use formula::{Clause, ClauseKind, Formula, FormulaError, Literal, Variable};
pub use rcnf::{gadget_rcnf, horn_to_rcnf, rcnf_of, split_horn3, RcnfEncoding, ReduceError};
pub use resolution::{
    brute_force_sat, horn_sat, joint_variables, resolve, saturate, unit_propagate, Assignment,
    Budget, Propagation, Rejection, ResolutionStep, SatOutcome, SaturationResult, SolveError,
    DEFAULT_ORACLE_LIMIT,
};
pub use scnf::{
    assemble_ccnf, check_ccnf_conditions, named_graph, random_cubic, s3cnf, s4cnf, CcnfInstance,
    CcnfSpec, CubicGraph, GadgetKind, GenError, KindAssignment, PolarityAssignment,
};
pub use growth::{
    doubling_check, measure_growth, moore_size, paper_ratio, DoublingTrace, GrowthReport,
    InstanceDescriptor,
};
