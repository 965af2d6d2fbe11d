//! Tripartite nonlocality toolbox.
//!
//! The crate reproduces the quantitative content of the Cabello-style
//! nonlocality argument for generalized three-qubit GHZ states and its
//! no-signaling-theory counterpart:
//!
//! * [`quantum`] — state-vector Born-rule engine for 2 and 3 qubits; the
//!   brute-force oracle behind every closed form.
//! * [`cabello`] — closed-form success probabilities, the measurement-angle
//!   constraint solver, the reduced success function and its scans.
//! * [`optimizer`] — deterministic multi-start maximization of the
//!   three-qubit argument and the two-qubit baselines.
//! * [`boxworld`] — (3,2,2) behavior tables, no-signaling validation,
//!   Bell/Svetlichny/GYNI evaluators, and the reference distributions.
//! * [`lp`] — a self-contained two-phase simplex and the polytope problems
//!   (maximal `C`, pinned-`P` probes, pair-marginal-zero maximum, GYNI).

pub mod boxworld;
pub mod cabello;
pub mod lp;
pub mod optimizer;
pub mod quantum;
pub mod scenario;

pub use boxworld::{
    paper_distribution, paper_distribution_exact, ExactDistribution, FixtureId, JointDistribution,
    TwoQubitDistribution, ValidationReport,
};
pub use cabello::{CabelloPoint, ConstraintSolution, PositivityOutcome};
pub use lp::{LinearProgram, LpSolution, LpStatus};
pub use optimizer::OptimizationResult;
pub use quantum::{GhzParam, QubitMeasurementAngles, StateVector};
pub use scenario::{Outcome, OutcomeTriple, Setting, SettingTriple};
