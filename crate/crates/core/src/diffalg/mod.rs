//! Super differential polynomials: symbols of Fock states and jet-ring coordinates.

mod jet;
mod poly;
mod quantum;

pub use jet::{
    generated_span, generated_span_exact, invariant_basis, invariant_basis_exact, jet_ideal, lie_jet_action, Block,
    BlockRep, JetAction, DEFAULT_COMPONENT_CAP,
};
pub use poly::{DiffPoly, Name, PMono, Var};
pub use quantum::{
    express_in_generators, lift_descent, normal_order, normal_order_with, quantum_correct, Correction, Descent,
    GenSymbol,
};
