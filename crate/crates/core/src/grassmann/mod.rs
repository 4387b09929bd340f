//! Exact calculus on finite exterior (Grassmann) algebras.

mod element;
mod oscillator;
mod parse;

pub use element::{
    fmt_coeff, imag, ratio, rational_from_f64, rational_to_f64, real, Coeff, Generators,
    GrassmannElement, Side, MAX_GENERATORS,
};
pub use oscillator::{
    check_theta_representation, conjugate_motion, derive_hamiltonian,
    derive_oscillator_hamiltonian, euler_lagrange, oscillator_lagrangian, ConjugateMotion,
    FieldPair, HamiltonianDerivation, ThetaRepresentation, LEGENDRE_ORDERING,
};
pub use parse::parse_element;
