//! The Chern character of symbol sections and the index integral.

pub mod chi;
pub mod mu;
pub mod section;
pub mod words;

pub use chi::{chi, index, toeplitz_closed_form, ChiForm, IndexReport};
pub use mu::{mu_inverse, mu_inverse_exact, nu, sp_basis, QuadHamiltonian};
pub use section::{SectionKind, SymConnection, SymbolSection, ThetaBold};
pub use words::{WordAlgebra, WordRoute};
