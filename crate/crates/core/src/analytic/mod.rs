//! Closed-form Wigner densities of free spins and of the two-spin model.
//!
//! Exact densities are distributions (origin deltas and derivative-of-delta
//! shells) and are only ever held as term lists. Real-valued curves appear
//! after convolution with a [`SmearingKernel`].

mod discretised;
mod heff;
mod shells;
mod smearing;
mod two_spin;

pub use discretised::{discretised_char, discretised_radial_cdf};
pub use heff::{heff_from_density, EffectiveHamiltonian};
pub use shells::{shell_decomposition, ShellDecomposition, ShellKind, ShellTerm, ShellTerms};
pub use smearing::{
    char_free, marginal_comb, smeared_density, smeared_density_quadrature_oracle, smeared_marginal,
    SmearingKernel, ORACLE_SHELL_SPLIT,
};
pub use two_spin::{
    two_spin_char_mixture, two_spin_char_oracle, two_spin_exact_terms, two_spin_smeared_density,
    two_spin_weights, SectorWeights, TwoSpinModel,
};
