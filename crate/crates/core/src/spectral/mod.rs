//! Spectral invariants of algebras over colored operads.
//!
//! The spectrum object of an algebra `A` is built colorwise. For a color
//! `c` the local part is `A_c ⊗ P(c;c)`; each interaction operation `φ`
//! with output `c` adds `im(φ_A) ⊗ P(c;c)`. [`decompose`] counts these
//! dimensions with ranks. [`operadic_spectrum`] builds the same object as a
//! quotient of `⊕_c X_c ⊗ P(c;c)` followed by a balanced tensor product, and
//! fails if the two counts disagree.
//!
//! The bar construction is truncated at level 1 and realized as the
//! coequalizer of its two face maps.

mod analytic;
mod bar;
mod decompose;
mod residue;
mod spectrum;
mod tensor;

pub use analytic::{
    analytic_spectrum, analytic_spectrum_with, enumerate_loops, naive_spectrum, AnalyticOptions, AnalyticSpectrum,
    LoopSpectrum, DEFAULT_TOLERANCE,
};
pub use bar::{bar_level, hochschild, BarLevel, BarSummand, Hochschild};
pub use decompose::{decompose, CrossRecord, DecompositionTotals, SpectralDecomposition};
pub use residue::{residue, residue_universal_map, ResidueObject};
pub use spectrum::{induced_map, operadic_spectrum, BlockSummary, OperadicSpectrumObject, SpectrumBlock, SpectrumSummary};
pub use tensor::{balanced_tensor, BalancedTensor};
