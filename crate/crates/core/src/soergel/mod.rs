//! Graded Soergel modules over the coinvariant algebra.
//!
//! A module is a free graded module over the coefficient ring together with
//! the action of each generator `y_i` of `Y`, a degree-2 operator. Since `C`
//! is generated in degree 2 these operators determine the whole module
//! structure. Bott–Samelson modules are built one tensor factor at a time by
//! [`bs_extend`], and the indecomposables `D_w` are split off them by the
//! library-relative decomposition in [`decompose`].

mod decompose;
mod hom;
mod library;
mod module;

pub use decompose::{decompose, local_endomorphisms, DecompRecord, Summand};
pub use hom::{graded_hom, graded_hom_rank, hom_degree, hom_reduction_check, HomSpace};
pub use library::{char_zero_multiplicities, check_reduction, Library, LibraryOptions, DEFAULT_BUDGET};
pub use module::{bs_extend, bs_module, Context, GradedModule, ModuleRepr, MODULE_SCHEMA};
