//! Translation planes from scattered linearized polynomials.
//!
//! The crate builds the finite field tower `F_p ⊂ F_q ⊂ F_{q^t}`, the
//! linearized polynomials over it, the `F_q`-subspaces `U_f` of
//! `F_{q^t}^2`, and from those the quasifield `Q_f`, the planar spread `B_f`
//! and the translation plane `A_f`. Isomorphism of planes is decided by a
//! `ΓL(2, q^t)` orbit search on the subspaces, and the LP family
//! `x^{q^s} + b·x^{q^{t-s}}` gets its own census.

pub mod cli;
mod conway;
mod error;
pub mod field;
mod fpoly;
pub mod linpoly;
pub mod lp;
pub mod plane;
pub mod quasifield;
pub mod spread;
pub mod subspace;
mod union_find;

pub use error::{Error, Result};
pub use field::{Elem, FieldSpec, FieldTower};
pub use linpoly::{LinearSet, LinearizedPoly};
pub use subspace::{Group, SearchOptions, SemilinearMap, Subspace2};
