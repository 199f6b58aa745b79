//! Exact higher-dimensional continued fractions.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: big rationals and `Q(√D)`;
//! - [`clifford`]: the Clifford algebras `A_n`, Clifford matrices, Möbius maps;
//! - [`spaces`]: inversion spaces (`R^m`, Heisenberg), lattices, rounding;
//! - [`cf`]: the Gauss map, expansions, periodicity, evaluation;
//! - [`modgroup`]: classification, Pell constructions, generator words;
//! - [`hyperbolic`]: horoballs and geodesics in the upper half-space;
//! - [`identities`]: quaternionic depth identities;
//! - [`selfcheck`]: the acceptance suite shared by tests and the CLI.

pub mod cf;
pub mod clifford;
pub mod hyperbolic;
pub mod identities;
pub mod modgroup;
pub mod par;
pub mod scalar;
pub mod selfcheck;
pub mod spaces;
