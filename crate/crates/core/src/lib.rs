//! Exact q-characters of Kirillov-Reshetikhin modules over untwisted quantum
//! affine algebras, with verifiers for the T-system, the Q-system and the
//! fermionic character formula.
//!
//! * [`cartan`]: Cartan data, roots and weights for all finite types.
//! * [`ymono`]: `Y`-monomials on one spectral lattice, `A`-monomials, the `A`-order.
//! * [`sl2core`]: normal writings, rank-one characters, `L_i(m)` and `i`-decomposition.
//! * [`fmalgo`]: the saturation algorithm and the cached KR character store.
//! * [`systems`]: T-system and Q-system builders and verifiers.
//! * [`charring`]: ordinary characters and restriction.
//! * [`fermionic`]: the fermionic sum and the KR formula verifier.

pub mod cache;
pub mod cartan;
pub mod charring;
pub mod error;
pub mod fermionic;
pub mod fmalgo;
pub mod qchar;
pub mod report;
pub mod sl2core;
pub mod systems;
pub mod ymono;

pub use cartan::{make_cartan, CartanData, Rational, Series, Weight};
pub use charring::Character;
pub use error::{Error, Result};
pub use fmalgo::{fm_qchar, kr_qchar, Caps, FmReport, KrCache};
pub use qchar::{LaurentPoly, QCharacter};
pub use report::{Mismatch, VerifyReport};
pub use ymono::{AVector, YMonomial};
