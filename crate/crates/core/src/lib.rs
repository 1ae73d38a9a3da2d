//! Exact computations for finite abelian covers of the Chamanara surface.
//!
//! A normal cover with finite abelian deck group `G` is encoded by a bi-infinite
//! defining vector `h` over `G` with `h_0 = 0` whose entries generate `G`. This
//! crate handles such vectors when they are eventually periodic on both sides:
//!
//! - [`group`]: arithmetic in `Z n_1 x ... x Z n_r` with spans and automorphisms
//! - [`bivector`]: normalized vectors and their `Aut(G)` classes
//! - [`action`]: closed-form action of `P1`, `P2`, `-Id`, `H` and their inverses
//! - [`finite_index`]: deciding whether the Veech group of the cover has finite index
//! - [`orbit`]: Schreier coset graphs and the stabilizer data read off them
//! - [`degree2`]: weakly periodic vectors and orbit census for `d = 2`
//! - [`topology`]: number of ends of the cover

pub mod action;
pub mod bivector;
pub mod degree2;
pub mod error;
pub mod finite_index;
pub mod group;
pub mod orbit;
pub mod topology;

pub use action::{GeneratorLetter, Mat2Q, Word};
pub use bivector::{EpVector, Tail, VectorClass};
pub use error::{Error, Result};
pub use group::{Automorphism, FinAbGroup, GroupElem, Subgroup};
