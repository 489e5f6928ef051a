//! Symbolic computation with Hecke pairs and finite-depth shadows of their completions.

pub mod catalog;
pub mod completion;
pub mod error;
pub mod hecke;
pub mod hnn;
pub mod model;
pub mod pair;
pub mod perfect;
pub mod perm;
pub mod point;
pub mod rank;
pub mod scale;
pub mod schreier;
pub mod words;
pub mod wreath;

pub use error::{Error, Result};
pub use model::{PairModel, Space};
pub use pair::{Caps, Construction, Flag, PairMetadata, PermutationHeckePair, Tri};
pub use point::Point;
pub use schreier::{CosetBall, CosetId};
pub use words::{Generator, GroupWord, Letter};
