//! Andrews-Curtis workbench: free-group words, AC-moves and their searches,
//! equations over free groups, and exact AC-groups of small finite groups.

pub mod equations;
pub mod finite;
pub mod moves;
pub mod sample;
pub mod search;
pub mod word;

pub use moves::{Move, MoveError, MoveSequence, Sign};
pub use word::{Letter, Tuple, Word, WordError};
