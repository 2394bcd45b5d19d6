//! Invariant Hermitian geometry on Lie group quotients: exterior algebra,
//! connections, bundles, string algebroids, equation checkers and Futaki
//! invariants, all in exact arithmetic.

pub mod algebroid;
pub mod assume;
pub mod bundles;
pub mod catalog;
pub mod formalg;
pub mod futaki;
pub mod geom;
pub mod par;
pub mod sample;
pub mod systems;
