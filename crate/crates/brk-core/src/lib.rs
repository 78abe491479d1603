//! Constructions and mechanically checked lower bounds for dilated-surface
//! point sets over prime fields.

pub mod brkset;
pub mod field;
pub mod linsolve;
pub mod multipoly;
pub mod rng;
pub mod theorem;
pub mod vanish;
