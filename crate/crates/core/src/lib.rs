//! Fractional-linear lower bounds for negative binomial offspring generating
//! functions, with exact verification of the coefficient identities behind them.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod pgf;
pub mod simulate;
pub mod verify;
