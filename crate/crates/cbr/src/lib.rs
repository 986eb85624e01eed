//! Colored unoriented tangle diagrams (the chromatic Brauer calculus), their
//! exact-rational linear representations, the faithfulness decision
//! procedure, and a Boolean state-sum layer, with a CLI front end.

pub mod cli;
pub mod diagram;
pub mod dsl;
pub mod json;
pub mod matrix;
pub mod quantize;
pub mod render;
pub mod represent;
pub mod semiring;
