//! Gathering of finite-memory robots on a circle with half-circle
//! visibility: exact configuration analysis, the robot protocol, a
//! discrete-event simulator and the oracles that cross-check them.

pub mod analysis;
pub mod angle;
pub mod cli;
pub mod config;
pub mod error;
pub mod oracle;
pub mod protocol;
pub mod render;
pub mod sim;
pub mod verify;
