//! Harness around `classent-core`: scenario files, report commands, sweeps
//! and the verification suite behind the `classent` binary.

pub mod commands;
pub mod scenario;
pub mod verify;

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const CHECK_FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
}
