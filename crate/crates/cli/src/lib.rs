//! Batch front end for the exact engine: reads an input document, runs one
//! command and emits canonical JSON and optional exact CSV plot data.

pub mod commands;
pub mod render;

pub use commands::{input_hash, run, write_plot, CommandKind, Outcome, Params, PlotRow};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// An audit found a discrepancy.
    pub const AUDIT_FAILURE: i32 = 1;
    /// Command-line usage error (reported by the argument parser).
    pub const USAGE: i32 = 2;
    /// The input document is unreadable or invalid.
    pub const INPUT: i32 = 3;
    /// The computation failed on a valid document.
    pub const COMPUTATION: i32 = 4;
    /// Writing an output file failed.
    pub const IO: i32 = 5;
}

/// Exit code for an engine error.
pub fn exit_code(e: &kstab_core::Error) -> i32 {
    use kstab_core::Error::*;
    match e {
        Schema { .. } | InvalidInput(_) | NonPrimitiveRay(_) | IncompleteFan(_) | InvalidFan(_) | EmptyCoeffPolytope
        | DimensionMismatch { .. } | DimensionOverflow(_) => exit::INPUT,
        _ => exit::COMPUTATION,
    }
}
