//! Model-file front end for `catmeas-core`: load a JSON model, run one
//! command against it and render the report.

pub mod commands;
pub mod expr;
pub mod locate;
pub mod model;
pub mod report;

pub use commands::{run, Options, RunError, COMMANDS};
pub use model::{parse_model, parse_model_str, ErrorCode, Model, ModelError};
pub use report::{Check, Format, Node, Report};

/// Exit status: verification failures and input errors are distinct.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
}
