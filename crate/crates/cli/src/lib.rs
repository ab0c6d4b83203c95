//! Library half of the `thomae` binary: job specs, result records and text rendering.

pub mod job;
pub mod record;
pub mod render;

pub use job::{malformed, run_job, CommandKind, Format, JobSpec, Settings, ToleranceOverrides};
pub use record::{ResultRecord, Status};
