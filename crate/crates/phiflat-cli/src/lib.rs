//! Library surface of the phiflat command-line tool: the session DSL,
//! command dispatch and canonical report emission.

pub mod report;
pub mod run;
pub mod session;

pub use report::{emit_report, Report};
pub use run::{run, CliError, Command, RunStatus};
pub use session::{parse_session, parse_session_with, Session, SessionError};
