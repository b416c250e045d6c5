//! File formats, figure sweeps, the verification suite and session reports
//! on top of `qgames-core`. The `qgames` binary is a thin front end over this.

pub mod classical;
pub mod format;
pub mod session;
pub mod sweep;
pub mod verify;
