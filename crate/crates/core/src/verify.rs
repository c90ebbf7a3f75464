//! Verification suite: every release criterion as an executable check.
//! Stub, filled in after the computational modules.

/// placeholder
pub fn placeholder() {}
