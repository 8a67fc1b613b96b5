//! CSV and JSON input/output for points and results.
