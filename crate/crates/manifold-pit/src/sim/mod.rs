//! Simulation studies and reporting.
