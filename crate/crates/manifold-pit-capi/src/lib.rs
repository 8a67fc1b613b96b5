//! C ABI surface for the transform library.
