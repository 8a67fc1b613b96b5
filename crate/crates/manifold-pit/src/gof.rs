//! Goodness-of-fit wrappers around the transforms.
