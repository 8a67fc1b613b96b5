//! Uniformity tests on spheres and circles.
