//! Benchmark-only crate; the targets live in `benches/kernels.rs`.
//!
//! Run with `cargo bench -p sunflower-bench`.
