//! Benchmark-only crate; see benches/transforms.rs.
