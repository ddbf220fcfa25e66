//! Benchmark-only crate; see `benches/core_hotpaths.rs`.
