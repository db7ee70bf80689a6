//! Criterion benchmarks for the `spweb` engine; see `benches/engine.rs`.
