//! Criterion benchmarks for qmbody; see `benches/`.
