//! Criterion benchmarks for shor-core live in `benches/`.
