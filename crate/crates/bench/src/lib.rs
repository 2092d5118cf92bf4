//! Criterion benchmarks for `growglue`; see `benches/`.
