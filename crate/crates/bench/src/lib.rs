//! Criterion benchmarks for the `pamlab` library live under `benches/`.
