//! Criterion benchmarks for the `cpstein` kernels live in `benches/`.
