//! Benchmarks for the `ising-edge` crate live under `benches/`.
