//! Criterion benchmarks for prodsat; see `benches/`.
