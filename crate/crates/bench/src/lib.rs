//! Criterion benchmarks for `rotorbell`; see `benches/`.
