//! Benchmarks for the verification pipeline live in `benches/`.
