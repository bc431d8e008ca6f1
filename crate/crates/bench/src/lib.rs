//! Criterion benchmarks for `chain-core`; see `benches/`.
