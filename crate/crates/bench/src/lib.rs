//! Criterion benchmarks for the `relaysim` trial pipeline. Run with
//! `cargo bench -p relaysim-bench`.
