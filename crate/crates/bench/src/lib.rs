//! Criterion benchmarks for the enumeration, elimination and incidence
//! kernels of `pgcode-core`; see `benches/kernels.rs`.
