//! Criterion benchmarks for `cqcount`; the workloads come from
//! `cqcount::corpus`. Run with `cargo bench -p cqcount-bench`.
