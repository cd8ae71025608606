//! Microbenchmark-only crate; see the `benches/` directory. The harness's
//! own overhead (statistics, report rendering) should stay far below the
//! per-iteration process spawn cost it measures, and these benches keep an
//! eye on that.
