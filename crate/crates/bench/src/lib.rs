//! Fixed workloads shared by the benchmarks.

use etaq_core::EtaQuotient;

/// `(p, k)` pairs with admissible weight.
pub const PRIME_WEIGHTS: [(u64, i64); 4] = [(11, 2), (13, 12), (23, 24), (37, 48)];

/// Square-free composite levels and weights for the dual scans.
pub const COMPOSITE: [(u64, i64); 3] = [(15, 2), (35, 2), (33, 2)];

pub const SERIES_PRECISION: [i64; 3] = [100, 500, 2000];

/// Quotients expanded in the series benchmarks.
pub fn series_inputs() -> Vec<(&'static str, EtaQuotient)> {
    [("delta", "1:24"), ("level11", "1:2,11:2"), ("level35", "1:-1,5:3,7:3,35:-1")]
        .into_iter()
        .map(|(name, s)| (name, s.parse().expect("fixture parses")))
        .collect()
}
