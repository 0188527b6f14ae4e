//! Seeded inputs shared by the benchmarks.

use rslab_core::langlands::GlobalRep;
use rslab_core::random::{self, RepShape};
use rslab_core::{C64, Q};

pub const SEED: u64 = 7;

/// Degree-3 and degree-2 exact representations with data up to `p_max`.
pub fn exact_pair(p_max: u64) -> (GlobalRep<Q>, GlobalRep<Q>) {
    let pi =
        random::random_rep_exact(&mut random::stream(SEED, "bench.pi", 0), RepShape { degree: 3, p_max, ramified: 1 });
    let tau =
        random::random_rep_exact(&mut random::stream(SEED, "bench.tau", 0), RepShape { degree: 2, p_max, ramified: 1 });
    (pi.expect("valid shape"), tau.expect("valid shape"))
}

pub fn float_pair(p_max: u64) -> (GlobalRep<C64>, GlobalRep<C64>) {
    let pi =
        random::random_rep_float(&mut random::stream(SEED, "bench.pi", 0), RepShape { degree: 3, p_max, ramified: 1 });
    let tau =
        random::random_rep_float(&mut random::stream(SEED, "bench.tau", 0), RepShape { degree: 2, p_max, ramified: 1 });
    (pi.expect("valid shape"), tau.expect("valid shape"))
}
