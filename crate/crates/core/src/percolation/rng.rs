//! Counter-based random bits keyed by `(seed, trial, edge)`.
//!
//! Each edge decision is a pure hash of its key, so sampling is independent
//! of trial order, edge order, and thread count, and any edge can be
//! regenerated in isolation.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: a bijective 64-bit mixer with full avalanche.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial stream key.
#[inline]
pub fn trial_key(seed: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ trial)
}

/// Uniform 64-bit value for one edge of one trial.
#[inline]
pub fn edge_bits(trial_key: u64, edge: u64) -> u64 {
    splitmix64(trial_key ^ edge.wrapping_mul(GOLDEN))
}

/// Decision threshold paired with [`edge_open`]; the `p = 1` case is carried
/// out of band because `p * 2^64` saturates u64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpenThreshold {
    bound: u64,
    always: bool,
}

/// Threshold such that an edge opens with probability `p`.
#[inline]
pub fn open_threshold(p: f64) -> OpenThreshold {
    if p >= 1.0 {
        OpenThreshold {
            bound: 0,
            always: true,
        }
    } else if p <= 0.0 {
        OpenThreshold {
            bound: 0,
            always: false,
        }
    } else {
        OpenThreshold {
            bound: (p * 2f64.powi(64)) as u64,
            always: false,
        }
    }
}

/// Is this edge's uniform draw below the threshold?
#[inline]
pub fn edge_open(bits: u64, th: OpenThreshold) -> bool {
    th.always || bits < th.bound
}
