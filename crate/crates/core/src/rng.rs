//! Counter-based random numbers keyed by (base seed, replica, step).
//!
//! Replicas own disjoint, reproducible streams regardless of scheduling,
//! and the draw for step n never depends on how many draws preceded it.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX2: u64 = 0x94D0_49BB_1331_11EB;

/// splitmix64 finalizer; full avalanche on 64 bits.
#[inline]
fn mix(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(MIX1);
    x ^= x >> 27;
    x = x.wrapping_mul(MIX2);
    x ^= x >> 31;
    x
}

/// Stream for one replica of one experiment.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(base_seed: u64, replica: u64) -> Self {
        CounterRng {
            key: mix(base_seed ^ replica.wrapping_mul(GOLDEN_GAMMA).wrapping_add(1)),
        }
    }

    /// Uniform draw in [0, 1) for counter value `n`.
    #[inline]
    pub fn uniform(&self, n: u64) -> f64 {
        let h = mix(self.key.wrapping_add(n.wrapping_mul(GOLDEN_GAMMA)));
        (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
