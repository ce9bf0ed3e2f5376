//! Seeded randomness with named per-trial sub-streams.
//!
//! All simulation randomness flows through [`SimRng`], a counter-based
//! generator (ChaCha12) that supports independent streams. A run is
//! identified by a master seed; each trial draws from its own stream so
//! trials are reproducible independently of execution order (serial or
//! parallel) and never share generator state.

use rand::SeedableRng;

pub type SimRng = rand_chacha::ChaCha12Rng;

/// RNG for one trial: master seed keys the generator, the trial seed selects
/// the stream.
pub fn trial_rng(master_seed: u64, trial_seed: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(master_seed);
    rng.set_stream(trial_seed);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn fingerprint(rng: &mut SimRng) -> [u64; 4] {
        std::array::from_fn(|_| rng.random())
    }

    #[test]
    fn streams_are_independent_and_reproducible() {
        let mut a = trial_rng(7, 0);
        let mut b = trial_rng(7, 1);
        let mut a2 = trial_rng(7, 0);
        let fa = fingerprint(&mut a);
        assert_ne!(fa, fingerprint(&mut b), "distinct streams must diverge");
        assert_eq!(fa, fingerprint(&mut a2), "same stream must replay");
    }

    #[test]
    fn master_seed_changes_every_stream() {
        for trial in 0..8 {
            let f1 = fingerprint(&mut trial_rng(1, trial));
            let f2 = fingerprint(&mut trial_rng(2, trial));
            assert_ne!(f1, f2);
        }
    }
}
