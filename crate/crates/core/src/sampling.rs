//! Seeded random Fock states for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{Mode, State, SystemSpec};
use crate::rational::q;

pub struct Sampler {
    rng: ChaCha8Rng,
    sys: SystemSpec,
}

impl Sampler {
    pub fn new(sys: SystemSpec, seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), sys }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Random monomial state with up to `max_len` modes, each at most `max_depth` deep.
    pub fn monomial(&mut self, max_len: usize, max_depth: i32) -> State {
        let gens = self.sys.generators();
        let len = self.rng.gen_range(0..=max_len);
        let modes: Vec<Mode> = (0..len)
            .map(|_| Mode { gen: *gens.choose(&mut self.rng).unwrap(), m: -self.rng.gen_range(1..=max_depth) })
            .collect();
        State::from_modes(&modes, q(1)).expect("creation modes")
    }

    /// Random combination of up to `terms` monomials with small integer coefficients.
    pub fn state(&mut self, terms: usize, max_len: usize, max_depth: i32) -> State {
        let mut s = State::zero();
        let k = self.rng.gen_range(1..=terms);
        for _ in 0..k {
            let c = self.rng.gen_range(-3i64..=3);
            s.add_scaled(&self.monomial(max_len, max_depth), &q(c));
        }
        s
    }

    /// Nonzero state that is weight-homogeneous and of one parity.
    pub fn homogeneous(&mut self, terms: usize, max_len: usize, max_depth: i32) -> State {
        loop {
            let seed = self.monomial(max_len, max_depth);
            let Some((m0, _)) = seed.terms().next().map(|(m, c)| (m.clone(), c.clone())) else {
                continue;
            };
            let (w, p) = (m0.weight(), m0.is_odd());
            let mut s = seed;
            for _ in 1..terms {
                let t = self.monomial(max_len, max_depth);
                let fits = t.terms().next().map(|(m, _)| m.weight() == w && m.is_odd() == p);
                if let Some(true) = fits {
                    {
                        let c = self.rng.gen_range(1i64..=3);
                        s.add_scaled(&t, &q(c));
                    }
                }
            }
            if !s.is_zero() {
                return s;
            }
        }
    }
}
