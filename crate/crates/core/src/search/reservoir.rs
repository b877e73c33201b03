use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evo::Candidate;

/// Uniform fixed-size sample of a stream (Algorithm R).
#[derive(Debug, Clone)]
pub struct Reservoir {
    capacity: usize,
    items: Vec<Candidate>,
    seen: u64,
    rng: ChaCha8Rng,
}

impl Reservoir {
    /// Capacities below 1 are raised to 1.
    pub fn new(capacity: usize, seed: u64) -> Self {
        let capacity = capacity.max(1);
        Self {
            capacity,
            items: Vec::with_capacity(capacity),
            seen: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn items(&self) -> &[Candidate] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Candidate> {
        self.items
    }

    /// The n-th item is kept with probability `capacity / n`, replacing a
    /// uniformly chosen slot.
    pub fn update(&mut self, item: Candidate) {
        self.seen += 1;
        if self.items.len() < self.capacity {
            self.items.push(item);
            return;
        }
        let j = self.rng.random_range(0..self.seen);
        if (j as usize) < self.capacity {
            self.items[j as usize] = item;
        }
    }
}

pub fn reservoir_update(mut res: Reservoir, item: Candidate) -> Reservoir {
    res.update(item);
    res
}
