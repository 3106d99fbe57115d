use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform sample without replacement of at most `capacity` items from a
/// stream of unknown length (Vitter's algorithm R).
#[derive(Clone, Debug)]
pub struct Reservoir<T> {
    capacity: usize,
    items: Vec<T>,
    seen: u64,
    rng: ChaCha8Rng,
}

impl<T> Reservoir<T> {
    pub fn new(capacity: usize, seed: u64) -> Self {
        Reservoir {
            capacity,
            items: Vec::with_capacity(capacity.min(1 << 16)),
            seen: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Offers one item. Returns the item that is not kept: the evicted one,
    /// the offered one if rejected, or `None` while the reservoir fills.
    pub fn offer(&mut self, item: T) -> Option<T> {
        self.seen += 1;
        if self.items.len() < self.capacity {
            self.items.push(item);
            return None;
        }
        if self.capacity == 0 {
            return Some(item);
        }
        let j = self.rng.gen_range(0..self.seen);
        if (j as usize) < self.capacity {
            Some(std::mem::replace(&mut self.items[j as usize], item))
        } else {
            Some(item)
        }
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn into_items(self) -> Vec<T> {
        self.items
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}
