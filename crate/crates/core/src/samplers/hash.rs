//! Polynomial hashing over the Mersenne prime field `GF(2^61 - 1)`.

use rand::Rng;

pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

#[inline]
fn reduce(x: u64) -> u64 {
    let y = (x & MERSENNE_61) + (x >> 61);
    if y >= MERSENNE_61 {
        y - MERSENNE_61
    } else {
        y
    }
}

#[inline]
pub fn mod_mul(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MERSENNE_61;
    let hi = (p >> 61) as u64;
    reduce(lo + hi)
}

#[inline]
pub fn mod_add(a: u64, b: u64) -> u64 {
    reduce(a + b)
}

/// Reduces an arbitrary integer into the field.
#[inline]
pub fn to_field(x: u128) -> u64 {
    (x % MERSENNE_61 as u128) as u64
}

/// Degree `t-1` polynomial with uniform coefficients: a `t`-wise independent
/// family from the field to itself.
#[derive(Clone, Debug)]
pub struct PolyHash {
    coeffs: Vec<u64>,
}

impl PolyHash {
    pub fn random<R: Rng + ?Sized>(independence: usize, rng: &mut R) -> Self {
        assert!(independence >= 2);
        let coeffs = (0..independence).map(|_| rng.gen_range(0..MERSENNE_61)).collect();
        PolyHash { coeffs }
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().fold(0, |acc, &c| mod_add(mod_mul(acc, x), c))
    }

    pub fn independence(&self) -> usize {
        self.coeffs.len()
    }
}

/// SplitMix64 finalizer keyed by `seed`; used where a fast 64-bit hash with
/// good avalanche is enough.
#[inline]
pub fn mix64(x: u64, seed: u64) -> u64 {
    let mut z = x ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_arithmetic_matches_u128() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let a = rng.gen_range(0..MERSENNE_61);
            let b = rng.gen_range(0..MERSENNE_61);
            let p = MERSENNE_61 as u128;
            assert_eq!(mod_mul(a, b) as u128, a as u128 * b as u128 % p);
            assert_eq!(mod_add(a, b) as u128, (a as u128 + b as u128) % p);
        }
    }

    #[test]
    fn poly_hash_is_horner() {
        let h = PolyHash { coeffs: vec![3, 0, 5] };
        assert_eq!(h.eval(2), 3 * 4 + 5);
    }
}
