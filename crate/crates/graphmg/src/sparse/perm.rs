//! Vertex permutations.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Bijection on `0..n`, stored in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let forward: Vec<usize> = (0..n).collect();
        Permutation {
            inverse: forward.clone(),
            forward,
        }
    }

    /// Builds from the forward map `i -> forward[i]`, checking bijectivity.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &p) in forward.iter().enumerate() {
            if p >= n {
                return Err(Error::InvalidParameter(format!(
                    "permutation image {p} out of range for length {n}"
                )));
            }
            if inverse[p] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "permutation maps both {} and {} to {}",
                    inverse[p], i, p
                )));
            }
            inverse[p] = i;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Image of `i` under the permutation.
    #[inline]
    pub fn forward(&self, i: usize) -> usize {
        self.forward[i]
    }

    /// Preimage of `p` under the permutation.
    #[inline]
    pub fn inverse(&self, p: usize) -> usize {
        self.inverse[p]
    }

    pub fn forward_slice(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse_slice(&self) -> &[usize] {
        &self.inverse
    }
}

/// Uniform random permutation of `0..n` by a seeded Fisher-Yates shuffle.
/// Deterministic in `seed`; see [`crate::rng`] for the generator contract.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut forward: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..n).rev() {
        let j = rng.next_below(i + 1);
        forward.swap(i, j);
    }
    Permutation::from_forward(forward).expect("shuffle preserves bijectivity")
}
