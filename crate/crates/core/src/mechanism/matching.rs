use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MatchingMode;
use crate::error::{Error, Result};

/// Peer assignment for the allocation comparison: client `i` is compared against `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    perm: Vec<usize>,
}

impl Matching {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Matching { perm })
    }

    pub fn peer(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.perm.iter().enumerate().any(|(i, &p)| i == p)
    }
}

/// Uniform draw over all permutations, or over all derangements (by rejection).
pub fn draw_matching<R: Rng + ?Sized>(k: usize, mode: MatchingMode, rng: &mut R) -> Result<Matching> {
    if k < 2 {
        return Err(Error::config(
            "mechanism.num_clients",
            format!("matching needs at least 2 clients, got {k}"),
        ));
    }
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        perm.shuffle(rng);
        let m = Matching { perm: perm.clone() };
        match mode {
            MatchingMode::UniformPermutation => return Ok(m),
            MatchingMode::Derangement if !m.has_fixed_point() => return Ok(m),
            MatchingMode::Derangement => {}
        }
    }
}
