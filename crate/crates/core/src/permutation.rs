//! Mode orderings and the reproducible random stream used to draw them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Identity,
    Explicit,
    SeededRandom { seed: u64 },
}

/// An ordering of the modes `0..N`: `order[p]` is the mode acting at
/// position `p` (position 0 is leftmost in an operator product).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSpec {
    order: Vec<usize>,
    provenance: Provenance,
}

impl PermutationSpec {
    pub fn identity(n: usize) -> Self {
        PermutationSpec { order: (0..n).collect(), provenance: Provenance::Identity }
    }

    pub fn explicit(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &m in &order {
            if m >= order.len() {
                return Err(Error::InvalidPermutation(format!(
                    "index {m} out of range for length {}",
                    order.len()
                )));
            }
            if seen[m] {
                return Err(Error::InvalidPermutation(format!("index {m} repeated")));
            }
            seen[m] = true;
        }
        Ok(PermutationSpec { order, provenance: Provenance::Explicit })
    }

    /// Fisher–Yates from the top: for `i = n−1 … 1`, swap `i` with
    /// `next_u64() % (i + 1)`, starting from the identity.
    pub fn seeded_random(n: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = SplitMix64::new(seed);
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            order.swap(i, j);
        }
        PermutationSpec { order, provenance: Provenance::SeededRandom { seed } }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(p, &m)| p == m)
    }

    /// Parses `identity`, `seed:<u64>` or `list:<i,j,…>` for `n` modes.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text == "identity" {
            return Ok(Self::identity(n));
        }
        if let Some(seed) = text.strip_prefix("seed:") {
            let seed = seed
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::InvalidPermutation(format!("bad seed {seed:?}: {e}")))?;
            return Ok(Self::seeded_random(n, seed));
        }
        if let Some(list) = text.strip_prefix("list:") {
            let order = list
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidPermutation(format!("bad list {list:?}: {e}")))?;
            if order.len() != n {
                return Err(Error::InvalidPermutation(format!(
                    "list has {} entries for {n} modes",
                    order.len()
                )));
            }
            return Self::explicit(order);
        }
        Err(Error::InvalidPermutation(format!(
            "expected identity, seed:<u64> or list:<csv>, got {text:?}"
        )))
    }

    /// Text form accepted by [`PermutationSpec::parse`].
    pub fn describe(&self) -> String {
        match self.provenance {
            Provenance::Identity => "identity".into(),
            Provenance::SeededRandom { seed } => format!("seed:{seed}"),
            Provenance::Explicit => {
                let items: Vec<String> = self.order.iter().map(|m| m.to_string()).collect();
                format!("list:{}", items.join(","))
            }
        }
    }

    /// `positions()[mode]` is where `mode` sits in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &m) in self.order.iter().enumerate() {
            pos[m] = p;
        }
        pos
    }
}

/// Parity (0 or 1) of the permutation that sorts `seq` ascending, counted by
/// inversions.
pub fn sort_parity(seq: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) {
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
    out
}
