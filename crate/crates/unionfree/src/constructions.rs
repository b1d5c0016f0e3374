//! Instance generators: the extremal interval-grid families (tight for the
//! union-free bound), the stacked grids (tight up to a constant for the
//! a-union-free bound), seeded random families, and layered posets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::family::SetFamily;
use crate::poset::Poset;
use crate::{Error, Result};

/// Which interval-grid family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridVariant {
    /// n×n grid, n² sets.
    Square,
    /// (n+1)×n grid, n²+n sets.
    Rect,
    /// Square grid with the bottom-left set removed, n²−1 sets.
    SquareMinus,
    /// Rectangular grid with the bottom-left set removed, n²+n−1 sets.
    RectMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub variant: GridVariant,
}

impl GridSpec {
    pub fn member_count(&self) -> usize {
        let n = self.n;
        match self.variant {
            GridVariant::Square => n * n,
            GridVariant::Rect => n * n + n,
            GridVariant::SquareMinus => n * n - 1,
            GridVariant::RectMinus => n * n + n - 1,
        }
    }
}

/// The interval-grid family: cell (i, j) holds the integer interval
/// [n+1−i, n+j], so unioning a taller and a wider cell lands on the cell
/// covering both. The square grid takes i, j in [1, n]; the rectangular one
/// extends i to n+1. The minus variants drop cell (1, 1), which every
/// maximal union-free subfamily must contain.
pub fn erdos_shelah(spec: &GridSpec) -> Result<SetFamily> {
    let n = spec.n;
    let minus = matches!(spec.variant, GridVariant::SquareMinus | GridVariant::RectMinus);
    if n == 0 || (minus && n < 2) {
        return Err(Error::InvalidInput(format!(
            "grid variant {:?} needs n >= {}",
            spec.variant,
            if minus { 2 } else { 1 }
        )));
    }
    let rows = match spec.variant {
        GridVariant::Square | GridVariant::SquareMinus => n,
        GridVariant::Rect | GridVariant::RectMinus => n + 1,
    };
    let mut sets = Vec::with_capacity(spec.member_count());
    let mut labels = Vec::with_capacity(spec.member_count());
    for i in 1..=rows {
        for j in 1..=n {
            if minus && i == 1 && j == 1 {
                continue;
            }
            let lo = (n + 1 - i) as u64;
            let hi = (n + j) as u64;
            sets.push((lo..=hi).collect());
            labels.push(format!("X_{i}_{j}"));
        }
    }
    let fam = SetFamily::from_label_sets_named(&sets, labels)?;
    assert_eq!(fam.len(), spec.member_count(), "grid cells are pairwise distinct");
    Ok(fam)
}

/// Stacked grids over disjoint universes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackSpec {
    pub a: usize,
    pub n: usize,
}

impl StackSpec {
    /// Number of stacked blocks, ⌈√a⌉.
    pub fn block_count(&self) -> usize {
        let r = self.a.isqrt();
        if r * r < self.a {
            r + 1
        } else {
            r
        }
    }

    pub fn member_count(&self) -> usize {
        self.block_count() * self.n * self.n
    }
}

/// ⌈√a⌉ square interval grids over pairwise-disjoint fresh universes, each
/// block's sets unioned with every earlier block's whole universe, so every
/// set of block ℓ+1 contains all sets of block ℓ.
pub fn barat(spec: &StackSpec) -> Result<SetFamily> {
    if spec.a < 2 || spec.n == 0 {
        return Err(Error::InvalidInput(
            "stacked grids need a >= 2 and n >= 1".into(),
        ));
    }
    let n = spec.n;
    let k = spec.block_count();
    let span = 2 * n as u64;
    let mut sets = Vec::with_capacity(spec.member_count());
    let mut labels = Vec::with_capacity(spec.member_count());
    for block in 0..k as u64 {
        let offset = block * span;
        let floor: Vec<u64> = (1..=offset).collect();
        for i in 1..=n {
            for j in 1..=n {
                let lo = (n + 1 - i) as u64 + offset;
                let hi = (n + j) as u64 + offset;
                let mut set = floor.clone();
                set.extend(lo..=hi);
                sets.push(set);
                labels.push(format!("F{}_X_{i}_{j}", block + 1));
            }
        }
    }
    let fam = SetFamily::from_label_sets_named(&sets, labels)?;
    assert_eq!(fam.len(), spec.member_count());
    Ok(fam)
}

/// Seeded random family generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub m: usize,
    pub universe: usize,
    /// Per-element inclusion probability (ignored in interval mode).
    pub density: f64,
    /// Sample random subintervals of [1, universe] instead of Bernoulli
    /// sets; these families are union-rich.
    #[serde(default)]
    pub intervals: bool,
}

/// Reproducible random family: `m` distinct sets over labels 1..=universe,
/// duplicates resampled.
pub fn random_family(spec: &RandomSpec) -> Result<SetFamily> {
    if spec.universe == 0 {
        return Err(Error::InvalidInput("universe must be positive".into()));
    }
    if !spec.intervals && !(spec.density > 0.0 && spec.density < 1.0) {
        return Err(Error::InvalidInput("density must lie in (0, 1)".into()));
    }
    let u = spec.universe;
    let capacity: u128 = if spec.intervals {
        (u as u128) * (u as u128 + 1) / 2
    } else if u >= 128 {
        u128::MAX
    } else {
        1u128 << u
    };
    if spec.m as u128 > capacity {
        return Err(Error::Infeasible(format!(
            "{} distinct sets do not exist over a universe of {} ({} mode)",
            spec.m,
            u,
            if spec.intervals { "interval" } else { "bernoulli" }
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = std::collections::HashSet::new();
    let mut sets: Vec<Vec<u64>> = Vec::with_capacity(spec.m);
    while sets.len() < spec.m {
        let set: Vec<u64> = if spec.intervals {
            let lo = rng.gen_range(1..=u as u64);
            let hi = rng.gen_range(lo..=u as u64);
            (lo..=hi).collect()
        } else {
            (1..=u as u64).filter(|_| rng.gen_bool(spec.density)).collect()
        };
        if seen.insert(set.clone()) {
            sets.push(set);
        }
    }
    let fam = SetFamily::from_label_sets(&sets);
    debug_assert_eq!(fam.len(), spec.m);
    Ok(fam)
}

/// Ordinal sum of antichains: every element of a later level dominates every
/// element of every earlier level. Elements are numbered level-major, so
/// dominance rows are prefix masks and the matrix is filled word-wise.
pub fn layered_order(level_sizes: &[usize]) -> Poset {
    let n: usize = level_sizes.iter().sum();
    let mut dominated = BitMatrix::new(n);
    let mut dominators = BitMatrix::new(n);
    let mut start = 0usize;
    for &size in level_sizes {
        for x in start..start + size {
            prefix_fill(dominated.row_mut(x), start);
            suffix_fill(dominators.row_mut(x), start + size, n);
        }
        start += size;
    }
    Poset::from_parts(n, dominated, dominators)
}

fn prefix_fill(row: &mut [u64], upto: usize) {
    let full = upto / 64;
    row[..full].fill(!0);
    if upto % 64 != 0 {
        row[full] = (1u64 << (upto % 64)) - 1;
    }
}

fn suffix_fill(row: &mut [u64], from: usize, n: usize) {
    if from >= n {
        return;
    }
    let first = from / 64;
    let last = (n - 1) / 64;
    for w in first..=last {
        let mut word = !0u64;
        if w == first {
            word &= !0u64 << (from % 64);
        }
        if w == last && n % 64 != 0 {
            word &= (1u64 << (n % 64)) - 1;
        }
        row[w] |= word;
    }
}
