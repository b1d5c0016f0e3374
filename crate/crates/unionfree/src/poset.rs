//! Strict partial orders as dense dominance matrices, with antichain level
//! decompositions in both directions and deterministic chain walks.

use serde::{Deserialize, Serialize};

use crate::bits::{iter_word_ones, BitMatrix, Mask};
use crate::family::SetFamily;
use crate::{Error, Result};

/// Above this size, order axioms are spot-checked on a deterministic sample
/// instead of all pairs/triples.
const FULL_VALIDATION_LIMIT: usize = 1024;

/// A strict order on `n` elements stored as two dense bit matrices (the
/// relation and its transpose), giving constant-time dominance queries and
/// word-wise counting against element masks. Memory is 2·n²/8 bytes, fine
/// for the intended n up to ~20k.
#[derive(Clone)]
pub struct Poset {
    n: usize,
    dominated: BitMatrix,  // row x: all y with y < x
    dominators: BitMatrix, // row x: all y with y > x
    out_deg: Vec<u32>,
    in_deg: Vec<u32>,
}

/// Which end the level peeling starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Level t = maximal elements; lower levels peeled afterwards.
    FromMaximal,
    /// Level 1 = minimal elements; higher levels peeled afterwards.
    FromMinimal,
}

impl Poset {
    /// Inclusion order of a family: `dominates(x, y)` iff set y ⊊ set x.
    pub fn from_family(fam: &SetFamily) -> Poset {
        let n = fam.len();
        let mut dominated = BitMatrix::new(n);
        let mut dominators = BitMatrix::new(n);
        for x in 0..n {
            for y in x + 1..n {
                let (xy, yx) = fam.member(x).subset_relation(fam.member(y));
                // Members are distinct, so one-way subset means strict.
                if xy && yx {
                    unreachable!("duplicate members in canonical family");
                } else if xy {
                    dominated.set(y, x);
                    dominators.set(x, y);
                } else if yx {
                    dominated.set(x, y);
                    dominators.set(y, x);
                }
            }
        }
        Self::from_parts(n, dominated, dominators)
    }

    /// Builds from an explicit strict dominance matrix (`matrix[x][y]` means
    /// y < x), validating irreflexivity, antisymmetry and transitivity —
    /// exhaustively at desk scale, on a deterministic sample above it.
    pub fn from_matrix(matrix: &[Vec<bool>]) -> Result<Poset> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("dominance matrix is not square".into()));
        }
        let mut dominated = BitMatrix::new(n);
        let mut dominators = BitMatrix::new(n);
        for x in 0..n {
            for y in 0..n {
                if matrix[x][y] {
                    dominated.set(x, y);
                    dominators.set(y, x);
                }
            }
        }
        let poset = Self::from_parts(n, dominated, dominators);
        poset.validate_axioms()?;
        Ok(poset)
    }

    pub(crate) fn from_parts(n: usize, dominated: BitMatrix, dominators: BitMatrix) -> Poset {
        let out_deg = (0..n).map(|x| dominated.row_popcount(x) as u32).collect();
        let in_deg = (0..n).map(|x| dominators.row_popcount(x) as u32).collect();
        Poset {
            n,
            dominated,
            dominators,
            out_deg,
            in_deg,
        }
    }

    fn validate_axioms(&self) -> Result<()> {
        let n = self.n;
        let stride = if n <= FULL_VALIDATION_LIMIT {
            1
        } else {
            n / FULL_VALIDATION_LIMIT + 1
        };
        for x in (0..n).step_by(stride) {
            if self.dominated.get(x, x) {
                return Err(Error::InvalidInput(format!("order not irreflexive at {x}")));
            }
            for y in self.dominated_indices(x) {
                if self.dominated.get(y, x) {
                    return Err(Error::InvalidInput(format!(
                        "order not antisymmetric at ({x}, {y})"
                    )));
                }
                // Transitivity: everything below y must be below x.
                let below_y = self.dominated.row(y);
                let below_x = self.dominated.row(x);
                if below_y.iter().zip(below_x).any(|(a, b)| a & !b != 0) {
                    return Err(Error::InvalidInput(format!(
                        "order not transitive below ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// y < x?
    pub fn dominates(&self, x: usize, y: usize) -> bool {
        self.dominated.get(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.dominated.get(x, y) || self.dominated.get(y, x)
    }

    /// Number of elements strictly below x.
    pub fn out_degree(&self, x: usize) -> usize {
        self.out_deg[x] as usize
    }

    /// Number of elements strictly above x.
    pub fn in_degree(&self, x: usize) -> usize {
        self.in_deg[x] as usize
    }

    pub(crate) fn dominated_row(&self, x: usize) -> &[u64] {
        self.dominated.row(x)
    }

    fn dominated_indices(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        iter_word_ones(self.dominated.row(x))
    }

    /// Induced suborder on `keep` (sorted, distinct, in range). Returns the
    /// suborder together with the new-index → old-index map.
    pub fn restrict(&self, keep: &[usize]) -> (Poset, Vec<usize>) {
        assert!(
            keep.windows(2).all(|w| w[0] < w[1]) && keep.last().is_none_or(|&l| l < self.n),
            "restrict requires sorted distinct indices in range"
        );
        let k = keep.len();
        let mut dominated = BitMatrix::new(k);
        let mut dominators = BitMatrix::new(k);
        for (nx, &ox) in keep.iter().enumerate() {
            for (ny, &oy) in keep.iter().enumerate() {
                if self.dominated.get(ox, oy) {
                    dominated.set(nx, ny);
                    dominators.set(ny, nx);
                }
            }
        }
        (Self::from_parts(k, dominated, dominators), keep.to_vec())
    }

    /// Antichain layering by repeatedly peeling maximal (resp. minimal)
    /// elements. The number of levels equals the longest chain length.
    pub fn levels(&self, direction: Direction) -> LevelDecomposition {
        let n = self.n;
        let mut count: Vec<u32> = match direction {
            Direction::FromMaximal => self.in_deg.clone(),
            Direction::FromMinimal => self.out_deg.clone(),
        };
        let mut rounds: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..n).filter(|&x| count[x] == 0).collect();
        let mut seen = 0usize;
        while !current.is_empty() {
            let mut next = Vec::new();
            for &x in &current {
                let row = match direction {
                    Direction::FromMaximal => self.dominated.row(x),
                    Direction::FromMinimal => self.dominators.row(x),
                };
                for y in iter_word_ones(row) {
                    count[y] -= 1;
                    if count[y] == 0 {
                        next.push(y);
                    }
                }
            }
            seen += current.len();
            next.sort_unstable();
            rounds.push(std::mem::replace(&mut current, next));
        }
        assert_eq!(seen, n, "level peeling must consume every element");

        let t = rounds.len();
        let mut rank = vec![0usize; n];
        let levels: Vec<Vec<usize>> = match direction {
            Direction::FromMinimal => rounds,
            Direction::FromMaximal => {
                rounds.reverse();
                rounds
            }
        };
        for (i, level) in levels.iter().enumerate() {
            for &x in level {
                rank[x] = i + 1;
            }
        }
        LevelDecomposition {
            direction,
            levels,
            rank,
            t,
        }
    }

    pub(crate) fn level_mask(&self, elements: &[usize]) -> Mask {
        let mut mask = Mask::new(self.n);
        for &x in elements {
            mask.set(x);
        }
        mask
    }
}

/// Antichain layering of a poset with per-element 1-based ranks.
///
/// Invariants: each level is an antichain, ranks are strictly monotone along
/// dominance, and in a `FromMaximal` decomposition every non-top element is
/// strictly below some element of the next level (successor property).
#[derive(Clone, Debug)]
pub struct LevelDecomposition {
    direction: Direction,
    levels: Vec<Vec<usize>>,
    rank: Vec<usize>,
    t: usize,
}

impl LevelDecomposition {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Number of levels = longest chain length.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Elements of level `i` (1-based), ascending.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i - 1]
    }

    pub fn iter_levels(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.levels.iter().enumerate().map(|(i, l)| (i + 1, l.as_slice()))
    }

    /// 1-based level index of an element.
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// Index (1-based) of a largest level, lowest on ties.
    pub fn largest_level(&self) -> usize {
        let mut best = 1;
        for i in 2..=self.t {
            if self.level(i).len() > self.level(best).len() {
                best = i;
            }
        }
        best
    }

    /// A chain of length exactly `t` hitting every level once, built by
    /// successor (FromMaximal) or predecessor (FromMinimal) walks with
    /// lowest-index tie-breaks. Returns elements in ascending order.
    pub fn longest_chain(&self, poset: &Poset) -> Vec<usize> {
        if self.t == 0 {
            return Vec::new();
        }
        match self.direction {
            Direction::FromMaximal => {
                let mut cur = self.level(1)[0];
                let mut chain = vec![cur];
                for r in 2..=self.t {
                    cur = self.successor(poset, cur, r);
                    chain.push(cur);
                }
                chain
            }
            Direction::FromMinimal => {
                let mut cur = self.level(self.t)[0];
                let mut chain = vec![cur];
                for r in (1..self.t).rev() {
                    cur = self.predecessor(poset, cur, r);
                    chain.push(cur);
                }
                chain.reverse();
                chain
            }
        }
    }

    /// Walks successors upward from `start` and returns the chain elements
    /// of ranks `lo..=hi`, each strictly contained in the next. Requires a
    /// `FromMaximal` decomposition and `rank(start) <= lo <= hi <= t`.
    pub fn ascending_chain(
        &self,
        poset: &Poset,
        start: usize,
        lo: usize,
        hi: usize,
    ) -> Result<Vec<usize>> {
        if self.direction != Direction::FromMaximal {
            return Err(Error::Contract(
                "ascending chain requires a from-maximal decomposition".into(),
            ));
        }
        let r0 = self.rank(start);
        if !(r0 <= lo && lo <= hi && hi <= self.t) {
            return Err(Error::Contract(format!(
                "ascending chain needs rank(start)={r0} <= lo={lo} <= hi={hi} <= t={}",
                self.t
            )));
        }
        let mut out = Vec::with_capacity(hi - lo + 1);
        let mut cur = start;
        if r0 == lo {
            out.push(cur);
        }
        for r in r0 + 1..=hi {
            cur = self.successor(poset, cur, r);
            if r >= lo {
                out.push(cur);
            }
        }
        Ok(out)
    }

    fn successor(&self, poset: &Poset, cur: usize, next_rank: usize) -> usize {
        *self
            .level(next_rank)
            .iter()
            .find(|&&y| poset.dominates(y, cur))
            .expect("successor property guarantees a strict superset on the next level")
    }

    fn predecessor(&self, poset: &Poset, cur: usize, prev_rank: usize) -> usize {
        *self
            .level(prev_rank)
            .iter()
            .find(|&&y| poset.dominates(cur, y))
            .expect("predecessor property guarantees a strict subset on the previous level")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[u64]]) -> SetFamily {
        SetFamily::from_label_sets(&sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn inclusion_order_examples() {
        let f = fam(&[&[1], &[1, 2]]);
        let p = Poset::from_family(&f);
        assert!(p.dominates(1, 0));
        assert!(!p.dominates(0, 1));

        let anti = fam(&[&[1], &[2], &[3]]);
        let pa = Poset::from_family(&anti);
        let mut any = false;
        for x in 0..3 {
            for y in 0..3 {
                any |= pa.dominates(x, y);
            }
        }
        assert!(!any);

        let v = fam(&[&[1], &[2], &[1, 2]]);
        let pv = Poset::from_family(&v);
        let trues: Vec<(usize, usize)> = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .filter(|&(x, y)| pv.dominates(x, y))
            .collect();
        assert_eq!(trues, vec![(2, 0), (2, 1)]);
    }

    #[test]
    fn level_examples() {
        let chain = fam(&[&[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]);
        let p = Poset::from_family(&chain);
        let lv = p.levels(Direction::FromMaximal);
        assert_eq!(lv.t(), 4);
        for i in 1..=4 {
            assert_eq!(lv.level(i).len(), 1);
        }

        let anti = fam(&[&[1], &[2], &[3], &[4], &[5]]);
        let lv = Poset::from_family(&anti).levels(Direction::FromMinimal);
        assert_eq!(lv.t(), 1);
        assert_eq!(lv.level(1).len(), 5);

        // Hand-peeled: {1,2} is the single maximal set, {1} and {2} follow.
        let v = fam(&[&[1], &[2], &[1, 2]]);
        let lv = Poset::from_family(&v).levels(Direction::FromMaximal);
        assert_eq!(lv.t(), 2);
        assert_eq!(lv.level(2), &[2]);
        assert_eq!(lv.level(1), &[0, 1]);
    }

    #[test]
    fn longest_chain_examples() {
        let chain = fam(&[&[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]);
        let p = Poset::from_family(&chain);
        for dir in [Direction::FromMaximal, Direction::FromMinimal] {
            let lv = p.levels(dir);
            assert_eq!(lv.longest_chain(&p), vec![0, 1, 2, 3]);
        }

        let anti = fam(&[&[7], &[3], &[5]]);
        let p = Poset::from_family(&anti);
        let lv = p.levels(Direction::FromMaximal);
        assert_eq!(lv.longest_chain(&p), vec![0]);

        // Tie-break: both {1} and {2} sit on level 1; lowest index starts.
        let v = fam(&[&[1], &[2], &[1, 2]]);
        let p = Poset::from_family(&v);
        let lv = p.levels(Direction::FromMaximal);
        assert_eq!(lv.longest_chain(&p), vec![0, 2]);
    }

    #[test]
    fn ascending_chain_examples() {
        let chain = fam(&[&[1], &[1, 2], &[1, 2, 3]]);
        let p = Poset::from_family(&chain);
        let lv = p.levels(Direction::FromMaximal);
        assert_eq!(lv.ascending_chain(&p, 0, 2, 3).unwrap(), vec![1, 2]);

        let v = fam(&[&[1], &[2], &[1, 2]]);
        let p = Poset::from_family(&v);
        let lv = p.levels(Direction::FromMaximal);
        assert_eq!(lv.ascending_chain(&p, 0, 1, 1).unwrap(), vec![0]);

        // Two incomparable supersets at level 2: lowest index wins.
        let w = fam(&[&[1], &[2], &[1, 2], &[1, 3]]);
        let p = Poset::from_family(&w);
        let lv = p.levels(Direction::FromMaximal);
        assert_eq!(lv.rank(0), 1);
        assert_eq!(lv.ascending_chain(&p, 0, 2, 2).unwrap(), vec![2]);

        assert!(lv.ascending_chain(&p, 2, 1, 2).is_err());
    }

    #[test]
    fn restrict_examples() {
        let chain = fam(&[&[1], &[1, 2], &[1, 2, 3]]);
        let p = Poset::from_family(&chain);

        let (all, map) = p.restrict(&[0, 1, 2]);
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(all.levels(Direction::FromMinimal).t(), 3);

        let (one, _) = p.restrict(&[1]);
        assert_eq!(one.n(), 1);
        assert_eq!(one.levels(Direction::FromMinimal).t(), 1);

        let (two, map) = p.restrict(&[0, 1]);
        assert_eq!(two.levels(Direction::FromMinimal).t(), 2);
        assert!(two.dominates(1, 0));
        assert_eq!(map, vec![0, 1]);
    }

    #[test]
    fn matrix_validation() {
        // 2-chain as an explicit matrix.
        let ok = vec![vec![false, true], vec![false, false]];
        assert!(Poset::from_matrix(&ok).is_ok());

        let refl = vec![vec![true]];
        assert!(Poset::from_matrix(&refl).is_err());

        let sym = vec![vec![false, true], vec![true, false]];
        assert!(Poset::from_matrix(&sym).is_err());

        // 0 > 1 > 2 without 0 > 2 breaks transitivity.
        let intrans = vec![
            vec![false, true, false],
            vec![false, false, true],
            vec![false, false, false],
        ];
        assert!(Poset::from_matrix(&intrans).is_err());
    }
}
