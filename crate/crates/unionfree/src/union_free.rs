//! Union-free subfamily extraction meeting the ⌊√(4m+1)⌋ − 1 bound.
//!
//! The levels of the from-maximal decomposition are the vertices of an
//! auxiliary graph: whenever two incomparable members have their union in
//! the family, the pair witnesses edges from every level at or above both
//! ranks up to the union's rank. Levels are greedily grouped into
//! independent sets of this graph. Each group yields a union-free candidate
//! (later groups are augmented with two disjoint chains built from a stored
//! witness pair); the largest candidate is returned, and a counting argument
//! over all candidates guarantees it meets the bound.

use serde::{Deserialize, Serialize};

use crate::bits::MemberSet;
use crate::family::{Selection, SetFamily};
use crate::poset::{Direction, LevelDecomposition, Poset};

/// Guaranteed union-free subfamily size for a family of `m` sets:
/// ⌊√(4m+1)⌋ − 1.
pub fn union_free_bound(m: usize) -> usize {
    (4 * m as u128 + 1).isqrt() as usize - 1
}

/// One witnessed interval: incomparable members `x_idx`, `y_idx` of rank at
/// most `low` whose union is the family member of rank `high`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessInterval {
    pub low: usize,
    pub high: usize,
    pub x_idx: usize,
    pub y_idx: usize,
}

/// The auxiliary level graph in closed interval form: levels `i < j` are
/// adjacent iff some witness interval has `low <= i` and `high >= j`,
/// i.e. iff `reach(i) >= j` where `reach` is the prefix maximum of witness
/// highs. `reach` is non-decreasing, which makes every edge set an interval
/// and keeps the greedy classes independent.
#[derive(Clone, Debug)]
pub struct WitnessGraph {
    t: usize,
    reach: Vec<usize>,
    witness_at: Vec<Option<WitnessInterval>>,
}

impl WitnessGraph {
    /// Scans all unordered incomparable pairs whose union is a member and
    /// folds them into the prefix-maximum form. For each level the stored
    /// witness attains `reach` (ties: lowest x then y index).
    pub fn build(fam: &SetFamily, poset: &Poset, lv: &LevelDecomposition) -> WitnessGraph {
        assert_eq!(lv.direction(), Direction::FromMaximal);
        let t = lv.t();
        let m = fam.len();
        let mut best_at: Vec<Option<WitnessInterval>> = vec![None; t + 1];
        let mut scratch = MemberSet::empty(fam.universe_size());
        for x in 0..m {
            for y in x + 1..m {
                if poset.comparable(x, y) {
                    continue;
                }
                fam.member(x).union_into(fam.member(y), &mut scratch);
                let Some(u) = fam.index_of(&scratch) else {
                    continue;
                };
                debug_assert!(u != x && u != y);
                let low = lv.rank(x).max(lv.rank(y));
                let high = lv.rank(u);
                debug_assert!(low < high, "a member union sits strictly above its parts");
                let slot = &mut best_at[low];
                if slot.as_ref().is_none_or(|w| high > w.high) {
                    *slot = Some(WitnessInterval {
                        low,
                        high,
                        x_idx: x,
                        y_idx: y,
                    });
                }
            }
        }
        // Prefix-maximize: reach[i] = best high among witnesses from <= i.
        let mut reach = vec![0usize; t + 1];
        let mut witness_at: Vec<Option<WitnessInterval>> = vec![None; t + 1];
        let mut running: Option<WitnessInterval> = None;
        for i in 1..=t {
            if let Some(w) = best_at[i].take() {
                if running.as_ref().is_none_or(|r| w.high > r.high) {
                    running = Some(w);
                }
            }
            if let Some(r) = &running {
                reach[i] = r.high;
                witness_at[i] = Some(r.clone());
            }
        }
        WitnessGraph {
            t,
            reach,
            witness_at,
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Highest level reachable by a witness from level <= i (0 if none).
    pub fn reach(&self, i: usize) -> usize {
        self.reach[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        lo != hi && self.reach[lo] >= hi
    }

    pub fn witness_at(&self, i: usize) -> Option<&WitnessInterval> {
        self.witness_at[i].as_ref()
    }
}

/// Partition of the levels `1..=t` into independent sets of the witness
/// graph, in greedy order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyPartition {
    pub classes: Vec<Vec<usize>>,
}

/// The greedy independent-set partition: a class starts at the least unused
/// level and repeatedly appends the least unused level non-adjacent to its
/// last member — in interval form, the first unused `w >= max(v+1,
/// reach(v)+1)`. Interval monotonicity makes each class fully independent.
pub fn greedy_partition(wg: &WitnessGraph) -> GreedyPartition {
    let t = wg.t();
    assert!(t >= 1);
    let mut used = vec![false; t + 1];
    let mut remaining = t;
    let mut classes = Vec::new();
    while remaining > 0 {
        let start = (1..=t).find(|&v| !used[v]).unwrap();
        let mut class = vec![start];
        used[start] = true;
        remaining -= 1;
        let mut cur = start;
        loop {
            let floor = (cur + 1).max(wg.reach(cur) + 1);
            match (floor..=t).find(|&w| !used[w]) {
                Some(w) => {
                    class.push(w);
                    used[w] = true;
                    remaining -= 1;
                    cur = w;
                }
                None => break,
            }
        }
        classes.push(class);
    }
    GreedyPartition { classes }
}

/// Size bookkeeping for one candidate, used by the extraction report and the
/// group-size audit (`size = level_sum + 2·(a − b) − dropped`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateAudit {
    pub class_index: usize,
    pub size: usize,
    pub level_sum: usize,
    /// `(b, a)` for augmented candidates: the witnessed level below and the
    /// class minimum the chains span towards.
    pub chain_span: Option<(usize, usize)>,
    pub dropped_z: Option<usize>,
}

/// Builds the union-free candidate for one greedy class (1-based index).
///
/// Class 1 is the plain union of its levels. A later class with minimum `a`
/// is augmented: every earlier class has a member below `a` adjacent to it,
/// the lowest such level `b` carries a stored witness pair, and two disjoint
/// chains are walked from the pair through levels `b..a-1`. If the witness
/// union sits exactly on level `a` it is the one member that could break
/// union-freeness and is dropped.
pub fn build_candidate(
    fam: &SetFamily,
    poset: &Poset,
    lv: &LevelDecomposition,
    wg: &WitnessGraph,
    gp: &GreedyPartition,
    class_index: usize,
) -> (Selection, CandidateAudit) {
    let class = &gp.classes[class_index - 1];
    let level_sum: usize = class.iter().map(|&l| lv.level(l).len()).sum();
    let mut picked: Vec<usize> = class.iter().flat_map(|&l| lv.level(l).iter().copied()).collect();

    if class_index == 1 {
        picked.sort_unstable();
        let audit = CandidateAudit {
            class_index,
            size: picked.len(),
            level_sum,
            chain_span: None,
            dropped_z: None,
        };
        return (Selection::from_sorted(picked), audit);
    }

    let a = class[0];
    let b = gp.classes[..class_index - 1]
        .iter()
        .map(|earlier| {
            let below = earlier.partition_point(|&v| v < a);
            assert!(below > 0, "every earlier class starts below a later class");
            let aj = earlier[below - 1];
            assert!(wg.adjacent(aj, a), "greedy skipped a only due to adjacency");
            aj
        })
        .min()
        .expect("class_index > 1 has earlier classes");

    let witness = wg
        .witness_at(b)
        .expect("an adjacent level carries a witness");
    assert!(witness.high >= a && witness.low <= b);

    let chain_x = lv
        .ascending_chain(poset, witness.x_idx, b, a - 1)
        .expect("witness ranks satisfy the chain contract");
    let chain_y = lv
        .ascending_chain(poset, witness.y_idx, b, a - 1)
        .expect("witness ranks satisfy the chain contract");
    assert!(
        chain_x.iter().all(|x| !chain_y.contains(x)),
        "chains over a witness pair cannot meet below the union's rank"
    );

    let dropped_z = if witness.high == a {
        let union = fam.member(witness.x_idx).union(fam.member(witness.y_idx));
        let z = fam.index_of(&union).expect("witnessed union is a member");
        assert_eq!(lv.rank(z), a);
        Some(z)
    } else {
        None
    };

    picked.extend_from_slice(&chain_x);
    picked.extend_from_slice(&chain_y);
    if let Some(z) = dropped_z {
        picked.retain(|&v| v != z);
    }
    picked.sort_unstable();
    assert!(
        picked.windows(2).all(|w| w[0] < w[1]),
        "chains and class levels are disjoint"
    );

    let audit = CandidateAudit {
        class_index,
        size: picked.len(),
        level_sum,
        chain_span: Some((b, a)),
        dropped_z,
    };
    (Selection::from_sorted(picked), audit)
}

/// Result of a union-free extraction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub m: usize,
    pub bound: usize,
    pub size: usize,
    pub chosen_class: Option<usize>,
    pub class_sizes: Vec<usize>,
    pub dropped_z: Option<usize>,
    pub selection: Selection,
}

/// Extracts a union-free subfamily of size at least ⌊√(4m+1)⌋ − 1 by
/// building every greedy-class candidate and returning the largest (lowest
/// class index on ties). The returned selection is re-verified union-free.
pub fn extract_union_free(fam: &SetFamily) -> ExtractionReport {
    let m = fam.len();
    let bound = union_free_bound(m);
    if m == 0 {
        return ExtractionReport {
            m,
            bound,
            size: 0,
            chosen_class: None,
            class_sizes: Vec::new(),
            dropped_z: None,
            selection: Selection::from_sorted(Vec::new()),
        };
    }
    let poset = Poset::from_family(fam);
    let lv = poset.levels(Direction::FromMaximal);
    let wg = WitnessGraph::build(fam, &poset, &lv);
    let gp = greedy_partition(&wg);

    let mut best: Option<(Selection, CandidateAudit)> = None;
    let mut class_sizes = Vec::with_capacity(gp.classes.len());
    for class_index in 1..=gp.classes.len() {
        let (sel, audit) = build_candidate(fam, &poset, &lv, &wg, &gp, class_index);
        if let Some((b, a)) = audit.chain_span {
            let dropped = usize::from(audit.dropped_z.is_some());
            assert_eq!(audit.size, audit.level_sum + 2 * (a - b) - dropped);
        }
        class_sizes.push(audit.size);
        if best.as_ref().is_none_or(|(_, ba)| audit.size > ba.size) {
            best = Some((sel, audit));
        }
    }
    let (selection, audit) = best.expect("t >= 1 yields at least one class");

    assert!(fam.is_union_free(&selection), "candidates are union-free by construction");
    assert!(
        selection.len() >= bound,
        "largest candidate meets the guaranteed bound"
    );

    ExtractionReport {
        m,
        bound,
        size: selection.len(),
        chosen_class: Some(audit.class_index),
        class_sizes,
        dropped_z: audit.dropped_z,
        selection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[u64]]) -> SetFamily {
        SetFamily::from_label_sets(&sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>())
    }

    fn graph_of(f: &SetFamily) -> (Poset, LevelDecomposition, WitnessGraph) {
        let p = Poset::from_family(f);
        let lv = p.levels(Direction::FromMaximal);
        let wg = WitnessGraph::build(f, &p, &lv);
        (p, lv, wg)
    }

    #[test]
    fn bound_spot_values() {
        let expect = [(1, 1), (2, 2), (3, 2), (9, 5), (12, 6), (16, 7)];
        for (m, b) in expect {
            assert_eq!(union_free_bound(m), b, "m = {m}");
        }
        assert_eq!(union_free_bound(0), 0);
    }

    #[test]
    fn witness_graph_single_pair() {
        let f = fam(&[&[1], &[2], &[1, 2]]);
        let (_, _, wg) = graph_of(&f);
        assert_eq!(wg.t(), 2);
        assert_eq!(wg.reach(1), 2);
        assert_eq!(wg.reach(2), 2);
        let w = wg.witness_at(1).unwrap();
        assert_eq!((w.low, w.high), (1, 2));
        assert!(wg.adjacent(1, 2));
    }

    #[test]
    fn witness_graph_chain_is_edgeless() {
        let f = fam(&[&[1], &[1, 2], &[1, 2, 3]]);
        let (_, _, wg) = graph_of(&f);
        assert_eq!(wg.t(), 3);
        for i in 1..=3 {
            assert_eq!(wg.reach(i), 0);
        }
        assert!(!wg.adjacent(1, 3));
    }

    #[test]
    fn reach_is_non_decreasing() {
        let f = fam(&[&[1], &[2], &[3], &[1, 2], &[1, 2, 3]]);
        let (_, _, wg) = graph_of(&f);
        for i in 1..wg.t() {
            assert!(wg.reach(i) <= wg.reach(i + 1));
        }
    }

    fn greedy_from_reach(reach: Vec<usize>) -> GreedyPartition {
        let t = reach.len() - 1;
        let wg = WitnessGraph {
            t,
            witness_at: vec![None; t + 1],
            reach,
        };
        greedy_partition(&wg)
    }

    #[test]
    fn greedy_hand_simulations() {
        let gp = greedy_from_reach(vec![0, 2, 2]);
        assert_eq!(gp.classes, vec![vec![1], vec![2]]);

        let gp = greedy_from_reach(vec![0, 0, 0, 0, 0]);
        assert_eq!(gp.classes, vec![vec![1, 2, 3, 4]]);

        // Level 1 adjacent to everything: it is isolated into its own class
        // and at least one more class follows.
        let gp = greedy_from_reach(vec![0, 3, 3, 3]);
        assert_eq!(gp.classes[0], vec![1]);
        assert!(gp.classes.len() >= 2);
    }

    #[test]
    fn candidate_chain_augmentation() {
        let f = fam(&[&[1], &[2], &[1, 2]]);
        let (p, lv, wg) = graph_of(&f);
        let gp = greedy_partition(&wg);
        assert_eq!(gp.classes, vec![vec![1], vec![2]]);

        let (sel, audit) = build_candidate(&f, &p, &lv, &wg, &gp, 2);
        assert_eq!(sel.indices(), &[0, 1]);
        assert_eq!(audit.chain_span, Some((1, 2)));
        assert_eq!(audit.dropped_z, Some(2));
        assert_eq!(audit.size, 2);

        let (sel1, audit1) = build_candidate(&f, &p, &lv, &wg, &gp, 1);
        assert_eq!(sel1.indices(), &[0, 1]);
        assert_eq!(audit1.size, audit1.level_sum);
    }

    #[test]
    fn candidate_edgeless_takes_everything() {
        let f = fam(&[&[1], &[2], &[3], &[5, 6]]);
        let (p, lv, wg) = graph_of(&f);
        let gp = greedy_partition(&wg);
        assert_eq!(gp.classes.len(), 1);
        let (sel, _) = build_candidate(&f, &p, &lv, &wg, &gp, 1);
        assert_eq!(sel.len(), 4);
    }

    #[test]
    fn extract_empty_family() {
        let f = fam(&[]);
        let report = extract_union_free(&f);
        assert_eq!(report.size, 0);
        assert_eq!(report.bound, 0);
        assert_eq!(report.chosen_class, None);
    }

    #[test]
    fn extract_three_sets() {
        let f = fam(&[&[1], &[2], &[1, 2]]);
        let report = extract_union_free(&f);
        assert_eq!(report.bound, 2);
        assert_eq!(report.size, 2);
        assert_eq!(report.chosen_class, Some(1));
        assert!(f.is_union_free(&report.selection));
    }

    #[test]
    fn extract_is_deterministic() {
        let f = fam(&[&[1], &[2], &[3], &[1, 2], &[2, 3], &[1, 2, 3]]);
        let a = serde_json::to_string(&extract_union_free(&f)).unwrap();
        let b = serde_json::to_string(&extract_union_free(&f)).unwrap();
        assert_eq!(a, b);
    }
}
