//! Canonical set families over a dense element universe, with the exact
//! predicates (union-free, a-union-free, a-degenerate, chain/antichain)
//! everything else is checked against.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::MemberSet;
use crate::{Error, Result};

/// Default cap on selection size for the exact a-union-free test. Above this
/// the exponential cover search is refused; callers must rely on structural
/// certificates instead.
pub const DEFAULT_SELECTION_LIMIT: usize = 24;

/// An indexed collection of distinct finite sets. Input duplicates are
/// collapsed (the count is kept), elements are remapped onto the dense
/// universe `0..universe_size` with the original labels retained for output.
///
/// Immutable after construction; all queries are read-only.
#[derive(Clone, Debug)]
pub struct SetFamily {
    members: Vec<MemberSet>,
    content_index: HashMap<MemberSet, usize>,
    universe_size: usize,
    element_labels: Vec<u64>,
    set_labels: Option<Vec<String>>,
    duplicates_dropped: usize,
}

#[derive(Serialize, Deserialize)]
struct FamilyDoc {
    sets: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl SetFamily {
    /// Builds a family from element-labelled sets, deduplicating and
    /// remapping labels onto dense indices (ascending label order).
    pub fn from_label_sets(sets: &[Vec<u64>]) -> SetFamily {
        Self::build(sets, None)
    }

    pub fn from_label_sets_named(sets: &[Vec<u64>], labels: Vec<String>) -> Result<SetFamily> {
        if labels.len() != sets.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} sets",
                labels.len(),
                sets.len()
            )));
        }
        Ok(Self::build(sets, Some(labels)))
    }

    fn build(sets: &[Vec<u64>], labels: Option<Vec<String>>) -> SetFamily {
        let mut all_labels: Vec<u64> = sets.iter().flatten().copied().collect();
        all_labels.sort_unstable();
        all_labels.dedup();
        let label_to_dense: HashMap<u64, usize> = all_labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect();
        let universe_size = all_labels.len();

        let mut members = Vec::with_capacity(sets.len());
        let mut content_index = HashMap::with_capacity(sets.len());
        let mut kept_labels = labels.as_ref().map(|_| Vec::with_capacity(sets.len()));
        let mut duplicates_dropped = 0;
        for (i, set) in sets.iter().enumerate() {
            let mut ms = MemberSet::empty(universe_size);
            for label in set {
                ms.insert(label_to_dense[label]);
            }
            if content_index.contains_key(&ms) {
                duplicates_dropped += 1;
                continue;
            }
            content_index.insert(ms.clone(), members.len());
            members.push(ms);
            if let (Some(kept), Some(labels)) = (kept_labels.as_mut(), labels.as_ref()) {
                kept.push(labels[i].clone());
            }
        }

        SetFamily {
            members,
            content_index,
            universe_size,
            element_labels: all_labels,
            set_labels: kept_labels,
            duplicates_dropped,
        }
    }

    /// Parses either the text format (one set per line) or the JSON document
    /// format, sniffing by the first non-whitespace byte.
    pub fn parse(input: &str) -> Result<SetFamily> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    /// Text format: one set per line, whitespace-separated non-negative
    /// integers; `#` starts a comment; blank lines are ignored.
    pub fn parse_text(input: &str) -> Result<SetFamily> {
        let mut sets = Vec::new();
        for (lineno, raw) in input.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let mut set = Vec::new();
            for tok in line.split_whitespace() {
                let v: u64 = tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("invalid element '{tok}' (expected non-negative integer)"),
                })?;
                set.push(v);
            }
            sets.push(set);
        }
        Ok(Self::build(&sets, None))
    }

    /// JSON format: `{"sets": [[int, ...], ...], "labels": ["name", ...]?}`
    /// with one optional label per set.
    pub fn parse_json(input: &str) -> Result<SetFamily> {
        let doc: FamilyDoc = serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        match doc.labels {
            Some(labels) => Self::from_label_sets_named(&doc.sets, labels),
            None => Ok(Self::from_label_sets(&doc.sets)),
        }
    }

    /// Serializes to the text format. Fails if the family contains the empty
    /// set, which a blank line cannot represent; use JSON for those.
    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        for ms in &self.members {
            if ms.is_empty() {
                return Err(Error::Capability(
                    "text format cannot represent the empty set; use json".into(),
                ));
            }
            let labels: Vec<String> = ms
                .iter_ones()
                .map(|e| self.element_labels[e].to_string())
                .collect();
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let doc = FamilyDoc {
            sets: self
                .members
                .iter()
                .map(|ms| ms.iter_ones().map(|e| self.element_labels[e]).collect())
                .collect(),
            labels: self.set_labels.clone(),
        };
        serde_json::to_string(&doc).expect("family serialization cannot fail")
    }

    /// Number of member sets.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn member(&self, index: usize) -> &MemberSet {
        &self.members[index]
    }

    pub fn members(&self) -> &[MemberSet] {
        &self.members
    }

    /// Index of a member with exactly this content, if present.
    pub fn index_of(&self, content: &MemberSet) -> Option<usize> {
        self.content_index.get(content).copied()
    }

    pub fn set_label(&self, index: usize) -> Option<&str> {
        self.set_labels.as_ref().map(|l| l[index].as_str())
    }

    pub fn element_label(&self, dense: usize) -> u64 {
        self.element_labels[dense]
    }

    /// Original-label view of one member, ascending.
    pub fn member_labels(&self, index: usize) -> Vec<u64> {
        self.members[index]
            .iter_ones()
            .map(|e| self.element_labels[e])
            .collect()
    }

    /// True iff no three pairwise-distinct selected sets satisfy X ∪ Y = Z.
    /// Decided by probing the content index with each incomparable pair's
    /// union, restricted to the selection.
    pub fn is_union_free(&self, sel: &Selection) -> bool {
        let in_sel = sel.membership(self.len());
        let mut scratch = MemberSet::empty(self.universe_size);
        let idx = sel.indices();
        for (p, &i) in idx.iter().enumerate() {
            for &j in &idx[p + 1..] {
                let (x, y) = (&self.members[i], &self.members[j]);
                let (xy, yx) = x.subset_relation(y);
                if xy || yx {
                    // Union of a comparable pair is the larger set itself,
                    // never a third distinct member.
                    continue;
                }
                x.union_into(y, &mut scratch);
                if let Some(&k) = self.content_index.get(&scratch) {
                    debug_assert!(k != i && k != j);
                    if in_sel[k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff no selected set is the union of `a` distinct selected proper
    /// subsets of it. Exact, so only allowed on selections up to `limit`
    /// members ([`DEFAULT_SELECTION_LIMIT`] by default).
    pub fn is_a_union_free(&self, sel: &Selection, a: usize) -> Result<bool> {
        self.is_a_union_free_with_limit(sel, a, DEFAULT_SELECTION_LIMIT)
    }

    pub fn is_a_union_free_with_limit(
        &self,
        sel: &Selection,
        a: usize,
        limit: usize,
    ) -> Result<bool> {
        assert!(a >= 2, "a-union-freeness requires a >= 2");
        if sel.len() > limit {
            return Err(Error::Capability(format!(
                "selection of {} sets exceeds the exact a-union-free limit {}",
                sel.len(),
                limit
            )));
        }
        // Any a or fewer distinct sets cannot contain a+1 distinct ones.
        if sel.len() <= a {
            return Ok(true);
        }
        for &z in sel.indices() {
            if self.expressible_within(sel, z, a) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cover criterion for one target: Z is a union of `a` distinct selected
    /// sets iff its selected proper subsets C satisfy |C| >= a, ∪C = Z, and
    /// some subcollection of size <= a covers Z (a smaller cover is padded
    /// with further members of C without changing the union).
    pub(crate) fn expressible_within(&self, sel: &Selection, z: usize, a: usize) -> bool {
        let target = &self.members[z];
        let proper: Vec<&MemberSet> = sel
            .indices()
            .iter()
            .filter(|&&i| i != z && self.members[i].is_strict_subset_of(target))
            .map(|&i| &self.members[i])
            .collect();
        if proper.len() < a {
            return false;
        }
        let mut union_all = MemberSet::empty(self.universe_size);
        for s in &proper {
            union_all = union_all.union(s);
        }
        if &union_all != target {
            return false;
        }
        cover_search(target, &proper, a, self.universe_size)
    }

    /// True iff every selected set strictly contains at most a-1 other
    /// selected sets.
    pub fn is_a_degenerate(&self, sel: &Selection, a: usize) -> bool {
        let idx = sel.indices();
        for &i in idx {
            let mut dominated = 0usize;
            for &j in idx {
                if j != i && self.members[j].is_strict_subset_of(&self.members[i]) {
                    dominated += 1;
                    if dominated >= a {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Chain / antichain / neither under inclusion. Empty and singleton
    /// selections are compatible with both and report `Chain`.
    pub fn classify_structure(&self, sel: &Selection) -> StructureKind {
        let idx = sel.indices();
        if idx.len() <= 1 {
            return StructureKind::Chain;
        }
        let mut all_comparable = true;
        let mut all_incomparable = true;
        for (p, &i) in idx.iter().enumerate() {
            for &j in &idx[p + 1..] {
                let (xy, yx) = self.members[i].subset_relation(&self.members[j]);
                if xy || yx {
                    all_incomparable = false;
                } else {
                    all_comparable = false;
                }
                if !all_comparable && !all_incomparable {
                    return StructureKind::Neither;
                }
            }
        }
        if all_comparable {
            StructureKind::Chain
        } else {
            StructureKind::Antichain
        }
    }
}

/// Exact bounded-size set cover: can `target` be covered by at most `budget`
/// of the candidate sets? Depth-first on the lowest uncovered element, with a
/// failed-state memo.
fn cover_search(
    target: &MemberSet,
    candidates: &[&MemberSet],
    budget: usize,
    universe_size: usize,
) -> bool {
    fn first_uncovered(target: &MemberSet, covered: &MemberSet) -> Option<usize> {
        target.iter_ones().find(|&e| !covered.contains(e))
    }

    fn recurse(
        target: &MemberSet,
        candidates: &[&MemberSet],
        covered: &MemberSet,
        budget: usize,
        failed: &mut HashSet<(Box<[u64]>, usize)>,
    ) -> bool {
        let e = match first_uncovered(target, covered) {
            None => return true,
            Some(e) => e,
        };
        if budget == 0 {
            return false;
        }
        let key = (covered.words().to_vec().into_boxed_slice(), budget);
        if failed.contains(&key) {
            return false;
        }
        for cand in candidates {
            if cand.contains(e) {
                let next = covered.union(cand);
                if recurse(target, candidates, &next, budget - 1, failed) {
                    return true;
                }
            }
        }
        failed.insert(key);
        false
    }

    let covered = MemberSet::empty(universe_size);
    let mut failed = HashSet::new();
    recurse(target, candidates, &covered, budget, &mut failed)
}

/// Structural classification of a selection under inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Chain,
    Antichain,
    Neither,
}

/// A sorted, duplicate-free list of member indices into one family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Selection {
    indices: Vec<usize>,
}

impl Selection {
    pub fn new(mut indices: Vec<usize>, family_size: usize) -> Result<Selection> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("selection has duplicate indices".into()));
        }
        if let Some(&last) = indices.last() {
            if last >= family_size {
                return Err(Error::InvalidInput(format!(
                    "selection index {last} out of range for family of {family_size}"
                )));
            }
        }
        Ok(Selection { indices })
    }

    /// Internal constructor for indices already known to be valid.
    pub(crate) fn from_sorted(indices: Vec<usize>) -> Selection {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Selection { indices }
    }

    pub fn all(family_size: usize) -> Selection {
        Selection {
            indices: (0..family_size).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    fn membership(&self, family_size: usize) -> Vec<bool> {
        let mut mask = vec![false; family_size];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }
}
