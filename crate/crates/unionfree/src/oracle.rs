//! Exact desk-scale maxima by include/exclude branch and bound, used as
//! ground truth for the extractors. Not meant to scale: sizes are capped and
//! a per-instance time budget is surfaced instead of raised.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bits::MemberSet;
use crate::family::{Selection, SetFamily};
use crate::{Error, Result};

pub const DEFAULT_UNION_FREE_MEMBERS: usize = 22;
pub const DEFAULT_A_UNION_FREE_MEMBERS: usize = 18;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(60);

/// Caps for one oracle run.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    pub max_members: usize,
    pub time_budget: Duration,
}

impl OracleLimits {
    pub fn union_free() -> Self {
        OracleLimits {
            max_members: DEFAULT_UNION_FREE_MEMBERS,
            time_budget: DEFAULT_TIME_BUDGET,
        }
    }

    pub fn a_union_free() -> Self {
        OracleLimits {
            max_members: DEFAULT_A_UNION_FREE_MEMBERS,
            time_budget: DEFAULT_TIME_BUDGET,
        }
    }

    pub fn with_max_members(self, max_members: usize) -> Self {
        OracleLimits {
            max_members,
            ..self
        }
    }
}

/// Exact optimum with its witness; when the time budget was hit, `optimum`
/// is only the best size found and the flag is set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimum: usize,
    pub witness: Selection,
    pub nodes_explored: u64,
    pub time_limit_hit: bool,
}

/// Exact maximum union-free subfamily size. Branches on members in
/// descending size order (large sets are the most constrained union
/// targets), includes first, checks triples incrementally and prunes on
/// `current + remaining <= best`.
pub fn max_union_free(fam: &SetFamily, limits: &OracleLimits) -> Result<OracleResult> {
    check_members(fam.len(), limits)?;
    let mut search = Search::new(fam, limits);
    search.run(&mut |s, cand| s.union_free_compatible(cand));
    Ok(search.into_result(fam))
}

/// Exact maximum a-union-free subfamily size, via the per-target cover
/// criterion applied incrementally to the sets a new member affects.
pub fn max_a_union_free(fam: &SetFamily, a: usize, limits: &OracleLimits) -> Result<OracleResult> {
    assert!(a >= 2);
    check_members(fam.len(), limits)?;
    if fam.len() <= a {
        // Too few members for a+1 distinct sets.
        return Ok(OracleResult {
            optimum: fam.len(),
            witness: Selection::all(fam.len()),
            nodes_explored: 0,
            time_limit_hit: false,
        });
    }
    let mut search = Search::new(fam, limits);
    search.run(&mut |s, cand| s.a_union_free_compatible(cand, a));
    Ok(search.into_result(fam))
}

/// True iff `a` distinct selected proper subsets of the selected member `z`
/// union to exactly that member.
pub fn expressible_as_union(fam: &SetFamily, sel: &Selection, z: usize, a: usize) -> bool {
    assert!(sel.contains(z), "target must be selected");
    fam.expressible_within(sel, z, a)
}

fn check_members(m: usize, limits: &OracleLimits) -> Result<()> {
    if m > limits.max_members {
        return Err(Error::Capability(format!(
            "family of {m} sets exceeds the oracle limit {}",
            limits.max_members
        )));
    }
    Ok(())
}

struct Search<'f> {
    fam: &'f SetFamily,
    order: Vec<usize>,
    chosen: Vec<usize>,
    chosen_mask: Vec<bool>,
    best: Vec<usize>,
    nodes: u64,
    deadline: Instant,
    timed_out: bool,
    scratch: MemberSet,
}

impl<'f> Search<'f> {
    fn new(fam: &'f SetFamily, limits: &OracleLimits) -> Self {
        let mut order: Vec<usize> = (0..fam.len()).collect();
        order.sort_by(|&x, &y| {
            fam.member(y)
                .len()
                .cmp(&fam.member(x).len())
                .then(x.cmp(&y))
        });
        Search {
            fam,
            order,
            chosen: Vec::new(),
            chosen_mask: vec![false; fam.len()],
            best: Vec::new(),
            nodes: 0,
            deadline: Instant::now() + limits.time_budget,
            timed_out: false,
            scratch: MemberSet::empty(fam.universe_size()),
        }
    }

    fn run(&mut self, compatible: &mut impl FnMut(&mut Self, usize) -> bool) {
        self.branch(0, compatible);
    }

    fn branch(&mut self, pos: usize, compatible: &mut impl FnMut(&mut Self, usize) -> bool) {
        self.nodes += 1;
        if self.timed_out || (self.nodes % 4096 == 0 && Instant::now() >= self.deadline) {
            self.timed_out = true;
            return;
        }
        if self.chosen.len() + (self.order.len() - pos) <= self.best.len() {
            return;
        }
        if pos == self.order.len() {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        let cand = self.order[pos];
        if compatible(self, cand) {
            self.chosen.push(cand);
            self.chosen_mask[cand] = true;
            self.branch(pos + 1, compatible);
            self.chosen.pop();
            self.chosen_mask[cand] = false;
        }
        self.branch(pos + 1, compatible);
    }

    /// Adding `cand` keeps the choice union-free? Violations can only
    /// involve `cand`: either its union with a chosen set is another chosen
    /// set, or two chosen subsets of `cand` union to it.
    fn union_free_compatible(&mut self, cand: usize) -> bool {
        let cs = self.fam.member(cand);
        let mut proper: Vec<usize> = Vec::new();
        for &x in &self.chosen {
            let xs = self.fam.member(x);
            let (cx, xc) = cs.subset_relation(xs);
            if cx || xc {
                if xc {
                    proper.push(x);
                }
                continue;
            }
            cs.union_into(xs, &mut self.scratch);
            if let Some(k) = self.fam.index_of(&self.scratch) {
                if self.chosen_mask[k] {
                    return false;
                }
            }
        }
        for (p, &x) in proper.iter().enumerate() {
            for &y in &proper[p + 1..] {
                self.fam
                    .member(x)
                    .union_into(self.fam.member(y), &mut self.scratch);
                if &self.scratch == cs {
                    return false;
                }
            }
        }
        true
    }

    /// Adding `cand` keeps the choice a-union-free? Only targets gaining a
    /// proper subset need rechecking: `cand` itself and chosen supersets of
    /// it.
    fn a_union_free_compatible(&mut self, cand: usize, a: usize) -> bool {
        if self.chosen.len() < a {
            return true;
        }
        self.chosen.push(cand);
        self.chosen_mask[cand] = true;
        let mut sorted = self.chosen.clone();
        sorted.sort_unstable();
        let sel = Selection::from_sorted(sorted);
        let cs = self.fam.member(cand);
        let mut ok = !self.fam.expressible_within(&sel, cand, a);
        if ok {
            for &z in &self.chosen {
                if z != cand
                    && cs.is_strict_subset_of(self.fam.member(z))
                    && self.fam.expressible_within(&sel, z, a)
                {
                    ok = false;
                    break;
                }
            }
        }
        self.chosen.pop();
        self.chosen_mask[cand] = false;
        ok
    }

    fn into_result(self, _fam: &SetFamily) -> OracleResult {
        let mut witness = self.best;
        witness.sort_unstable();
        let witness = Selection::from_sorted(witness);
        OracleResult {
            optimum: witness.len(),
            witness,
            nodes_explored: self.nodes,
            time_limit_hit: self.timed_out,
        }
    }
}
