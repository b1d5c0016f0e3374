//! Shared instance generators for the property and acceptance suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unionfree::constructions::{random_family, RandomSpec};
use unionfree::ladders::{Certificate, CertificateKind, Ladder};
use unionfree::{Selection, SetFamily};

/// The seeded random-family suite: m <= 200, universe <= 16, cycling through
/// densities with every third instance in interval mode.
pub fn suite_family(seed: u64) -> SetFamily {
    let universe = 10 + (seed % 7) as usize;
    let intervals = seed % 3 == 0;
    let density = [0.2, 0.35, 0.5, 0.65, 0.8][(seed % 5) as usize];
    let mut m = 1 + (seed.wrapping_mul(31) % 200) as usize;
    if intervals {
        m = m.min(universe * (universe + 1) / 2);
    }
    random_family(&RandomSpec {
        seed,
        m,
        universe,
        density,
        intervals,
    })
    .expect("suite parameters are feasible")
}

/// A random desk-scale ladder realized as a set family, returned with its
/// certificate. Rung sets carry a private element (keeping rungs antichains
/// that escape the previous chain element) plus a random slice of the chain
/// so far; chain sets grow by the new rung elements and a fresh marker.
pub fn random_ladder_family(seed: u64) -> (SetFamily, Certificate) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = rng.gen_range(1..=4usize);
    let ell = rng.gen_range(1..=16 / alpha.max(1));

    let mut next_element = 0u64;
    let mut fresh = || {
        next_element += 1;
        next_element
    };

    let mut sets: Vec<Vec<u64>> = Vec::new();
    let mut chain_idx = Vec::new();
    let mut rung_idx: Vec<Vec<usize>> = Vec::new();
    let mut chain_elements: Vec<u64> = Vec::new();
    for _ in 0..ell {
        let mut rung_elements = Vec::new();
        let mut rung_here = Vec::new();
        let mut rung_sets = Vec::new();
        for _ in 0..alpha {
            let private = fresh();
            rung_elements.push(private);
            let mut set = vec![private];
            for &e in &chain_elements {
                if rng.gen_bool(0.4) {
                    set.push(e);
                }
            }
            set.sort_unstable();
            rung_sets.push(set);
        }
        chain_elements.extend(&rung_elements);
        chain_elements.push(fresh()); // strict growth even when alpha = 0
        let mut chain_set = chain_elements.clone();
        chain_set.sort_unstable();
        chain_idx.push(sets.len());
        sets.push(chain_set);
        for set in rung_sets {
            rung_here.push(sets.len());
            sets.push(set);
        }
        rung_idx.push(rung_here);
    }

    let fam = SetFamily::from_label_sets(&sets);
    assert_eq!(fam.len(), sets.len(), "ladder sets are pairwise distinct");
    let ladder = Ladder {
        chain: chain_idx,
        rungs: rung_idx,
        alpha,
    };
    let mut selection: Vec<usize> = if alpha >= 2 {
        ladder.rungs.iter().flatten().copied().collect()
    } else {
        ladder.chain.clone()
    };
    selection.sort_unstable();
    let claimed_size = ladder.size();
    let cert = Certificate {
        kind: CertificateKind::Ladder,
        selection,
        ladder: Some(ladder),
        claimed_size,
    };
    (fam, cert)
}

/// A random a-degenerate selection inside a random desk-scale family, grown
/// greedily in shuffled order.
pub fn random_degenerate_selection(seed: u64) -> (SetFamily, Selection, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(2..=4usize);
    let fam = random_family(&RandomSpec {
        seed: seed.wrapping_mul(977),
        m: 16,
        universe: 8,
        density: 0.45,
        intervals: false,
    })
    .expect("feasible");

    let mut order: Vec<usize> = (0..fam.len()).collect();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut picked: Vec<usize> = Vec::new();
    for i in order {
        picked.push(i);
        picked.sort_unstable();
        let sel = Selection::new(picked.clone(), fam.len()).unwrap();
        if !fam.is_a_degenerate(&sel, a) {
            picked.retain(|&x| x != i);
        }
    }
    picked.sort_unstable();
    let sel = Selection::new(picked, fam.len()).unwrap();
    assert!(fam.is_a_degenerate(&sel, a));
    (fam, sel, a)
}
