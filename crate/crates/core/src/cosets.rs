//! Todd–Coxeter coset enumeration over a surface presentation.
//!
//! HLT strategy: the subgroup generators are traced at coset 0, then every
//! live coset in turn has the relator traced from it (defining new cosets
//! as needed) and its row completed. Coincidences are merged at once with a
//! union-find queue.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surfgrp::{GroupWord, SurfacePresentation};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const UNDEFINED: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("subgroup generator `{0}` uses generators outside the presentation")]
    BadWord(GroupWord),
    #[error("no subgroup generators given")]
    NoSubgroupGenerators,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationStatus {
    /// The table closed; the subgroup has this index.
    Closed(usize),
    /// The coset budget ran out with this many live cosets.
    CutoffExceeded(usize),
}

/// A coset table. When closed, rows are renumbered `0..index` with the
/// subgroup itself as coset 0; columns are signed letters in
/// [`crate::surfgrp::Letter::column`] order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub status: EnumerationStatus,
    /// Empty unless the enumeration closed.
    pub rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn index(&self) -> Option<usize> {
        match self.status {
            EnumerationStatus::Closed(n) => Some(n),
            EnumerationStatus::CutoffExceeded(_) => None,
        }
    }

    /// Image of `coset` under right multiplication by `w`.
    pub fn act(&self, coset: usize, w: &GroupWord) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(coset, |c, l| self.rows.get(c).map(|row| row[l.column()]))
    }

    /// Permutation of the cosets induced by `w`.
    pub fn permutation(&self, w: &GroupWord) -> Option<Vec<usize>> {
        (0..self.rows.len()).map(|c| self.act(c, w)).collect()
    }
}

struct Enumerator {
    cols: usize,
    max_cosets: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    overflow: bool,
}

impl Enumerator {
    fn new(cols: usize, max_cosets: usize) -> Self {
        Self {
            cols,
            max_cosets,
            table: vec![vec![UNDEFINED; cols]],
            parent: vec![0],
            queue: Vec::new(),
            overflow: false,
        }
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn live_count(&self) -> usize {
        (0..self.parent.len()).filter(|&c| self.live(c)).count()
    }

    fn define(&mut self, coset: usize, x: usize) -> bool {
        if self.table.len() >= self.max_cosets {
            self.overflow = true;
            return false;
        }
        let new = self.table.len();
        self.table.push(vec![UNDEFINED; self.cols]);
        self.parent.push(new);
        self.table[coset][x] = new;
        self.table[new][x ^ 1] = coset;
        true
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (phi, psi) = (self.rep(k), self.rep(l));
        if phi != psi {
            let (lo, hi) = (phi.min(psi), phi.max(psi));
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let gamma = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let delta = self.table[gamma][x];
                if delta == UNDEFINED {
                    continue;
                }
                self.table[delta][x ^ 1] = UNDEFINED;
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                if self.table[mu][x] != UNDEFINED {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != UNDEFINED {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    /// Traces `w` from `alpha`, defining cosets to complete the trace.
    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != UNDEFINED {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return;
            }
            while j >= i as isize && self.table[b][w[j as usize] ^ 1] != UNDEFINED {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            } else if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return;
            } else if !self.define(f, w[i]) {
                return;
            }
        }
    }

    fn run(&mut self, relator: &[usize], subgens: &[Vec<usize>]) {
        for w in subgens {
            self.scan_and_fill(0, w);
            if self.overflow {
                return;
            }
        }
        let mut alpha = 0;
        while alpha < self.table.len() {
            if self.live(alpha) {
                self.scan_and_fill(alpha, relator);
                if self.overflow {
                    return;
                }
                for x in 0..self.cols {
                    if !self.live(alpha) {
                        break;
                    }
                    if self.table[alpha][x] == UNDEFINED && !self.define(alpha, x) {
                        return;
                    }
                }
            }
            alpha += 1;
        }
    }

    fn into_table(mut self) -> CosetTable {
        if self.overflow {
            return CosetTable {
                status: EnumerationStatus::CutoffExceeded(self.live_count()),
                rows: Vec::new(),
            };
        }
        let live: Vec<usize> = (0..self.table.len()).filter(|&c| self.live(c)).collect();
        let mut renumber = vec![UNDEFINED; self.table.len()];
        for (new, &old) in live.iter().enumerate() {
            renumber[old] = new;
        }
        let rows = live
            .iter()
            .map(|&c| {
                (0..self.cols)
                    .map(|x| {
                        let t = self.table[c][x];
                        renumber[self.rep(t)]
                    })
                    .collect()
            })
            .collect();
        CosetTable {
            status: EnumerationStatus::Closed(live.len()),
            rows,
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgens`.
///
/// Running out of budget is reported as [`EnumerationStatus::CutoffExceeded`],
/// which means "unknown, possibly infinite".
pub fn coset_enumerate(
    p: &SurfacePresentation,
    subgens: &[GroupWord],
    max_cosets: usize,
) -> Result<CosetTable, CosetError> {
    if subgens.is_empty() {
        return Err(CosetError::NoSubgroupGenerators);
    }
    if let Some(bad) = subgens.iter().find(|w| !p.contains(w)) {
        return Err(CosetError::BadWord(bad.clone()));
    }
    let as_cols = |w: &GroupWord| w.letters().iter().map(|l| l.column()).collect::<Vec<_>>();
    let relator = as_cols(&p.relator());
    let subgens: Vec<Vec<usize>> = subgens.iter().map(as_cols).collect();
    let mut e = Enumerator::new(p.letter_count(), max_cosets.max(1));
    e.run(&relator, &subgens);
    Ok(e.into_table())
}

/// Genus of a degree-`n` cover of a genus-`g` surface: `1 + n(g - 1)`.
pub fn quotient_genus(base_genus: usize, index: usize) -> usize {
    1 + index * (base_genus - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfgrp::Letter;

    fn words(list: &[&str]) -> Vec<GroupWord> {
        list.iter().map(|s| GroupWord::parse(s).unwrap()).collect()
    }

    #[test]
    fn whole_group_has_index_one() {
        for g in 2..5 {
            let p = SurfacePresentation::new(g).unwrap();
            let gens: Vec<GroupWord> = (0..2 * g)
                .map(|i| GroupWord::letter(Letter::new(i, false)))
                .collect();
            let t = coset_enumerate(&p, &gens, 1000).unwrap();
            assert_eq!(t.status, EnumerationStatus::Closed(1));
        }
    }

    #[test]
    fn parity_kernel_has_index_two() {
        let p = SurfacePresentation::new(2).unwrap();
        let gens = words(&[
            "b1",
            "a2",
            "b2",
            "a1 a1",
            "a1 b1 a1^-1",
            "a1 a2 a1^-1",
            "a1 b2 a1^-1",
        ]);
        let t = coset_enumerate(&p, &gens, 1000).unwrap();
        assert_eq!(t.status, EnumerationStatus::Closed(2));
        for w in &gens {
            assert_eq!(t.permutation(w).unwrap(), vec![0, 1]);
        }
        // Oracle: the parity map counts a1-exponents mod 2.
        let a1 = GroupWord::parse("a1").unwrap();
        assert_eq!(t.permutation(&a1).unwrap(), vec![1, 0]);
    }

    #[test]
    fn cyclic_subgroup_exhausts_budget() {
        let p = SurfacePresentation::new(2).unwrap();
        let t = coset_enumerate(&p, &words(&["a1"]), 10_000).unwrap();
        assert!(matches!(t.status, EnumerationStatus::CutoffExceeded(_)));
        assert_eq!(t.index(), None);
    }

    #[test]
    fn errors() {
        let p = SurfacePresentation::new(2).unwrap();
        assert_eq!(
            coset_enumerate(&p, &[], 10),
            Err(CosetError::NoSubgroupGenerators)
        );
        assert!(matches!(
            coset_enumerate(&p, &words(&["a3"]), 10),
            Err(CosetError::BadWord(_))
        ));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let p = SurfacePresentation::new(2).unwrap();
        let gens = words(&[
            "b1",
            "a2",
            "b2",
            "a1 a1",
            "a1 b1 a1^-1",
            "a1 a2 a1^-1",
            "a1 b2 a1^-1",
        ]);
        let t1 = coset_enumerate(&p, &gens, 1000).unwrap();
        let t2 = coset_enumerate(&p, &gens, 1000).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn quotient_genus_examples() {
        assert_eq!(quotient_genus(2, 1), 2);
        assert_eq!(quotient_genus(2, 2), 3);
        assert_eq!(quotient_genus(3, 3), 7);
    }
}
