//! Abstract argumentation semantics over finite defeat graphs.
//!
//! Complete, stable and preferred extensions are enumerated by a labelling
//! search (IN / OUT / UNDEC with constraint propagation). The plain subset
//! sweep in [`brute`] is kept as a reference for small graphs.

use std::collections::{BTreeSet, VecDeque};

use crate::pdt::CapacityError;

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("edge ({0}, {1}) references a missing vertex")]
pub struct DanglingEdge(pub usize, pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractAF {
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl AbstractAF {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DanglingEdge> {
        let mut attackers = vec![Vec::new(); vertices];
        let mut targets = vec![Vec::new(); vertices];
        for (a, b) in edges {
            if a >= vertices || b >= vertices {
                return Err(DanglingEdge(a, b));
            }
            if !targets[a].contains(&b) {
                targets[a].push(b);
                attackers[b].push(a);
            }
        }
        Ok(AbstractAF { attackers, targets })
    }

    pub fn len(&self) -> usize {
        self.attackers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attackers.is_empty()
    }

    pub fn attackers(&self, v: usize) -> &[usize] {
        &self.attackers[v]
    }

    pub fn targets(&self, v: usize) -> &[usize] {
        &self.targets[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.targets.iter().enumerate().flat_map(|(a, ts)| ts.iter().map(move |&b| (a, b)))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.targets[a].contains(&b)
    }

    pub fn is_conflict_free(&self, s: &VertexSet) -> bool {
        s.iter().all(|&a| self.targets[a].iter().all(|b| !s.contains(b)))
    }

    fn defeated_by(&self, s: &VertexSet) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        for &a in s {
            for &b in &self.targets[a] {
                out[b] = true;
            }
        }
        out
    }

    /// Vertices all of whose defeaters are defeated by `s`.
    pub fn characteristic(&self, s: &VertexSet) -> VertexSet {
        let hit = self.defeated_by(s);
        (0..self.len()).filter(|&v| self.attackers[v].iter().all(|&b| hit[b])).collect()
    }

    pub fn grounded(&self) -> VertexSet {
        let mut cur = VertexSet::new();
        loop {
            let next = self.characteristic(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Conflict-free and defeats every vertex outside.
    pub fn is_stable(&self, s: &VertexSet) -> bool {
        let hit = self.defeated_by(s);
        self.is_conflict_free(s) && (0..self.len()).all(|v| s.contains(&v) || hit[v])
    }

    pub fn is_complete(&self, s: &VertexSet) -> bool {
        self.is_conflict_free(s) && self.characteristic(s) == *s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_search_nodes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_search_nodes: 2_000_000,
        }
    }
}

pub fn characteristic(af: &AbstractAF, s: &VertexSet) -> VertexSet {
    af.characteristic(s)
}

pub fn grounded(af: &AbstractAF) -> VertexSet {
    af.grounded()
}

pub fn complete_extensions(af: &AbstractAF, cfg: SolverConfig) -> Result<Vec<VertexSet>, CapacityError> {
    labellings(af, IN | OUT | UNDEC, cfg)
}

pub fn stable_extensions(af: &AbstractAF, cfg: SolverConfig) -> Result<Vec<VertexSet>, CapacityError> {
    labellings(af, IN | OUT, cfg)
}

pub fn preferred_extensions(af: &AbstractAF, cfg: SolverConfig) -> Result<Vec<VertexSet>, CapacityError> {
    Ok(maximal(complete_extensions(af, cfg)?))
}

fn maximal(sets: Vec<VertexSet>) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect();
    out.sort();
    out
}

const IN: u8 = 1;
const OUT: u8 = 2;
const UNDEC: u8 = 4;

struct Search<'a> {
    af: &'a AbstractAF,
    nodes: usize,
    budget: usize,
    found: Vec<VertexSet>,
}

impl Search<'_> {
    // Narrow domains until nothing changes; false on a wiped-out domain.
    fn propagate(&self, dom: &mut [u8], queue: &mut VecDeque<usize>, queued: &mut [bool]) -> bool {
        let af = self.af;
        while let Some(x) = queue.pop_front() {
            queued[x] = false;
            let att = &af.attackers[x];
            let can_all_out = att.iter().all(|&y| dom[y] & OUT != 0);
            let can_some_in = att.iter().any(|&y| dom[y] & IN != 0);
            let can_none_in = att.iter().all(|&y| dom[y] != IN);
            let can_some_undec = att.iter().any(|&y| dom[y] & UNDEC != 0);
            let mut d = dom[x];
            if !can_all_out {
                d &= !IN;
            }
            if !can_some_in {
                d &= !OUT;
            }
            if !(can_none_in && can_some_undec) {
                d &= !UNDEC;
            }
            if d == 0 {
                return false;
            }
            if d != dom[x] {
                dom[x] = d;
                Self::enqueue(af, x, queue, queued);
            }
            let mut narrowed: Vec<(usize, u8)> = Vec::new();
            match dom[x] {
                IN => narrowed.extend(att.iter().map(|&y| (y, OUT))),
                OUT => {
                    let mut open = att.iter().filter(|&&y| dom[y] & IN != 0);
                    if let (Some(&y), None) = (open.next(), open.next()) {
                        narrowed.push((y, IN));
                    }
                }
                UNDEC => {
                    narrowed.extend(att.iter().map(|&y| (y, OUT | UNDEC)));
                    let mut open = att.iter().filter(|&&y| dom[y] & UNDEC != 0);
                    if let (Some(&y), None) = (open.next(), open.next()) {
                        narrowed.push((y, UNDEC));
                    }
                }
                _ => {}
            }
            for (y, keep) in narrowed {
                let d = dom[y] & keep;
                if d == 0 {
                    return false;
                }
                if d != dom[y] {
                    dom[y] = d;
                    Self::enqueue(af, y, queue, queued);
                }
            }
        }
        true
    }

    fn enqueue(af: &AbstractAF, v: usize, queue: &mut VecDeque<usize>, queued: &mut [bool]) {
        for &w in std::iter::once(&v).chain(&af.targets[v]) {
            if !queued[w] {
                queued[w] = true;
                queue.push_back(w);
            }
        }
    }

    fn legal(&self, dom: &[u8]) -> bool {
        (0..dom.len()).all(|x| {
            let att = &self.af.attackers[x];
            let all_out = att.iter().all(|&y| dom[y] == OUT);
            let some_in = att.iter().any(|&y| dom[y] == IN);
            match dom[x] {
                IN => all_out,
                OUT => some_in,
                _ => !all_out && !some_in,
            }
        })
    }

    fn run(&mut self, dom: Vec<u8>) -> Result<(), CapacityError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CapacityError {
                what: "labelling search nodes",
                cap: self.budget,
            });
        }
        let Some(x) = (0..dom.len()).find(|&v| dom[v].count_ones() > 1) else {
            if self.legal(&dom) {
                self.found.push((0..dom.len()).filter(|&v| dom[v] == IN).collect());
            }
            return Ok(());
        };
        for label in [IN, OUT, UNDEC] {
            if dom[x] & label == 0 {
                continue;
            }
            let mut next = dom.clone();
            next[x] = label;
            let mut queue = VecDeque::new();
            let mut queued = vec![false; next.len()];
            Self::enqueue(self.af, x, &mut queue, &mut queued);
            if self.propagate(&mut next, &mut queue, &mut queued) {
                self.run(next)?;
            }
        }
        Ok(())
    }
}

fn labellings(af: &AbstractAF, allowed: u8, cfg: SolverConfig) -> Result<Vec<VertexSet>, CapacityError> {
    let n = af.len();
    let mut search = Search {
        af,
        nodes: 0,
        budget: cfg.max_search_nodes,
        found: Vec::new(),
    };
    let mut dom = vec![allowed; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    if search.propagate(&mut dom, &mut queue, &mut queued) {
        search.run(dom)?;
    }
    let mut out = search.found;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exhaustive subset sweeps, for cross-checking the labelling search.
pub mod brute {
    use super::*;

    pub const DEFAULT_MAX_VERTICES: usize = 20;

    fn subsets(af: &AbstractAF, max_vertices: usize) -> Result<impl Iterator<Item = VertexSet> + '_, CapacityError> {
        let n = af.len();
        if n > max_vertices {
            return Err(CapacityError {
                what: "subset enumeration vertex count",
                cap: max_vertices,
            });
        }
        Ok((0u64..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect()))
    }

    pub fn complete_extensions(af: &AbstractAF, max_vertices: usize) -> Result<Vec<VertexSet>, CapacityError> {
        let mut out: Vec<VertexSet> = subsets(af, max_vertices)?.filter(|s| af.is_complete(s)).collect();
        out.sort();
        Ok(out)
    }

    pub fn stable_extensions(af: &AbstractAF, max_vertices: usize) -> Result<Vec<VertexSet>, CapacityError> {
        let mut out: Vec<VertexSet> = subsets(af, max_vertices)?.filter(|s| af.is_stable(s)).collect();
        out.sort();
        Ok(out)
    }

    pub fn preferred_extensions(af: &AbstractAF, max_vertices: usize) -> Result<Vec<VertexSet>, CapacityError> {
        Ok(maximal(complete_extensions(af, max_vertices)?))
    }

    /// Grounded as the least complete extension.
    pub fn grounded(af: &AbstractAF, max_vertices: usize) -> Result<VertexSet, CapacityError> {
        let all = complete_extensions(af, max_vertices)?;
        Ok(all
            .iter()
            .find(|s| all.iter().all(|t| s.is_subset(t)))
            .cloned()
            .expect("a least complete extension always exists"))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn af(n: usize, edges: &[(usize, usize)]) -> AbstractAF {
        AbstractAF::new(n, edges.iter().copied()).unwrap()
    }

    fn set(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(af(3, &[]).characteristic(&set(&[])), set(&[0, 1, 2]));
        assert_eq!(af(2, &[(0, 1)]).characteristic(&set(&[])), set(&[0]));
        assert_eq!(af(2, &[(0, 1), (1, 0)]).characteristic(&set(&[0])), set(&[0]));
    }

    #[test]
    fn semantics_examples() {
        let cfg = SolverConfig::default();
        let mutual = af(2, &[(0, 1), (1, 0)]);
        assert_eq!(mutual.grounded(), set(&[]));
        assert_eq!(complete_extensions(&mutual, cfg).unwrap(), vec![set(&[]), set(&[0]), set(&[1])]);
        assert_eq!(stable_extensions(&mutual, cfg).unwrap(), vec![set(&[0]), set(&[1])]);
        assert_eq!(preferred_extensions(&mutual, cfg).unwrap(), vec![set(&[0]), set(&[1])]);

        let edgeless = af(3, &[]);
        assert_eq!(edgeless.grounded(), set(&[0, 1, 2]));
        assert_eq!(stable_extensions(&edgeless, cfg).unwrap(), vec![set(&[0, 1, 2])]);
        assert_eq!(preferred_extensions(&edgeless, cfg).unwrap(), vec![set(&[0, 1, 2])]);
        assert_eq!(complete_extensions(&af(1, &[]), cfg).unwrap(), vec![set(&[0])]);

        let odd = af(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(stable_extensions(&odd, cfg).unwrap().is_empty());
        assert_eq!(complete_extensions(&odd, cfg).unwrap(), vec![set(&[])]);
    }

    #[test]
    fn dangling_edges_rejected() {
        assert_eq!(AbstractAF::new(2, [(0, 2)]), Err(DanglingEdge(0, 2)));
    }

    #[test]
    fn brute_force_cap() {
        let big = af(21, &[]);
        assert_eq!(brute::stable_extensions(&big, brute::DEFAULT_MAX_VERTICES).unwrap_err().cap, 20);
    }

    pub(crate) fn arb_af(max: usize) -> impl Strategy<Value = AbstractAF> {
        (1..=max)
            .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=2 * n)))
            .prop_map(|(n, edges)| AbstractAF::new(n, edges).unwrap())
    }

    proptest! {
        #[test]
        fn search_matches_brute_force(g in arb_af(10)) {
            let cfg = SolverConfig::default();
            let complete = complete_extensions(&g, cfg).unwrap();
            prop_assert_eq!(&complete, &brute::complete_extensions(&g, 20).unwrap());
            let stable = stable_extensions(&g, cfg).unwrap();
            prop_assert_eq!(&stable, &brute::stable_extensions(&g, 20).unwrap());
            let preferred = preferred_extensions(&g, cfg).unwrap();
            prop_assert_eq!(&preferred, &brute::preferred_extensions(&g, 20).unwrap());
            let gr = g.grounded();
            prop_assert_eq!(&gr, &brute::grounded(&g, 20).unwrap());
            prop_assert!(complete.iter().all(|c| gr.is_subset(c)));
            prop_assert!(stable.iter().all(|s| preferred.contains(s)));
            prop_assert!(preferred.iter().all(|p| complete.contains(p)));
        }

        #[test]
        fn stable_survives_adding_edges_outside(g in arb_af(9), extra in prop::collection::vec((0usize..9, 0usize..9), 0..8)) {
            let n = g.len();
            let bigger = AbstractAF::new(n, g.edges().chain(extra.into_iter().filter(|&(a, b)| a < n && b < n))).unwrap();
            for s in stable_extensions(&g, SolverConfig::default()).unwrap() {
                if bigger.is_conflict_free(&s) {
                    prop_assert!(bigger.is_stable(&s));
                }
            }
        }
    }
}
