//! Deterministic branch-and-bound search for maximum codes.
//!
//! The search space is the set of candidate words admitted by the anchoring
//! constraints; a code is a clique in the graph whose edges join words at
//! distance at least `d`. Candidates are ordered lexicographically and
//! pruning uses a greedy colouring bound, so results are reproducible and
//! independent of timing.

use super::{BitWord, Code, ConstraintSet};

/// Outcome of a maximum-code search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub size: usize,
    pub witness: Code,
    /// False when the node budget ran out; `size` is then only a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

struct Searcher {
    words: Vec<u32>,
    d: u32,
    best: Vec<u32>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Searcher {
    fn compatible(&self, a: u32, b: u32) -> bool {
        (a ^ b).count_ones() >= self.d
    }

    /// Greedy sequential colouring of `cand` (in index order); returns the
    /// candidates annotated with 1-based colour numbers. The number of
    /// colours bounds the largest clique inside `cand`.
    fn colour(&self, cand: &[u32]) -> Vec<(u32, usize)> {
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut out = Vec::with_capacity(cand.len());
        for &v in cand {
            let mut placed = false;
            for (ci, class) in classes.iter_mut().enumerate() {
                if class.iter().all(|&u| !self.compatible(u, v)) {
                    class.push(v);
                    out.push((v, ci + 1));
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![v]);
                out.push((v, classes.len()));
            }
        }
        // Branch order: lowest colour first so that `pop` takes the vertex
        // with the largest bound.
        out.sort_by_key(|&(v, c)| (c, v));
        out
    }

    fn expand(&mut self, current: &mut Vec<u32>, cand: Vec<(u32, usize)>) {
        let mut cand = cand;
        while let Some((v, colour)) = cand.pop() {
            if self.exhausted || current.len() + colour <= self.best.len() {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return;
            }
            current.push(v);
            let rest: Vec<u32> = cand
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| self.compatible(u, v))
                .collect();
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            if !rest.is_empty() {
                let coloured = self.colour(&rest);
                self.expand(current, coloured);
            }
            current.pop();
        }
    }

    fn run(&mut self, seed: Vec<u32>) {
        self.best = greedy_clique(&self.words, self.d, &seed);
        let coloured = self.colour(&self.words.clone());
        let mut current = seed;
        self.expand(&mut current, coloured);
    }
}

/// Lexicographic greedy clique used as the initial incumbent.
fn greedy_clique(words: &[u32], d: u32, seed: &[u32]) -> Vec<u32> {
    let mut clique: Vec<u32> = seed.to_vec();
    for &w in words {
        if clique.iter().all(|&c| (c ^ w).count_ones() >= d) {
            clique.push(w);
        }
    }
    clique
}

/// Exact maximum number of codewords of length `n`, minimum distance `>= d`,
/// subject to the anchoring constraints, together with one optimal code.
///
/// `budget` caps the number of branch-and-bound nodes; when it is exceeded
/// the best code found so far is returned with `exact == false`.
pub fn exact_max_code(n: usize, d: usize, lambda: &ConstraintSet, budget: u64) -> SearchResult {
    assert!((1..=26).contains(&n), "search space must fit in memory");
    let all: Vec<u32> = (0..(1u64 << n))
        .map(|bits| bits as u32)
        .filter(|&bits| lambda.admits(&BitWord::new(bits, n)))
        .collect();

    // Distance >= 1 holds for any set of distinct words.
    if d <= 1 {
        let witness = Code::from_bits(n, &all);
        return SearchResult {
            size: all.len(),
            witness,
            exact: true,
            nodes: 0,
        };
    }

    // Unconstrained search is translation invariant, so some optimum
    // contains the zero word; fixing it cuts a factor 2^n from the tree.
    let (seed, candidates): (Vec<u32>, Vec<u32>) = if lambda.anchors.is_empty() {
        (
            vec![0],
            all.into_iter()
                .filter(|&w| w.count_ones() as usize >= d)
                .collect(),
        )
    } else {
        (Vec::new(), all)
    };

    let mut searcher = Searcher {
        words: candidates,
        d: d as u32,
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    searcher.run(seed);

    SearchResult {
        size: searcher.best.len(),
        witness: Code::from_bits(n, &searcher.best),
        exact: !searcher.exhausted,
        nodes: searcher.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 50_000_000;

    #[test]
    fn repetition_code_is_optimal() {
        let r = exact_max_code(5, 5, &ConstraintSet::empty(), BUDGET);
        assert!(r.exact);
        assert_eq!(r.size, 2);
        assert_eq!(r.witness, Code::parse("00000\n11111").unwrap());
    }

    #[test]
    fn no_distance_constraint_gives_full_space() {
        for n in 1..=6 {
            let r = exact_max_code(n, 1, &ConstraintSet::empty(), BUDGET);
            assert_eq!(r.size, 1 << n);
        }
    }

    #[test]
    fn constant_weight_anchor() {
        let r = exact_max_code(6, 4, &ConstraintSet::weight(6, 3), BUDGET);
        assert!(r.exact);
        assert_eq!(r.size, 4); // A(6,4,3)
        assert!(r.witness.is_constant_weight(3));
        assert!(r.witness.min_distance().unwrap() >= 4);
    }

    #[test]
    fn known_small_values() {
        // A(n,d) values from first principles at toy scale.
        assert_eq!(exact_max_code(4, 2, &ConstraintSet::empty(), BUDGET).size, 8);
        assert_eq!(exact_max_code(5, 3, &ConstraintSet::empty(), BUDGET).size, 4);
        assert_eq!(exact_max_code(6, 3, &ConstraintSet::empty(), BUDGET).size, 8);
        assert_eq!(exact_max_code(7, 3, &ConstraintSet::empty(), BUDGET).size, 16);
        assert_eq!(exact_max_code(6, 4, &ConstraintSet::empty(), BUDGET).size, 4);
        assert_eq!(exact_max_code(8, 4, &ConstraintSet::empty(), BUDGET).size, 16);
    }

    #[test]
    fn infeasible_anchors_give_zero() {
        // weight-7 anchor in length 6: no candidates at all.
        let lam = ConstraintSet::single(BitWord::new(0, 6), 7);
        let r = exact_max_code(6, 2, &lam, BUDGET);
        assert_eq!(r.size, 0);
        assert!(r.exact);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let r = exact_max_code(8, 3, &ConstraintSet::empty(), 5);
        assert!(!r.exact);
        assert!(r.size >= 1);
    }

    #[test]
    fn deterministic_witness() {
        let a = exact_max_code(6, 3, &ConstraintSet::empty(), BUDGET);
        let b = exact_max_code(6, 3, &ConstraintSet::empty(), BUDGET);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.nodes, b.nodes);
    }
}
