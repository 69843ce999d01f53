//! Brute-force reference implementation and instance generators.
//!
//! [`PlainTree`] answers every labeled query by a literal path or subtree
//! walk over adjacency lists; it is the ground truth the index is verified
//! against. [`random_labeled_tree`] produces reproducible instances and
//! [`all_paren_strings`] enumerates every ordered tree shape of a given size.
//! [`cross_check`] drives an index/oracle comparison and reports the first
//! divergences with enough context to replay them.

use crate::labeled_index::LabeledTreeIndex;
use crate::{Error, NodeId, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The twelve labeled queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    Label,
    Depth,
    LevelAncestor,
    Parent,
    Deg,
    ChildRank,
    ChildSelect,
    NumDescendants,
    PreorderRank,
    PreorderSelect,
    PostorderRank,
    PostorderSelect,
}

pub const ALL_QUERIES: [Query; 12] = [
    Query::Label,
    Query::Depth,
    Query::LevelAncestor,
    Query::Parent,
    Query::Deg,
    Query::ChildRank,
    Query::ChildSelect,
    Query::NumDescendants,
    Query::PreorderRank,
    Query::PreorderSelect,
    Query::PostorderRank,
    Query::PostorderSelect,
];

impl Query {
    pub fn name(self) -> &'static str {
        match self {
            Query::Label => "label",
            Query::Depth => "depth",
            Query::LevelAncestor => "level_ancestor",
            Query::Parent => "parent",
            Query::Deg => "deg",
            Query::ChildRank => "child_rank",
            Query::ChildSelect => "child_select",
            Query::NumDescendants => "num_descendants",
            Query::PreorderRank => "preorder_rank",
            Query::PreorderSelect => "preorder_select",
            Query::PostorderRank => "postorder_rank",
            Query::PostorderSelect => "postorder_select",
        }
    }

    pub fn from_name(s: &str) -> Option<Query> {
        ALL_QUERIES.iter().copied().find(|q| q.name() == s)
    }

    /// Does the query take a trailing index argument?
    pub fn takes_index(self) -> bool {
        matches!(self, Query::LevelAncestor | Query::ChildSelect)
    }

    /// Is the main argument an occurrence index rather than a node?
    pub fn arg_is_occurrence(self) -> bool {
        matches!(self, Query::PreorderSelect | Query::PostorderSelect)
    }
}

/// One concrete query invocation. `arg` is the node for node queries and the
/// occurrence index for the select queries; `i` is the auxiliary index of
/// `level_ancestor`/`child_select`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Call {
    pub q: Query,
    pub alpha: u32,
    pub arg: usize,
    pub i: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Count(usize),
    Node(Option<NodeId>),
    Symbol(u32),
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Count(c) => write!(f, "{c}"),
            Answer::Node(Some(x)) => write!(f, "{x}"),
            Answer::Node(None) => write!(f, "-"),
            Answer::Symbol(a) => write!(f, "{a}"),
        }
    }
}

/// Adjacency-list labeled tree; nodes are 1-based preorder ranks.
#[derive(Clone, Debug)]
pub struct PlainTree {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    labels: Vec<u32>,
    sigma: u32,
}

impl PlainTree {
    pub fn from_parens(parens: &str, labels: Vec<u32>, sigma: u32) -> Result<PlainTree> {
        let mut parent: Vec<Option<NodeId>> = Vec::new();
        let mut children: Vec<Vec<NodeId>> = Vec::new();
        let mut stack: Vec<NodeId> = Vec::new();
        let mut excess = 0i64;
        for (i, c) in parens.chars().enumerate() {
            match c {
                '(' => {
                    excess += 1;
                    let id = parent.len() + 1;
                    parent.push(stack.last().copied());
                    children.push(Vec::new());
                    if let Some(&p) = stack.last() {
                        children[p - 1].push(id);
                    }
                    stack.push(id);
                }
                ')' => {
                    excess -= 1;
                    if excess < 0 {
                        return Err(Error::Unbalanced { pos: i + 1 });
                    }
                    stack.pop();
                }
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unexpected character {other:?} in paren string"),
                    })
                }
            }
        }
        if excess != 0 {
            return Err(Error::Unbalanced { pos: parens.len() });
        }
        if labels.len() != parent.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} nodes",
                labels.len(),
                parent.len()
            )));
        }
        for &l in &labels {
            if l == 0 || l > sigma {
                return Err(Error::LabelOutOfRange { label: l, sigma });
            }
        }
        Ok(PlainTree {
            parent,
            children,
            labels,
            sigma,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn parent_of(&self, x: NodeId) -> Option<NodeId> {
        self.parent[x - 1]
    }

    pub fn children_of(&self, x: NodeId) -> &[NodeId] {
        &self.children[x - 1]
    }

    /// Canonical paren string of the shape.
    pub fn to_parens(&self) -> String {
        let n = self.len();
        let mut out = String::with_capacity(2 * n);
        let mut stack: Vec<(NodeId, usize)> = vec![(1, 0)];
        out.push('(');
        while let Some(&mut (v, ref mut ci)) = stack.last_mut() {
            if *ci < self.children[v - 1].len() {
                let c = self.children[v - 1][*ci];
                *ci += 1;
                stack.push((c, 0));
                out.push('(');
            } else {
                stack.pop();
                out.push(')');
            }
        }
        out
    }

    fn is_ancestor(&self, a: NodeId, x: NodeId) -> bool {
        let mut v = Some(x);
        while let Some(u) = v {
            if u == a {
                return true;
            }
            v = self.parent[u - 1];
        }
        false
    }

    fn subtree(&self, x: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v - 1].iter().copied());
        }
        out
    }

    fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack: Vec<(NodeId, usize)> = vec![(1, 0)];
        while let Some(&mut (v, ref mut ci)) = stack.last_mut() {
            if *ci < self.children[v - 1].len() {
                let c = self.children[v - 1][*ci];
                *ci += 1;
                stack.push((c, 0));
            } else {
                out.push(v);
                stack.pop();
            }
        }
        out
    }

    /// Answer one query by a literal walk. Node arguments must be valid;
    /// occurrence and auxiliary indexes may overflow (the answer is then
    /// NULL), matching the total query surface of the index.
    pub fn query(&self, call: Call) -> Answer {
        let Call { q, alpha, arg, i } = call;
        match q {
            Query::Label => Answer::Symbol(self.labels[arg - 1]),
            Query::Depth => {
                let mut d = 0;
                let mut v = Some(arg);
                while let Some(u) = v {
                    if self.labels[u - 1] == alpha {
                        d += 1;
                    }
                    v = self.parent[u - 1];
                }
                Answer::Count(d)
            }
            Query::LevelAncestor | Query::Parent => {
                let want = if q == Query::Parent { 1 } else { i };
                let mut seen = 0;
                let mut v = self.parent[arg - 1];
                while let Some(u) = v {
                    if self.labels[u - 1] == alpha {
                        seen += 1;
                        if seen == want {
                            return Answer::Node(Some(u));
                        }
                    }
                    v = self.parent[u - 1];
                }
                Answer::Node(None)
            }
            Query::Deg => Answer::Count(
                self.children[arg - 1]
                    .iter()
                    .filter(|&&c| self.labels[c - 1] == alpha)
                    .count(),
            ),
            Query::ChildRank => match self.parent[arg - 1] {
                None => Answer::Count(0),
                Some(p) => Answer::Count(
                    self.children[p - 1]
                        .iter()
                        .filter(|&&c| c <= arg && self.labels[c - 1] == alpha)
                        .count(),
                ),
            },
            Query::ChildSelect => {
                let mut seen = 0;
                for &c in &self.children[arg - 1] {
                    if self.labels[c - 1] == alpha {
                        seen += 1;
                        if seen == i {
                            return Answer::Node(Some(c));
                        }
                    }
                }
                Answer::Node(None)
            }
            Query::NumDescendants => Answer::Count(
                self.subtree(arg)
                    .into_iter()
                    .filter(|&v| v != arg && self.labels[v - 1] == alpha)
                    .count(),
            ),
            Query::PreorderRank => {
                Answer::Count((1..=arg).filter(|&v| self.labels[v - 1] == alpha).count())
            }
            Query::PreorderSelect => {
                let mut seen = 0;
                for v in 1..=self.len() {
                    if self.labels[v - 1] == alpha {
                        seen += 1;
                        if seen == arg {
                            return Answer::Node(Some(v));
                        }
                    }
                }
                Answer::Node(None)
            }
            Query::PostorderRank => {
                let order = self.postorder();
                let mut cnt = 0;
                for &v in &order {
                    if self.labels[v - 1] == alpha {
                        cnt += 1;
                    }
                    if v == arg {
                        break;
                    }
                }
                Answer::Count(cnt)
            }
            Query::PostorderSelect => {
                let mut seen = 0;
                for v in self.postorder() {
                    if self.labels[v - 1] == alpha {
                        seen += 1;
                        if seen == arg {
                            return Answer::Node(Some(v));
                        }
                    }
                }
                Answer::Node(None)
            }
        }
    }

    /// Used by tests: ancestor-or-self relation.
    pub fn is_ancestor_of(&self, a: NodeId, x: NodeId) -> bool {
        self.is_ancestor(a, x)
    }
}

/// Label skew of the random generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Skew {
    Uniform,
    Zipf,
}

/// Deterministic random labeled tree: uniform-attachment shape, nodes
/// renumbered in preorder, labels per `skew`.
pub fn random_labeled_tree(n: usize, sigma: u32, seed: u64, skew: Skew) -> PlainTree {
    assert!(n >= 1 && sigma >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for v in 2..=n {
        let p = rng.gen_range(1..v);
        kids[p].push(v);
    }
    // renumber in preorder
    let mut parens = String::with_capacity(2 * n);
    {
        let mut stack: Vec<(usize, usize)> = vec![(1, 0)];
        parens.push('(');
        while let Some(&mut (v, ref mut ci)) = stack.last_mut() {
            if *ci < kids[v].len() {
                let c = kids[v][*ci];
                *ci += 1;
                stack.push((c, 0));
                parens.push('(');
            } else {
                stack.pop();
                parens.push(')');
            }
        }
    }
    let cum: Vec<f64> = match skew {
        Skew::Uniform => (1..=sigma).map(|k| k as f64).collect(),
        Skew::Zipf => {
            let mut acc = 0.0;
            (1..=sigma)
                .map(|k| {
                    acc += 1.0 / k as f64;
                    acc
                })
                .collect()
        }
    };
    let total = *cum.last().unwrap();
    let labels: Vec<u32> = (0..n)
        .map(|_| {
            let r: f64 = rng.gen::<f64>() * total;
            let idx = cum.partition_point(|&c| c < r);
            idx.min(sigma as usize - 1) as u32 + 1
        })
        .collect();
    PlainTree::from_parens(&parens, labels, sigma).expect("generated tree is well formed")
}

/// All balanced-paren strings with `n` node pairs, i.e. every ordered tree
/// shape of `n` nodes.
pub fn all_paren_strings(n: usize) -> Vec<String> {
    // forests of k nodes, then wrap with the root
    fn forests(k: usize, memo: &mut Vec<Option<Vec<String>>>) -> Vec<String> {
        if let Some(v) = &memo[k] {
            return v.clone();
        }
        let mut out = Vec::new();
        if k == 0 {
            out.push(String::new());
        } else {
            // first subtree has j nodes, remainder k-j
            for j in 1..=k {
                for first in forests(j - 1, memo) {
                    for rest in forests(k - j, memo) {
                        out.push(format!("({first}){rest}"));
                    }
                }
            }
        }
        memo[k] = Some(out.clone());
        out
    }
    if n == 0 {
        return vec![String::new()];
    }
    let mut memo = vec![None; n];
    forests(n - 1, &mut memo)
        .into_iter()
        .map(|f| format!("({f})"))
        .collect()
}

/// One index/oracle divergence with everything needed to replay it.
#[derive(Clone, Debug)]
pub struct Divergence {
    pub call: Call,
    pub expected: Answer,
    pub got: Answer,
    pub seed: u64,
}

impl std::fmt::Display for Divergence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} alpha={} arg={} i={} (seed {}): expected {}, got {}",
            self.call.q.name(),
            self.call.alpha,
            self.call.arg,
            self.call.i,
            self.seed,
            self.expected,
            self.got
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub checked: usize,
    pub divergences: Vec<Divergence>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.divergences.is_empty()
    }
}

/// Every call for small instances: all queries, all labels, all nodes, aux
/// indexes up to n+1 (one past the end exercises the NULL paths).
pub fn exhaustive_calls(n: usize, sigma: u32) -> Vec<Call> {
    let mut calls = Vec::new();
    for x in 1..=n {
        calls.push(Call {
            q: Query::Label,
            alpha: 0,
            arg: x,
            i: 0,
        });
    }
    for alpha in 1..=sigma {
        for q in [
            Query::Depth,
            Query::Parent,
            Query::Deg,
            Query::ChildRank,
            Query::NumDescendants,
            Query::PreorderRank,
            Query::PostorderRank,
        ] {
            for x in 1..=n {
                calls.push(Call {
                    q,
                    alpha,
                    arg: x,
                    i: 0,
                });
            }
        }
        for q in [Query::LevelAncestor, Query::ChildSelect] {
            for x in 1..=n {
                for i in 1..=n + 1 {
                    calls.push(Call { q, alpha, arg: x, i });
                }
            }
        }
        for q in [Query::PreorderSelect, Query::PostorderSelect] {
            for i in 1..=n + 1 {
                calls.push(Call {
                    q,
                    alpha,
                    arg: i,
                    i: 0,
                });
            }
        }
    }
    calls
}

/// Random query calls over the instance.
pub fn sampled_calls(n: usize, sigma: u32, samples: usize, seed: u64) -> Vec<Call> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let q = ALL_QUERIES[rng.gen_range(0..ALL_QUERIES.len())];
            let alpha = rng.gen_range(1..=sigma);
            let arg = if q.arg_is_occurrence() {
                rng.gen_range(1..=n + 1)
            } else {
                rng.gen_range(1..=n)
            };
            let i = if q.takes_index() {
                rng.gen_range(1..=n + 1)
            } else {
                0
            };
            Call { q, alpha, arg, i }
        })
        .collect()
}

/// Compare the index against the oracle on an exhaustive (small n) or sampled
/// call set. All divergences found are reported with a replay line.
pub fn cross_check(t: &PlainTree, idx: &LabeledTreeIndex, samples: usize, seed: u64) -> CheckReport {
    let n = t.len();
    let calls = if n <= 10 {
        exhaustive_calls(n, t.sigma())
    } else {
        sampled_calls(n, t.sigma(), samples, seed)
    };
    let mut report = CheckReport::default();
    for call in calls {
        let expected = t.query(call);
        let got = idx.query(call);
        report.checked += 1;
        if expected != got {
            report.divergences.push(Divergence {
                call,
                expected,
                got,
                seed,
            });
            if report.divergences.len() >= 32 {
                break;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1_PARENS: &str = "(()(()())())";
    const E1_LABELS: [u32; 6] = [1, 2, 1, 2, 2, 1];

    fn e1() -> PlainTree {
        PlainTree::from_parens(E1_PARENS, E1_LABELS.to_vec(), 2).unwrap()
    }

    #[test]
    fn fixture_queries() {
        let t = e1();
        assert_eq!(
            t.query(Call {
                q: Query::Depth,
                alpha: 1,
                arg: 5,
                i: 0
            }),
            Answer::Count(2)
        );
        assert_eq!(
            t.query(Call {
                q: Query::ChildSelect,
                alpha: 2,
                arg: 3,
                i: 2
            }),
            Answer::Node(Some(5))
        );
        // select then rank round-trips
        for alpha in 1..=2 {
            for i in 1..=3usize {
                if let Answer::Node(Some(x)) = t.query(Call {
                    q: Query::PreorderSelect,
                    alpha,
                    arg: i,
                    i: 0,
                }) {
                    assert_eq!(
                        t.query(Call {
                            q: Query::PreorderRank,
                            alpha,
                            arg: x,
                            i: 0
                        }),
                        Answer::Count(i)
                    );
                }
            }
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = random_labeled_tree(500, 16, 42, Skew::Zipf);
        let b = random_labeled_tree(500, 16, 42, Skew::Zipf);
        assert_eq!(a.to_parens(), b.to_parens());
        assert_eq!(a.labels(), b.labels());
        let single = random_labeled_tree(1, 4, 7, Skew::Uniform);
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn zipf_counts_strictly_decreasing() {
        let t = random_labeled_tree(10_000, 16, 42, Skew::Zipf);
        let mut counts = vec![0usize; 17];
        for &l in t.labels() {
            counts[l as usize] += 1;
        }
        for k in 1..16 {
            assert!(
                counts[k] > counts[k + 1],
                "n_{k} = {} !> n_{} = {}",
                counts[k],
                k + 1,
                counts[k + 1]
            );
        }
    }

    #[test]
    fn shape_enumeration_counts() {
        // Catalan numbers 1, 1, 2, 5, 14, 42, 132, 429
        let expect = [1usize, 1, 2, 5, 14, 42, 132, 429];
        for (n, &e) in (1..=8).zip(expect.iter()) {
            assert_eq!(all_paren_strings(n).len(), e, "n = {n}");
        }
    }

    #[test]
    fn postorder_matches_fixture() {
        let t = e1();
        assert_eq!(t.postorder(), vec![2, 4, 5, 3, 6, 1]);
    }
}
