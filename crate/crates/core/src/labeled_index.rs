//! The assembled labeled-tree index.
//!
//! The structure keeps three permanent parts: the label string in preorder
//! (entropy-compressed, module [`sequence`](crate::sequence)), the unlabeled
//! shape (module [`bp_tree`](crate::bp_tree)), and one merged weighted tree
//! `T'` holding, for every *frequent* label α (one with at least `L`
//! occurrences), the macro tree of a cover of the auxiliary tree `T^α`. `T^α`
//! contains the α-nodes, their parents, and a virtual root; it is built,
//! decomposed and discarded during construction — queries only ever touch the
//! macro tree plus short windows of at most `2L+1` candidate nodes
//! materialized through rank/select on the label string.
//!
//! Two bitvectors glue the parts together: `F` marks the frequent labels and
//! `N` encodes the macro-tree sizes in unary, which together map a label to
//! the preorder id of its macro subtree inside `T'`. Labels below the
//! frequency threshold are served by enumerating their fewer-than-`L`
//! occurrences directly.
//!
//! Per-component weights stored in `T'`:
//!
//! - `w₁` — α-nodes in the component, excluding its root (the set `V`),
//! - `w₂`/`w₃` — the split of `w₁` at the special node (first/second
//!   preorder interval share),
//! - `w₄` — members of `V` that are ancestors-or-self of the special node,
//! - `w₅` — members of `V` that are children of the component root,
//! - `w₆` — rank of the leftmost root child inside `V` (0 when none),
//! - `w₇` — whether the special node is an α-node,
//! - `w₈`/`w₉` — the postorder split of `V`: members whose subtree stays
//!   inside the component against members completing after the component's
//!   descendants (used by `postorder_select`).

use crate::bitvec::BitVector;
use crate::bp_tree::OrdinalTree;
use crate::decomposition::{decompose_arrays, macro_from_components, Kids};
use crate::oracle::{Answer, Call, Query};
use crate::sequence::LabeledSequence;
use crate::weighted_tree::{WeightedTree, WtOptions};
use crate::{Error, NodeId, Result};

/// Counts V-set materializations per thread; the verification suites assert
/// the per-query scan budget with it.
pub mod scan_meter {
    use std::cell::Cell;

    thread_local! {
        static METER: Cell<(u64, u64)> = const { Cell::new((0, 0)) };
    }

    pub fn reset() {
        METER.with(|m| m.set((0, 0)));
    }

    /// (V-sets materialized, candidate nodes produced) since the last reset.
    pub fn snapshot() -> (u64, u64) {
        METER.with(|m| m.get())
    }

    pub(super) fn record(nodes: u64) {
        METER.with(|m| {
            let (s, n) = m.get();
            m.set((s + 1, n + nodes));
        });
    }
}

#[derive(Clone, Debug)]
pub struct IndexConfig {
    /// decomposition parameter; `None` picks `default_l(n)`
    pub l_param: Option<usize>,
    /// weighted-tree block size
    pub block: usize,
    /// component-count constant checked by the verification suites
    pub c_max: f64,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            l_param: None,
            block: 512,
            c_max: 8.0,
        }
    }
}

impl IndexConfig {
    pub fn with_l(l: usize) -> IndexConfig {
        IndexConfig {
            l_param: Some(l),
            ..IndexConfig::default()
        }
    }
}

/// Default decomposition parameter: grows with n but very slowly.
pub fn default_l(n: usize) -> usize {
    let inner = (n.max(4) as f64).log2().log2().ceil() as usize;
    inner.max(2)
}

/// weight axes of the merged tree
const W_AXES: usize = 9;

#[derive(Clone, Debug)]
struct FreqPart {
    merged: WeightedTree,
    n_bv: BitVector,
}

/// Succinct labeled ordered tree supporting the twelve labeled queries.
#[derive(Clone, Debug)]
pub struct LabeledTreeIndex {
    pt: LabeledSequence,
    shape: OrdinalTree,
    freq: Option<FreqPart>,
    f_bv: BitVector,
    /// labels accepted by queries (the alphabet size passed at build)
    sigma_query: u32,
    l_param: usize,
    block: usize,
    c_max: f64,
}

/// macro tree of one frequent label, in build form
struct AlphaPart {
    alpha: u32,
    bp: Vec<bool>,
    weights: Vec<Vec<u64>>,
}

impl LabeledTreeIndex {
    /// Build from a paren string and preorder labels.
    pub fn build(parens: &str, labels: &[u32], sigma: u32, cfg: &IndexConfig) -> Result<Self> {
        let shape = OrdinalTree::from_parens(parens)?;
        Self::build_from_parts(shape, labels, sigma, cfg)
    }

    pub fn build_from_parts(
        shape: OrdinalTree,
        labels: &[u32],
        sigma: u32,
        cfg: &IndexConfig,
    ) -> Result<Self> {
        let n = shape.len();
        if n == 0 {
            return Err(Error::Invalid("index requires at least one node".into()));
        }
        if labels.len() != n {
            return Err(Error::Invalid(format!(
                "{} labels for {} nodes",
                labels.len(),
                n
            )));
        }
        if sigma == 0 {
            return Err(Error::Invalid("alphabet size must be at least 1".into()));
        }
        // alphabets larger than n are clamped; labels beyond n are rejected
        let sigma_stored = sigma.min(n as u32);
        for &l in labels {
            if l == 0 || l > sigma_stored {
                return Err(Error::LabelOutOfRange {
                    label: l,
                    sigma: sigma_stored,
                });
            }
        }
        let l_param = match cfg.l_param {
            Some(0) => return Err(Error::Invalid("L must be >= 1".into())),
            Some(l) => l,
            None => default_l(n),
        };

        let pt = LabeledSequence::new(labels, sigma_stored)?;
        let frequent: Vec<u32> = (1..=sigma_stored)
            .filter(|&a| pt.counts()[(a - 1) as usize] >= l_param)
            .collect();
        let f_bv = BitVector::from_bits((1..=sigma_stored).map(|a| frequent.contains(&a)));

        let freq = if frequent.is_empty() {
            None
        } else {
            let (parent_t, _, size_t) = crate::decomposition::tree_arrays(&shape);
            let mut alpha_nodes: Vec<Vec<u32>> = vec![Vec::new(); sigma_stored as usize + 1];
            for (i, &l) in labels.iter().enumerate() {
                if f_bv.bit_u((l - 1) as usize) {
                    alpha_nodes[l as usize].push(i as u32 + 1);
                }
            }
            let build_one = |&alpha: &u32| {
                build_alpha_part(
                    alpha,
                    &alpha_nodes[alpha as usize],
                    &parent_t,
                    &size_t,
                    labels,
                    l_param,
                )
            };
            #[cfg(feature = "parallel")]
            let parts: Vec<Result<AlphaPart>> = {
                use rayon::prelude::*;
                frequent.par_iter().map(build_one).collect()
            };
            #[cfg(not(feature = "parallel"))]
            let parts: Vec<Result<AlphaPart>> = frequent.iter().map(build_one).collect();

            let mut bp: Vec<bool> = vec![true];
            let mut weights: Vec<Vec<u64>> = vec![vec![0u64]; W_AXES];
            let mut n_bits: Vec<bool> = Vec::new();
            for part in parts {
                let part = part?;
                let m = part.bp.len() / 2;
                bp.extend_from_slice(&part.bp);
                for a in 0..W_AXES {
                    weights[a].extend_from_slice(&part.weights[a]);
                }
                n_bits.push(true);
                n_bits.extend(std::iter::repeat(false).take(m));
            }
            bp.push(false);
            let skel = OrdinalTree::from_bits(&bp)?;
            let merged = WeightedTree::with_options(
                skel,
                weights,
                (2 * l_param + 2) as u64,
                WtOptions {
                    block: cfg.block,
                    phi_pairs: vec![(2, 3), (8, 9), (5, 0)],
                    pi_axes: vec![4],
                },
            )?;
            Some(FreqPart {
                merged,
                n_bv: BitVector::from_bits(n_bits),
            })
        };

        Ok(LabeledTreeIndex {
            pt,
            shape,
            freq,
            f_bv,
            sigma_query: sigma,
            l_param,
            block: cfg.block,
            c_max: cfg.c_max,
        })
    }

    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn sigma(&self) -> u32 {
        self.sigma_query
    }

    pub fn l_param(&self) -> usize {
        self.l_param
    }

    pub fn config(&self) -> IndexConfig {
        IndexConfig {
            l_param: Some(self.l_param),
            block: self.block,
            c_max: self.c_max,
        }
    }

    pub fn labels_sequence(&self) -> &LabeledSequence {
        &self.pt
    }

    pub fn shape(&self) -> &OrdinalTree {
        &self.shape
    }

    pub fn merged_tree(&self) -> Option<&WeightedTree> {
        self.freq.as_ref().map(|f| &f.merged)
    }

    /// Is `alpha` frequent (served by the macro machinery)?
    pub fn is_frequent(&self, alpha: u32) -> Result<bool> {
        self.check_alpha(alpha)?;
        Ok(self.stored(alpha) && self.f_bv.bit_u((alpha - 1) as usize))
    }

    fn check_alpha(&self, alpha: u32) -> Result<()> {
        if alpha == 0 || alpha > self.sigma_query {
            return Err(Error::LabelOutOfRange {
                label: alpha,
                sigma: self.sigma_query,
            });
        }
        Ok(())
    }

    /// is alpha within the stored (possibly clamped) alphabet?
    fn stored(&self, alpha: u32) -> bool {
        alpha <= self.pt.sigma()
    }

    fn check_node(&self, x: NodeId) -> Result<()> {
        if x == 0 || x > self.len() {
            return Err(Error::OutOfRange {
                what: "node id",
                got: x,
                limit: self.len(),
            });
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // frequent-label plumbing

    /// Preorder id in `T'` of the macro-tree root of frequent `alpha`.
    pub fn merged_offset(&self, alpha: u32) -> Result<NodeId> {
        self.check_alpha(alpha)?;
        if !self.is_frequent(alpha)? {
            return Err(Error::NotFrequent { label: alpha });
        }
        let freq = self.freq.as_ref().expect("frequent label implies macro part");
        let j = self.f_bv.rank1_u(alpha as usize);
        let pos = freq.n_bv.select1_u(j) + 1;
        Ok(1 + (pos - j) + 1)
    }

    fn ctx(&self, alpha: u32) -> Option<Ctx<'_>> {
        if !self.stored(alpha) || !self.f_bv.bit_u((alpha - 1) as usize) {
            return None;
        }
        let freq = self.freq.as_ref()?;
        let j = self.f_bv.rank1_u(alpha as usize);
        let pos = freq.n_bv.select1_u(j) + 1;
        let g = 1 + (pos - j) + 1;
        let w = &freq.merged;
        let open_g = w.skeleton().open_u(g);
        Ctx {
            idx: self,
            w,
            alpha,
            g,
            pre23: w.bp_rank_u(2, 3, open_g - 1),
        }
        .into()
    }

    // ------------------------------------------------------------------
    // the twelve queries

    /// The label of `x`.
    pub fn label(&self, x: NodeId) -> Result<u32> {
        self.pt.access(x)
    }

    /// Number of α-nodes with preorder rank at most `x`.
    pub fn preorder_rank_a(&self, alpha: u32, x: NodeId) -> Result<usize> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if !self.stored(alpha) {
            return Ok(0);
        }
        self.pt.rank(alpha, x)
    }

    /// The i-th α-node in preorder.
    pub fn preorder_select_a(&self, alpha: u32, i: usize) -> Result<NodeId> {
        self.check_alpha(alpha)?;
        if !self.stored(alpha) {
            return Err(Error::NoSuchOccurrence { j: i, available: 0 });
        }
        self.pt.select(alpha, i)
    }

    /// Number of α-nodes among the proper descendants of `x`.
    pub fn num_descendants_a(&self, alpha: u32, x: NodeId) -> Result<usize> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if !self.stored(alpha) {
            return Ok(0);
        }
        let end = x + self.shape.subtree_size_u(x) - 1;
        Ok(self.pt.rank_u(alpha, end) - self.pt.rank_u(alpha, x))
    }

    /// Number of α-nodes on the root-to-x path, including `x`.
    pub fn depth_a(&self, alpha: u32, x: NodeId) -> Result<usize> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if !self.stored(alpha) || self.pt.counts()[(alpha - 1) as usize] == 0 {
            return Ok(0);
        }
        match self.ctx(alpha) {
            None => {
                // infrequent: enumerate the fewer-than-L α-nodes
                let mut d = 0;
                for v in self.enum_alpha(alpha) {
                    if self.shape.is_ancestor_u(v, x) {
                        d += 1;
                    }
                }
                Ok(d)
            }
            Some(ctx) => {
                let y = if self.pt.access(x)? == alpha {
                    x
                } else {
                    match self.parent_a(alpha, x)? {
                        None => return Ok(0),
                        Some(y) => y,
                    }
                };
                Ok(ctx.alpha_depth(y))
            }
        }
    }

    /// Nearest proper α-ancestor of `x`.
    pub fn parent_a(&self, alpha: u32, x: NodeId) -> Result<Option<NodeId>> {
        self.level_ancestor_a(alpha, x, 1)
    }

    /// The i-th α-node on the root-ward path from `x`, excluding `x` itself.
    pub fn level_ancestor_a(&self, alpha: u32, x: NodeId, i: usize) -> Result<Option<NodeId>> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if i == 0 {
            return Err(Error::OutOfRange {
                what: "ancestor index",
                got: 0,
                limit: self.len(),
            });
        }
        if !self.stored(alpha) || self.pt.counts()[(alpha - 1) as usize] == 0 {
            return Ok(None);
        }
        match self.ctx(alpha) {
            None => {
                // α-ancestors of x in root-first order
                let mut ancs: Vec<NodeId> = self
                    .enum_alpha(alpha)
                    .filter(|&v| v != x && self.shape.is_ancestor_u(v, x))
                    .collect();
                ancs.reverse(); // deepest first
                Ok(ancs.get(i - 1).copied())
            }
            Some(ctx) => {
                if self.pt.access(x)? == alpha {
                    return Ok(ctx.level_ancestor_from_alpha_node(x, i));
                }
                // anchor the climb at an α-node sharing x's α-ancestors
                let r = self.pt.rank_u(alpha, x - 1);
                if r == 0 {
                    return Ok(None);
                }
                let u = self.pt.select_u(alpha, r);
                if self.shape.is_ancestor_u(u, x) {
                    // u is the deepest α-ancestor
                    return Ok(if i == 1 {
                        Some(u)
                    } else {
                        ctx.level_ancestor_from_alpha_node(u, i - 1)
                    });
                }
                let c = self.shape.lca_u(u, x);
                if self.pt.access(c)? == alpha {
                    return Ok(if i == 1 {
                        Some(c)
                    } else {
                        ctx.level_ancestor_from_alpha_node(c, i - 1)
                    });
                }
                // first α-node inside subtree(c): its proper α-ancestors are
                // exactly the α-ancestors of x
                let u_bar = self.pt.select_u(alpha, self.pt.rank_u(alpha, c - 1) + 1);
                debug_assert!(self.shape.is_ancestor_u(c, u_bar));
                Ok(ctx.level_ancestor_from_alpha_node(u_bar, i))
            }
        }
    }

    /// Number of α-children of `x`.
    pub fn deg_a(&self, alpha: u32, x: NodeId) -> Result<usize> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if !self.stored(alpha) || self.pt.counts()[(alpha - 1) as usize] == 0 {
            return Ok(0);
        }
        match self.ctx(alpha) {
            None => Ok(self
                .enum_alpha(alpha)
                .filter(|&v| self.shape.parent_u(v) == Some(x))
                .count()),
            Some(ctx) => match ctx.map_node(x) {
                None => Ok(0),
                Some((xp, true)) => Ok(ctx.w.wdeg_u(5, xp) as usize),
                Some((xp, false)) => Ok(ctx
                    .v_set(xp)
                    .iter()
                    .filter(|m| self.shape.parent_u(m.node) == Some(x))
                    .count()),
            },
        }
    }

    /// Number of α-children of `parent(x)` at sibling positions <= x; the
    /// root reports 0.
    pub fn child_rank_a(&self, alpha: u32, x: NodeId) -> Result<usize> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if !self.stored(alpha) || self.pt.counts()[(alpha - 1) as usize] == 0 {
            return Ok(0);
        }
        let u = match self.shape.parent_u(x) {
            None => return Ok(0),
            Some(u) => u,
        };
        match self.ctx(alpha) {
            None => Ok(self
                .enum_alpha(alpha)
                .filter(|&v| v <= x && self.shape.parent_u(v) == Some(u))
                .count()),
            Some(ctx) => {
                if self.pt.access(x)? == alpha {
                    let (xp, _) = ctx.map_alpha_node(self.pt.rank_u(alpha, x));
                    let i = ctx
                        .v_set(xp)
                        .iter()
                        .filter(|m| m.node <= x && self.shape.parent_u(m.node) == Some(u))
                        .count();
                    let (_, u_special) = ctx.map_node(u).expect("parent of an α-node is in T^α");
                    if !u_special {
                        return Ok(i);
                    }
                    let extra = ctx.w.wchild_rank_u(5, xp) - ctx.w.weight_u(5, xp);
                    return Ok(i + extra as usize);
                }
                match ctx.map_node(u) {
                    None => Ok(0),
                    Some((up, false)) => Ok(ctx
                        .v_set(up)
                        .iter()
                        .filter(|m| m.node <= x && self.shape.parent_u(m.node) == Some(u))
                        .count()),
                    Some((up, true)) => {
                        let r = self.pt.rank_u(alpha, x - 1);
                        if r == 0 {
                            return Ok(0);
                        }
                        let v = self.pt.select_u(alpha, r);
                        if v <= u {
                            return Ok(0);
                        }
                        let (vp, _) = ctx.map_alpha_node(r);
                        // macro child of up on the path to vp
                        let du = ctx.w.skeleton().depth_u(up);
                        let dv = ctx.w.skeleton().depth_u(vp);
                        debug_assert!(dv > du);
                        let wp = if dv == du + 1 {
                            vp
                        } else {
                            ctx.w
                                .skeleton()
                                .level_ancestor_u(vp, (dv - du - 1) as usize)
                                .expect("vp lies below up")
                        };
                        let i = ctx
                            .v_set(wp)
                            .iter()
                            .filter(|m| m.node <= x && self.shape.parent_u(m.node) == Some(u))
                            .count();
                        let extra = ctx.w.wchild_rank_u(5, wp) - ctx.w.weight_u(5, wp);
                        Ok(i + extra as usize)
                    }
                }
            }
        }
    }

    /// The i-th α-child of `x`.
    pub fn child_select_a(&self, alpha: u32, x: NodeId, i: usize) -> Result<Option<NodeId>> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if i == 0 {
            return Err(Error::OutOfRange {
                what: "child index",
                got: 0,
                limit: self.len(),
            });
        }
        if !self.stored(alpha) || self.pt.counts()[(alpha - 1) as usize] == 0 {
            return Ok(None);
        }
        match self.ctx(alpha) {
            None => Ok(self
                .enum_alpha(alpha)
                .filter(|&v| self.shape.parent_u(v) == Some(x))
                .nth(i - 1)),
            Some(ctx) => match ctx.map_node(x) {
                None => Ok(None),
                Some((xp, false)) => Ok(ctx
                    .v_set(xp)
                    .iter()
                    .filter(|m| self.shape.parent_u(m.node) == Some(x))
                    .nth(i - 1)
                    .map(|m| m.node)),
                Some((xp, true)) => {
                    let yp = match ctx.w.wchild_select_u(5, xp, i as u64) {
                        None => return Ok(None),
                        Some(yp) => yp,
                    };
                    let skipped = ctx.w.wchild_rank_u(5, yp) - ctx.w.weight_u(5, yp);
                    let rem = i - skipped as usize;
                    Ok(ctx
                        .v_set(yp)
                        .iter()
                        .filter(|m| self.shape.parent_u(m.node) == Some(x))
                        .nth(rem - 1)
                        .map(|m| m.node))
                }
            },
        }
    }

    /// Postorder rank of `x` among the α-nodes.
    pub fn postorder_rank_a(&self, alpha: u32, x: NodeId) -> Result<usize> {
        self.check_alpha(alpha)?;
        self.check_node(x)?;
        if !self.stored(alpha) || self.pt.counts()[(alpha - 1) as usize] == 0 {
            return Ok(0);
        }
        // α-nodes preceding x in postorder: those inside or left of the
        // subtree, i.e. preorder-prefix count minus proper α-ancestors
        let end = x + self.shape.subtree_size_u(x) - 1;
        let within = self.pt.rank_u(alpha, end);
        let own = (self.pt.access(x)? == alpha) as usize;
        let ancs = self.depth_a(alpha, x)? - own;
        Ok(within - ancs)
    }

    /// The i-th α-node in postorder.
    pub fn postorder_select_a(&self, alpha: u32, i: usize) -> Result<NodeId> {
        self.check_alpha(alpha)?;
        let avail = if self.stored(alpha) {
            self.pt.counts()[(alpha - 1) as usize]
        } else {
            0
        };
        if i == 0 || i > avail {
            return Err(Error::NoSuchOccurrence { j: i, available: avail });
        }
        match self.ctx(alpha)
        {
            None => {
                let mut nodes: Vec<(usize, NodeId)> = self
                    .enum_alpha(alpha)
                    .map(|v| (self.shape.close_u(v), v))
                    .collect();
                nodes.sort_unstable();
                Ok(nodes[i - 1].1)
            }
            Some(ctx) => {
                let open_g = ctx.w.skeleton().open_u(ctx.g);
                let pre89 = ctx.w.bp_rank_u(8, 9, open_g - 1);
                let target = pre89 + i as i64;
                let p = ctx
                    .w
                    .bp_select_u(8, 9, target)
                    .expect("postorder weights cover all α-nodes");
                let xp = ctx.w.skeleton().node_at_u(p);
                let j = (target - ctx.w.bp_rank_u(8, 9, p - 1)) as usize;
                let at_open = ctx.w.skeleton().parens().bit_u(p - 1);
                let mut bucket: Vec<(usize, NodeId)> = ctx
                    .v_set(xp)
                    .iter()
                    .filter(|m| self.in_close_bucket(&ctx, m) != at_open)
                    .map(|m| (self.shape.close_u(m.node), m.node))
                    .collect();
                bucket.sort_unstable();
                debug_assert!(j >= 1 && j <= bucket.len(), "postorder bucket underflow");
                Ok(bucket[j - 1].1)
            }
        }
    }

    /// Does `m` complete only after the component's descendants, i.e. is it
    /// attributed at the close paren for postorder selection?
    fn in_close_bucket(&self, ctx: &Ctx<'_>, m: &VMember) -> bool {
        if !m.in_i1 {
            return true;
        }
        // out(v) > 0: α-descendants outside the component
        let end = m.node + self.shape.subtree_size_u(m.node) - 1;
        let total = self.pt.rank_u(ctx.alpha, end) - self.pt.rank_u(ctx.alpha, m.node - 1);
        total > m.v_in_subtree
    }

    fn enum_alpha(&self, alpha: u32) -> impl Iterator<Item = NodeId> + '_ {
        let count = self.pt.counts()[(alpha - 1) as usize];
        (1..=count).map(move |j| self.pt.select_u(alpha, j))
    }

    // ------------------------------------------------------------------
    // mapping surface (exposed for the verification suites)

    /// Interval of global α-ranks whose nodes are non-root members of the
    /// macro node `xp` of `alpha`'s macro tree: `(l1, r1, l2, r2)` with empty
    /// halves encoded as `l = r + 1`.
    pub fn intervals_of(&self, alpha: u32, xp: NodeId) -> Result<(usize, usize, usize, usize)> {
        let ctx = self.require_ctx(alpha)?;
        self.check_macro_node(&ctx, xp)?;
        let (l1, r1, l2, r2) = ctx.intervals(xp);
        Ok((l1, r1, l2, r2))
    }

    /// The set `V`: α-nodes of component `xp` excluding its root, in preorder.
    pub fn v_set(&self, alpha: u32, xp: NodeId) -> Result<Vec<NodeId>> {
        let ctx = self.require_ctx(alpha)?;
        self.check_macro_node(&ctx, xp)?;
        Ok(ctx.v_set(xp).iter().map(|m| m.node).collect())
    }

    /// Leftmost α-child of the component root of `xp`, when any.
    pub fn c_node(&self, alpha: u32, xp: NodeId) -> Result<Option<NodeId>> {
        let ctx = self.require_ctx(alpha)?;
        self.check_macro_node(&ctx, xp)?;
        Ok(ctx.c_node(xp))
    }

    /// Macro node of `alpha`'s macro tree whose component holds `x` as a
    /// non-root node, with the special flag; None when `x` is not in `T^α`.
    pub fn map_node(&self, alpha: u32, x: NodeId) -> Result<Option<(NodeId, bool)>> {
        self.check_node(x)?;
        let ctx = self.require_ctx(alpha)?;
        Ok(ctx.map_node(x))
    }

    fn require_ctx(&self, alpha: u32) -> Result<Ctx<'_>> {
        self.check_alpha(alpha)?;
        self.ctx(alpha).ok_or(Error::NotFrequent { label: alpha })
    }

    fn check_macro_node(&self, ctx: &Ctx<'_>, xp: NodeId) -> Result<()> {
        let skel = ctx.w.skeleton();
        if xp < 2 || xp > skel.len() {
            return Err(Error::OutOfRange {
                what: "macro node",
                got: xp,
                limit: skel.len(),
            });
        }
        if !skel.is_ancestor_u(ctx.g, xp) {
            return Err(Error::Invalid(format!(
                "macro node {xp} is outside the macro tree of label {}",
                ctx.alpha
            )));
        }
        Ok(())
    }

    // ------------------------------------------------------------------

    /// Unified query entry point: select overflows answer NULL, matching the
    /// oracle's total surface. Node arguments must be valid ids.
    pub fn query(&self, call: Call) -> Answer {
        let Call { q, alpha, arg, i } = call;
        match q {
            Query::Label => Answer::Symbol(self.label(arg).expect("valid node")),
            Query::Depth => Answer::Count(self.depth_a(alpha, arg).expect("valid args")),
            Query::Parent => Answer::Node(self.parent_a(alpha, arg).expect("valid args")),
            Query::LevelAncestor => {
                Answer::Node(self.level_ancestor_a(alpha, arg, i).expect("valid args"))
            }
            Query::Deg => Answer::Count(self.deg_a(alpha, arg).expect("valid args")),
            Query::ChildRank => Answer::Count(self.child_rank_a(alpha, arg).expect("valid args")),
            Query::ChildSelect => {
                Answer::Node(self.child_select_a(alpha, arg, i).expect("valid args"))
            }
            Query::NumDescendants => {
                Answer::Count(self.num_descendants_a(alpha, arg).expect("valid args"))
            }
            Query::PreorderRank => {
                Answer::Count(self.preorder_rank_a(alpha, arg).expect("valid args"))
            }
            Query::PreorderSelect => Answer::Node(match self.preorder_select_a(alpha, arg) {
                Ok(x) => Some(x),
                Err(Error::NoSuchOccurrence { .. }) => None,
                Err(e) => panic!("unexpected error: {e}"),
            }),
            Query::PostorderRank => {
                Answer::Count(self.postorder_rank_a(alpha, arg).expect("valid args"))
            }
            Query::PostorderSelect => Answer::Node(match self.postorder_select_a(alpha, arg) {
                Ok(x) => Some(x),
                Err(Error::NoSuchOccurrence { .. }) => None,
                Err(e) => panic!("unexpected error: {e}"),
            }),
        }
    }

    /// Canonical input text: "n σ", the paren string, the labels.
    pub fn to_input_text(&self) -> String {
        let n = self.len();
        let mut out = format!("{} {}\n{}\n", n, self.sigma_query, self.shape.to_paren_string());
        let labels: Vec<String> = (1..=n)
            .map(|i| self.pt.access(i).expect("valid node").to_string())
            .collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
        out
    }

    /// Bit counts per structure plus entropy accounting.
    pub fn space_report(&self) -> SpaceReport {
        let n = self.len();
        let pt_bits = self.pt.size_bits();
        let shape_bits = self.shape.size_bits();
        let (merged_bits, n_bits) = match &self.freq {
            Some(f) => (f.merged.size_bits(), f.n_bv.size_bits()),
            None => (0, 0),
        };
        let f_bits = self.f_bv.size_bits();
        let total = pt_bits + shape_bits + merged_bits + n_bits + f_bits;
        let h0 = self.pt.zero_order_entropy();
        let n_h0 = h0 * n as f64;
        let redundancy = total as f64 - n_h0 - 2.0 * n as f64;
        SpaceReport {
            n,
            sigma: self.sigma_query,
            l_param: self.l_param,
            pt_bits,
            shape_bits,
            merged_bits,
            n_bits,
            f_bits,
            total_bits: total,
            h0,
            n_h0,
            redundancy_bits: redundancy,
            redundancy_per_node: redundancy / n as f64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpaceReport {
    pub n: usize,
    pub sigma: u32,
    pub l_param: usize,
    pub pt_bits: usize,
    pub shape_bits: usize,
    pub merged_bits: usize,
    pub n_bits: usize,
    pub f_bits: usize,
    pub total_bits: usize,
    pub h0: f64,
    pub n_h0: f64,
    pub redundancy_bits: f64,
    pub redundancy_per_node: f64,
}

/// one V-set member
struct VMember {
    node: NodeId,
    in_i1: bool,
    /// members of the same V inside subtree(node), self included
    v_in_subtree: usize,
}

/// Query context for one frequent label.
struct Ctx<'a> {
    idx: &'a LabeledTreeIndex,
    w: &'a WeightedTree,
    alpha: u32,
    /// macro-tree root id in T'
    g: NodeId,
    /// Σ(w₂+w₃) over T' positions before the macro root's open paren
    pre23: i64,
}

impl<'a> Ctx<'a> {
    /// Macro node holding the α-node of global α-rank `r`, with special flag.
    fn map_alpha_node(&self, r: usize) -> (NodeId, bool) {
        let p = self
            .w
            .bp_select_u(2, 3, self.pre23 + r as i64)
            .expect("α-rank within totals");
        let xp = self.w.skeleton().node_at_u(p);
        let r1 = (self.w.bp_rank_u(2, 3, self.w.skeleton().open_u(xp)) - self.pre23) as usize;
        let special = self.w.weight_u(7, xp) == 1 && r == r1;
        (xp, special)
    }

    /// Global α-rank intervals of the component `xp`; empty halves are
    /// `l = r + 1`.
    fn intervals(&self, xp: NodeId) -> (usize, usize, usize, usize) {
        let skel = self.w.skeleton();
        let r1 = (self.w.bp_rank_u(2, 3, skel.open_u(xp)) - self.pre23) as i64;
        let w2 = self.w.weight_u(2, xp) as i64;
        let w3 = self.w.weight_u(3, xp) as i64;
        let r2 = (self.w.bp_rank_u(2, 3, skel.close_u(xp)) - self.pre23) as i64;
        let l1 = r1 - w2 + 1;
        let l2 = r2 - w3 + 1;
        (l1 as usize, r1 as usize, l2 as usize, r2 as usize)
    }

    fn v_set(&self, xp: NodeId) -> Vec<VMember> {
        let (l1, r1, l2, r2) = self.intervals(xp);
        let mut members: Vec<VMember> = Vec::with_capacity((r1 + 1 - l1) + (r2 + 1 - l2));
        for s in l1..=r1 {
            members.push(VMember {
                node: self.idx.pt.select_u(self.alpha, s),
                in_i1: true,
                v_in_subtree: 0,
            });
        }
        for s in l2..=r2 {
            members.push(VMember {
                node: self.idx.pt.select_u(self.alpha, s),
                in_i1: false,
                v_in_subtree: 0,
            });
        }
        // members are in increasing preorder; count, per member, how many
        // members its subtree holds (self included)
        for k in 0..members.len() {
            let end = members[k].node + self.idx.shape.subtree_size_u(members[k].node) - 1;
            members[k].v_in_subtree = members[k..]
                .iter()
                .take_while(|m| m.node <= end)
                .count();
        }
        scan_meter::record(members.len() as u64);
        members
    }

    fn c_node(&self, xp: NodeId) -> Option<NodeId> {
        let w6 = self.w.weight_u(6, xp) as usize;
        if w6 == 0 {
            return None;
        }
        let (l1, _, l2, _) = self.intervals(xp);
        let w2 = self.w.weight_u(2, xp) as usize;
        let k = if w6 <= w2 {
            l1 + w6 - 1
        } else {
            l2 + w6 - w2 - 1
        };
        Some(self.idx.pt.select_u(self.alpha, k))
    }

    /// Number of α-nodes on the root path of `y`, `y` an α-node.
    fn alpha_depth(&self, y: NodeId) -> usize {
        let (yp, _) = self.map_alpha_node(self.idx.pt.rank_u(self.alpha, y));
        let shape = &self.idx.shape;
        let i = self
            .v_set(yp)
            .iter()
            .filter(|m| shape.is_ancestor_u(m.node, y))
            .count();
        let depth4 = self.w.wdepth_u(4, yp);
        let w4 = self.w.weight_u(4, yp) as i64;
        i + (depth4 - w4) as usize
    }

    /// The i-th α-node strictly above the α-node `y`.
    fn level_ancestor_from_alpha_node(&self, y: NodeId, i: usize) -> Option<NodeId> {
        let shape = &self.idx.shape;
        let (yp, _) = self.map_alpha_node(self.idx.pt.rank_u(self.alpha, y));
        let mut rem = i;
        for m in self.v_set(yp).iter().rev() {
            if m.node != y && shape.is_ancestor_u(m.node, y) {
                rem -= 1;
                if rem == 0 {
                    return Some(m.node);
                }
            }
        }
        let zp = self.w.wlevel_ancestor_u(4, yp, rem as i64)?;
        debug_assert!(
            self.w.skeleton().is_ancestor_u(self.g, zp),
            "weighted ancestor stays inside the macro tree"
        );
        let parent_yp = self
            .w
            .skeleton()
            .parent_u(yp)
            .expect("yp has a macro parent when an ancestor exists");
        let skipped = self.w.wdepth_u(4, parent_yp) - self.w.wdepth_u(4, zp);
        rem -= skipped as usize;
        for m in self.v_set(zp).iter().rev() {
            if shape.is_ancestor_u(m.node, y) {
                rem -= 1;
                if rem == 0 {
                    return Some(m.node);
                }
            }
        }
        debug_assert!(false, "w4 accounting must locate the ancestor");
        None
    }

    /// The component holding `x` as a non-root node of `T^α`.
    fn map_node(&self, x: NodeId) -> Option<(NodeId, bool)> {
        let idx = self.idx;
        let shape = &idx.shape;
        if idx.pt.access(x).expect("valid node") == self.alpha {
            return Some(self.map_alpha_node(idx.pt.rank_u(self.alpha, x)));
        }
        let lo = idx.pt.rank_u(self.alpha, x);
        let end = x + shape.subtree_size_u(x) - 1;
        let hi = idx.pt.rank_u(self.alpha, end);
        if hi <= lo {
            return None; // no α-descendants
        }
        let u = idx.pt.select_u(self.alpha, lo + 1);
        let v = idx.pt.select_u(self.alpha, hi);
        let (up, _) = self.map_alpha_node(lo + 1);
        let (vp, _) = self.map_alpha_node(hi);
        let tskel = self.w.skeleton();
        if x != shape.lca_u(u, v) {
            if shape.parent_u(u) != Some(x) {
                return None;
            }
            if self.c_node(up) == Some(u) {
                let pp = tskel.parent_u(up).expect("component has a macro parent");
                debug_assert!(tskel.is_ancestor_u(self.g, pp));
                return Some((pp, true));
            }
            return Some((up, false));
        }
        let (anchor, other_anc) = if tskel.is_ancestor_u(up, vp) {
            (up, true)
        } else if tskel.is_ancestor_u(vp, up) {
            (vp, true)
        } else {
            (0, false)
        };
        if !other_anc {
            return Some((tskel.lca_u(up, vp), true));
        }
        let has_child = self
            .v_set(anchor)
            .iter()
            .any(|m| shape.parent_u(m.node) == Some(x));
        if !has_child {
            return None;
        }
        let c = self.c_node(anchor);
        if let Some(c) = c {
            if shape.parent_u(c) == Some(x) {
                let pp = tskel.parent_u(anchor).expect("component has a macro parent");
                debug_assert!(tskel.is_ancestor_u(self.g, pp));
                return Some((pp, true));
            }
        }
        Some((anchor, false))
    }
}

/// Build the macro tree and weights of one frequent label.
fn build_alpha_part(
    alpha: u32,
    nodes: &[u32],
    parent_t: &[u32],
    size_t: &[u32],
    labels: &[u32],
    l_param: usize,
) -> Result<AlphaPart> {
    // X: α-nodes and their parents, preorder-sorted
    let mut x_set: Vec<u32> = Vec::with_capacity(2 * nodes.len());
    x_set.extend_from_slice(nodes);
    for &v in nodes {
        let p = parent_t[(v - 1) as usize];
        if p != 0 {
            x_set.push(p);
        }
    }
    x_set.sort_unstable();
    x_set.dedup();
    let m = x_set.len();

    // T^α parents: the lowest proper ancestor inside X, with the virtual
    // root (local id 1) on top; locals 2..=m+1 follow preorder
    let mut parent_local = vec![0u32; m + 2];
    {
        let mut stack: Vec<(u32, u32)> = Vec::new(); // (t node, local)
        for (i, &v) in x_set.iter().enumerate() {
            let local = i as u32 + 2;
            while let Some(&(u, _)) = stack.last() {
                if u <= v && v <= u + size_t[(u - 1) as usize] - 1 {
                    break;
                }
                stack.pop();
            }
            parent_local[local as usize] = stack.last().map_or(1, |&(_, l)| l);
            stack.push((v, local));
        }
    }

    // local children lists and subtree sizes
    let total = m + 1; // with the virtual root
    let mut deg = vec![0u32; total];
    for local in 2..=total {
        deg[(parent_local[local] - 1) as usize] += 1;
    }
    let mut off = vec![0u32; total + 1];
    for v in 1..=total {
        off[v] = off[v - 1] + deg[v - 1];
    }
    let mut fill = off.clone();
    let mut list = vec![0u32; total - 1];
    for local in 2..=total {
        let p = (parent_local[local] - 1) as usize;
        list[fill[p] as usize] = local as u32;
        fill[p] += 1;
    }
    let kids = Kids::from_raw(off, list);
    let mut size_local = vec![1u32; total + 1];
    for local in (2..=total).rev() {
        let p = parent_local[local] as usize;
        size_local[p] += size_local[local];
    }

    let comps = decompose_arrays(&kids, &size_local[1..=total], l_param);
    debug_assert!(!comps.is_empty(), "T^α has at least one edge");
    let mac = macro_from_components(&comps)?;

    let to_t = |local: usize| -> u32 { x_set[local - 2] };
    let is_anc_t = |a: u32, b: u32| a <= b && b <= a + size_t[(a - 1) as usize] - 1;

    let macro_n = mac.len();
    let mut weights: Vec<Vec<u64>> = vec![vec![0u64; macro_n]; W_AXES];
    for mid in 1..=macro_n {
        let k = match mac.comp_of(mid) {
            None => continue, // extra root component holds only the virtual root
            Some(k) => k,
        };
        let comp = &comps[k];
        // V: α-labeled non-root members (the virtual root is never one)
        let mut v_local: Vec<u32> = Vec::new();
        for local in comp.nonroot_nodes() {
            let t = to_t(local);
            if labels[(t - 1) as usize] == alpha {
                v_local.push(local as u32);
            }
        }
        let w1 = v_local.len() as u64;
        let special = comp.special;
        let special_t = to_t(special);
        let w2 = v_local.iter().filter(|&&l| (l as usize) <= special).count() as u64;
        let w4 = v_local
            .iter()
            .filter(|&&l| is_anc_t(to_t(l as usize), special_t))
            .count() as u64;
        let w5 = v_local
            .iter()
            .filter(|&&l| parent_local[l as usize] as usize == comp.root)
            .count() as u64;
        let w6 = v_local
            .iter()
            .position(|&l| parent_local[l as usize] as usize == comp.root)
            .map_or(0, |p| p as u64 + 1);
        let w7 = (labels[(special_t - 1) as usize] == alpha) as u64;
        // postorder split: a member goes to the close bucket when it sits in
        // I₂ or has α-descendants outside the component
        let mut w9 = 0u64;
        for (pos, &l) in v_local.iter().enumerate() {
            let in_i2 = comp.i2.map_or(false, |(lo, hi)| lo <= l as usize && l as usize <= hi);
            let t = to_t(l as usize);
            let end = t + size_t[(t - 1) as usize] - 1;
            let alpha_in_subtree =
                count_in_range(nodes, t, end);
            let v_in_subtree = v_local[pos..]
                .iter()
                .take_while(|&&l2| to_t(l2 as usize) <= end)
                .count();
            if in_i2 || alpha_in_subtree > v_in_subtree {
                w9 += 1;
            }
        }
        weights[0][mid - 1] = w1;
        weights[1][mid - 1] = w2;
        weights[2][mid - 1] = w1 - w2;
        weights[3][mid - 1] = w4;
        weights[4][mid - 1] = w5;
        weights[5][mid - 1] = w6;
        weights[6][mid - 1] = w7;
        weights[7][mid - 1] = w1 - w9;
        weights[8][mid - 1] = w9;
    }

    let bp: Vec<bool> = mac.quotient.parens().iter().collect();
    Ok(AlphaPart {
        alpha,
        bp,
        weights,
    })
}

/// count of sorted `v` entries within `[lo, hi]`
fn count_in_range(v: &[u32], lo: u32, hi: u32) -> usize {
    let a = v.partition_point(|&x| x < lo);
    let b = v.partition_point(|&x| x <= hi);
    b - a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cross_check, PlainTree};

    const E1_PARENS: &str = "(()(()())())";
    const E1_LABELS: [u32; 6] = [1, 2, 1, 2, 2, 1];

    fn e1(l: usize) -> LabeledTreeIndex {
        LabeledTreeIndex::build(E1_PARENS, &E1_LABELS, 2, &IndexConfig::with_l(l)).unwrap()
    }

    #[test]
    fn frequency_rule() {
        let idx = e1(2);
        assert!(idx.is_frequent(1).unwrap());
        assert!(idx.is_frequent(2).unwrap());
        let idx = e1(4);
        assert!(!idx.is_frequent(1).unwrap());
        assert!(!idx.is_frequent(2).unwrap());
        assert!(idx.merged_tree().is_none());
    }

    #[test]
    fn default_l_values() {
        assert_eq!(default_l(16), 2);
        assert_eq!(default_l(1 << 32), 5);
        assert_eq!(default_l(1), 2);
        assert_eq!(default_l(1 << 14), 4);
    }

    #[test]
    fn fixture_queries_all_l() {
        let t = PlainTree::from_parens(E1_PARENS, E1_LABELS.to_vec(), 2).unwrap();
        for l in [1usize, 2, 3, 4, 8] {
            let idx = e1(l);
            let rep = cross_check(&t, &idx, 0, 0);
            assert!(rep.ok(), "L={l}: {}", rep.divergences[0]);
        }
    }

    #[test]
    fn fixture_spot_values() {
        let idx = e1(2);
        assert_eq!(idx.label(4).unwrap(), 2);
        assert_eq!(idx.label(1).unwrap(), 1);
        assert_eq!(idx.preorder_rank_a(2, 5).unwrap(), 3);
        assert_eq!(idx.preorder_select_a(1, 2).unwrap(), 3);
        assert_eq!(idx.num_descendants_a(2, 1).unwrap(), 3);
        assert_eq!(idx.num_descendants_a(1, 3).unwrap(), 0);
        assert_eq!(idx.parent_a(1, 4).unwrap(), Some(3));
        assert_eq!(idx.parent_a(2, 5).unwrap(), None);
        assert_eq!(idx.depth_a(1, 5).unwrap(), 2);
        assert_eq!(idx.depth_a(2, 6).unwrap(), 0);
        assert_eq!(idx.level_ancestor_a(1, 5, 1).unwrap(), Some(3));
        assert_eq!(idx.level_ancestor_a(1, 5, 2).unwrap(), Some(1));
        assert_eq!(idx.level_ancestor_a(2, 4, 1).unwrap(), None);
        assert_eq!(idx.deg_a(2, 3).unwrap(), 2);
        assert_eq!(idx.deg_a(2, 1).unwrap(), 1);
        assert_eq!(idx.child_rank_a(2, 5).unwrap(), 2);
        assert_eq!(idx.child_rank_a(1, 6).unwrap(), 2);
        assert_eq!(idx.child_rank_a(2, 3).unwrap(), 1);
        assert_eq!(idx.child_select_a(2, 3, 2).unwrap(), Some(5));
        assert_eq!(idx.child_select_a(1, 1, 2).unwrap(), Some(6));
        assert_eq!(idx.postorder_rank_a(1, 3).unwrap(), 1);
        assert_eq!(idx.postorder_rank_a(2, 4).unwrap(), 2);
        assert_eq!(idx.postorder_rank_a(1, 1).unwrap(), 3);
        assert_eq!(idx.postorder_select_a(2, 3).unwrap(), 5);
        assert_eq!(idx.postorder_select_a(1, 2).unwrap(), 6);
    }

    #[test]
    fn v_set_and_intervals() {
        // single component for α = 1 at L = 8... but 8 > n_α = 3, so force
        // frequency with L = 2 and check the α = 1 macro tree pieces
        let idx = e1(2);
        let g1 = idx.merged_offset(1).unwrap();
        assert_eq!(g1, 2, "first frequent label's macro root follows T' root");
        let g2 = idx.merged_offset(2).unwrap();
        assert!(g2 > g1);
        // interval shares across each macro tree must cover [1, n_α] once
        for alpha in 1..=2u32 {
            let g = idx.merged_offset(alpha).unwrap();
            let w = idx.merged_tree().unwrap();
            let sub = w.skeleton().subtree_size_u(g);
            let mut shares: Vec<(usize, usize)> = Vec::new();
            for xp in g..g + sub {
                let (l1, r1, l2, r2) = idx.intervals_of(alpha, xp).unwrap();
                if l1 <= r1 {
                    shares.push((l1, r1));
                }
                if l2 <= r2 {
                    shares.push((l2, r2));
                }
            }
            shares.sort_unstable();
            let mut expect = 1usize;
            for (lo, hi) in shares {
                assert_eq!(lo, expect, "alpha {alpha}");
                expect = hi + 1;
            }
            assert_eq!(expect, 4, "alpha {alpha} covers 3 nodes");
        }
        // union of V-sets = all α-nodes, disjointly
        for alpha in 1..=2u32 {
            let g = idx.merged_offset(alpha).unwrap();
            let w = idx.merged_tree().unwrap();
            let sub = w.skeleton().subtree_size_u(g);
            let mut all: Vec<NodeId> = Vec::new();
            for xp in g..g + sub {
                all.extend(idx.v_set(alpha, xp).unwrap());
            }
            all.sort_unstable();
            let expect: Vec<NodeId> = (1..=6)
                .filter(|&v| E1_LABELS[v - 1] == alpha)
                .collect();
            assert_eq!(all, expect);
        }
    }

    #[test]
    fn map_node_fixture() {
        let idx = e1(2);
        // node 2 has no 1-descendants and is not a parent of a 1-node
        assert_eq!(idx.map_node(1, 2).unwrap(), None);
        // every α-node round-trips through its component's V-set
        for alpha in 1..=2u32 {
            for x in 1..=6usize {
                let maps = idx.map_node(alpha, x).unwrap();
                if E1_LABELS[x - 1] == alpha {
                    let (xp, _) = maps.expect("α-node is in T^α");
                    assert!(idx.v_set(alpha, xp).unwrap().contains(&x));
                }
            }
        }
    }

    #[test]
    fn sigma_clamping() {
        // σ > n: labels capped at n, queries beyond the stored alphabet are
        // answered as absent up to the declared σ
        let idx = LabeledTreeIndex::build("(()())", &[1, 3, 2], 100, &IndexConfig::default())
            .unwrap();
        assert_eq!(idx.sigma(), 100);
        assert_eq!(idx.preorder_rank_a(50, 3).unwrap(), 0);
        assert_eq!(idx.deg_a(50, 1).unwrap(), 0);
        assert!(idx.preorder_select_a(50, 1).is_err());
        assert!(idx.preorder_rank_a(101, 1).is_err());
        assert!(LabeledTreeIndex::build("(()())", &[1, 4, 2], 100, &IndexConfig::default())
            .is_err());
    }

    #[test]
    fn space_report_degenerate() {
        let idx = LabeledTreeIndex::build("()", &[1], 1, &IndexConfig::default()).unwrap();
        let rep = idx.space_report();
        assert!(rep.total_bits > 0);
        assert_eq!(rep.h0, 0.0);
    }

    #[test]
    fn input_round_trip() {
        let idx = e1(2);
        assert_eq!(
            idx.to_input_text(),
            "6 2\n(()(()())())\n1 2 1 2 2 1\n"
        );
    }
}
