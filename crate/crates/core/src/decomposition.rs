//! Tree covers with two-interval components and the quotient macro tree.
//!
//! [`decompose`] covers every edge of an `n`-node tree by subtree components
//! of at most `2L+1` nodes (the construction itself stays within `2L`). The
//! non-root nodes of each component occupy at most two preorder intervals
//! `I₁`, `I₂`; the *special node* sits at the end of `I₁` and is the single
//! point below which the component's subtree continues in other components.
//! Only component roots and special nodes appear in more than one component.
//!
//! The builder packs children subtrees greedily, bottom up. A subtree whose
//! interior contains no sealed component travels upward whole ("clean"); once
//! a node seals a group it travels upward alone and becomes the special node
//! of the group that finally absorbs it. A group accepts at most one such
//! gap-carrying item, which keeps the two-interval shape, and every edge is
//! covered exactly once because every child item lands in exactly one group
//! rooted at its parent.
//!
//! [`macro_tree`] forms the quotient: components are nodes, and the parent of
//! a component is the component whose special node equals its root (an extra
//! root component holding only the tree root is added when several components
//! share it).

use crate::bp_tree::OrdinalTree;
use crate::{Error, NodeId, Result};
use std::collections::HashMap;

/// One cover component: `root` plus the non-root preorder intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub root: NodeId,
    pub i1: (NodeId, NodeId),
    pub i2: Option<(NodeId, NodeId)>,
    pub special: NodeId,
}

impl Component {
    pub fn size(&self) -> usize {
        1 + (self.i1.1 - self.i1.0 + 1) + self.i2.map_or(0, |(lo, hi)| hi - lo + 1)
    }

    pub fn contains_nonroot(&self, x: NodeId) -> bool {
        (self.i1.0 <= x && x <= self.i1.1)
            || self.i2.map_or(false, |(lo, hi)| lo <= x && x <= hi)
    }

    /// Non-root nodes in preorder.
    pub fn nonroot_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (self.i1.0..=self.i1.1).chain(self.i2.map_or(1..=0, |(lo, hi)| lo..=hi))
    }
}

/// Cover of a tree for parameter `L`, components ordered by `I₁` start.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub l_param: usize,
    pub components: Vec<Component>,
    /// true for trees with no edges (n <= 1): the cover is empty
    pub degenerate: bool,
}

impl Decomposition {
    /// One line per component: "root special I1lo I1hi I2lo I2hi" (0 0 when
    /// I₂ is empty).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            let (l2, r2) = c.i2.unwrap_or((0, 0));
            out.push_str(&format!(
                "{} {} {} {} {} {}\n",
                c.root, c.special, c.i1.0, c.i1.1, l2, r2
            ));
        }
        out
    }
}

/// Flat children lists: children of `v` are `list[off[v-1]..off[v]]`,
/// in increasing preorder.
pub(crate) struct Kids {
    off: Vec<u32>,
    list: Vec<u32>,
}

impl Kids {
    pub(crate) fn of(&self, v: NodeId) -> &[u32] {
        &self.list[self.off[v - 1] as usize..self.off[v] as usize]
    }

    pub(crate) fn from_raw(off: Vec<u32>, list: Vec<u32>) -> Kids {
        Kids { off, list }
    }
}

/// Parent array, children lists and subtree sizes from a paren scan.
pub(crate) fn tree_arrays(t: &OrdinalTree) -> (Vec<u32>, Kids, Vec<u32>) {
    let n = t.len();
    let bp = t.parens();
    let mut parent = vec![0u32; n]; // 0 = no parent
    let mut size = vec![0u32; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut node = 0u32;
    for i in 0..2 * n {
        if bp.bit_u(i) {
            node += 1;
            if let Some(&p) = stack.last() {
                parent[(node - 1) as usize] = p;
            }
            stack.push(node);
        } else {
            // ids are preorder ranks: when v closes, `node` is the last id in
            // its subtree
            let v = stack.pop().expect("balanced parens");
            size[(v - 1) as usize] = node - v + 1;
        }
    }
    let mut deg = vec![0u32; n];
    for v in 2..=n {
        deg[(parent[v - 1] - 1) as usize] += 1;
    }
    let mut off = vec![0u32; n + 1];
    for v in 1..=n {
        off[v] = off[v - 1] + deg[v - 1];
    }
    let mut fill = off.clone();
    let mut list = vec![0u32; n.saturating_sub(1)];
    for v in 2..=n {
        let p = (parent[v - 1] - 1) as usize;
        list[fill[p] as usize] = v as u32;
        fill[p] += 1;
    }
    (parent, Kids { off, list }, size)
}

#[derive(Clone, Copy, Debug)]
struct Partial {
    root: u32,
    size: u32,
    /// deepest gap carrier: the node whose proper descendants are covered by
    /// already-sealed components
    marker: Option<u32>,
}

struct Frame {
    v: u32,
    next: u32,
    kid_end: u32,
    acc: Vec<Partial>,
    acc_size: u32,
    acc_marker: Option<u32>,
    sealed_any: bool,
}

fn seal(v: u32, items: &[Partial], marker: Option<u32>, size_of: &[u32], out: &mut Vec<Component>) {
    debug_assert!(!items.is_empty());
    let mut spans: Vec<(u32, u32)> = Vec::with_capacity(2);
    let push_span = |spans: &mut Vec<(u32, u32)>, lo: u32, hi: u32| {
        if let Some(last) = spans.last_mut() {
            if last.1 + 1 == lo {
                last.1 = hi;
                return;
            }
        }
        spans.push((lo, hi));
    };
    for p in items {
        match p.marker {
            None => push_span(&mut spans, p.root, p.root + p.size - 1),
            Some(m) => {
                push_span(&mut spans, p.root, m);
                let head = m - p.root + 1;
                if p.size > head {
                    let gap_end = m + size_of[(m - 1) as usize] - 1;
                    push_span(&mut spans, gap_end + 1, gap_end + (p.size - head));
                }
            }
        }
    }
    debug_assert!(
        spans.len() <= 2,
        "group of component {v} spans {spans:?}: two-interval shape violated"
    );
    let special = marker.unwrap_or(spans.last().unwrap().1);
    debug_assert!(marker.is_none() || spans[0].1 == special);
    out.push(Component {
        root: v as NodeId,
        i1: (spans[0].0 as NodeId, spans[0].1 as NodeId),
        i2: spans.get(1).map(|&(lo, hi)| (lo as NodeId, hi as NodeId)),
        special: special as NodeId,
    });
}

pub(crate) fn decompose_arrays(kids: &Kids, size: &[u32], l_param: usize) -> Vec<Component> {
    let n = size.len();
    let mut comps: Vec<Component> = Vec::new();
    if n < 2 {
        return comps;
    }
    let l = l_param.max(1) as u32;
    let mut frames: Vec<Frame> = Vec::with_capacity(64);
    frames.push(Frame {
        v: 1,
        next: kids.off[0],
        kid_end: kids.off[1],
        acc: Vec::new(),
        acc_size: 0,
        acc_marker: None,
        sealed_any: false,
    });
    let mut delivered: Option<Partial> = None;
    loop {
        let f = frames.last_mut().expect("nonempty frame stack");
        if let Some(p) = delivered.take() {
            if p.marker.is_some() {
                if f.acc_marker.is_some() {
                    // a group carries at most one gap: flush before the second
                    seal(f.v, &f.acc, f.acc_marker, size, &mut comps);
                    f.acc.clear();
                    f.acc_size = 0;
                    f.acc_marker = None;
                    f.sealed_any = true;
                }
                f.acc_marker = p.marker;
            }
            f.acc.push(p);
            f.acc_size += p.size;
            if f.acc_size >= l {
                seal(f.v, &f.acc, f.acc_marker, size, &mut comps);
                f.acc.clear();
                f.acc_size = 0;
                f.acc_marker = None;
                f.sealed_any = true;
            }
        }
        if f.next < f.kid_end {
            let c = kids.list[f.next as usize];
            f.next += 1;
            frames.push(Frame {
                v: c,
                next: kids.off[(c - 1) as usize],
                kid_end: kids.off[c as usize],
                acc: Vec::new(),
                acc_size: 0,
                acc_marker: None,
                sealed_any: false,
            });
            continue;
        }
        let f = frames.pop().unwrap();
        if frames.is_empty() {
            // the root seals any leftover; a bare single-root group is dropped
            if !f.acc.is_empty() {
                seal(f.v, &f.acc, f.acc_marker, size, &mut comps);
            }
            break;
        }
        delivered = Some(if f.sealed_any {
            if !f.acc.is_empty() {
                seal(f.v, &f.acc, f.acc_marker, size, &mut comps);
            }
            Partial {
                root: f.v,
                size: 1,
                marker: Some(f.v),
            }
        } else {
            Partial {
                root: f.v,
                size: 1 + f.acc_size,
                marker: f.acc_marker,
            }
        });
    }
    comps.sort_by_key(|c| c.i1.0);
    comps
}

/// Cover the tree with components of at most `2L+1` nodes satisfying the
/// two-interval and sharing properties. Trees with fewer than two nodes have
/// no edges and produce an empty, degenerate cover.
pub fn decompose(t: &OrdinalTree, l_param: usize) -> Result<Decomposition> {
    if l_param == 0 {
        return Err(Error::Invalid("decomposition parameter L must be >= 1".into()));
    }
    let n = t.len();
    if n < 2 {
        return Ok(Decomposition {
            l_param,
            components: Vec::new(),
            degenerate: true,
        });
    }
    let (_, kids, size) = tree_arrays(t);
    Ok(Decomposition {
        l_param,
        components: decompose_arrays(&kids, &size, l_param),
        degenerate: false,
    })
}

/// Quotient tree over the components of `d`.
#[derive(Clone, Debug)]
pub struct MacroTree {
    pub quotient: OrdinalTree,
    /// component index for each macro node (preorder id - 1); u32::MAX marks
    /// the extra root component
    comp_of_macro: Vec<u32>,
    /// macro node id for each component index
    macro_of_comp: Vec<u32>,
    pub extra_root: bool,
}

impl MacroTree {
    pub fn macro_of(&self, comp_idx: usize) -> NodeId {
        self.macro_of_comp[comp_idx] as NodeId
    }

    /// Component index of a macro node; None for the extra root component.
    pub fn comp_of(&self, macro_id: NodeId) -> Option<usize> {
        let v = self.comp_of_macro[macro_id - 1];
        (v != u32::MAX).then_some(v as usize)
    }

    pub fn len(&self) -> usize {
        self.quotient.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotient.is_empty()
    }
}

/// Build the macro tree of a decomposition: `x'` is the parent of `y'` iff
/// the root of `y'` is the special node of `x'`; when several components
/// contain the tree root, an extra component holding only the root is added.
pub fn macro_tree(t: &OrdinalTree, d: &Decomposition) -> Result<MacroTree> {
    let _ = t;
    macro_from_components(&d.components)
}

pub(crate) fn macro_from_components(comps: &[Component]) -> Result<MacroTree> {
    if comps.is_empty() {
        return Err(Error::Invalid("macro tree of an empty decomposition".into()));
    }
    let mut by_special: HashMap<u32, u32> = HashMap::with_capacity(comps.len());
    for (k, c) in comps.iter().enumerate() {
        if by_special.insert(c.special as u32, k as u32).is_some() {
            return Err(Error::Invalid(format!(
                "special node {} claimed by two components",
                c.special
            )));
        }
    }
    let root_node = comps.iter().map(|c| c.root).min().unwrap();
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); comps.len()];
    let mut top: Vec<u32> = Vec::new();
    for (k, c) in comps.iter().enumerate() {
        if c.root == root_node {
            top.push(k as u32);
        } else {
            match by_special.get(&(c.root as u32)) {
                Some(&p) => children[p as usize].push(k as u32),
                None => {
                    return Err(Error::Invalid(format!(
                        "component rooted at {} has no parent component",
                        c.root
                    )))
                }
            }
        }
    }
    // components are sorted by interval start, so child lists are too
    let extra_root = top.len() > 1;
    let mut parens: Vec<bool> = Vec::with_capacity(2 * (comps.len() + 1));
    let mut comp_of_macro: Vec<u32> = Vec::new();
    let mut macro_of_comp = vec![0u32; comps.len()];
    // iterative DFS over (comp index or extra root, child cursor)
    enum Item {
        Open(u32),
        Close,
    }
    let mut stack: Vec<Item> = Vec::new();
    if extra_root {
        parens.push(true);
        comp_of_macro.push(u32::MAX);
        stack.push(Item::Close);
        for &k in top.iter().rev() {
            stack.push(Item::Open(k));
        }
    } else {
        stack.push(Item::Open(top[0]));
    }
    while let Some(item) = stack.pop() {
        match item {
            Item::Open(k) => {
                parens.push(true);
                macro_of_comp[k as usize] = comp_of_macro.len() as u32 + 1;
                comp_of_macro.push(k);
                stack.push(Item::Close);
                for &c in children[k as usize].iter().rev() {
                    stack.push(Item::Open(c));
                }
            }
            Item::Close => parens.push(false),
        }
    }
    if comp_of_macro.len() != comps.len() + extra_root as usize {
        return Err(Error::Invalid("cyclic component parent relation".into()));
    }
    let quotient = OrdinalTree::from_bits(&parens)?;
    Ok(MacroTree {
        quotient,
        comp_of_macro,
        macro_of_comp,
        extra_root,
    })
}

/// Per-property verification report.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    /// every edge covered by exactly one component
    pub edge_cover: bool,
    /// every component has at most 2L+1 nodes
    pub size_bound: bool,
    /// component count <= max(1, C_max·n/L)
    pub count_bound: bool,
    /// non-root nodes form I₁ ∪ I₂, connected, special convention holds
    pub intervals: bool,
    /// only roots and special nodes are shared
    pub sharing: bool,
    pub component_count: usize,
    /// count·L/n
    pub count_ratio: f64,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.edge_cover && self.size_bound && self.count_bound && self.intervals && self.sharing
    }
}

/// Check the five cover properties of `d` against `t`.
pub fn verify_decomposition(t: &OrdinalTree, d: &Decomposition, c_max: f64) -> VerifyReport {
    let n = t.len();
    let l = d.l_param.max(1);
    let comps = &d.components;
    let mut failures = Vec::new();

    let (parent, _, _) = tree_arrays(t);
    let in_comp = |c: &Component, x: NodeId| x == c.root || c.contains_nonroot(x);

    // P1 + connectivity: each non-root node's parent lies in the component,
    // and every non-root node of the tree is a non-root member exactly once.
    let mut edge_cover = true;
    let mut nonroot_seen = vec![0u32; n + 1];
    for (k, c) in comps.iter().enumerate() {
        for x in c.nonroot_nodes() {
            if x > n {
                edge_cover = false;
                failures.push(format!("component {k} lists node {x} beyond n={n}"));
                continue;
            }
            nonroot_seen[x] += 1;
            let p = parent[x - 1] as NodeId;
            if p == 0 || !in_comp(c, p) {
                edge_cover = false;
                failures.push(format!(
                    "component {k}: parent {p} of member {x} is outside the component"
                ));
            }
        }
    }
    if !d.degenerate {
        for x in 2..=n {
            if nonroot_seen[x] != 1 {
                edge_cover = false;
                failures.push(format!(
                    "node {x} is a non-root member of {} components",
                    nonroot_seen[x]
                ));
            }
        }
        if nonroot_seen[1] != 0 {
            edge_cover = false;
            failures.push("tree root appears as a non-root member".into());
        }
    }

    // P2
    let mut size_bound = true;
    for (k, c) in comps.iter().enumerate() {
        if c.size() > 2 * l + 1 {
            size_bound = false;
            failures.push(format!("component {k} has {} nodes > 2L+1", c.size()));
        }
    }

    // P3
    let count = comps.len();
    let bound = (c_max * n as f64 / l as f64).max(1.0);
    let count_bound = (count as f64) <= bound;
    if !count_bound {
        failures.push(format!("{count} components exceed {bound:.2}"));
    }

    // P4: interval ordering and the special-node convention
    let mut intervals = true;
    for (k, c) in comps.iter().enumerate() {
        if c.i1.0 > c.i1.1 || c.root >= c.i1.0 {
            intervals = false;
            failures.push(format!("component {k}: malformed I1"));
        }
        if let Some((lo, hi)) = c.i2 {
            if lo > hi || lo <= c.i1.1 + 1 {
                // I2 must start strictly beyond I1 with a gap in between
                intervals = false;
                failures.push(format!("component {k}: malformed I2"));
            }
        }
        let expected_special = c.i1.1; // = min(max I1, max I2) when I2 exists
        if c.special != expected_special {
            intervals = false;
            failures.push(format!(
                "component {k}: special {} != end of I1 {}",
                c.special, expected_special
            ));
        }
    }

    // P5: shared nodes are roots everywhere and specials at their single
    // non-root occurrence
    let mut sharing = true;
    if !d.degenerate {
        let mut root_count = vec![0u32; n + 1];
        for c in comps {
            root_count[c.root] += 1;
        }
        for (k, c) in comps.iter().enumerate() {
            for x in c.nonroot_nodes() {
                if x <= n && root_count[x] > 0 && c.special != x {
                    sharing = false;
                    failures.push(format!(
                        "component {k}: non-special member {x} is also a component root"
                    ));
                }
            }
        }
    }

    VerifyReport {
        edge_cover,
        size_bound,
        count_bound,
        intervals,
        sharing,
        component_count: count,
        count_ratio: if n > 0 {
            count as f64 * l as f64 / n as f64
        } else {
            0.0
        },
        failures,
    }
}
