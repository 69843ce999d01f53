//! Ordinal trees with `s` per-node weight functions in `[0, X-1]`.
//!
//! Conceptually the tree is the tuple string `P` of length `2n` where
//! `P[i] = (w₁(v), …, w_s(v), BP[i])` for the node `v` owning paren `i`.
//! Queries reduce to base operations over step functions of `P`:
//!
//! - `φ(a,b)` maps a tuple to coordinate `a` on opens and `b` on closes,
//! - `π(a)` maps to `+w_a` on opens and `-w_a` on closes,
//! - `ε` maps to `+1`/`-1` (plain paren excess),
//!
//! with index 0 denoting the constant-zero weight. Prefix sums of `φ`
//! functions are nondecreasing, so their sum/search/argmax queries resolve by
//! binary search over strided cumulative tables in node order (opens follow
//! preorder) and close order (closes follow postorder). `π` and `ε` carry a
//! per-block directory of prefix totals and in-block minima/maxima; axes
//! without a directory fall back to linear scans with identical answers.
//!
//! The weighted child queries scan the children of a node and switch to a
//! per-node cumulative directory when the degree exceeds the block size.

use crate::bitvec::PackedIntVec;
use crate::bp_tree::OrdinalTree;
use crate::{Error, NodeId, Result};
use std::collections::HashMap;

/// Step function over the tuple string; weight index 0 is the zero weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepFunction {
    /// +1 on opens, -1 on closes.
    Eps,
    /// +w_a on opens, -w_a on closes.
    Pi(usize),
    /// w_a on opens, w_b on closes.
    Phi(usize, usize),
}

/// Build options: block size and which axes get search directories.
#[derive(Clone, Debug)]
pub struct WtOptions {
    /// block size for directories and cumulative strides
    pub block: usize,
    /// φ pairs the caller will query; the close side of each pair is
    /// materialized in close order
    pub phi_pairs: Vec<(usize, usize)>,
    /// π axes that get forward/backward search directories
    pub pi_axes: Vec<usize>,
}

impl Default for WtOptions {
    fn default() -> Self {
        WtOptions {
            block: 512,
            phi_pairs: Vec::new(),
            pi_axes: Vec::new(),
        }
    }
}

/// Per-block directory for a ±-valued axis: prefix value at each block end
/// plus min/max prefix within the block.
#[derive(Clone, Debug, Default)]
struct PiDir {
    pref_end: Vec<i64>,
    amin: Vec<i64>,
    amax: Vec<i64>,
}

#[derive(Clone, Debug)]
struct ChildDir {
    children: Vec<u32>,
    /// (deg+1) × s cumulative weights: cum[i*s + a-1] = Σ w_a over first i children
    cum: Vec<u64>,
}

/// Weighted ordinal tree; immutable after build.
#[derive(Clone, Debug)]
pub struct WeightedTree {
    skel: OrdinalTree,
    s: usize,
    x_bound: u64,
    block: usize,
    /// per axis, node order (index = node id - 1)
    weights: Vec<PackedIntVec>,
    /// per axis, close (postorder) order; only materialized axes
    close_w: Vec<Option<PackedIntVec>>,
    /// per axis: strided Σ w_a over node ids, open_cum[a][k] covers nodes 1..=k·block
    open_cum: Vec<Vec<u64>>,
    /// per axis: strided Σ w_a over close ranks
    close_cum: Vec<Vec<u64>>,
    /// slot 0 = ε, slot a = π(a)
    pi_dirs: Vec<Option<PiDir>>,
    child_dirs: HashMap<u32, ChildDir>,
    phi_pairs: Vec<(usize, usize)>,
}

impl WeightedTree {
    /// Build with full query machinery on every axis.
    pub fn new(skeleton: OrdinalTree, weights: Vec<Vec<u64>>, x_bound: u64) -> Result<WeightedTree> {
        let s = weights.len();
        let opts = WtOptions {
            block: 512,
            phi_pairs: (0..=s).flat_map(|a| (0..=s).map(move |b| (a, b))).collect(),
            pi_axes: (1..=s).collect(),
        };
        Self::with_options(skeleton, weights, x_bound, opts)
    }

    pub fn with_options(
        skeleton: OrdinalTree,
        weights: Vec<Vec<u64>>,
        x_bound: u64,
        opts: WtOptions,
    ) -> Result<WeightedTree> {
        let s = weights.len();
        if s == 0 {
            return Err(Error::Invalid("at least one weight function required".into()));
        }
        let n = skeleton.len();
        let block = opts.block.max(16);
        for ws in &weights {
            if ws.len() != n {
                return Err(Error::Invalid(format!(
                    "weight sequence length {} does not match node count {n}",
                    ws.len()
                )));
            }
            for &w in ws {
                if w >= x_bound {
                    return Err(Error::WeightOutOfRange {
                        value: w,
                        bound: x_bound,
                    });
                }
            }
        }
        for &(a, b) in &opts.phi_pairs {
            if a > s || b > s {
                return Err(Error::OutOfRange {
                    what: "phi weight index",
                    got: a.max(b),
                    limit: s,
                });
            }
        }
        for &a in &opts.pi_axes {
            if a == 0 || a > s {
                return Err(Error::OutOfRange {
                    what: "pi weight index",
                    got: a,
                    limit: s,
                });
            }
        }

        let width = PackedIntVec::width_for(x_bound.saturating_sub(1));
        let packed: Vec<PackedIntVec> = weights
            .iter()
            .map(|ws| {
                let mut p = PackedIntVec::with_width(width);
                for &w in ws {
                    p.push(w);
                }
                p
            })
            .collect();

        // close (postorder) node sequence and children lists in one stack pass
        let mut close_nodes: Vec<u32> = Vec::with_capacity(n);
        let mut kids: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        {
            let bp = skeleton.parens();
            let mut stack: Vec<u32> = Vec::new();
            let mut node = 0u32;
            for i in 0..2 * n {
                if bp.bit_u(i) {
                    node += 1;
                    if let Some(&p) = stack.last() {
                        kids[p as usize].push(node);
                    }
                    stack.push(node);
                } else {
                    close_nodes.push(stack.pop().expect("balanced parens"));
                }
            }
        }

        let mut close_axes = vec![false; s + 1];
        for &a in &opts.pi_axes {
            close_axes[a] = true;
        }
        for &(_, b) in &opts.phi_pairs {
            if b > 0 {
                close_axes[b] = true;
            }
        }
        let close_w: Vec<Option<PackedIntVec>> = (1..=s)
            .map(|a| {
                close_axes[a].then(|| {
                    let mut p = PackedIntVec::with_width(width);
                    for &v in &close_nodes {
                        p.push(weights[a - 1][(v - 1) as usize]);
                    }
                    p
                })
            })
            .collect();

        let mut open_cum = vec![vec![0u64]; s];
        let mut close_cum = vec![vec![0u64]; s];
        for a in 0..s {
            let mut so = 0u64;
            let mut sc = 0u64;
            for k in 0..n {
                so += weights[a][k];
                sc += weights[a][(close_nodes[k] - 1) as usize];
                if (k + 1) % block == 0 {
                    open_cum[a].push(so);
                    close_cum[a].push(sc);
                }
            }
        }

        // directories for ε (slot 0) and requested π axes
        let mut pi_dirs: Vec<Option<PiDir>> = vec![None; s + 1];
        pi_dirs[0] = Some(PiDir::default());
        for &a in &opts.pi_axes {
            pi_dirs[a] = Some(PiDir::default());
        }
        if n > 0 {
            let bp = skeleton.parens();
            let axes: Vec<usize> = (0..=s).filter(|&a| pi_dirs[a].is_some()).collect();
            let mut pref: Vec<i64> = vec![0; axes.len()];
            let mut mins: Vec<i64> = vec![i64::MAX; axes.len()];
            let mut maxs: Vec<i64> = vec![i64::MIN; axes.len()];
            let mut node = 0usize;
            let mut close_rank = 0usize;
            for i in 0..2 * n {
                let open = bp.bit_u(i);
                let v = if open {
                    node += 1;
                    node
                } else {
                    close_rank += 1;
                    close_nodes[close_rank - 1] as usize
                };
                for (ai, &a) in axes.iter().enumerate() {
                    let w = if a == 0 { 1 } else { weights[a - 1][v - 1] as i64 };
                    pref[ai] += if open { w } else { -w };
                    mins[ai] = mins[ai].min(pref[ai]);
                    maxs[ai] = maxs[ai].max(pref[ai]);
                }
                if (i + 1) % block == 0 || i + 1 == 2 * n {
                    for (ai, &a) in axes.iter().enumerate() {
                        let d = pi_dirs[a].as_mut().unwrap();
                        d.pref_end.push(pref[ai]);
                        d.amin.push(mins[ai]);
                        d.amax.push(maxs[ai]);
                        mins[ai] = i64::MAX;
                        maxs[ai] = i64::MIN;
                    }
                }
            }
        }

        // cumulative child-weight directories for high-degree nodes
        let mut child_dirs = HashMap::new();
        for (v, ks) in kids.into_iter().enumerate() {
            if ks.len() > block {
                let mut cum = vec![0u64; (ks.len() + 1) * s];
                for (i, &c) in ks.iter().enumerate() {
                    for a in 0..s {
                        cum[(i + 1) * s + a] = cum[i * s + a] + weights[a][(c - 1) as usize];
                    }
                }
                child_dirs.insert(v as u32, ChildDir { children: ks, cum });
            }
        }

        Ok(WeightedTree {
            skel: skeleton,
            s,
            x_bound,
            block,
            weights: packed,
            close_w,
            open_cum,
            close_cum,
            pi_dirs,
            child_dirs,
            phi_pairs: opts.phi_pairs,
        })
    }

    pub fn skeleton(&self) -> &OrdinalTree {
        &self.skel
    }

    pub fn num_weights(&self) -> usize {
        self.s
    }

    pub fn weight_bound(&self) -> u64 {
        self.x_bound
    }

    pub fn len(&self) -> usize {
        self.skel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.skel.is_empty()
    }

    pub fn size_bits(&self) -> usize {
        let mut bits = self.skel.size_bits();
        for p in &self.weights {
            bits += p.size_bits();
        }
        for p in self.close_w.iter().flatten() {
            bits += p.size_bits();
        }
        for c in self.open_cum.iter().chain(self.close_cum.iter()) {
            bits += c.len() * 64;
        }
        for d in self.pi_dirs.iter().flatten() {
            bits += (d.pref_end.len() + d.amin.len() + d.amax.len()) * 64;
        }
        for d in self.child_dirs.values() {
            bits += d.children.len() * 32 + d.cum.len() * 64 + 64;
        }
        bits + 256
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

    fn check_axis(&self, a: usize, zero_ok: bool) -> Result<()> {
        if a > self.s || (a == 0 && !zero_ok) {
            return Err(Error::OutOfRange {
                what: "weight index",
                got: a,
                limit: self.s,
            });
        }
        Ok(())
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > 2 * self.len() {
            return Err(Error::OutOfRange {
                what: "paren position",
                got: i,
                limit: 2 * self.len(),
            });
        }
        Ok(())
    }

    fn check_fn(&self, f: StepFunction) -> Result<()> {
        match f {
            StepFunction::Eps => Ok(()),
            StepFunction::Pi(a) => self.check_axis(a, true),
            StepFunction::Phi(a, b) => {
                self.check_axis(a, true)?;
                self.check_axis(b, true)
            }
        }
    }

    // --- weight primitives ---

    #[inline]
    pub(crate) fn weight_u(&self, a: usize, x: NodeId) -> u64 {
        if a == 0 {
            0
        } else {
            self.weights[a - 1].get(x - 1)
        }
    }

    /// Σ w_a over nodes 1..=k (preorder prefix).
    #[inline]
    fn open_prefix(&self, a: usize, k: usize) -> u64 {
        if a == 0 || k == 0 {
            return 0;
        }
        let w = &self.weights[a - 1];
        let st = k / self.block;
        let mut sum = self.open_cum[a - 1][st];
        for idx in st * self.block..k {
            sum += w.get(idx);
        }
        sum
    }

    /// Σ w_a over the first k closes (postorder prefix).
    #[inline]
    fn close_prefix(&self, a: usize, k: usize) -> u64 {
        if a == 0 || k == 0 {
            return 0;
        }
        let st = k / self.block;
        let mut sum = self.close_cum[a - 1][st];
        match &self.close_w[a - 1] {
            Some(w) => {
                for idx in st * self.block..k {
                    sum += w.get(idx);
                }
            }
            None => {
                // slow path for axes without materialized close order
                let bp = self.skel.parens();
                for idx in st * self.block..k {
                    let pos = bp.select0_u(idx + 1) + 1;
                    let v = self.skel.node_at_u(pos);
                    sum += self.weights[a - 1].get(v - 1);
                }
            }
        }
        sum
    }

    /// Prefix value Σ_{k<=i} f(P[k]); `i` may be 0.
    #[inline]
    fn pref(&self, f: StepFunction, i: usize) -> i64 {
        let bp = self.skel.parens();
        match f {
            StepFunction::Eps => self.skel.excess_u(i),
            StepFunction::Pi(a) => {
                let o = bp.rank1_u(i);
                self.open_prefix(a, o) as i64 - self.close_prefix(a, i - o) as i64
            }
            StepFunction::Phi(a, b) => {
                let o = bp.rank1_u(i);
                (self.open_prefix(a, o) + self.close_prefix(b, i - o)) as i64
            }
        }
    }

    /// value of f at position i
    #[inline]
    fn value_at(&self, f: StepFunction, i: usize) -> i64 {
        let open = self.skel.parens().bit_u(i - 1);
        match f {
            StepFunction::Eps => {
                if open {
                    1
                } else {
                    -1
                }
            }
            StepFunction::Pi(a) => {
                let w = self.weight_u(a, self.skel.node_at_u(i)) as i64;
                if open {
                    w
                } else {
                    -w
                }
            }
            StepFunction::Phi(a, b) => {
                self.weight_u(if open { a } else { b }, self.skel.node_at_u(i)) as i64
            }
        }
    }

    // --- base queries over P ---

    /// Σ_{k=i}^{j} f(P[k]).
    pub fn base_sum(&self, f: StepFunction, i: usize, j: usize) -> Result<i64> {
        self.check_fn(f)?;
        self.check_pos(i)?;
        self.check_pos(j)?;
        if i > j {
            return Err(Error::Invalid(format!("empty sum range [{i},{j}]")));
        }
        Ok(self.pref(f, j) - self.pref(f, i - 1))
    }

    /// min { j >= i : Sum(P,f,i,j) >= d }, or NONE.
    pub fn base_fwd_search(&self, f: StepFunction, i: usize, d: i64) -> Result<Option<usize>> {
        self.check_fn(f)?;
        self.check_pos(i)?;
        Ok(self.fwd_search_u(f, i, d))
    }

    pub(crate) fn fwd_search_u(&self, f: StepFunction, i: usize, d: i64) -> Option<usize> {
        let len = 2 * self.len();
        let t = self.pref(f, i - 1) + d;
        if let StepFunction::Phi(..) = f {
            // nondecreasing prefix: binary search smallest j in [i, len] with pref >= t
            if self.pref(f, len) < t {
                return None;
            }
            let (mut lo, mut hi) = (i, len);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if self.pref(f, mid) >= t {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Some(lo);
        }
        let dir = match f {
            StepFunction::Eps => self.pi_dirs[0].as_ref(),
            StepFunction::Pi(a) => {
                if a == 0 {
                    return if d <= 0 { Some(i) } else { None };
                }
                self.pi_dirs[a].as_ref()
            }
            _ => unreachable!(),
        };
        // scan the partial block, then whole blocks via the directory
        let first_block = (i - 1) / self.block;
        let mut e = self.pref(f, i - 1);
        let mut pos = i;
        let block_end = ((first_block + 1) * self.block).min(len);
        while pos <= block_end {
            e += self.value_at(f, pos);
            if e >= t {
                return Some(pos);
            }
            pos += 1;
        }
        match dir {
            Some(dir) => {
                let mut b = first_block + 1;
                while b * self.block < len {
                    if dir.amax[b] >= t {
                        let mut e = dir.pref_end[b - 1];
                        let bend = ((b + 1) * self.block).min(len);
                        for p in (b * self.block + 1)..=bend {
                            e += self.value_at(f, p);
                            if e >= t {
                                return Some(p);
                            }
                        }
                        unreachable!("block directory promised a hit");
                    }
                    b += 1;
                }
                None
            }
            None => {
                while pos <= len {
                    e += self.value_at(f, pos);
                    if e >= t {
                        return Some(pos);
                    }
                    pos += 1;
                }
                None
            }
        }
    }

    /// max { j <= i : Sum(P,f,j,i) >= d }, or NONE.
    pub fn base_bwd_search(&self, f: StepFunction, i: usize, d: i64) -> Result<Option<usize>> {
        self.check_fn(f)?;
        self.check_pos(i)?;
        Ok(self.bwd_search_u(f, i, d))
    }

    pub(crate) fn bwd_search_u(&self, f: StepFunction, i: usize, d: i64) -> Option<usize> {
        // Sum(j..i) >= d  <=>  pref(j-1) <= pref(i) - d; maximize j
        let t = self.pref(f, i) - d;
        match f {
            StepFunction::Phi(..) => {
                if 0 > t {
                    return None;
                }
                // nondecreasing prefix: largest k in [0, i-1] with pref(k) <= t
                let (mut lo, mut hi) = (0usize, i - 1);
                while lo < hi {
                    let mid = lo + (hi - lo + 1) / 2;
                    if self.pref(f, mid) <= t {
                        lo = mid;
                    } else {
                        hi = mid - 1;
                    }
                }
                if self.pref(f, lo) <= t {
                    Some(lo + 1)
                } else {
                    None
                }
            }
            StepFunction::Eps => self.skel.bwd_excess_leq(i - 1, t).map(|k| k + 1),
            StepFunction::Pi(a) => {
                if a == 0 {
                    return if d <= 0 { Some(i) } else { None };
                }
                let dir = self.pi_dirs[a].as_ref();
                // scan positions k = i-1 down to 0 for pref(k) <= t
                let last_block = (i - 1) / self.block;
                let mut e = self.pref(f, i);
                let mut k = i; // invariant: e = pref(k)
                let block_start = last_block * self.block;
                while k > block_start {
                    e -= self.value_at(f, k);
                    k -= 1;
                    if e <= t {
                        return Some(k + 1);
                    }
                }
                match dir {
                    Some(dir) => {
                        let mut b = last_block;
                        while b > 0 {
                            b -= 1;
                            if dir.amin[b] <= t || dir.pref_end[b] <= t {
                                let mut e = dir.pref_end[b];
                                let mut k = (b + 1) * self.block;
                                if e <= t {
                                    return Some(k + 1);
                                }
                                while k > b * self.block {
                                    e -= self.value_at(f, k);
                                    k -= 1;
                                    if e <= t {
                                        return Some(k + 1);
                                    }
                                }
                                unreachable!("block directory promised a hit");
                            }
                        }
                        if 0 <= t {
                            Some(1)
                        } else {
                            None
                        }
                    }
                    None => {
                        while k > 0 {
                            e -= self.value_at(f, k);
                            k -= 1;
                            if e <= t {
                                return Some(k + 1);
                            }
                        }
                        None
                    }
                }
            }
        }
    }

    /// Leftmost argmax of prefix sums over positions in `[i, j]`.
    pub fn base_rmqi(&self, f: StepFunction, i: usize, j: usize) -> Result<usize> {
        self.check_fn(f)?;
        self.check_pos(i)?;
        self.check_pos(j)?;
        if i > j {
            return Err(Error::Invalid(format!("empty rmq range [{i},{j}]")));
        }
        if let StepFunction::Phi(..) = f {
            // nondecreasing prefix: leftmost position reaching pref(j)
            let t = self.pref(f, j);
            let (mut lo, mut hi) = (i, j);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if self.pref(f, mid) >= t {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Ok(lo);
        }
        if let StepFunction::Pi(0) = f {
            return Ok(i);
        }
        let dir = match f {
            StepFunction::Eps => self.pi_dirs[0].as_ref(),
            StepFunction::Pi(a) => self.pi_dirs[a].as_ref(),
            _ => unreachable!(),
        };
        let mut best_val = i64::MIN;
        let mut best_pos = i;
        let scan = |from: usize, to: usize, entry: i64, best_val: &mut i64, best_pos: &mut usize| {
            let mut e = entry;
            for p in from..=to {
                e += self.value_at(f, p);
                if e > *best_val {
                    *best_val = e;
                    *best_pos = p;
                }
            }
        };
        let bi = (i - 1) / self.block;
        let bj = (j - 1) / self.block;
        if bi == bj || dir.is_none() {
            scan(i, j, self.pref(f, i - 1), &mut best_val, &mut best_pos);
            return Ok(best_pos);
        }
        let dir = dir.unwrap();
        scan(
            i,
            (bi + 1) * self.block,
            self.pref(f, i - 1),
            &mut best_val,
            &mut best_pos,
        );
        for b in (bi + 1)..bj {
            if dir.amax[b] > best_val {
                scan(
                    b * self.block + 1,
                    (b + 1) * self.block,
                    dir.pref_end[b - 1],
                    &mut best_val,
                    &mut best_pos,
                );
            }
        }
        scan(
            bj * self.block + 1,
            j,
            dir.pref_end[bj - 1],
            &mut best_val,
            &mut best_pos,
        );
        Ok(best_pos)
    }

    // --- weighted tree queries ---

    /// The w_a-weight of `x`.
    pub fn weight_of(&self, a: usize, x: NodeId) -> Result<u64> {
        self.check_axis(a, false)?;
        self.check_node(x)?;
        Ok(self.weight_u(a, x))
    }

    /// Σ w_a over the root-to-x path, inclusive.
    pub fn wdepth(&self, a: usize, x: NodeId) -> Result<i64> {
        self.check_axis(a, true)?;
        self.check_node(x)?;
        Ok(self.wdepth_u(a, x))
    }

    #[inline]
    pub(crate) fn wdepth_u(&self, a: usize, x: NodeId) -> i64 {
        self.pref(StepFunction::Pi(a), self.skel.open_u(x))
    }

    /// Lowest ancestor `y` of `x` whose path weight down to `x` (excluding
    /// `x`) is at least `i`.
    pub fn wlevel_ancestor(&self, a: usize, x: NodeId, i: i64) -> Result<Option<NodeId>> {
        self.check_axis(a, true)?;
        self.check_node(x)?;
        if i < 1 {
            return Err(Error::Invalid("weighted ancestor threshold must be >= 1".into()));
        }
        Ok(self.wlevel_ancestor_u(a, x, i))
    }

    pub(crate) fn wlevel_ancestor_u(&self, a: usize, x: NodeId, i: i64) -> Option<NodeId> {
        let open = self.skel.open_u(x);
        if open == 1 {
            return None; // the root has no proper ancestors
        }
        let j = self.bwd_search_u(StepFunction::Pi(a), open - 1, i)?;
        debug_assert!(
            self.skel.parens().bit_u(j - 1),
            "weighted ancestor search must land on an open paren"
        );
        Some(self.skel.node_at_u(j))
    }

    /// `wlevel_ancestor(a, x, 1)`.
    pub fn wparent(&self, a: usize, x: NodeId) -> Result<Option<NodeId>> {
        self.wlevel_ancestor(a, x, 1)
    }

    /// Σ w_a over the children of `x`.
    pub fn wdeg(&self, a: usize, x: NodeId) -> Result<u64> {
        self.check_axis(a, true)?;
        self.check_node(x)?;
        Ok(self.wdeg_u(a, x))
    }

    pub(crate) fn wdeg_u(&self, a: usize, x: NodeId) -> u64 {
        if let Some(d) = self.child_dirs.get(&(x as u32)) {
            if a == 0 {
                return 0;
            }
            return d.cum[d.children.len() * self.s + a - 1];
        }
        self.skel.children_u(x).map(|c| self.weight_u(a, c)).sum()
    }

    /// Σ w_a over `x` and its left siblings; the root reports `w_a(root)`.
    pub fn wchild_rank(&self, a: usize, x: NodeId) -> Result<u64> {
        self.check_axis(a, true)?;
        self.check_node(x)?;
        Ok(self.wchild_rank_u(a, x))
    }

    pub(crate) fn wchild_rank_u(&self, a: usize, x: NodeId) -> u64 {
        match self.skel.parent_u(x) {
            None => self.weight_u(a, x),
            Some(p) => {
                if let Some(d) = self.child_dirs.get(&(p as u32)) {
                    if a == 0 {
                        return 0;
                    }
                    let i = d
                        .children
                        .binary_search(&(x as u32))
                        .expect("child listed under its parent");
                    return d.cum[(i + 1) * self.s + a - 1];
                }
                let mut sum = 0;
                for c in self.skel.children_u(p) {
                    sum += self.weight_u(a, c);
                    if c == x {
                        break;
                    }
                }
                sum
            }
        }
    }

    /// Leftmost child `y` of `x` with `wchild_rank(a, y) >= i`, or NONE.
    pub fn wchild_select(&self, a: usize, x: NodeId, i: u64) -> Result<Option<NodeId>> {
        self.check_axis(a, true)?;
        self.check_node(x)?;
        if i < 1 {
            return Err(Error::Invalid("weighted child rank must be >= 1".into()));
        }
        Ok(self.wchild_select_u(a, x, i))
    }

    pub(crate) fn wchild_select_u(&self, a: usize, x: NodeId, i: u64) -> Option<NodeId> {
        if let Some(d) = self.child_dirs.get(&(x as u32)) {
            if a == 0 {
                return None;
            }
            let total = d.cum[d.children.len() * self.s + a - 1];
            if total < i {
                return None;
            }
            let (mut lo, mut hi) = (1usize, d.children.len());
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if d.cum[mid * self.s + a - 1] >= i {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Some(d.children[lo - 1] as NodeId);
        }
        let mut sum = 0u64;
        for c in self.skel.children_u(x) {
            sum += self.weight_u(a, c);
            if sum >= i {
                return Some(c);
            }
        }
        None
    }

    /// Σ w_a over the proper descendants of `x`.
    pub fn wnum_descendants(&self, a: usize, x: NodeId) -> Result<u64> {
        self.check_axis(a, true)?;
        self.check_node(x)?;
        let size = self.skel.subtree_size_u(x);
        Ok(self.open_prefix(a, x + size - 1) - self.open_prefix(a, x))
    }

    /// The i-th character of BP (true = '(').
    pub fn bp_char(&self, i: usize) -> Result<bool> {
        self.check_pos(i)?;
        Ok(self.skel.parens().bit_u(i - 1))
    }

    /// Σ w_a over opens at positions <= i plus Σ w_b over closes <= i.
    pub fn bp_rank(&self, a: usize, b: usize, i: usize) -> Result<i64> {
        self.check_axis(a, true)?;
        self.check_axis(b, true)?;
        if i > 2 * self.len() {
            return Err(Error::OutOfRange {
                what: "paren position",
                got: i,
                limit: 2 * self.len(),
            });
        }
        Ok(self.pref(StepFunction::Phi(a, b), i))
    }

    #[inline]
    pub(crate) fn bp_rank_u(&self, a: usize, b: usize, i: usize) -> i64 {
        self.pref(StepFunction::Phi(a, b), i)
    }

    /// Minimum position j with `bp_rank(a, b, j) >= i`, or NONE.
    pub fn bp_select(&self, a: usize, b: usize, i: i64) -> Result<Option<usize>> {
        self.check_axis(a, true)?;
        self.check_axis(b, true)?;
        if i < 1 {
            return Err(Error::Invalid("bp_select target must be >= 1".into()));
        }
        if self.is_empty() {
            return Ok(None);
        }
        Ok(self.fwd_search_u(StepFunction::Phi(a, b), 1, i))
    }

    #[inline]
    pub(crate) fn bp_select_u(&self, a: usize, b: usize, i: i64) -> Option<usize> {
        self.fwd_search_u(StepFunction::Phi(a, b), 1, i)
    }

    #[allow(dead_code)]
    pub(crate) fn phi_pairs(&self) -> &[(usize, usize)] {
        &self.phi_pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use StepFunction::{Eps, Phi, Pi};

    /// M1: 4 nodes, structure 1->{2,4}, 2->{3}; s=2, X=4.
    fn m1() -> WeightedTree {
        let skel = OrdinalTree::from_parens("((())())").unwrap();
        WeightedTree::new(skel, vec![vec![0, 2, 1, 3], vec![1, 0, 1, 0]], 4).unwrap()
    }

    #[test]
    fn build_checks() {
        let t = m1();
        assert_eq!(t.num_weights(), 2);
        assert_eq!(t.weight_bound(), 4);
        let skel = OrdinalTree::from_parens("((())())").unwrap();
        match WeightedTree::new(skel, vec![vec![0, 2, 1, 4], vec![0; 4]], 4) {
            Err(Error::WeightOutOfRange { value: 4, bound: 4 }) => {}
            other => panic!("expected weight rejection, got {other:?}"),
        }
    }

    #[test]
    fn fixture_base_queries() {
        let t = m1();
        assert_eq!(t.base_sum(Eps, 1, 8).unwrap(), 0);
        assert_eq!(t.base_sum(Pi(1), 1, 3).unwrap(), 3);
        assert_eq!(t.base_sum(Phi(1, 0), 1, 8).unwrap(), 6);
        assert_eq!(t.base_fwd_search(Pi(1), 1, 1).unwrap(), Some(2));
        assert_eq!(t.base_fwd_search(Phi(1, 0), 1, 3).unwrap(), Some(3));
        assert_eq!(t.base_fwd_search(Phi(1, 0), 1, 100).unwrap(), None);
        assert_eq!(t.base_bwd_search(Phi(1, 0), 8, 3).unwrap(), Some(6));
        assert_eq!(t.base_bwd_search(Pi(1), 8, 1).unwrap(), None);
        // degenerate d = 0 returns i itself when f(P[i]) >= 0 (position 6 opens node 4)
        assert_eq!(t.base_bwd_search(Eps, 6, 0).unwrap(), Some(6));
        assert_eq!(t.base_bwd_search(Pi(2), 6, 0).unwrap(), Some(6));
        assert_eq!(t.base_rmqi(Eps, 1, 8).unwrap(), 3);
        assert_eq!(t.base_rmqi(Pi(1), 1, 8).unwrap(), 3);
        assert_eq!(t.base_rmqi(Pi(1), 5, 5).unwrap(), 5);
    }

    #[test]
    fn fixture_tree_queries() {
        let t = m1();
        assert_eq!(t.weight_of(1, 3).unwrap(), 1);
        assert_eq!(t.weight_of(2, 2).unwrap(), 0);
        assert_eq!(t.wdepth(1, 3).unwrap(), 3);
        assert_eq!(t.wdepth(2, 4).unwrap(), 1);
        assert_eq!(t.wdepth(1, 1).unwrap(), 0); // root weight w1(1) = 0
        assert_eq!(t.wlevel_ancestor(1, 3, 1).unwrap(), Some(2));
        assert_eq!(t.wlevel_ancestor(1, 3, 3).unwrap(), None);
        assert_eq!(t.wlevel_ancestor(1, 3, 2).unwrap(), Some(2));
        assert_eq!(t.wparent(1, 1).unwrap(), None);
        assert_eq!(t.wdeg(1, 1).unwrap(), 5);
        assert_eq!(t.wchild_rank(1, 4).unwrap(), 5);
        assert_eq!(t.wchild_select(1, 1, 3).unwrap(), Some(4));
        assert_eq!(t.wchild_select(1, 3, 1).unwrap(), None);
        assert_eq!(t.wnum_descendants(1, 1).unwrap(), 6);
        assert_eq!(t.wnum_descendants(1, 3).unwrap(), 0);
        assert_eq!(t.wnum_descendants(2, 2).unwrap(), 1);
        assert_eq!(t.bp_rank(1, 0, 5).unwrap(), 3);
        assert_eq!(t.bp_select(0, 1, 3).unwrap(), Some(5));
        for i in 1..=8 {
            assert_eq!(t.bp_rank(0, 0, i).unwrap(), 0);
        }
    }

    // linear-scan reference over an explicit tuple string
    struct Naive {
        parens: Vec<bool>,
        node_at: Vec<usize>,
        weights: Vec<Vec<u64>>,
        parent: Vec<Option<usize>>,
        children: Vec<Vec<usize>>,
    }

    impl Naive {
        fn new(parens: &str, weights: Vec<Vec<u64>>) -> Naive {
            let bits: Vec<bool> = parens.chars().map(|c| c == '(').collect();
            let mut node_at = vec![0usize; bits.len()];
            let mut stack: Vec<usize> = Vec::new();
            let mut parent: Vec<Option<usize>> = Vec::new();
            let mut children: Vec<Vec<usize>> = Vec::new();
            let mut node = 0usize;
            for (i, &b) in bits.iter().enumerate() {
                if b {
                    node += 1;
                    parent.push(stack.last().copied());
                    children.push(Vec::new());
                    if let Some(&p) = stack.last() {
                        children[p - 1].push(node);
                    }
                    stack.push(node);
                    node_at[i] = node;
                } else {
                    node_at[i] = stack.pop().unwrap();
                }
            }
            Naive {
                parens: bits,
                node_at,
                weights,
                parent,
                children,
            }
        }

        fn value(&self, f: StepFunction, i: usize) -> i64 {
            let open = self.parens[i - 1];
            let v = self.node_at[i - 1];
            let w = |a: usize| {
                if a == 0 {
                    0
                } else {
                    self.weights[a - 1][v - 1] as i64
                }
            };
            match f {
                Eps => {
                    if open {
                        1
                    } else {
                        -1
                    }
                }
                Pi(a) => {
                    if open {
                        w(a)
                    } else {
                        -w(a)
                    }
                }
                Phi(a, b) => {
                    if open {
                        w(a)
                    } else {
                        w(b)
                    }
                }
            }
        }

        fn sum(&self, f: StepFunction, i: usize, j: usize) -> i64 {
            (i..=j).map(|k| self.value(f, k)).sum()
        }

        fn fwd(&self, f: StepFunction, i: usize, d: i64) -> Option<usize> {
            (i..=self.parens.len()).find(|&j| self.sum(f, i, j) >= d)
        }

        fn bwd(&self, f: StepFunction, i: usize, d: i64) -> Option<usize> {
            (1..=i).rev().find(|&j| self.sum(f, j, i) >= d)
        }

        fn rmqi(&self, f: StepFunction, i: usize, j: usize) -> usize {
            let mut best = i64::MIN;
            let mut pos = i;
            for k in i..=j {
                let v = self.sum(f, 1, k);
                if v > best {
                    best = v;
                    pos = k;
                }
            }
            pos
        }
    }

    fn random_weighted(n: usize, s: usize, x: u64, seed: u64) -> (String, Vec<Vec<u64>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for v in 2..=n {
            let p = rng.gen_range(1..v);
            kids[p].push(v);
        }
        let mut s_out = String::new();
        fn dfs(v: usize, kids: &[Vec<usize>], out: &mut String) {
            out.push('(');
            for &c in &kids[v] {
                dfs(c, kids, out);
            }
            out.push(')');
        }
        dfs(1, &kids, &mut s_out);
        let weights = (0..s)
            .map(|_| (0..n).map(|_| rng.gen_range(0..x)).collect())
            .collect();
        (s_out, weights)
    }

    #[test]
    fn random_matches_linear_scan() {
        for seed in 0..6u64 {
            let n = 200;
            let s = 3;
            let x = 16;
            let (parens, weights) = random_weighted(n, s, x, seed);
            let naive = Naive::new(&parens, weights.clone());
            let skel = OrdinalTree::from_parens(&parens).unwrap();
            // small block size exercises the directory paths
            let t = WeightedTree::with_options(
                skel,
                weights.clone(),
                x,
                WtOptions {
                    block: 32,
                    phi_pairs: (0..=s).flat_map(|a| (0..=s).map(move |b| (a, b))).collect(),
                    pi_axes: (1..=s).collect(),
                },
            )
            .unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let fns: Vec<StepFunction> = {
                let mut v = vec![Eps];
                for a in 0..=s {
                    v.push(Pi(a));
                    for b in 0..=s {
                        v.push(Phi(a, b));
                    }
                }
                v
            };
            for _ in 0..120 {
                let i = rng.gen_range(1..=2 * n);
                let j = rng.gen_range(i..=2 * n);
                let f = fns[rng.gen_range(0..fns.len())];
                assert_eq!(t.base_sum(f, i, j).unwrap(), naive.sum(f, i, j), "sum {f:?} {i} {j}");
                let d = rng.gen_range(-4..(3 * x as i64));
                assert_eq!(
                    t.base_fwd_search(f, i, d).unwrap(),
                    naive.fwd(f, i, d),
                    "fwd {f:?} {i} {d}"
                );
                assert_eq!(
                    t.base_bwd_search(f, j, d).unwrap(),
                    naive.bwd(f, j, d),
                    "bwd {f:?} {j} {d}"
                );
                assert_eq!(t.base_rmqi(f, i, j).unwrap(), naive.rmqi(f, i, j), "rmqi {f:?} {i} {j}");
            }
            // weighted tree queries against path/child scans
            for x_node in 1..=n {
                for a in 1..=s {
                    let mut path = vec![x_node];
                    let mut v = x_node;
                    while let Some(p) = naive.parent[v - 1] {
                        path.push(p);
                        v = p;
                    }
                    let wd: u64 = path.iter().map(|&u| naive.weights[a - 1][u - 1]).sum();
                    assert_eq!(t.wdepth(a, x_node).unwrap(), wd as i64);
                    for i in 1..=3i64 {
                        let mut acc = 0i64;
                        let mut expect = None;
                        for &u in path.iter().skip(1) {
                            acc += naive.weights[a - 1][u - 1] as i64;
                            if acc >= i {
                                expect = Some(u);
                                break;
                            }
                        }
                        assert_eq!(
                            t.wlevel_ancestor(a, x_node, i).unwrap(),
                            expect,
                            "wla {a} {x_node} {i}"
                        );
                    }
                    let deg: u64 = naive.children[x_node - 1]
                        .iter()
                        .map(|&c| naive.weights[a - 1][c - 1])
                        .sum();
                    assert_eq!(t.wdeg(a, x_node).unwrap(), deg);
                    let mut cum = 0u64;
                    for &c in &naive.children[x_node - 1] {
                        cum += naive.weights[a - 1][c - 1];
                        assert_eq!(t.wchild_rank(a, c).unwrap(), cum);
                    }
                    for i in 1..=deg.max(1) {
                        let mut run = 0u64;
                        let expect = naive.children[x_node - 1]
                            .iter()
                            .find(|&&c| {
                                run += naive.weights[a - 1][c - 1];
                                run >= i
                            })
                            .copied();
                        assert_eq!(t.wchild_select(a, x_node, i).unwrap(), expect);
                    }
                    let mut sub = 0u64;
                    let mut stack = vec![x_node];
                    while let Some(v) = stack.pop() {
                        sub += naive.weights[a - 1][v - 1];
                        stack.extend(naive.children[v - 1].iter().copied());
                    }
                    assert_eq!(
                        t.wnum_descendants(a, x_node).unwrap(),
                        sub - naive.weights[a - 1][x_node - 1]
                    );
                }
            }
        }
    }

    #[test]
    fn unit_weights_match_unlabeled_ops() {
        let (parens, _) = random_weighted(150, 1, 2, 9);
        let skel = OrdinalTree::from_parens(&parens).unwrap();
        let n = skel.len();
        let reference = OrdinalTree::from_parens(&parens).unwrap();
        let t = WeightedTree::new(skel, vec![vec![1; n]], 2).unwrap();
        for x in 1..=n {
            assert_eq!(t.wdepth(1, x).unwrap() as usize, reference.depth(x).unwrap());
            assert_eq!(t.wdeg(1, x).unwrap() as usize, reference.degree(x).unwrap());
            assert_eq!(
                t.wchild_rank(1, x).unwrap() as usize,
                reference.child_rank_u(x).unwrap()
            );
            assert_eq!(
                t.wnum_descendants(1, x).unwrap() as usize,
                reference.subtree_size(x).unwrap() - 1
            );
        }
    }

    #[test]
    fn bp_rank_invariants() {
        let (parens, weights) = random_weighted(120, 2, 8, 3);
        let totals: Vec<u64> = weights.iter().map(|w| w.iter().sum()).collect();
        let skel = OrdinalTree::from_parens(&parens).unwrap();
        let t = WeightedTree::new(skel, weights, 8).unwrap();
        let n2 = 2 * t.len();
        assert_eq!(t.bp_rank(1, 2, n2).unwrap() as u64, totals[0] + totals[1]);
        assert_eq!(t.base_sum(Pi(1), 1, n2).unwrap(), 0);
        for i in 1..=(totals[0] + totals[1]) as i64 {
            let j = t.bp_select(1, 2, i).unwrap().unwrap();
            assert!(t.bp_rank(1, 2, j).unwrap() >= i);
            assert!(t.bp_rank(1, 2, j - 1).unwrap() < i);
        }
        assert_eq!(
            t.bp_select(1, 2, (totals[0] + totals[1]) as i64 + 1).unwrap(),
            None
        );
    }

    #[test]
    fn high_degree_child_directory() {
        // star with 200 leaves exceeds the block size 64
        let mut parens = String::from("(");
        for _ in 0..200 {
            parens.push_str("()");
        }
        parens.push(')');
        let skel = OrdinalTree::from_parens(&parens).unwrap();
        let n = skel.len();
        let weights: Vec<u64> = (0..n as u64).map(|i| i % 5).collect();
        let t = WeightedTree::with_options(
            skel,
            vec![weights.clone()],
            5,
            WtOptions {
                block: 64,
                phi_pairs: vec![],
                pi_axes: vec![1],
            },
        )
        .unwrap();
        let deg: u64 = (2..=n).map(|c| weights[c - 1]).sum();
        assert_eq!(t.wdeg(1, 1).unwrap(), deg);
        let mut cum = 0;
        for c in 2..=n {
            cum += weights[c - 1];
            assert_eq!(t.wchild_rank(1, c).unwrap(), cum);
            if weights[c - 1] > 0 {
                assert_eq!(t.wchild_select(1, 1, cum).unwrap(), Some(c));
            }
        }
        assert_eq!(t.wchild_select(1, 1, deg + 1).unwrap(), None);
    }

    #[test]
    fn wdepth_parent_recurrence() {
        let (parens, weights) = random_weighted(80, 2, 6, 17);
        let skel = OrdinalTree::from_parens(&parens).unwrap();
        let t = WeightedTree::new(skel, weights, 6).unwrap();
        for x in 1..=t.len() {
            for a in 1..=2 {
                let expect = match t.skeleton().parent_u(x) {
                    None => t.weight_of(a, x).unwrap() as i64,
                    Some(p) => t.wdepth(a, p).unwrap() + t.weight_of(a, x).unwrap() as i64,
                };
                assert_eq!(t.wdepth(a, x).unwrap(), expect);
            }
        }
    }
}
