//! Unlabeled ordinal trees over balanced parentheses.
//!
//! Nodes are identified by their 1-based preorder rank. The paren string
//! stores '(' as 1 and ')' as 0; navigation runs on prefix excess (number of
//! opens minus closes) with a per-block min/total directory plus 256-entry
//! byte tables for in-block scans, so every operation is a rank/select call
//! plus a short directory walk.

use crate::bitvec::BitVector;
use crate::{Error, NodeId, Result};

const BP_BLOCK: usize = 512;

/// total excess delta of one byte (bit = 1 adds +1, bit = 0 adds -1)
const fn byte_total(b: usize) -> i32 {
    2 * (b as u8).count_ones() as i32 - 8
}

/// minimum prefix excess within one byte, over prefix lengths 1..=8
const MIN_FWD: [i8; 256] = {
    let mut t = [0i8; 256];
    let mut b = 0;
    while b < 256 {
        let mut e: i8 = 0;
        let mut m: i8 = 8;
        let mut i = 0;
        while i < 8 {
            e += if (b >> i) & 1 == 1 { 1 } else { -1 };
            if e < m {
                m = e;
            }
            i += 1;
        }
        t[b] = m;
        b += 1;
    }
    t
};

/// minimum of (excess at in-byte prefix position p) - (excess at byte end),
/// over the positions p = 0..=7 a backward scan examines
const MIN_BWD: [i8; 256] = {
    let mut t = [0i8; 256];
    let mut b = 0;
    while b < 256 {
        let mut rel: i8 = 0; // excess(p) - excess(8), starting from p = 8
        let mut m: i8 = 8;
        let mut p = 7i32;
        while p >= 0 {
            // stepping from position p+1 to p removes the delta of bit p
            rel -= if (b >> p) & 1 == 1 { 1 } else { -1 };
            if rel < m {
                m = rel;
            }
            p -= 1;
        }
        t[b] = m;
        b += 1;
    }
    t
};

/// Balanced-parenthesis ordinal tree; immutable after build.
#[derive(Clone, Debug)]
pub struct OrdinalTree {
    bp: BitVector,
    n: usize,
    /// min prefix excess over each 512-bit block
    block_min: Vec<i32>,
    /// prefix excess at each block end
    block_exc: Vec<i32>,
}

impl OrdinalTree {
    /// Build from paren bits ('(' = true). Rejects unbalanced input with the
    /// position of the first violation (the string end for a deficit there).
    pub fn from_bits(parens: &[bool]) -> Result<OrdinalTree> {
        let mut words = vec![0u64; (parens.len() + 63) / 64];
        for (i, &b) in parens.iter().enumerate() {
            if b {
                words[i / 64] |= 1u64 << (i % 64);
            }
        }
        Self::from_words(words, parens.len())
    }

    /// Build from a textual paren string of '(' and ')'.
    pub fn from_parens(s: &str) -> Result<OrdinalTree> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '(' => bits.push(true),
                ')' => bits.push(false),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unexpected character {c:?} at paren {}", i + 1),
                    })
                }
            }
        }
        Self::from_bits(&bits)
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Result<OrdinalTree> {
        let mut exc: i64 = 0;
        let blocks = len / BP_BLOCK + 1;
        let mut block_min = Vec::with_capacity(blocks);
        let mut block_exc = Vec::with_capacity(blocks);
        let mut cur_min = i64::MAX;
        for i in 0..len {
            let bit = (words[i / 64] >> (i % 64)) & 1 == 1;
            exc += if bit { 1 } else { -1 };
            if exc < 0 {
                return Err(Error::Unbalanced { pos: i + 1 });
            }
            cur_min = cur_min.min(exc);
            if (i + 1) % BP_BLOCK == 0 {
                block_min.push(cur_min as i32);
                block_exc.push(exc as i32);
                cur_min = i64::MAX;
            }
        }
        if exc != 0 {
            return Err(Error::Unbalanced { pos: len });
        }
        if len % BP_BLOCK != 0 || len == 0 {
            block_min.push(if cur_min == i64::MAX { 0 } else { cur_min as i32 });
            block_exc.push(exc as i32);
        }
        Ok(OrdinalTree {
            bp: BitVector::dense_from_words(words, len),
            n: len / 2,
            block_min,
            block_exc,
        })
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The paren sequence as a bitvector ('(' = 1).
    pub fn parens(&self) -> &BitVector {
        &self.bp
    }

    pub fn size_bits(&self) -> usize {
        self.bp.size_bits() + (self.block_min.len() + self.block_exc.len()) * 32 + 128
    }

    fn check_node(&self, x: NodeId) -> Result<()> {
        if x == 0 || x > self.n {
            return Err(Error::OutOfRange {
                what: "node id",
                got: x,
                limit: self.n,
            });
        }
        Ok(())
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > 2 * self.n {
            return Err(Error::OutOfRange {
                what: "paren position",
                got: i,
                limit: 2 * self.n,
            });
        }
        Ok(())
    }

    // --- positions (1-based prefix convention: excess(i) is after i parens) ---

    #[inline]
    pub(crate) fn excess_u(&self, i: usize) -> i64 {
        2 * self.bp.rank1_u(i) as i64 - i as i64
    }

    #[inline]
    pub(crate) fn open_u(&self, x: NodeId) -> usize {
        self.bp.select1_u(x) + 1
    }

    #[inline]
    pub(crate) fn close_u(&self, x: NodeId) -> usize {
        let p = self.open_u(x);
        self.fwd_excess_leq(p + 1, self.excess_u(p) - 1)
            .expect("balanced paren string has a matching close")
    }

    #[inline]
    pub(crate) fn node_at_u(&self, i: usize) -> NodeId {
        if self.bp.bit_u(i - 1) {
            self.bp.rank1_u(i)
        } else {
            let open = self
                .bwd_excess_leq(i - 1, self.excess_u(i))
                .expect("balanced paren string has a matching open")
                + 1;
            self.bp.rank1_u(open)
        }
    }

    /// Smallest prefix position `j >= start` with `excess(j) <= target`.
    pub(crate) fn fwd_excess_leq(&self, start: usize, target: i64) -> Option<usize> {
        let len = 2 * self.n;
        if start > len {
            return None;
        }
        let words = self.bp.as_dense().words();
        let mut e = self.excess_u(start - 1);
        let first_block = (start - 1) / BP_BLOCK;
        let block_end = ((first_block + 1) * BP_BLOCK).min(len);
        if let Some(j) = scan_fwd(words, start - 1, block_end, &mut e, target) {
            return Some(j);
        }
        let mut b = first_block + 1;
        while b * BP_BLOCK < len {
            let bend = ((b + 1) * BP_BLOCK).min(len);
            if (self.block_min[b] as i64) <= target {
                let j = scan_fwd(words, b * BP_BLOCK, bend, &mut e, target);
                debug_assert!(j.is_some());
                return j;
            }
            e = self.block_exc[b] as i64;
            b += 1;
        }
        None
    }

    /// Largest prefix position `j <= from` with `excess(j) <= target`
    /// (position 0 with excess 0 included).
    pub(crate) fn bwd_excess_leq(&self, from: usize, target: i64) -> Option<usize> {
        if target < 0 {
            return None;
        }
        let words = self.bp.as_dense().words();
        let mut e = self.excess_u(from);
        if e <= target {
            return Some(from);
        }
        debug_assert!(from > 0, "excess(0) = 0 <= target");
        let last_block = (from - 1) / BP_BLOCK;
        let block_start = last_block * BP_BLOCK;
        if let Some(j) = scan_bwd(words, from, block_start, &mut e, target) {
            return Some(j);
        }
        let mut b = last_block;
        while b > 0 {
            b -= 1;
            if (self.block_min[b] as i64) <= target || (self.block_exc[b] as i64) <= target {
                let bstart = b * BP_BLOCK;
                let bend = (b + 1) * BP_BLOCK;
                let mut ee = self.block_exc[b] as i64;
                if ee <= target {
                    return Some(bend);
                }
                let j = scan_bwd(words, bend, bstart, &mut ee, target);
                debug_assert!(j.is_some());
                return j;
            }
        }
        Some(0)
    }

    /// Minimum excess over prefix positions in `[i, j]`.
    pub(crate) fn min_excess(&self, i: usize, j: usize) -> i64 {
        debug_assert!(1 <= i && i <= j && j <= 2 * self.n);
        let words = self.bp.as_dense().words();
        let bi = (i - 1) / BP_BLOCK;
        let bj = (j - 1) / BP_BLOCK;
        let mut e = self.excess_u(i - 1);
        if bi == bj {
            return scan_min(words, i - 1, j, &mut e);
        }
        let mut m = scan_min(words, i - 1, (bi + 1) * BP_BLOCK, &mut e);
        for b in (bi + 1)..bj {
            m = m.min(self.block_min[b] as i64);
        }
        let mut e2 = self.block_exc[bj - 1] as i64;
        m.min(scan_min(words, bj * BP_BLOCK, j, &mut e2))
    }

    // --- public tree operations ---

    /// Paren position of the '(' of `x`.
    pub fn open_of(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        Ok(self.open_u(x))
    }

    /// Paren position of the ')' of `x`.
    pub fn close_of(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        Ok(self.close_u(x))
    }

    /// Node owning the paren at position `i` (both parens map to the node).
    pub fn node_of(&self, i: usize) -> Result<NodeId> {
        self.check_pos(i)?;
        Ok(self.node_at_u(i))
    }

    pub fn parent(&self, x: NodeId) -> Result<Option<NodeId>> {
        self.check_node(x)?;
        Ok(self.parent_u(x))
    }

    #[inline]
    pub(crate) fn parent_u(&self, x: NodeId) -> Option<NodeId> {
        let p = self.open_u(x);
        let d = self.excess_u(p);
        if d <= 1 {
            return None;
        }
        let j = self.bwd_excess_leq(p - 1, d - 2)?;
        Some(self.bp.rank1_u(j + 1))
    }

    /// Ancestor-or-self test.
    pub fn is_ancestor(&self, a: NodeId, x: NodeId) -> Result<bool> {
        self.check_node(a)?;
        self.check_node(x)?;
        Ok(self.is_ancestor_u(a, x))
    }

    #[inline]
    pub(crate) fn is_ancestor_u(&self, a: NodeId, x: NodeId) -> bool {
        // subtree of a covers preorder interval [a, a + size - 1]
        a <= x && x <= a + self.subtree_size_u(a) - 1
    }

    pub fn lca(&self, x: NodeId, y: NodeId) -> Result<NodeId> {
        self.check_node(x)?;
        self.check_node(y)?;
        Ok(self.lca_u(x, y))
    }

    pub(crate) fn lca_u(&self, x: NodeId, y: NodeId) -> NodeId {
        if self.is_ancestor_u(x, y) {
            return x;
        }
        if self.is_ancestor_u(y, x) {
            return y;
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        let m = self.min_excess(self.open_u(a), self.open_u(b));
        let db = self.depth_u(b);
        debug_assert!(m < db);
        self.level_ancestor_u(b, (db - m) as usize).unwrap()
    }

    /// Depth of `x`; the root has depth 1.
    pub fn depth(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        Ok(self.depth_u(x) as usize)
    }

    #[inline]
    pub(crate) fn depth_u(&self, x: NodeId) -> i64 {
        self.excess_u(self.open_u(x))
    }

    /// Nodes in the subtree of `x`, including `x`.
    pub fn subtree_size(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        Ok(self.subtree_size_u(x))
    }

    #[inline]
    pub(crate) fn subtree_size_u(&self, x: NodeId) -> usize {
        let p = self.open_u(x);
        (self.close_u(x) - p + 1) / 2
    }

    /// Number of children of `x`.
    pub fn degree(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        Ok(self.children_u(x).count())
    }

    /// Ancestor `y` of `x` with `depth(y) = depth(x) - d`; NULL when `d >= depth(x)`.
    pub fn level_ancestor(&self, x: NodeId, d: usize) -> Result<Option<NodeId>> {
        self.check_node(x)?;
        if d == 0 {
            return Err(Error::OutOfRange {
                what: "level ancestor distance",
                got: 0,
                limit: self.n,
            });
        }
        Ok(self.level_ancestor_u(x, d))
    }

    pub(crate) fn level_ancestor_u(&self, x: NodeId, d: usize) -> Option<NodeId> {
        let target = self.depth_u(x) - d as i64;
        if target < 1 {
            return None;
        }
        let j = self.bwd_excess_leq(self.open_u(x) - 1, target - 1)?;
        Some(self.bp.rank1_u(j + 1))
    }

    /// 1-based rank of `x` among its siblings; the root reports 1.
    pub fn child_rank_u(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        match self.parent_u(x) {
            None => Ok(1),
            Some(p) => Ok(self
                .children_u(p)
                .position(|c| c == x)
                .expect("child listed under its parent")
                + 1),
        }
    }

    /// The i-th child of `x`, or NULL when `deg(x) < i`.
    pub fn child_select_u(&self, x: NodeId, i: usize) -> Result<Option<NodeId>> {
        self.check_node(x)?;
        if i == 0 {
            return Err(Error::OutOfRange {
                what: "child index",
                got: 0,
                limit: self.n,
            });
        }
        Ok(self.children_u(x).nth(i - 1))
    }

    /// Children of `x` in order.
    pub(crate) fn children_u(&self, x: NodeId) -> Children<'_> {
        Children {
            tree: self,
            pos: self.open_u(x) + 1,
        }
    }

    pub fn postorder_rank_u(&self, x: NodeId) -> Result<usize> {
        self.check_node(x)?;
        Ok(self.postorder_rank_uu(x))
    }

    #[inline]
    pub(crate) fn postorder_rank_uu(&self, x: NodeId) -> usize {
        let c = self.close_u(x);
        c - self.bp.rank1_u(c)
    }

    pub fn postorder_select_u(&self, i: usize) -> Result<NodeId> {
        if i == 0 || i > self.n {
            return Err(Error::OutOfRange {
                what: "postorder rank",
                got: i,
                limit: self.n,
            });
        }
        Ok(self.node_at_u(self.bp.select0_u(i) + 1))
    }

    /// Render the canonical paren string.
    pub fn to_paren_string(&self) -> String {
        self.bp.iter().map(|b| if b { '(' } else { ')' }).collect()
    }
}

pub(crate) struct Children<'a> {
    tree: &'a OrdinalTree,
    pos: usize,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.pos > 2 * self.tree.n || !self.tree.bp.bit_u(self.pos - 1) {
            return None;
        }
        let c = self.tree.bp.rank1_u(self.pos);
        self.pos = self.tree.close_u(c) + 1;
        Some(c)
    }
}

/// Smallest prefix position in `(from_bit, end]` (bit indices `from_bit..end`)
/// whose running excess drops to `target`; `e` enters as excess(from_bit) and
/// leaves as excess at the scanned end when not found.
fn scan_fwd(words: &[u64], from_bit: usize, end: usize, e: &mut i64, target: i64) -> Option<usize> {
    let mut i = from_bit;
    // bitwise until byte aligned
    while i < end && i % 8 != 0 {
        *e += if (words[i / 64] >> (i % 64)) & 1 == 1 { 1 } else { -1 };
        if *e <= target {
            return Some(i + 1);
        }
        i += 1;
    }
    while i + 8 <= end {
        let byte = ((words[i / 64] >> (i % 64)) & 0xFF) as usize;
        if *e + MIN_FWD[byte] as i64 <= target {
            for _ in 0..8 {
                *e += if (words[i / 64] >> (i % 64)) & 1 == 1 { 1 } else { -1 };
                if *e <= target {
                    return Some(i + 1);
                }
                i += 1;
            }
            unreachable!("byte table promised a hit");
        }
        *e += byte_total(byte) as i64;
        i += 8;
    }
    while i < end {
        *e += if (words[i / 64] >> (i % 64)) & 1 == 1 { 1 } else { -1 };
        if *e <= target {
            return Some(i + 1);
        }
        i += 1;
    }
    None
}

/// Largest prefix position in `[start, from)` with excess <= target, scanning
/// backward from `from` where `e` = excess(from). Positions examined are
/// `from-1 .. start`; `start` itself is a candidate.
fn scan_bwd(words: &[u64], from: usize, start: usize, e: &mut i64, target: i64) -> Option<usize> {
    let mut i = from; // current prefix position; e = excess(i)
    while i > start && i % 8 != 0 {
        *e -= if (words[(i - 1) / 64] >> ((i - 1) % 64)) & 1 == 1 {
            1
        } else {
            -1
        };
        i -= 1;
        if *e <= target {
            return Some(i);
        }
    }
    while i >= start + 8 {
        let byte = ((words[(i - 8) / 64] >> ((i - 8) % 64)) & 0xFF) as usize;
        if *e + MIN_BWD[byte] as i64 <= target {
            for _ in 0..8 {
                *e -= if (words[(i - 1) / 64] >> ((i - 1) % 64)) & 1 == 1 {
                    1
                } else {
                    -1
                };
                i -= 1;
                if *e <= target {
                    return Some(i);
                }
            }
            unreachable!("byte table promised a hit");
        }
        *e -= byte_total(byte) as i64;
        i -= 8;
    }
    while i > start {
        *e -= if (words[(i - 1) / 64] >> ((i - 1) % 64)) & 1 == 1 {
            1
        } else {
            -1
        };
        i -= 1;
        if *e <= target {
            return Some(i);
        }
    }
    None
}

/// Min excess over prefix positions `(from_bit, end]`; `e` enters as
/// excess(from_bit).
fn scan_min(words: &[u64], from_bit: usize, end: usize, e: &mut i64) -> i64 {
    let mut m = i64::MAX;
    let mut i = from_bit;
    while i < end && i % 8 != 0 {
        *e += if (words[i / 64] >> (i % 64)) & 1 == 1 { 1 } else { -1 };
        m = m.min(*e);
        i += 1;
    }
    while i + 8 <= end {
        let byte = ((words[i / 64] >> (i % 64)) & 0xFF) as usize;
        m = m.min(*e + MIN_FWD[byte] as i64);
        *e += byte_total(byte) as i64;
        i += 8;
    }
    while i < end {
        *e += if (words[i / 64] >> (i % 64)) & 1 == 1 { 1 } else { -1 };
        m = m.min(*e);
        i += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: &str = "(()(()())())";

    fn e1() -> OrdinalTree {
        OrdinalTree::from_parens(E1).unwrap()
    }

    #[test]
    fn build_cases() {
        assert_eq!(OrdinalTree::from_parens("()").unwrap().len(), 1);
        assert_eq!(e1().len(), 6);
        assert_eq!(OrdinalTree::from_parens("").unwrap().len(), 0);
        match OrdinalTree::from_parens("(()") {
            Err(Error::Unbalanced { pos }) => assert_eq!(pos, 3),
            other => panic!("expected unbalance, got {other:?}"),
        }
        match OrdinalTree::from_parens(")(") {
            Err(Error::Unbalanced { pos }) => assert_eq!(pos, 1),
            other => panic!("expected unbalance, got {other:?}"),
        }
    }

    #[test]
    fn fixture_navigation() {
        let t = e1();
        assert_eq!(t.parent(4).unwrap(), Some(3));
        assert_eq!(t.parent(1).unwrap(), None);
        assert_eq!(t.parent(6).unwrap(), Some(1));
        assert!(t.is_ancestor(3, 5).unwrap());
        assert!(t.is_ancestor(4, 4).unwrap());
        assert!(!t.is_ancestor(2, 6).unwrap());
        assert_eq!(t.lca(4, 6).unwrap(), 1);
        assert_eq!(t.lca(4, 5).unwrap(), 3);
        assert_eq!(t.lca(5, 5).unwrap(), 5);
        assert_eq!(t.depth(5).unwrap(), 3);
        assert_eq!(t.subtree_size(3).unwrap(), 3);
        assert_eq!(t.degree(1).unwrap(), 3);
        assert_eq!(t.level_ancestor(5, 2).unwrap(), Some(1));
        assert_eq!(t.level_ancestor(5, 3).unwrap(), None);
        assert_eq!(t.child_rank_u(6).unwrap(), 3);
        assert_eq!(t.child_rank_u(1).unwrap(), 1);
        assert_eq!(t.child_select_u(1, 2).unwrap(), Some(3));
        assert_eq!(t.child_select_u(2, 1).unwrap(), None);
        assert_eq!(t.postorder_rank_u(3).unwrap(), 4);
        assert_eq!(t.postorder_select_u(6).unwrap(), 1);
        assert_eq!(t.open_of(3).unwrap(), 4);
        assert_eq!(t.close_of(3).unwrap(), 9);
        assert_eq!(t.node_of(10).unwrap(), 6);
        assert_eq!(t.node_of(t.open_of(5).unwrap()).unwrap(), 5);
        assert_eq!(t.node_of(t.close_of(5).unwrap()).unwrap(), 5);
        assert_eq!(t.to_paren_string(), E1);
    }

    #[test]
    fn single_node() {
        let t = OrdinalTree::from_parens("()").unwrap();
        assert_eq!(t.depth(1).unwrap(), 1);
        assert_eq!(t.subtree_size(1).unwrap(), 1);
        assert_eq!(t.degree(1).unwrap(), 0);
        assert_eq!(t.level_ancestor(1, 1).unwrap(), None);
    }

    #[test]
    fn postorder_bijection() {
        let t = e1();
        let order: Vec<NodeId> = (1..=6).map(|i| t.postorder_select_u(i).unwrap()).collect();
        assert_eq!(order, vec![2, 4, 5, 3, 6, 1]);
        for x in 1..=6 {
            assert_eq!(t.postorder_select_u(t.postorder_rank_u(x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn depth_matches_excess_identity() {
        let t = e1();
        for x in 1..=t.len() {
            let p = t.open_of(x).unwrap();
            let mut e = 0i64;
            for i in 0..p {
                e += if t.parens().bit_u(i) { 1 } else { -1 };
            }
            assert_eq!(t.depth(x).unwrap() as i64, e);
        }
    }

    /// adjacency-list reference built by direct paren parsing
    pub(crate) fn adjacency(parens: &str) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for c in parens.chars() {
            if c == '(' {
                let id = parent.len() + 1;
                parent.push(stack.last().copied());
                children.push(Vec::new());
                if let Some(&p) = stack.last() {
                    children[p - 1].push(id);
                }
                stack.push(id);
            } else {
                stack.pop();
            }
        }
        (parent, children)
    }

    fn random_tree_parens(n: usize, seed: u64) -> String {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        // balanced string via random parent attachment, then DFS
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for v in 2..=n {
            let p = rng.gen_range(1..v);
            kids[p].push(v);
        }
        let mut s = String::new();
        fn dfs(v: usize, kids: &[Vec<usize>], s: &mut String) {
            s.push('(');
            for &c in &kids[v] {
                dfs(c, kids, s);
            }
            s.push(')');
        }
        dfs(1, &kids, &mut s);
        s
    }

    #[test]
    fn random_trees_match_adjacency_oracle() {
        for seed in 0..8 {
            let parens = random_tree_parens(300, seed);
            let t = OrdinalTree::from_parens(&parens).unwrap();
            let (parent, children) = adjacency(&parens);
            let n = t.len();
            assert_eq!(n, parent.len());
            let depth_of = |mut x: usize| {
                let mut d = 1;
                while let Some(p) = parent[x - 1] {
                    d += 1;
                    x = p;
                }
                d
            };
            for x in 1..=n {
                assert_eq!(t.parent(x).unwrap(), parent[x - 1], "parent of {x}");
                assert_eq!(t.depth(x).unwrap(), depth_of(x));
                assert_eq!(t.degree(x).unwrap(), children[x - 1].len());
                let mut size = 0;
                let mut stack = vec![x];
                while let Some(v) = stack.pop() {
                    size += 1;
                    stack.extend(children[v - 1].iter().copied());
                }
                assert_eq!(t.subtree_size(x).unwrap(), size);
                for (i, &c) in children[x - 1].iter().enumerate() {
                    assert_eq!(t.child_select_u(x, i + 1).unwrap(), Some(c));
                    assert_eq!(t.child_rank_u(c).unwrap(), i + 1);
                }
                assert_eq!(t.child_select_u(x, children[x - 1].len() + 1).unwrap(), None);
                // level ancestors against repeated parent
                let mut anc = Some(x);
                let mut d = 0;
                loop {
                    anc = parent[anc.unwrap() - 1];
                    d += 1;
                    assert_eq!(t.level_ancestor(x, d).unwrap(), anc, "level_anc({x},{d})");
                    if anc.is_none() {
                        break;
                    }
                }
            }
            // lca oracle on sampled pairs
            let ancestors = |mut x: usize| {
                let mut v = vec![x];
                while let Some(p) = parent[x - 1] {
                    v.push(p);
                    x = p;
                }
                v
            };
            for a in (1..=n).step_by(7) {
                for b in (1..=n).step_by(11) {
                    let aa = ancestors(a);
                    let ab = ancestors(b);
                    let expect = *aa.iter().find(|u| ab.contains(u)).unwrap();
                    assert_eq!(t.lca(a, b).unwrap(), expect, "lca({a},{b})");
                }
            }
        }
    }
}
