//! Binary rank/select dictionaries.
//!
//! [`BitVector`] stores an immutable bit sequence and answers access, rank and
//! select queries. Dense inputs keep the plain words plus a two-level rank
//! directory; inputs with few ones switch to an Elias-Fano layout so the
//! stored size tracks the sparse bound `O(k log(n/k)) + o(n)`.
//!
//! Positions are 1-based throughout. `rank` takes a prefix length, so
//! `rank(b, 0) = 0` and `rank(b, n)` counts the whole vector; `select(b, j)`
//! is the position of the j-th `b` and rejects `j` past the number of
//! occurrences.

use crate::{Error, Result};

const SUPER_BITS: usize = 1024;
const BLOCK_BITS: usize = 256;
const WORDS_PER_BLOCK: usize = BLOCK_BITS / 64;

/// Fixed-width packed integer array (little-endian bit packing).
#[derive(Clone, Debug, Default)]
pub struct PackedIntVec {
    words: Vec<u64>,
    width: usize,
    len: usize,
}

impl PackedIntVec {
    pub fn with_width(width: usize) -> Self {
        assert!(width <= 64);
        PackedIntVec {
            words: Vec::new(),
            width,
            len: 0,
        }
    }

    /// Smallest width able to hold `max`.
    pub fn width_for(max: u64) -> usize {
        64 - max.leading_zeros() as usize
    }

    pub fn push(&mut self, v: u64) {
        debug_assert!(self.width == 64 || v < (1u64 << self.width));
        let off = self.len * self.width;
        let need_words = (off + self.width + 63) / 64;
        if self.words.len() < need_words {
            self.words.resize(need_words, 0);
        }
        if self.width > 0 {
            let w = off / 64;
            let sh = off % 64;
            self.words[w] |= v << sh;
            if sh + self.width > 64 {
                self.words[w + 1] |= v >> (64 - sh);
            }
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        let off = i * self.width;
        let w = off / 64;
        let sh = off % 64;
        let mask = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        let mut v = self.words[w] >> sh;
        if sh + self.width > 64 {
            v |= self.words[w + 1] << (64 - sh);
        }
        v & mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn size_bits(&self) -> usize {
        self.words.len() * 64 + 128
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_raw(words: Vec<u64>, width: usize, len: usize) -> Self {
        PackedIntVec { words, width, len }
    }
}

/// Plain bit array with a two-level rank directory.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    /// ones before each 1024-bit superblock
    abs: Vec<u64>,
    /// ones from superblock start to each 256-bit block start
    rel: Vec<u16>,
}

impl Dense {
    pub(crate) fn new(words: Vec<u64>, len: usize) -> Self {
        debug_assert!(words.len() * 64 >= len);
        debug_assert!(len % 64 == 0 || words.last().map_or(true, |w| w >> (len % 64) == 0));
        let n_super = len / SUPER_BITS + 1;
        let n_block = len / BLOCK_BITS + 1;
        let mut abs = Vec::with_capacity(n_super);
        let mut rel = Vec::with_capacity(n_block);
        let mut total: u64 = 0;
        let mut in_super: u64 = 0;
        for b in 0..n_block {
            if b % (SUPER_BITS / BLOCK_BITS) == 0 {
                abs.push(total);
                in_super = 0;
            }
            rel.push(in_super as u16);
            let w0 = b * WORDS_PER_BLOCK;
            for w in w0..(w0 + WORDS_PER_BLOCK).min(words.len()) {
                let c = words[w].count_ones() as u64;
                total += c;
                in_super += c;
            }
        }
        Dense {
            words,
            len,
            ones: total as usize,
            abs,
            rel,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn ones(&self) -> usize {
        self.ones
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 0-based position.
    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Number of ones in the first `i` bits (0-based prefix length).
    #[inline]
    pub(crate) fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let b = i / BLOCK_BITS;
        let mut cnt = self.abs[i / SUPER_BITS] + self.rel[b] as u64;
        let w0 = b * WORDS_PER_BLOCK;
        let full = i / 64;
        for w in w0..full {
            cnt += self.words[w].count_ones() as u64;
        }
        let tail = i % 64;
        if tail != 0 {
            cnt += (self.words[full] & ((1u64 << tail) - 1)).count_ones() as u64;
        }
        cnt as usize
    }

    /// 0-based position of the j-th one (j is 1-based).
    pub(crate) fn select1(&self, j: usize) -> usize {
        debug_assert!(1 <= j && j <= self.ones);
        let j64 = j as u64;
        // superblock: last with abs < j
        let mut lo = 0usize;
        let mut hi = self.abs.len() - 1;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if self.abs[mid] < j64 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let mut rem = j64 - self.abs[sb];
        // block within superblock
        let first_block = sb * (SUPER_BITS / BLOCK_BITS);
        let last_block = (first_block + SUPER_BITS / BLOCK_BITS).min(self.rel.len());
        let mut blk = first_block;
        for b in (first_block + 1)..last_block {
            if (self.rel[b] as u64) < rem {
                blk = b;
            } else {
                break;
            }
        }
        rem -= self.rel[blk] as u64;
        let mut w = blk * WORDS_PER_BLOCK;
        loop {
            let c = self.words[w].count_ones() as u64;
            if c >= rem {
                break;
            }
            rem -= c;
            w += 1;
        }
        w * 64 + select_in_word(self.words[w], rem as usize)
    }

    /// 0-based position of the j-th zero (j is 1-based).
    pub(crate) fn select0(&self, j: usize) -> usize {
        debug_assert!(1 <= j && j <= self.len - self.ones);
        let j64 = j as u64;
        let zeros_before_super = |sb: usize| (sb * SUPER_BITS) as u64 - self.abs[sb];
        let mut lo = 0usize;
        let mut hi = self.abs.len() - 1;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if zeros_before_super(mid) < j64 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let mut rem = j64 - zeros_before_super(sb);
        let first_block = sb * (SUPER_BITS / BLOCK_BITS);
        let last_block = (first_block + SUPER_BITS / BLOCK_BITS).min(self.rel.len());
        let zeros_rel = |b: usize| ((b - first_block) * BLOCK_BITS) as u64 - self.rel[b] as u64;
        let mut blk = first_block;
        for b in (first_block + 1)..last_block {
            if zeros_rel(b) < rem {
                blk = b;
            } else {
                break;
            }
        }
        rem -= zeros_rel(blk);
        let mut w = blk * WORDS_PER_BLOCK;
        loop {
            let c = (!self.words[w]).count_ones() as u64;
            if c >= rem {
                break;
            }
            rem -= c;
            w += 1;
        }
        w * 64 + select_in_word(!self.words[w], rem as usize)
    }

    pub(crate) fn size_bits(&self) -> usize {
        self.words.len() * 64 + self.abs.len() * 64 + self.rel.len() * 16 + 192
    }
}

/// 0-based position of the j-th set bit of `w` (j is 1-based, must exist).
#[inline]
fn select_in_word(mut w: u64, j: usize) -> usize {
    debug_assert!(j >= 1 && (w.count_ones() as usize) >= j);
    for _ in 1..j {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}

/// Elias-Fano encoding of the positions of ones.
#[derive(Clone, Debug)]
struct Sparse {
    len: usize,
    ones: usize,
    low_width: usize,
    low: PackedIntVec,
    high: Dense,
}

impl Sparse {
    fn from_positions(len: usize, positions: &[usize]) -> Self {
        let k = positions.len();
        debug_assert!(k > 0);
        let low_width = {
            let ratio = (len / k).max(1);
            (usize::BITS - 1 - ratio.leading_zeros()) as usize
        };
        let mut low = PackedIntVec::with_width(low_width);
        let n_buckets = ((len.max(1) - 1) >> low_width) + 1;
        let mut high_words = vec![0u64; (k + n_buckets + 1 + 63) / 64];
        let mut high_len = 0usize;
        let mut bucket = 0usize;
        let low_mask = if low_width == 0 {
            0
        } else {
            (1usize << low_width) - 1
        };
        for &pos in positions {
            let v = pos - 1; // 0-based value
            let b = v >> low_width;
            while bucket < b {
                // bucket boundary: a zero bit
                high_len += 1;
                bucket += 1;
            }
            high_words[high_len / 64] |= 1u64 << (high_len % 64);
            high_len += 1;
            low.push((v & low_mask) as u64);
        }
        while bucket < n_buckets {
            high_len += 1;
            bucket += 1;
        }
        high_words.truncate((high_len + 63) / 64);
        let high = Dense::new(high_words, high_len);
        Sparse {
            len,
            ones: k,
            low_width,
            low,
            high,
        }
    }

    /// 0-based value of the j-th one (j 1-based).
    #[inline]
    fn value(&self, j: usize) -> usize {
        let p = self.high.select1(j);
        let bucket = p - (j - 1);
        (bucket << self.low_width) | self.low.get(j - 1) as usize
    }

    fn select1(&self, j: usize) -> usize {
        self.value(j) + 1
    }

    /// Count of ones among the first `i` bits, i.e. values < i.
    fn rank1(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        let target = i; // count values < target
        let hb = (target - 1) >> self.low_width;
        // ones in buckets < hb, then scan bucket hb
        let zeros_before = hb; // zero bits that close buckets 0..hb-1... position of hb-th zero
        let start = if hb == 0 {
            0
        } else {
            // ones strictly before bucket hb
            self.high.select0(zeros_before) + 1 - hb
        };
        let mut cnt = start;
        // scan entries in bucket hb
        let mut p = if hb == 0 { 0 } else { self.high.select0(hb) + 1 };
        let mut j = start; // entries consumed so far
        while p < self.high.len() && self.high.bit(p) {
            let v = (hb << self.low_width) | self.low.get(j) as usize;
            if v < target {
                cnt += 1;
            } else {
                break;
            }
            j += 1;
            p += 1;
        }
        cnt
    }

    fn select0(&self, j: usize) -> usize {
        // binary search the smallest 1-based position p with p - rank1(p) >= j
        let mut lo = 1usize;
        let mut hi = self.len;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if mid - self.rank1(mid) >= j {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    fn size_bits(&self) -> usize {
        self.low.size_bits() + self.high.size_bits() + 192
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(Dense),
    Sparse(Sparse),
}

/// Immutable binary sequence with rank/select support.
#[derive(Clone, Debug)]
pub struct BitVector {
    repr: Repr,
}

impl BitVector {
    /// Build from bits. Inputs whose ones are below a 1/8 density switch to
    /// the Elias-Fano layout automatically.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> BitVector {
        let mut words: Vec<u64> = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1u64 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    /// Build from little-endian packed words.
    pub fn from_words(words: Vec<u64>, len: usize) -> BitVector {
        let ones: usize = words.iter().map(|w| w.count_ones() as usize).sum();
        if len >= 1024 && ones > 0 && ones * 8 < len {
            let mut positions = Vec::with_capacity(ones);
            for (wi, &w) in words.iter().enumerate() {
                let mut m = w;
                while m != 0 {
                    positions.push(wi * 64 + m.trailing_zeros() as usize + 1);
                    m &= m - 1;
                }
            }
            BitVector {
                repr: Repr::Sparse(Sparse::from_positions(len, &positions)),
            }
        } else {
            BitVector {
                repr: Repr::Dense(Dense::new(words, len)),
            }
        }
    }

    /// Force the dense layout (used by structures that scan raw words).
    pub(crate) fn dense_from_words(words: Vec<u64>, len: usize) -> BitVector {
        BitVector {
            repr: Repr::Dense(Dense::new(words, len)),
        }
    }

    pub(crate) fn as_dense(&self) -> &Dense {
        match &self.repr {
            Repr::Dense(d) => d,
            Repr::Sparse(_) => unreachable!("dense layout required"),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.len(),
            Repr::Sparse(s) => s.len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count_ones(&self) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.ones(),
            Repr::Sparse(s) => s.ones,
        }
    }

    pub fn count(&self, b: bool) -> usize {
        if b {
            self.count_ones()
        } else {
            self.len() - self.count_ones()
        }
    }

    /// Whether the Elias-Fano layout is in use.
    pub fn is_sparse(&self) -> bool {
        matches!(self.repr, Repr::Sparse(_))
    }

    /// Count of `b` among the first `i` bits; `0 <= i <= n`.
    pub fn rank(&self, b: bool, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::OutOfRange {
                what: "bit rank prefix",
                got: i,
                limit: self.len(),
            });
        }
        let r1 = self.rank1_u(i);
        Ok(if b { r1 } else { i - r1 })
    }

    /// 1-based position of the j-th `b`; `1 <= j <= count(b)`.
    pub fn select(&self, b: bool, j: usize) -> Result<usize> {
        let avail = self.count(b);
        if j == 0 || j > avail {
            return Err(Error::NoSuchOccurrence { j, available: avail });
        }
        Ok(if b {
            self.select1_u(j) + 1
        } else {
            self.select0_u(j) + 1
        })
    }

    /// Bit at 1-based position `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfRange {
                what: "bit access",
                got: i,
                limit: self.len(),
            });
        }
        Ok(self.bit_u(i - 1))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.bit_u(i))
    }

    /// Stored size in bits, directories included.
    pub fn size_bits(&self) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.size_bits(),
            Repr::Sparse(s) => s.size_bits(),
        }
    }

    // 0-based internals

    #[inline]
    pub(crate) fn rank1_u(&self, i: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.rank1(i),
            Repr::Sparse(s) => s.rank1(i),
        }
    }

    #[inline]
    pub(crate) fn select1_u(&self, j: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.select1(j),
            Repr::Sparse(s) => s.select1(j) - 1,
        }
    }

    #[inline]
    pub(crate) fn select0_u(&self, j: usize) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.select0(j),
            Repr::Sparse(s) => s.select0(j) - 1,
        }
    }

    #[inline]
    pub(crate) fn bit_u(&self, i: usize) -> bool {
        match &self.repr {
            Repr::Dense(d) => d.bit(i),
            Repr::Sparse(s) => s.rank1(i + 1) - s.rank1(i) == 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits_of(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn empty_vector() {
        let v = BitVector::from_bits(Vec::<bool>::new());
        assert_eq!(v.len(), 0);
        assert_eq!(v.count_ones(), 0);
        assert_eq!(v.rank(true, 0).unwrap(), 0);
        assert!(v.select(true, 1).is_err());
    }

    #[test]
    fn small_fixtures() {
        let v = BitVector::from_bits(bits_of("110"));
        assert_eq!(v.len(), 3);
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.rank(true, 2).unwrap(), 2);
        assert_eq!(v.rank(true, 0).unwrap(), 0);
        assert_eq!(v.get(3).unwrap(), false);
        assert_eq!(v.get(1).unwrap(), true);
        assert!(v.rank(true, 4).is_err());

        let v = BitVector::from_bits(bits_of("0101"));
        assert_eq!(v.select(true, 2).unwrap(), 4);
        assert_eq!(v.select(false, 1).unwrap(), 1);
        assert!(v.select(true, 3).is_err());
    }

    #[test]
    fn access_is_rank_difference() {
        let v = BitVector::from_bits(bits_of("110"));
        for i in 1..=3 {
            let d = v.rank(true, i).unwrap() - v.rank(true, i - 1).unwrap();
            assert_eq!(v.get(i).unwrap() as usize, d);
        }
    }

    fn check_against_scan(bits: &[bool], v: &BitVector) {
        assert_eq!(v.len(), bits.len());
        let mut r1 = 0usize;
        assert_eq!(v.rank(true, 0).unwrap(), 0);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                r1 += 1;
            }
            assert_eq!(v.rank(true, i + 1).unwrap(), r1, "rank1 at {}", i + 1);
            assert_eq!(v.rank(false, i + 1).unwrap(), i + 1 - r1);
            assert_eq!(v.get(i + 1).unwrap(), b);
        }
        let mut j1 = 0;
        let mut j0 = 0;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                j1 += 1;
                assert_eq!(v.select(true, j1).unwrap(), i + 1);
            } else {
                j0 += 1;
                assert_eq!(v.select(false, j0).unwrap(), i + 1);
            }
        }
    }

    #[test]
    fn random_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bits: Vec<bool> = (0..10_000).map(|_| rng.gen_bool(0.5)).collect();
        let v = BitVector::from_bits(bits.iter().copied());
        assert!(!v.is_sparse());
        check_against_scan(&bits, &v);
    }

    #[test]
    fn sparse_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let bits: Vec<bool> = (0..10_000).map(|_| rng.gen_bool(0.01)).collect();
        let v = BitVector::from_bits(bits.iter().copied());
        assert!(v.is_sparse());
        check_against_scan(&bits, &v);
        // sparse layout should beat the dense footprint by a wide margin
        assert!(v.size_bits() < 6_000, "sparse size {}", v.size_bits());
    }

    #[test]
    fn rebuild_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let bits: Vec<bool> = (0..3000).map(|_| rng.gen_bool(0.03)).collect();
        let v = BitVector::from_bits(bits.iter().copied());
        let extracted: Vec<bool> = v.iter().collect();
        assert_eq!(extracted, bits);
        let w = BitVector::from_bits(extracted);
        for i in 0..=bits.len() {
            assert_eq!(v.rank(true, i).unwrap(), w.rank(true, i).unwrap());
        }
    }

    #[test]
    fn packed_ints() {
        let mut p = PackedIntVec::with_width(5);
        for i in 0..100u64 {
            p.push(i % 32);
        }
        for i in 0..100 {
            assert_eq!(p.get(i), (i as u64) % 32);
        }
        let mut p = PackedIntVec::with_width(0);
        p.push(0);
        assert_eq!(p.get(0), 0);
        assert_eq!(PackedIntVec::width_for(0), 0);
        assert_eq!(PackedIntVec::width_for(1), 1);
        assert_eq!(PackedIntVec::width_for(11), 4);
    }

    proptest::proptest! {
        #[test]
        fn prop_rank_select_adjoint(bits in proptest::collection::vec(proptest::bool::ANY, 0..600)) {
            let v = BitVector::from_bits(bits.iter().copied());
            for i in 0..=bits.len() {
                let r1 = v.rank(true, i).unwrap();
                let r0 = v.rank(false, i).unwrap();
                proptest::prop_assert_eq!(r0 + r1, i);
                if r1 >= 1 {
                    let p = v.select(true, r1).unwrap();
                    proptest::prop_assert!(p <= i);
                    if i >= 1 && v.get(i).unwrap() {
                        proptest::prop_assert_eq!(p, i);
                    }
                }
            }
            for j in 1..=v.count_ones() {
                let p = v.select(true, j).unwrap();
                proptest::prop_assert_eq!(v.rank(true, p).unwrap(), j);
                proptest::prop_assert!(v.get(p).unwrap());
            }
        }
    }
}
