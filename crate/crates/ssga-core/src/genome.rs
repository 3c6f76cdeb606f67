//! Fixed-length bitstrings with cached OneMax fitness, plus the two
//! variation operators: uniform crossover and standard bit mutation.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// A fixed-length bit vector with its OneMax value (number of 1-bits) cached.
///
/// The length is immutable after construction and the cached fitness is kept
/// in sync by every mutating operation. Bits are packed into `u64` words;
/// unused high bits of the last word are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genome {
    words: Vec<u64>,
    len: usize,
    ones: u32,
}

impl Genome {
    /// All-zero genome of length `n`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "genome length must be at least 1");
        Genome {
            words: vec![0; n.div_ceil(64)],
            len: n,
            ones: 0,
        }
    }

    /// Uniformly random genome of length `n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut g = Genome::zeros(n);
        for w in &mut g.words {
            *w = rng.random();
        }
        g.mask_tail();
        g.ones = g.count_ones();
        g
    }

    /// Genome from explicit bits, most significant first in iteration order.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut g = Genome::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                g.words[i / 64] |= 1 << (i % 64);
                g.ones += 1;
            }
        }
        g
    }

    /// Genome from a string of `'0'`/`'1'` characters, e.g. `"10110"`.
    pub fn from_bit_str(s: &str) -> Self {
        Genome::from_bits(s.chars().map(|ch| match ch {
            '0' => false,
            '1' => true,
            _ => panic!("bit string may only contain '0' and '1', got {ch:?}"),
        }))
    }

    /// Number of bits.
    pub fn len(&self) -> usize {
        self.len
    }

    /// `true` when the genome has length zero. Never true: construction
    /// requires at least one bit.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Cached OneMax value.
    #[inline]
    pub fn fitness(&self) -> u32 {
        self.ones
    }

    /// Recounts the 1-bits from the raw words. Always equals [`fitness`],
    /// which tests exploit as a cache-consistency check.
    ///
    /// [`fitness`]: Genome::fitness
    pub fn onemax(&self) -> u32 {
        self.count_ones()
    }

    /// `true` when every bit is 1, i.e. the genome is the OneMax optimum.
    #[inline]
    pub fn is_optimal(&self) -> bool {
        self.ones as usize == self.len
    }

    /// Value of bit `i`.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Flips bit `i`, updating the cached fitness.
    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        let w = &mut self.words[i / 64];
        *w ^= mask;
        if *w & mask != 0 {
            self.ones += 1;
        } else {
            self.ones -= 1;
        }
    }

    /// Hamming distance to `other`.
    pub fn hamming(&self, other: &Genome) -> u32 {
        assert_eq!(self.len, other.len, "genome lengths differ");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// Replaces `self` with `self | other` (bitwise OR), updating fitness.
    /// OR is monotone in the 1-bit count, so fitness never decreases.
    pub fn or_assign(&mut self, other: &Genome) {
        assert_eq!(self.len, other.len, "genome lengths differ");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            self.ones += (*o & !*w).count_ones();
            *w |= o;
        }
    }

    /// Copies the bits of `other` into `self` without reallocating.
    pub fn clone_from_genome(&mut self, other: &Genome) {
        assert_eq!(self.len, other.len, "genome lengths differ");
        self.words.copy_from_slice(&other.words);
        self.ones = other.ones;
    }

    /// Bits as a `'0'`/`'1'` string (index 0 first).
    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }

    fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << rem) - 1;
        }
    }
}

/// OneMax: the number of 1-bits of `g`, recounted from the raw bits.
pub fn onemax(g: &Genome) -> u32 {
    g.onemax()
}

/// Uniform crossover: every bit of the offspring is inherited from either
/// parent with probability 1/2, independently. Positions where the parents
/// agree are copied unchanged (no randomness is consumed for words in which
/// the parents are identical, which leaves the distribution untouched).
pub fn uniform_crossover<R: Rng + ?Sized>(x: &Genome, y: &Genome, rng: &mut R) -> Genome {
    let mut out = Genome::zeros(x.len());
    uniform_crossover_into(x, y, &mut out, rng);
    out
}

/// In-place variant of [`uniform_crossover`] writing into `out`.
pub fn uniform_crossover_into<R: Rng + ?Sized>(
    x: &Genome,
    y: &Genome,
    out: &mut Genome,
    rng: &mut R,
) {
    assert_eq!(x.len, y.len, "crossover requires parents of equal length");
    assert_eq!(x.len, out.len, "offspring buffer has the wrong length");
    out.words.copy_from_slice(&x.words);
    let mut delta: i32 = 0;
    for (i, (xw, yw)) in x.words.iter().zip(&y.words).enumerate() {
        let diff = xw ^ yw;
        if diff != 0 {
            // Bits set in `take` switch to y's value.
            let take = rng.random::<u64>() & diff;
            let w = xw ^ take;
            delta += w.count_ones() as i32 - xw.count_ones() as i32;
            out.words[i] = w;
        }
    }
    out.ones = (x.ones as i32 + delta) as u32;
    debug_assert_eq!(out.ones, out.count_ones());
}

/// Standard bit mutation: flips each bit independently with probability
/// `c/n`. Returns a new genome with recomputed fitness.
pub fn standard_bit_mutation<R: Rng + ?Sized>(g: &Genome, c: f64, rng: &mut R) -> Genome {
    let mut out = g.clone();
    let mut op = Mutation::new(g.len(), c);
    op.apply(&mut out, rng);
    out
}

/// Reusable standard-bit-mutation operator for a fixed `(n, c)`.
///
/// The per-bit Bernoulli(c/n) flips are realized by sampling the flip count
/// from Binomial(n, c/n) and then choosing that many distinct positions
/// uniformly — distributionally identical and much faster for large `n`.
#[derive(Clone, Debug)]
pub struct Mutation {
    n: usize,
    flips: Binomial,
    positions: Vec<usize>,
}

impl Mutation {
    /// Requires `0 < c <= n`.
    pub fn new(n: usize, c: f64) -> Self {
        assert!(
            c > 0.0 && c <= n as f64,
            "mutation constant must satisfy 0 < c <= n (c = {c}, n = {n})"
        );
        Mutation {
            n,
            flips: Binomial::new(n as u64, c / n as f64).expect("valid binomial parameters"),
            positions: Vec::new(),
        }
    }

    /// Mutates `g` in place and records the flipped positions, retrievable
    /// through [`last_flips`](Mutation::last_flips) until the next call.
    pub fn apply<R: Rng + ?Sized>(&mut self, g: &mut Genome, rng: &mut R) {
        assert_eq!(g.len(), self.n, "genome length does not match the operator");
        let k = self.flips.sample(rng) as usize;
        sample_distinct(self.n, k, &mut self.positions, rng);
        for &p in &self.positions {
            g.flip(p);
        }
    }

    /// Positions flipped by the most recent [`apply`](Mutation::apply).
    pub fn last_flips(&self) -> &[usize] {
        &self.positions
    }

    /// Undoes the most recent [`apply`](Mutation::apply) on `g`.
    pub fn undo(&self, g: &mut Genome) {
        for &p in &self.positions {
            g.flip(p);
        }
    }
}

/// Fills `buf` with `k` distinct positions drawn uniformly from `0..n`.
pub(crate) fn sample_distinct<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    rng: &mut R,
) {
    assert!(k <= n);
    buf.clear();
    if k == 0 {
        return;
    }
    if k * 4 >= n {
        // Dense draw: partial Fisher-Yates shuffle.
        let mut idx: Vec<usize> = (0..n).collect();
        for j in 0..k {
            let t = rng.random_range(j..n);
            idx.swap(j, t);
            buf.push(idx[j]);
        }
    } else {
        // Sparse draw: rejection. k is tiny here, linear scans are cheap.
        while buf.len() < k {
            let p = rng.random_range(0..n);
            if !buf.contains(&p) {
                buf.push(p);
            }
        }
    }
}
