//! Truth tables, lexicographic initial segments, dyadic lex specs and the
//! channel parameter.
//!
//! A point `x = (x_1, ..., x_n)` of the cube is indexed by the integer
//! `sum_i x_i 2^(n-i)`: coordinate 1 is the most significant bit, so integer
//! order on indices is lexicographic order on strings and the initial segment
//! `L_n(M)` is the index interval `[0, M)`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::entropy::h;
use crate::error::{Error, Result};

/// Largest arity for which explicit truth tables are built.
pub const MAX_ARITY: usize = 14;

/// Largest depth a [`LexSpec`] may carry (numerators stay within `u64`).
pub const MAX_LEX_SPEC_DEPTH: u32 = 62;

/// A Boolean function on `n` inputs, stored as the bit-vector of its
/// zero-preimage `B = b^{-1}(0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl TruthTable {
    /// The constant function `b = 1` (empty zero-set).
    pub fn empty(n: usize) -> Result<Self> {
        check_arity(n, MAX_ARITY, "explicit truth table")?;
        Ok(Self {
            n,
            words: vec![0; word_count(n)],
        })
    }

    /// The constant function `b = 0` (zero-set is the whole cube).
    pub fn full(n: usize) -> Result<Self> {
        let mut t = Self::empty(n)?;
        for x in 0..t.len() {
            t.set(x, true);
        }
        Ok(t)
    }

    /// Builds a table from the indices of its zero-set.
    pub fn from_zeros<I: IntoIterator<Item = usize>>(n: usize, zeros: I) -> Result<Self> {
        let mut t = Self::empty(n)?;
        for x in zeros {
            if x >= t.len() {
                return Err(Error::SizeOutOfRange {
                    n,
                    size: x as u64,
                    max: t.len() as u64 - 1,
                });
            }
            t.set(x, true);
        }
        Ok(t)
    }

    /// Builds a table from a membership predicate on indices.
    pub fn from_fn<F: FnMut(usize) -> bool>(n: usize, mut in_zero_set: F) -> Result<Self> {
        let mut t = Self::empty(n)?;
        for x in 0..t.len() {
            if in_zero_set(x) {
                t.set(x, true);
            }
        }
        Ok(t)
    }

    /// Builds a table from the low `2^n` bits of `bits` (`n <= 6`).
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::ArityOverCap {
                n,
                cap: 6,
                what: "single-word constructor",
            });
        }
        let mut t = Self::empty(n)?;
        t.words[0] = bits & low_mask(1 << n);
        Ok(t)
    }

    /// Parses a zero-set given as strings of `0`/`1` characters, coordinate 1 first.
    pub fn from_strings(n: usize, members: &[&str]) -> Result<Self> {
        let mut idx = Vec::with_capacity(members.len());
        for s in members {
            if s.len() != n || !s.bytes().all(|c| c == b'0' || c == b'1') {
                return Err(Error::Parse(format!("{s:?} is not a {n}-bit string")));
            }
            idx.push(usize::from_str_radix(s, 2).map_err(|e| Error::Parse(e.to_string()))?);
        }
        Self::from_zeros(n, idx)
    }

    /// Dictator `b(x) = x_i`: the zero-set is `{x : x_i = 0}`.
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::CoordinateOutOfRange { index: i, n });
        }
        let bit = 1usize << (n - i);
        Self::from_fn(n, |x| x & bit == 0)
    }

    /// Parity: the zero-set is the set of even-weight strings.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| x.count_ones() % 2 == 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points of the cube, `2^n`.
    #[inline]
    pub fn len(&self) -> usize {
        1 << self.n
    }

    /// True when the zero-set is empty.
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, member: bool) {
        let w = &mut self.words[x >> 6];
        if member {
            *w |= 1 << (x & 63);
        } else {
            *w &= !(1 << (x & 63));
        }
    }

    /// `|B|`.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `Pr{b(X^n) = 0}` under uniform inputs.
    pub fn zero_probability(&self) -> f64 {
        self.count() as f64 / self.len() as f64
    }

    /// Indices of the zero-set in increasing (lexicographic) order.
    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// The negated function: zero-set replaced by its complement.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let len = self.len();
        if len < 64 {
            words[0] &= low_mask(len);
        }
        Self { n: self.n, words }
    }

    /// Relabels coordinates: input coordinate `i` (1-based) moves to `perm[i-1]`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n + 1];
        if perm.len() != n {
            return Err(Error::InvalidCoordSet(format!(
                "permutation has {} entries, expected {n}",
                perm.len()
            )));
        }
        for &p in perm {
            if p == 0 || p > n || seen[p] {
                return Err(Error::InvalidCoordSet(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let mut out = Self::empty(n)?;
        for x in self.zeros() {
            let mut y = 0usize;
            for (i, &target) in perm.iter().enumerate() {
                if x >> (n - 1 - i) & 1 == 1 {
                    y |= 1 << (n - target);
                }
            }
            out.set(y, true);
        }
        Ok(out)
    }

    /// Hex serialization `n=<n>:<digits>`: the zero-set bit-vector read as the
    /// integer `sum_{x in B} 2^x`, most significant hex digit first.
    pub fn to_hex(&self) -> String {
        let digits = hex_digits(self.n);
        let mut s = format!("n={}:", self.n);
        for j in (0..digits).rev() {
            let bit = 4 * j;
            let nib = (self.words[bit >> 6] >> (bit & 63)) & 0xF;
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("{s:?}: missing \"n=\" prefix")))?;
        let (n_str, hex) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("{s:?}: missing ':' separator")))?;
        let n: usize = n_str
            .parse()
            .map_err(|_| Error::Parse(format!("{n_str:?} is not an arity")))?;
        let mut t = Self::empty(n)?;
        let digits = hex_digits(n);
        if hex.len() != digits {
            return Err(Error::Parse(format!(
                "arity {n} needs {digits} hex digits, got {}",
                hex.len()
            )));
        }
        for (pos, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("{c:?} is not a hex digit")))?
                as u64;
            let bit = 4 * (digits - 1 - pos);
            t.words[bit >> 6] |= nib << (bit & 63);
        }
        let len = t.len();
        if len < 4 && t.words[0] >> len != 0 {
            return Err(Error::Parse(format!("bits set beyond 2^{n}")));
        }
        Ok(t)
    }
}

fn hex_digits(n: usize) -> usize {
    ((1usize << n) / 4).max(1)
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

pub(crate) fn check_arity(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    if n > cap {
        return Err(Error::ArityOverCap { n, cap, what });
    }
    Ok(())
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({})", self.to_hex())
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_hex(s)
    }
}

/// `L_n(M)`: the first `M` strings of `{0,1}^n` in lexicographic order.
pub fn initial_segment(n: usize, size: u64) -> Result<TruthTable> {
    let mut t = TruthTable::empty(n)?;
    let max = t.len() as u64;
    if size > max {
        return Err(Error::SizeOutOfRange { n, size, max });
    }
    let size = size as usize;
    let full = size / 64;
    for w in &mut t.words[..full] {
        *w = u64::MAX;
    }
    if size % 64 != 0 {
        t.words[full] = low_mask(size % 64);
    }
    Ok(t)
}

/// True iff the zero-set is an initial segment of the lexicographic order.
pub fn is_lex(b: &TruthTable) -> bool {
    let size = b.count();
    let full = size / 64;
    b.words.iter().enumerate().all(|(i, &w)| match i.cmp(&full) {
        Ordering::Less => w == u64::MAX,
        Ordering::Equal => w == low_mask(size % 64),
        Ordering::Greater => w == 0,
    })
}

/// The explicit lex function with `Pr{b = 0} = k / 2^m`.
///
/// Depth 0 (constant functions) is lifted to a one-input table.
pub fn lex_of(spec: LexSpec) -> Result<TruthTable> {
    if spec.m as usize > MAX_ARITY {
        return Err(Error::DepthOverCap {
            depth: spec.m,
            cap: MAX_ARITY as u32,
        });
    }
    if spec.m == 0 {
        return initial_segment(1, 2 * spec.k);
    }
    initial_segment(spec.m as usize, spec.k)
}

/// A dyadic rational `k / 2^m` in `[0, 1]`, naming the unique lex function on
/// `m` inputs with `Pr{b = 0} = k / 2^m`.
///
/// Equality, hashing and ordering go through the value, so `2/4 == 1/2`.
#[derive(Clone, Copy, Debug)]
pub struct LexSpec {
    m: u32,
    k: u64,
}

impl LexSpec {
    pub fn new(m: u32, k: u64) -> Result<Self> {
        if m > MAX_LEX_SPEC_DEPTH {
            return Err(Error::DepthOverCap {
                depth: m,
                cap: MAX_LEX_SPEC_DEPTH,
            });
        }
        if k > 1u64 << m {
            return Err(Error::InvalidLexSpec { m, k });
        }
        Ok(Self { m, k })
    }

    pub fn zero() -> Self {
        Self { m: 0, k: 0 }
    }

    pub fn one() -> Self {
        Self { m: 0, k: 1 }
    }

    pub fn half() -> Self {
        Self { m: 1, k: 1 }
    }

    /// Depth `m` (denominator `2^m`).
    pub fn depth(&self) -> u32 {
        self.m
    }

    /// Numerator `k`.
    pub fn numerator(&self) -> u64 {
        self.k
    }

    pub fn value(&self) -> f64 {
        self.k as f64 / (self.m as f64).exp2()
    }

    /// Lowest-terms form: trailing zero binary digits of `k` are dropped.
    pub fn reduced(&self) -> Self {
        if self.k == 0 {
            return Self::zero();
        }
        let tz = self.k.trailing_zeros().min(self.m);
        Self {
            m: self.m - tz,
            k: self.k >> tz,
        }
    }

    /// `(2k+1) / 2^(m+1)`, the midpoint of `k/2^m` and `(k+1)/2^m`.
    pub fn midpoint_right(&self) -> Result<Self> {
        Self::new(self.m + 1, 2 * self.k + 1)
    }

    /// The same value written over `2^depth` (requires `depth >= m`).
    pub fn rescaled(&self, depth: u32) -> Result<Self> {
        if depth < self.m {
            return Err(Error::InvalidLexSpec {
                m: depth,
                k: self.k,
            });
        }
        Self::new(depth, self.k << (depth - self.m))
    }

    /// `2p` (requires `p <= 1/2`).
    pub fn doubled(&self) -> Result<Self> {
        let r = self.reduced();
        if r.k == 0 {
            return Ok(r);
        }
        if r.m == 0 {
            return Err(Error::InvalidLexSpec { m: 0, k: 2 });
        }
        Self::new(r.m - 1, r.k)
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.m.max(other.m);
        let a = (self.k as u128) << (d - self.m);
        let b = (other.k as u128) << (d - other.m);
        a.cmp(&b)
    }
}

impl PartialEq for LexSpec {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for LexSpec {}

impl Hash for LexSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let r = self.reduced();
        r.m.hash(state);
        r.k.hash(state);
    }
}

impl PartialOrd for LexSpec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexSpec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for LexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.k, self.m)
    }
}

/// Crossover probability `alpha` of a memoryless binary symmetric channel,
/// `0 <= alpha <= 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ChannelParam {
    alpha: f64,
}

impl ChannelParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(Error::Domain {
                value: alpha,
                domain: "[0, 1/2]",
            });
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1 - 2 alpha`, the per-coordinate correlation between input and output.
    pub fn correlation(&self) -> f64 {
        1.0 - 2.0 * self.alpha
    }

    /// `H(alpha)` in bits.
    pub fn entropy(&self) -> f64 {
        h(self.alpha)
    }

    /// `1 - H(alpha)`, the capacity of the channel.
    pub fn capacity(&self) -> f64 {
        1.0 - self.entropy()
    }

    /// Strictly inside `(0, 1/2)`.
    pub fn is_interior(&self) -> bool {
        self.alpha > 0.0 && self.alpha < 0.5
    }

    pub(crate) fn require_interior(&self, reason: &'static str) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::InvalidAlpha {
                alpha: self.alpha,
                reason,
            })
        }
    }
}

/// `count` evenly spaced values `start + i * step`; each point is computed
/// from its index so there is no accumulated drift.
pub fn alpha_grid(start: f64, end: f64, step: f64) -> Result<Vec<ChannelParam>> {
    if !(step > 0.0) || end < start {
        return Ok(Vec::new());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            let a = start + i as f64 * step;
            // round to the step's decimal resolution so 0.01 + 24*0.02 prints as 0.49
            let a = (a * 1e12).round() / 1e12;
            ChannelParam::new(a)
        })
        .collect()
}
