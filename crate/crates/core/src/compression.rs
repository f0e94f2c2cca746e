//! Sections and compressions of subsets of the cube, the two-dimensional
//! compression fixpoint, and enumeration of the compressed family `S_n`.
//!
//! `S_n` is the family of zero-sets that are `I`-compressed for every `|I| <= 2`.
//! A set is `{i}`-compressed iff it is closed under clearing a 1-bit, and it is
//! additionally `{i, j}`-compressed iff it is closed under moving a 1-bit from
//! coordinate `i` to a later zero coordinate `j > i` (the only non-initial
//! section pattern left is `{00, 10}`). So `S_n` is exactly the family of
//! downsets of the [`DominancePoset`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::infomeasure::cond_entropy;
use crate::table::{check_arity, is_lex, ChannelParam, TruthTable, MAX_ARITY};

/// Default arity cap for [`enumerate_sn`].
pub const SN_DEFAULT_CAP: usize = 7;

/// Largest arity for which exhaustive triple-compression search runs over
/// every Boolean function (`2^(2^n)` of them).
pub const TRIPLE_EXHAUSTIVE_MAX_ARITY: usize = 4;

/// Entropy increase a triple compression must exceed to count as a counterexample.
pub const TRIPLE_MARGIN: f64 = 1e-10;

/// Sorted, distinct, 1-based coordinates `i_1 < ... < i_k` of an `n`-input cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordSet {
    n: usize,
    indices: Vec<usize>,
}

impl CoordSet {
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidCoordSet("empty".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCoordSet(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::CoordinateOutOfRange { index: bad, n });
        }
        Ok(Self {
            n,
            indices: indices.to_vec(),
        })
    }

    /// All coordinate sets of size `k`, in lexicographic order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<Self> {
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<CoordSet>) {
            if cur.len() == k {
                out.push(CoordSet {
                    n,
                    indices: cur.clone(),
                });
                return;
            }
            for i in start..=n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k >= 1 && k <= n {
            rec(n, k, 1, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Index bits covered by the coordinates.
    fn mask(&self) -> usize {
        self.indices.iter().map(|&i| 1usize << (self.n - i)).sum()
    }

    /// `offsets[z]` is the index displacement that writes the `k`-bit string
    /// `z` (its first bit on `i_1`) into the coordinates of the set.
    fn scatter_offsets(&self) -> Vec<usize> {
        let k = self.indices.len();
        (0..1usize << k)
            .map(|z| {
                self.indices
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| z >> (k - 1 - j) & 1 == 1)
                    .map(|(_, &i)| 1usize << (self.n - i))
                    .sum()
            })
            .collect()
    }
}

impl std::fmt::Display for CoordSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_same_arity(b: &TruthTable, set: &CoordSet) -> Result<()> {
    if b.n() != set.n {
        return Err(Error::InvalidCoordSet(format!(
            "coordinate set built for arity {} applied to arity {}",
            set.n,
            b.n()
        )));
    }
    Ok(())
}

/// The `I`-section of `B` at base point `x` (which must vanish on `I`): the
/// strings `z` of length `|I|` such that writing `z` into the `I` coordinates
/// of `x` lands in `B`.
pub fn section(b: &TruthTable, set: &CoordSet, x: usize) -> Result<TruthTable> {
    check_same_arity(b, set)?;
    if x >= b.len() {
        return Err(Error::SizeOutOfRange {
            n: b.n(),
            size: x as u64,
            max: b.len() as u64 - 1,
        });
    }
    if x & set.mask() != 0 {
        return Err(Error::BasePointNotZeroOnSection);
    }
    let offsets = set.scatter_offsets();
    TruthTable::from_fn(set.len(), |z| b.contains(x | offsets[z]))
}

/// `C_I(B)`: every `I`-section replaced by the lexicographic initial segment
/// of the same size.
pub fn compress(b: &TruthTable, set: &CoordSet) -> Result<TruthTable> {
    check_same_arity(b, set)?;
    Ok(compress_with(b, set.mask(), &set.scatter_offsets()))
}

fn compress_with(b: &TruthTable, mask: usize, offsets: &[usize]) -> TruthTable {
    let mut out = b.clone();
    for x in (0..b.len()).filter(|x| x & mask == 0) {
        let size = offsets.iter().filter(|&&o| b.contains(x | o)).count();
        for (z, &o) in offsets.iter().enumerate() {
            out.set(x | o, z < size);
        }
    }
    out
}

/// `C_I(B) == B`.
pub fn is_compressed(b: &TruthTable, set: &CoordSet) -> Result<bool> {
    Ok(compress(b, set)? == *b)
}

/// True iff `B` is `I`-compressed for every `I` with `|I| <= 2`.
pub fn in_sn(b: &TruthTable) -> bool {
    let n = b.n();
    (1..=2.min(n)).all(|k| {
        CoordSet::all_of_size(n, k)
            .iter()
            .all(|s| compress(b, s).map(|c| c == *b).unwrap_or(false))
    })
}

/// Repeated one- and two-dimensional compressions until nothing changes.
///
/// Each productive step moves a member strictly lower in lexicographic order,
/// so the sum of member indices strictly decreases and the loop terminates.
/// Sweep order: singletons to convergence, then pairs `(i, j)` in
/// lexicographic order; repeat until a full pass is unproductive.
pub fn two_compress_fixpoint(b: &TruthTable) -> TruthTable {
    let n = b.n();
    let prepared = |k| -> Vec<(usize, Vec<usize>)> {
        CoordSet::all_of_size(n, k)
            .into_iter()
            .map(|s| (s.mask(), s.scatter_offsets()))
            .collect()
    };
    let singles = prepared(1);
    let pairs = prepared(2);
    let mut cur = b.clone();
    loop {
        let mut changed = false;
        loop {
            let mut pass_changed = false;
            for (mask, offs) in &singles {
                let next = compress_with(&cur, *mask, offs);
                if next != cur {
                    cur = next;
                    pass_changed = true;
                }
            }
            if !pass_changed {
                break;
            }
            changed = true;
        }
        for (mask, offs) in &pairs {
            let next = compress_with(&cur, *mask, offs);
            if next != cur {
                cur = next;
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Partial order on the cube generated by two moves: clear a 1-bit, or move a
/// 1-bit from coordinate `i` to a zero coordinate `j > i`. Both moves lower
/// the index, so the order is acyclic with the all-zeros string as minimum.
#[derive(Clone, Debug)]
pub struct DominancePoset {
    n: usize,
    covers: Vec<Vec<usize>>,
}

impl DominancePoset {
    pub fn new(n: usize) -> Result<Self> {
        check_arity(n, MAX_ARITY, "dominance poset")?;
        let covers = (0..1usize << n)
            .map(|x| {
                let mut below = Vec::new();
                for i in 1..=n {
                    let bi = 1usize << (n - i);
                    if x & bi == 0 {
                        continue;
                    }
                    below.push(x & !bi);
                    for j in i + 1..=n {
                        let bj = 1usize << (n - j);
                        if x & bj == 0 {
                            below.push((x & !bi) | bj);
                        }
                    }
                }
                below
            })
            .collect();
        Ok(Self { n, covers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Elements reachable from `x` by one generator move.
    pub fn covers(&self, x: usize) -> &[usize] {
        &self.covers[x]
    }

    pub fn is_downset(&self, b: &TruthTable) -> bool {
        b.n() == self.n && b.zeros().all(|x| self.covers[x].iter().all(|&y| b.contains(y)))
    }

    /// Visits every downset exactly once (depth-first over indices in
    /// increasing order, which is a linear extension).
    pub fn for_each_downset<F: FnMut(&TruthTable)>(&self, visit: F) {
        for_each_downset_of(self.n, &self.covers, visit)
    }
}

fn for_each_downset_of<F: FnMut(&TruthTable)>(n: usize, covers: &[Vec<usize>], mut visit: F) {
    let len = 1usize << n;
    let words = len.div_ceil(64);
    let required: Vec<Vec<u64>> = covers
        .iter()
        .map(|c| {
            let mut m = vec![0u64; words];
            for &y in c {
                m[y >> 6] |= 1 << (y & 63);
            }
            m
        })
        .collect();
    let mut cur = TruthTable::empty(n).expect("arity checked by caller");
    fn dfs<F: FnMut(&TruthTable)>(
        x: usize,
        len: usize,
        required: &[Vec<u64>],
        cur: &mut TruthTable,
        visit: &mut F,
    ) {
        if x == len {
            visit(cur);
            return;
        }
        dfs(x + 1, len, required, cur, visit);
        let ok = required[x]
            .iter()
            .zip(cur.words())
            .all(|(r, c)| r & !c == 0);
        if ok {
            cur.set(x, true);
            dfs(x + 1, len, required, cur, visit);
            cur.set(x, false);
        }
    }
    dfs(0, len, &required, &mut cur, &mut visit);
}

/// Largest arity for [`monotone_zero_sets`] (the Dedekind number `M(5) = 7581`).
pub const MONOTONE_MAX_ARITY: usize = 5;

/// Every zero-set closed under clearing a 1-bit, i.e. every set that is
/// `{i}`-compressed for all `i`.
pub fn monotone_zero_sets(n: usize) -> Result<Vec<TruthTable>> {
    check_arity(n, MONOTONE_MAX_ARITY, "monotone family")?;
    let covers: Vec<Vec<usize>> = (0..1usize << n)
        .map(|x| (0..n).filter(|b| x >> b & 1 == 1).map(|b| x & !(1 << b)).collect())
        .collect();
    let mut out = Vec::new();
    for_each_downset_of(n, &covers, |t| out.push(t.clone()));
    Ok(out)
}

/// `S_n` with the default arity cap.
pub fn enumerate_sn(n: usize) -> Result<Vec<TruthTable>> {
    enumerate_sn_capped(n, SN_DEFAULT_CAP)
}

/// Every member of `S_n`, each exactly once, grouped by `|B|` (ascending).
pub fn enumerate_sn_capped(n: usize, cap: usize) -> Result<Vec<TruthTable>> {
    check_arity(n, cap.min(MAX_ARITY), "S_n enumeration")?;
    let poset = DominancePoset::new(n)?;
    let mut out = Vec::new();
    poset.for_each_downset(|t| out.push(t.clone()));
    out.sort_by_key(|t| t.count());
    Ok(out)
}

/// Text dump: header `# n=<n> count=<count>` then one hex table per line.
pub fn sn_dump(n: usize, tables: &[TruthTable]) -> String {
    let mut s = format!("# n={n} count={}\n", tables.len());
    for t in tables {
        s.push_str(&t.to_hex());
        s.push('\n');
    }
    s
}

/// A function whose conditional entropy grows under a three-dimensional compression.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleCounterexample {
    pub table: TruthTable,
    pub coords: CoordSet,
    pub alpha: f64,
    pub entropy_before: f64,
    pub entropy_after: f64,
    /// `entropy_after - entropy_before`.
    pub delta: f64,
}

/// How [`find_triple_counterexample_with`] walks the space of functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleSearch {
    /// Every Boolean function on `n` inputs (`n <= 4`).
    Exhaustive,
    /// Every monotone function, see [`monotone_zero_sets`] (`n <= 5`).
    Monotone,
    /// `samples` uniformly random functions drawn from a seeded generator.
    Random { seed: u64, samples: usize },
}

/// Searches for `(b, I)` with `|I| = 3` such that compressing `b^{-1}(0)` along
/// `I` raises `H(b(X^n) | Y^n)` by more than [`TRIPLE_MARGIN`]. Exhaustive for
/// `n <= 4`, all monotone functions for `n = 5`, seeded random search above.
pub fn find_triple_counterexample(
    n: usize,
    ch: ChannelParam,
) -> Result<Option<TripleCounterexample>> {
    let mode = if n <= TRIPLE_EXHAUSTIVE_MAX_ARITY {
        TripleSearch::Exhaustive
    } else if n <= MONOTONE_MAX_ARITY {
        TripleSearch::Monotone
    } else {
        TripleSearch::Random {
            seed: 0,
            samples: 200_000,
        }
    };
    find_triple_counterexample_with(n, ch, mode)
}

/// Returns the hit with the largest entropy increase (earliest on ties), or
/// `None` when the searched space has none.
pub fn find_triple_counterexample_with(
    n: usize,
    ch: ChannelParam,
    mode: TripleSearch,
) -> Result<Option<TripleCounterexample>> {
    check_arity(n, MAX_ARITY, "triple-compression search")?;
    let triples: Vec<(CoordSet, usize, Vec<usize>)> = CoordSet::all_of_size(n, 3)
        .into_iter()
        .map(|s| {
            let m = s.mask();
            let o = s.scatter_offsets();
            (s, m, o)
        })
        .collect();
    if triples.is_empty() {
        return Ok(None);
    }
    let mut best: Option<TripleCounterexample> = None;
    let mut examine = |b: TruthTable| -> Result<()> {
        if is_lex(&b) {
            return Ok(());
        }
        let before = cond_entropy(&b, ch)?;
        for (set, mask, offs) in &triples {
            let c = compress_with(&b, *mask, offs);
            if c == b {
                continue;
            }
            let after = cond_entropy(&c, ch)?;
            let delta = after - before;
            if delta > TRIPLE_MARGIN && best.as_ref().is_none_or(|w| delta > w.delta) {
                best = Some(TripleCounterexample {
                    table: b.clone(),
                    coords: set.clone(),
                    alpha: ch.alpha(),
                    entropy_before: before,
                    entropy_after: after,
                    delta,
                });
            }
        }
        Ok(())
    };
    match mode {
        TripleSearch::Exhaustive => {
            if n > TRIPLE_EXHAUSTIVE_MAX_ARITY {
                return Err(Error::ArityOverCap {
                    n,
                    cap: TRIPLE_EXHAUSTIVE_MAX_ARITY,
                    what: "exhaustive triple-compression search",
                });
            }
            for bits in 0..1u64 << (1 << n) {
                examine(TruthTable::from_bits(n, bits)?)?;
            }
        }
        TripleSearch::Monotone => {
            for b in monotone_zero_sets(n)? {
                examine(b)?;
            }
        }
        TripleSearch::Random { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                examine(TruthTable::from_fn(n, |_| rng.gen())?)?;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::initial_segment;

    fn paper_b() -> TruthTable {
        TruthTable::from_strings(3, &["000", "001", "011", "101"]).unwrap()
    }

    fn set(n: usize, idx: &[usize]) -> CoordSet {
        CoordSet::new(n, idx).unwrap()
    }

    fn idx(s: &str) -> usize {
        usize::from_str_radix(s, 2).unwrap()
    }

    #[test]
    fn coord_set_validation() {
        assert!(CoordSet::new(3, &[2, 1]).is_err());
        assert!(CoordSet::new(3, &[1, 1]).is_err());
        assert!(CoordSet::new(3, &[4]).is_err());
        assert!(CoordSet::new(3, &[]).is_err());
        assert_eq!(CoordSet::all_of_size(4, 2).len(), 6);
        assert_eq!(CoordSet::all_of_size(2, 3).len(), 0);
        assert_eq!(set(3, &[1, 3]).to_string(), "{1,3}");
    }

    #[test]
    fn sections_of_worked_example() {
        let b = paper_b();
        let s = section(&b, &set(3, &[1]), idx("001")).unwrap();
        assert_eq!(s, TruthTable::from_strings(1, &["0", "1"]).unwrap());
        let s = section(&b, &set(3, &[2]), idx("100")).unwrap();
        assert!(s.is_empty());
        let s = section(&b, &set(3, &[1, 2]), idx("000")).unwrap();
        assert_eq!(s, TruthTable::from_strings(2, &["00"]).unwrap());
        let s = section(&b, &set(3, &[1, 2]), idx("001")).unwrap();
        assert_eq!(s, TruthTable::from_strings(2, &["00", "01", "10"]).unwrap());
        assert!(matches!(
            section(&b, &set(3, &[1, 2]), idx("100")),
            Err(Error::BasePointNotZeroOnSection)
        ));
        let full = TruthTable::full(4).unwrap();
        let s = section(&full, &set(4, &[2, 4]), idx("1010")).unwrap();
        assert_eq!(s, TruthTable::full(2).unwrap());
    }

    #[test]
    fn compressions_of_worked_example() {
        let b = paper_b();
        let c = compress(&b, &set(3, &[2, 3])).unwrap();
        assert_eq!(
            c,
            TruthTable::from_strings(3, &["000", "001", "010", "100"]).unwrap()
        );
        assert_eq!(compress(&b, &set(3, &[1])).unwrap(), b);
        assert!(is_compressed(&c, &set(3, &[2, 3])).unwrap());
    }

    #[test]
    fn forbidden_two_section() {
        let b = TruthTable::from_strings(2, &["00", "10"]).unwrap();
        assert!(!is_compressed(&b, &set(2, &[1, 2])).unwrap());
        assert!(is_compressed(&b, &set(2, &[1])).unwrap());
        assert!(is_compressed(&b, &set(2, &[2])).unwrap());
        for k in 1..=3 {
            for s in CoordSet::all_of_size(3, k) {
                assert!(is_compressed(&TruthTable::empty(3).unwrap(), &s).unwrap());
            }
        }
    }

    #[test]
    fn lex_sets_are_compressed_everywhere() {
        for n in 1..=4 {
            for m in 0..=(1u64 << n) {
                let l = initial_segment(n, m).unwrap();
                for k in 1..=n {
                    for s in CoordSet::all_of_size(n, k) {
                        assert_eq!(compress(&l, &s).unwrap(), l, "n={n} m={m} I={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn fixpoint_examples() {
        let l = initial_segment(4, 6).unwrap();
        assert_eq!(two_compress_fixpoint(&l), l);
        let f = two_compress_fixpoint(&paper_b());
        assert_eq!(f.count(), 4);
        assert!(in_sn(&f));
        let single = TruthTable::from_strings(2, &["11"]).unwrap();
        assert_eq!(
            two_compress_fixpoint(&single),
            TruthTable::from_strings(2, &["00"]).unwrap()
        );
    }

    #[test]
    fn poset_shape() {
        for n in 1..=6 {
            let p = DominancePoset::new(n).unwrap();
            for x in 0..1usize << n {
                assert!(p.covers(x).iter().all(|&y| y < x));
                assert_eq!(p.covers(x).is_empty(), x == 0);
            }
        }
    }

    #[test]
    fn sn_counts_small() {
        // n = 4 is 27 by brute force over all 2^16 subsets (see tests/characterization.rs)
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_sn(n).unwrap().len()).collect();
        assert_eq!(counts, vec![3, 5, 10, 27, 119, 1173]);
        assert!(enumerate_sn(8).is_err());
        let s3 = enumerate_sn(3).unwrap();
        assert!(s3.windows(2).all(|w| w[0].count() <= w[1].count()));
    }

    #[test]
    fn sn_dump_format() {
        let s = enumerate_sn(2).unwrap();
        let d = sn_dump(2, &s);
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines[0], "# n=2 count=5");
        assert_eq!(lines[1], "n=2:0");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn monotone_family_sizes() {
        // Dedekind numbers
        let sizes: Vec<usize> = (1..=5).map(|n| monotone_zero_sets(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![3, 6, 20, 168, 7581]);
        assert!(monotone_zero_sets(6).is_err());
    }

    #[test]
    fn no_triples_below_three_inputs() {
        let ch = ChannelParam::new(0.1).unwrap();
        assert!(find_triple_counterexample(2, ch).unwrap().is_none());
    }
}
