//! Exact posteriors, conditional entropy, mutual information and edge
//! boundaries of explicit truth tables under a memoryless BSC.
//!
//! Inputs are uniform and the channel is symmetric, so `Y^n` is uniform too and
//! `Pr{x | y} = alpha^d (1 - alpha)^(n - d)` with `d` the Hamming distance.

use crate::entropy::h;
use crate::error::{Error, Result};
use crate::table::{check_arity, ChannelParam, TruthTable, MAX_ARITY};

/// Arity cap for the `O(4^n)` posterior oracle.
pub const NAIVE_MAX_ARITY: usize = 12;

/// Raw posterior entries farther than this outside `[0, 1]` are an internal error.
const CLAMP_SLACK: f64 = 1e-9;

/// `Pr{b(X^n) = 0 | Y^n = y}` for every output `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorField {
    n: usize,
    values: Vec<f64>,
}

impl PosteriorField {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `2^-n sum_y h(p_y)`, after clamping each entry into `[0, 1]`.
    pub fn mean_binary_entropy(&self) -> Result<f64> {
        let mut acc = 0.0;
        for &p in &self.values {
            acc += h(clamp_probability(p)?);
        }
        Ok(acc / self.values.len() as f64)
    }
}

fn clamp_probability(p: f64) -> Result<f64> {
    if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&p) {
        return Err(Error::PosteriorOutOfRange { value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Posterior field by an `n`-stage butterfly.
///
/// Each stage mixes the pair `(a, b)` differing in one coordinate: the mean is
/// kept and the half-difference is scaled by `1 - 2 alpha`, which is the
/// per-coordinate BSC kernel written in the Walsh basis.
pub fn posterior_transform(b: &TruthTable, ch: ChannelParam) -> Result<PosteriorField> {
    let n = b.n();
    check_arity(n, MAX_ARITY, "posterior transform")?;
    let mut values = vec![0.0f64; b.len()];
    for x in b.zeros() {
        values[x] = 1.0;
    }
    smooth_in_place(&mut values, ch.correlation());
    Ok(PosteriorField { n, values })
}

pub(crate) fn smooth_in_place(values: &mut [f64], rho: f64) {
    let len = values.len();
    let mut half = 1;
    while half < len {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let mean = 0.5 * (*a + *b);
                let diff = 0.5 * (*a - *b) * rho;
                *a = mean + diff;
                *b = mean - diff;
            }
        }
        half <<= 1;
    }
}

/// Posterior field by the direct double sum over `x in B` and all `y`.
pub fn posterior_naive(b: &TruthTable, ch: ChannelParam) -> Result<PosteriorField> {
    let n = b.n();
    check_arity(n, NAIVE_MAX_ARITY, "naive posterior oracle")?;
    let a = ch.alpha();
    let weight: Vec<f64> = (0..=n as i32)
        .map(|d| a.powi(d) * (1.0 - a).powi(n as i32 - d))
        .collect();
    let members: Vec<usize> = b.zeros().collect();
    let values = (0..b.len())
        .map(|y| {
            members
                .iter()
                .map(|&x| weight[(x ^ y).count_ones() as usize])
                .sum()
        })
        .collect();
    Ok(PosteriorField { n, values })
}

/// `H(b(X^n) | Y^n)` in bits.
pub fn cond_entropy(b: &TruthTable, ch: ChannelParam) -> Result<f64> {
    posterior_transform(b, ch)?.mean_binary_entropy()
}

/// `I(b(X^n); Y^n) = H(b(X^n)) - H(b(X^n) | Y^n)`.
pub fn mutual_info(b: &TruthTable, ch: ChannelParam) -> Result<f64> {
    Ok(h(b.zero_probability()) - cond_entropy(b, ch)?)
}

/// Same as [`mutual_info`] with the posterior taken from the naive oracle.
pub fn mutual_info_naive(b: &TruthTable, ch: ChannelParam) -> Result<f64> {
    Ok(h(b.zero_probability()) - posterior_naive(b, ch)?.mean_binary_entropy()?)
}

/// `|B ∩ {x_i = 0}|` for 1-based coordinate `i`.
fn count_with_coordinate_zero(b: &TruthTable, i: usize) -> usize {
    let bit = 1usize << (b.n() - i);
    b.zeros().filter(|x| x & bit == 0).count()
}

/// `I(b(X^n); Y_i)` for a single output coordinate `i` (1-based).
pub fn mutual_info_single(b: &TruthTable, ch: ChannelParam, i: usize) -> Result<f64> {
    let n = b.n();
    if i == 0 || i > n {
        return Err(Error::CoordinateOutOfRange { index: i, n });
    }
    let half = (b.len() / 2) as f64;
    let total = b.count();
    let c0 = count_with_coordinate_zero(b, i) as f64;
    let c1 = (total as f64) - c0;
    let a = ch.alpha();
    // Pr{b = 0 | Y_i = y} averages over the half-cube on which X_i agrees with y
    // (weight 1 - alpha) or disagrees (weight alpha).
    let q0 = ((1.0 - a) * c0 + a * c1) / half;
    let q1 = (a * c0 + (1.0 - a) * c1) / half;
    let cond = 0.5 * (h(clamp_probability(q0)?) + h(clamp_probability(q1)?));
    Ok(h(b.zero_probability()) - cond)
}

/// `sum_i I(b(X^n); Y_i)`.
pub fn sum_single_mi(b: &TruthTable, ch: ChannelParam) -> Result<f64> {
    (1..=b.n()).map(|i| mutual_info_single(b, ch, i)).sum()
}

const LOW_HALF_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Number of hypercube edges with exactly one endpoint in the zero-set.
pub fn edge_boundary(b: &TruthTable) -> u64 {
    let n = b.n();
    let words = b.words();
    let mut count = 0u64;
    for j in 0..n {
        if j < 6 {
            let shift = 1u32 << j;
            for &w in words {
                count += ((w ^ (w >> shift)) & LOW_HALF_MASKS[j]).count_ones() as u64;
            }
        } else {
            let stride = 1usize << (j - 6);
            for i in 0..words.len() {
                if i & stride == 0 {
                    count += (words[i] ^ words[i + stride]).count_ones() as u64;
                }
            }
        }
    }
    count
}
