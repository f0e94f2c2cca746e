//! `T_alpha(p) = E_Y f(Pr{b(X^m) = 0 | Y^m})` for the lex function `b` with
//! `Pr{b = 0} = p = k / 2^m`, plus the Takagi function it degenerates to as
//! `alpha -> 0`.
//!
//! For a lex set the posterior factorises along the binary digits of `k`.
//! Writing `u_i = Pr{X_i = 0 | Y_i}` (either `1 - alpha` or `alpha`), the
//! posterior is the fold, innermost digit first,
//!
//! ```text
//! v = 0
//! for i = m down to 1:
//!     v = u_i + (1 - u_i) v   if digit i of k is 1
//!     v = u_i v               otherwise
//! ```
//!
//! and `T_alpha(p)` is the average of `f(v)` over the `2^m` equally likely
//! choices of `u`.

use crate::entropy::{f, h};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::infomeasure::posterior_transform;
use crate::table::{lex_of, ChannelParam, LexSpec};

/// Depth cap for the path-fold evaluator (`2^25` doubles of scratch at the cap).
pub const TALPHA_MAX_DEPTH: u32 = 26;

/// Depth cap for the dense oracle.
pub const TALPHA_DENSE_MAX_DEPTH: u32 = 12;

/// Largest `alpha` treated as inside the small-noise regime of the Takagi limit.
pub const TAKAGI_REGIME_MAX_ALPHA: f64 = 1e-3;

/// A value of `T_alpha` together with its arguments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TalphaValue {
    pub spec: LexSpec,
    pub alpha: ChannelParam,
    pub value: f64,
}

impl TalphaValue {
    pub fn evaluate(spec: LexSpec, alpha: ChannelParam) -> Result<Self> {
        Ok(Self {
            spec,
            alpha,
            value: t_alpha(spec, alpha)?,
        })
    }
}

/// `T_alpha(k / 2^m)` by the path fold, `O(2^m)` time and memory.
pub fn t_alpha(spec: LexSpec, ch: ChannelParam) -> Result<f64> {
    let r = spec.reduced();
    let (m, k) = (r.depth(), r.numerator());
    if k == 0 || k == 1u64 << m {
        return Ok(0.0);
    }
    ch.require_interior("T_alpha needs 0 < alpha < 1/2 away from p in {0, 1}")?;
    if m > TALPHA_MAX_DEPTH {
        return Err(Error::DepthOverCap {
            depth: m,
            cap: TALPHA_MAX_DEPTH,
        });
    }
    let a = ch.alpha();
    let digit = |i: u32| (k >> (m - i)) & 1 == 1;
    let step = |u: f64, v: f64, one: bool| if one { u + (1.0 - u) * v } else { u * v };

    // Level sets for digits m..=2 are materialised by in-place doubling; the
    // outermost digit is folded straight into the sum.
    let mut level = Vec::with_capacity(1usize << (m - 1));
    level.push(0.0f64);
    for i in (2..=m).rev() {
        let one = digit(i);
        let len = level.len();
        level.resize(2 * len, 0.0);
        for j in (0..len).rev() {
            let v = level[j];
            level[2 * j] = step(1.0 - a, v, one);
            level[2 * j + 1] = step(a, v, one);
        }
    }
    let one = digit(1);
    let mut total = 0.0;
    for chunk in level.chunks(4096) {
        let mut partial = 0.0;
        for &v in chunk {
            partial += f(step(1.0 - a, v, one)) + f(step(a, v, one));
        }
        total += partial;
    }
    Ok(total / (m as f64).exp2())
}

/// `T_alpha` from the explicit lex truth table and its full posterior field.
pub fn t_alpha_dense(spec: LexSpec, ch: ChannelParam) -> Result<f64> {
    let r = spec.reduced();
    if r.depth() > TALPHA_DENSE_MAX_DEPTH {
        return Err(Error::DepthOverCap {
            depth: r.depth(),
            cap: TALPHA_DENSE_MAX_DEPTH,
        });
    }
    let table = lex_of(r)?;
    let post = posterior_transform(&table, ch)?;
    let sum: f64 = post.values().iter().map(|&p| f(p.clamp(0.0, 1.0))).sum();
    Ok(sum / post.values().len() as f64)
}

/// `|2 T(p) - T(2p) - 2p H(alpha)|` for `p <= 1/2`.
pub fn functional_identity_gap(spec: LexSpec, ch: ChannelParam) -> Result<f64> {
    if spec > LexSpec::half() {
        return Err(Error::Domain {
            value: spec.value(),
            domain: "[0, 1/2]",
        });
    }
    if spec.reduced().numerator() == 0 {
        return Ok(0.0);
    }
    let t = t_alpha(spec, ch)?;
    let t2 = t_alpha(spec.doubled()?, ch)?;
    Ok((2.0 * t - t2 - 2.0 * spec.value() * ch.entropy()).abs())
}

/// `T((2k+1)/2^(m+1)) - (T(k/2^m) + T((k+1)/2^m)) / 2`.
pub fn midpoint_concavity_gap(m: u32, k: u64, ch: ChannelParam) -> Result<f64> {
    if m >= 63 || k >= 1u64 << m {
        return Err(Error::InvalidLexSpec { m, k });
    }
    let lo = LexSpec::new(m, k)?;
    let hi = LexSpec::new(m, k + 1)?;
    let mid = lo.midpoint_right()?;
    Ok(t_alpha(mid, ch)? - 0.5 * (t_alpha(lo, ch)? + t_alpha(hi, ch)?))
}

/// Partial sum `sum_{j < terms} 2^-j dist(2^j p, Z)` of the Takagi series.
/// For a dyadic `p` of depth `m` the sum is exact once `terms >= m`.
pub fn takagi(p: f64, terms: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            value: p,
            domain: "[0, 1]",
        });
    }
    let mut sum = 0.0;
    let mut x = p;
    let mut scale = 1.0;
    for _ in 0..terms {
        sum += scale * (x - x.round()).abs();
        x *= 2.0;
        scale *= 0.5;
    }
    Ok(sum)
}

/// `2^m * takagi(k / 2^m)` as an exact integer.
pub fn takagi_dyadic_scaled(spec: LexSpec) -> u64 {
    let (m, k) = (spec.depth(), spec.numerator());
    let modulus = 1u128 << m;
    (0..m)
        .map(|j| {
            let r = ((k as u128) << j) % modulus;
            let d = r.min(modulus - r);
            (d >> j) as u64
        })
        .sum()
}

/// `|T_alpha(p) / H(alpha) - takagi(p)|`. Meaningful as a limit only for
/// `alpha <= 1e-3` (see [`in_takagi_regime`]); larger `alpha` still evaluates.
pub fn takagi_limit_gap(spec: LexSpec, ch: ChannelParam) -> Result<f64> {
    ch.require_interior("the Takagi ratio divides by H(alpha)")?;
    let ratio = t_alpha(spec, ch)? / h(ch.alpha());
    let tau = takagi_dyadic_scaled(spec) as f64 / (spec.depth() as f64).exp2();
    Ok((ratio - tau).abs())
}

pub fn in_takagi_regime(ch: ChannelParam) -> bool {
    ch.alpha() > 0.0 && ch.alpha() <= TAKAGI_REGIME_MAX_ALPHA
}

/// Empirical Hölder-1/2 constant at depth `m`:
/// `max_k |T(k/2^m) - T((k+1)/2^m)| * 2^(m/2)`. Reported, never asserted.
pub fn holder_constant_fit(m: u32, ch: ChannelParam) -> Result<f64> {
    let values = curve_values(m, ch)?;
    let scale = (m as f64 / 2.0).exp2();
    Ok(values
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).abs() * scale)
        .fold(0.0, f64::max))
}

/// `(p, T_alpha(p))` for `p = k / 2^m`, `k = 0..=2^m`.
pub fn curve_values(m: u32, ch: ChannelParam) -> Result<Vec<(f64, f64)>> {
    if m > TALPHA_MAX_DEPTH {
        return Err(Error::DepthOverCap {
            depth: m,
            cap: TALPHA_MAX_DEPTH,
        });
    }
    (0..=1u64 << m)
        .map(|k| {
            let s = LexSpec::new(m, k)?;
            Ok((s.value(), t_alpha(s, ch)?))
        })
        .collect()
}

/// Curve CSV with header `p,t_alpha,f_times_H` and `2^m + 1` rows.
pub fn curve_csv(m: u32, ch: ChannelParam) -> Result<String> {
    let hh = ch.entropy();
    let mut s = String::from("p,t_alpha,f_times_H\n");
    for (p, t) in curve_values(m, ch)? {
        s.push_str(&format!("{},{},{}\n", sig17(p), sig17(t), sig17(f(p) * hh)));
    }
    Ok(s)
}
