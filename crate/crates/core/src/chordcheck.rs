//! Recursive chord construction certifying `T_alpha(p) >= f(p) H(alpha)` on
//! `[1/2, 1]` for one fixed `alpha`.
//!
//! Every chord joins `(k/2^d, T(k/2^d))` and `((k+1)/2^d, T((k+1)/2^d))`.
//! Between consecutive dyadics `T_alpha` lies above such a chord, so once each
//! chord of a tiling of `[1/2, 1]` sits above `f(p) H(alpha)` the inequality
//! holds on `[1/2, 1]`, and the doubling identity carries it to `[0, 1/2]`.
//!
//! Endpoints are exact dyadic pairs; only `T_alpha` and `f` are floating.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::f;
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::table::{alpha_grid, ChannelParam, LexSpec};
use crate::talpha::{t_alpha, TALPHA_MAX_DEPTH};

pub const DEFAULT_DEPTH_CAP: u32 = 40;
pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChordStatus {
    Verified,
    Inconclusive,
}

/// One chord over `[k/2^d, (k+1)/2^d]` and its minimum deficit `nu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordRecord {
    pub p_minus_num: u64,
    pub p_minus_den_log2: u32,
    pub p_plus_num: u64,
    pub p_plus_den_log2: u32,
    pub nu: f64,
    pub depth: u32,
}

impl ChordRecord {
    fn new(k: u64, depth: u32, nu: f64) -> Self {
        Self {
            p_minus_num: k,
            p_minus_den_log2: depth,
            p_plus_num: k + 1,
            p_plus_den_log2: depth,
            nu,
            depth,
        }
    }

    pub fn p_minus(&self) -> LexSpec {
        LexSpec::new(self.p_minus_den_log2, self.p_minus_num).expect("valid by construction")
    }

    pub fn p_plus(&self) -> LexSpec {
        LexSpec::new(self.p_plus_den_log2, self.p_plus_num).expect("valid by construction")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordCertificate {
    pub alpha: f64,
    pub status: ChordStatus,
    pub epsilon: f64,
    pub depth_cap: u32,
    /// Deepest chord examined, whether accepted or not.
    pub max_depth_reached: u32,
    /// Accepted chords sorted by left endpoint.
    pub chords: Vec<ChordRecord>,
    /// The first interval that could not be accepted before the cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failing: Option<ChordRecord>,
}

impl ChordCertificate {
    pub fn is_verified(&self) -> bool {
        self.status == ChordStatus::Verified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    /// Plot CSV: header `p_minus,p_plus,nu,depth`.
    pub fn chords_csv(&self) -> String {
        let mut s = String::from("p_minus,p_plus,nu,depth\n");
        for c in &self.chords {
            s.push_str(&format!(
                "{},{},{},{}\n",
                sig17(c.p_minus().value()),
                sig17(c.p_plus().value()),
                sig17(c.nu),
                c.depth
            ));
        }
        s
    }
}

/// The deficit `D(x) = C(x) - f(x) H(alpha)` of the chord `C` through
/// `(a, T(a))` and `(b, T(b))`. `f` is concave so `D` is convex.
#[derive(Clone, Copy, Debug)]
pub struct ChordDeficit {
    pub a: f64,
    pub b: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub entropy: f64,
}

impl ChordDeficit {
    pub fn new(a: LexSpec, b: LexSpec, ch: ChannelParam) -> Result<Self> {
        Ok(Self {
            a: a.value(),
            b: b.value(),
            t_a: t_alpha(a, ch)?,
            t_b: t_alpha(b, ch)?,
            entropy: ch.entropy(),
        })
    }

    pub fn slope(&self) -> f64 {
        (self.t_b - self.t_a) / (self.b - self.a)
    }

    pub fn chord(&self, x: f64) -> f64 {
        self.t_a + self.slope() * (x - self.a)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.chord(x) - f(x) * self.entropy
    }

    /// Stationary point of `D`: `s + H (log2 x + log2 e) = 0`, i.e.
    /// `x = 2^(-s/H) / e`, clamped to `[a, b]`.
    pub fn argmin(&self) -> f64 {
        let x = (-self.slope() / self.entropy).exp2() / std::f64::consts::E;
        x.clamp(self.a, self.b)
    }

    pub fn minimum(&self) -> f64 {
        self.eval(self.argmin())
    }
}

fn validate_chord(a: LexSpec, b: LexSpec, ch: ChannelParam) -> Result<()> {
    ch.require_interior("the chord check needs 0 < alpha < 1/2")?;
    if !(LexSpec::half() <= a && a < b && b <= LexSpec::one()) {
        return Err(Error::InvalidInterval(format!(
            "need 1/2 <= a < b <= 1, got a={a}, b={b}"
        )));
    }
    let depth = a.reduced().depth().max(b.reduced().depth());
    if depth > TALPHA_MAX_DEPTH {
        return Err(Error::InvalidInterval(format!(
            "chord width below 2^-{TALPHA_MAX_DEPTH} (endpoint depth {depth})"
        )));
    }
    Ok(())
}

/// `min_{x in [a, b]} C(x) - f(x) H(alpha)` in closed form.
pub fn check_chord(a: LexSpec, b: LexSpec, ch: ChannelParam) -> Result<f64> {
    validate_chord(a, b, ch)?;
    Ok(ChordDeficit::new(a, b, ch)?.minimum())
}

struct Search {
    ch: ChannelParam,
    depth_cap: u32,
    epsilon: f64,
    memo: HashMap<LexSpec, f64>,
    chords: Vec<ChordRecord>,
    failing: Option<ChordRecord>,
    max_depth: u32,
}

impl Search {
    fn t(&mut self, s: LexSpec) -> Result<f64> {
        if let Some(&v) = self.memo.get(&s) {
            return Ok(v);
        }
        let v = t_alpha(s, self.ch)?;
        self.memo.insert(s, v);
        Ok(v)
    }

    fn nu(&mut self, k: u64, depth: u32) -> Result<f64> {
        let a = LexSpec::new(depth, k)?;
        let b = LexSpec::new(depth, k + 1)?;
        validate_chord(a, b, self.ch)?;
        let deficit = ChordDeficit {
            a: a.value(),
            b: b.value(),
            t_a: self.t(a)?,
            t_b: self.t(b)?,
            entropy: self.ch.entropy(),
        };
        Ok(deficit.minimum())
    }

    fn run(&mut self, k: u64, depth: u32) -> Result<()> {
        self.max_depth = self.max_depth.max(depth);
        let nu = self.nu(k, depth)?;
        if nu >= -self.epsilon {
            self.chords.push(ChordRecord::new(k, depth, nu));
            return Ok(());
        }
        if depth >= self.depth_cap || depth >= TALPHA_MAX_DEPTH {
            if self.failing.is_none() {
                self.failing = Some(ChordRecord::new(k, depth, nu));
            }
            return Ok(());
        }
        self.run(2 * k, depth + 1)?;
        self.run(2 * k + 1, depth + 1)
    }
}

/// Runs the recursive bisection from `(1/2, 1)`: a chord with `nu >= -epsilon`
/// is accepted, otherwise it is split at its midpoint. Hitting `depth_cap`
/// (or the evaluator's depth cap) yields `INCONCLUSIVE`.
pub fn test_inequality(ch: ChannelParam, depth_cap: u32, epsilon: f64) -> Result<ChordCertificate> {
    ch.require_interior("Algorithm input must satisfy 0 < alpha < 1/2")?;
    if depth_cap < 1 {
        return Err(Error::Infeasible("depth_cap must be at least 1".into()));
    }
    let mut search = Search {
        ch,
        depth_cap,
        epsilon,
        memo: HashMap::new(),
        chords: Vec::new(),
        failing: None,
        max_depth: 0,
    };
    search.run(1, 1)?;
    let mut chords = search.chords;
    chords.sort_by_key(|c| c.p_minus());
    let status = if search.failing.is_none() {
        ChordStatus::Verified
    } else {
        ChordStatus::Inconclusive
    };
    Ok(ChordCertificate {
        alpha: ch.alpha(),
        status,
        epsilon,
        depth_cap,
        max_depth_reached: search.max_depth,
        chords,
        failing: search.failing,
    })
}

/// One certificate per `alpha` of the grid `start, start + step, ..., <= end`.
pub fn sweep(
    alpha_start: f64,
    alpha_end: f64,
    alpha_step: f64,
    depth_cap: u32,
    epsilon: f64,
) -> Result<Vec<ChordCertificate>> {
    let grid = alpha_grid(alpha_start, alpha_end, alpha_step)?;
    sweep_alphas(&grid, depth_cap, epsilon)
}

/// Certificates for an explicit list of channels, in input order.
pub fn sweep_alphas(
    alphas: &[ChannelParam],
    depth_cap: u32,
    epsilon: f64,
) -> Result<Vec<ChordCertificate>> {
    alphas
        .par_iter()
        .map(|&ch| test_inequality(ch, depth_cap, epsilon))
        .collect()
}

/// Counts and the `alpha` values that came back `INCONCLUSIVE`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub verified: usize,
    pub inconclusive_alphas: Vec<f64>,
    pub max_chords: usize,
    pub max_depth_reached: u32,
}

pub fn summarize(certs: &[ChordCertificate]) -> SweepSummary {
    SweepSummary {
        total: certs.len(),
        verified: certs.iter().filter(|c| c.is_verified()).count(),
        inconclusive_alphas: certs
            .iter()
            .filter(|c| !c.is_verified())
            .map(|c| c.alpha)
            .collect(),
        max_chords: certs.iter().map(|c| c.chords.len()).max().unwrap_or(0),
        max_depth_reached: certs.iter().map(|c| c.max_depth_reached).max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: f64) -> ChannelParam {
        ChannelParam::new(a).unwrap()
    }

    fn spec(m: u32, k: u64) -> LexSpec {
        LexSpec::new(m, k).unwrap()
    }

    #[test]
    fn root_chord_is_rejected() {
        for a in [0.01, 0.1, 0.25, 0.4] {
            let c = ch(a);
            let d = ChordDeficit::new(LexSpec::half(), LexSpec::one(), c).unwrap();
            assert!(d.eval(0.5).abs() < 1e-15);
            assert!(d.eval(1.0).abs() < 1e-15);
            assert!(check_chord(LexSpec::half(), LexSpec::one(), c).unwrap() <= 0.0);
        }
    }

    #[test]
    fn upper_quarter_accepted_at_tenth() {
        let nu = check_chord(spec(2, 3), LexSpec::one(), ch(0.1)).unwrap();
        assert!(nu >= 0.0, "nu = {nu}");
    }

    #[test]
    fn chord_preconditions() {
        let c = ch(0.1);
        assert!(check_chord(spec(2, 1), LexSpec::half(), c).is_err());
        assert!(check_chord(LexSpec::one(), spec(2, 3), c).is_err());
        assert!(check_chord(LexSpec::half(), LexSpec::one(), ch(0.5)).is_err());
        assert!(check_chord(LexSpec::half(), LexSpec::one(), ch(0.0)).is_err());
        let tiny_a = spec(30, (1 << 29) + 1);
        let tiny_b = spec(30, (1 << 29) + 2);
        assert!(matches!(
            check_chord(tiny_a, tiny_b, c),
            Err(Error::InvalidInterval(_))
        ));
    }

    #[test]
    fn tenth_certificate() {
        let cert = test_inequality(ch(0.1), DEFAULT_DEPTH_CAP, DEFAULT_EPSILON).unwrap();
        assert!(cert.is_verified());
        assert!((2..=5).contains(&cert.chords.len()), "{cert:?}");
        assert!(test_inequality(ch(0.1), 0, 1e-12).is_err());
        assert!(test_inequality(ch(0.5), 40, 1e-12).is_err());
    }

    #[test]
    fn depth_cap_one_is_inconclusive() {
        let cert = test_inequality(ch(0.1), 1, DEFAULT_EPSILON).unwrap();
        assert_eq!(cert.status, ChordStatus::Inconclusive);
        let f = cert.failing.as_ref().unwrap();
        assert_eq!((f.p_minus_num, f.p_plus_num, f.depth), (1, 2, 1));
    }

    #[test]
    fn sweep_edge_cases() {
        assert!(sweep(0.3, 0.1, 0.1, 40, 1e-12).unwrap().is_empty());
        let one = sweep(0.1, 0.1, 0.001, 40, 1e-12).unwrap();
        let direct = test_inequality(ch(0.1), 40, 1e-12).unwrap();
        assert_eq!(one, vec![direct]);
    }

    #[test]
    fn certificate_json_fields() {
        let cert = test_inequality(ch(0.1), 40, 1e-12).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        for key in ["alpha", "status", "epsilon", "depth_cap", "chords"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["status"], "VERIFIED");
        let c0 = &v["chords"][0];
        for key in [
            "p_minus_num",
            "p_minus_den_log2",
            "p_plus_num",
            "p_plus_den_log2",
            "nu",
            "depth",
        ] {
            assert!(c0.get(key).is_some(), "missing chord field {key}");
        }
        assert!(cert.chords_csv().starts_with("p_minus,p_plus,nu,depth\n"));
    }
}
