//! Conjecture drivers: exhaustive or `S_n`-restricted sweeps that reduce
//! per-function information measures into a [`VerificationReport`].
//!
//! Work fans out over functions with rayon; every reduction is done over the
//! collected results in enumeration order, so reports do not depend on the
//! thread count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compression::{
    enumerate_sn, find_triple_counterexample_with, monotone_zero_sets, TripleSearch,
    SN_DEFAULT_CAP, TRIPLE_EXHAUSTIVE_MAX_ARITY, TRIPLE_MARGIN,
};
use crate::entropy::h;
use crate::error::Result;
use crate::infomeasure::{cond_entropy, edge_boundary, sum_single_mi};
use crate::table::{alpha_grid, check_arity, initial_segment, is_lex, ChannelParam, TruthTable};

/// Default comparison tolerance for entropy-valued claims.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest arity for drivers that enumerate every Boolean function.
pub const EXHAUSTIVE_MAX_ARITY: usize = 4;

/// Slack for the full-compression check applied to triple counterexamples.
pub const FULL_COMPRESSION_SLACK: f64 = 1e-12;

/// Default channel grid for the conjecture drivers: 0.01, 0.03, ..., 0.49.
pub fn default_alpha_grid() -> Vec<ChannelParam> {
    alpha_grid(0.01, 0.49, 0.02).expect("static grid is valid")
}

/// Channel grid for the triple-compression search.
pub fn triple_alpha_grid() -> Vec<ChannelParam> {
    [0.05, 0.1, 0.2, 0.3]
        .iter()
        .map(|&a| ChannelParam::new(a).expect("static grid is valid"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjectureId {
    #[serde(rename = "CONJ1")]
    Conj1,
    #[serde(rename = "CONJ2")]
    Conj2,
    #[serde(rename = "SUM_INEQ")]
    SumIneq,
    #[serde(rename = "HARPER")]
    Harper,
    #[serde(rename = "TRIPLE_CE")]
    TripleCe,
}

impl ConjectureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConjectureId::Conj1 => "CONJ1",
            ConjectureId::Conj2 => "CONJ2",
            ConjectureId::SumIneq => "SUM_INEQ",
            ConjectureId::Harper => "HARPER",
            ConjectureId::TripleCe => "TRIPLE_CE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
    Partial,
}

/// Exhaustive over all `2^(2^n)` functions, or restricted to `S_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchSpace {
    Exhaustive,
    Compressed,
}

/// An extremal function and how it compares with the claimed bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub table: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub size: Option<usize>,
    pub value: f64,
    pub reference: f64,
    /// Signed slack of the claim; negative beyond tolerance means violated.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub conjecture_id: ConjectureId,
    pub n: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    pub tolerances: BTreeMap<String, f64>,
    pub candidates: u64,
    pub notes: Vec<String>,
    pub timing: Vec<StageTiming>,
}

impl VerificationReport {
    fn new(id: ConjectureId, n: Vec<usize>, alphas: &[ChannelParam]) -> Self {
        Self {
            conjecture_id: id,
            n,
            alpha_grid: alphas.iter().map(|c| c.alpha()).collect(),
            outcome: Outcome::Pass,
            witnesses: Vec::new(),
            tolerances: BTreeMap::new(),
            candidates: 0,
            notes: Vec::new(),
            timing: Vec::new(),
        }
    }

    fn time<T>(&mut self, stage: &str, work: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = work();
        self.timing.push(StageTiming {
            stage: stage.to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// The report with wall-clock data removed; equal inputs give equal output.
    pub fn without_timing(&self) -> Self {
        Self {
            timing: Vec::new(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} n={:?} outcome={:?}", self.conjecture_id.as_str(), self.n, self.outcome);
        let _ = writeln!(s, "candidates: {}", self.candidates);
        let _ = writeln!(s, "alpha grid: {} values", self.alpha_grid.len());
        for (k, v) in &self.tolerances {
            let _ = writeln!(s, "tolerance {k}: {v:e}");
        }
        for w in &self.witnesses {
            let _ = write!(s, "witness [{}] {}", w.label, w.table);
            if let Some(a) = w.alpha {
                let _ = write!(s, " alpha={a}");
            }
            if let Some(k) = w.size {
                let _ = write!(s, " |B|={k}");
            }
            let _ = write!(s, " value={:.15} reference={:.15} margin={:.3e}", w.value, w.reference, w.margin);
            if let Some(note) = &w.note {
                let _ = write!(s, " ({note})");
            }
            s.push('\n');
        }
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        for t in &self.timing {
            let _ = writeln!(s, "time {}: {:.3}s", t.stage, t.seconds);
        }
        s
    }

    /// `<conjecture_id>_n<k>_<timestamp>`, `k` the largest arity covered.
    pub fn file_stem(&self, timestamp: u64) -> String {
        let n = self.n.iter().max().copied().unwrap_or(0);
        format!("{}_n{}_{}", self.conjecture_id.as_str(), n, timestamp)
    }

    /// Writes `<stem>.json` and `<stem>.txt` into `dir`.
    pub fn write_to_dir(&self, dir: &Path, timestamp: u64) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let stem = self.file_stem(timestamp);
        let json = dir.join(format!("{stem}.json"));
        let text = dir.join(format!("{stem}.txt"));
        std::fs::write(&json, self.to_json())?;
        std::fs::write(&text, self.to_text())?;
        Ok((json, text))
    }
}

fn check_sn_arity(n: usize) -> Result<()> {
    check_arity(n, SN_DEFAULT_CAP, "S_n driver")
}

fn entropies(family: &[TruthTable], ch: ChannelParam) -> Result<Vec<f64>> {
    family.par_iter().map(|b| cond_entropy(b, ch)).collect()
}

/// For each size class, the minimum of `H(b|Y^n)` over `S_n` must not fall
/// below the lex value by more than `tol`.
pub fn verify_conj2(n: usize, alphas: &[ChannelParam], tol: f64) -> Result<VerificationReport> {
    check_sn_arity(n)?;
    let mut report = VerificationReport::new(ConjectureId::Conj2, vec![n], alphas);
    report.tolerances.insert("entropy".into(), tol);
    let family = report.time("enumerate", || enumerate_sn(n))?;
    report.candidates = family.len() as u64;
    let lex_flags: Vec<bool> = family.iter().map(is_lex).collect();
    let sizes: Vec<usize> = family.iter().map(|t| t.count()).collect();
    let mut failures = 0usize;
    let mut co_minimizers = 0usize;
    let mut all_witnesses = Vec::new();
    report.time("evaluate", || -> Result<()> {
        for &ch in alphas {
            let values = entropies(&family, ch)?;
            let lex_values: Vec<f64> = (0..=1usize << n)
                .map(|k| cond_entropy(&initial_segment(n, k as u64)?, ch))
                .collect::<Result<_>>()?;
            // closest non-lex competitor over all classes
            let mut best: Option<(usize, f64)> = None;
            for (idx, &v) in values.iter().enumerate() {
                let margin = v - lex_values[sizes[idx]];
                if margin < -tol {
                    failures += 1;
                    all_witnesses.push(Witness {
                        label: "violation".into(),
                        table: family[idx].to_hex(),
                        alpha: Some(ch.alpha()),
                        size: Some(sizes[idx]),
                        value: v,
                        reference: lex_values[sizes[idx]],
                        margin,
                        note: None,
                    });
                }
                if lex_flags[idx] {
                    continue;
                }
                if margin <= tol {
                    co_minimizers += 1;
                }
                if best.map_or(true, |(_, m)| margin < m) {
                    best = Some((idx, margin));
                }
            }
            let (idx, note) = match best {
                Some((idx, _)) => (idx, "closest non-lex member of S_n"),
                None => {
                    let mid = family
                        .iter()
                        .position(|t| t.count() == 1 << (n - 1))
                        .expect("lex half-set is in S_n");
                    (mid, "S_n has only lex members")
                }
            };
            all_witnesses.push(Witness {
                label: "argmin".into(),
                table: family[idx].to_hex(),
                alpha: Some(ch.alpha()),
                size: Some(sizes[idx]),
                value: values[idx],
                reference: lex_values[sizes[idx]],
                margin: values[idx] - lex_values[sizes[idx]],
                note: Some(note.into()),
            });
        }
        Ok(())
    })?;
    report.witnesses = all_witnesses;
    report.notes.push(format!(
        "non-lex co-minimizers within tolerance (summed over alpha): {co_minimizers}"
    ));
    if failures > 0 {
        report.outcome = Outcome::Fail;
        report.notes.push(format!("{failures} (function, alpha) pairs beat lex"));
    }
    Ok(report)
}

/// `max_{b in S_n} I(b(X^n); Y^n) <= 1 - H(alpha) + tol` for every `alpha`.
pub fn verify_conj1(n: usize, alphas: &[ChannelParam], tol: f64) -> Result<VerificationReport> {
    check_sn_arity(n)?;
    let mut report = VerificationReport::new(ConjectureId::Conj1, vec![n], alphas);
    report.tolerances.insert("information".into(), tol);
    let family = report.time("enumerate", || enumerate_sn(n))?;
    report.candidates = family.len() as u64;
    let dictator = TruthTable::dictator(n, 1)?;
    let marginal: Vec<f64> = family.iter().map(|t| h(t.zero_probability())).collect();
    let mut failed = false;
    let mut witnesses = Vec::new();
    report.time("evaluate", || -> Result<()> {
        for &ch in alphas {
            let values = entropies(&family, ch)?;
            let (idx, best) = values
                .iter()
                .zip(&marginal)
                .map(|(c, m)| m - c)
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            let bound = ch.capacity();
            let margin = bound - best;
            failed |= margin < -tol;
            witnesses.push(Witness {
                label: "argmax".into(),
                table: family[idx].to_hex(),
                alpha: Some(ch.alpha()),
                size: Some(family[idx].count()),
                value: best,
                reference: bound,
                margin,
                note: Some(format!("dictator={}", family[idx] == dictator)),
            });
        }
        Ok(())
    })?;
    report.witnesses = witnesses;
    if failed {
        report.outcome = Outcome::Fail;
    }
    Ok(report)
}

/// `max_b sum_i I(b(X^n); Y_i) <= 1 - H(alpha) + tol`.
pub fn verify_sum_inequality(
    n: usize,
    alphas: &[ChannelParam],
    tol: f64,
    space: SearchSpace,
) -> Result<VerificationReport> {
    let family: Vec<TruthTable> = match space {
        SearchSpace::Exhaustive => {
            check_arity(n, EXHAUSTIVE_MAX_ARITY, "exhaustive sum-inequality driver")?;
            (0..1u64 << (1 << n))
                .map(|bits| TruthTable::from_bits(n, bits))
                .collect::<Result<_>>()?
        }
        SearchSpace::Compressed => {
            check_sn_arity(n)?;
            enumerate_sn(n)?
        }
    };
    let mut report = VerificationReport::new(ConjectureId::SumIneq, vec![n], alphas);
    report.tolerances.insert("information".into(), tol);
    report.candidates = family.len() as u64;
    report.notes.push(format!("search space: {space:?}").to_lowercase());
    let mut failed = false;
    let mut witnesses = Vec::new();
    report.time("evaluate", || -> Result<()> {
        for &ch in alphas {
            let sums: Vec<f64> = family
                .par_iter()
                .map(|b| sum_single_mi(b, ch))
                .collect::<Result<_>>()?;
            let (idx, best) = sums
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
            let bound = ch.capacity();
            failed |= bound - best < -tol;
            witnesses.push(Witness {
                label: "argmax".into(),
                table: family[idx].to_hex(),
                alpha: Some(ch.alpha()),
                size: Some(family[idx].count()),
                value: best,
                reference: bound,
                margin: bound - best,
                note: None,
            });
        }
        Ok(())
    })?;
    report.witnesses = witnesses;
    if failed {
        report.outcome = Outcome::Fail;
    }
    Ok(report)
}

/// Exhaustive edge-isoperimetric check: for every size `k` the minimum edge
/// boundary over all `k`-subsets equals that of `L_n(k)`.
pub fn verify_harper(n: usize) -> Result<VerificationReport> {
    check_arity(n, EXHAUSTIVE_MAX_ARITY, "exhaustive Harper driver")?;
    let mut report = VerificationReport::new(ConjectureId::Harper, vec![n], &[]);
    let len = 1usize << n;
    let (minima, argmins) = report.time("enumerate", || -> Result<(Vec<u64>, Vec<u64>)> {
        let mut minima = vec![u64::MAX; len + 1];
        let mut argmins = vec![0u64; len + 1];
        for bits in 0..1u64 << len {
            let t = TruthTable::from_bits(n, bits)?;
            let k = bits.count_ones() as usize;
            let e = edge_boundary(&t);
            if e < minima[k] {
                minima[k] = e;
                argmins[k] = bits;
            }
        }
        Ok((minima, argmins))
    })?;
    report.candidates = 1u64 << len;
    let mut failed = false;
    for k in 0..=len {
        let lex = edge_boundary(&initial_segment(n, k as u64)?);
        let margin = minima[k] as f64 - lex as f64;
        failed |= minima[k] != lex;
        report.witnesses.push(Witness {
            label: "argmin".into(),
            table: TruthTable::from_bits(n, argmins[k])?.to_hex(),
            alpha: None,
            size: Some(k),
            value: minima[k] as f64,
            reference: lex as f64,
            margin,
            note: None,
        });
    }
    report.tolerances.insert("boundary".into(), 0.0);
    if failed {
        report.outcome = Outcome::Fail;
    }
    Ok(report)
}

/// Searches `n = 3, 4, 5` for functions whose conditional entropy grows under
/// a three-dimensional compression: every function for `n <= 4`, every
/// monotone function for `n = 5`. Each hit is also checked against the full
/// compression to `L_n(|B|)`, which must not increase the entropy.
pub fn verify_triple_counterexample(alphas: &[ChannelParam]) -> Result<VerificationReport> {
    let arities = vec![3, 4, 5];
    let mut report = VerificationReport::new(ConjectureId::TripleCe, arities.clone(), alphas);
    report.tolerances.insert("increase_margin".into(), TRIPLE_MARGIN);
    report.tolerances.insert("full_compression".into(), FULL_COMPRESSION_SLACK);
    let mut hits = Vec::new();
    let mut candidates = 0u64;
    report.time("search", || -> Result<()> {
        for &n in &arities {
            let (mode, space) = if n <= TRIPLE_EXHAUSTIVE_MAX_ARITY {
                (TripleSearch::Exhaustive, 1u64 << (1 << n))
            } else {
                (TripleSearch::Monotone, monotone_zero_sets(n)?.len() as u64)
            };
            candidates += space * alphas.len() as u64;
            let found: Vec<_> = alphas
                .par_iter()
                .map(|&ch| find_triple_counterexample_with(n, ch, mode).map(|w| (ch, w)))
                .collect::<Result<_>>()?;
            hits.extend(found.into_iter().filter_map(|(ch, w)| w.map(|w| (n, ch, w))));
        }
        Ok(())
    })?;
    report
        .notes
        .push("n=3,4: all functions; n=5: all monotone functions".into());
    report.candidates = candidates;
    let mut parenthetical_ok = true;
    for (n, ch, w) in &hits {
        let lex = cond_entropy(&initial_segment(*n, w.table.count() as u64)?, *ch)?;
        let ok = lex <= w.entropy_before + FULL_COMPRESSION_SLACK;
        parenthetical_ok &= ok;
        report.witnesses.push(Witness {
            label: "counterexample".into(),
            table: w.table.to_hex(),
            alpha: Some(ch.alpha()),
            size: Some(w.table.count()),
            value: w.entropy_after,
            reference: w.entropy_before,
            margin: w.delta,
            note: Some(format!(
                "I={} full_compression_entropy={lex:.15} full_compression_ok={ok}",
                w.coords
            )),
        });
    }
    report.outcome = if hits.is_empty() {
        report.notes.push("no counterexample in the searched space".into());
        Outcome::Partial
    } else if parenthetical_ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(report)
}

/// Seconds since the Unix epoch, for report filenames.
pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: f64) -> ChannelParam {
        ChannelParam::new(a).unwrap()
    }

    #[test]
    fn conj2_small() {
        let r = verify_conj2(3, &[ch(0.1)], 1e-9).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.candidates, 10);
        assert!(verify_conj2(8, &[ch(0.1)], 1e-9).is_err());
    }

    #[test]
    fn conj1_small_and_half() {
        let r = verify_conj1(4, &[ch(0.1), ch(0.5)], 1e-9).unwrap();
        assert!(r.passed());
        let w = &r.witnesses[0];
        assert!((w.value - ch(0.1).capacity()).abs() < 1e-12);
        assert!(r.witnesses[1].value.abs() < 1e-12);
    }

    #[test]
    fn sum_modes() {
        let r = verify_sum_inequality(3, &[ch(0.1)], 1e-9, SearchSpace::Exhaustive).unwrap();
        assert!(r.passed());
        assert_eq!(r.candidates, 256);
        assert!(verify_sum_inequality(5, &[ch(0.1)], 1e-9, SearchSpace::Exhaustive).is_err());
        let r = verify_sum_inequality(5, &[ch(0.1)], 1e-9, SearchSpace::Compressed).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn harper_n3() {
        let r = verify_harper(3).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses[4].value, 4.0);
        assert_eq!(r.witnesses[0].value, 0.0);
        assert!(verify_harper(5).is_err());
    }

    #[test]
    fn report_serialisation_is_stable() {
        let r = verify_harper(2).unwrap().without_timing();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["conjecture_id"], "HARPER");
        assert_eq!(v["outcome"], "PASS");
        assert_eq!(r.file_stem(17), "HARPER_n2_17");
        let again = verify_harper(2).unwrap().without_timing();
        assert_eq!(r.to_json(), again.to_json());
    }
}
