//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use lexbound::chordcheck::summarize;
use lexbound::talpha::{curve_values, functional_identity_gap, midpoint_concavity_gap, takagi_dyadic_scaled, takagi_limit_gap};
use lexbound::verify::{
    default_alpha_grid, triple_alpha_grid, verify_conj1, verify_conj2, verify_harper,
    verify_sum_inequality, verify_triple_counterexample, SearchSpace,
};
use lexbound::{
    compress, cond_entropy, edge_boundary, enumerate_sn, initial_segment, posterior_naive,
    posterior_transform, sweep, t_alpha, t_alpha_dense, takagi, test_inequality, ChannelParam,
    CoordSet, LexSpec, Outcome, TruthTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ch(a: f64) -> ChannelParam {
    ChannelParam::new(a).expect("alpha in range")
}

fn f(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> TruthTable {
    let density: f64 = rng.gen();
    TruthTable::from_fn(n, |_| rng.gen_bool(density)).unwrap()
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sn_counts() -> Verdict {
    let expected = [5usize, 10, 25, 119, 1173, 44315];
    let start = Instant::now();
    let got: Vec<usize> = (2..=7).map(|n| enumerate_sn(n).unwrap().len()).collect();
    let secs = start.elapsed().as_secs_f64();
    check(
        got == expected && secs < 10.0,
        format!("n=2..7 counts {got:?}, expected {expected:?}, {secs:.2}s"),
    )
}

fn conj2() -> Verdict {
    let grid = default_alpha_grid();
    let mut worst = f64::INFINITY;
    for n in 1..=7 {
        let r = verify_conj2(n, &grid, 1e-9).unwrap();
        worst = r.witnesses.iter().map(|w| w.margin).fold(worst, f64::min);
        if r.outcome != Outcome::Pass {
            return Err(format!("n={n} outcome {:?}", r.outcome));
        }
    }
    Ok(format!("n=1..7, {} alphas, smallest margin {worst:.3e}", grid.len()))
}

fn conj1() -> Verdict {
    let grid = default_alpha_grid();
    let mut worst_gap = 0.0f64;
    for n in 1..=7 {
        let r = verify_conj1(n, &grid, 1e-9).unwrap();
        if r.outcome != Outcome::Pass {
            return Err(format!("n={n} outcome {:?}", r.outcome));
        }
        for w in &r.witnesses {
            worst_gap = worst_gap.max((w.value - w.reference).abs());
        }
    }
    check(
        worst_gap <= 1e-9,
        format!("n=1..7, maximizer within {worst_gap:.3e} of 1-H(alpha)"),
    )
}

fn chord_sweep() -> Verdict {
    let certs = sweep(0.001, 0.499, 0.001, 40, 1e-12).unwrap();
    let s = summarize(&certs);
    check(
        s.total == 499 && s.verified == 499,
        format!(
            "{}/{} VERIFIED, max {} chords, max depth {}",
            s.verified, s.total, s.max_chords, s.max_depth_reached
        ),
    )
}

fn figure() -> Verdict {
    let a = ch(0.1);
    let cert = test_inequality(a, 40, 1e-12).unwrap();
    let chords = cert.chords.len();
    let hh = a.entropy();
    let rows = curve_values(10, a).unwrap();
    let worst = rows
        .iter()
        .map(|&(p, t)| t - f(p) * hh)
        .fold(f64::INFINITY, f64::min);
    let at = |p: f64| {
        rows.iter()
            .find(|r| r.0 == p)
            .map(|&(p, t)| (t - f(p) * hh).abs())
            .unwrap()
    };
    let (e_half, e_one) = (at(0.5), at(1.0));
    check(
        cert.is_verified()
            && (2..=5).contains(&chords)
            && worst >= -1e-12
            && e_half <= 1e-12
            && e_one <= 1e-12,
        format!(
            "{chords} chords, min T-fH {worst:.3e} over {} rows, |gap| {e_half:.1e} at 1/2, {e_one:.1e} at 1",
            rows.len()
        ),
    )
}

fn oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut post_err = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let a = ch(rng.gen_range(0.0..=0.5));
        let b = random_table(&mut rng, n);
        let u = posterior_transform(&b, a).unwrap();
        let v = posterior_naive(&b, a).unwrap();
        for (x, y) in u.values().iter().zip(v.values()) {
            post_err = post_err.max((x - y).abs());
        }
    }
    let mut t_err = 0.0f64;
    for &a in &[0.05, 0.1, 0.25, 0.4] {
        for m in 0..=10u32 {
            for k in 0..=1u64 << m {
                let s = LexSpec::new(m, k).unwrap();
                t_err = t_err.max((t_alpha(s, ch(a)).unwrap() - t_alpha_dense(s, ch(a)).unwrap()).abs());
            }
        }
    }
    check(
        post_err <= 1e-12 && t_err <= 1e-12,
        format!("posterior max err {post_err:.2e}, T_alpha max err {t_err:.2e}"),
    )
}

fn identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut func_gap = 0.0f64;
    for _ in 0..500 {
        let m = rng.gen_range(1..=14u32);
        let k = rng.gen_range(0..=1u64 << (m - 1));
        let a = ch(rng.gen_range(0.001..0.499));
        func_gap = func_gap.max(functional_identity_gap(LexSpec::new(m, k).unwrap(), a).unwrap());
    }
    let mut mid_gap = f64::INFINITY;
    for &a in &[0.05, 0.1, 0.25, 0.4] {
        for m in 0..=10u32 {
            for k in 0..1u64 << m {
                mid_gap = mid_gap.min(midpoint_concavity_gap(m, k, ch(a)).unwrap());
            }
        }
    }
    let mut worst_increase = f64::NEG_INFINITY;
    let mut size_ok = true;
    for _ in 0..500 {
        let n = rng.gen_range(2..=7);
        let b = random_table(&mut rng, n);
        let i = rng.gen_range(1..=n);
        let set = if rng.gen_bool(0.5) {
            CoordSet::new(n, &[i]).unwrap()
        } else {
            let j = (i % n) + 1;
            CoordSet::new(n, &[i.min(j), i.max(j)]).unwrap()
        };
        let a = ch(rng.gen_range(0.0..=0.5));
        let c = compress(&b, &set).unwrap();
        size_ok &= c.count() == b.count() && compress(&c, &set).unwrap() == c;
        let inc = cond_entropy(&c, a).unwrap() - cond_entropy(&b, a).unwrap();
        worst_increase = worst_increase.max(inc);
    }
    check(
        func_gap <= 1e-10 && mid_gap >= -1e-12 && worst_increase <= 1e-12 && size_ok,
        format!(
            "functional gap {func_gap:.2e}, min midpoint gap {mid_gap:.2e}, \
             max compression increase {worst_increase:.2e}, size/idempotence {size_ok}"
        ),
    )
}

fn harper_takagi() -> Verdict {
    for n in 1..=4 {
        let r = verify_harper(n).unwrap();
        if r.outcome != Outcome::Pass {
            return Err(format!("Harper n={n} outcome {:?}", r.outcome));
        }
    }
    for n in 1..=8usize {
        for k in 0..=1u64 << n {
            let s = LexSpec::new(n as u32, k).unwrap();
            let boundary = edge_boundary(&initial_segment(n, k).unwrap());
            let series = (n as f64).exp2() * takagi(s.value(), n as u32).unwrap();
            if boundary != takagi_dyadic_scaled(s) || boundary as f64 != series {
                return Err(format!("edge boundary mismatch at n={n} k={k}"));
            }
        }
    }
    let alphas = [1e-3, 1e-4, 1e-5, 1e-6];
    let mut details = Vec::new();
    for (m, k) in [(2u32, 1u64), (3, 3), (2, 3)] {
        let s = LexSpec::new(m, k).unwrap();
        let gaps: Vec<f64> = alphas.iter().map(|&a| takagi_limit_gap(s, ch(a)).unwrap()).collect();
        let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        details.push(format!("{k}/{}: {:.2e}", 1 << m, gaps[3]));
        if !monotone || gaps[3] > 0.1 {
            return Err(format!("Takagi gaps at {k}/{}: {gaps:?}", 1 << m));
        }
    }
    Ok(format!(
        "Harper n<=4, edge boundary = scaled Takagi for n<=8, gap at 1e-6 {}",
        details.join(", ")
    ))
}

fn sum_inequality() -> Verdict {
    let alphas: Vec<ChannelParam> = [0.05, 0.1, 0.25, 0.4].iter().map(|&a| ch(a)).collect();
    let start = Instant::now();
    let r = verify_sum_inequality(4, &alphas, 1e-9, SearchSpace::Exhaustive).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let worst = r.witnesses.iter().map(|w| w.margin).fold(f64::INFINITY, f64::min);
    check(
        r.outcome == Outcome::Pass && secs < 60.0,
        format!("{} functions, smallest margin {worst:.2e}, {secs:.2}s", r.candidates),
    )
}

fn triple() -> Verdict {
    let r = verify_triple_counterexample(&triple_alpha_grid()).unwrap();
    let hits = r.witnesses.len();
    let best = r.witnesses.iter().map(|w| w.margin).fold(0.0, f64::max);
    check(
        r.outcome == Outcome::Pass && hits > 0 && best > 1e-10,
        format!("{hits} witnesses, largest increase {best:.3e}, outcome {:?}", r.outcome),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("compressed family counts", sn_counts),
        ("lex minimizes conditional entropy, n<=7", conj2),
        ("information bound attained by a dictator, n<=7", conj1),
        ("chord sweep 0.001..0.499", chord_sweep),
        ("T_alpha curve at alpha=0.1", figure),
        ("oracle equivalences", oracles),
        ("identity suite", identities),
        ("edge boundary and Takagi links", harper_takagi),
        ("single-coordinate sum inequality, n=4", sum_inequality),
        ("triple-compression counterexample", triple),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
