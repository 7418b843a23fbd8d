//! The twelve acceptance criteria, one line each.
//!
//! Runs as a plain binary so the report is printed on success too. Exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use pentalab::conjugacy::{ClassCensus, Metric};
use pentalab::davis::{cached_ball, Ball, Budget};
use pentalab::growth::{
    default_window, fit_exponent, nonprimitive_fraction, GrowthLab, GrowthTable, Subject, MAX_CUBE, MAX_HYP,
    MAX_STABILIZER,
};
use pentalab::pieces::{piece_decay, reversing_overlap_cap, PieceConfig};
use pentalab::presentation::VerdictConfig;
use pentalab::qi::{
    claims_check, golden_defect, length_table, measured_lengths, sharpness, tiling_certificate, verify_two_sided,
    TwoSidedConfig,
};
use pentalab::quotient::{density_k, threshold_experiment};
use pentalab::tiling::lengths;

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: String) -> Line {
    Line { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pentalab-acceptance-cache")
}

fn c1() -> Line {
    let t = Instant::now();
    let table = length_table();
    let measured = measured_lengths();
    let elapsed = t.elapsed();
    let want = [0.5306, 0.6269, 0.7672, 1.1989, 1.2265, 1.6169, 3.1838];
    let got = [table.a, table.b, table.c, table.d, table.e, table.f, table.two_g];
    let geo = [measured.a, measured.b, measured.c, measured.d, measured.e, measured.f, measured.two_g];
    let worst = want.iter().zip(&got).map(|(w, g)| (w - g).abs()).fold(0.0, f64::max);
    let worst_geo = want.iter().zip(&geo).map(|(w, g)| (w - g).abs()).fold(0.0, f64::max);
    line(
        worst <= 5e-4 && worst_geo <= 5e-4 && elapsed < Duration::from_secs(1),
        format!("max deviation {worst:.2e} (closed form), {worst_geo:.2e} (measured); {}", secs(elapsed)),
    )
}

fn c2() -> Line {
    let t = length_table();
    let exact = t.lambda == t.d / t.c;
    let gd = golden_defect();
    line(
        (t.lambda - 1.5627).abs() <= 5e-4 && exact && gd <= 1e-12,
        format!("lambda {:.7}, lambda == d/c: {exact}, |cosh 2a - golden| {gd:.1e}", t.lambda),
    )
}

fn c3() -> Line {
    let t = Instant::now();
    let ball = Ball::new(6, &Budget::default()).expect("ball of radius 6");
    let cert = tiling_certificate(&ball);
    let elapsed = t.elapsed();
    line(
        cert.holds(1e-9) && elapsed < Duration::from_secs(30),
        format!(
            "{} chambers; right angle {:.1e}, edge {:.1e}, dual edge {:.1e}, closure {:.1e}; {}",
            cert.chambers,
            cert.right_angle_defect,
            cert.edge_defect,
            cert.dual_edge_defect,
            cert.closure_defect,
            secs(elapsed)
        ),
    )
}

fn c4() -> Line {
    let dir = cache_dir();
    let t = Instant::now();
    let (ball, hit) = match cached_ball(&dir, 10, &Budget::default()) {
        Ok(b) => b,
        Err(e) => return line(false, format!("could not build ball of radius 10: {e}")),
    };
    let load = t.elapsed();
    let t = Instant::now();
    let r = verify_two_sided(&ball, &TwoSidedConfig::default());
    let check = t.elapsed();
    line(
        r.violations() == 0 && r.pairs >= 10_000 && check < Duration::from_secs(300),
        format!(
            "{} pairs, {} lower and {} upper violations, d_H/d_X in [{:.4}, {:.4}]; load {} ({}), check {}",
            r.pairs,
            r.lower_violations,
            r.upper_violations,
            r.min_ratio,
            r.max_ratio,
            secs(load),
            if hit { "cached" } else { "built" },
            secs(check)
        ),
    )
}

fn c5(cube12: &ClassCensus) -> Line {
    let l = lengths();
    let s = match sharpness(cube12) {
        Ok(s) => s,
        Err(e) => return line(false, e.to_string()),
    };
    let inside = s.inf_ratio >= l.c - 1e-9 && s.sup_ratio <= l.d + 1e-9;
    line(
        inside && s.sup_ratio >= 1.15 && s.inf_ratio <= 0.80,
        format!(
            "{} classes; ratios in [{:.6} ({}), {:.6} ({})] vs [c, d] = [{:.6}, {:.6}]",
            s.classes, s.inf_ratio, s.inf_witness, s.sup_ratio, s.sup_witness, l.c, l.d
        ),
    )
}

fn fit(t: &GrowthTable) -> f64 {
    fit_exponent(t, default_window(t)).map(|f| f.b_hat).unwrap_or(f64::NAN)
}

fn c6(lab: &mut GrowthLab) -> Line {
    let tables = (|| {
        Ok::<_, pentalab::Error>((
            lab.growth(Subject::Group, Metric::Hyp, MAX_HYP)?,
            lab.growth(Subject::Group, Metric::Cube, MAX_CUBE)?,
            lab.growth(Subject::WallStabilizer, Metric::Hyp, MAX_STABILIZER)?,
            lab.growth(Subject::WallStabilizer, Metric::Cube, MAX_STABILIZER)?,
        ))
    })();
    let (gh, gc, sh, sc) = match tables {
        Ok(t) => t,
        Err(e) => return line(false, e.to_string()),
    };
    let (bgh, bgc, bsh, bsc) = (fit(&gh), fit(&gc), fit(&sh), fit(&sc));
    line(
        (0.85..=1.15).contains(&bgh) && bsh < 0.1 && bsc < 0.1 && bgc - bsc >= 0.3,
        format!(
            "group hyp {bgh:.4}, group cube {bgc:.4}, stabilizer hyp {bsh:.4}, stabilizer cube {bsc:.4} (to radius {MAX_STABILIZER})"
        ),
    )
}

fn c7(lab: &mut GrowthLab, cube12: &ClassCensus, hyp12: &ClassCensus) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (metric, top, census) in [(Metric::Cube, 12.0, cube12), (Metric::Hyp, MAX_HYP, hyp12)] {
        let res = (|| {
            let group = lab.growth(Subject::Group, metric, if metric == Metric::Cube { MAX_CUBE } else { MAX_HYP })?;
            let prim = lab.growth(Subject::PrimitiveConjugacy, metric, top)?;
            let f = fit_exponent(&group, default_window(&group))?;
            let dominated = prim.rows.iter().all(|&(n, p)| group.count_at(n).map_or(false, |g| p <= g));
            let half = if metric == Metric::Cube { (top / 2.0_f64).floor() } else { top / 2.0 };
            let (fh, ft) = (nonprimitive_fraction(census, half)?, nonprimitive_fraction(census, top)?);
            let bound = top * top * f.b_sandwich / f.a_hat * (-f.b_hat * top / 2.0).exp() + 0.05;
            Ok::<_, pentalab::Error>((f.b_sandwich / f.a_hat, dominated, fh, ft, bound))
        })();
        match res {
            Ok((ratio, dominated, fh, ft, bound)) => {
                ok &= ratio < 20.0 && dominated && ft < fh && ft < 0.05 && ft <= bound;
                parts.push(format!(
                    "{metric:?}: B/A {ratio:.3}, p_n <= f(n) {dominated}, non-primitive {fh:.4} -> {ft:.4}"
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{metric:?}: {e}"));
            }
        }
    }
    line(ok, parts.join("; "))
}

fn c8(lab: &mut GrowthLab, hyp12: &ClassCensus) -> Line {
    let b = match lab.growth(Subject::Group, Metric::Hyp, MAX_HYP) {
        Ok(t) => fit(&t),
        Err(e) => return line(false, e.to_string()),
    };
    let t = Instant::now();
    let d = match piece_decay(hyp12, 2000, 11, &PieceConfig::default()) {
        Ok(d) => d,
        Err(e) => return line(false, e.to_string()),
    };
    let rel = (d.slope + b).abs() / b;
    line(
        d.pairs >= 2000 && d.monotone && rel <= 0.35,
        format!(
            "{} pairs, slope {:.4} on [{:.2}, {:.2}] vs -b {:.4} ({:.1}% off), monotone {}; {}",
            d.pairs,
            d.slope,
            d.window.0,
            d.window.1,
            -b,
            100.0 * rel,
            d.monotone,
            secs(t.elapsed())
        ),
    )
}

fn c9(hyp12: &ClassCensus) -> Line {
    let j = PieceConfig::default().j;
    let t = Instant::now();
    let caps = (reversing_overlap_cap(&hyp12.classes, 6, j, false), reversing_overlap_cap(&hyp12.classes, 8, j, false));
    match caps {
        (Ok(r6), Ok(r8)) => line(
            r6 == r8,
            format!("R_cap {r6:.6} at radius 6, {r8:.6} at radius 8 over {} classes; {}", hyp12.classes.len(), secs(t.elapsed())),
        ),
        (Err(e), _) | (_, Err(e)) => line(false, e.to_string()),
    }
}

fn c10() -> Line {
    let r = match claims_check(2000, 3) {
        Ok(r) => r,
        Err(e) => return line(false, e.to_string()),
    };
    let configs: u64 = r.minima.iter().map(|m| m.samples).sum();
    let minima: Vec<String> =
        r.minima.iter().map(|m| format!("{:?} {:.5}>={:.5}", m.kind, m.observed, m.infimum)).collect();
    line(
        r.pair_margin > 0.05 && r.triple_margin > 0.15 && configs >= 10_000 && r.worst_undercut <= 1e-6,
        format!(
            "margins {:.4}, {:.4}; {configs} crossings, undercut {:.1e}; {}",
            r.pair_margin,
            r.triple_margin,
            r.worst_undercut,
            minima.join(" ")
        ),
    )
}

fn c11(census: &ClassCensus) -> Line {
    let c = 1.0 / 63.51;
    let ks: Vec<u64> = [20.0, 63.0, 127.0, 200.0].iter().map(|&l| density_k(c, l)).collect();
    // independent evaluation of the same floor
    let direct: Vec<u64> = [20.0f64, 63.0, 127.0, 200.0].iter().map(|l| (l / 63.51).exp() as u64).collect();
    let ks_ok = ks == [1, 2, 7, 23] && ks == direct;
    let grid = [4.0, 6.0, 8.0, 10.0, 12.0];
    let cfg = VerdictConfig::default();
    let strict = threshold_experiment(census, &grid, &[0.015], 1.0 / 20.0, 20, 5, &cfg);
    let loose = threshold_experiment(census, &grid, &[0.015], 0.8, 20, 5, &cfg);
    match (strict, loose) {
        (Ok(s), Ok(l)) => {
            let fs: Vec<f64> = s.iter().map(|r| r.success_fraction()).collect();
            let fl: Vec<f64> = l.iter().map(|r| r.success_fraction()).collect();
            let monotone = fs.windows(2).all(|w| w[1] >= w[0]);
            line(
                ks_ok && monotone,
                format!(
                    "k {ks:?}; C'(1/20) success over ell {grid:?}: {fs:?}{}; at alpha 0.8: {fl:?}",
                    if fs.iter().all(|&f| f == 0.0) { " (all zero)" } else { "" }
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => line(false, e.to_string()),
    }
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = pentalab::cli::run(args.iter().copied(), &mut out, &mut err);
    (code, out)
}

fn c12() -> Line {
    let commands: [&[&str]; 3] = [
        &["pentalab", "quotient", "--ell", "10", "--c", "0.015", "--trials", "50", "--seed", "7"],
        &["pentalab", "pieces", "--ell", "6", "--trials", "300", "--seed", "7"],
        &["pentalab", "qi-verify", "--ball-radius", "3", "--ell", "6", "--trials", "200", "--seed", "7"],
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for cmd in commands {
        let mut outs = Vec::new();
        for workers in [None, Some("1"), Some("4")] {
            let mut args: Vec<&str> = cmd.to_vec();
            if let Some(w) = workers {
                args.extend(["--workers", w]);
            }
            outs.push(run_cli(&args));
        }
        let same = outs.windows(2).all(|w| w[0] == w[1]) && !outs[0].1.is_empty();
        ok &= same;
        parts.push(format!("{} {}", cmd[1], if same { "identical" } else { "DIFFERS" }));
    }
    line(ok, format!("runs with default, 1 and 4 workers: {}", parts.join(", ")))
}

fn main() {
    let started = Instant::now();
    let mut lab = GrowthLab::new();
    let cube12 = ClassCensus::build(Metric::Cube, 12.0).expect("cube census");
    let hyp12 = ClassCensus::build(Metric::Hyp, MAX_HYP).expect("hyperbolic census");
    lab.insert_census(cube12.clone());
    lab.insert_census(hyp12.clone());
    let mut failed = 0;
    let mut index = 0;
    let mut push = |name: &str, l: Line| {
        index += 1;
        if !l.pass {
            failed += 1;
        }
        println!("criterion {index:>2} {name:<32} {}  {}", if l.pass { "PASS" } else { "FAIL" }, l.detail);
    };
    push("length table", c1());
    push("lambda and golden ratio", c2());
    push("tiling certificates", c3());
    push("two-sided comparison", c4());
    push("sharpness", c5(&cube12));
    push("growth exponents", c6(&mut lab));
    push("sandwich and primitive classes", c7(&mut lab, &cube12, &hyp12));
    push("piece decay", c8(&mut lab, &hyp12));
    push("reversing-overlap stability", c9(&hyp12));
    push("claims arithmetic", c10());
    push("density harness", c11(&cube12));
    push("determinism", c12());
    drop(push);
    println!("acceptance: {} of 12 passed in {}", 12 - failed, secs(started.elapsed()));
    if failed > 0 {
        std::process::exit(1);
    }
}
