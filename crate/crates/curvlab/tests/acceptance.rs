//! Acceptance battery. Prints one line per criterion and exits nonzero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use curvlab::experiments::run_config;
use curvlab::props::{lemma_sweep, oracle_sweep};
use curvlab::report::{CheckRecord, OrderRecord, ProfileTable, Report, Verdict};
use curvlab::suite::paper_suite;

const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(what.into());
        }
    }
}

fn check<'a>(rep: &'a Report, exp: &str, name: &str) -> &'a CheckRecord {
    rep.checks
        .iter()
        .find(|c| c.experiment == exp && c.name == name)
        .unwrap_or_else(|| panic!("missing record {exp} / {name}"))
}

fn checks<'a>(rep: &'a Report, exp: &'a str) -> impl Iterator<Item = &'a CheckRecord> {
    rep.checks.iter().filter(move |c| c.experiment == exp)
}

fn profile<'a>(rep: &'a Report, exp: &str, q: &str) -> &'a ProfileTable {
    rep.profiles
        .iter()
        .find(|p| p.experiment == exp && p.quantity == q)
        .unwrap_or_else(|| panic!("missing profile {exp} / {q}"))
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let sweep = oracle_sweep(10_000, 6, 5, SEED);
    let dt = t.elapsed();
    o.require(sweep.vectors == 10_000, format!("{} vectors", sweep.vectors));
    o.require(sweep.sigma_rel <= 1e-12, format!("sigma relative error {:e}", sweep.sigma_rel));
    o.require(sweep.newton_rel <= 1e-10, format!("newton relative error {:e}", sweep.newton_rel));
    o.require(dt < Duration::from_secs(10), format!("runtime {dt:?}"));
    o.notes.push(format!(
        "sigma {:.1e}, newton {:.1e} on {} diagonal inputs, {:.2?}",
        sweep.sigma_rel, sweep.newton_rel, sweep.newton_vectors, dt
    ));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let sweep = lemma_sweep(100_000, 8, SEED).expect("cone sampling");
    let dt = t.elapsed();
    o.require(sweep.samples == 100_000, format!("{} samples", sweep.samples));
    o.require(sweep.ratio_gap_rel >= -1e-12, format!("ratio gap {:e}", sweep.ratio_gap_rel));
    o.require(sweep.lemma_c_min > 0.0, format!("lemma c gap {:e}", sweep.lemma_c_min));
    o.require(sweep.split_rel <= 1e-12, format!("splitting {:e}", sweep.split_rel));
    o.require(dt < Duration::from_secs(30), format!("runtime {dt:?}"));
    o.notes.push(format!(
        "ratio gap >= {:.1e}, lemma c >= {:.1e}, split {:.1e}, {:.2?}",
        sweep.ratio_gap_rel, sweep.lemma_c_min, sweep.split_rel, dt
    ));
    o
}

fn criterion_3(rep: &Report) -> Outcome {
    let mut o = Outcome::new();
    for exp in ["hm-sphere-r3", "hm-sphere-r3-offset", "hm-sphere-r4", "hm-sphere-r4-offset"] {
        for c in checks(rep, exp) {
            let r = c.values["residual"].abs() / c.values["area"];
            o.require(r <= 1e-8, format!("{exp} {}: {r:e}", c.name));
        }
    }
    let mut worst = 0.0f64;
    for c in checks(rep, "hm-torus3") {
        let r = c.values["residual"].abs() / c.values["area"];
        worst = worst.max(r);
        o.require(r <= 1e-6, format!("torus {}: {r:e}", c.name));
        o.require(c.resolution == Some(256), "torus resolution");
        let order_ok = match c.order {
            Some(OrderRecord::Measured(p)) => p >= 2.0,
            Some(OrderRecord::Label(_)) => true,
            None => false,
        };
        o.require(order_ok, format!("torus {} order {:?}", c.name, c.order));
    }
    o.notes.push(format!("torus residual/area {worst:.1e} (order saturated at roundoff)"));
    o
}

fn criterion_4(rep: &Report) -> Outcome {
    let mut o = Outcome::new();
    for c in checks(rep, "whm-torus3").filter(|c| c.name.starts_with("weighted")) {
        o.require(c.values["relative"].abs() <= 1e-6, format!("torus {}: {:e}", c.name, c.values["relative"]));
    }
    o.require(checks(rep, "whm-torus3").filter(|c| c.name.starts_with("weighted")).count() == 2, "torus k=1,2");
    for (exp, n) in [("whm-schwarzschild3-slice", 3), ("whm-schwarzschild4-slice", 4)] {
        let ks = checks(rep, exp).filter(|c| c.name.starts_with("weighted")).count();
        o.require(ks == n - 1, format!("{exp}: {ks} orders"));
        for c in checks(rep, exp).filter(|c| c.name.starts_with("weighted")) {
            o.require(c.values["relative"].abs() <= 1e-12, format!("{exp} {}: {:e}", c.name, c.values["relative"]));
        }
    }
    for c in rep.checks.iter().filter(|c| c.name.starts_with("divergence form")) {
        o.require(c.values["agreement"] <= 1e-12, format!("{} {}: {:e}", c.experiment, c.name, c.values["agreement"]));
    }
    o
}

fn criterion_5(rep: &Report) -> Outcome {
    let mut o = Outcome::new();
    for exp in ["brendle-sphere", "brendle-schwarzschild-slice"] {
        let c = check(rep, exp, "brendle gap");
        let g = c.values["gap"].abs() / c.values["area"];
        o.require(g <= 1e-8, format!("{exp}: |gap|/area {g:e}"));
    }
    let c = check(rep, "brendle-torus3", "brendle gap");
    let tol = c.tolerance.unwrap();
    o.require(tol <= 1e-8, "torus tolerance");
    o.require(c.values["gap"] > 10.0 * tol * c.values["area"], format!("torus gap {}", c.values["gap"]));
    o.notes.push(format!("torus gap {:.4}", c.values["gap"]));
    o
}

fn criterion_6(rep: &Report) -> Outcome {
    let mut o = Outcome::new();
    for exp in ["conditions-schwarzschild3", "conditions-schwarzschild4"] {
        for h in ["H1", "H2", "H3", "H4"] {
            o.require(check(rep, exp, h).values["holds"] == 1.0, format!("{exp} {h}"));
        }
    }
    let e = "conditions-euclidean3";
    o.require(check(rep, e, "H1").values["holds"] == 0.0, "euclidean H1 should fail");
    o.require(check(rep, e, "H4").values["holds"] == 0.0, "euclidean H4 should fail strictly");
    let ric = check(rep, e, "ricci coefficients");
    o.require(ric.values["alpha_dev"] <= 1e-9 && ric.values["beta_dev"] <= 1e-9, "euclidean ricci");
    for exp in ["conditions-hyperbolic3", "conditions-hyperbolic4"] {
        let h4 = check(rep, exp, "H4").values["margin"];
        o.require(h4.abs() <= 1e-9, format!("{exp} H4 margin {h4:e}"));
        let ric = check(rep, exp, "ricci coefficients");
        o.require(ric.values["grid_points"] == 100.0, "ricci grid");
        o.require(
            ric.values["alpha_dev"] <= 1e-9 && ric.values["beta_dev"] <= 1e-9,
            format!("{exp} ricci {:e} {:e}", ric.values["alpha_dev"], ric.values["beta_dev"]),
        );
    }
    o
}

fn criterion_7(rep: &Report) -> Outcome {
    let mut o = Outcome::new();
    let t3 = "torus3-counterexample";
    let radial = check(rep, t3, "H1 radial");
    o.require(radial.values["relative_spread"] <= 1e-8, format!("torus3 spread {:e}", radial.values["relative_spread"]));
    o.require(check(rep, t3, "H1 increasing").verdict == Verdict::Pass, "torus3 H1 increasing");
    let h1 = profile(rep, t3, "H1");
    let (first, last) = (&h1.rows[0], h1.rows.last().unwrap());
    o.require((first.r - 1.5).abs() <= 1e-12 && (last.r - 2.5).abs() <= 1e-12, "torus3 range [1.5, 2.5]");
    o.require(h1.rows.windows(2).all(|w| w[1].value > w[0].value), "torus3 H1 table increasing");
    o.require((first.value - 2.0 / 3.0).abs() <= 1e-9, format!("inner value {}", first.value));
    o.require((last.value - 1.2).abs() <= 1e-9, format!("outer value {}", last.value));
    o.require(profile(rep, t3, "H1_printed").verdict == Verdict::Info, "printed table carries a verdict");
    o.require(check(rep, t3, "printed H1 formula").verdict == Verdict::Info, "printed record carries a verdict");
    let t4 = "torus4-counterexample";
    for q in ["H1", "H2/H1"] {
        let c = check(rep, t4, &format!("{q} radial"));
        o.require(c.values["relative_spread"] <= 1e-6, format!("torus4 {q} spread {:e}", c.values["relative_spread"]));
        o.require(check(rep, t4, &format!("{q} increasing")).verdict == Verdict::Pass, format!("torus4 {q} increasing"));
    }
    o.notes.push(format!(
        "torus3 spread {:.1e}, torus4 spread {:.1e}",
        radial.values["relative_spread"],
        check(rep, t4, "H1 radial").values["relative_spread"]
    ));
    o
}

fn criterion_8(rep: &Report) -> Outcome {
    let mut o = Outcome::new();
    for exp in ["soliton-sphere-pair01", "soliton-sphere-pair13", "soliton-sphere-uniform"] {
        let c = check(rep, exp, "soliton residual");
        o.require(c.values["sup"] <= 1e-10, format!("{exp} sup {:e}", c.values["sup"]));
        o.require((c.values["mu"] - 1.0).abs() <= 1e-10, format!("{exp} mu {}", c.values["mu"]));
        o.require(c.values["fitted"] == 1.0, format!("{exp} mu was not fitted"));
    }
    let uniform = rep.config["experiment"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == "soliton-sphere-uniform")
        .unwrap();
    o.require(uniform["pairs"].as_array().unwrap().len() == 6, "uniform mix covers all pairs for n=4");
    let t = check(rep, "soliton-translated-sphere", "soliton residual");
    o.require(t.values["sup"] >= 0.25, format!("translated sup {}", t.values["sup"]));
    let e = check(rep, "soliton-ellipsoid", "soliton residual");
    o.require(e.values["sup"] > 10.0 * e.tolerance.unwrap(), format!("ellipsoid sup {}", e.values["sup"]));
    for c in rep.checks.iter().filter(|c| c.experiment.starts_with("soliton-") && c.name.starts_with("chain: (")) {
        o.require(c.values["min_slack"] >= -1e-12, format!("{} {}: {:e}", c.experiment, c.name, c.values["min_slack"]));
    }
    o.notes.push(format!("translated sup {:.3}, ellipsoid sup {:.3}", t.values["sup"], e.values["sup"]));
    o
}

fn criterion_9(first: &Report, first_time: Duration) -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let second = run_config(&paper_suite(None).unwrap()).unwrap();
    let second_time = t.elapsed();
    let (a, b) = (first.to_json().unwrap(), second.to_json().unwrap());
    o.require(first.timestamp.is_none() && second.timestamp.is_none(), "timestamps excluded");
    o.require(a == b, "reports differ between runs");
    let slowest = first_time.max(second_time);
    o.require(slowest < Duration::from_secs(300), format!("suite runtime {slowest:?}"));
    o.require(first.pass, "paper-suite has failing verdicts");
    o.notes.push(format!("{} bytes identical, suite {:.2?}", a.len(), slowest));
    o
}

fn main() -> ExitCode {
    let t = Instant::now();
    let suite = run_config(&paper_suite(Some(SEED)).unwrap()).expect("paper-suite runs");
    let suite_time = t.elapsed();

    let results = [
        ("1 symmetric-function oracles", criterion_1()),
        ("2 Garding-cone lemma suite", criterion_2()),
        ("3 classical integral identity", criterion_3(&suite)),
        ("4 weighted integral identity", criterion_4(&suite)),
        ("5 Brendle gap", criterion_5(&suite)),
        ("6 ambient conditions", criterion_6(&suite)),
        ("7 torus counterexample", criterion_7(&suite)),
        ("8 soliton rigidity", criterion_8(&suite)),
        ("9 determinism and runtime", criterion_9(&suite, suite_time)),
    ];
    let mut all = true;
    for (name, o) in &results {
        all &= o.pass;
        println!("criterion {name:<32} {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.notes.join("; "));
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
