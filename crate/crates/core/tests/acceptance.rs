//! Exit criteria. Each test prints one `PASS`/`FAIL` line with its runtime.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use multiphoton::assembly::{
    all_events, find_extrema, Assembler, Classification, Event, ExtremumKind,
};
use multiphoton::decomposition::{component_weights, decompose, ComponentLabel, InputSpec};
use multiphoton::oracle::oracle_distribution;
use multiphoton::output::Table;
use multiphoton::scattering::{detection_table, CouplerSpec};
use multiphoton::spectral::OverlapModel;
use multiphoton::{scan, OverlapModel as Model};

fn criterion(
    id: u32,
    name: &str,
    budget: Duration,
    check: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|detail| {
        if elapsed <= budget {
            Ok(detail)
        } else {
            Err(format!("took {elapsed:?}, budget {budget:?}"))
        }
    });
    match &outcome {
        Ok(detail) => println!("[PASS] criterion {id}: {name} ({elapsed:.2?}) {detail}"),
        Err(why) => println!("[FAIL] criterion {id}: {name} ({elapsed:.2?}) {why}"),
    }
    if let Err(why) = outcome {
        panic!("criterion {id} failed: {why}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bs() -> CouplerSpec {
    CouplerSpec::balanced()
}

fn model() -> Model {
    OverlapModel::from_filter(4e-9, 780e-9).unwrap()
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multiphoton"))
}

/// Parses the whitespace tables printed by `table1` into
/// `(N, event label, [entries])`.
fn parse_table1(text: &str) -> Vec<(String, String, Vec<String>)> {
    let mut out = Vec::new();
    let mut header = String::new();
    for line in text.lines() {
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.is_empty() {
            continue;
        }
        if cells[0].starts_with("p^(") {
            header = cells[0].to_string();
        } else {
            out.push((
                header.clone(),
                cells[0].to_string(),
                cells[1..].iter().map(|s| s.to_string()).collect(),
            ));
        }
    }
    out
}

fn eval_fraction(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn criterion_1_table_reproduction() {
    criterion(
        1,
        "Table 1 exact reproduction",
        Duration::from_secs(1),
        || {
            let expected: [(&str, &str, &[&str]); 4] = [
                ("p^(2;m,n)", "(2,0)", &["1/2", "1/4"]),
                ("p^(2;m,n)", "(1,1)", &["0", "1/2"]),
                ("p^(4;m,n)", "(4,0)", &["3/8", "3/16", "1/16"]),
                ("p^(4;m,n)", "(2,2)", &["1/4", "1/8", "3/8"]),
            ];
            let out = binary().arg("table1").output().map_err(|e| e.to_string())?;
            ensure(out.status.success(), || format!("exit {:?}", out.status))?;
            let rows = parse_table1(&String::from_utf8_lossy(&out.stdout));
            ensure(rows.len() == 4, || format!("{} rows", rows.len()))?;
            for ((h, ev, vals), (eh, eev, evals)) in rows.iter().zip(expected) {
                ensure(h == eh && ev == eev && vals == evals, || {
                    format!("{h} {ev} {vals:?} != {eh} {eev} {evals:?}")
                })?;
            }

            // float mode, straight from the detection table
            let mut worst = 0.0f64;
            for (_, ev, vals) in expected.iter().map(|(h, e, v)| (h, e, v)) {
                let e: Event = ev.trim_matches(|c| c == '(' || c == ')').parse()?;
                let table = detection_table(e.total() / 2, &bs()).map_err(|e| e.to_string())?;
                for (col, v) in table.columns().iter().zip(vals.iter()) {
                    worst = worst.max((col.get(e.m, e.n) - eval_fraction(v)).abs());
                }
            }
            ensure(worst <= 1e-14, || format!("float deviation {worst:e}"))?;

            let out = binary()
                .args(["table1", "--float"])
                .output()
                .map_err(|e| e.to_string())?;
            for ((_, _, vals), (_, _, evals)) in parse_table1(&String::from_utf8_lossy(&out.stdout))
                .iter()
                .zip(expected)
            {
                for (v, e) in vals.iter().zip(evals.iter()) {
                    let d = (v.parse::<f64>().map_err(|e| e.to_string())? - eval_fraction(e)).abs();
                    ensure(d <= 1e-14, || format!("printed float {v} vs {e}"))?;
                }
            }
            Ok(format!("10/10 entries exact, float dev {worst:e}"))
        },
    );
}

#[test]
fn criterion_2_hom_dip() {
    criterion(2, "HOM dip endpoints", Duration::from_secs(1), || {
        let hom = Event::new(1, 1);
        let a = Assembler::new(1, &bs()).map_err(|e| e.to_string())?;
        let at_zero = a.probability_at(1.0, hom).unwrap();
        let at_inf = a.probability_at(0.0, hom).unwrap();
        ensure(at_zero == 0.0, || format!("P(x=0) = {at_zero:e}"))?;
        ensure((at_inf - 0.5).abs() <= 1e-12, || {
            format!("P(u=0) = {at_inf}")
        })?;

        let m = model();
        let xs: Vec<f64> = (0..101).map(|i| (-200.0 + 4.0 * i as f64) * 1e-6).collect();
        let res = scan(1, &m, &xs, &[hom], &bs()).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for row in &res.rows {
            let alpha = m.overlap_from_delay(row.x).unwrap();
            worst = worst.max((row.probs[0] - (1.0 - alpha * alpha) / 2.0).abs());
        }
        ensure(res.rows[50].probs[0] == 0.0, || {
            "scan centre not zero".into()
        })?;
        ensure(worst <= 1e-12, || format!("curve deviation {worst:e}"))?;
        Ok(format!("max deviation {worst:e} over 101 points"))
    });
}

#[test]
fn criterion_3_non_monotonicity() {
    criterion(
        3,
        "non-monotonicity certificate (2,2)",
        Duration::from_secs(1),
        || {
            let rep = find_extrema(2, Event::new(2, 2), &bs(), &model(), 1024)
                .map_err(|e| e.to_string())?;
            ensure((rep.p_zero_delay - 0.25).abs() <= 1e-12, || {
                format!("P(u=1)={}", rep.p_zero_delay)
            })?;
            ensure((rep.p_infinite_delay - 0.375).abs() <= 1e-12, || {
                format!("P(u=0)={}", rep.p_infinite_delay)
            })?;
            ensure(rep.classification == Classification::NonMonotonic, || {
                "classified monotonic".into()
            })?;
            ensure(rep.extrema.len() == 1, || {
                format!("{} extrema", rep.extrema.len())
            })?;
            let ex = rep.extrema[0];
            ensure(ex.kind == ExtremumKind::Minimum, || "not a minimum".into())?;
            let du = (ex.alpha_sq - 2.0 / 3.0).abs();
            let dp = (ex.probability - 5.0 / 24.0).abs();
            ensure(du <= 1e-8, || format!("|u*-2/3| = {du:e}"))?;
            ensure(dp <= 1e-12, || format!("|P*-5/24| = {dp:e}"))?;
            ensure(
                ex.probability < rep.p_zero_delay && ex.probability < rep.p_infinite_delay,
                || "minimum not below both endpoints".into(),
            )?;
            Ok(format!(
                "u*={} (|du|={du:.1e}), P*={} (|dP|={dp:.1e}), x*=±{:.3} um",
                ex.alpha_sq,
                ex.probability,
                ex.delay * 1e6
            ))
        },
    );
}

#[test]
fn criterion_4_bunching_monotonicity() {
    criterion(4, "bunching monotonicity", Duration::from_secs(1), || {
        let us: Vec<f64> = (0..1001).map(|i| i as f64 / 1000.0).collect();
        for k in 1..=3 {
            let a = Assembler::new(k, &bs()).map_err(|e| e.to_string())?;
            let ev = Event::new(2 * k, 0);
            let p: Vec<f64> = us
                .iter()
                .map(|&u| a.probability_at(u, ev).unwrap())
                .collect();
            if let Some(i) = p.windows(2).position(|w| w[1] <= w[0]) {
                return Err(format!("k={k}: not increasing at u={}", us[i]));
            }
        }
        let a = Assembler::new(2, &bs()).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for &u in &us {
            let closed = u * u / 16.0 + u / 4.0 + 1.0 / 16.0;
            worst = worst.max((a.probability_at(u, Event::new(4, 0)).unwrap() - closed).abs());
        }
        ensure(worst <= 1e-12, || {
            format!("k=2 closed form deviation {worst:e}")
        })?;
        Ok(format!(
            "k=1,2,3 strictly increasing; k=2 closed form dev {worst:e}"
        ))
    });
}

#[test]
fn criterion_5_oracle_equivalence() {
    criterion(5, "oracle equivalence", Duration::from_secs(10), || {
        let mut worst = 0.0f64;
        let mut checked = 0;
        for k in 1..=3 {
            let a = Assembler::new(k, &bs()).map_err(|e| e.to_string())?;
            for i in 0..=20 {
                let alpha = i as f64 * 0.05;
                let reference = oracle_distribution(k, alpha, &bs()).map_err(|e| e.to_string())?;
                for ev in all_events(k) {
                    let assembled = a.probability_at(alpha * alpha, ev).unwrap();
                    worst = worst.max((assembled - reference[ev.m]).abs());
                    checked += 1;
                }
            }
        }
        ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
        Ok(format!("{checked} probabilities, max deviation {worst:e}"))
    });
}

#[test]
fn criterion_6_weight_structure() {
    criterion(6, "weight structure", Duration::from_secs(5), || {
        for k in 1..=6 {
            for i in 0..=100 {
                let alpha = i as f64 / 100.0;
                let terms = decompose(&InputSpec::new(k, alpha).unwrap());
                let total: f64 = terms.iter().map(|t| t.weight).sum();
                ensure((total - 1.0).abs() <= 1e-14, || {
                    format!("k={k} alpha={alpha}: sum {total}")
                })?;
                let inter = terms
                    .iter()
                    .filter(|t| t.label == ComponentLabel::Inter)
                    .count();
                ensure(inter == k - 1, || format!("k={k}: {inter} cross terms"))?;
            }
            for j in 1..k {
                let idx = k - j;
                let w = |u: f64| component_weights(k, u)[idx];
                let target = j as f64 / k as f64;
                let argmax = (0..=10_000)
                    .map(|i| i as f64 / 10_000.0)
                    .max_by(|a, b| w(*a).total_cmp(&w(*b)))
                    .unwrap();
                ensure((argmax - target).abs() <= 1e-4, || {
                    format!("k={k} j={j}: peak at {argmax}, expected {target}")
                })?;
                ensure(
                    w(target) >= w(target - 1e-6) && w(target) >= w(target + 1e-6),
                    || format!("k={k} j={j}: u=j/k not a local maximum"),
                )?;
            }
        }
        Ok("k=1..6 normalized, k-1 cross terms, peaks at j/k".into())
    });
}

#[test]
fn criterion_7_hierarchy() {
    criterion(7, "bunching hierarchy", Duration::from_secs(1), || {
        let t = detection_table(2, &bs()).map_err(|e| e.to_string())?;
        let indis = t.component(2).get(4, 0);
        let inter = t.component(1).get(4, 0);
        let dist = t.component(0).get(4, 0);
        ensure(indis > inter && inter > dist, || {
            format!("{indis} {inter} {dist}")
        })?;
        ensure(
            indis == 3.0 / 8.0 && inter == 3.0 / 16.0 && dist == 1.0 / 16.0,
            || format!("values {indis} {inter} {dist}"),
        )?;
        Ok(format!("{indis} > {inter} > {dist}"))
    });
}

fn read_pack(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn parse_csv(bytes: &[u8]) -> Table {
    let text = String::from_utf8_lossy(bytes);
    let mut lines = text.lines();
    let columns = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    Table { columns, rows }
}

#[test]
fn criterion_8_figure_pack() {
    criterion(
        8,
        "figure-pack determinism",
        Duration::from_secs(10),
        || {
            let first = tempfile::tempdir().map_err(|e| e.to_string())?;
            let second = tempfile::tempdir().map_err(|e| e.to_string())?;
            for dir in [first.path(), second.path()] {
                let status = binary()
                    .arg("figures")
                    .arg("--out-dir")
                    .arg(dir)
                    .status()
                    .map_err(|e| e.to_string())?;
                ensure(status.success(), || format!("figures exited {status:?}"))?;
            }
            let a = read_pack(first.path());
            let b = read_pack(second.path());
            let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
            ensure(
                names
                    == [
                        "probs_N4.csv",
                        "probs_N6.csv",
                        "weights_N2.csv",
                        "weights_N4.csv",
                        "weights_N6.csv",
                    ],
                || format!("files {names:?}"),
            )?;
            ensure(a == b, || "runs differ".into())?;

            let table = parse_csv(&a.iter().find(|(n, _)| n == "weights_N4.csv").unwrap().1);
            let u = table.column("alpha_sq").unwrap();
            let indis = table.column("W_indis").unwrap();
            let inter = table.column("W_inter").unwrap();
            let dist = table.column("W_dist").unwrap();
            let dominant: Vec<usize> = (0..u.len())
                .filter(|&i| inter[i] > indis[i] && inter[i] > dist[i])
                .collect();
            ensure(!dominant.is_empty(), || "W_inter never dominant".into())?;
            for &i in &dominant {
                ensure(u[i] > 1.0 / 3.0 - 1e-9 && u[i] < 2.0 / 3.0 + 1e-9, || {
                    format!("W_inter dominant at u={}", u[i])
                })?;
            }
            let nearest_half = (0..u.len())
                .min_by(|&i, &j| (u[i] - 0.5).abs().total_cmp(&(u[j] - 0.5).abs()))
                .unwrap();
            ensure(dominant.contains(&nearest_half), || {
                "u≈1/2 row not dominated by W_inter".into()
            })?;
            Ok(format!(
                "5 files byte-identical; W_inter dominant on {} rows",
                dominant.len()
            ))
        },
    );
}
