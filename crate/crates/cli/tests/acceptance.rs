//! One line per acceptance criterion, derived from two full `verify-paper` runs.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;

use jetlie_core::catalog::Catalog;
use serde_json::Value;

const SEED: &str = "20100901";

fn verify(report: &std::path::Path) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_jetlie"))
        .args(["verify-paper", "--seed", SEED, "--report"])
        .arg(report)
        .output()
        .expect("jetlie runs");
    out.status.code().unwrap_or(-1)
}

struct Rec {
    id: String,
    expected: String,
    status: String,
    detail: String,
}

fn by_criterion(jsonl: &str) -> BTreeMap<u64, Vec<Rec>> {
    let mut m: BTreeMap<u64, Vec<Rec>> = BTreeMap::new();
    for line in jsonl.lines() {
        let v: Value = serde_json::from_str(line).expect("report line is JSON");
        if v["record"] != "check" {
            continue;
        }
        for c in v["criteria"].as_array().unwrap() {
            m.entry(c.as_u64().unwrap()).or_default().push(Rec {
                id: v["id"].as_str().unwrap().to_string(),
                expected: v["expected"].as_str().unwrap().to_string(),
                status: v["status"].as_str().unwrap().to_string(),
                detail: v["detail"].as_str().unwrap().to_string(),
            });
        }
    }
    m
}

/// Problems with one criterion: missing ids, wrong expectations, non-passing records.
fn judge(recs: &[Rec], holds: &[String], fails: &[String], min: usize) -> Vec<String> {
    let mut bad = Vec::new();
    if recs.len() < min {
        bad.push(format!("only {} checks, want at least {}", recs.len(), min));
    }
    for (ids, want) in [(holds, "pass"), (fails, "fail")] {
        for id in ids {
            match recs.iter().find(|r| &r.id == id) {
                None => bad.push(format!("{} missing", id)),
                Some(r) if r.expected != want => bad.push(format!("{} expects {}", id, r.expected)),
                _ => {}
            }
        }
    }
    for r in recs.iter().filter(|r| r.status != "pass") {
        bad.push(format!("{}: {} ({})", r.id, r.status, r.detail));
    }
    bad
}

fn ids(prefix: &str, names: &[&str]) -> Vec<String> {
    names.iter().map(|n| format!("{}{}", prefix, n)).collect()
}

#[test]
fn acceptance_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    let (ca, cb) = std::thread::scope(|s| {
        let ha = s.spawn(|| verify(&a));
        let hb = s.spawn(|| verify(&b));
        (ha.join().unwrap(), hb.join().unwrap())
    });
    let first = std::fs::read(&a).unwrap();
    let second = std::fs::read(&b).unwrap();
    let recs = by_criterion(std::str::from_utf8(&first).unwrap());
    let cat = Catalog::get().unwrap();
    let none: Vec<Rec> = Vec::new();
    let get = |n: u64| recs.get(&n).unwrap_or(&none);

    let algebras: Vec<&str> = cat.algebras.keys().map(|k| k.as_str()).collect();
    let mut consistency = ids("consistency_generator_", &cat.transformations.keys().map(|k| k.as_str()).collect::<Vec<_>>());
    consistency.extend(ids("consistency_first_order_", &cat.transformations.keys().map(|k| k.as_str()).collect::<Vec<_>>()));
    // the printed projective family is checked against ECGA X1 and must not match it
    let printed = |i: &String| i.starts_with("consistency_generator_") && i.ends_with("_printed");
    let consistency_fails: Vec<String> = consistency.iter().filter(|i| printed(i)).cloned().collect();
    consistency.retain(|i| !printed(i));
    let mutations: Vec<&Rec> = get(13).iter().filter(|r| r.id.starts_with("mutation_") && r.id != "mutation_count").collect();

    let mut lines: Vec<(u64, &str, Vec<String>)> = vec![
        (1, "commutator tables", judge(get(1), &ids("table_", &["cga2", "ecga", "ecga_central_brackets", "cga_general_n2_l1", "cga_general_n2_l3", "cga_general_n3_l1", "cga_general_n3_l3"]), &[], 5)),
        (2, "Jacobi identity", judge(get(2), &ids("jacobi_", &algebras), &[], algebras.len())),
        (3, "prolongation term by term", judge(get(3), &ids("prolongation_", &["acceleration_combination"]), &[], 1)),
        (4, "second-order invariants of the Galilei algebras", judge(get(4), &ids("theorem1_", &["u", "Z1", "Z2", "Z3", "Z4", "galilei_arg_1", "galilei_arg_2", "galilei_arg_3", "galilei_arg_4", "galilei_arg_5", "galilei_arg_6", "galilei_arg_7"]), &ids("theorem1_", &["WII_Y1_1", "WII_Y1_2"]), 14)),
        (5, "pullbacks and conditional invariance", judge(get(5), &ids("theorem2_", &["pullback_Z1", "pullback_Z2", "pullback_Z3", "pullback_Z4", "conditional_X1"]), &ids("theorem2_", &["unconditioned_X1"]), 6)),
        (6, "invariants of the two-field system", judge(get(6), &ids("theorem3_", &["Zu1", "Zu2", "Zu3", "Zu4", "Zv1", "Zv2", "Zv3", "Zv4", "Zuv", "Zuv_X1_on_condition"]), &[], 10)),
        (7, "first-order invariants of ea1 and their count", judge(get(7), &ids("", &["theorem4_u1_x", "theorem4_u1_y", "theorem4_u2_x", "theorem4_u2_y", "theorem4_ecga_W1", "theorem4_ecga_W2", "theorem4_ecga_W3", "rank_ea1_orbit_two_seeds"]), &[], 8)),
        (8, "ea2 transformation laws and ratios", judge(get(8), &ids("theorem5_", &["W1_law", "W2_law", "W3_law", "ratio_W1", "ratio_W2", "ratio_W3", "ratio_shear", "ratio_u1y"]), &[], 8)),
        (9, "ea3 invariants and finite rotation", judge(get(9), &ids("theorem6_", &["Wstar12", "Wstar3", "Wstar", "ratio_div", "ratio_norm", "rotation_Wstar12", "rotation_Wstar3", "rotation_Wstar", "rotation_ratio_div", "rotation_ratio_norm"]), &[], 10)),
        (10, "ECGA invariants, finite laws and ranks", judge(get(10), &ids("", &["theorem7_Wstar12", "theorem7_Wstar3", "theorem7_Ustar", "theorem7_Vstar", "theorem7_law_Wstar12", "theorem7_law_Wstar3", "theorem7_law_Wstar", "theorem7_law_ratio_div", "theorem7_law_ratio_norm", "rank_ecga_orbit", "rank_ecga_invariants"]), &[], 11)),
        (11, "systems on their solution manifolds", judge(get(11), &ids("systems_", &["shallow_water", "flow_ea3", "flow_xinf", "div_free_ea3", "div_free_xinf", "irrotational_ecga", "w_system_ecga", "wave_ecga", "rescaling"]), &ids("systems_", &["shallow_water_Y1_1", "flow_X1", "div_free_X1"]), 15)),
        (12, "generators and first-order expansions", judge(get(12), &consistency, &consistency_fails, 2 * cat.transformations.len())),
        (13, "mutation sensitivity", {
            let mut bad = judge(get(13), &["mutation_count".to_string()], &[], 11);
            if mutations.len() < 10 {
                bad.push(format!("{} mutations", mutations.len()));
            }
            bad.extend(mutations.iter().filter(|r| r.expected != "fail").map(|r| format!("{} is not expected to fail", r.id)));
            bad
        }),
    ];
    let mut det = Vec::new();
    if ca != 0 || cb != 0 {
        det.push(format!("exit codes {} and {}", ca, cb));
    }
    if first.is_empty() || first != second {
        det.push(format!("reports differ ({} and {} bytes)", first.len(), second.len()));
    }
    lines.push((14, "byte-identical reports at a fixed seed", det));

    let mut out = std::io::stdout().lock();
    for (n, what, bad) in &lines {
        let tag = if bad.is_empty() { "PASS" } else { "FAIL" };
        let size = match recs.get(n) {
            Some(r) => format!("{} checks", r.len()),
            None => format!("{} bytes", first.len()),
        };
        writeln!(out, "acceptance {:>2} {} {} [{}]", n, tag, what, size).unwrap();
        for b in bad {
            writeln!(out, "    {}", b).unwrap();
        }
    }
    let failed: Vec<u64> = lines.iter().filter(|l| !l.2.is_empty()).map(|l| l.0).collect();
    assert!(failed.is_empty(), "criteria not met: {:?}", failed);
}
