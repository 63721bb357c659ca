//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use fpg::module::GroupSpec;
use fpg::oracle::EnumerationBudget;
use fpg::selftest::{
    conjugation_family, decomposition_family, groups, length_family, p_power_family, restriction_family,
    theorem_family, FamilyReport, GroupRingTally,
};

const ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

struct Outcome {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn criterion(id: u32, name: &'static str, limit: Option<u64>, body: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = body();
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed < l);
    let outcome = Outcome {
        id,
        name,
        ok: ok && in_time,
        detail,
        elapsed,
        limit,
    };
    let limit_text = outcome.limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    println!(
        "criterion {} {:<28} {}  {:.2}s{}  {}",
        outcome.id,
        outcome.name,
        if outcome.ok { "PASS" } else { "FAIL" },
        outcome.elapsed.as_secs_f64(),
        limit_text,
        outcome.detail
    );
    outcome
}

fn all_groups() -> Vec<GroupSpec> {
    let gs = groups(&[2, 3, 5, 7], 9);
    let mut orders: Vec<usize> = gs.iter().map(GroupSpec::order).collect();
    orders.sort_unstable();
    assert_eq!(orders, ORDERS);
    gs
}

fn with_orders(orders: &[usize]) -> Vec<GroupSpec> {
    all_groups().into_iter().filter(|g| orders.contains(&g.order())).collect()
}

/// Partitions of `dim` with parts at most `max_part`, counted by recursion on the largest part.
fn partitions(dim: usize, max_part: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=max_part.min(dim) {
        for mut rest in partitions(dim - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn partitions_up_to(max_dim: usize, max_part: usize) -> Vec<Vec<usize>> {
    (1..=max_dim).flat_map(|d| partitions(d, max_part)).collect()
}

fn summary(r: &FamilyReport) -> String {
    let mut s = format!(
        "instances={} failures={} skipped={} {}",
        r.instances,
        r.failures,
        r.skipped,
        if r.certified { "certified" } else { "sampled" }
    );
    for e in &r.examples {
        s += &format!(" [{e}]");
    }
    s
}

fn fpg_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fpg"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("write scratch file");
    path
}

fn cli_checks() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;

    let first = fpg_bin().arg("selftest").output().expect("run selftest");
    let second = fpg_bin().arg("selftest").output().expect("run selftest");
    let identical = first.stdout == second.stdout && !first.stdout.is_empty();
    let selftest_ok = first.status.code() == Some(0) && second.status.code() == Some(0);
    ok &= identical && selftest_ok;
    notes.push(format!(
        "selftest identical={identical} exit={:?}/{:?}",
        first.status.code(),
        second.status.code()
    ));

    let id = scratch("identity.txt", "2 3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let out = fpg_bin().arg("jordan-type").arg(&id).output().expect("run jordan-type");
    let good = out.status.code() == Some(0) && String::from_utf8_lossy(&out.stdout).trim() == "1,1,1";
    ok &= good;
    notes.push(format!("jordan-type={}", if good { "ok" } else { "wrong" }));

    let nd = scratch("norm-data.txt", "2 2 1\n5 3 2\n");
    let out = fpg_bin().arg("theorem-ranks").arg(&nd).output().expect("run theorem-ranks");
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let good = out.status.code() == Some(0)
        && text.lines().any(|l| l == "ranks 2 1 2")
        && text.lines().any(|l| l == "dim 12");
    ok &= good;
    notes.push(format!("theorem-ranks={}", if good { "ok" } else { "wrong" }));

    // J_3 over C_4 with the level dimensions (1, 1, 0)
    let bad = scratch(
        "j3-model.txt",
        "2 2 3\n2 3 3\n1 1 0\n0 1 1\n0 0 1\n2 1 3\n1 0 0\n2 1 3\n1 0 0\n2 0 3\n",
    );
    let out = fpg_bin().arg("verify-model").arg(&bad).output().expect("run verify-model");
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let failing: Vec<&str> = text
        .lines()
        .filter(|l| l.ends_with("FAIL"))
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    let good = out.status.code() == Some(1) && failing == ["3"] && text.lines().filter(|l| l.ends_with("pass")).count() == 3;
    ok &= good;
    notes.push(format!("verify-model={} exit={:?}", if good { "ok" } else { "wrong" }, out.status.code()));

    (ok, notes.join(", "))
}

fn main() {
    let groups = all_groups();
    let budget = EnumerationBudget::default();
    let mut tally = GroupRingTally::new();
    let mut outcomes = Vec::new();

    outcomes.push(criterion(1, "single-block restriction", Some(10), || {
        let r = restriction_family(&groups, &mut tally);
        let expected: u64 = groups.iter().map(|g| (g.order() * (g.n() as usize + 1)) as u64).sum();
        (r.passed() && r.certified && r.instances == expected, summary(&r))
    }));

    outcomes.push(criterion(2, "cyclic decomposition", Some(60), || {
        let r = decomposition_family(&groups, 8, &mut tally);
        let expected: u64 = groups.iter().map(|g| partitions_up_to(8, g.order()).len() as u64).sum();
        (r.passed() && r.instances == expected, summary(&r))
    }));

    outcomes.push(criterion(3, "length identities", Some(60), || {
        let mut total = FamilyReport {
            name: "length",
            instances: 0,
            failures: 0,
            skipped: 0,
            certified: true,
            examples: Vec::new(),
        };
        let mut expected = 0u64;
        for g in &groups {
            // largest dimension with p^dim within the budget
            let max_dim = (1..=8).take_while(|&d| budget.allows(g.p(), d)).last().unwrap_or(0);
            let r = length_family(std::slice::from_ref(g), max_dim, &budget);
            for part in partitions_up_to(max_dim, g.order()) {
                expected += (g.p() as u64).pow(part.iter().sum::<usize>() as u32);
            }
            total.instances += r.instances;
            total.failures += r.failures;
            total.certified &= r.certified;
            total.examples.extend(r.examples);
        }
        (total.passed() && total.certified && total.instances == expected, summary(&total))
    }));

    outcomes.push(criterion(4, "rank-formula round trip", Some(30), || {
        let gs = with_orders(&[4, 8, 9]);
        let r = theorem_family(&gs, 16, &mut tally);
        let expected: u64 = gs
            .iter()
            .map(|g| {
                // rank vectors (r_0..r_n) with Σ r_i p^i ≤ 16, the zero module included
                fn count(i: u32, left: usize, g: &GroupSpec) -> u64 {
                    if i > g.n() {
                        return 1;
                    }
                    let w = g.power(i);
                    (0..=left / w).map(|r| count(i + 1, left - r * w, g)).sum()
                }
                count(0, 16, g)
            })
            .sum();
        (r.passed() && r.instances == expected, summary(&r))
    }));

    outcomes.push(criterion(5, "p-power necessity", Some(120), || {
        let gs = with_orders(&[4, 9]);
        let r = p_power_family(&gs, 6, &budget, &mut tally);
        // modules with a non-p-power block and more than four blocks are out of scope
        let out_of_scope: u64 = gs
            .iter()
            .map(|g| {
                partitions_up_to(6, g.order())
                    .iter()
                    .filter(|t| t.iter().any(|&s| !g.is_power_of_p(s)) && t.len() > 4)
                    .count() as u64
            })
            .sum();
        (r.passed() && r.instances > 0 && r.skipped == out_of_scope, summary(&r))
    }));

    outcomes.push(criterion(6, "krull-schmidt invariance", Some(30), || {
        let r = conjugation_family(&groups, 8, 100, &mut tally);
        let expected: u64 = groups.iter().map(|g| 100 * partitions_up_to(8, g.order()).len() as u64).sum();
        (r.passed() && r.instances == expected, summary(&r))
    }));

    let group_ring = tally.report();
    outcomes.push(criterion(7, "group-ring identity", None, || {
        (group_ring.passed() && group_ring.instances > 0, summary(&group_ring))
    }));

    outcomes.push(criterion(8, "cli determinism", None, cli_checks));

    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", outcomes.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
