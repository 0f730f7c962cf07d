//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line. Golden checks go through the
//! `lensfill` binary; grid sweeps call the same driver in-process.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use lensfill_core::numeric::reduce_binary_form;
use lensfill_core::openbook::{
    lantern_substitute, multiplicity_profile, Curve, Factorization, MultiplicityProfile, PlanarPage,
};
use lensfill_core::search::verify_config;
use lensfill_core::IntMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the built binary, requiring exit 0.
fn bin(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lensfill"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "lensfill {} exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn bin_json(args: &[&str]) -> Result<Value, String> {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&bin(&a)?).map_err(|e| e.to_string())
}

/// Runs the driver in-process.
fn run_json(args: &[&str]) -> Result<Value, String> {
    let mut argv = vec!["lensfill"];
    argv.extend(args);
    argv.extend(["--format", "json"]);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = lensfill_cli::run(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("{args:?}: exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn write_temp(dir: &Path, name: &str, text: &str) -> Result<String, String> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| e.to_string())?;
    Ok(path.to_string_lossy().into_owned())
}

fn matrix_of(v: &Value) -> Result<IntMatrix, String> {
    let rows = v
        .as_array()
        .ok_or("matrix is not an array")?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or("row is not an array")?
                .iter()
                .map(|x| x.as_i64().map(BigInt::from).ok_or("entry is not an integer"))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::from_rows(rows).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let cf = bin(&["cf", "11", "4"])?;
    ensure(cf == "[3,4]\n", || format!("cf 11 4 gave {cf:?}"))?;
    let v = bin(&["cfval", "3,4"])?;
    ensure(v == "(11,4)\n", || format!("cfval 3,4 gave {v:?}"))
}

fn criterion_2() -> Check {
    let cases: [(&[&str], &str); 5] = [
        (&["d3", "--chain", "3,4", "--stabs", "1:0,0:2"], "-3/11"),
        (&["d3", "--chain", "3,4", "--stabs", "1:0,1:1"], "-1/11"),
        (&["d3", "--chain", "3,4", "--stabs", "1:0,2:0"], "-5/11"),
        (&["d3", "--matrix", "-11", "--rot", "1", "--chi", "2", "--sigma", "-1"], "-3/11"),
        (&["d3", "--matrix", "-11", "--rot", "3", "--chi", "2", "--sigma", "-1"], "-5/11"),
    ];
    for (args, want) in cases {
        let got = bin(args)?;
        ensure(got.trim_end() == want, || format!("{args:?}: got {got:?}, want {want}"))?;
    }
    Ok(())
}

fn criterion_3(dir: &Path) -> Check {
    for a1 in 3..=6 {
        for a2 in 3..=6 {
            let doc = bin(&["monodromy", &a1.to_string(), &a2.to_string()])?;
            let file = write_temp(dir, &format!("canon_{a1}_{a2}.json"), &doc)?;
            let p = bin_json(&["profile", &file])?;
            for s in p["single"].as_array().ok_or("no single table")? {
                ensure(s["multiplicity"] == 3, || format!("({a1},{a2}) single {s}"))?;
            }
            for j in p["joint"].as_array().ok_or("no joint table")? {
                let h: Vec<&str> = j["holes"]
                    .as_array()
                    .ok_or("bad holes")?
                    .iter()
                    .filter_map(Value::as_str)
                    .collect();
                let kind = |x: &str| x.chars().next().unwrap_or('?');
                let mixed = {
                    let (a, b) = (kind(h[0]), kind(h[1]));
                    (a == 'p' && b == 'n') || (a == 'n' && b == 'p')
                };
                let want = if mixed { 1 } else { 2 };
                ensure(j["multiplicity"] == want, || format!("({a1},{a2}) joint {j}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a47);
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(3..=8usize);
        let colors: Vec<u8> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let block = |k: u8| Curve::from_indices((0..n).filter(|&i| colors[i] == k));
        let (Some(a), Some(b), Some(c)) = (block(0), block(1), block(2)) else {
            continue;
        };
        let page = PlanarPage::new((0..n).map(|i| format!("h{i}"))).map_err(|e| e.to_string())?;
        let mut curves = vec![(a, 1), (b, 1), (c, 1), (a.union(b).union(c), 1)];
        for _ in 0..rng.gen_range(0..6) {
            let m = rng.gen_range(1u64..1 << n);
            curves.push((Curve::from_mask(m).ok_or("bad mask")?, rng.gen_range(1..=3)));
        }
        let f = Factorization::new(page, curves).map_err(|e| e.to_string())?;
        let g = lantern_substitute(&f, [a, b, c]).map_err(|e| e.to_string())?;
        ensure(multiplicity_profile(&g) == multiplicity_profile(&f), || format!("profile changed: {f}"))?;
        ensure(g.homology_class() == f.homology_class(), || format!("class changed: {f}"))?;
        ensure(g.curve_count() + 1 == f.curve_count(), || format!("count: {f} -> {g}"))?;
        done += 1;
    }
    Ok(())
}

/// Every multiset of nonempty subsets within the single-hole budgets,
/// filtered by the full profile.
fn brute_force(page: &PlanarPage, profile: &MultiplicityProfile) -> BTreeSet<Vec<(Curve, u32)>> {
    fn go(
        idx: usize,
        subsets: &[Curve],
        left: &mut Vec<u32>,
        chosen: &mut Vec<(Curve, u32)>,
        page: &PlanarPage,
        profile: &MultiplicityProfile,
        out: &mut BTreeSet<Vec<(Curve, u32)>>,
    ) {
        if idx == subsets.len() {
            if left.iter().all(|&l| l == 0) && !chosen.is_empty() {
                let f = Factorization::new(page.clone(), chosen.clone()).unwrap();
                if verify_config(&f, profile) {
                    out.insert(f.curves().collect());
                }
            }
            return;
        }
        let c = subsets[idx];
        go(idx + 1, subsets, left, chosen, page, profile, out);
        let mut k = 0;
        while c.holes().all(|h| left[h] > 0) {
            for h in c.holes() {
                left[h] -= 1;
            }
            k += 1;
            chosen.push((c, k));
            go(idx + 1, subsets, left, chosen, page, profile, out);
            chosen.pop();
        }
        for h in c.holes() {
            left[h] += k;
        }
    }
    let n = page.len();
    let subsets: Vec<Curve> = (1u64..1 << n).filter_map(Curve::from_mask).collect();
    let mut left: Vec<u32> = (0..n).map(|h| profile.single(h)).collect();
    let mut out = BTreeSet::new();
    go(0, &subsets, &mut left, &mut Vec::new(), page, profile, &mut out);
    out
}

fn criterion_5(raw_counts: &mut Vec<String>) -> Check {
    let start = Instant::now();
    for (a1, a2, want) in [(3, 3, 1), (3, 5, 1), (5, 5, 1), (3, 4, 2), (4, 3, 2), (4, 4, 2)] {
        let (s1, s2) = (a1.to_string(), a2.to_string());
        let sym = bin_json(&["configs", &s1, &s2])?;
        ensure(sym["count_up_to_symmetry"] == want, || format!("({a1},{a2}): {}", sym["count_up_to_symmetry"]))?;
        let raw = bin_json(&["configs", &s1, &s2, "--raw"])?;
        raw_counts.push(format!("({a1},{a2}) raw={}", raw["count_raw"]));

        let canon = Factorization::from_json(&bin(&["monodromy", &s1, &s2])?).map_err(|e| e.to_string())?;
        if canon.page().len() <= 4 {
            let listed: BTreeSet<Vec<(Curve, u32)>> = raw["configurations"]
                .as_array()
                .ok_or("no configurations")?
                .iter()
                .map(|doc| {
                    let f = Factorization::from_json(&doc.to_string()).map_err(|e| e.to_string())?;
                    Ok(f.curves().collect())
                })
                .collect::<Result<_, String>>()?;
            let oracle = brute_force(canon.page(), &multiplicity_profile(&canon));
            ensure(listed == oracle, || format!("({a1},{a2}): enumerator disagrees with brute force"))?;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 30.0, || format!("grid took {elapsed:.1}s"))
}

fn same_class(q: &IntMatrix, target: &[[i64; 2]; 2]) -> Result<bool, String> {
    let a = reduce_binary_form(q).map_err(|e| e.to_string())?.reduced;
    let b = reduce_binary_form(&IntMatrix::from_i64_rows(target)).map_err(|e| e.to_string())?.reduced;
    Ok(a == b)
}

fn criterion_6(dir: &Path) -> Check {
    let file = write_temp(dir, "canon_3_4_filling.json", &bin(&["monodromy", "3", "4"])?)?;
    let r = bin_json(&["filling", &file])?;
    ensure(r["b2"] == 2 && r["chi"] == 3 && r["sigma"] == -2, || format!("{r}"))?;
    ensure(r["h1"].as_array().is_some_and(Vec::is_empty), || format!("H1 {}", r["h1"]))?;
    ensure(r["det_abs"] == 11, || format!("det {}", r["det_abs"]))?;
    let q = matrix_of(&r["intersection_form"])?;
    ensure(same_class(&q, &[[-3, 1], [1, -4]])?, || format!("Q = {q}"))
}

fn criterion_7(dir: &Path) -> Check {
    let file = write_temp(dir, "canon_3_4_lantern.json", &bin(&["monodromy", "3", "4"])?)?;
    let lantern = bin(&["lantern", &file, "--inner", "n1;n2;s,p1"])?;
    let file = write_temp(dir, "lantern_3_4.json", &lantern)?;
    let r = bin_json(&["filling", &file])?;
    ensure(r["b2"] == 1 && r["chi"] == 2 && r["sigma"] == -1, || format!("{r}"))?;
    ensure(r["h1"].as_array().is_some_and(Vec::is_empty), || format!("H1 {}", r["h1"]))?;
    ensure(r["intersection_form"] == serde_json::json!([[-11]]), || format!("Q {}", r["intersection_form"]))
}

fn criterion_8(dir: &Path) -> Check {
    for a1 in 2..=8i64 {
        for a2 in 2..=8i64 {
            let doc = bin(&["monodromy", &a1.to_string(), &a2.to_string()])?;
            let file = write_temp(dir, "det.json", &doc)?;
            let r = run_json(&["filling", &file])?;
            ensure(r["det_abs"] == a1 * a2 - 1, || format!("({a1},{a2}): {}", r["det_abs"]))?;
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let r = bin_json(&["structures", "3,4"])?;
    let entries = r["structures"].as_array().ok_or("no structures")?;
    ensure(entries.len() == 6, || format!("{} isotopy classes", entries.len()))?;
    let classes = r["contactomorphism_classes"].as_array().ok_or("no classes")?;
    ensure(classes.len() == 3, || format!("{} contactomorphism classes", classes.len()))?;
    let mut d3s = BTreeSet::new();
    for class in classes {
        let members: BTreeSet<String> = class
            .as_array()
            .ok_or("bad class")?
            .iter()
            .filter_map(|i| entries[i.as_u64()? as usize]["d3"].as_str().map(str::to_owned))
            .collect();
        ensure(members.len() == 1, || format!("d3 not constant on class {class}"))?;
        d3s.extend(members);
    }
    let want: BTreeSet<String> = ["-5/11", "-3/11", "-1/11"].map(String::from).into();
    ensure(d3s == want, || format!("d3 values {d3s:?}"))
}

type GridPoint = (String, [(u32, u32); 2], [i64; 2]);

/// Every (chain, stabs) pair with 2 ≤ a1, a2 ≤ 7, as CLI arguments.
fn grid() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for a1 in 2..=7i64 {
        for a2 in 2..=7i64 {
            for s1 in 0..=(a1 - 2) as u32 {
                for s2 in 0..=(a2 - 2) as u32 {
                    let stabs = [(s1, a1 as u32 - 2 - s1), (s2, a2 as u32 - 2 - s2)];
                    out.push((format!("{a1},{a2}"), stabs, [a1, a2]));
                }
            }
        }
    }
    out
}

fn stabs_arg(stabs: &[(u32, u32); 2]) -> String {
    format!("{}:{},{}:{}", stabs[0].0, stabs[0].1, stabs[1].0, stabs[1].1)
}

fn b2_list(report: &Value) -> Vec<i64> {
    report["filling_classes"]
        .as_array()
        .map(|cs| cs.iter().filter_map(|c| c["b2"].as_i64()).collect())
        .unwrap_or_default()
}

fn criterion_10() -> Check {
    for (chain, stabs, a) in grid() {
        let r = run_json(&["classify", "--chain", &chain, "--stabs", &stabs_arg(&stabs)])?;
        let plus = stabs.iter().any(|s| s.0 > 0);
        let minus = stabs.iter().any(|s| s.1 > 0);
        let vo = plus && minus;
        let one_sided_four = (0..2).any(|i| a[i] == 4 && (stabs[i].0 == 0 || stabs[i].1 == 0));
        let ctx = || format!("{chain} {}: {r}", stabs_arg(&stabs));
        let want_structure = if vo { "VirtuallyOvertwisted" } else { "UniversallyTight" };
        ensure(r["structure"] == want_structure, ctx)?;
        if !vo {
            ensure(r["case"] == "UniversallyTightOutOfScope" && b2_list(&r).is_empty(), ctx)?;
            continue;
        }
        let want: Vec<i64> = if one_sided_four { vec![2, 1] } else { vec![2] };
        ensure(b2_list(&r) == want, ctx)?;
    }
    Ok(())
}

fn criterion_11() -> Check {
    for (chain, stabs, _) in grid() {
        let flipped = [(stabs[0].1, stabs[0].0), (stabs[1].1, stabs[1].0)];
        let a = run_json(&["classify", "--chain", &chain, "--stabs", &stabs_arg(&stabs)])?;
        let b = run_json(&["classify", "--chain", &chain, "--stabs", &stabs_arg(&flipped)])?;
        for key in ["structure", "case", "filling_classes", "d3"] {
            ensure(a[key] == b[key], || format!("{chain} {}: {key} differs", stabs_arg(&stabs)))?;
        }
        let da = run_json(&["d3", "--chain", &chain, "--stabs", &stabs_arg(&stabs)])?;
        let db = run_json(&["d3", "--chain", &chain, "--stabs", &stabs_arg(&flipped)])?;
        ensure(da == db, || format!("{chain}: d3 {da} vs {db}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("tempdir: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut raw_counts = Vec::new();
    let results: Vec<(&str, Check)> = vec![
        ("1  continued fractions", criterion_1()),
        ("2  d3 golden values", criterion_2()),
        ("3  canonical multiplicity profile", criterion_3(dir.path())),
        ("4  lantern invariance", criterion_4()),
        ("5  configuration counts", criterion_5(&mut raw_counts)),
        ("6  canonical (3,4) filling", criterion_6(dir.path())),
        ("7  lantern (3,4) filling", criterion_7(dir.path())),
        ("8  determinant law", criterion_8(dir.path())),
        ("9  structures on [3,4]", criterion_9()),
        ("10 classification partition", criterion_10()),
        ("11 conjugation symmetry", criterion_11()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(()) => println!("PASS criterion {name}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("derived raw configuration counts: {}", raw_counts.join(", "));
    if failed == 0 {
        println!("acceptance: {} of {} criteria passed", results.len(), results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", results.len());
        ExitCode::FAILURE
    }
}
