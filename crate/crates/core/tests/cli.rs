use hodge_trees::cli::{run, CliOutput, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use hodge_trees::engine::MemoCache;
use serde_json::Value;

fn cli(cmd: &str) -> CliOutput {
    run(cmd.split_whitespace())
}

#[test]
fn documented_examples() {
    assert_eq!(cli("integral --g 2 --lambda 1").stdout, "1/480\n");
    assert_eq!(cli("trees sum --g 2 --n 3").stdout, "1/180\n");
    let out = cli("trees enumerate --g 2 --n 1");
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "g=2 n=1 count=0 sum=0\n");
}

#[test]
fn integral_with_aux_weights() {
    assert_eq!(
        cli("integral --g 1 --lambda 1 --weights 2").stdout,
        "1/24\n"
    );
    assert_eq!(cli("integral --g 1 --lambda 0").stdout, "1/24\n");
    assert_eq!(cli("w --g 1 --lambda 1 --weights 2,1").stdout, "1/6\n");
}

#[test]
fn tree_listing_json() {
    let out = cli("trees enumerate --g 2 --n 3 --format json");
    assert_eq!(out.code, EXIT_OK);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["g"], 2);
    assert_eq!(v["n"], 3);
    assert_eq!(v["count"], 9);
    assert_eq!(v["sum"], "1/180");
    let trees = v["trees"].as_array().unwrap();
    assert_eq!(trees.len(), 9);
    let encs: Vec<&str> = trees
        .iter()
        .map(|t| t["encoding"].as_str().unwrap())
        .collect();
    let mut sorted = encs.clone();
    sorted.sort();
    assert_eq!(encs, sorted);
    assert!(trees.iter().any(|t| t["weight"] == "1/810"));
}

#[test]
fn tree_listing_text() {
    let out = cli("trees enumerate --g 1 --n 2");
    assert_eq!(
        out.stdout,
        "g=1 n=2 count=1 sum=1/24\nU2(B3(L1,L2))\t1/24\n"
    );
}

#[test]
fn table_formats() {
    let tsv = cli("table --max-g 2").stdout;
    assert_eq!(
        tsv,
        "g\ti\tpsi_power\tintegral\n\
         1\t0\t1\t1/24\n\
         1\t1\t0\t1/24\n\
         2\t0\t4\t1/1152\n\
         2\t1\t3\t1/480\n\
         2\t2\t2\t7/5760\n"
    );
    let v: Value = serde_json::from_str(&cli("table --max-g 2 --format json").stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[3]["integral"], "1/480");
    assert_eq!(rows[3]["psi_power"], 3);
}

#[test]
fn verify_reports() {
    let out = cli("verify --check genus0 --max-n 6 --format json");
    assert_eq!(out.code, EXIT_OK);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["check"], "genus0");
    assert_eq!(v["status"], "pass");
    assert!(v["range"].is_string());
    assert!(v.get("counterexample").is_none());

    let out = cli("verify --check all --max-g 2 --max-n 3 --format json");
    assert_eq!(out.code, EXIT_OK);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["check"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "tree-identity",
            "bernoulli",
            "genus0",
            "oracle",
            "independence"
        ]
    );

    let text = cli("verify --check all --max-g 2 --max-n 3").stdout;
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert_ne!(EXIT_VERIFY_FAILED, EXIT_OK);
}

#[test]
fn bernoulli_command() {
    assert_eq!(cli("bernoulli --m 4").stdout, "-1/30\n");
    assert_eq!(cli("bernoulli --m 1").stdout, "-1/2\n");
    assert_eq!(cli("bernoulli --m 0").stdout, "1\n");
    assert_eq!(
        cli("bernoulli --m 4 --decimal 3").stdout,
        "-1/30\napprox -0.033 (rounded to 3 digits)\n"
    );
}

#[test]
fn deterministic_output() {
    for cmd in [
        "trees enumerate --g 2 --n 4 --format json",
        "table --max-g 4 --format json",
        "verify --check all --max-g 2 --max-n 3",
    ] {
        assert_eq!(cli(cmd), cli(cmd), "{cmd}");
    }
}

#[test]
fn usage_errors() {
    let out = cli("integral --g 2");
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.starts_with("hodge: "));
    assert_eq!(cli("").code, EXIT_USAGE);
    assert_eq!(cli("trees").code, EXIT_USAGE);
    assert_eq!(cli("w --g 2 --lambda 1 --weights 1,-2").code, EXIT_USAGE);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.cache");
    let p = path.display().to_string();

    let first = cli(&format!("integral --g 3 --lambda 2 --cache {p}"));
    assert_eq!(first.code, EXIT_OK);
    let text1 = std::fs::read_to_string(&path).unwrap();
    assert!(!text1.is_empty());
    let cache = MemoCache::from_text(&text1).unwrap();
    assert_eq!(cache.to_text(), text1);
    for line in text1.lines() {
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f.len(), 4);
        let w: Vec<u32> = f[2].split(',').map(|x| x.parse().unwrap()).collect();
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
    }

    let second = cli(&format!("integral --g 3 --lambda 2 --cache {p}"));
    assert_eq!(first, second);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text1);

    // A w query on the same cache only adds entries.
    let w = cli(&format!("w --g 2 --lambda 1 --weights 1,1,1 --cache {p}"));
    assert_eq!(w.stdout, "1/120\n");
    let text2 = std::fs::read_to_string(&path).unwrap();
    let grown = MemoCache::from_text(&text2).unwrap();
    assert!(grown.len() >= cache.len());
    for (k, v) in cache.iter() {
        assert_eq!(grown.get(k), Some(v));
    }
}

#[test]
fn corrupt_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cache");
    std::fs::write(&path, "2\t1\t1,1\tnot-a-number\n").unwrap();
    let out = cli(&format!(
        "integral --g 2 --lambda 1 --cache {}",
        path.display()
    ));
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("cache line 1"), "{}", out.stderr);
}
