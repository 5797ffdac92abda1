use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfheap"))
        .args(args)
        .output()
        .expect("spawn selfheap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_then_verify_sorting() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.trace");
    let p = path.to_str().unwrap();
    let o = run(&["gen", "--kind", "sorting", "--n", "64", "--seed", "5", "--out", p]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# seed 5\n# meta sorting n=64\nH\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with('D')).count(), 64);

    let o = run(&["verify", p]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("ORACLE PASS").count(), 8);
    assert!(out.contains("LEMMA pass-halving PASS"));
    assert!(out.contains("LEMMA win-limit PASS"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&run(&["gen", "--kind", "random", "--n", "200", "--seed", "9", "--heaps", "2", "--meld", "0.2"]));
    let b = stdout(&run(&["gen", "--kind", "random", "--n", "200", "--seed", "9", "--heaps", "2", "--meld", "0.2"]));
    assert_eq!(a, b);
    // two leading make-heaps plus 200 drawn ops
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 202);
}

#[test]
fn replay_keys_agree_across_variants() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.trace");
    let p = path.to_str().unwrap();
    assert!(run(&["gen", "--kind", "random", "--n", "500", "--seed", "2", "--delete", "0.3", "--out", p])
        .status
        .success());
    let keys = |v: &str, m: &str| -> Vec<String> {
        stdout(&run(&["replay", p, "--variant", v, "--mode", m]))
            .lines()
            .take_while(|l| !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    };
    let base = keys("slim", "eager");
    assert!(!base.is_empty());
    for v in ["pairing", "multipass", "smooth"] {
        assert_eq!(keys(v, "lazy"), base, "{v}");
    }
}

#[test]
fn replay_writes_summary_csv() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("s.trace");
    let csv = dir.path().join("m.csv");
    run(&["gen", "--kind", "sorting", "--n", "32", "--out", trace.to_str().unwrap()]);
    let o = run(&["replay", trace.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("op,n_bin,count,mean_links,mean_cmps\n"));
    assert!(text.contains("delete_min,"));
}

#[test]
fn dijkstra_check_passes() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.gr");
    fs::write(&path, "c tiny\np sp 4 4\na 1 2 5\na 2 3 1\na 1 3 9\na 3 4 2\n").unwrap();
    let o = run(&["dijkstra", path.to_str().unwrap(), "--source", "1", "--variant", "smooth", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n5\n6\n8\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("CHECK PASS"));
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.trace");
    fs::write(&path, "H\nD 0\n").unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(run(&["replay", "/nonexistent/trace"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--kind", "bogus"]).status.code(), Some(2));

    let g = dir.path().join("g.gr");
    fs::write(&g, "p sp 2 1\na 1 2 -4\n").unwrap();
    assert_eq!(run(&["dijkstra", g.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bench_small_sweep() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.csv");
    let o = run(&[
        "bench", "--workload", "sorting", "--n", "256", "--min-n", "64", "--seeds", "1", "--variant", "pairing", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let points = fs::read_to_string(&out).unwrap();
    assert_eq!(points.lines().count(), 1 + 3 * 2);
    let fits = fs::read_to_string(dir.path().join("b.csv.fits.csv")).unwrap();
    assert!(fits.contains("sorting,pairing,eager,dm_links,lg,"));
}
