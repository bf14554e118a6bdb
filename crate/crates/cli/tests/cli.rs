use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_liecontract"));
    c.env_remove("LIECONTRACT_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liecontract-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

const ONES: &str = ". . 1 1 1 1 1 1
. . 1 1 1 1 1 1
1 1 . . 1 1 1 1
1 1 . . 1 1 1 1
1 1 1 1 . . 1 1
1 1 1 1 . . 1 1
1 1 1 1 1 1 . .
1 1 1 1 1 1 . .
";

#[test]
fn gen_system() {
    let o = run(&["gen-system"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# n=3: 48 equations in 2 orbits under SL(2,Z3)\norbit 1 (24 equations)\n"));
    assert!(text.contains("  (01)(02)(10): (-3)*eps(01)(10)*eps(02)(11) + (3)*eps(01)(12)*eps(02)(10) = 0\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("  ")).count(), 48);
    let o = run(&["gen-system", "--n", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("  ")).count(), 1920);
}

#[test]
fn gen_identities() {
    let text = stdout(&run(&["gen-identities"]));
    let headers: Vec<&str> = text.lines().filter(|l| !l.starts_with("  ")).collect();
    assert_eq!(
        headers,
        [
            "# 104 identities in 5 orbits",
            "orbit 1 (24 identities, order 2)",
            "orbit 2 (8 identities, order 3)",
            "orbit 3 (24 identities, order 3)",
            "orbit 4 (24 identities, order 3)",
            "orbit 5 (24 identities, order 3)",
        ]
    );
    assert!(text.contains("  eps(01)(10)*eps(02)(11) = eps(01)(20)*eps(02)(21)\n"));
}

#[test]
fn contract_and_verify() {
    let o = run(&["contract", "--solution", "eps_23_1"]);
    assert_eq!(stdout(&o), "# eps_23_1\n[e1,e3] = (-1+w)*e5\n");
    let o = run(&["verify", "--solution", "eps_12_2", "-p", "a=1/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "# eps_12_2\n# bindings: a=(1/2),b=3\nsolution\n");
}

#[test]
fn verify_rejects_a_broken_file() {
    let dir = scratch("verify");
    let good = dir.join("ones.txt");
    fs::write(&good, ONES).unwrap();
    assert!(run(&["verify", "--file", good.to_str().unwrap()]).status.success());
    let bad = dir.join("bad.txt");
    fs::write(&bad, ONES.replacen(". . 1", ". . .", 1).replacen("1 1 . . 1", ". 1 . . 1", 1)).unwrap();
    let o = run(&["verify", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a solution"));
    let garbage = dir.join("garbage.txt");
    fs::write(&garbage, "1 2 3\n").unwrap();
    assert_eq!(run(&["verify", "--file", garbage.to_str().unwrap()]).status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify() {
    let o = run(&["classify", "--solution", "eps_9_1"]);
    assert_eq!(stdout(&o), "# eps_9_1\ncontinuous\nweights: 0 0 2 1 2 1 2 1\n");
    let o = run(&["classify", "--solution", "eps_16_1", "-p", "a=2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("discrete\nviolated identity: "));
    let o = run(&["classify", "--solution", "eps_16_1", "-p", "a=1"]);
    assert!(stdout(&o).contains("continuous"));
}

#[test]
fn equiv() {
    let o = run(&["equiv", "--solution", "eps_0_1", "--solution", "fam_0_2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\nequivalent\nelement: "));
    let o = run(&["equiv", "--solution", "eps_17_2", "--solution", "eps_17_3"]);
    assert!(stdout(&o).ends_with("not equivalent\n"));
    assert_eq!(run(&["equiv", "--solution", "eps_17_2"]).status.code(), Some(2));
}

#[test]
fn identify() {
    let o = run(&["identify", "--solution", "eps_18_32"]);
    assert!(o.status.success());
    let part = "dim=4 ds=4,3,0 lcs=4,3 ucs=0 der=6 tau=2 center=0 solvable=true nilpotent=false semisimple=false tower=6";
    assert_eq!(stdout(&o), format!("# eps_18_32\ndim: 8\ncentral summand: 0\npart 1: {part}\npart 2: {part}\n"));
    let o = run(&["identify", "--solution", "eps_21_16"]);
    assert!(stdout(&o).contains("central summand: 2\npart 1: dim=6 ds=6,3,0 lcs=6,3,0 ucs=3,6 der=18"));

    let dir = scratch("identify");
    let heis = dir.join("heis.txt");
    fs::write(&heis, "[e1,e2] = e3\n").unwrap();
    let o = run(&["identify", "--brackets", heis.to_str().unwrap(), "--dim", "3"]);
    assert!(stdout(&o).contains("part 1: dim=3 ds=3,1,0 lcs=3,1,0 ucs=1,3 der=6"));
    let broken = dir.join("broken.txt");
    fs::write(&broken, "[e1,e2] = e3\n[e2,e3] = e1\n[e1,e3] = e1\n").unwrap();
    let o = run(&["identify", "--brackets", broken.to_str().unwrap(), "--dim", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Jacobi"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    let cases: [&[&str]; 5] = [
        &["verify", "--solution", "nope"],
        &["classify", "--solution", "eps_16_1", "-p", "a=0"],
        &["gen-identities", "--n", "5"],
        &["gen-system", "--n", "4"],
        &["catalog-verify", "--jobs", "0"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{args:?}");
    }
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = scratch("output");
    let path = dir.join("out.txt");
    let o = run(&["contract", "--solution", "eps_23_1", "-o", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), "# eps_23_1\n[e1,e3] = (-1+w)*e5\n");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn data_override() {
    let dir = scratch("data");
    for f in ["solutions.txt", "families.txt", "expected.txt", "relations.txt", "MANIFEST.sha256"] {
        fs::copy(data_dir().join(f), dir.join(f)).unwrap();
    }
    let with_data = |args: &[&str]| bin().env("LIECONTRACT_DATA", &dir).args(args).output().unwrap();
    assert!(with_data(&["verify", "--solution", "eps_9_1"]).status.success());
    let path = dir.join("solutions.txt");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("tag=C", "tag=D", 1)).unwrap();
    let o = with_data(&["verify", "--solution", "eps_9_1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("checksum mismatch"), "{}", stderr(&o));
    // Commands that do not read the catalog are unaffected.
    assert!(with_data(&["gen-identities"]).status.success());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn outputs_are_deterministic() {
    for args in [&["gen-system"][..], &["identify", "--solution", "eps_17_2", "--seed", "4"], &["equiv", "--solution", "eps_0_1", "--solution", "fam_0_2"]] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn catalog_report() {
    let o = run(&["catalog-verify", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let summary = stdout(&o);
    for line in [
        "solutions: 188/188 pass check_solution",
        "entries: 188/188 pass all checks",
        "unknown verdicts: 0",
        "nu histogram: 0:1 9:1 12:2 15:7 16:7 17:17 18:36 19:45 20:42 21:21 22:7 23:1 24:1",
        "families: 20/20 pass",
        "planted controls: 188/188 found equivalent",
        "same-nu pairs: 2891 checked, 0 equivalent, 0 errors",
        "relations: 33/33 hold",
        "result: pass",
    ] {
        assert!(summary.lines().any(|l| l == line), "missing {line:?} in\n{summary}");
    }
    // The full report written by a second process matches the verbose summary run.
    let full = run(&["report", "--seed", "7"]);
    let verbose = run(&["catalog-verify", "-v", "--seed", "7"]);
    assert!(full.status.success());
    assert_eq!(full.stdout, verbose.stdout);
    assert!(stdout(&full).contains("eps_17_6"));
}
