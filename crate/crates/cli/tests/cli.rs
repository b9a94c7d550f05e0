use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const K3: &str = "domain 3\nlabels a b c\nrel E/2 : (a,b) (b,a) (b,c) (c,b) (a,c) (c,a)\n";

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn teamcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teamcheck")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_reports_verdict_and_fragment() {
    let dir = scratch("check");
    let a = write(&dir, "k3.txt", K3);
    let functional = write(&dir, "f.txt", "vars x y\nx=a y=b\nx=b y=c\n");
    let branching = write(&dir, "b.txt", "vars x y\nx=a y=b\nx=a y=c\n");

    let sat = teamcheck(&["check", "-s", &a, "-f", "E(x,y) & dep(x;y)", "-t", &functional]);
    assert_eq!(sat.status.code(), Some(0));
    assert!(stdout(&sat).starts_with("SAT\nfragment: fragment=FO(dep)"), "{}", stdout(&sat));

    let unsat = teamcheck(&["check", "-s", &a, "-f", "dep(x;y)", "-t", &branching]);
    assert_eq!(unsat.status.code(), Some(1));
    assert!(stdout(&unsat).starts_with("UNSAT\n"));
}

#[test]
fn the_empty_team_is_sat() {
    let dir = scratch("empty");
    let a = write(&dir, "k3.txt", K3);
    let empty = write(&dir, "t.txt", "vars x y\n");
    let o = teamcheck(&["check", "-s", &a, "-f", "inc(x;y) & x != x", "-t", &empty]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = scratch("errors");
    let a = write(&dir, "k3.txt", K3);
    let t = write(&dir, "t.txt", "vars x\nx=a\n");
    let missing = teamcheck(&["check", "-s", &a, "-f", "E(x,y)", "-t", &t]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("`y`"));
    let unparsable = teamcheck(&["check", "-s", &a, "-f", "E(x,", "-t", &t]);
    assert_eq!(unparsable.status.code(), Some(2));
    let no_file = teamcheck(&["check", "-s", &dir.join("none.txt").to_string_lossy(), "-f", "x=x", "-t", &t]);
    assert_eq!(no_file.status.code(), Some(2));
}

#[test]
fn inclusion_verdicts_agree_across_fast_paths() {
    let dir = scratch("fast");
    let a = write(&dir, "k3.txt", K3);
    let t = write(&dir, "t.txt", "vars x y\nx=a y=b\nx=b y=a\nx=c y=a\n");
    for f in ["inc(x;y)", "exists u (E(x,u) & inc(u;y))", "forall u (inc(u;y) | u = x)"] {
        let auto = teamcheck(&["check", "-s", &a, "-f", f, "-t", &t]);
        let off = teamcheck(&["check", "-s", &a, "-f", f, "-t", &t, "--fast-path", "off"]);
        assert_eq!(auto.status.code(), off.status.code(), "{f}");
    }
}

#[test]
fn dominating_set_of_a_star_is_its_centre() {
    let dir = scratch("domset");
    let g = write(&dir, "star.g", "p 4 3\ne 0 1\ne 0 2\ne 0 3\n");
    let out = dir.join("enc");
    let r = teamcheck(&["reduce", "domset", &g, "-k", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out.join("k.txt")).unwrap(), "1\n");

    let s = out.join("structure.txt");
    let f = format!("@{}", out.join("formula.txt").display());
    let solved = teamcheck(&["solve", "-s", s.to_str().unwrap(), "-f", &f, "-k", "1"]);
    assert_eq!(stdout(&solved), "SAT\nz=0\n");
    let two = teamcheck(&["solve", "-s", s.to_str().unwrap(), "-f", &f, "-k", "2", "--fast-path", "off"]);
    assert_eq!(two.status.code(), Some(0));
}

#[test]
fn sentences_have_no_team_of_two() {
    let dir = scratch("sentence");
    let a = write(&dir, "k3.txt", &format!("{K3}const c = c\n"));
    let one = teamcheck(&["solve", "-s", &a, "-f", "exists x E(x,c) | c = c", "-k", "1"]);
    assert_eq!(one.status.code(), Some(0));
    let two = teamcheck(&["solve", "-s", &a, "-f", "exists x E(x,c) | c = c", "-k", "2"]);
    assert_eq!(stdout(&two), "UNSAT\n");
    assert_eq!(two.status.code(), Some(1));
}

#[test]
fn clique_encoding_of_a_triangle() {
    let dir = scratch("clique");
    let g = write(&dir, "k3.g", "c triangle\np 3 3\ne 0 1\ne 1 2\ne 0 2\n");
    let o = teamcheck(&["reduce", "clique", &g, "-k", "3"]);
    assert_eq!(
        stdout(&o),
        "k 6\n\
         formula E(x,y) & x!=y & inc(y;x) & inc(x;y)\n\
         domain 3\n\
         rel E/2 : (0,1) (0,2) (1,0) (1,2) (2,0) (2,1)\n"
    );
    let json = teamcheck(&["--json", "reduce", "clique", &g, "-k", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["k"], 6);
}

#[test]
fn wsat_encoding_reports_depth_and_syntax_circuit() {
    let dir = scratch("wsat");
    let p = write(&dir, "p.txt", "(x1 | x2) & (x3 | x1)\n");
    let o = teamcheck(&["reduce", "wsat", &p, "-k", "1"]);
    let text = stdout(&o);
    assert!(text.starts_with("# depth 2\nk 1\nformula "), "{text}");
    assert!(text.contains("rel I/1 : (x1) (x2) (x3)"), "{text}");
    assert!(text.contains("const o = root"), "{text}");
}

#[test]
fn verify_prints_a_summary_per_suite() {
    let dir = scratch("verify");
    let report = dir.join("report.txt");
    let o = teamcheck(&["verify", "circuit", "lemma", "--cases", "4", "--seed", "7", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("circuit seed=7: 4 cases, 4 pass, 0 fail"), "{text}");
    assert!(text.contains("lemma seed=7: 4 cases, 4 pass, 0 fail"), "{text}");
    assert!(fs::metadata(&report).unwrap().len() > 0);
}

#[test]
fn verify_is_deterministic_per_seed() {
    let run = || stdout(&teamcheck(&["--json", "verify", "theta", "--cases", "3", "--seed", "11"]));
    assert_eq!(run(), run());
}

#[test]
fn bench_prints_csv() {
    let empty = teamcheck(&["bench", "domset", "--n", "5..4"]);
    assert_eq!(stdout(&empty), "n,k,path,verdict,micros\n");
    let o = teamcheck(&["bench", "wsat", "--n", "3", "--k", "1"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    let paths: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(paths, ["fixpoint", "generic", "oracle"]);
    let verdicts: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap()).collect();
    assert!(verdicts.iter().all(|v| *v == verdicts[2]), "{lines:?}");
}
