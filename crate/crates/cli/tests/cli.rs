use std::fs;
use std::process::{Command, Output};

fn walklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walklab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_prints_lollipop_edge_list() {
    let o = walklab(&["gen", "--family", "lollipop", "--m", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    // 45 clique edges plus a 10-edge path hanging off the clique.
    assert_eq!(lines.next(), Some("20 55"));
    assert_eq!(lines.count(), 55);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(walklab(&["cover", "--bogus"]).status.code(), Some(2));
    assert_eq!(walklab(&["gen", "--family", "path"]).status.code(), Some(2));
    assert_eq!(walklab(&["walk", "--family", "path", "--n", "4", "--length", "3"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "trials = 5\nnot_a_flag = 1\n").unwrap();
    let o = walklab(&["sr16", "--config", conf.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not-a-flag"));
}

#[test]
fn command_line_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# small run\nfamily = cycle\nn = 5\nlength = 4\ncount = 3\nseed = 9\nnb = true\n").unwrap();
    let c = conf.to_str().unwrap();

    let from_file = stdout(&walklab(&["walk", "--config", c]));
    assert_eq!(from_file.lines().count(), 3);
    assert!(from_file.lines().all(|l| l.split(',').count() == 5));

    let o = walklab(&["walk", "--config", c, "--length", "6", "--count", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.split(',').count() == 7));

    // List values on the command line replace the file's list.
    fs::write(&conf, "sizes = 3,4\ntrials = 5\nseed = 1\nmodes = vertex,edge\n").unwrap();
    let o = walklab(&["fig3", "--config", c, "--sizes", "3", "--modes", "vertex"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 6);
}

#[test]
fn output_does_not_depend_on_threads() {
    let run = |t: &str| {
        let o = walklab(&[
            "--threads", t, "cover", "--family", "lollipop", "--m", "4", "--mode", "edge",
            "--trials", "300", "--worst-starts", "--nb", "--seed", "11",
        ]);
        assert!(o.status.success());
        stdout(&o)
    };
    let one = run("1");
    assert!(one.starts_with("graph,walk,mode,mean,std_err,trials,censored\n"));
    assert_eq!(one, run("4"));
}

#[test]
fn decode_inverts_named_records() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec.txt");
    let o = walklab(&[
        "record", "--family", "csl", "--n", "8", "--s", "3", "--length", "400", "--seed", "2",
        "--out", rec.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&rec).unwrap();
    let o = walklab(&["decode", "--record", text.trim()]);
    assert!(o.status.success());
    let decoded = stdout(&o);
    // A long walk covers the circulant, so all 16 edges come back.
    assert_eq!(decoded.lines().next(), Some("8 16"));
}

#[test]
fn records_explicit_walks() {
    let dir = tempfile::tempdir().unwrap();
    let walks = dir.path().join("walks.txt");
    fs::write(&walks, "0,1,2,1\n2,1,0\n").unwrap();
    let o = walklab(&[
        "record", "--family", "path", "--n", "3", "--scheme", "anonymized", "--walks",
        walks.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1-2-3-2\n1-2-3\n");

    fs::write(&walks, "0,2\n").unwrap();
    let o = walklab(&["record", "--family", "path", "--n", "3", "--walks", walks.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_invariance_run_passes() {
    let o = walklab(&[
        "invariance", "--max-n", "4", "--exhaustive-n", "3", "--samples", "5", "--max-l", "3",
        "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all distribution-equality checks passed"));
}
