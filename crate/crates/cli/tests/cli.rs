use std::process::{Command, Output};

fn ipnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipnc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn small_study_prints_csv() {
    let o = ipnc(&[
        "study",
        "--m",
        "1",
        "--solution",
        "manufactured",
        "--resolutions",
        "4,8",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "inv_h,n_dofs,L2,L2_order,H1,H1_order"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "4");
    assert_eq!(first[3], "--");
    let second: Vec<&str> = lines.next().unwrap().split(',').collect();
    let h1_order: f64 = second[5].parse().unwrap();
    assert!(h1_order > 0.8, "H1 order {h1_order}");
}

#[test]
fn markdown_table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.md");
    let o = ipnc(&[
        "study",
        "--m",
        "2",
        "--solution",
        "manufactured",
        "--resolutions",
        "2,4",
        "--format",
        "markdown",
        "--norms",
        "H2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let table = std::fs::read_to_string(&path).unwrap();
    assert!(table.starts_with("| 1/h |"), "{table}");
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn config_file_is_read_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("study.cfg");
    std::fs::write(&cfg, "# Crouzeix-Raviart check\nm = 1\nsolution = manufactured\nresolutions = 2,4,8\nnorms = L2\n").unwrap();
    let o = ipnc(&[
        "study",
        "--config",
        cfg.to_str().unwrap(),
        "--resolutions",
        "2,4",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "inv_h,n_dofs,L2,L2_order");
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn config_errors_exit_with_3() {
    assert_eq!(ipnc(&["study", "--m", "9"]).status.code(), Some(3));
    assert_eq!(
        ipnc(&["study", "--resolutions", "4,6"]).status.code(),
        Some(3)
    );
    assert_eq!(ipnc(&["study", "--eta", "-1"]).status.code(), Some(3));
    assert_eq!(
        ipnc(&["study", "--domain", "lshape", "--n", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(ipnc(&["study", "--bogus"]).status.code(), Some(3));
    assert_eq!(
        ipnc(&["study", "--config", "/nonexistent/file"])
            .status
            .code(),
        Some(3)
    );

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(
        ipnc(&["study", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn solver_failure_exits_with_2() {
    let o = ipnc(&[
        "study",
        "--m",
        "3",
        "--resolutions",
        "4,8",
        "--max-iter",
        "5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn element_table_lists_every_dof() {
    let o = ipnc(&["element-table", "--m", "3", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# (m, n) = (3, 2): 10 DOFs"), "{out}");
    assert_eq!(out.lines().count(), 12);
    assert_eq!(
        ipnc(&["element-table", "--m", "3", "--n", "4"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_passes() {
    let o = ipnc(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(ipnc(&["--help"]).status.code(), Some(0));
}
