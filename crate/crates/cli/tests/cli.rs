use jetschouten_cli::{run, Outcome, EXIT_DOMAIN, EXIT_FALSE, EXIT_OK, EXIT_PARSE};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("jetschouten").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    out.stdout
}

#[test]
fn bracket_of_example_three() {
    let out = ok(&["bracket", "b*b_x", "b*x^3*q_xx"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "degree 2");
    let equiv = cli(&["equiv", lines[0], "2*x^3*b_xxx*b"]);
    assert_eq!(equiv.code, EXIT_OK, "{}", lines[0]);
    for method in ["recursive", "qfield"] {
        assert_eq!(
            ok(&["bracket", "b*b_x", "b*x^3*q_xx", "--method", method]),
            "-2*x^3*b*b_xxx\ndegree 2\n"
        );
    }
}

#[test]
fn zero_class_has_no_degree() {
    assert_eq!(ok(&["bracket", "b*b_x", "b*b_x"]), "0\nzero class\n");
}

#[test]
fn equiv_exit_codes() {
    let shifted = "b*b_x + b_x*b_x*b_xx + b*b_xx*b_xx + b*b_x*b_xxx";
    assert_eq!(cli(&["equiv", "b*b_x", shifted]).code, EXIT_OK);
    let out = cli(&["equiv", "b*b_x", "b*b_xxx"]);
    assert_eq!(
        (out.code, out.stdout.as_str()),
        (EXIT_FALSE, "not equivalent\n")
    );
    assert_eq!(cli(&["equiv", "-q_x", "0"]).code, EXIT_OK);
}

#[test]
fn poisson_check() {
    assert_eq!(ok(&["poisson-check", "b*b_x"]), "PASS\n");
    assert_eq!(ok(&["poisson-check", "b*b_xxx + q*b*b_x"]), "PASS\n");
    let out = cli(&["poisson-check", "q_x*b*b_x"]);
    assert_eq!(out.code, EXIT_FALSE);
    assert!(out.stdout.starts_with("FAIL\nwitness "), "{}", out.stdout);
}

#[test]
fn jacobi_defect_is_zero() {
    let out = ok(&["jacobi", "b*q_x", "b*q*q_x", "b*x*q_xx"]);
    assert_eq!(out, "0\nzero class\n");
}

#[test]
fn slot_commands() {
    assert_eq!(ok(&["eval", "b*b_x"]), "1/2*p1*p2_x - 1/2*p1_x*p2\n");
    assert_eq!(
        ok(&["eval", "b*b_x", "--slots", "2,1"]),
        "-1/2*p1*p2_x + 1/2*p1_x*p2\n"
    );
    assert_eq!(
        ok(&["insert", "b*b_x", "2"]),
        "1/2*p2_x*b - 1/2*p2*b_x\ndegree 1\n"
    );
    assert_eq!(ok(&["degree", "b*b_x + q"]), "mixed 0 2\n");
    assert_eq!(ok(&["degree", "x*b"]), "1\n");
    assert_eq!(ok(&["degree", "0"]), "zero\n");
}

#[test]
fn qfield_sections() {
    assert_eq!(
        ok(&["qfield", "b*q_x"]),
        "q-section 1 -q_x\nb-section 1 -b_x\nparity even\n"
    );
}

#[test]
fn latex_output() {
    let out = ok(&["--latex", "eval", "b*b_x"]);
    assert!(out.contains("p^{1}") && out.contains("p^{2}_{x}"), "{out}");
}

#[test]
fn parse_errors_exit_two() {
    let out = cli(&["bracket", "b*y", "b"]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("line 1, column 3"), "{}", out.stderr);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_PARSE);
    assert_eq!(cli(&["--geometry", "1,1", "degree", "b"]).code, EXIT_PARSE);
    assert_eq!(
        cli(&["--file", "/nonexistent/session", "degree", "b"]).code,
        EXIT_PARSE
    );
}

#[test]
fn domain_errors_exit_three() {
    let out = cli(&["poisson-check", "b"]);
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(out.stderr.contains("degree"), "{}", out.stderr);
    assert_eq!(cli(&["bracket", "b + q", "b"]).code, EXIT_DOMAIN);
    assert_eq!(
        cli(&["--geometry", "1,1,1", "bracket-recursive", "b*b_x", "b*q"]).code,
        EXIT_DOMAIN
    );
}

#[test]
fn session_files() {
    let dir = std::env::temp_dir().join(format!("jetschouten-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kdv.js");
    std::fs::write(
        &path,
        "# KdV\ngeometry 1 1 4\nlet P = b*b_xxx + q*b*b_x\nslot r 3\n",
    )
    .unwrap();
    let file = path.to_str().unwrap();
    assert_eq!(ok(&["--file", file, "poisson-check", "P"]), "PASS\n");
    assert_eq!(
        ok(&["--file", file, "insert", "b*b_x", "r"]),
        "1/2*p3_x*b - 1/2*p3*b_x\ndegree 1\n"
    );
    assert_eq!(
        cli(&["--file", file, "--geometry", "2,1,4", "degree", "P"]).code,
        EXIT_PARSE
    );
    std::fs::write(&path, "geometry 1 1 4\nlet P = b*z\n").unwrap();
    let out = cli(&["--file", file, "degree", "P"]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_is_deterministic() {
    let args = ["selftest", "--seed", "3", "--cases", "4"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let names: Vec<&str> = first
        .lines()
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "definitions",
            "jacobi",
            "commutator",
            "insertion",
            "golden",
            "representative",
            "roundtrip"
        ]
    );
    for line in first.lines() {
        let fields: Vec<&str> = line.split(' ').collect();
        assert_eq!(fields.len(), 4, "{line}");
        assert_eq!(fields[2], "0", "{line}");
    }
}
