use std::path::Path;
use std::process::Command;

fn starnet() -> Command {
    Command::new(env!("CARGO_BIN_EXE_starnet"))
}

fn example(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn diagram_subcommand_runs_the_shipped_files() {
    for name in [
        "prelude.diag",
        "ex1_bot_twist.diag",
        "ex3_unit_twist.diag",
        "ex2_ex4_triple_dual.diag",
        "ex5_big_path.diag",
    ] {
        let out = starnet()
            .args(["diagram", &example(name)])
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {:?}", out);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with(' ')));
    }
}

#[test]
fn check_reports_every_morphism() {
    let out = starnet()
        .args(["check", &example("ex1_bot_twist.diag")])
        .output()
        .unwrap();
    // the file deliberately contains one invalid linking
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("VALID").count() - text.matches("INVALID").count(), 2);
    assert_eq!(text.matches("INVALID").count(), 1);
}

#[test]
fn check_oracle_flag_agrees() {
    let out = starnet()
        .args(["check", &example("ex3_unit_twist.diag"), "--oracle"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn eq_exit_codes() {
    let equal = starnet()
        .args(["eq", &example("ex3_unit_twist.diag"), "i", "tw"])
        .output()
        .unwrap();
    assert_eq!(equal.status.code(), Some(0));
    assert!(String::from_utf8(equal.stdout).unwrap().starts_with("EQUAL (2"));

    let distinct = starnet()
        .args(["eq", &example("ex1_bot_twist.diag"), "i", "tw"])
        .output()
        .unwrap();
    assert_eq!(distinct.status.code(), Some(1));

    let inconclusive = starnet()
        .args([
            "eq",
            &example("ex3_unit_twist.diag"),
            "i",
            "tw",
            "--max-class-size",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(inconclusive.status.code(), Some(3));
}

#[test]
fn compose_and_eval_print_linkings() {
    let out = starnet()
        .args(["compose", &example("ex2_ex4_triple_dual.diag"), "down2", "up2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("(((a*I'')'*I'')'*I'')' -> (((a*I'')'*I'')'*I'')'"));

    let out = starnet()
        .args(["eval", &example("prelude.diag"), "seq(l(MID2), lbar(MID2))"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("(a*I'')' -> (a*I'')'"));
}

#[test]
fn dot_output_is_stable() {
    let run = || {
        starnet()
            .args(["dot", &example("ex1_bot_twist.diag"), "tw"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("digraph linking {"));
    assert_eq!(text.matches("style=dashed").count(), 2);
}

#[test]
fn enumerate_counts_nets() {
    let out = starnet()
        .args(["enumerate", &example("ex3_unit_twist.diag"), "P", "P"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("4 linking(s) in 1 net class(es)"));
}

#[test]
fn normalize_sequent_file() {
    let dir = std::env::temp_dir().join("starnet-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cut.seq");
    std::fs::write(
        &path,
        "object a\nobject b\narrow x : a -> b\narrow w : b -> a\n\
         sequent: a', a\ncut: b\ng0.0 -> g2.0 [x]\ng3.0 -> g1.0 [w]\n",
    )
    .unwrap();
    let path = path.to_string_lossy().into_owned();
    let turbo = starnet()
        .args(["normalize", &path, "--turbo"])
        .output()
        .unwrap();
    assert!(turbo.status.success());
    let text = String::from_utf8(turbo.stdout.clone()).unwrap();
    assert!(text.contains("w.x"), "{text}");

    for strategy in ["leftmost", "rightmost", "random"] {
        let step = starnet()
            .args(["normalize", &path, "--strategy", strategy, "--seed", "7"])
            .output()
            .unwrap();
        assert!(step.status.success());
        assert_eq!(step.stdout, turbo.stdout, "{strategy}");
    }
}

#[test]
fn parse_errors_exit_two() {
    let dir = std::env::temp_dir().join("starnet-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.diag");
    std::fs::write(&path, "shape = oops\n").unwrap();
    let out = starnet()
        .args(["diagram", &path.to_string_lossy().into_owned()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
