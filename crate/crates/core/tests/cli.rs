use std::fs;
use std::path::PathBuf;

use extquot::cli::run;
use extquot::reference::TableId;

fn extquot(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("extquot").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn fixture_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("extquot-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    for t in TableId::ALL {
        fs::write(dir.join(t.file_name()), t.fixture()).unwrap();
    }
    dir
}

#[test]
fn scalar_commands() {
    assert_eq!(
        extquot(&["betti", "--n", "6"]),
        (0, "20 9 1\n".into(), String::new())
    );
    assert_eq!(extquot(&["ktheory", "--n", "6"]).1, "21 9\n");
    assert_eq!(extquot(&["euler", "--n", "1", "--k", "1"]).1, "1\n");
    assert_eq!(extquot(&["euler", "--n", "12"]).1, "28\n");
    assert_eq!(
        extquot(&["betti", "--n", "16", "--k", "4"]).1,
        extquot(&["betti", "--n", "16", "--k", "4", "--threads", "1"]).1
    );
}

#[test]
fn decompose_counts() {
    let (code, out, _) = extquot(&[
        "decompose",
        "--n",
        "6",
        "--k",
        "6",
        "--form",
        "complex",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let partitions: std::collections::BTreeSet<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!((out.lines().count() - 1, partitions.len()), (20, 11));

    let (_, out, _) = extquot(&[
        "decompose",
        "--n",
        "16",
        "--k",
        "8",
        "--partition",
        "4,4,4,4",
    ]);
    assert!(out.starts_with("# complex extended quotient, n = 16, k = 8: 6 components"));
    assert_eq!(out.matches("A^3/C_4(1,2,3)").count(), 2);

    let (_, out, _) = extquot(&["decompose", "--n", "1", "--k", "1"]);
    assert!(out.contains("1 component\n"));
    assert!(out.contains("| 1 | 1 | 1 | 1 | A^0 |"));
}

#[test]
fn decompose_json_schema() {
    let (code, out, _) = extquot(&[
        "decompose",
        "--n",
        "6",
        "--k",
        "2",
        "--form",
        "real",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["form"], "real");
    assert_eq!(v["n"], 6);
    assert_eq!(v["entries"].as_array().unwrap().len(), 14);
}

#[test]
fn component_command() {
    let (code, out, _) = extquot(&[
        "component",
        "--n",
        "16",
        "--k",
        "4",
        "--partition",
        "2^4,4^2",
        "--omega",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("C*^1 x A^4/C_2(1,1,0,1)"));
    let (code, _, err) = extquot(&[
        "component",
        "--n",
        "16",
        "--k",
        "4",
        "--partition",
        "2^4,4^2",
        "--omega",
        "9",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("omega"));
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(extquot(&["betti", "--n", "5", "--k", "2"]).0, 2);
    assert_eq!(
        extquot(&["decompose", "--n", "6", "--partition", "1+2"]).0,
        2
    );
    assert_eq!(
        extquot(&["decompose", "--n", "6", "--partition", "1+x"]).0,
        2
    );
    assert_eq!(extquot(&["verify", "nonsense"]).0, 2);
    assert_eq!(extquot(&["frobnicate"]).0, 2);
    assert_eq!(extquot(&["--help"]).0, 0);
}

#[test]
fn tables() {
    let (_, out, _) = extquot(&["table", "betti", "--k", "1", "--max-n", "45"]);
    assert_eq!(out, TableId::BettiK1.fixture());
    let (_, out, _) = extquot(&["table", "betti", "--k", "2", "--max-n", "60", "--even-only"]);
    assert_eq!(out, TableId::BettiK2.fixture());
    let (_, out, _) = extquot(&["table", "ktheory", "--min-n", "2", "--max-n", "20"]);
    assert_eq!(out, TableId::Ktheory.fixture());
    let (code, out, _) = extquot(&["table", "betti", "--max-n", "0"]);
    assert_eq!((code, out.lines().count()), (0, 1));
}

#[test]
fn duality() {
    let (code, out, _) = extquot(&["duality", "--n", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("betti=equal")).count(), 6);
    let (_, out, _) = extquot(&["duality", "--n", "6"]);
    assert!(out.contains("singularity_differences=[2+2+2 1+1+2+2 1+1+1+1+1+1]"));
    assert_eq!(extquot(&["duality", "--n", "1"]).0, 0);
}

#[test]
fn verify_paper_is_clean() {
    let (code, out, _) = extquot(&["verify", "paper"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("mismatches=0 status=ok"));
    let (code, out, _) = extquot(&["verify", "su6_orientability", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn verify_reports_a_perturbed_cell() {
    let dir = fixture_dir("perturbed");
    let path = dir.join("betti_k1.csv");
    let text = fs::read_to_string(&path)
        .unwrap()
        .replace("\n6,20,9,1,", "\n6,20,10,1,");
    fs::write(&path, text).unwrap();
    let (code, out, _) = extquot(&["verify", "paper", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(code, 1);
    let mismatches: Vec<&str> = out.lines().filter(|l| l.starts_with("mismatch")).collect();
    assert_eq!(
        mismatches,
        ["mismatch table=betti_k1 row=\"n=6\" column=\"b1\" expected=\"10\" actual=\"9\""]
    );
    assert!(out.contains("mismatches=1 status=mismatch"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_with_missing_fixture_is_an_error() {
    let dir = fixture_dir("missing");
    fs::remove_file(dir.join("ktheory.csv")).unwrap();
    let (code, _, err) = extquot(&["verify", "ktheory", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("ktheory"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_all_runs_property_suites() {
    let (code, out, _) = extquot(&["verify", "all"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(
        out.lines().filter(|l| l.starts_with("property=")).count(),
        5
    );
}

#[test]
fn json_and_csv_output_is_deterministic() {
    let args = ["decompose", "--n", "20", "--k", "4", "--format", "json"];
    let first = extquot(&args).1;
    assert_eq!(
        first,
        extquot(&[
            "--threads",
            "1",
            "decompose",
            "--n",
            "20",
            "--k",
            "4",
            "--format",
            "json"
        ])
        .1
    );
    assert_eq!(first, extquot(&args).1);
}
