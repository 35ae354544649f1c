use pwx::cli::{run_with, Settings};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pwx(args: &[&str]) -> Output {
    pwx_with(args, Settings { iter_cap: 64 })
}

fn pwx_with(args: &[&str], settings: Settings) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pwx").chain(args.iter().copied());
    let code = run_with(argv, settings, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn example_map() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/examples/p2s05.pwmap").to_string()
}

#[test]
fn bounds_report_lines() {
    let o = pwx(&["bounds", "--p", "2", "--s", "1/2"]);
    assert_eq!(o.code, 0);
    for line in ["c=0.5", "L=2", "j_max=0", "U=1", "holds=true"] {
        assert!(o.stdout.lines().any(|l| l == line), "missing {line} in {}", o.stdout);
    }
}

#[test]
fn bounds_validation_error() {
    let o = pwx(&["bounds", "--p", "1", "--s", "1/2"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("p must exceed 1"));
    assert_eq!(o.stderr.lines().count(), 1);
}

#[test]
fn bounds_rejects_general_class_f() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.pwmap");
    std::fs::write(&path, "family = classF\np = 2\ns = 1/2\na = 0\nb = 0\nd = 1/2\n").unwrap();
    let o = pwx(&["bounds", "--map", path.to_str().unwrap()]);
    assert_eq!(o.code, 2);
}

#[test]
fn min_n_from_mapfile() {
    let o = pwx(&["min-n", "--map", &example_map(), "--cap", "16"]);
    assert_eq!((o.code, o.stdout.as_str()), (0, "3\n"));
    let o = pwx(&["min-n", "--map", &example_map(), "--cap", "2"]);
    assert_eq!(o.code, 2);
}

#[test]
fn env_cap_limits_iterate() {
    let o = pwx_with(&["iterate", "--p", "2", "--s", "1/2", "-n", "3"], Settings { iter_cap: 2 });
    assert_eq!(o.code, 2);
    assert!(Settings::from_env_value(Some("abc")).is_err());
    assert!(Settings::from_env_value(Some("0")).is_err());
    assert_eq!(Settings::from_env_value(Some("12")).unwrap().iter_cap, 12);
    assert_eq!(Settings::from_env_value(None).unwrap().iter_cap, 64);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(pwx(&["frobnicate"]).code, 1);
    assert_eq!(pwx(&["bounds", "--p", "2"]).code, 1);
    assert_eq!(pwx(&["sweep", "--p", "2,3", "--s"]).code, 1);
    assert_eq!(pwx(&["--help"]).code, 0);
}

#[test]
fn malformed_numbers_exit_two() {
    let o = pwx(&["bounds", "--p", "two", "--s", "1/2"]);
    assert_eq!(o.code, 2);
    let o = pwx(&["exactness", "--p", "2", "--s", "1/2", "--interval", "0.5"]);
    assert_eq!(o.code, 2);
}

#[test]
fn every_subcommand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["bounds", "--p", "2", "--s", "1/2"], "p,s,c,lower_L,j_max,upper_U,holds,float_floor_discrepancy\n2,1/2,0.5,2,0,1,true,false\n"),
        (vec!["min-n", "--p", "3", "--s", "1/2"], "p,s,minimal_N,min_slope\n3,1/2,2,3/2\n"),
        (vec!["iterate", "--p", "2", "--s", "1/2", "-n", "2"], "itinerary,lo,lo_closed,hi,hi_closed,slope,intercept\nLL,0,true,1/4,true,4,0\nLR,1/4,false,1/2,true,1,-1/4\nRL,1/2,false,1,true,1,-1/2\n"),
        (vec!["orbit", "--p", "3", "--s", "1/2", "--steps", "2"], "i,x,label\n0,1,R\n1,1/3,L\n2,1,\n"),
        (vec!["exactness", "--p", "2", "--s", "1/2", "--interval", "0,1/16"], "n,measure,measure_float\n0,1/16,0.0625\n1,1/8,0.125\n2,1/4,0.25\n3,1/2,0.5\n4,1,1\n"),
        (vec!["sweep", "--p", "2,3", "--s", "1/2", "--cap", "16"], "p,s,c,lower_L,j_max,upper_U,holds,minimal_N\n2,0.5,0.5,2,0,1,true,3\n3,0.5,0.386852807235,3,0,1,true,2\n"),
    ];
    for (i, (args, expected)) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("{i}.csv"));
        let mut argv = args.clone();
        argv.push("--csv");
        argv.push(path.to_str().unwrap());
        let o = pwx(&argv);
        assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), expected, "{args:?}");
    }

    let path = dir.path().join("ulam.csv");
    let o = pwx(&["ulam", "--p", "2", "--s", "1/2", "--k", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "cell,lo,hi,mass,density");
    assert_eq!(lines[1], "0,0,1/2,0.666666666667,1.33333333333");
    assert_eq!(lines[2], "1,1/2,1,0.333333333333,0.666666666667");
}

#[test]
fn sweep_rows_and_invalid_pairs() {
    let o = pwx(&["sweep", "--p", "10", "--s", "0.9", "--cap", "4"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().nth(1).unwrap(), "10,0.9,0.0437553553034,23,6,7,true,-");

    let o = pwx(&["sweep", "--p", "2,1", "--s", "1/2"]);
    assert_eq!(o.code, 2);
    let o = pwx(&["sweep", "--p", "2,1", "--s", "1/2", "--skip-invalid", "--cap", "16"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 2);
    assert!(o.stderr.contains("warning"));
}

#[test]
fn sweep_is_deterministic_across_workers() {
    let args = |w: &'static str| {
        vec!["sweep", "--p", "3/2,2,3,5,7.5", "--s", "1/4,1/2,3/4,0.3", "--cap", "24", "--workers", w]
    };
    let single = pwx(&args("1"));
    assert_eq!(single.code, 0);
    assert_eq!(single.stdout, pwx(&args("1")).stdout);
    assert_eq!(single.stdout, pwx(&args("4")).stdout);
    assert_eq!(single.stdout, pwx(&args("8")).stdout);
}
