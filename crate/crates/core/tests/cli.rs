use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use conformable_bateman::bateman::KineticMode;
use conformable_bateman::cli::{load_config, resolve, Cli, ConfigError, GridRange, OutputFormat, RunConfig};
use conformable_bateman::density::Frame;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conformable-bateman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn spectrum_example() {
    let o = bin(&["spectrum", "--alpha", "1", "--lambda", "0", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,energy\n0,0.5\n1,1.5\n2,2.5\n3,3.5\n");
}

#[test]
fn damped_unit_order_spectrum() {
    let o = bin(&["spectrum", "--lambda", "0.5", "--n-max", "1"]);
    let rows: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!((rows[0] - 0.9375f64.sqrt() / 2.0).abs() < 1e-12);
    assert!((rows[1] - 1.5 * 0.9375f64.sqrt()).abs() < 1e-11);
}

/// `(key, config value, flag value, accessor)` for every configurable key.
#[test]
fn flags_override_config_for_every_key() {
    let dir = tempfile::tempdir().unwrap();
    type Get = fn(&RunConfig) -> String;
    let cases: [(&str, &str, &str, Get); 13] = [
        ("alpha", "0.8", "0.9", |c| c.params.alpha().to_string()),
        ("omega", "1.5", "2", |c| c.params.omega.to_string()),
        ("lambda", "0.2", "0.4", |c| c.params.damping.to_string()),
        ("mass", "2", "3", |c| c.params.mass.to_string()),
        ("hbar", "0.5", "0.7", |c| c.params.hbar.to_string()),
        ("n", "1", "2", |c| c.n.to_string()),
        ("n-max", "4", "6", |c| c.n_max.to_string()),
        ("mode", "paper", "derived", |c| c.mode.name().to_string()),
        ("frame", "original", "gauged", |c| c.frame.name().to_string()),
        ("y", "0.1,2,10", "0.2,3,20", |c| {
            format!("{},{},{}", c.y.min, c.y.max, c.y.count)
        }),
        ("t", "0.1,2,10", "0.2,3,20", |c| {
            format!("{},{},{}", c.t.min, c.t.max, c.t.count)
        }),
        ("out", "a.csv", "b.csv", |c| {
            c.out.as_ref().unwrap().display().to_string()
        }),
        ("format", "text", "csv", |c| format!("{:?}", c.format).to_lowercase()),
    ];
    for (key, in_file, on_flag, get) in cases {
        let path = write(
            dir.path(),
            &format!("{key}.conf"),
            &format!("# {key}\n{key} = {in_file}\n"),
        );
        let file_only = resolve(
            &Cli::try_parse_from(["x", "spectrum", "--config", &path])
                .unwrap()
                .common,
        )
        .unwrap();
        let flag = format!("--{key}");
        let both = resolve(
            &Cli::try_parse_from(["x", "spectrum", "--config", &path, &flag, on_flag])
                .unwrap()
                .common,
        )
        .unwrap();
        let defaults = RunConfig::default();
        let normalize = |s: &str| s.parse::<f64>().map_or(s.to_string(), |v| v.to_string());
        assert_eq!(get(&file_only), normalize(in_file), "{key} from file");
        assert_eq!(get(&both), normalize(on_flag), "{key} from flag");
        if key != "out" {
            assert_ne!(get(&file_only), get(&defaults), "{key} differs from default");
        }
    }
}

#[test]
fn config_examples() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.conf", "");
    assert_eq!(load_config(Path::new(&empty)).unwrap(), RunConfig::default());

    let alpha = write(dir.path(), "alpha.conf", "alpha = 0.8\n");
    let c = load_config(Path::new(&alpha)).unwrap();
    assert_eq!(c.params.alpha(), 0.8);
    assert_eq!(c.y, GridRange::new(1e-3, 8.0, 800));
    assert_eq!(c.t, GridRange::new(1e-3, 5.0, 50));
    assert_eq!(
        (c.mode, c.frame, c.format),
        (KineticMode::Derived, Frame::Gauged, OutputFormat::Csv)
    );

    let bad = write(dir.path(), "bad.conf", "alpha = 1.5\n");
    let err = load_config(Path::new(&bad)).unwrap_err();
    assert!(err.to_string().contains("0 < alpha <= 1"), "{err}");

    let unknown = write(dir.path(), "unknown.conf", "alpha = 0.9\nspeed = 3\n");
    assert!(matches!(
        load_config(Path::new(&unknown)),
        Err(ConfigError::UnknownKey { line: 2, .. })
    ));
    assert!(matches!(
        load_config(&dir.path().join("missing.conf")),
        Err(ConfigError::Read { .. })
    ));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin(&["spectrum", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["transmogrify"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
    assert_eq!(bin(&["spectrum", "--lambda", "2.5"]).status.code(), Some(2));
    assert_eq!(bin(&["spectrum", "--config", "/no/such/file"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.conf", "# ok\nomega = -1\n");
    let o = bin(&["spectrum", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega"));
    let syntax = write(dir.path(), "syntax.conf", "alpha 0.9\n");
    let o = bin(&["spectrum", "--config", &syntax]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(
        bin(&["spectrum", "--out", "/no/such/dir/out.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_documents_columns() {
    let help = stdout(&bin(&["--help"]));
    for columns in [
        "n,energy",
        "n,y,t,rho",
        "n,y,t,j",
        "figure,n,alpha,y,t,rho",
        "check,measured,tolerance,status",
    ] {
        assert!(help.contains(columns), "{columns} missing from help");
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let conf = write(
        dir.path(),
        "run.conf",
        "alpha = 0.9\nlambda = 0.3\ny = 0.01,5,60\nt = 0.01,3,7\nn = 2\n",
    );
    for sub in ["spectrum", "wavefunction", "density", "current", "classical"] {
        let a = bin(&[sub, "--config", &conf]);
        let b = bin(&[sub, "--config", &conf]);
        assert_eq!(a.status.code(), Some(0), "{sub}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{sub}");
        assert!(!a.stdout.contains(&b'\r'));
    }
}

#[test]
fn density_and_current_tables() {
    let o = bin(&[
        "density", "--lambda", "0.5", "--y", "0.1,3,4", "--t", "0.01,1,3", "--n", "1",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,y,t,rho"));
    assert_eq!(lines.count(), 12);

    let args = [
        "--alpha", "0.9", "--lambda", "0.5", "--y", "0.1,3,10", "--t", "0.01,1,3",
    ];
    let j = |frame: &str| -> Vec<f64> {
        let mut a = vec!["current", "--frame", frame];
        a.extend_from_slice(&args);
        stdout(&bin(&a))
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect()
    };
    assert!(j("original").iter().all(|v| v.abs() < 1e-8));
    assert!(j("gauged").iter().all(|v| *v > 0.0));
}

#[test]
fn figure_output_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("fig1.csv");
    let script = dir.path().join("fig1.gp");
    let o = bin(&[
        "figure",
        "fig1",
        "--y",
        "0.01,4,20",
        "--t",
        "0.01,2,3",
        "--out",
        data.to_str().unwrap(),
        "--script",
        script.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&data).unwrap();
    assert!(csv.starts_with("figure,n,alpha,y,t,rho\nfig1,0,1,0.01,0.01,"));
    assert_eq!(csv.lines().count(), 1 + 2 * 20 * 3);
    let gp = std::fs::read_to_string(&script).unwrap();
    assert!(gp.contains(data.to_str().unwrap()));
    assert_eq!(bin(&["figure", "fig7"]).status.code(), Some(2));
}

#[test]
fn verify_passes_in_both_formats() {
    let csv = bin(&["verify"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    assert!(text.starts_with("check,measured,tolerance,status\n"));
    assert!(!text.contains(",fail"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",info")).count(), 18);

    let report = bin(&["verify", "--format", "text"]);
    assert_eq!(report.status.code(), Some(0));
    assert!(stdout(&report).contains("checks passed"));
}
