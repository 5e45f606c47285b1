use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_photonfluid"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(cmd: &str, cfg: &Path, sets: &[&str], out: &Path) -> Output {
    let mut c = bin();
    c.arg(cmd).arg("--config").arg(cfg).arg("--out").arg(out);
    for s in sets {
        c.arg("--set").arg(s);
    }
    c.output().expect("binary runs")
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn params_writes_report_with_hash_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    let o = run("params", &config("paper_s4.cfg"), &[], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(out.join("params.csv"));
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    assert!(first.starts_with("# photonfluid "), "{first}");
    let hash = first.split("config-sha256=").nth(1).unwrap();
    assert_eq!(hash.len(), 64);
    assert_eq!(lines.next(), Some("quantity,value,unit"));
    let json: serde_json::Value = serde_json::from_str(&read(out.join("params.json"))).unwrap();
    let vs = json["sound_speed"].as_f64().unwrap();
    assert!((vs / 4.2e7 - 1.0).abs() < 0.1, "v_s = {vs}");
    assert_eq!(json["fluid_regime"], true);
}

#[test]
fn zero_intensity_is_not_a_fluid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    let o = run("params", &config("paper_s4.cfg"), &["drive.intensity=0"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&read(out.join("params.json"))).unwrap();
    assert_eq!(json["condensate_number"].as_f64(), Some(0.0));
    assert_eq!(json["sound_speed"].as_f64(), Some(0.0));
    assert_eq!(json["fluid_regime"], false);
}

#[test]
fn validation_failures_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["cavity.reflectivity=1.5"],
        &["medium.n2=-6e-6"],
        &["cavity.lenght=2"],
        &["simulation.ripple.amplitude=0.5", "simulation.scenario=ripple"],
        &[
            "medium.n2=null",
            "medium.dipole=2e-17",
            "medium.detuning=-3.7699e9",
        ],
    ];
    for (i, sets) in cases.iter().enumerate() {
        let out = dir.path().join(format!("case{i}"));
        let cmd = if sets.iter().any(|s| s.contains("ripple")) {
            "simulate"
        } else {
            "params"
        };
        let o = run(cmd, &config("paper_s4.cfg"), sets, &out);
        assert_eq!(o.status.code(), Some(2), "{sets:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists(), "{sets:?} left output behind");
    }
    let out = dir.path().join("blue");
    let o = run(
        "params",
        &config("paper_s4.cfg"),
        &["medium.n2=null", "medium.dipole=2e-17", "medium.detuning=-3.7699e9"],
        &out,
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("attractive medium"));
}

#[test]
fn missing_config_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run("params", &dir.path().join("nope.cfg"), &[], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unresolved_frequency_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(
        "simulate",
        &config("paper_s4.cfg"),
        &[
            "simulation.dispersion.k_list=[1.0]",
            "simulation.dispersion.nx=64",
            "simulation.dispersion.duration=3.0",
        ],
        &out,
    );
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());
}

#[test]
fn roton_spectrum_has_reduced_critical_velocity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    let o = run("spectrum", &config("roton.cfg"), &[], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read(out.join("spectrum_summary.csv"));
    let get = |key: &str| -> f64 {
        summary
            .lines()
            .find(|l| l.starts_with(&format!("{key},")))
            .and_then(|l| l.split(',').nth(1))
            .and_then(|v| v.parse().ok())
            .unwrap()
    };
    assert!(get("landau_velocity") < get("sound_speed"));
    let curve = read(out.join("spectrum.csv"));
    assert!(curve.starts_with("# photonfluid "));
    assert!(curve.lines().nth(1).unwrap().starts_with("kappa,"));
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn outputs_are_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let jobs: &[(&str, &str, &[&str])] = &[
        ("params", "paper_s4.cfg", &[]),
        ("spectrum", "roton.cfg", &[]),
        (
            "simulate",
            "paper_s4.cfg",
            &["simulation.dispersion.k_list=[0.5,1.0]", "simulation.dispersion.nx=64"],
        ),
        (
            "simulate",
            "obstacle.cfg",
            &[
                "simulation.obstacle.nx=64",
                "simulation.obstacle.ny=64",
                "simulation.obstacle.obstacle_pos=[-4,0]",
                "simulation.obstacle.obstacle_radius=2",
                "simulation.obstacle.duration=10",
                "simulation.obstacle.ramp=5",
                "simulation.obstacle.sponge_width=6",
                "seed=7",
            ],
        ),
    ];
    for (i, (cmd, cfg, sets)) in jobs.iter().enumerate() {
        let a = dir.path().join(format!("{i}a"));
        let b = dir.path().join(format!("{i}b"));
        for out in [&a, &b] {
            let o = run(cmd, &config(cfg), sets, out);
            assert!(o.status.success(), "{cmd} {cfg}: {}", String::from_utf8_lossy(&o.stderr));
        }
        let (oa, ob) = (outputs(&a), outputs(&b));
        assert!(!oa.is_empty());
        assert_eq!(oa, ob, "{cmd} {cfg} differs between runs");
    }
}

#[test]
fn changing_the_seed_changes_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let mut firsts = Vec::new();
    for seed in ["seed=0", "seed=1"] {
        let out = dir.path().join(seed);
        let o = run("params", &config("paper_s4.cfg"), &[seed], &out);
        assert!(o.status.success());
        firsts.push(read(out.join("params.csv")).lines().next().unwrap().to_string());
    }
    assert_ne!(firsts[0], firsts[1]);
}
