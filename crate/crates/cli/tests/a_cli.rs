use std::process::Command;

use fejer_well_cli::{
    run, to_bytes, Cell, Command as Cmd, Format, HalfWidth, RunConfig, TimeSeries, TimeSpec,
};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fejer-well"))
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fejer-well-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    let usage = bin()
        .args(["trajectories", "--steps", "1"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_slice(&usage.stderr).unwrap();
    assert_eq!(record["error"], "usage");
    assert_eq!(record["exit_code"], 1);

    assert_eq!(bin().arg("dance").output().unwrap().status.code(), Some(1));
    assert_eq!(bin().output().unwrap().status.code(), Some(1));

    let io = bin()
        .args(["gibbs", "--m", "5", "--out", "/nonexistent-dir/out.csv"])
        .output()
        .unwrap();
    assert_eq!(io.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&io.stderr).contains("/nonexistent-dir/out.csv"));

    assert_eq!(
        bin()
            .args(["gibbs", "--m", "5"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn gibbs_single_order() {
    let out = bin().args(["gibbs", "--m", "200"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,overshoot_ratio,fejer_max_ratio"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row[0], 200.0);
    assert!((row[1] - 1.179).abs() < 5e-4);
    assert!(row[2] <= 1.0);
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = scratch("run.cfg");
    let out = scratch("run.json");
    std::fs::write(
        &cfg,
        "command = trajectories\nn = 40\nN = 3\nsteps = 5\nt-max = 0.5T\nformat = csv\n",
    )
    .unwrap();
    let status = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let series: TimeSeries = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(
        series.columns,
        ["t", "x_quantum", "x_fejer", "p_quantum", "p_fejer"]
    );
    assert_eq!(series.rows.len(), 5);
    let t_last = series.rows[4][0].as_f64().unwrap();
    assert!((t_last - 0.5 * 2.0 / (40.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn momentum_normalisation_switch() {
    let mut cfg = RunConfig::new(Cmd::Trajectories);
    cfg.n = 60;
    cfg.half_width = HalfWidth::Fixed(6);
    cfg.steps = 40;
    cfg.t_max = TimeSpec::Periods(1.0);
    let on = run(&cfg).unwrap().series;
    cfg.normalize_momentum = false;
    let off = run(&cfg).unwrap().series;
    let p_c = 60.0 * std::f64::consts::PI;
    for (a, b) in on.rows.iter().zip(&off.rows) {
        for col in [3, 4] {
            assert_eq!(a[col].as_f64().unwrap(), b[col].as_f64().unwrap() / p_c);
        }
        assert_eq!(a[1], b[1]);
    }
    let peak = on
        .column("p_fejer")
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap().abs())
        .fold(0.0, f64::max);
    assert!(peak <= 1.0);
}

#[test]
fn uncertainty_columns() {
    let mut cfg = RunConfig::new(Cmd::Uncertainty);
    cfg.n = 100;
    cfg.half_width = HalfWidth::Sqrt;
    cfg.steps = 50;
    let out = run(&cfg).unwrap();
    assert!(out.failures.is_empty());
    assert_eq!(
        out.series.columns,
        [
            "t",
            "delta_x",
            "delta_x_classical",
            "delta_p",
            "delta_p_classical"
        ]
    );
    assert_eq!(out.series.rows[0][3], Cell::Float(1.0));
    assert_eq!(out.series.rows[0][4], Cell::Float(1.0));
}

#[test]
fn limit_rows_follow_input() {
    let mut cfg = RunConfig::new(Cmd::Limit);
    cfg.ns = Some(vec![50, 100]);
    cfg.half_width = HalfWidth::Fixed(3);
    let s = run(&cfg).unwrap().series;
    assert_eq!(s.column("n").unwrap(), [Cell::Int(50), Cell::Int(100)]);
    assert_eq!(s.rows[0][7], Cell::missing());
    assert!(matches!(s.rows[1][7], Cell::Float(_)));
    cfg.ns = Some(vec![100, 50]);
    assert!(run(&cfg).is_err());
}

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![
        any::<i32>().prop_map(|i| Cell::Int(i as i64)),
        (-1e300f64..1e300).prop_map(Cell::Float),
        Just(Cell::missing()),
    ]
}

fn series() -> impl Strategy<Value = TimeSeries> {
    (1usize..5, 0usize..20).prop_flat_map(|(width, len)| {
        prop::collection::vec(prop::collection::vec(cell(), width - 1), len).prop_map(
            move |tails| {
                let mut s = TimeSeries {
                    columns: (0..width).map(|i| format!("c{i}")).collect(),
                    rows: Vec::new(),
                };
                for (i, tail) in tails.into_iter().enumerate() {
                    let mut row = vec![Cell::Float(i as f64 * 0.25)];
                    row.extend(tail);
                    s.rows.push(row);
                }
                s
            },
        )
    })
}

proptest! {
    #[test]
    fn json_round_trip(s in series()) {
        let bytes = to_bytes(&s, Format::Json).unwrap();
        let back: TimeSeries = serde_json::from_slice(&bytes).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn csv_line_count(s in series()) {
        let text = String::from_utf8(to_bytes(&s, Format::Csv).unwrap()).unwrap();
        prop_assert_eq!(text.lines().count(), s.rows.len() + 1);
        prop_assert!(text.ends_with('\n'));
        for (line, row) in text.lines().skip(1).zip(&s.rows) {
            for (field, original) in line.split(',').zip(row) {
                match original.as_f64() {
                    Some(v) => prop_assert_eq!(field.parse::<f64>().unwrap(), v),
                    None => prop_assert!(field.is_empty()),
                }
            }
        }
    }
}
