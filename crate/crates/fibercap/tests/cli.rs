use std::process::{Command, Output};

fn fibercap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibercap"))
        .args(args)
        .env("FIBERCAP_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows as columns keyed by the header.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (h, rows) = table(text);
    let i = h.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn write_config(name: &str, body: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("fibercap-cli-{}-{name}.toml", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn gfun_at_zero_is_one() {
    let o = fibercap(&["gfun", "--beta", "0", "--methods", "series,cubature"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("# fibercap gfun config_hash=0x"));
    assert_eq!(column(&s, "g_series"), vec![1.0]);
    assert!((column(&s, "g_cubature")[0] - 1.0).abs() < 1e-15);
}

#[test]
fn default_gfun_table_is_monotone() {
    let o = fibercap(&["gfun"]);
    assert!(o.status.success());
    let g = column(&stdout(&o), "g_series");
    assert_eq!(g.len(), 50);
    assert!(g.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn linear_link_sweep_collapses_to_shannon() {
    let cfg = write_config("linear", "[link]\ngamma_per_w_km = 0.0\n[sweep]\npoints = 10\n");
    let o = fibercap(&["--config", cfg.to_str().unwrap(), "sweep"]);
    std::fs::remove_file(&cfg).unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    let snr = column(&s, "snr");
    for name in ["dispersive", "nondispersive_exact", "nondispersive_expansion"] {
        for (v, x) in column(&s, name).iter().zip(&snr) {
            assert!((v - x.ln()).abs() < 1e-12 * x.ln().abs().max(1.0), "{name}");
        }
    }
    for (v, x) in column(&s, "shannon").iter().zip(&snr) {
        assert!((v - x.ln_1p()).abs() < 1e-12);
    }
}

#[test]
fn expansion_peaks_near_thirty_two_db() {
    let o = fibercap(&["figure", "fig2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let db = column(&s, "snr_db");
    let e = column(&s, "nondispersive_expansion");
    let (i, _) = e.iter().enumerate().fold((0, f64::MIN), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
    assert!((db[i] - 32.5).abs() <= 0.5, "{}", db[i]);
}

#[test]
fn crossover_table_lists_both_links() {
    let o = fibercap(&["crossover"]);
    assert!(o.status.success());
    let c = column(&stdout(&o), "crossover_db");
    assert!((c[0] - 32.836).abs() < 0.01 && (c[1] - 36.683).abs() < 0.01, "{c:?}");
}

#[test]
fn validate_is_deterministic_across_threads() {
    let a = fibercap(&["validate", "--seed", "7"]);
    let b = Command::new(env!("CARGO_BIN_EXE_fibercap"))
        .args(["validate", "--seed", "7", "--threads", "3"])
        .output()
        .unwrap();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("result=pass"));
}

#[test]
fn injected_fault_is_caught() {
    let o = fibercap(&["validate", "--inject-fault", "g-dispatch"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("check.02.g_consistency=fail"));
}

#[test]
fn bad_config_exits_two() {
    let cfg = write_config("bad", "[link]\nnot_a_key = 1\n");
    let o = fibercap(&["--config", cfg.to_str().unwrap(), "sweep"]);
    std::fs::remove_file(&cfg).unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fibercap(&["gfun", "--methods", "bogus"]).status.code(), Some(2));
}

#[test]
fn simulate_writes_a_readable_snapshot() {
    let cfg = write_config("sim", "[simulate]\nm_meaning = 8\nn_steps = 200\n");
    let snap = std::env::temp_dir().join(format!("fibercap-cli-{}.cfld", std::process::id()));
    let o = fibercap(&["--config", cfg.to_str().unwrap(), "simulate", "--snapshot", snap.to_str().unwrap()]);
    std::fs::remove_file(&cfg).unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let field = fibercap::snapshot::read_binary(&snap).unwrap();
    std::fs::remove_file(&snap).unwrap();
    assert_eq!(field.grid.m_meaning, 8);
    let out_re = column(&stdout(&o), "out_re");
    assert_eq!(out_re.len(), field.grid.m_total);
}
