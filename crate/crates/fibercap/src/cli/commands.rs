use fibercap_core::channels::{
    applicability_bound, crossover_snr, evaluate, nondispersive_penalty, ApplicabilityBound,
    PenaltyQuadrature,
};
use fibercap_core::grid::{make_grid, sample_gaussian_input};
use fibercap_core::params::{derive_dimensionless, gamma_tilde_of_snr, linear_to_db, Span};
use fibercap_core::rng::{derive_seed, master_rng};
use fibercap_core::specfun::{
    cubature_nodes_for, g_asymptotic, g_cubature, g_discrete, g_eval, g_series, DiscreteMode,
    GConfig, GEval, SINE_GRID_LITERAL,
};

use super::output::{emit, num, CsvTable};
use super::{Cli, Command, Fault, FigureArg, Status, SuiteArg};
use crate::config::{grid, Config, GfunConfig, GfunMethod, Spacing};
use crate::error::{Error, Result};
use crate::mi::estimate_mi;
use crate::propagate::{propagate, PropagationConfig};
use crate::snapshot;
use crate::validate::{render_report, run_all, Context, Scale};

const SIMULATE_INPUT_TAG: u64 = 0x51;
const SIMULATE_NOISE_TAG: u64 = 0x52;

pub(super) fn dispatch(cli: &Cli, config: &Config) -> Result<Status> {
    let g = &cli.global;
    let comment = |cmd: &str| {
        format!(
            "fibercap {cmd} config_hash=0x{:016x} seed={}",
            config.hash(),
            g.seed
        )
    };
    let write_table = |cmd: &str, table: &CsvTable| {
        emit(g.out.as_deref(), |w| table.write(w, &comment(cmd)))
    };
    match &cli.command {
        Command::Gfun { beta, methods } => {
            let mut cfg = config.gfun.clone();
            if let Some(b) = beta {
                cfg.values = Some(b.clone());
            }
            if let Some(m) = methods {
                cfg.methods = m
                    .iter()
                    .map(|s| parse_method(s))
                    .collect::<Result<Vec<_>>>()?;
            }
            write_table("gfun", &gfun_table(&cfg)?)?;
        }
        Command::Sweep { beta_tilde } => {
            let mut cfg = config.clone();
            if beta_tilde.is_some() {
                cfg.link.beta_tilde = *beta_tilde;
            }
            write_table("sweep", &sweep_table(&cfg)?)?;
        }
        Command::Crossover { beta_tilde, ratio } => {
            write_table("crossover", &crossover_table(config, beta_tilde, *ratio)?)?;
        }
        Command::Simulate { snapshot: snap } => {
            let (table, field) = simulate(config, g.seed)?;
            if let Some(path) = snap {
                snapshot::write_binary(path, &field)?;
            }
            write_table("simulate", &table)?;
        }
        Command::MiMc => {
            write_table("mi-mc", &mi_table(config, g.seed)?)?;
        }
        Command::Validate {
            suite,
            inject_fault,
        } => {
            let scale = match suite {
                SuiteArg::Fast => Scale::Fast,
                SuiteArg::Full => Scale::Full,
            };
            let mut ctx = Context::new(scale, g.seed);
            if let Some(Fault::GDispatch) = inject_fault {
                ctx.g_config = GConfig {
                    series_switch: 0.0,
                    asymptotic_switch: 0.0,
                    ..GConfig::default()
                };
            }
            let checks = run_all(&ctx);
            for c in &checks {
                eprintln!("{}", c.line());
            }
            let report = render_report(&ctx, &checks);
            emit(g.out.as_deref(), |w| w.write_all(report.as_bytes()))?;
            if checks.iter().any(|c| !c.passed) {
                return Ok(Status::ChecksFailed);
            }
        }
        Command::Figure { which } => {
            let (name, table) = match which {
                FigureArg::Fig1 => {
                    let cfg = GfunConfig {
                        values: Some(grid(1.0, 2000.0, 50, Spacing::Log)?),
                        methods: vec![GfunMethod::Series, GfunMethod::Asymptotic],
                        ..GfunConfig::default()
                    };
                    ("figure fig1", gfun_table(&cfg)?)
                }
                FigureArg::Fig2 | FigureArg::Fig3 => {
                    let mut cfg = config.clone();
                    cfg.link.beta_tilde = Some(if *which == FigureArg::Fig2 { 200.0 } else { 800.0 });
                    let name = if *which == FigureArg::Fig2 { "figure fig2" } else { "figure fig3" };
                    (name, sweep_table(&cfg)?)
                }
            };
            write_table(name, &table)?;
        }
    }
    Ok(Status::Ok)
}

fn parse_method(s: &str) -> Result<GfunMethod> {
    Ok(match s {
        "series" => GfunMethod::Series,
        "cubature" => GfunMethod::Cubature,
        "asymptotic" => GfunMethod::Asymptotic,
        "riemann" => GfunMethod::Riemann,
        "sine_grid" => GfunMethod::SineGrid,
        other => return Err(Error::Config(format!("unknown g method `{other}`"))),
    })
}

fn status_cell(errors: &[String]) -> String {
    if errors.is_empty() {
        "ok".into()
    } else {
        errors.join("; ").replace(',', ";")
    }
}

pub(super) fn gfun_table(cfg: &GfunConfig) -> Result<CsvTable> {
    let betas = cfg.betas()?;
    let mut header = vec!["beta_tilde".to_string()];
    for m in &cfg.methods {
        header.push(format!("g_{}", m.name()));
        header.push(format!("err_{}", m.name()));
    }
    header.push("status".into());
    let mut table = CsvTable::new(header);
    for &b in &betas {
        let mut row = vec![num(b)];
        let mut errors = Vec::new();
        for &m in &cfg.methods {
            let r: fibercap_core::Result<GEval> = match m {
                GfunMethod::Series => g_series(b, 12),
                GfunMethod::Cubature => g_cubature(b, cubature_nodes_for(b, cfg.cubature_nodes)),
                GfunMethod::Asymptotic => g_asymptotic(b),
                GfunMethod::Riemann => g_discrete(b, cfg.discrete_m, DiscreteMode::Riemann),
                GfunMethod::SineGrid => g_discrete(
                    b,
                    cfg.discrete_m,
                    DiscreteMode::SineGrid {
                        calibration: SINE_GRID_LITERAL,
                    },
                ),
            };
            match r {
                Ok(e) => {
                    row.push(num(e.value));
                    row.push(num(e.err_estimate));
                }
                Err(e) => {
                    row.push(num(f64::NAN));
                    row.push(num(f64::NAN));
                    errors.push(format!("{}: {e}", m.name()));
                }
            }
        }
        row.push(status_cell(&errors));
        table.push(row);
    }
    Ok(table)
}

pub(super) fn sweep_table(cfg: &Config) -> Result<CsvTable> {
    let spec = cfg.sweep.spec()?;
    let phys = cfg.link.physical()?;
    let d = derive_dimensionless(&phys)?;
    let g = g_eval(d.beta_tilde)?;
    let mut header: Vec<String> = ["snr_db", "snr", "gamma_tilde"].map(String::from).to_vec();
    header.extend(spec.models.iter().map(|m| m.name().to_string()));
    header.push("status".into());
    let mut table = CsvTable::new(header);
    for &snr in &spec.snr {
        let gt = gamma_tilde_of_snr(&phys, snr)?;
        let mut row = vec![num(linear_to_db(snr)), num(snr), num(gt)];
        let mut errors = Vec::new();
        for &m in &spec.models {
            match evaluate(m, snr, gt, &g) {
                Ok(p) => row.push(num(p.se_nats)),
                Err(e) => {
                    row.push(num(f64::NAN));
                    errors.push(format!("{}: {e}", m.name()));
                }
            }
        }
        row.push(status_cell(&errors));
        table.push(row);
    }
    Ok(table)
}

fn crossover_table(cfg: &Config, betas: &[f64], ratio: f64) -> Result<CsvTable> {
    let base = cfg.link.physical()?;
    let mut table = CsvTable::new(["beta_tilde", "g", "crossover_db", "applicability_db", "status"]);
    for &b in betas {
        let phys = base.with_beta_tilde(b)?;
        let mut errors = Vec::new();
        let g = g_eval(b).map(|e| e.value).unwrap_or_else(|e| {
            errors.push(format!("g: {e}"));
            f64::NAN
        });
        let cross = crossover_snr(&phys).map(|c| c.snr_db).unwrap_or_else(|e| {
            errors.push(format!("crossover: {e}"));
            f64::NAN
        });
        let bound = match applicability_bound(&phys, ratio) {
            Ok(ApplicabilityBound::Bounded { snr_db, .. }) => num(snr_db),
            Ok(ApplicabilityBound::Unbounded) => "inf".into(),
            Err(e) => {
                errors.push(format!("applicability: {e}"));
                num(f64::NAN)
            }
        };
        table.push([num(b), num(g), num(cross), bound, status_cell(&errors)]);
    }
    Ok(table)
}

fn simulate(
    cfg: &Config,
    seed: u64,
) -> Result<(CsvTable, fibercap_core::grid::ComplexField)> {
    let phys = cfg.link.physical()?;
    let sim = &cfg.simulate;
    let grid = make_grid(phys.bandwidth, sim.m_meaning, sim.oversampling)
        .map_err(|e| Error::Config(e.to_string()))?;
    let prop = PropagationConfig::new(sim.n_steps, sim.scheme()?, derive_seed(seed, SIMULATE_NOISE_TAG))
        .map_err(|e| Error::Config(e.to_string()))?;
    let x = sample_gaussian_input(
        &grid,
        phys.signal_psd,
        &mut master_rng(derive_seed(seed, SIMULATE_INPUT_TAG)),
    )?;
    let q = sim.noise.then_some(phys.noise_psd);
    let y = propagate(&x, &Span::from(&phys), &prop, q)?;
    let mut table = CsvTable::new(["index", "omega", "in_re", "in_im", "out_re", "out_im"]);
    let mut order: Vec<usize> = (0..grid.m_total).collect();
    order.sort_by_key(|&j| grid.signed_index(j));
    for j in order {
        table.push([
            grid.signed_index(j).to_string(),
            num(grid.omega(j)),
            num(x.samples[j].re),
            num(x.samples[j].im),
            num(y.samples[j].re),
            num(y.samples[j].im),
        ]);
    }
    eprintln!(
        "input_power_w={:.6e} output_power_w={:.6e} out_of_band_power_w={:.6e}",
        x.average_power(),
        y.average_power(),
        y.out_of_band_power()?
    );
    Ok((table, y))
}

fn mi_table(cfg: &Config, seed: u64) -> Result<CsvTable> {
    let (ch, mi_cfg) = cfg.mi.resolve()?;
    let report = estimate_mi(&ch, &mi_cfg, seed)?;
    if report.has_degenerate_proposal() {
        eprintln!(
            "warning: {} of {} outer samples had effective sample size below 10% of n_inner (min {:.1})",
            report.degenerate, mi_cfg.n_outer, report.min_ess
        );
    }
    let penalty = nondispersive_penalty(ch.gamma_tilde(), PenaltyQuadrature::Auto)?;
    let mut table = CsvTable::new([
        "snr_db",
        "gamma_tilde",
        "mi_nats",
        "std_error",
        "n_outer",
        "n_inner",
        "penalty_mc",
        "penalty_formula",
        "min_ess",
        "degenerate",
    ]);
    table.push([
        num(linear_to_db(ch.snr())),
        num(ch.gamma_tilde()),
        num(report.estimate.mean),
        num(report.estimate.std_error),
        mi_cfg.n_outer.to_string(),
        mi_cfg.n_inner.to_string(),
        num(ch.snr().ln() - report.estimate.mean),
        num(penalty),
        num(report.min_ess),
        report.degenerate.to_string(),
    ]);
    Ok(table)
}
