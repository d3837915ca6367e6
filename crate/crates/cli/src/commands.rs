use std::path::PathBuf;

use biharm_core::exponents::*;
use biharm_core::greens::{greens_biharmonic, greens_laplacian, greens_radial_derivative, GreensParams};
use biharm_core::grid::{Field, PeriodicGrid};
use biharm_core::nonlinear::*;
use biharm_core::operators::{convolve_radial, Kernel};
use biharm_core::radial::{Bump, Gaussian, RadialFunction, RadialProfile};
use biharm_core::spectral::solve_biharmonic_periodic;

use crate::config::*;
use crate::output::{num, Csv};
use crate::suites::run_suite;
use crate::*;

pub fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Exponents(ExponentsCommand::Table { n, table, p, q, sigma }) => {
            println!("{}", exponent_table(*n, table, p.as_deref(), q.as_deref(), sigma.as_deref())?);
            Ok(())
        }
        Command::Exponents(ExponentsCommand::Chain { n, sigma, format }) => exponent_chain(*n, sigma, format),
        Command::Greens(GreensCommand::Table { n, k, rmin, rmax, points, output }) => {
            greens_table(*n, *k, *rmin, *rmax, *points)?.emit(output.as_deref())
        }
        Command::Greens(GreensCommand::Verify { n, k, suite }) => greens_verify(*n, *k, suite),
        Command::Solve(SolveCommand::Linear(args)) => {
            let cfg = RunConfig::load(&args.config)?;
            let linear = cfg.linear.ok_or_else(|| CliError::Input("config has no [linear] section".into()))?;
            solve_linear(&linear)?.emit(args.output.as_deref())
        }
        Command::Solve(SolveCommand::Nonlinear { args, trace }) => {
            let cfg = RunConfig::load(&args.config)?;
            let nl = cfg.nonlinear.ok_or_else(|| CliError::Input("config has no [nonlinear] section".into()))?;
            let trace_path: Option<PathBuf> = trace.clone().or_else(|| args.output.as_ref().map(|o| o.with_extension("trace.csv")));
            let outcome = solve_nonlinear(&nl)?;
            if let Some(path) = &trace_path {
                outcome.trace.emit(Some(path))?;
            }
            if let Some(solution) = &outcome.solution {
                solution.emit(args.output.as_deref())?;
            }
            eprint!("{}", outcome.summary);
            match outcome.failure {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Oracle(OracleCommand::Compare(args)) => {
            let cfg = RunConfig::load(&args.config)?;
            let oracle = cfg.oracle.ok_or_else(|| CliError::Input("config has no [oracle] section".into()))?;
            let (csv, discrepancy) = oracle_compare(&oracle)?;
            csv.emit(args.output.as_deref())?;
            if discrepancy < oracle.bound {
                Ok(())
            } else {
                Err(CliError::Failure(format!("max relative discrepancy {discrepancy:.3e} ≥ bound {:.3e}", oracle.bound)))
            }
        }
    }
}

fn need<'a>(value: Option<&'a str>, flag: &str, table: &str) -> Result<&'a str, CliError> {
    value.ok_or_else(|| CliError::Input(format!("table {table} needs --{flag}")))
}

pub fn exponent_table(n: usize, table: &str, p: Option<&str>, q: Option<&str>, sigma: Option<&str>) -> Result<String, CliError> {
    let exponent = |flag: &str, v: Option<&str>| -> Result<Exponent, CliError> { Ok(Exponent::parse(need(v, flag, table)?)?) };
    let interval = match table {
        "T" => young_t(n, &exponent("p", p)?)?,
        "grad" => young_grad(n, &exponent("p", p)?)?,
        "lap" => young_lap(n, &exponent("p", p)?)?,
        "sobolev" => sobolev_w2s_range(n, &exponent("p", p)?)?,
        "thm43" => thm43_interval(n, &exponent("p", p)?, &exponent("q", q)?)?,
        "window" => linear_p_window(n)?,
        "initial" => initial_p_interval(n, &parse_rational(need(sigma, "sigma", table)?)?)?,
        "critical" => return Ok(sobolev_h2_critical(n)?.to_string()),
        other => {
            return Err(CliError::Input(format!(
                "unknown table {other:?}; expected T, grad, lap, sobolev, thm43, window, initial or critical"
            )))
        }
    };
    Ok(interval.to_string())
}

fn exponent_chain(n: usize, sigma: &str, format: &str) -> Result<(), CliError> {
    if format != "text" && format != "csv" {
        return Err(CliError::Input(format!("unknown format {format:?}; expected text or csv")));
    }
    let sigma = parse_rational(sigma)?;
    let trace = bootstrap_chain(n, &sigma)?;
    match format {
        "csv" => print!("{}", trace.to_csv()),
        _ => print!("{}", trace.to_text()),
    }
    Ok(())
}

pub fn greens_table(n: usize, k: f64, rmin: f64, rmax: f64, points: usize) -> Result<Csv, CliError> {
    let params = GreensParams::new(n, k)?;
    if !(rmin > 0.0 && rmax > rmin && rmax.is_finite()) || points < 2 {
        return Err(CliError::Input(format!("need 0 < rmin < rmax and points ≥ 2 (got {rmin}, {rmax}, {points})")));
    }
    let mut csv = Csv::new("greens table");
    csv.comment(&format!("N = {n}"));
    csv.comment(&format!("k = {}", num(k)));
    csv.comment(&format!("rmin = {}", num(rmin)));
    csv.comment(&format!("rmax = {}", num(rmax)));
    csv.comment(&format!("points = {points}"));
    csv.columns(&["r", "G", "dG_dr", "lap_G"]);
    for r in RadialProfile::log_nodes(rmin, rmax, points) {
        csv.row(&[r, greens_biharmonic(&params, r)?, greens_radial_derivative(&params, r)?, greens_laplacian(&params, r)?]);
    }
    Ok(csv)
}

fn greens_verify(n: usize, k: f64, suite: &str) -> Result<(), CliError> {
    let params = GreensParams::new(n, k)?;
    let report = run_suite(suite, &params)?;
    for line in &report.lines {
        println!("{line}");
    }
    for note in &report.notes {
        println!("note {note}");
    }
    if report.passed {
        println!("suite {suite}: PASS");
        Ok(())
    } else {
        println!("suite {suite}: FAIL");
        Err(CliError::Failure(format!("suite {suite} failed")))
    }
}

fn make_source(cfg: &SourceConfig) -> Result<Box<dyn RadialFunction>, CliError> {
    if !(cfg.width > 0.0 && cfg.width.is_finite() && cfg.amplitude.is_finite()) {
        return Err(CliError::Input(format!("source width must be positive and amplitude finite (got {}, {})", cfg.width, cfg.amplitude)));
    }
    Ok(match cfg.kind {
        SourceKind::Gaussian => Box::new(Gaussian::new(cfg.amplitude, cfg.width)),
        SourceKind::Bump => Box::new(Bump { amplitude: cfg.amplitude, radius: cfg.width }),
    })
}

fn resolve_grid(n: usize, k: f64, halfwidth: Option<f64>, points: Option<usize>) -> Result<PeriodicGrid, CliError> {
    let default = PeriodicGrid::default_for(n, k)?;
    Ok(PeriodicGrid::new(n, halfwidth.unwrap_or(default.halfwidth), points.unwrap_or(default.points))?)
}

/// Grid radii `j·h ≤ rmax` on the first axis.
fn axis_radii(grid: &PeriodicGrid, rmax: f64) -> Vec<f64> {
    let c = grid.points / 2;
    (c..grid.points).map(|j| grid.coord(j)).filter(|&r| r <= rmax * (1.0 + 1e-12)).collect()
}

fn check_radii(rmax: f64, points: usize) -> Result<(), CliError> {
    if !(rmax > 0.0 && rmax.is_finite()) || points < 2 {
        return Err(CliError::Input(format!("need rmax > 0 and points ≥ 2 (got {rmax}, {points})")));
    }
    Ok(())
}

pub fn solve_linear(cfg: &LinearConfig) -> Result<Csv, CliError> {
    let params = GreensParams::new(cfg.n, cfg.k)?;
    let source = make_source(&cfg.source)?;
    let mut resolved = cfg.clone();
    let (radii, values) = match cfg.method {
        LinearMethod::Radial => {
            let points = cfg.points.unwrap_or(41);
            check_radii(cfg.rmax, points)?;
            resolved.points = Some(points);
            let radii = RadialProfile::uniform_nodes(cfg.rmax, points);
            let u = convolve_radial(&params, source.as_ref(), &radii, Kernel::G)?;
            let lap = convolve_radial(&params, source.as_ref(), &radii, Kernel::LapG)?;
            (radii, u.into_iter().zip(lap).collect::<Vec<_>>())
        }
        LinearMethod::Spectral => {
            let grid = resolve_grid(cfg.n, cfg.k, cfg.halfwidth, cfg.grid_points)?;
            check_radii(cfg.rmax, 2)?;
            resolved.halfwidth = Some(grid.halfwidth);
            resolved.grid_points = Some(grid.points);
            let f = Field::from_radial(grid, |r| source.eval(r));
            let u = solve_biharmonic_periodic(&grid, &f, cfg.k)?;
            let radii = axis_radii(&grid, cfg.rmax);
            let values = Solution::Grid(u).sample(&radii)?;
            (radii, values)
        }
    };
    let mut csv = Csv::new("solve linear");
    csv.echo_toml(&RunConfig { linear: Some(resolved), nonlinear: None, oracle: None })?;
    csv.columns(&["r", "u", "lap_u"]);
    for (r, (u, lap)) in radii.iter().zip(values) {
        csv.row(&[*r, u, lap]);
    }
    Ok(csv)
}

pub struct NonlinearOutcome {
    pub solution: Option<Csv>,
    pub trace: Csv,
    /// Human-readable notes for stderr.
    pub summary: String,
    pub failure: Option<CliError>,
}

fn build_problem(cfg: &NonlinearConfig) -> Result<NonlinearProblem, CliError> {
    let params = GreensParams::new(cfg.n, cfg.k)?;
    let sigma = parse_rational(&cfg.g.sigma)?;
    let delta = parse_rational(&cfg.g.delta)?;
    let a = match (cfg.a.kind, cfg.a.params.as_slice()) {
        (CoefficientKind::Constant, []) => Coefficient::Constant(cfg.k * cfg.k),
        (CoefficientKind::Constant, [v]) => Coefficient::Constant(*v),
        (CoefficientKind::GaussianWell, [depth, width]) if *width > 0.0 => Coefficient::GaussianWell { depth: *depth, width: *width },
        (kind, p) => return Err(CliError::Input(format!("a.params {p:?} do not fit a.kind {kind:?}"))),
    };
    let g = match cfg.g.kind {
        NonlinearityKind::Power => Nonlinearity::Power { eps: cfg.g.eps },
        NonlinearityKind::Manufactured => Nonlinearity::Manufactured,
        NonlinearityKind::ForcedPower => Nonlinearity::ForcedPower { eps: cfg.g.eps },
    };
    Ok(NonlinearProblem::new(params, a, g, delta, sigma, cfg.g.b1, cfg.g.b2)?)
}

pub fn solve_nonlinear(cfg: &NonlinearConfig) -> Result<NonlinearOutcome, CliError> {
    let prob = build_problem(cfg)?;
    let mut summary = String::new();
    for check in check_hypotheses(&prob, &HypothesisSamples::default()).checks.iter().filter(|c| !c.passed) {
        summary.push_str(&format!("warning: hypothesis check '{}' failed: {}\n", check.name, check.detail));
    }
    let mut resolved = cfg.clone();
    let mut opts = PicardOptions { omega: cfg.omega, tol: cfg.tol, max_iter: cfg.max_iter, ..Default::default() };
    opts.method = match cfg.solver {
        Solver::Radial => Discretization::Radial,
        Solver::Fd => Discretization::FiniteDifference,
        Solver::Spectral => {
            let grid = resolve_grid(cfg.n, cfg.k, cfg.halfwidth, cfg.grid_points)?;
            resolved.halfwidth = Some(grid.halfwidth);
            resolved.grid_points = Some(grid.points);
            opts.grid = Some(grid);
            Discretization::Spectral
        }
    };
    let radii = match opts.grid {
        Some(grid) => {
            check_radii(cfg.rmax, 2)?;
            axis_radii(&grid, cfg.rmax)
        }
        None => {
            let points = cfg.points.unwrap_or(201);
            check_radii(cfg.rmax, points)?;
            resolved.points = Some(points);
            RadialProfile::uniform_nodes(cfg.rmax, points)
        }
    };
    let echo = RunConfig { linear: None, nonlinear: Some(resolved), oracle: None };

    let mut trace_csv = Csv::new("solve nonlinear (trace)");
    trace_csv.echo_toml(&echo)?;
    let (result, trace) = match picard_solve(&prob, &Gaussian::new(0.0, 1.0), &opts) {
        Ok((solution, trace)) => (Ok(solution), trace),
        Err(PicardFailure { error, trace }) => (Err(error), trace),
    };
    trace_csv.comment(&format!("converged = {}", trace.converged));
    trace_csv.columns(&["iter", "residual"]);
    for (i, v) in trace.iterates.iter().enumerate() {
        trace_csv.raw_row(&format!("{},{}", i + 1, num(*v)));
    }
    let solution = match result {
        Ok(s) => s,
        Err(e) => {
            let failure = CliError::from(e);
            summary.push_str(&format!("picard iteration stopped after {} iterations\n", trace.iterates.len()));
            return Ok(NonlinearOutcome { solution: None, trace: trace_csv, summary, failure: Some(failure) });
        }
    };
    let range = match &solution {
        Solution::Radial(s) => s.nodes.last().copied().unwrap_or(0.0),
        Solution::Grid(f) => f.grid.halfwidth,
    };
    if cfg.rmax > range {
        return Err(CliError::Input(format!("rmax = {} beyond the solution range {range}", cfg.rmax)));
    }
    let values = solution.sample(&radii)?;
    let tail_radii: Vec<f64> = [2.0, 4.0, 6.0, 8.0].into_iter().filter(|&r| r <= range).collect();
    let report = regularity_report(&solution, &prob.params, &tail_radii)?;

    let mut csv = Csv::new("solve nonlinear");
    csv.echo_toml(&echo)?;
    csv.comment(&format!("iterations = {}", trace.iterates.len()));
    csv.comment(&format!("last update = {}", num(*trace.iterates.last().unwrap_or(&0.0))));
    for row in &report.tail {
        csv.comment(&format!("tail R = {}: sup|u| = {}, sup|lap u| = {}", row.radius, num(row.sup_u), num(row.sup_lap)));
    }
    csv.comment(&format!("L2 = {}, L4 = {}, Linf = {}", num(report.l2), num(report.l4), num(report.linf)));
    csv.comment(&format!("|lap u|_2 = {}, |lap^2 u|_2 = {}", num(report.h2_seminorm), num(report.h4_seminorm)));
    csv.columns(&["r", "u", "lap_u"]);
    for (r, (u, lap)) in radii.iter().zip(values) {
        csv.row(&[*r, u, lap]);
    }
    summary.push_str(&format!(
        "converged in {} iterations; tail decreasing: {}\n",
        trace.iterates.len(),
        report.tail_decreasing()
    ));
    Ok(NonlinearOutcome { solution: Some(csv), trace: trace_csv, summary, failure: None })
}

/// Max discrepancy between radial convolution (splined from 0.025-spaced
/// radii) and the spectral solve over grid points with `|x| ≤ radius`,
/// relative to the largest spectral value there.
pub fn oracle_discrepancy(cfg: &OracleConfig) -> Result<(f64, Vec<[f64; 3]>), CliError> {
    let params = GreensParams::new(cfg.n, cfg.k)?;
    let source = make_source(&cfg.source)?;
    if !(cfg.radius > 0.0 && cfg.radius < cfg.halfwidth) {
        return Err(CliError::Input(format!("need 0 < radius < halfwidth (got {}, {})", cfg.radius, cfg.halfwidth)));
    }
    let grid = PeriodicGrid::new(cfg.n, cfg.halfwidth, cfg.grid_points)?;
    let f = Field::from_radial(grid, |r| source.eval(r));
    let spectral = solve_biharmonic_periodic(&grid, &f, cfg.k)?;
    let reach = cfg.radius + 0.2;
    let count = (reach / 0.025).ceil() as usize + 1;
    let nodes = RadialProfile::uniform_nodes(reach, count);
    let u = convolve_radial(&params, source.as_ref(), &nodes, Kernel::G)?;
    let profile = RadialProfile::new(nodes, u)?;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..grid.len() {
        let r = grid.point(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if r <= cfg.radius {
            worst = worst.max((profile.eval(r) - spectral.data[i]).abs());
            scale = scale.max(spectral.data[i].abs());
        }
    }
    let axis = axis_radii(&grid, cfg.radius);
    let spec_axis = Solution::Grid(spectral).sample(&axis)?;
    let rows = axis.iter().zip(spec_axis).map(|(&r, (s, _))| [r, profile.eval(r), s]).collect();
    Ok((worst / scale.max(f64::MIN_POSITIVE), rows))
}

pub fn oracle_compare(cfg: &OracleConfig) -> Result<(Csv, f64), CliError> {
    let (discrepancy, rows) = oracle_discrepancy(cfg)?;
    let mut csv = Csv::new("oracle compare");
    csv.echo_toml(&RunConfig { linear: None, nonlinear: None, oracle: Some(cfg.clone()) })?;
    csv.comment(&format!("max relative discrepancy = {}", num(discrepancy)));
    csv.columns(&["r", "radial", "spectral", "abs_diff"]);
    for [r, a, b] in rows {
        csv.row(&[r, a, b, (a - b).abs()]);
    }
    Ok((csv, discrepancy))
}
