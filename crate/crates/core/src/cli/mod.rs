//! Command-line interface.
//!
//! Every subcommand writes a table (CSV by default) to `--out` or standard
//! output. Settings resolve as flags, then the `--config` file, then the
//! built-in defaults.

pub mod config;
pub mod format;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::bateman::{
    canonical_momentum, classical_el_residual, energy, oscillating_trajectory, Eigenstate, EomSign, KineticMode,
};
use crate::conformable::Grid1D;
use crate::density::{figure_data, probability_current, probability_density, Figure, FigureOverrides, Frame};
use crate::numerics::QuadratureSpec;
use crate::polyexp::PolyExpSum;

pub use config::{load_config, parse_config, ConfigError, GridRange, Overrides, RunConfig};
pub use format::{fmt_g12, OutputFormat, Table};
pub use verify::{run_verify, CheckRow, Status, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "conformable-bateman",
    version,
    about = "Spectrum, stationary states, densities and self-checks of the conformable Bateman oscillator",
    after_help = "Settings come from flags, then --config FILE (key = value lines, keys spelled like the \
                  long flags, # comments), then defaults: m = omega = hbar = 1, lambda = 0, alpha = 1, \
                  y = 0.001,8,800, t = 0.001,5,50."
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Fractional order, 0 < alpha <= 1
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Oscillator frequency omega
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Damping rate lambda (underdamped: lambda <= 2 omega^alpha)
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Mass m
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Reduced Planck constant hbar
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Quantum number of the state
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Highest level listed by `spectrum`
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Drift coefficient of the radial equation: paper (1 + alpha) or derived (1 - alpha)
    #[arg(long, global = true, value_name = "paper|derived")]
    pub mode: Option<KineticMode>,
    /// Wavefunction used for currents: gauged or original (gauge phase restored)
    #[arg(long, global = true, value_name = "gauged|original")]
    pub frame: Option<Frame>,
    /// Uniform y grid
    #[arg(long, global = true, value_name = "MIN,MAX,COUNT", allow_hyphen_values = true)]
    pub y: Option<GridRange>,
    /// Uniform t grid
    #[arg(long, global = true, value_name = "MIN,MAX,COUNT", allow_hyphen_values = true)]
    pub t: Option<GridRange>,
    /// Config file of `key = value` lines
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file (standard output when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Table layout: CSV (12 significant digits) or aligned text
    #[arg(long, global = true, value_name = "csv|text")]
    pub format: Option<OutputFormat>,
}

impl CommonArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            alpha: self.alpha,
            omega: self.omega,
            lambda: self.lambda,
            mass: self.mass,
            hbar: self.hbar,
            n: self.n,
            n_max: self.n_max,
            mode: self.mode,
            frame: self.frame,
            y: self.y,
            t: self.t,
            out: self.out.clone(),
            format: self.format,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels n = 0..n-max. Columns: n,energy
    Spectrum,
    /// Normalized Rodriguez state n on the y grid, in the chosen frame. Columns: n,y,re,im
    Wavefunction,
    /// Probability density of state n on the (y, t) grid. Columns: n,y,t,rho
    Density,
    /// Probability current of state n on the (y, t) grid. Columns: n,y,t,j
    Current,
    /// Run the self-check suite; exit status 1 if any check fails. Columns: check,measured,tolerance,status
    Verify,
    /// Density data behind fig1, fig2 or fig3. Columns: figure,n,alpha,y,t,rho
    Figure {
        #[arg(value_name = "fig1|fig2|fig3")]
        figure: Figure,
        /// Also write a gnuplot script plotting the emitted data
        #[arg(long, value_name = "PATH")]
        script: Option<PathBuf>,
    },
    /// Classical trajectory cos(Omega t^a / a) on a grid uniform in t^a / a,
    /// with its canonical momentum and equation-of-motion residual
    /// (--mode picks the sign convention). Columns: t,y,momentum,residual
    Classical,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Physics(#[from] crate::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Resolves the configuration of a parsed command line.
pub fn resolve(common: &CommonArgs) -> Result<RunConfig, ConfigError> {
    let file = match &common.config {
        Some(path) => config::read_config(path)?,
        None => Overrides::default(),
    };
    RunConfig::resolve([file, common.overrides()])
}

pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = resolve(&cli.common)?;
    let (table, code) = match &cli.command {
        Command::Verify => {
            let report = run_verify();
            let code = if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            let text = match cfg.format {
                OutputFormat::Csv => report.table().to_csv(),
                OutputFormat::Text => report.to_text(),
            };
            emit(cfg.out.as_deref(), &text)?;
            return Ok(code);
        }
        Command::Figure { figure, script } => {
            let table = figure_table(*figure, &cfg)?;
            if let Some(path) = script {
                let data = cfg
                    .out
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{}.csv", figure.name())));
                write_file(path, &gnuplot_script(*figure, &data))?;
            }
            (table, EXIT_OK)
        }
        Command::Spectrum => (spectrum_table(&cfg)?, EXIT_OK),
        Command::Wavefunction => (wavefunction_table(&cfg)?, EXIT_OK),
        Command::Density => (density_table(&cfg)?, EXIT_OK),
        Command::Current => (current_table(&cfg)?, EXIT_OK),
        Command::Classical => (classical_table(&cfg)?, EXIT_OK),
    };
    emit(cfg.out.as_deref(), &table.render(cfg.format))?;
    Ok(code)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, content),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn normalized_state(cfg: &RunConfig) -> crate::Result<Eigenstate> {
    Eigenstate::rodriguez(&cfg.params, cfg.n)?.normalized(&QuadratureSpec::default())
}

pub fn spectrum_table(cfg: &RunConfig) -> crate::Result<Table> {
    let mut t = Table::new(&["n", "energy"]);
    for n in 0..=cfg.n_max {
        t.push(vec![n.into(), energy(&cfg.params, n)?.into()]);
    }
    Ok(t)
}

pub fn wavefunction_table(cfg: &RunConfig) -> crate::Result<Table> {
    let p = &cfg.params;
    let psi = normalized_state(cfg)?.normalized_wavefunction()?;
    let theta = PolyExpSum::term(
        p.mass_a() * p.damping / (4.0 * p.alpha() * p.hbar_a()),
        2.0 * p.alpha(),
        0.0,
        1.0,
    )?;
    let mut t = Table::new(&["n", "y", "re", "im"]);
    for &y in cfg.y.grid()?.points() {
        let mut v = psi.evaluate(y)?;
        if cfg.frame == Frame::Original {
            v *= Complex64::from_polar(1.0, -theta.evaluate(y)?.re);
        }
        t.push(vec![cfg.n.into(), y.into(), v.re.into(), v.im.into()]);
    }
    Ok(t)
}

fn field_table(cfg: &RunConfig, column: &'static str, field: &crate::density::Field2D) -> Table {
    let mut t = Table::new(&["n", "y", "t", column]);
    for (ti, &tt) in field.t().points().iter().enumerate() {
        for (&y, &v) in field.y().points().iter().zip(field.row(ti)) {
            t.push(vec![cfg.n.into(), y.into(), tt.into(), v.into()]);
        }
    }
    t
}

pub fn density_table(cfg: &RunConfig) -> crate::Result<Table> {
    let d = probability_density(&normalized_state(cfg)?, &cfg.params, &cfg.y.grid()?, &cfg.t.grid()?)?;
    Ok(field_table(cfg, "rho", &d.field))
}

pub fn current_table(cfg: &RunConfig) -> crate::Result<Table> {
    let j = probability_current(
        &normalized_state(cfg)?,
        &cfg.params,
        cfg.frame,
        &cfg.y.grid()?,
        &cfg.t.grid()?,
    )?;
    Ok(field_table(cfg, "j", &j.field))
}

pub fn figure_table(figure: Figure, cfg: &RunConfig) -> crate::Result<Table> {
    let grids = FigureOverrides {
        y: cfg.y.grid()?,
        t: cfg.t.grid()?,
        quadrature: QuadratureSpec::default(),
    };
    let mut t = Table::new(&["figure", "n", "alpha", "y", "t", "rho"]);
    for r in figure_data(figure, &grids)? {
        t.push(vec![
            r.figure.name().into(),
            r.n.into(),
            r.alpha.into(),
            r.y.into(),
            r.t.into(),
            r.rho.into(),
        ]);
    }
    Ok(t)
}

pub fn classical_table(cfg: &RunConfig) -> crate::Result<Table> {
    let p = &cfg.params;
    let grid = Grid1D::conformable_uniform(cfg.t.min, cfg.t.max, cfg.t.count, p.order)?;
    let traj = oscillating_trajectory(p, &grid)?;
    let momentum = canonical_momentum(&traj, p)?;
    let sign = match cfg.mode {
        KineticMode::Paper => EomSign::Paper,
        KineticMode::Derived => EomSign::Derived,
    };
    let residual = classical_el_residual(&traj, p, sign)?;
    let mut t = Table::new(&["t", "y", "momentum", "residual"]);
    for (i, &tt) in grid.points().iter().enumerate() {
        t.push(vec![
            tt.into(),
            traj.values()[i].re.into(),
            momentum.values()[i].re.into(),
            residual.values()[i].re.into(),
        ]);
    }
    Ok(t)
}

/// Plain-text gnuplot script reading the long-form CSV at `data`.
pub fn gnuplot_script(figure: Figure, data: &Path) -> String {
    let data = data.display();
    let mut s = format!(
        "# {name}: probability densities read from {data}\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'y'\n\
         set ylabel 'rho'\n",
        name = figure.name()
    );
    match figure {
        Figure::Fig1 | Figure::Fig2 => {
            s.push_str("set ylabel 't'\nset zlabel 'rho'\nset multiplot layout 1,2\n");
            for n in 0..=1 {
                s.push_str(&format!(
                    "set title 'n = {n}'\nsplot '{data}' skip 1 using ($2 == {n} ? $4 : 1/0):5:6 with points pt 7 ps 0.2 notitle\n"
                ));
            }
        }
        Figure::Fig3 => {
            s.push_str("set multiplot layout 2,2\n");
            for n in 0..=3 {
                s.push_str(&format!(
                    "set title 'n = {n}'\nplot for [a in '0.8 0.85 0.9 0.95 1'] '{data}' skip 1 \
                     using (($2 == {n} && abs($3 - a) < 1e-9) ? $4 : 1/0):6 with lines title 'alpha = '.a\n"
                ));
            }
        }
    }
    s.push_str("unset multiplot\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(flags: &[&str]) -> RunConfig {
        let mut argv = vec!["conformable-bateman", "spectrum"];
        argv.extend_from_slice(flags);
        resolve(&Cli::try_parse_from(argv).unwrap().common).unwrap()
    }

    #[test]
    fn unit_spectrum() {
        let t = spectrum_table(&cfg(&["--alpha", "1", "--lambda", "0", "--n-max", "3"])).unwrap();
        assert_eq!(t.to_csv(), "n,energy\n0,0.5\n1,1.5\n2,2.5\n3,3.5\n");
    }

    #[test]
    fn flags_parse_everywhere() {
        let c = cfg(&[
            "--y", "0.1,2,10", "--mode", "paper", "--frame", "original", "--format", "text",
        ]);
        assert_eq!(c.y, GridRange::new(0.1, 2.0, 10));
        assert_eq!(c.mode, KineticMode::Paper);
        assert_eq!(c.frame, Frame::Original);
        assert_eq!(c.format, OutputFormat::Text);
        let after = Cli::try_parse_from(["x", "spectrum", "--alpha", "0.7"]).unwrap();
        let before = Cli::try_parse_from(["x", "--alpha", "0.7", "spectrum"]).unwrap();
        assert_eq!(after.common.alpha, before.common.alpha);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["x", "spectrum", "--bogus"]), EXIT_USAGE);
        assert_eq!(run(["x", "nonsense"]), EXIT_USAGE);
        assert_eq!(
            run(["x", "spectrum", "--alpha", "1.5", "--out", "/nonexistent/dir/x"]),
            EXIT_USAGE
        );
        assert_eq!(
            run(["x", "spectrum", "--lambda", "5", "--out", "/nonexistent/dir/x"]),
            EXIT_USAGE
        );
        assert_eq!(run(["x", "spectrum", "--mode", "sideways"]), EXIT_USAGE);
        assert_eq!(run(["x", "spectrum", "--out", "/nonexistent/dir/x.csv"]), EXIT_USAGE);
    }

    #[test]
    fn wavefunction_frames_agree_in_modulus() {
        let base = ["--alpha", "0.9", "--lambda", "0.6", "--y", "0.1,4,30", "--n", "1"];
        let g = wavefunction_table(&cfg(&base)).unwrap().to_csv();
        let mut flags = base.to_vec();
        flags.extend(["--frame", "original"]);
        let o = wavefunction_table(&cfg(&flags)).unwrap().to_csv();
        let modulus = |csv: &str| -> Vec<f64> {
            csv.lines()
                .skip(1)
                .map(|l| {
                    let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
                    v[2].hypot(v[3])
                })
                .collect()
        };
        for (a, b) in modulus(&g).iter().zip(modulus(&o)) {
            assert!((a - b).abs() <= 1e-11 * a.abs().max(1e-300));
        }
        assert_ne!(g, o);
    }

    #[test]
    fn classical_rows() {
        let c = cfg(&["--alpha", "0.9", "--lambda", "0.5", "--t", "0.1,10,2000"]);
        let t = classical_table(&c).unwrap();
        assert_eq!(t.len(), 2000);
    }

    #[test]
    fn scripts_reference_data() {
        let s = gnuplot_script(Figure::Fig3, Path::new("f3.csv"));
        assert!(s.contains("'f3.csv'") && s.contains("n = 3"));
        assert!(gnuplot_script(Figure::Fig1, Path::new("f1.csv")).contains("splot"));
    }
}
