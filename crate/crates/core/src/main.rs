use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gmcf::io::{execute, RunConfig};
use gmcf::Error;

/// Mean curvature flow with Gaussian-type densities on polygons and
/// triangle meshes.
#[derive(Debug, Parser)]
#[command(name = "gmcf", version)]
struct Cli {
    /// simulate, compare, oracle, validate or conformality.
    command: Option<String>,

    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    mode: Option<String>,
    /// Shape file (.csv or .off) or generator spec such as `circle:r=1,m=512`.
    #[arg(long)]
    shape: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    auto_orient: Option<String>,
    /// Velocity law: density, ordinary or rescaled.
    #[arg(long)]
    flow: Option<String>,
    /// gaussian, none or radial (with --density-table).
    #[arg(long)]
    density: Option<String>,
    #[arg(long)]
    density_table: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    max_dt: Option<String>,
    #[arg(long)]
    max_time: Option<String>,
    #[arg(long)]
    max_steps: Option<String>,
    #[arg(long)]
    resample_every: Option<String>,
    #[arg(long)]
    guard: Option<String>,
    #[arg(long)]
    shrink_diameter_tol: Option<String>,
    #[arg(long)]
    roundness_tol: Option<String>,
    #[arg(long)]
    fixed_point_tol: Option<String>,
    #[arg(long)]
    fixed_point_steps: Option<String>,
    #[arg(long)]
    snapshot_every: Option<String>,
    #[arg(long)]
    diagnostics_every: Option<String>,
    /// Validation case: a, a1, a2, bi, bii or biii.
    #[arg(long)]
    case: Option<String>,
    /// Decomposition point, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Comma-separated checkpoint times.
    #[arg(long)]
    checkpoints: Option<String>,
    #[arg(long)]
    refinements: Option<String>,
    #[arg(long)]
    rho0: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    r_max: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 31] = [
            ("mode", &self.mode),
            ("shape", &self.shape),
            ("out", &self.out),
            ("seed", &self.seed),
            ("auto_orient", &self.auto_orient),
            ("flow", &self.flow),
            ("density", &self.density),
            ("density_table", &self.density_table),
            ("epsilon", &self.epsilon),
            ("mu", &self.mu),
            ("cfl", &self.cfl),
            ("max_dt", &self.max_dt),
            ("max_time", &self.max_time),
            ("max_steps", &self.max_steps),
            ("resample_every", &self.resample_every),
            ("guard", &self.guard),
            ("shrink_diameter_tol", &self.shrink_diameter_tol),
            ("roundness_tol", &self.roundness_tol),
            ("fixed_point_tol", &self.fixed_point_tol),
            ("fixed_point_steps", &self.fixed_point_steps),
            ("snapshot_every", &self.snapshot_every),
            ("diagnostics_every", &self.diagnostics_every),
            ("case", &self.case),
            ("p0", &self.p0),
            ("tol", &self.tol),
            ("checkpoints", &self.checkpoints),
            ("refinements", &self.refinements),
            ("rho0", &self.rho0),
            ("n", &self.n),
            ("samples", &self.samples),
            ("r_max", &self.r_max),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }

    fn into_config(self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(c) = &self.command {
            cfg.set("mode", c).map_err(Error::Config)?;
        }
        for (k, v) in self.overrides() {
            cfg.set(k, v).map_err(|m| Error::Config(format!("--{}: {m}", k.replace('_', "-"))))?;
        }
        if let (Some(c), Some(m)) = (&self.command, &self.mode) {
            if c != m {
                return Err(Error::Config(format!("command '{c}' conflicts with --mode {m}")));
            }
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.into_config().and_then(|cfg| execute(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("gmcf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
