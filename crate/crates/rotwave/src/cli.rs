//! Command-line grammar. Every numeric flag is optional here so that a
//! config file can supply it; defaults are applied after merging.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "rotwave", version, about = "Ground states of rotating-wave equations on disks, annuli and Riemannian models")]
pub struct Cli {
    /// Flat TOML file whose keys mirror the flags (dashes become underscores).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the Rayleigh quotient and classify the minimizer.
    Solve(SolveArgs),
    /// Parameter sweeps with CSV tables and log-log fits.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Run the verification suite and print one line per check.
    Check(CheckArgs),
    /// The degenerate quotient on the half-plane {x1 > 0}.
    Halfspace {
        #[command(subcommand)]
        kind: HalfspaceKind,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct DomainArgs {
    /// disk, annulus, hemisphere or cusp.
    #[arg(long)]
    pub domain: Option<String>,
    /// Inner radius of the annulus.
    #[arg(long)]
    pub inner_radius: Option<f64>,
    /// Exponent s of the power cusp 1 - c1 (1 - r)^s.
    #[arg(long)]
    pub cusp_s: Option<f64>,
    /// Constant c1 of the power cusp.
    #[arg(long)]
    pub cusp_c1: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Radial nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Highest angular mode.
    #[arg(long = "K")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// Relative change of the quotient that counts as converged
    #[arg(long)]
    pub tol_quotient: Option<f64>,
    /// Scaled residual that counts as converged
    #[arg(long)]
    pub tol_residual: Option<f64>,
    /// Relative margin by which a nonradial candidate must beat the radial one.
    #[arg(long)]
    pub tol_break: Option<f64>,
    /// Iteration cap per start
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Relaxation of the fixed-point trial step, in (0, 1]
    #[arg(long)]
    pub damping: Option<f64>,
    /// Comma list of starts: radial, broken:DELTA, random:SEED.
    #[arg(long)]
    pub starts: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Rotation speed
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Mass term; must exceed minus the first Dirichlet eigenvalue
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Nonlinearity exponent, p > 2
    #[arg(long)]
    pub p: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Angles in the CSV output per 2K+1 modes.
    #[arg(long)]
    pub m_theta_factor: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Minimizer samples as r,theta,value.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Mode coefficients as k,r,a_k,b_k.
    #[arg(long)]
    pub modes_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepOut {
    /// Table path [default: sweep_<kind>.csv].
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Summary path [default: sweep_<kind>.json].
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Worker threads for independent sweep points; 0 uses all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SweepKind {
    /// C(alpha) at fixed m and p.
    Alpha {
        #[command(flatten)]
        domain: DomainArgs,
        /// List or range a:b:count (linear by default).
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: SweepOut,
    },
    /// C(m) at fixed alpha and p.
    M {
        #[command(flatten)]
        domain: DomainArgs,
        /// List or range a:b:count (linear by default).
        #[arg(long, allow_hyphen_values = true)]
        ms: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Boundary concentration on the flat disk at alpha = 1.
    Concentration {
        #[arg(long)]
        p: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        /// List or range a:b:count (geometric by default).
        #[arg(long)]
        lambdas: Option<String>,
        /// Quadrature nodes per 1D integral.
        #[arg(long)]
        nodes: Option<usize>,
        /// Include the largest lambda in the slope fit.
        #[arg(long)]
        fit_all: bool,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Angular concentration for alpha > 1.
    Supercritical {
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma list of angular frequencies.
        #[arg(long)]
        ks: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Boundary concentration on a Riemannian model.
    Riemannian {
        /// hemisphere or cusp.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        cusp_s: Option<f64>,
        #[arg(long)]
        cusp_c1: Option<f64>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        /// List or range a:b:count (geometric by default).
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        nodes: Option<usize>,
        /// Include the largest lambda in the slope fit.
        #[arg(long)]
        fit_all: bool,
        #[command(flatten)]
        out: SweepOut,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CheckArgs {
    /// Run only these checks (name or number); repeatable.
    #[arg(long)]
    pub only: Vec<String>,
    /// Radial grid override for the grid-based checks.
    #[arg(long)]
    pub n: Option<usize>,
    /// Machine-readable results.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BoxArgs {
    #[arg(long)]
    pub s: Option<f64>,
    /// Box length in x1.
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Box half-width in x2.
    #[arg(long = "M")]
    pub box_m: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Relative change of the quotient that counts as converged
    #[arg(long)]
    pub tol_quotient: Option<f64>,
    /// Scaled residual that counts as converged
    #[arg(long)]
    pub tol_residual: Option<f64>,
    /// Iteration cap per start
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum HalfspaceKind {
    /// Minimize the box quotient, an upper bound for S_s.
    Minimize {
        #[command(flatten)]
        grid: BoxArgs,
        #[arg(long)]
        kappa: Option<f64>,
        /// Exponent, or auto for the critical one.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Minimizer samples as x1,x2,value.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare the ball level at alpha = 1 with the half-space bound.
    Threshold {
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        /// Radial nodes of the ball grid.
        #[arg(long)]
        n: Option<usize>,
        /// Also run the full ball solver with this many modes.
        #[arg(long = "K")]
        k: Option<usize>,
        #[command(flatten)]
        grid: BoxArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Rescaling residuals of the separable half-plane quotient.
    ScaleCheck {
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}
