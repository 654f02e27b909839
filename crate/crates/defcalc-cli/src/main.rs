//! `defcalc <command> [instance.json] [flags]`: JSON report on stdout,
//! diagnostics on stderr. Exit code 0 when every check passes, 1 when a
//! mathematical property fails, 2 on input, resource or hypothesis errors.

mod commands;
mod instance;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use defcalc::exactalg::DEFAULT_GROEBNER_BUDGET;
use defcalc::h1sc::{GaugeLift, LiftVariant};
use defcalc::Error;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckDgla,
    Cohomology,
    McCheck,
    GaugeEquiv,
    TwDecompose,
    Z1Check,
    H1Equiv,
    Phi,
    Psi,
    LiftSurjective,
    LiftGauge,
    Transport,
    Tangent,
    Obstruction,
    CechBuild,
    Refine,
    VerifyTheorem,
    Selftest,
}

/// Level-2 construction in the surjectivity lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WVariant {
    Printed,
    Normalized,
    NormalizedPointwise,
    Corrected,
}

impl WVariant {
    fn lift(self) -> LiftVariant {
        match self {
            WVariant::Printed => LiftVariant::Printed,
            WVariant::Normalized => LiftVariant::Normalized,
            WVariant::NormalizedPointwise => LiftVariant::NormalizedPointwise,
            WVariant::Corrected => LiftVariant::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeVariant {
    Printed,
    Corrected,
}

impl GaugeVariant {
    fn lift(self) -> GaugeLift {
        match self {
            GaugeVariant::Printed => GaugeLift::Printed,
            GaugeVariant::Corrected => GaugeLift::Corrected,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GaugeVariant::Printed => "printed",
            GaugeVariant::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "defcalc", version, about = "Exact computations with DGLAs, Maurer-Cartan elements and semicosimplicial cocycles")]
pub struct Cli {
    pub command: Command,
    /// Instance file (JSON)
    pub instance: Option<PathBuf>,
    /// Use a bundled instance instead of (or overriding) the file's object
    #[arg(long)]
    pub bundled: Option<String>,
    /// Work over ℚ[ε]/εⁿ regardless of the file
    #[arg(long)]
    pub dual_numbers: Option<usize>,
    /// Total-degree cap on polynomial forms
    #[arg(long, default_value_t = 64)]
    pub degree_cap: u32,
    /// Reduction budget for Gröbner computations
    #[arg(long, default_value_t = DEFAULT_GROEBNER_BUDGET)]
    pub groebner_budget: usize,
    #[arg(long, value_enum, default_value_t = WVariant::Corrected)]
    pub w_variant: WVariant,
    #[arg(long, value_enum, default_value_t = GaugeVariant::Corrected)]
    pub gauge_variant: GaugeVariant,
    /// Seed for generated samples
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of generated samples
    #[arg(long, default_value_t = 2)]
    pub samples: usize,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invalid(_) | Error::DegreeBudgetExceeded(_) | Error::Hypothesis(_) => 2,
        Error::CompositionNonzero | Error::NotADifferential | Error::NotDivisible(_) | Error::Check(_) => 1,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Invalid(_) => "invalid",
        Error::DegreeBudgetExceeded(_) => "budget",
        Error::Hypothesis(_) => "hypothesis",
        Error::CompositionNonzero | Error::NotADifferential => "differential",
        Error::NotDivisible(_) => "not-divisible",
        Error::Check(_) => "check",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let loaded = instance::load(&cli);
    let outcome = loaded.as_ref().map_err(Clone::clone).and_then(|inst| commands::run(&cli, inst));
    let header = |v: &mut serde_json::Value| {
        v["command"] = json!(name);
        if let Ok(inst) = &loaded {
            v["instance"] = json!(inst.name);
            v["artin"] = defcalc::io::artin_to_json(&inst.artin);
        }
        v["seed"] = json!(cli.seed);
    };
    match outcome {
        Ok(rep) => {
            let pass = rep.failures.is_empty();
            let mut out = json!({"report": rep.body, "pass": pass, "failures": rep.failures});
            header(&mut out);
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            for f in &rep.failures {
                eprintln!("defcalc: failed: {f}");
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            let mut out = json!({"pass": false, "error": kind(&e), "message": e.to_string()});
            header(&mut out);
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            eprintln!("defcalc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
