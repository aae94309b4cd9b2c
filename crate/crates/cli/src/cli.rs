//! Command-line front end. Every flag maps to one configuration key; values
//! stay strings here and are validated by [`ExperimentConfig`].

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::experiments::run_experiment;
use crate::table::Report;

#[derive(Debug, Parser)]
#[command(name = "kpzlab", version, about = "Growth, random-matrix and distribution-function experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Master seed; sample i uses stream i.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    workers: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Base Nyström order per time slice.
    #[arg(long = "quad-order")]
    quad_order: Option<String>,
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Shared {
    fn overrides(&self) -> Vec<(String, String)> {
        [
            ("seed", &self.seed),
            ("workers", &self.workers),
            ("out-path", &self.out),
            ("format", &self.format),
            ("quad-order", &self.quad_order),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
        .collect()
    }
}

/// Declares an argument struct whose fields are optional string flags, each
/// mapped to a configuration key.
macro_rules! flag_args {
    ($(#[$meta:meta])* $name:ident { $( $(#[doc = $doc:literal])* $field:ident : $flag:literal => $key:literal ),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Args)]
        pub struct $name {
            $(
                $(#[doc = $doc])*
                #[arg(long = $flag, allow_hyphen_values = true)]
                $field: Option<String>,
            )*
            #[command(flatten)]
            shared: Shared,
        }

        impl $name {
            fn overrides(&self) -> Vec<(String, String)> {
                let mut v = self.shared.overrides();
                $(
                    if let Some(x) = &self.$field {
                        v.push(($key.to_string(), x.clone()));
                    }
                )*
                v
            }
        }
    };
}

flag_args!(PngHeightArgs {
    /// Bulk nucleation parameter, 0 < q < 1 (default 0.25).
    q: "q" => "q",
    /// Source strength.
    alpha: "alpha" => "alpha",
    /// Transition parameter, alternative to alpha.
    omega: "omega" => "omega",
    /// Droplet size; heights are read at t = 2N.
    n: "N" => "N",
    samples: "samples" => "samples",
    /// Scaled positions, comma-separated (default 0).
    tau: "tau" => "tau",
    /// auto, edge or gaussian.
    scaling: "scaling" => "scaling",
});

flag_args!(PngLayersArgs {
    q: "q" => "q",
    alpha: "alpha" => "alpha",
    omega: "omega" => "omega",
    n: "N" => "N",
    /// Independent droplets (default 1).
    samples: "samples" => "samples",
    /// Number of layers (default 8).
    layers: "layers" => "layers",
});

flag_args!(RmtEdgeArgs {
    /// gue (default), goe or goe2.
    ensemble: "ensemble" => "ensemble",
    n: "N" => "N",
    /// Rank-one source strength, epsilon_1 = Lambda sqrt(N/2).
    lambda: "Lambda" => "Lambda",
    /// Rank-one source on the dynamical scale.
    omega: "omega" => "omega",
    /// Source entries, comma-separated, padded with zeros.
    eps: "eps" => "eps",
    samples: "samples" => "samples",
    /// auto, dense or tridiagonal.
    method: "method" => "method",
    /// auto, none, edge or gaussian.
    scaling: "scaling" => "scaling",
});

flag_args!(RmtDysonArgs {
    n: "N" => "N",
    lambda: "Lambda" => "Lambda",
    omega: "omega" => "omega",
    eps: "eps" => "eps",
    samples: "samples" => "samples",
    /// Increasing times starting at 0, comma-separated.
    times: "times" => "times",
    /// none or edge.
    scaling: "scaling" => "scaling",
});

flag_args!(DistEvalArgs {
    /// F2, GOE2, normal, finite or transition.
    which: "which" => "which",
    /// Threshold grid lo:hi:step.
    s: "s" => "s-grid",
    omega: "omega" => "omega",
    tau: "tau" => "tau",
    n: "N" => "N",
    lambda: "Lambda" => "Lambda",
    eps: "eps" => "eps",
    scaling: "scaling" => "scaling",
});

flag_args!(DistJointFlags {
    /// finite-n or transition.
    which: "which" => "which",
    /// Threshold grid applied at every time.
    s: "s" => "s-grid",
    times: "times" => "times",
    omega: "omega" => "omega",
    n: "N" => "N",
    lambda: "Lambda" => "Lambda",
    eps: "eps" => "eps",
    scaling: "scaling" => "scaling",
});

#[derive(Debug, Args)]
pub struct DistJointArgs {
    /// Shorthand for --which finite-n.
    #[arg(long = "finite-n")]
    finite_n: bool,
    #[command(flatten)]
    flags: DistJointFlags,
}

flag_args!(CompareArgs {
    /// Data file written by another experiment.
    input: "input" => "input",
    /// F2, GOE2, normal, transition or joint.
    against: "against" => "against",
    /// Sample column for one-point comparisons (default x).
    column: "column" => "column",
    tau: "tau" => "tau",
    omega: "omega" => "omega",
    /// dist-joint output for --against joint.
    reference: "reference" => "reference",
    /// Sample columns for --against joint (default lambda1_*).
    columns: "columns" => "columns",
});

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scaled droplet heights of single-layer PNG.
    PngHeight(PngHeightArgs),
    /// Full multi-layer line ensemble.
    PngLayers(PngLayersArgs),
    /// Largest eigenvalue of GUE/GOE with an optional source.
    RmtEdge(RmtEdgeArgs),
    /// Largest eigenvalue along a Dyson Brownian motion chain.
    RmtDyson(RmtDysonArgs),
    /// One-point distribution functions on a grid.
    DistEval(DistEvalArgs),
    /// Joint multi-time distribution functions on a product grid.
    DistJoint(DistJointArgs),
    /// KS or sup distance between sampled data and a reference.
    Compare(CompareArgs),
}

impl Command {
    fn parts(&self) -> (Experiment, Option<&PathBuf>, Vec<(String, String)>) {
        match self {
            Command::PngHeight(a) => (Experiment::PngHeight, a.shared.config.as_ref(), a.overrides()),
            Command::PngLayers(a) => (Experiment::PngLayers, a.shared.config.as_ref(), a.overrides()),
            Command::RmtEdge(a) => (Experiment::RmtEdge, a.shared.config.as_ref(), a.overrides()),
            Command::RmtDyson(a) => (Experiment::RmtDyson, a.shared.config.as_ref(), a.overrides()),
            Command::DistEval(a) => (Experiment::DistEval, a.shared.config.as_ref(), a.overrides()),
            Command::DistJoint(a) => {
                let mut o = a.flags.overrides();
                if a.finite_n {
                    o.push(("which".into(), "finite-n".into()));
                }
                (Experiment::DistJoint, a.flags.shared.config.as_ref(), o)
            }
            Command::Compare(a) => (Experiment::Compare, a.shared.config.as_ref(), a.overrides()),
        }
    }

    /// Merge the config file (if any) with the flags.
    pub fn config(&self) -> Result<ExperimentConfig> {
        let (experiment, file, overrides) = self.parts();
        ExperimentConfig::load(experiment, file.map(PathBuf::as_path), overrides)
    }
}

/// Write the data to the output path (or stdout) and the summary as one JSON
/// line, to stdout when the data went to a file and to stderr otherwise.
pub fn emit(cfg: &ExperimentConfig, report: &Report) -> Result<()> {
    let data = report.render(cfg.format()?)?;
    let summary = serde_json::to_string(&report.summary)?;
    match cfg.out_path() {
        Some(path) => {
            std::fs::write(&path, data).map_err(|source| HarnessError::Write { path, source })?;
            println!("{summary}");
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| HarnessError::Write { path: "<stdout>".into(), source })?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    let cfg = cli.command.config()?;
    let report = run_experiment(&cfg)?;
    emit(&cfg, &report)
}
