use std::path::Path;

use clap::Args;
use entbundle::instances::AnnealInstance;
use entbundle::Instance;

use crate::{CliResult, Failure};

const BUILTINS: [(&str, &str); 4] = [
    ("k5", include_str!("../instances/k5.json")),
    ("k4", include_str!("../instances/k4.json")),
    ("worked", include_str!("../instances/worked.json")),
    ("minor-321", include_str!("../instances/minor_321.json")),
];

/// Loads an instance from a path or a `builtin:NAME` reference.
pub fn load_instance(source: &str) -> CliResult<Instance> {
    let text = match source.strip_prefix("builtin:") {
        Some(name) => BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, text)| text.to_string()).ok_or_else(|| {
            let names: Vec<&str> = BUILTINS.iter().map(|(n, _)| *n).collect();
            Failure::Input(format!("unknown builtin {name:?}; available: {}", names.join(", ")))
        })?,
        None => std::fs::read_to_string(Path::new(source))
            .map_err(|e| Failure::Input(format!("cannot read {source}: {e}")))?,
    };
    Ok(Instance::from_json_str(&text)?)
}

pub fn load_anneal(source: &str) -> CliResult<AnnealInstance> {
    match load_instance(source)? {
        Instance::Anneal(a) => Ok(*a),
        _ => {
            Err(Failure::Input(format!("{source} is not an annealing instance (needs parity, fields and constraints)")))
        }
    }
}

/// Annealing parameters shared by `simulate` and `report`. Unset values fall
/// back to the instance file.
#[derive(Args, Clone, Debug)]
pub struct ScheduleArgs {
    /// Anneal duration.
    #[arg(long)]
    pub tf: Option<f64>,
    /// Integration step (default: tf / 1e5).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Constraint strength C.
    #[arg(long)]
    pub penalty: Option<f64>,
    /// Reverse the constraint energies so violated constraints are favored.
    #[arg(long)]
    pub flip_constraint_sign: bool,
}

impl ScheduleArgs {
    pub fn t_final(&self, inst: &AnnealInstance) -> CliResult<f64> {
        let tf = self.tf.unwrap_or(inst.t_final);
        positive("--tf", tf)?;
        if let Some(dt) = self.dt {
            positive("--dt", dt)?;
        }
        if let Some(c) = self.penalty {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Failure::Input(format!("--penalty must be finite and >= 0, got {c}")));
            }
        }
        Ok(tf)
    }
}

pub fn positive(flag: &str, value: f64) -> CliResult {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("{flag} must be positive, got {value}")))
    }
}

/// `--project` / `--no-project` with a per-command default.
#[derive(Args, Clone, Copy, Debug)]
pub struct ProjectArgs {
    /// Project states onto the embedded subspace before computing spectra.
    #[arg(long, overrides_with = "no_project")]
    pub project: bool,
    /// Use the raw simulated states.
    #[arg(long, overrides_with = "project")]
    pub no_project: bool,
}

impl ProjectArgs {
    pub fn resolve(&self, default: bool) -> bool {
        if self.project {
            true
        } else if self.no_project {
            false
        } else {
            default
        }
    }
}
