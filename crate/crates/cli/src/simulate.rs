use std::path::PathBuf;

use clap::Args;
use entbundle::analysis::ReportScope;
use entbundle::instances::AnnealInstance;
use entbundle::sim::{all_bipartition_spectra, evolve_with, subspace_leakage, ConstraintSign, Spectrum};
use entbundle::{StateVector, Subsystem};
use serde::Serialize;

use crate::input::{load_anneal, ProjectArgs, ScheduleArgs};
use crate::output::{csv_writer, finish, float, prepare_dir, write_json, write_row};
use crate::{CliResult, Failure};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Annealing instance file, or builtin:k5.
    #[arg(long)]
    pub instance: String,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Number of evenly spaced sample times, endpoints included.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Only trace bipartitions whose smaller side has one of these sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[command(flatten)]
    pub project: ProjectArgs,
    /// Write spectra at every sample time instead of only the last.
    #[arg(long)]
    pub all_spectra: bool,
    /// Output directory for trace.csv, leakage.csv, spectrum.csv and run.json.
    #[arg(long)]
    pub out: PathBuf,
}

/// Entropies and leakage at one sample time.
pub struct Sample {
    pub t: f64,
    pub leakage: f64,
    /// Indexed by bipartition id.
    pub spectra: Vec<Spectrum>,
    pub entropies: Vec<f64>,
}

#[derive(Serialize)]
pub struct RunConfig<'a> {
    pub instance: &'a str,
    pub t_final: f64,
    pub dt: f64,
    pub penalty: f64,
    pub samples: usize,
    pub projected: bool,
    pub constraint_sign: ConstraintSign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<&'a [usize]>,
}

impl<'a> RunConfig<'a> {
    pub fn new(
        instance: &'a str,
        inst: &AnnealInstance,
        schedule: &ScheduleArgs,
        (t_final, dt): (f64, f64),
        samples: usize,
        projected: bool,
        sizes: Option<&'a [usize]>,
    ) -> Self {
        RunConfig {
            instance,
            t_final,
            dt,
            penalty: schedule.penalty.unwrap_or(inst.penalty),
            samples,
            projected,
            constraint_sign: sign(inst, schedule),
            sizes,
        }
    }
}

fn sign(inst: &AnnealInstance, schedule: &ScheduleArgs) -> ConstraintSign {
    match (inst.constraint_sign, schedule.flip_constraint_sign) {
        (s, false) => s,
        (ConstraintSign::Favored, true) => ConstraintSign::Flipped,
        (ConstraintSign::Flipped, true) => ConstraintSign::Favored,
    }
}

/// Anneals from the uniform superposition and analyses the state at each
/// sample time.
pub fn anneal(
    inst: &AnnealInstance,
    schedule: &ScheduleArgs,
    samples: usize,
    project: bool,
) -> CliResult<(f64, Vec<Sample>)> {
    let tf = schedule.t_final(inst)?;
    let mut inst = inst.clone();
    inst.constraint_sign = sign(&inst, schedule);
    let spec = inst.anneal_spec(Some(tf), schedule.dt, schedule.penalty)?;
    let r = inst.parity.enumerate_states()?;
    let psi0 = StateVector::uniform(inst.parity.num_physical())?;
    let times = AnnealInstance::sample_times(tf, samples);
    let mut out = Vec::with_capacity(times.len());
    evolve_with(&spec, &psi0, &times, |t, psi| {
        let (leakage, projected) = subspace_leakage(psi, &r)?;
        let spectra = all_bipartition_spectra(if project { &projected } else { psi })?;
        let entropies = spectra.iter().map(Spectrum::entropy).collect::<entbundle::Result<_>>()?;
        out.push(Sample { t, leakage, spectra, entropies });
        Ok(())
    })?;
    Ok((spec.step(), out))
}

pub fn run(args: &SimulateArgs) -> CliResult {
    let inst = load_anneal(&args.instance)?;
    let samples = args.samples.unwrap_or(inst.samples);
    if samples < 2 {
        return Err(Failure::Input("--samples must be at least 2".into()));
    }
    let project = args.project.resolve(false);
    let out = prepare_dir(&args.out)?;
    let (dt, trace) = anneal(&inst, &args.schedule, samples, project)?;
    let tf = trace.last().map_or(0.0, |s| s.t);

    let n = inst.parity.num_physical();
    let scope = ReportScope { include_trivial: false, sizes: args.sizes.clone() };
    let ids: Vec<(u64, usize)> = (0..(1u64 << (n - 1)) - 1)
        .map(|id| Subsystem::from_bipartition_id(n, id))
        .filter(|a| scope.admits(a))
        .map(|a| (a.bipartition_id(), a.bipartition_size()))
        .collect();

    let path = out.join("trace.csv");
    let mut w = csv_writer(&path)?;
    write_row(&mut w, &path, ["time", "bipartition_id", "size_A", "entropy", "leakage"])?;
    for sample in &trace {
        for &(id, size) in &ids {
            let row = [
                float(sample.t),
                id.to_string(),
                size.to_string(),
                float(sample.entropies[id as usize]),
                float(sample.leakage),
            ];
            write_row(&mut w, &path, &row)?;
        }
    }
    finish(w, &path)?;

    let path = out.join("leakage.csv");
    let mut w = csv_writer(&path)?;
    write_row(&mut w, &path, ["time", "s", "leakage"])?;
    for sample in &trace {
        write_row(&mut w, &path, [float(sample.t), float(sample.t / tf), float(sample.leakage)])?;
    }
    finish(w, &path)?;

    let last = trace.last().ok_or_else(|| Failure::Input("no samples".into()))?;
    let path = out.join("spectrum.csv");
    let mut w = csv_writer(&path)?;
    write_row(&mut w, &path, ["time", "bipartition_id", "eigenvalue_rank", "eigenvalue"])?;
    let spectrum_samples = if args.all_spectra { &trace[..] } else { std::slice::from_ref(last) };
    for sample in spectrum_samples {
        for &(id, _) in &ids {
            for (k, v) in sample.spectra[id as usize].values.iter().enumerate() {
                write_row(&mut w, &path, [float(sample.t), id.to_string(), k.to_string(), float(*v)])?;
            }
        }
    }
    finish(w, &path)?;

    let config =
        RunConfig::new(&args.instance, &inst, &args.schedule, (tf, dt), samples, project, args.sizes.as_deref());
    write_json(&out.join("run.json"), &config)?;

    let max_final = ids.iter().map(|&(id, _)| last.entropies[id as usize]).fold(0.0, f64::max);
    println!(
        "t_f = {tf}, dt = {dt:e}: final leakage {:.3e}, max final entropy {max_final:.6} over {} bipartitions",
        last.leakage,
        ids.len()
    );
    Ok(())
}
