use std::path::PathBuf;

use clap::Args;
use entbundle::analysis::{
    bundle_report, cluster_entropies, compare_theory_observed, Cluster, Comparison, ReportScope, DEFAULT_RADIUS,
};
use serde::Serialize;

use crate::classify::{bundle_entries, write_histogram, BundleOut};
use crate::input::{load_anneal, positive, ProjectArgs, ScheduleArgs};
use crate::output::{prepare_dir, write_json};
use crate::simulate::{anneal, RunConfig};
use crate::CliResult;

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Annealing instance file, or builtin:k5.
    #[arg(long)]
    pub instance: String,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Clustering radius for final entropies.
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    /// Only compare bipartitions whose smaller side has one of these sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Final states are projected onto the embedded subspace unless
    /// --no-project is given.
    #[command(flatten)]
    pub project: ProjectArgs,
    /// Output directory for report.json and histogram.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    config: RunConfig<'a>,
    radius: f64,
    final_leakage: f64,
    histogram: std::collections::BTreeMap<usize, usize>,
    total_bipartitions: usize,
    bundles: Vec<BundleOut>,
    clusters: &'a [Cluster],
    comparison: &'a Comparison,
}

pub fn run(args: &ReportArgs) -> CliResult {
    positive("--radius", args.radius)?;
    let inst = load_anneal(&args.instance)?;
    let project = args.project.resolve(true);
    let out = prepare_dir(&args.out)?;

    let classification = inst.parity.classify()?;
    let (dt, trace) = anneal(&inst, &args.schedule, 2, project)?;
    let last = trace.last().expect("two samples");

    let scope = ReportScope { include_trivial: false, sizes: args.sizes.clone() };
    let hist = bundle_report(classification.bundles(), &scope, Some(&last.entropies));
    let values: Vec<(u64, f64)> =
        hist.entries.iter().flat_map(|e| e.bipartitions.iter().map(|&id| (id, last.entropies[id as usize]))).collect();
    let clusters = cluster_entropies(&values, args.radius)?;
    let comparison = compare_theory_observed(&hist, &clusters);

    let n = inst.parity.num_physical();
    let doc = ReportOut {
        config: RunConfig::new(&args.instance, &inst, &args.schedule, (last.t, dt), 2, project, args.sizes.as_deref()),
        radius: args.radius,
        final_leakage: last.leakage,
        histogram: hist.counts.clone(),
        total_bipartitions: hist.total_bipartitions,
        bundles: bundle_entries(&hist, n, Some(&inst.parity)),
        clusters: &clusters.clusters,
        comparison: &comparison,
    };
    write_json(&out.join("report.json"), &doc)?;
    write_histogram(&out.join("histogram.csv"), &hist, n)?;

    println!(
        "{} bundles, {} clusters at radius {:e}; split bundles {}, merged clusters {}; {}",
        comparison.bundles,
        comparison.clusters,
        args.radius,
        comparison.split_bundles.len(),
        comparison.merged_clusters.len(),
        if comparison.exact_match { "clusters reproduce the bundles" } else { "clusters differ from the bundles" }
    );
    Ok(())
}
