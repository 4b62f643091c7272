use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use entbundle::analysis::{bundle_report, BundleHistogram, ReportScope};
use entbundle::subspace::classify_subspace;
use entbundle::{Classification, Instance, ParityEmbedding, Subspace, Subsystem};
use serde::Serialize;

use crate::input::load_instance;
use crate::output::{csv_writer, finish, prepare_dir, write_json, write_row};
use crate::{CliResult, Failure};

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Instance file, or builtin:k5, builtin:k4, builtin:worked, builtin:minor-321.
    #[arg(long)]
    pub instance: String,
    /// Which classifier to run. `both` cross-checks the two engines.
    #[arg(long, value_enum, default_value_t = Engine::Both)]
    pub engine: Engine,
    /// Only report bipartitions whose smaller side has one of these sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Include the trivial bipartition (empty set vs everything). This is
    /// the default for bare subspaces.
    #[arg(long, overrides_with = "exclude_trivial")]
    pub include_trivial: bool,
    /// Leave out the trivial bipartition. This is the default for parity and
    /// minor embeddings.
    #[arg(long, overrides_with = "include_trivial")]
    pub exclude_trivial: bool,
    /// Output directory for bundles.json and histogram.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exhaustive quotient-set comparison over the basis states.
    Oracle,
    /// GF(2) operator sets of the embedding.
    Polynomial,
    Both,
}

#[derive(Serialize)]
pub struct BundleOut {
    pub id: usize,
    pub bipartitions: Vec<u64>,
    pub sizes: BTreeMap<usize, usize>,
    /// Each bipartition as `[side, complement]`, 1-based qubit lists.
    pub members: Vec<[Vec<usize>; 2]>,
    /// Logical edges of the first side, for parity instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_entropy: Option<f64>,
}

#[derive(Serialize)]
struct ClassifyOut<'a> {
    instance: &'a str,
    kind: &'static str,
    qubits: usize,
    states: usize,
    engines: Vec<Engine>,
    /// Whether both engines produced the same bundles; absent with one engine.
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<bool>,
    total_bipartitions: usize,
    histogram: &'a BTreeMap<usize, usize>,
    bundles: Vec<BundleOut>,
}

pub fn bundle_entries(hist: &BundleHistogram, n: usize, parity: Option<&ParityEmbedding>) -> Vec<BundleOut> {
    hist.entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let sides: Vec<Subsystem> =
                e.bipartitions.iter().map(|&id| Subsystem::from_bipartition_id(n, id)).collect();
            BundleOut {
                id: k,
                bipartitions: e.bipartitions.clone(),
                sizes: e.sizes.clone(),
                members: sides.iter().map(|a| [a.qubits(), a.complement().qubits()]).collect(),
                edges: parity.map(|pe| {
                    sides.iter().map(|a| a.positions().iter().map(|&q| pe.logical().edge_ids(q)).collect()).collect()
                }),
                max_entropy: e.max_entropy,
            }
        })
        .collect()
}

/// Bipartition ids whose bundles differ between two classifications.
fn disagreements(a: &Classification, b: &Classification) -> Vec<(u64, Vec<u64>, Vec<u64>)> {
    let groups = |c: &Classification| -> BTreeMap<u64, Vec<u64>> {
        let mut out = BTreeMap::new();
        for bundle in c.bundles() {
            let mut ids: Vec<u64> = bundle.bipartitions.iter().map(Subsystem::bipartition_id).collect();
            ids.sort_unstable();
            for &id in &ids {
                out.insert(id, ids.clone());
            }
        }
        out
    };
    let (ga, gb) = (groups(a), groups(b));
    ga.iter()
        .filter_map(|(id, members)| {
            let other = gb.get(id).cloned().unwrap_or_default();
            (members != &other).then(|| (*id, members.clone(), other))
        })
        .collect()
}

struct Classified {
    kind: &'static str,
    n: usize,
    states: usize,
    engines: Vec<Engine>,
    agreement: Option<bool>,
    classification: Classification,
}

fn run_engines(
    kind: &'static str,
    r: &Subspace,
    engine: Engine,
    polynomial: impl FnOnce() -> entbundle::Result<Classification>,
    diff_path: &Path,
) -> CliResult<Classified> {
    let (engines, agreement, classification) = match engine {
        Engine::Oracle => (vec![Engine::Oracle], None, classify_subspace(r)?),
        Engine::Polynomial => (vec![Engine::Polynomial], None, polynomial()?),
        Engine::Both => {
            let poly = polynomial()?;
            let oracle = classify_subspace(r)?;
            if poly != oracle {
                let diff: Vec<_> = disagreements(&oracle, &poly)
                    .into_iter()
                    .take(100)
                    .map(|(id, o, p)| serde_json::json!({"bipartition": id, "oracle": o, "polynomial": p}))
                    .collect();
                write_json(diff_path, &diff)?;
                return Err(Failure::Property(format!(
                    "oracle and polynomial engines disagree on {} bipartitions; see {}",
                    diff.len(),
                    diff_path.display()
                )));
            }
            (vec![Engine::Oracle, Engine::Polynomial], Some(true), poly)
        }
    };
    Ok(Classified { kind, n: r.n(), states: r.len(), engines, agreement, classification })
}

pub fn run(args: &ClassifyArgs) -> CliResult {
    let inst = load_instance(&args.instance)?;
    let out = prepare_dir(&args.out)?;
    let diff_path = out.join("engine_diff.json");
    let result = match &inst {
        Instance::Subspace(r) => {
            if args.engine == Engine::Polynomial {
                return Err(Failure::Input("a bare subspace has no embedding; use --engine oracle".into()));
            }
            Classified {
                kind: "subspace",
                n: r.n(),
                states: r.len(),
                engines: vec![Engine::Oracle],
                agreement: None,
                classification: classify_subspace(r)?,
            }
        }
        Instance::Parity(_) | Instance::Anneal(_) => {
            let pe = inst.parity().expect("parity instance");
            let r = pe.enumerate_states()?;
            run_engines("parity", &r, args.engine, || pe.classify(), &diff_path)?
        }
        Instance::Minor(me) => {
            let r = me.enumerate_states()?;
            run_engines("minor", &r, args.engine, || me.classify(), &diff_path)?
        }
    };

    let include_trivial =
        if args.include_trivial || args.exclude_trivial { args.include_trivial } else { result.kind == "subspace" };
    let scope = ReportScope { include_trivial, sizes: args.sizes.clone() };
    let hist = bundle_report(result.classification.bundles(), &scope, None);
    let doc = ClassifyOut {
        instance: &args.instance,
        kind: result.kind,
        qubits: result.n,
        states: result.states,
        engines: result.engines,
        agreement: result.agreement,
        total_bipartitions: hist.total_bipartitions,
        histogram: &hist.counts,
        bundles: bundle_entries(&hist, result.n, inst.parity()),
    };
    write_json(&out.join("bundles.json"), &doc)?;
    write_histogram(&out.join("histogram.csv"), &hist, result.n)?;

    let counts: Vec<String> = hist.counts.iter().map(|(size, count)| format!("{count}x{size}")).collect();
    println!(
        "{} bundles over {} bipartitions ({}); engines: {}",
        hist.num_bundles(),
        hist.total_bipartitions,
        counts.join(" + "),
        doc.engines.iter().map(|e| format!("{e:?}").to_lowercase()).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}

/// One row per bundle with a column per smaller-side size.
pub fn write_histogram(path: &Path, hist: &BundleHistogram, n: usize) -> CliResult {
    let mut w = csv_writer(path)?;
    let max_size = n / 2;
    let mut header = vec!["bundle".to_string(), "bipartitions".into(), "members".into()];
    header.extend((0..=max_size).map(|s| format!("size_{s}")));
    write_row(&mut w, path, &header)?;
    for (k, e) in hist.entries.iter().enumerate() {
        let mut row = vec![k.to_string(), e.num_bipartitions().to_string(), e.num_members().to_string()];
        row.extend((0..=max_size).map(|s| e.sizes.get(&s).copied().unwrap_or(0).to_string()));
        write_row(&mut w, path, &row)?;
    }
    finish(w, path)
}
