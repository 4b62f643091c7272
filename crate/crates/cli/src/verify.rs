use std::path::PathBuf;

use clap::Args;
use entbundle::embeddings::{bipartite_sets_equal, verify_generator_set, OperatorSet};
use entbundle::instances::{complete_parity, k5_parity};
use entbundle::sim::{all_bipartition_spectra, entanglement_spectrum};
use entbundle::subspace::{counterexample_family, partition_labels, subsystems_equivalent};
use entbundle::{
    BitVector, Classification, EdgeSubset, MinorEmbedding, ParityEmbedding, StateVector, Subspace, Subsystem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{prepare_dir, write_json};
use crate::{CliResult, Failure};

const SPECTRUM_TOLERANCE: f64 = 1e-10;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Seed for the random states of the spectrum checks.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random states per spectrum check.
    #[arg(long, default_value_t = 100)]
    pub states: usize,
    /// Also run the cardinality law on the K5 parity space with one state
    /// removed; this control is expected to fail.
    #[arg(long)]
    pub mutate: bool,
    /// Directory for verify.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Property {
    property: &'static str,
    instance: String,
    passed: bool,
    checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Value>,
}

impl Property {
    fn new(property: &'static str, instance: &str, checked: u64, counterexample: Option<Value>) -> Self {
        Property { property, instance: instance.to_string(), passed: counterexample.is_none(), checked, counterexample }
    }
}

/// An embedded subspace with operator sets for every subsystem mask.
struct Target {
    name: String,
    r: Subspace,
    /// `O_A` indexed by subsystem mask.
    sets: Vec<OperatorSet>,
    flips: Vec<BitVector>,
    classification: Classification,
    parity: Option<ParityEmbedding>,
}

impl Target {
    fn parity(name: &str, pe: ParityEmbedding) -> CliResult<Self> {
        let n = pe.num_physical();
        let r = pe.enumerate_states()?;
        let sets = (0..1u64 << n)
            .into_par_iter()
            .map(|m| pe.operator_set(&EdgeSubset::from_bits(BitVector::from_u64(n, m))))
            .collect();
        let flips = pe.line_operators().iter().map(|op| pe.flip_mask(op)).collect();
        let classification = pe.classify()?;
        Ok(Target { name: name.into(), r, sets, flips, classification, parity: Some(pe) })
    }

    fn minor(name: &str, me: MinorEmbedding) -> CliResult<Self> {
        let n = me.num_physical();
        let r = me.enumerate_states()?;
        let sets = (0..1u64 << n).into_par_iter().map(|m| me.operator_set(&Subsystem::from_u64(n, m))).collect();
        let flips = me.chain_operators().iter().map(|op| me.flip_mask(op)).collect();
        let classification = me.classify()?;
        Ok(Target { name: name.into(), r, sets, flips, classification, parity: None })
    }

    fn n(&self) -> usize {
        self.r.n()
    }
}

/// Operator-set equivalence against quotient-set equivalence on every
/// ordered pair of subsystems.
fn equivalence_engine(t: &Target) -> Property {
    let n = t.n();
    let full = (1u64 << n) - 1;
    let labels: Vec<Vec<u32>> = (0..=full).map(|m| partition_labels(&t.r, &BitVector::from_u64(n, m))).collect();
    let total = full + 1;
    let bad = (0..total).into_par_iter().find_map_first(|a| {
        (0..total).find_map(|b| {
            let (la, lac, lb, lbc) =
                (&labels[a as usize], &labels[(full ^ a) as usize], &labels[b as usize], &labels[(full ^ b) as usize]);
            let oracle = (la == lb && lac == lbc) || (la == lbc && lac == lb);
            let s = &t.sets;
            let engine =
                bipartite_sets_equal(&s[a as usize], &s[(full ^ a) as usize], &s[b as usize], &s[(full ^ b) as usize]);
            (oracle != engine).then(|| {
                json!({
                    "a": Subsystem::from_u64(n, a).qubits(),
                    "b": Subsystem::from_u64(n, b).qubits(),
                    "oracle": oracle,
                    "engine": engine,
                })
            })
        })
    });
    Property::new("equivalence-engine", &t.name, total * total, bad)
}

/// `|R/~A| * |O_A| = |R|` for every subsystem.
fn cardinality_law(name: &str, r: &Subspace, sets: &[OperatorSet]) -> Property {
    let n = r.n();
    let bad = (0..sets.len() as u64).into_par_iter().find_map_first(|m| {
        let classes = partition_labels(r, &BitVector::from_u64(n, m)).iter().max().map_or(0, |&x| x as u128 + 1);
        let ops = sets[m as usize].operator_count();
        (classes * ops != r.len() as u128).then(|| {
            json!({
                "subsystem": Subsystem::from_u64(n, m).qubits(),
                "classes": classes as u64,
                "operators": ops as u64,
                "states": r.len(),
            })
        })
    });
    Property::new("cardinality-law", name, sets.len() as u64, bad)
}

/// The component-based operator sets against the direct nullspace.
fn component_operator_set(t: &Target, pe: &ParityEmbedding) -> Property {
    let n = t.n();
    let bad = (0..t.sets.len() as u64).into_par_iter().find_map_first(|m| {
        let direct = pe.operator_set_direct(&EdgeSubset::from_bits(BitVector::from_u64(n, m)));
        (!t.sets[m as usize].same_as(&direct)).then(|| {
            json!({
                "subsystem": Subsystem::from_u64(n, m).qubits(),
                "components": t.sets[m as usize].canonical_basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "direct": direct.canonical_basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
    });
    Property::new("component-operator-set", &t.name, t.sets.len() as u64, bad)
}

fn generator_set(t: &Target) -> Property {
    let report = verify_generator_set(&t.r, &t.flips);
    let bad = (!report.all_hold()).then(|| json!(format!("{:?}", report.first_violation)));
    Property::new("generator-set", &t.name, t.flips.len() as u64, bad)
}

/// Bundle members share their spectra on seeded random states.
fn spectra_agree(t: &Target, seed: u64, states: usize) -> CliResult<Property> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for k in 0..states {
        let psi = StateVector::random_in(&t.r, &mut rng)?;
        let spectra = all_bipartition_spectra(&psi)?;
        for bundle in t.classification.bundles() {
            let ids: Vec<usize> =
                bundle.bipartitions.iter().filter(|a| !a.is_trivial()).map(|a| a.bipartition_id() as usize).collect();
            for pair in ids.windows(2) {
                checked += 1;
                let gap = spectra[pair[0]].max_abs_diff(&spectra[pair[1]]);
                if gap >= SPECTRUM_TOLERANCE {
                    let n = t.n();
                    let bad = json!({
                        "state": k,
                        "a": Subsystem::from_bipartition_id(n, pair[0] as u64).qubits(),
                        "b": Subsystem::from_bipartition_id(n, pair[1] as u64).qubits(),
                        "gap": gap,
                    });
                    return Ok(Property::new("spectra-agree", &t.name, checked, Some(bad)));
                }
            }
        }
    }
    Ok(Property::new("spectra-agree", &t.name, checked, None))
}

/// Inequivalent subsystems with equal spectra on every state.
fn counterexample_spectra(seed: u64, states: usize) -> CliResult<Vec<Property>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 4..=8 {
        let (r, a1, a2) = counterexample_family(n)?;
        let name = format!("counterexample n={n}");
        let mut bad = subsystems_equivalent(&r, &a1, &a2).then(|| json!("subsystems are equivalent"));
        for k in 0..states {
            if bad.is_some() {
                break;
            }
            let psi = StateVector::random_in(&r, &mut rng)?;
            let gap = entanglement_spectrum(&psi, &a1)?.max_abs_diff(&entanglement_spectrum(&psi, &a2)?);
            if gap >= SPECTRUM_TOLERANCE {
                bad = Some(json!({"state": k, "gap": gap}));
            }
        }
        out.push(Property::new("counterexample-spectra", &name, states as u64, bad));
    }
    Ok(out)
}

pub fn run(args: &VerifyArgs) -> CliResult {
    let targets = vec![
        Target::parity("K3", complete_parity(3))?,
        Target::parity("K4", complete_parity(4))?,
        Target::parity("K5", k5_parity())?,
        Target::minor("chains 3,2,1", MinorEmbedding::from_chain_sizes(&[3, 2, 1])?)?,
        Target::minor("chains 2,2,2", MinorEmbedding::from_chain_sizes(&[2, 2, 2])?)?,
    ];
    let mut results = Vec::new();
    for t in &targets {
        results.push(equivalence_engine(t));
        results.push(cardinality_law(&t.name, &t.r, &t.sets));
        if let Some(pe) = &t.parity {
            results.push(component_operator_set(t, pe));
        }
        results.push(generator_set(t));
        results.push(spectra_agree(t, args.seed, args.states)?);
    }
    results.extend(counterexample_spectra(args.seed, args.states)?);
    if args.mutate {
        let k5 = targets.iter().find(|t| t.name == "K5").expect("K5 target");
        results.push(cardinality_law("K5 with one state removed", &k5.r.without(0), &k5.sets));
    }

    for p in &results {
        println!(
            "[{}] {} on {} ({} checks)",
            if p.passed { "PASS" } else { "FAIL" },
            p.property,
            p.instance,
            p.checked
        );
    }
    let failed = results.iter().filter(|p| !p.passed).count();
    if let Some(dir) = &args.out {
        let dir = prepare_dir(dir)?;
        let doc = json!({
            "seed": args.seed,
            "states": args.states,
            "passed": failed == 0,
            "properties": results,
        });
        write_json(&dir.join("verify.json"), &doc)?;
    }
    if failed > 0 {
        return Err(Failure::Property(format!("{failed} of {} properties failed", results.len())));
    }
    println!("all {} properties hold (seed {})", results.len(), args.seed);
    Ok(())
}
