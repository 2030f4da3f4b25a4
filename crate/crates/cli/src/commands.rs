use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;
use std::time::Duration;

use fbas_core::bench::{self, RootThreshold};
use fbas_core::intact::{all_dsets, intact_nodes, is_dset};
use fbas_core::io::{
    convert_stellar_nodes, emit_fbas, parse_distribution, parse_fbas_capped, FbasDocument, LoadedFbas,
};
use fbas_core::oracle::{brute_intersection, brute_min_quorums, brute_quorums, reduce_3sat, CnfFormula};
use fbas_core::probability::{
    intact_probabilities_exact, intact_probability_grouped_guarded, intact_probability_incl_excl,
    intact_probability_mc, uniform_grouped_byzantine, FailureDistribution, IntactProbability, Method,
};
use fbas_core::quorums::{
    enumerate_min_quorums, enumerate_quorums, min_intersection_size_capped, quorum_intersection,
    quorum_intersection_with_scc_preprocessing,
};
use fbas_core::slices::{generate_org_fbas, generate_symmetric};
use fbas_core::trust::{build_trust_graph, scc_partition};
use fbas_core::{FbasError, NameTable, NodeSet};
use serde_json::{json, Value};

use crate::{Cli, Command, Generate, MethodChoice, Model, ProbabilityArgs};

const PROPERTY_VIOLATED: u8 = 1;
const USAGE: u8 = 2;
const GUARD: u8 = 3;

pub struct Output {
    pub text: String,
    pub status: u8,
}

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub status: u8,
}

impl From<FbasError> for CliError {
    fn from(e: FbasError) -> Self {
        let status = if e.is_resource_guard() {
            GUARD
        } else if e == FbasError::NoQuorumIntersection {
            PROPERTY_VIOLATED
        } else {
            USAGE
        };
        CliError {
            message: e.to_string(),
            status,
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        status: USAGE,
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, cli: &Cli) -> Result<LoadedFbas> {
    let text = read_input(path)?;
    parse_fbas_capped(&text, cli.guards.expansion_cap).map_err(|e| {
        let mut e = CliError::from(e);
        e.message = format!("{}: {}", path.display(), e.message);
        e
    })
}

fn names_json(names: &NameTable, s: &NodeSet) -> Value {
    json!(names.names_of(s))
}

/// Picks the human or the JSON rendering.
fn emit(cli: &Cli, human: String, machine: Value, status: u8) -> Output {
    let text = if cli.json {
        let mut t = serde_json::to_string(&machine).expect("serializable");
        t.push('\n');
        t
    } else {
        human
    };
    Output { text, status }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Quorums {
            file,
            minimal,
            limit,
            count_only,
            oracle,
        } => quorums(cli, file, *minimal, *limit, *count_only, *oracle),
        Command::CheckIntersection {
            file,
            no_scc_preprocessing,
            witness,
            expect_intersection,
            min_intersection,
            oracle,
        } => check_intersection(
            cli,
            file,
            !*no_scc_preprocessing,
            *witness,
            *expect_intersection,
            *min_intersection,
            *oracle,
        ),
        Command::Sccs { file } => sccs(cli, file),
        Command::Intact { file, ill_behaved } => intact(cli, file, ill_behaved),
        Command::Dsets { file } => dsets(cli, file),
        Command::CheckDset { file, set } => check_dset(cli, file, set),
        Command::IntactProbability(args) => intact_probability(cli, args),
        Command::Generate(g) => generate(g),
        Command::Reduce3sat { file } => {
            let phi = CnfFormula::parse_dimacs(&read_input(file)?)?;
            let red = reduce_3sat(&phi)?;
            Ok(Output {
                text: emit_fbas(&red.fbas, &red.names, &[])?,
                status: 0,
            })
        }
        Command::ConvertStellar { file } => {
            let doc = convert_stellar_nodes(&read_input(file)?)?;
            doc.build(cli.guards.expansion_cap)?;
            Ok(Output {
                text: doc.to_json(),
                status: 0,
            })
        }
        Command::Bench { from, to, min_millis } => run_bench(cli, *from, *to, *min_millis),
    }
}

fn quorums(
    cli: &Cli,
    file: &Path,
    minimal: bool,
    limit: Option<usize>,
    count_only: bool,
    oracle: bool,
) -> Result<Output> {
    let loaded = load(file, cli)?;
    let (f, names) = (&loaded.fbas, &loaded.names);
    let mut iter: Box<dyn Iterator<Item = NodeSet>> = if minimal {
        Box::new(enumerate_min_quorums(f))
    } else {
        Box::new(enumerate_quorums(f))
    };

    if count_only && !oracle {
        let count = match limit {
            Some(l) => iter.take(l).count(),
            None => iter.count(),
        };
        return Ok(emit(cli, format!("{count}\n"), json!({ "count": count }), 0));
    }

    let mut list = Vec::new();
    let mut truncated = false;
    for q in iter.by_ref() {
        if Some(list.len()) == limit {
            truncated = true;
            break;
        }
        if list.len() == cli.guards.quorum_cap {
            return Err(FbasError::TooManyQuorums {
                cap: cli.guards.quorum_cap,
            }
            .into());
        }
        list.push(q);
    }

    let mut status = 0;
    let mut agrees = None;
    if oracle {
        let mut want = if minimal {
            brute_min_quorums(f)?
        } else {
            brute_quorums(f)?
        };
        let mut got = list.clone();
        want.sort_unstable();
        got.sort_unstable();
        agrees = Some(want == got);
        if want != got {
            status = PROPERTY_VIOLATED;
        }
    }

    let mut human = String::new();
    if count_only {
        writeln!(human, "{}", list.len()).unwrap();
    } else {
        for q in &list {
            writeln!(human, "{}", names.render(q)).unwrap();
        }
    }
    if let Some(a) = agrees {
        writeln!(human, "oracle: {}", if a { "agrees" } else { "disagrees" }).unwrap();
    }
    let mut machine = json!({
        "count": list.len(),
        "truncated": truncated,
    });
    if !count_only {
        machine["quorums"] = list.iter().map(|q| names_json(names, q)).collect();
    }
    if let Some(a) = agrees {
        machine["oracle_agrees"] = json!(a);
    }
    Ok(emit(cli, human, machine, status))
}

fn check_intersection(
    cli: &Cli,
    file: &Path,
    scc: bool,
    show_witness: bool,
    expect: bool,
    min_size: bool,
    oracle: bool,
) -> Result<Output> {
    let loaded = load(file, cli)?;
    let (f, names) = (&loaded.fbas, &loaded.names);
    let r = if scc {
        quorum_intersection_with_scc_preprocessing(f)
    } else {
        quorum_intersection(f)
    };
    let mut human = format!("intersects: {}\n", r.intersects);
    let mut machine = json!({ "intersects": r.intersects });
    let mut status = if expect && !r.intersects {
        PROPERTY_VIOLATED
    } else {
        0
    };

    if show_witness {
        if let Some((a, b)) = &r.witness {
            writeln!(human, "witness: {} {}", names.render(a), names.render(b)).unwrap();
            machine["witness"] = json!([names_json(names, a), names_json(names, b)]);
        }
    }
    if min_size {
        let m = min_intersection_size_capped(f, cli.guards.quorum_cap)?;
        match m {
            Some(m) => writeln!(human, "min-intersection: {m}").unwrap(),
            None => writeln!(human, "min-intersection: none").unwrap(),
        }
        machine["min_intersection"] = json!(m);
    }
    if oracle {
        let agrees = brute_intersection(f)? == r.intersects;
        writeln!(human, "oracle: {}", if agrees { "agrees" } else { "disagrees" }).unwrap();
        machine["oracle_agrees"] = json!(agrees);
        if !agrees {
            status = PROPERTY_VIOLATED;
        }
    }
    Ok(emit(cli, human, machine, status))
}

fn sccs(cli: &Cli, file: &Path) -> Result<Output> {
    let loaded = load(file, cli)?;
    let names = &loaded.names;
    let p = scc_partition(&build_trust_graph(&loaded.fbas));
    let mut human = String::new();
    for (i, c) in p.components.iter().enumerate() {
        let tag = if p.greatest == Some(i) {
            " (greatest)"
        } else if p.maximal.contains(&i) {
            " (maximal)"
        } else {
            ""
        };
        writeln!(human, "{}{tag}", names.render(c)).unwrap();
    }
    if p.greatest.is_none() {
        writeln!(human, "no greatest component").unwrap();
    }
    let machine = json!({
        "components": p.components.iter().map(|c| names_json(names, c)).collect::<Vec<_>>(),
        "maximal": p.maximal.iter().map(|&i| names_json(names, &p.components[i])).collect::<Vec<_>>(),
        "greatest": p.greatest_set().map(|g| names_json(names, &g)),
    });
    Ok(emit(cli, human, machine, 0))
}

fn name_set(names: &NameTable, list: &[String]) -> Result<NodeSet> {
    let list: Vec<&str> = list.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    Ok(names.set(&list)?)
}

fn intact(cli: &Cli, file: &Path, ill: &[String]) -> Result<Output> {
    let loaded = load(file, cli)?;
    let names = &loaded.names;
    let b = name_set(names, ill)?;
    let r = intact_nodes(&loaded.fbas, &b)?;
    let befouled = loaded.fbas.nodes().difference(&r.intact);
    let human = format!(
        "intact: {}\nbefouled: {}\nsmallest-dset: {}\n",
        names.render(&r.intact),
        names.render(&befouled),
        names.render(&r.smallest_dset)
    );
    let machine = json!({
        "ill_behaved": names_json(names, &b),
        "intact": names_json(names, &r.intact),
        "befouled": names_json(names, &befouled),
        "smallest_dset": names_json(names, &r.smallest_dset),
    });
    Ok(emit(cli, human, machine, 0))
}

fn dsets(cli: &Cli, file: &Path) -> Result<Output> {
    let loaded = load(file, cli)?;
    let names = &loaded.names;
    let all = all_dsets(&loaded.fbas, cli.guards.dset_guard)?;
    let mut human = String::new();
    for d in &all {
        writeln!(human, "{}", names.render(d)).unwrap();
    }
    let machine = json!({
        "count": all.len(),
        "dsets": all.iter().map(|d| names_json(names, d)).collect::<Vec<_>>(),
    });
    Ok(emit(cli, human, machine, 0))
}

fn check_dset(cli: &Cli, file: &Path, set: &[String]) -> Result<Output> {
    let loaded = load(file, cli)?;
    let d = name_set(&loaded.names, set)?;
    let yes = is_dset(&loaded.fbas, &d)?;
    Ok(emit(cli, format!("dset: {yes}\n"), json!({ "dset": yes }), 0))
}

fn distribution(args: &ProbabilityArgs, loaded: &LoadedFbas) -> Result<FailureDistribution> {
    let n = loaded.fbas.universe();
    if let Some(path) = &args.distribution {
        return Ok(parse_distribution(
            &read_input(path)?,
            &loaded.names,
            &loaded.organizations,
        )?);
    }
    let need = |x: Option<f64>, flag: &str| x.ok_or_else(|| usage(format!("this model needs --{flag}")));
    let dist = match args.model.expect("clap requires --model or --distribution") {
        Model::AtMostOne => {
            let p = need(args.p, "p")?;
            FailureDistribution::AtMostOne {
                p_empty: 1.0 - p * n as f64,
                p_single: vec![p; n],
            }
        }
        Model::Independent => FailureDistribution::Independent {
            p: vec![need(args.p, "p")?; n],
        },
        Model::GroupedByzantine => {
            if loaded.organizations.is_empty() {
                return Err(usage(
                    "grouped-byzantine needs organizations in the FBAS document",
                ));
            }
            uniform_grouped_byzantine(
                loaded.organizations.iter().map(|o| o.members).collect(),
                need(args.q, "q")?,
                need(args.r, "r")?,
            )
        }
    };
    dist.validate(n)?;
    Ok(dist)
}

fn intact_probability(cli: &Cli, args: &ProbabilityArgs) -> Result<Output> {
    let loaded = load(&args.file, cli)?;
    let (f, names) = (&loaded.fbas, &loaded.names);
    let dist = distribution(args, &loaded)?;
    let target = match &args.node {
        Some(name) => Some(
            names
                .id(name)
                .ok_or_else(|| FbasError::UnknownName(name.clone()))?,
        ),
        None => None,
    };
    let targets: Vec<_> = match target {
        Some(v) => vec![v],
        None => f.nodes().iter().collect(),
    };
    let grouped = matches!(
        dist,
        FailureDistribution::Grouped { .. } | FailureDistribution::GroupedByzantine { .. }
    );
    let guard = cli.guards.exact_guard;

    let results: Vec<IntactProbability> = if let Some(samples) = args.mc_samples {
        intact_probability_mc(f, target, &dist, samples, args.seed)?
    } else {
        match (args.method, grouped) {
            (MethodChoice::Grouped, _) | (MethodChoice::Auto, true) => targets
                .iter()
                .map(|&v| intact_probability_grouped_guarded(f, v, &dist, guard))
                .collect::<std::result::Result<_, _>>()?,
            (MethodChoice::InclusionExclusion, _) => targets
                .iter()
                .map(|&v| intact_probability_incl_excl(f, v, &dist))
                .collect::<std::result::Result<_, _>>()?,
            (MethodChoice::Exact, _) | (MethodChoice::Auto, false) => {
                let all = intact_probabilities_exact(f, &dist, guard)?;
                targets.iter().map(|v| all[v.0].clone()).collect()
            }
        }
    };

    let mut human = String::from("node\tp_intact\tp_intact_if_well_behaved\tmethod\n");
    let mut records = Vec::new();
    for r in &results {
        let name = names.name(r.node);
        let cond = r
            .p_intact_given_well_behaved
            .map_or_else(|| "-".to_string(), |c| format!("{c:.12}"));
        let (method, extra) = match &r.method {
            Method::Exact => ("exact".to_string(), json!({})),
            Method::InclusionExclusion => ("inclusion-exclusion".to_string(), json!({})),
            Method::MonteCarlo {
                samples,
                seed,
                std_error,
            } => (
                format!("monte-carlo(n={samples}, seed={seed}, se={std_error:.2e})"),
                json!({ "samples": samples, "seed": seed, "std_error": std_error }),
            ),
        };
        writeln!(human, "{name}\t{:.12}\t{cond}\t{method}", r.p_intact).unwrap();
        let mut rec = json!({
            "node": name,
            "p_intact": r.p_intact,
            "p_intact_given_well_behaved": r.p_intact_given_well_behaved,
            "method": method.split('(').next().unwrap_or_default(),
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut rec, extra) {
            m.extend(e);
        }
        records.push(rec);
    }
    Ok(emit(cli, human, json!({ "results": records }), 0))
}

fn generate(g: &Generate) -> Result<Output> {
    let text = match g {
        Generate::Symmetric { nodes, threshold } => {
            let f = generate_symmetric(*nodes, *threshold)?;
            emit_fbas(&f, &NameTable::numbered(*nodes), &[])?
        }
        Generate::Orgs {
            sizes,
            org_thresholds,
            root_threshold,
        } => {
            FbasDocument::from_org_fbas(&generate_org_fbas(sizes, org_thresholds, *root_threshold)?).to_json()
        }
    };
    Ok(Output { text, status: 0 })
}

fn run_bench(cli: &Cli, from: usize, to: usize, min_millis: u64) -> Result<Output> {
    if from < 1 || from > to {
        return Err(usage("need 1 <= --from <= --to"));
    }
    let rows = bench::run(from..=to, &RootThreshold::ALL, Duration::from_millis(min_millis))?;
    let trends = bench::trends(&rows);
    let mut human = bench::to_tsv(&rows);
    let fmt = |s: Option<f64>| s.map_or_else(|| "n/a".to_string(), |s| format!("{s:.3}"));
    for t in &trends {
        writeln!(
            human,
            "# {}: quorum counts strictly increasing: {}; log-time slope per organization: enumerate {}, intersection {}",
            t.rule.label(),
            t.quorums_strictly_increasing,
            fmt(t.enumerate_log_slope),
            fmt(t.intersection_log_slope)
        )
        .unwrap();
    }
    let machine = json!({
        "rows": rows.iter().map(|r| json!({
            "rule": r.rule.label(),
            "orgs": r.orgs,
            "nodes": r.nodes,
            "root_threshold": r.root_threshold,
            "quorums": r.quorums,
            "enumerate_seconds": r.enumerate_seconds,
            "intersects": r.intersects,
            "intersection_seconds": r.intersection_seconds,
        })).collect::<Vec<_>>(),
        "trends": trends.iter().map(|t| json!({
            "rule": t.rule.label(),
            "quorums_strictly_increasing": t.quorums_strictly_increasing,
            "enumerate_log_slope": t.enumerate_log_slope,
            "intersection_log_slope": t.intersection_log_slope,
        })).collect::<Vec<_>>(),
    });
    Ok(emit(cli, human, machine, 0))
}
