mod args;

use args::{Cli, Command, GenKind, Report, RunConfig};
use circuit_forge_core::decomp::{bound_report, enumerate_near_min_circuits, DecompError};
use circuit_forge_core::gf2::{BinaryMatroid, CircuitQuery, Gf2Error};
use circuit_forge_core::graph::{small_cut, CutQuery, CycleQuery, GraphError, WeightedGraph};
use circuit_forge_core::ksum::KsumError;
use circuit_forge_core::lattice::{
    conformal_decompose, enumerate_short_vectors, short_vectors_box_oracle, LatticeError,
    LatticeVector, TuMatrix,
};
use circuit_forge_core::report::{bound_report_row, Row};
use circuit_forge_core::types::{Alpha, Circuit, Label, OracleCaps};
use circuit_forge_core::udt::{random_udt, LeafKind, RandomUdtParams, Udt};
use clap::Parser;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Process exit codes, one per error class. Data streams stay on stdout,
/// diagnostics on stderr.
enum CliError {
    Parse(String),      // 2
    Cap(String),        // 3
    Girth(String),      // 4
    Tu(String),         // 5
    Generation(String), // 6
    Internal(String),   // 1
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Girth(_) => 4,
            CliError::Tu(_) => 5,
            CliError::Generation(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Cap(m)
            | CliError::Girth(m)
            | CliError::Tu(m)
            | CliError::Generation(m)
            | CliError::Internal(m) => m,
        }
    }
}

impl From<Gf2Error> for CliError {
    fn from(e: Gf2Error) -> Self {
        match e {
            Gf2Error::Parse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Cap(other.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Parse { .. } => CliError::Parse(e.to_string()),
            GraphError::Gf2(inner) => inner.into(),
            other => CliError::Cap(other.to_string()),
        }
    }
}

impl From<KsumError> for CliError {
    fn from(e: KsumError) -> Self {
        match e {
            KsumError::TreeShape(_) => CliError::Parse(e.to_string()),
            KsumError::Generation(_) => CliError::Generation(e.to_string()),
            KsumError::Gf2(inner) => inner.into(),
            other => CliError::Cap(other.to_string()),
        }
    }
}

impl From<DecompError> for CliError {
    fn from(e: DecompError) -> Self {
        match e {
            DecompError::GirthViolation { .. } | DecompError::UniquenessViolation(_) => {
                CliError::Girth(e.to_string())
            }
            DecompError::Ksum(inner) => inner.into(),
            DecompError::Gf2(inner) => inner.into(),
            DecompError::Invariant(_) => CliError::Internal(e.to_string()),
            other => CliError::Cap(other.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Parse { .. } => CliError::Parse(e.to_string()),
            LatticeError::TuViolation(_) => CliError::Tu(e.to_string()),
            LatticeError::GirthViolation(_) => CliError::Girth(e.to_string()),
            other => CliError::Cap(other.to_string()),
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn labels_of(raw: &[u32]) -> Vec<Label> {
    raw.iter().copied().map(Label).collect()
}

fn join_labels(labels: &[Label]) -> String {
    labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_coords(v: &LatticeVector) -> String {
    v.0.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    let cli = Cli::parse();
    let config = match RunConfig::from_global(&cli.global) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    };
    let started = Instant::now();
    match run(&cli.command, &config) {
        Ok(mut report) => {
            report.elapsed_ms = started.elapsed().as_millis();
            report.emit(config.format);
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            std::process::exit(err.code());
        }
    }
}

fn run(command: &Command, config: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Circuits {
            matrix,
            graph,
            udt,
            max_size,
            required,
            forbidden,
        } => cmd_circuits(config, matrix, graph, udt, *max_size, required, forbidden),
        Command::Cycles {
            graph,
            r_labels,
            cap,
        } => cmd_cycles(config, graph, r_labels, *cap),
        Command::Cuts {
            graph,
            r_labels,
            cap,
        } => cmd_cuts(config, graph, r_labels, *cap),
        Command::Smallcut { graph, r_labels } => cmd_smallcut(config, graph, r_labels),
        Command::NearMin { udt, emit_circuits } => cmd_near_min(config, udt, *emit_circuits),
        Command::Lattice {
            matrix,
            check_tu,
            require_tu,
            circuits,
            norm2_cap,
            shortvec,
            lambda2,
            decompose,
        } => cmd_lattice(
            config,
            matrix,
            *check_tu,
            *require_tu,
            *circuits,
            *norm2_cap,
            *shortvec,
            *lambda2,
            decompose.as_deref(),
        ),
        Command::Gen {
            kind,
            out,
            leaves,
            leaf_min,
            leaf_max,
            types,
            max_m,
            n,
            m,
            max_weight,
        } => cmd_gen(
            config,
            *kind,
            out,
            *leaves,
            (*leaf_min, *leaf_max),
            types,
            *max_m,
            *n,
            *m,
            *max_weight,
        ),
        Command::VerifyBounds {
            udt,
            instances,
            alphas,
            leaves_min,
            leaves_max,
            max_m,
        } => cmd_verify_bounds(
            config,
            udt.as_deref(),
            *instances,
            alphas,
            *leaves_min,
            *leaves_max,
            *max_m,
        ),
    }
}

fn load_matroid(
    matrix: &Option<PathBuf>,
    graph: &Option<PathBuf>,
    udt: &Option<PathBuf>,
) -> Result<BinaryMatroid, CliError> {
    match (matrix, graph, udt) {
        (Some(p), None, None) => Ok(BinaryMatroid::from_gf2m(&read_input(p)?)?),
        (None, Some(p), None) => {
            let g = WeightedGraph::from_wgr(&read_input(p)?)?;
            Ok(g.graphic_matroid()?)
        }
        (None, None, Some(p)) => {
            let tree = Udt::from_udt(&read_input(p)?, p.parent())?;
            Ok(tree.evaluate()?)
        }
        _ => Err(CliError::Parse(
            "provide exactly one of --matrix, --graph or --udt".into(),
        )),
    }
}

fn circuit_rows(kind: &str, circuits: &[Circuit], weight: impl Fn(&Circuit) -> u64) -> Vec<Row> {
    circuits
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Row::new()
                .push("kind", kind)
                .push("index", i)
                .push("size", c.len())
                .push("weight", weight(c))
                .push("elements", join_labels(c.elements()))
        })
        .collect()
}

fn cmd_circuits(
    config: &RunConfig,
    matrix: &Option<PathBuf>,
    graph: &Option<PathBuf>,
    udt: &Option<PathBuf>,
    max_size: Option<u64>,
    required: &[u32],
    forbidden: &[u32],
) -> Result<Report, CliError> {
    let m = load_matroid(matrix, graph, udt)?;
    let q = CircuitQuery {
        weights: None,
        weight_cap: max_size.map(|c| c as u128),
        required: labels_of(required),
        forbidden: labels_of(forbidden),
    };
    let circuits = m.enumerate_circuits(&q, config.caps.max_m)?;
    let rows = circuit_rows("circuit", &circuits, |c| c.len() as u64);
    Ok(Report {
        rows,
        command: "circuits".into(),
        elapsed_ms: 0,
    })
}

fn cmd_cycles(
    config: &RunConfig,
    graph: &Path,
    r_labels: &[u32],
    cap: Option<u64>,
) -> Result<Report, CliError> {
    let _ = config;
    let g = WeightedGraph::from_wgr(&read_input(graph)?)?;
    let cycles = g.enumerate_cycles(&CycleQuery {
        required: labels_of(r_labels),
        weight_cap: cap.map(|c| c as u128),
    })?;
    let weight = |c: &Circuit| -> u64 {
        g.edges()
            .iter()
            .filter(|e| c.contains(e.label))
            .map(|e| e.weight)
            .sum()
    };
    let rows = circuit_rows("cycle", &cycles, weight);
    Ok(Report {
        rows,
        command: "cycles".into(),
        elapsed_ms: 0,
    })
}

fn cmd_cuts(
    config: &RunConfig,
    graph: &Path,
    r_labels: &[u32],
    cap: Option<u64>,
) -> Result<Report, CliError> {
    let g = WeightedGraph::from_wgr(&read_input(graph)?)?;
    let cuts = g.enumerate_min_cutsets(&CutQuery {
        required: labels_of(r_labels),
        weight_cap: cap.map(|c| c as u128),
        n_cap: config.caps.max_cut_n,
    })?;
    let weight = |c: &Circuit| -> u64 {
        g.edges()
            .iter()
            .filter(|e| c.contains(e.label))
            .map(|e| e.weight)
            .sum()
    };
    let rows = circuit_rows("cutset", &cuts, weight);
    Ok(Report {
        rows,
        command: "cuts".into(),
        elapsed_ms: 0,
    })
}

fn cmd_smallcut(config: &RunConfig, graph: &Path, r_labels: &[u32]) -> Result<Report, CliError> {
    if !config.alpha.is_integer() {
        return Err(CliError::Cap("smallcut needs an integer alpha".into()));
    }
    let alpha = config.alpha.num() as u32;
    let g = WeightedGraph::from_wgr(&read_input(graph)?)?;
    let required = labels_of(r_labels);
    let mut tallies: BTreeMap<Circuit, u64> = BTreeMap::new();
    for i in 0..config.trials {
        let cut = small_cut(&g, &required, alpha, config.seed + i)?;
        *tallies.entry(cut).or_insert(0) += 1;
    }
    let rows = tallies
        .iter()
        .map(|(cut, count)| {
            let valid = g.is_minimal_cutset(cut.elements()).unwrap_or(false)
                && required.iter().all(|l| cut.contains(*l));
            Row::new()
                .push("elements", join_labels(cut.elements()))
                .push("count", count)
                .push(
                    "frequency",
                    format!("{:.6}", *count as f64 / config.trials as f64),
                )
                .push("valid", valid)
        })
        .collect();
    Ok(Report {
        rows,
        command: "smallcut".into(),
        elapsed_ms: 0,
    })
}

/// Oracle agreement for a tree enumeration: `true`/`false` when checkable,
/// `untested` above the cap.
fn oracle_match(
    udt: &Udt,
    got: &[Circuit],
    r: u64,
    alpha: Alpha,
    caps: &OracleCaps,
) -> Result<String, CliError> {
    let composed = udt.evaluate()?;
    if composed.m() > caps.max_m {
        return Ok("untested".into());
    }
    let expect: Vec<Circuit> = composed
        .enumerate_circuits(&CircuitQuery::default(), caps.max_m)?
        .into_iter()
        .filter(|c| alpha.ge_times(c.len() as u64, r))
        .collect();
    Ok(if got == expect {
        "true".into()
    } else {
        "false".into()
    })
}

fn cmd_near_min(
    config: &RunConfig,
    udt_path: &Path,
    emit_circuits: bool,
) -> Result<Report, CliError> {
    let udt = Udt::from_udt(&read_input(udt_path)?, udt_path.parent())?;
    let r = config
        .r
        .ok_or_else(|| CliError::Cap("near-min needs --r (promised girth lower bound)".into()))?;
    let circuits = match enumerate_near_min_circuits(&udt, r, config.alpha, &config.caps) {
        Ok(cs) => cs,
        Err(DecompError::GirthViolation { witness }) => {
            eprintln!("girth violation witness: {witness}");
            return Err(DecompError::GirthViolation { witness }.into());
        }
        Err(other) => return Err(other.into()),
    };
    if emit_circuits {
        let rows = circuit_rows("circuit", &circuits, |c| c.len() as u64);
        return Ok(Report {
            rows,
            command: "near-min".into(),
            elapsed_ms: 0,
        });
    }
    let rep = bound_report(&udt, r, config.alpha, &config.caps)?;
    let matched = if config.verify_oracle {
        oracle_match(&udt, &circuits, r, config.alpha, &config.caps)?
    } else {
        "untested".to_string()
    };
    if matched == "false" {
        return Err(CliError::Internal(
            "enumerator disagrees with the oracle".into(),
        ));
    }
    let row = bound_report_row(&rep).push("oracle_match", &matched);
    Ok(Report {
        rows: vec![row],
        command: "near-min".into(),
        elapsed_ms: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_lattice(
    config: &RunConfig,
    matrix: &Path,
    check_tu: bool,
    require_tu: bool,
    circuits: bool,
    norm2_cap: Option<u64>,
    shortvec: bool,
    lambda2: Option<u64>,
    decompose: Option<&str>,
) -> Result<Report, CliError> {
    let a = TuMatrix::from_tum(&read_input(matrix)?)?;
    let mut rows: Vec<Row> = Vec::new();
    let record = |record: &str, index: usize, norm2: u64, data: String| {
        Row::new()
            .push("record", record)
            .push("index", index)
            .push("norm2", norm2)
            .push("data", data)
    };
    if check_tu || require_tu {
        let witness = a.tu_witness(config.caps.max_tu)?;
        match &witness {
            None => rows.push(record("tu", 0, 0, "true".into())),
            Some(w) => {
                if require_tu {
                    return Err(CliError::Tu(format!(
                        "minor rows {:?} cols {:?} has determinant {}",
                        w.rows, w.cols, w.det
                    )));
                }
                rows.push(record("tu", 0, 0, "false".into()));
                eprintln!(
                    "non-unimodular minor: rows {:?} cols {:?} det {}",
                    w.rows, w.cols, w.det
                );
            }
        }
    }
    if circuits {
        let cs = a.matrix_circuits(norm2_cap, config.caps.max_m)?;
        for (i, c) in cs.iter().enumerate() {
            rows.push(record(
                "circuit",
                i,
                c.vector.norm2(),
                join_coords(&c.vector),
            ));
        }
    }
    if shortvec {
        let lambda2 = lambda2.ok_or_else(|| {
            CliError::Cap("shortvec needs --lambda2 (promised squared length)".into())
        })?;
        let vecs = enumerate_short_vectors(&a, lambda2, config.alpha, config.caps.max_m)?;
        if config.verify_oracle {
            let cap = (config.alpha.num() * config.alpha.num() * lambda2)
                / (config.alpha.den() * config.alpha.den());
            let expect = short_vectors_box_oracle(&a, cap)?;
            if vecs != expect {
                return Err(CliError::Internal(
                    "short-vector enumeration disagrees with the box oracle".into(),
                ));
            }
        }
        for (i, v) in vecs.iter().enumerate() {
            rows.push(record("vector", i, v.norm2(), join_coords(v)));
        }
    }
    if let Some(spec) = decompose {
        let coords: Result<Vec<i64>, _> =
            spec.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let v = LatticeVector(coords.map_err(|e| CliError::Parse(format!("bad vector: {e}")))?);
        let parts = conformal_decompose(&a, &v, config.caps.max_m)?;
        for (i, p) in parts.iter().enumerate() {
            rows.push(record(
                "summand",
                i,
                p.vector.norm2(),
                join_coords(&p.vector),
            ));
        }
    }
    Ok(Report {
        rows,
        command: "lattice".into(),
        elapsed_ms: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    config: &RunConfig,
    kind: GenKind,
    out: &Path,
    leaves: usize,
    leaf_range: (usize, usize),
    types: &[String],
    max_m: Option<usize>,
    n: usize,
    m: usize,
    max_weight: u64,
) -> Result<Report, CliError> {
    let text = match kind {
        GenKind::Udt => {
            let leaf_types: Result<Vec<LeafKind>, CliError> = types
                .iter()
                .map(|t| {
                    LeafKind::from_name(t)
                        .ok_or_else(|| CliError::Parse(format!("unknown leaf type {t:?}")))
                })
                .collect();
            let params = RandomUdtParams {
                leaf_count: leaves,
                leaf_size_range: leaf_range,
                leaf_types: leaf_types?,
                seed: config.seed,
                max_total_m: max_m,
            };
            random_udt(&params)?.to_udt()
        }
        GenKind::Wgr => {
            if n < 3 || m < n {
                return Err(CliError::Cap(
                    "wgr generation needs n >= 3 and m >= n".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut edges = Vec::with_capacity(m);
            for v in 0..n {
                edges.push(circuit_forge_core::GraphEdge {
                    u: v,
                    v: (v + 1) % n,
                    label: Label(v as u32),
                    weight: rng.gen_range(1..=max_weight.max(1)),
                });
            }
            let mut next = n as u32;
            while edges.len() < m {
                let a = rng.gen_range(0..n as u64) as usize;
                let b = rng.gen_range(0..n as u64) as usize;
                if a == b {
                    continue;
                }
                edges.push(circuit_forge_core::GraphEdge {
                    u: a.min(b),
                    v: a.max(b),
                    label: Label(next),
                    weight: rng.gen_range(1..=max_weight.max(1)),
                });
                next += 1;
            }
            WeightedGraph::new(n, edges)
                .map_err(|e| CliError::Generation(e.to_string()))?
                .to_wgr()
        }
        GenKind::Gf2m => {
            if n > 64 {
                return Err(CliError::Cap("gf2m generation caps height at 64".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let pairs: Vec<(Label, u64)> = (0..m as u32)
                .map(|i| (Label(i), rng.gen_range(0..=mask)))
                .collect();
            BinaryMatroid::new(n, pairs)
                .map_err(|e| CliError::Generation(e.to_string()))?
                .to_gf2m()
        }
    };
    std::fs::write(out, &text)
        .map_err(|e| CliError::Generation(format!("{}: {e}", out.display())))?;
    let rows = vec![Row::new()
        .push("record", "file")
        .push("path", out.display())];
    Ok(Report {
        rows,
        command: "gen".into(),
        elapsed_ms: 0,
    })
}

fn verify_one(
    config: &RunConfig,
    udt: &Udt,
    seed_tag: u64,
    r: u64,
    alpha: Alpha,
    rows: &mut Vec<Row>,
) -> Result<bool, CliError> {
    let rep = bound_report(udt, r, alpha, &config.caps)?;
    let circuits = enumerate_near_min_circuits(udt, r, alpha, &config.caps)?;
    let matched = oracle_match(udt, &circuits, r, alpha, &config.caps)?;
    let ok = rep.pass && matched != "false";
    rows.push(
        Row::new()
            .push("instance", seed_tag)
            .push("m", rep.m)
            .push("r", rep.r)
            .push("alpha", rep.alpha)
            .push("circuits_observed", rep.circuits_observed)
            .push("signatures_observed", rep.signatures_observed)
            .push("bound_9m", &rep.bound_9m)
            .push("bound_class", &rep.bound_class)
            .push("pass", rep.pass)
            .push("oracle_match", &matched),
    );
    Ok(ok)
}

fn cmd_verify_bounds(
    config: &RunConfig,
    udt_path: Option<&Path>,
    instances: u64,
    alphas: &[String],
    leaves_min: usize,
    leaves_max: usize,
    max_m: usize,
) -> Result<Report, CliError> {
    let alphas: Result<Vec<Alpha>, CliError> = alphas
        .iter()
        .map(|s| s.parse::<Alpha>().map_err(CliError::Parse))
        .collect();
    let alphas = alphas?;
    let mut rows: Vec<Row> = Vec::new();
    let mut all_ok = true;
    if let Some(path) = udt_path {
        let udt = Udt::from_udt(&read_input(path)?, path.parent())?;
        let composed = udt.evaluate()?;
        let girth = composed
            .girth(config.caps.max_m)?
            .ok_or_else(|| CliError::Cap("tree matroid has no circuits".into()))?;
        let r = config.r.unwrap_or(girth as u64 - 1);
        for &alpha in &alphas {
            all_ok &= verify_one(config, &udt, config.seed, r, alpha, &mut rows)?;
        }
    } else {
        let mut produced = 0u64;
        let mut seed = config.seed;
        let mut leaves = leaves_min.max(1);
        while produced < instances {
            let params = RandomUdtParams {
                leaf_count: leaves,
                leaf_size_range: (3, 8),
                leaf_types: vec![
                    LeafKind::Graphic,
                    LeafKind::Cographic,
                    LeafKind::R10,
                    LeafKind::F7,
                ],
                seed,
                max_total_m: Some(max_m),
            };
            leaves = if leaves >= leaves_max {
                leaves_min.max(1)
            } else {
                leaves + 1
            };
            let tag = seed;
            seed += 1;
            let udt = match random_udt(&params) {
                Ok(u) => u,
                Err(_) => continue,
            };
            let composed = udt.evaluate()?;
            let girth = match composed.girth(config.caps.max_m)? {
                Some(g) if g >= 2 => g as u64,
                _ => continue,
            };
            produced += 1;
            for &alpha in &alphas {
                all_ok &= verify_one(config, &udt, tag, girth - 1, alpha, &mut rows)?;
            }
        }
    }
    if !all_ok {
        let report = Report {
            rows,
            command: "verify-bounds".into(),
            elapsed_ms: 0,
        };
        report.emit(config.format);
        return Err(CliError::Internal(
            "at least one bound or oracle check failed".into(),
        ));
    }
    Ok(Report {
        rows,
        command: "verify-bounds".into(),
        elapsed_ms: 0,
    })
}
