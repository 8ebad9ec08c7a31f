//! Unified command-line front end.
//!
//! Exit codes: 0 success / positive verdict, 1 negative verdict,
//! 2 bound or scope diagnostic, 3 input error.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use artin::aut::{self, ArtinMap};
use artin::classify;
use artin::deligne::{self, BallConfig, BallHeader, ComplexBall};
use artin::dihedral::{self, DihedralGroup};
use artin::graph::DefiningGraph;
use artin::hexagon;
use artin::oracle::{Oracle, OracleError};
use artin::reconstruct;
use artin::word::Word;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_DIAGNOSTIC: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "artin", version, about = "Large-type Artin group toolkit")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Defining-graph utilities.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Dihedral Artin group computations.
    Dihedral {
        #[command(subcommand)]
        cmd: DihedralCmd,
    },
    /// Word problem oracle queries.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Deligne complex balls and curvature audits.
    Deligne {
        #[command(subcommand)]
        cmd: DeligneCmd,
    },
    /// Arrow systems on principal triangles.
    Hexagon {
        #[command(subcommand)]
        cmd: HexagonCmd,
    },
    /// Dihedral subgroup classification.
    Classify {
        #[command(subcommand)]
        cmd: ClassifyCmd,
    },
    /// Algebraic reconstruction of the complex.
    Reconstruct(ReconstructArgs),
    /// Automorphism and isomorphism machinery.
    Aut {
        #[command(subcommand)]
        cmd: AutCmd,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Validate a graph file and report its predicates.
    Check {
        #[arg(long)]
        graph: String,
    },
    /// Search for a labelled isomorphism between two graphs.
    Iso {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Enumerate label-preserving automorphisms.
    Auts {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Subcommand)]
enum DihedralCmd {
    /// Garside normal form of a word over {s, t}.
    Nf {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        word: String,
    },
    /// Trivial alternating 2m-syllable exponent tuples, as JSON lines.
    TrivialTuples {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Decide equality of two words. Exit 0 equal, 1 not, 2 cap exceeded.
    Equal {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DeligneCmd {
    /// Build a ball and write its JSON export.
    Build {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 6)]
        length_bound: u32,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        cap: Option<usize>,
        /// Re-verify coset deduplication after the build.
        #[arg(long)]
        verify: bool,
    },
    /// Gauss-Bonnet audit of a disk region (copy ids) of a ball.
    Audit {
        /// Ball export; the ball is rebuilt deterministically from its
        /// embedded graph and configuration.
        #[arg(long)]
        ball: String,
        /// Comma-separated copy ids forming the region.
        #[arg(long)]
        region: String,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum HexagonCmd {
    /// Classify the principal hexagons around a type-2 vertex.
    Classify {
        #[arg(long)]
        ball: String,
        /// Coset representative of the vertex.
        #[arg(long)]
        vertex: String,
        /// The vertex pair, e.g. "a,b".
        #[arg(long)]
        pair: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Complete a partial arrow system over a ball patch.
    Complete {
        #[arg(long)]
        ball: String,
        /// JSON file: [{"from": word, "to": word, "kind": "single"|"double"}].
        #[arg(long)]
        seed_arrows: String,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// Construct the exotic subgroup over a (3,3,3) triple and verify its
    /// defining data.
    Exotic {
        #[arg(long)]
        graph: String,
        /// e.g. "a,b,c"
        #[arg(long)]
        triple: String,
        #[arg(long, default_value = "")]
        conjugator: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Isolated-intersections probe inside a ball.
    Probe {
        #[arg(long)]
        graph: String,
        #[arg(long, value_parser = ["classical", "exotic"])]
        kind: String,
        /// Classical: "a,b".
        #[arg(long)]
        pair: Option<String>,
        /// Exotic: "a,b,c".
        #[arg(long)]
        triple: Option<String>,
        #[arg(long, default_value = "")]
        conjugator: String,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 2)]
        length_bound: u32,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 2)]
    radius: u32,
    #[arg(long, default_value_t = 2)]
    length_bound: u32,
    /// Verify the reconstruction against the geometric ball.
    #[arg(long = "verify-F")]
    verify_f: bool,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum AutCmd {
    /// Outer automorphism group description.
    Out {
        #[arg(long)]
        graph: String,
    },
    /// Isomorphism decision for large-type free-of-infinity graphs.
    DecideIso {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Apply a generator-image map to a word.
    Apply {
        #[arg(long)]
        graph: String,
        /// JSON file {"images": {"a": "word", ...}}.
        #[arg(long)]
        map: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        cap: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn diagnostic(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DIAGNOSTIC,
            message: message.into(),
        }
    }

    fn negative(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NEGATIVE,
            message: message.into(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => Failure::diagnostic(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.format) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn oracle_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("ARTIN_ORACLE_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(artin::oracle::DEFAULT_CLASS_CAP)
}

fn load_graph(path: &str) -> Result<DefiningGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    DefiningGraph::parse_json(&text).map_err(|e| Failure::input(e.to_string()))
}

fn parse_word(graph: &DefiningGraph, text: &str) -> Result<Word, Failure> {
    if text.trim().is_empty() || text.trim() == "1" {
        return Ok(Word::empty());
    }
    Word::parse(graph, text).map_err(|e| Failure::input(e.to_string()))
}

fn parse_names(graph: &DefiningGraph, csv: &str) -> Result<Vec<usize>, Failure> {
    csv.split(',')
        .map(|name| {
            graph
                .index_of(name.trim())
                .map_err(|e| Failure::input(e.to_string()))
        })
        .collect()
}

fn make_oracle(graph: &DefiningGraph, cap: Option<usize>) -> Result<Oracle, Failure> {
    let cap = oracle_cap(cap);
    if cap < 10_000 {
        return Err(Failure::input(format!(
            "oracle cap {cap} is below the minimum of 10000"
        )));
    }
    Oracle::with_cap(graph.clone(), cap).map_err(|e| Failure::diagnostic(e.to_string()))
}

fn rebuild_ball(path: &str, cap: Option<usize>) -> Result<(Oracle, ComplexBall), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    let header: BallHeader =
        serde_json::from_str(&text).map_err(|e| Failure::input(e.to_string()))?;
    let vertices: Vec<&str> = header.graph_vertices.iter().map(|s| s.as_str()).collect();
    let edges: Vec<(&str, &str, u32)> = header
        .graph_edges
        .iter()
        .map(|(a, b, m)| (a.as_str(), b.as_str(), *m))
        .collect();
    let graph = DefiningGraph::new(vertices, edges).map_err(|e| Failure::input(e.to_string()))?;
    let oracle = make_oracle(&graph, cap)?;
    let ball = deligne::build_ball(&graph, &oracle, header.config)
        .map_err(|e| Failure::diagnostic(e.to_string()))?;
    Ok((oracle, ball))
}

fn emit(format: Format, report: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Text => print_text(report, 0),
    }
}

fn print_text(value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_text(v, indent + 1);
                    }
                    other => println!("{pad}{k}: {other}"),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => print_text(item, indent),
                    other => println!("{pad}- {other}"),
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}

fn run(command: Command, format: Format) -> Result<(), Failure> {
    match command {
        Command::Graph { cmd } => run_graph(cmd, format),
        Command::Dihedral { cmd } => run_dihedral(cmd, format),
        Command::Oracle { cmd } => run_oracle(cmd, format),
        Command::Deligne { cmd } => run_deligne(cmd, format),
        Command::Hexagon { cmd } => run_hexagon(cmd, format),
        Command::Classify { cmd } => run_classify(cmd, format),
        Command::Reconstruct(args) => run_reconstruct(args, format),
        Command::Aut { cmd } => run_aut(cmd, format),
    }
}

fn run_graph(cmd: GraphCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        GraphCmd::Check { graph } => {
            let g = load_graph(&graph)?;
            let report = json!({
                "config": {"graph": graph},
                "rank": g.rank(),
                "edges": g.edge_count(),
                "connected": g.is_connected(),
                "large_type": g.is_large_type(),
                "free_of_infinity": g.is_free_of_infinity(),
                "hyperbolic_type": g.is_hyperbolic_type().ok(),
            });
            emit(format, &report);
            Ok(())
        }
        GraphCmd::Iso { g1, g2 } => {
            let a = load_graph(&g1)?;
            let b = load_graph(&g2)?;
            match a.labelled_isomorphism(&b) {
                Some(iso) => {
                    let mapping: BTreeMap<&str, &str> = (0..a.rank())
                        .map(|i| (a.name(i), b.name(iso.apply(i))))
                        .collect();
                    emit(
                        format,
                        &json!({"config": {"g1": g1, "g2": g2}, "isomorphic": true, "witness": mapping}),
                    );
                    Ok(())
                }
                None => {
                    emit(
                        format,
                        &json!({"config": {"g1": g1, "g2": g2}, "isomorphic": false}),
                    );
                    Err(Failure::negative("graphs are not isomorphic"))
                }
            }
        }
        GraphCmd::Auts { graph } => {
            let g = load_graph(&graph)?;
            let auts: Vec<BTreeMap<&str, &str>> = g
                .automorphisms()
                .iter()
                .map(|iso| {
                    (0..g.rank())
                        .map(|i| (g.name(i), g.name(iso.apply(i))))
                        .collect()
                })
                .collect();
            emit(
                format,
                &json!({"config": {"graph": graph}, "count": auts.len(), "automorphisms": auts}),
            );
            Ok(())
        }
    }
}

fn run_dihedral(cmd: DihedralCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        DihedralCmd::Nf { m, word } => {
            let graph = DefiningGraph::new(vec!["s", "t"], vec![("s", "t", m.max(2))])
                .map_err(|e| Failure::input(e.to_string()))?;
            let group =
                DihedralGroup::new(0, 1, m).map_err(|e| Failure::input(e.to_string()))?;
            let w = parse_word(&graph, &word)?;
            let nf = group
                .normal_form(&w)
                .map_err(|e| Failure::input(e.to_string()))?;
            let report = json!({
                "config": {"m": m, "word": word},
                "delta_power": nf.delta_power,
                "tail": nf.tail.iter()
                    .map(|&s| group.simple_word(s).display(&graph))
                    .collect::<Vec<_>>(),
                "display": group.display_normal_form(&nf, ("s", "t")),
                "trivial": nf.is_identity(),
            });
            emit(format, &report);
            Ok(())
        }
        DihedralCmd::TrivialTuples { m, bound } => {
            let tuples = dihedral::trivial_2m_syllable_tuples(m, bound).map_err(|e| {
                match e {
                    dihedral::DihedralError::SweepTooLarge(_, _) => {
                        Failure::diagnostic(e.to_string())
                    }
                    _ => Failure::input(e.to_string()),
                }
            })?;
            for tuple in &tuples {
                println!("{}", serde_json::to_string(tuple).unwrap());
            }
            Ok(())
        }
    }
}

fn run_oracle(cmd: OracleCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        OracleCmd::Equal { graph, u, v, cap } => {
            let g = load_graph(&graph)?;
            let oracle = make_oracle(&g, cap)?;
            let wu = parse_word(&g, &u)?;
            let wv = parse_word(&g, &v)?;
            let equal = oracle.are_equal(&wu, &wv).map_err(Failure::from)?;
            emit(
                format,
                &json!({"config": {"graph": graph, "u": u, "v": v, "cap": oracle.cap()}, "equal": equal}),
            );
            if equal {
                Ok(())
            } else {
                Err(Failure::negative("words are not equal"))
            }
        }
    }
}

fn run_deligne(cmd: DeligneCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        DeligneCmd::Build {
            graph,
            radius,
            length_bound,
            out,
            cap,
            verify,
        } => {
            if radius < 1 || length_bound < 1 {
                return Err(Failure::input("radius and length bound must be >= 1"));
            }
            let g = load_graph(&graph)?;
            let oracle = make_oracle(&g, cap)?;
            let ball = deligne::build_ball(
                &g,
                &oracle,
                BallConfig {
                    radius,
                    length_bound,
                },
            )
            .map_err(|e| Failure::diagnostic(e.to_string()))?;
            if verify {
                ball.verify_dedup(&oracle)
                    .map_err(|e| Failure::diagnostic(e.to_string()))?;
            }
            let export = ball.export();
            let text = serde_json::to_string_pretty(&export).unwrap();
            if let Some(path) = &out {
                fs::write(path, &text)
                    .map_err(|e| Failure::input(format!("cannot write {path}: {e}")))?;
            }
            let summary = json!({
                "config": {"graph": graph, "radius": radius, "length_bound": length_bound},
                "copies": ball.copies().len(),
                "type1_vertices": ball.v1_vertices().len(),
                "type2_vertices": ball.v2_vertices().len(),
                "triangles": ball.triangles().len(),
                "out": out,
            });
            emit(format, &summary);
            Ok(())
        }
        DeligneCmd::Audit { ball, region, cap } => {
            let (_, complex_ball) = rebuild_ball(&ball, cap)?;
            let ids: Vec<usize> = region
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Failure::input(format!("bad copy id `{s}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let report = deligne::gauss_bonnet_audit(&complex_ball, &ids)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let total_ok = report.total.num == 2 && report.total.den == 1;
            emit(
                format,
                &json!({
                    "config": {"ball": ball, "region": ids},
                    "faces": report.faces.iter()
                        .map(|(c, r)| json!({"copy": c, "curvature_pi": [r.num, r.den]}))
                        .collect::<Vec<_>>(),
                    "vertices": report.vertices.iter()
                        .map(|(v, interior, r)| json!({
                            "vertex": v, "interior": interior,
                            "curvature_pi": [r.num, r.den]
                        }))
                        .collect::<Vec<_>>(),
                    "total_pi": [report.total.num, report.total.den],
                    "total_is_two_pi": total_ok,
                }),
            );
            if total_ok {
                Ok(())
            } else {
                Err(Failure::negative("curvature total differs from 2π"))
            }
        }
    }
}

fn run_hexagon(cmd: HexagonCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        HexagonCmd::Classify {
            ball,
            vertex,
            pair,
            cap,
        } => {
            let (oracle, complex_ball) = rebuild_ball(&ball, cap)?;
            let g = complex_ball.graph().clone();
            let pair_idx = parse_names(&g, &pair)?;
            if pair_idx.len() != 2 {
                return Err(Failure::input("--pair needs two generators"));
            }
            let rep = parse_word(&g, &vertex)?;
            let (i, j) = (pair_idx[0].min(pair_idx[1]), pair_idx[0].max(pair_idx[1]));
            let e_idx = complex_ball
                .edge_index(i, j)
                .ok_or_else(|| Failure::input("pair is not spherical"))?;
            // Locate the type-2 vertex of that coset.
            let copy = complex_ball
                .copy_id_of(&rep, &oracle)
                .map_err(Failure::from)?;
            let v2_id = match copy {
                Some(c) => complex_ball.v2_id(c, e_idx),
                None => {
                    return Err(Failure::diagnostic(
                        "vertex representative outside the ball",
                    ))
                }
            };
            let arrows = hexagon::derive_arrows(&complex_ball, &oracle, None)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let hexagons = hexagon::harvest_hexagons(&complex_ball, v2_id)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let mut any_invalid = false;
            let mut items = Vec::new();
            for h in &hexagons {
                let pattern = hexagon::classify_hexagon(h, &arrows)
                    .map_err(|e| Failure::diagnostic(e.to_string()))?;
                if pattern == hexagon::HexagonPattern::Invalid {
                    any_invalid = true;
                }
                items.push(json!({
                    "copies": h.copies.iter()
                        .map(|&c| complex_ball.copies()[c].element.display(&g))
                        .collect::<Vec<_>>(),
                    "pattern": format!("{pattern:?}"),
                }));
            }
            emit(
                format,
                &json!({
                    "config": {"ball": ball, "vertex": vertex, "pair": pair},
                    "hexagons": items,
                }),
            );
            if any_invalid {
                Err(Failure::negative("an invalid hexagon pattern appeared"))
            } else {
                Ok(())
            }
        }
        HexagonCmd::Complete {
            ball,
            seed_arrows,
            cap,
        } => {
            let (oracle, complex_ball) = rebuild_ball(&ball, cap)?;
            let g = complex_ball.graph().clone();
            let seed_text = fs::read_to_string(&seed_arrows)
                .map_err(|e| Failure::input(format!("cannot read {seed_arrows}: {e}")))?;
            let seeds_json: Vec<Value> =
                serde_json::from_str(&seed_text).map_err(|e| Failure::input(e.to_string()))?;
            let (patch, side_index) = hexagon::patch_from_ball(&complex_ball, None)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let mut seeds = Vec::new();
            for seed in &seeds_json {
                let from = seed["from"].as_str().ok_or_else(|| Failure::input("seed missing `from`"))?;
                let to = seed["to"].as_str().ok_or_else(|| Failure::input("seed missing `to`"))?;
                let kind = seed["kind"].as_str().ok_or_else(|| Failure::input("seed missing `kind`"))?;
                let from_id = complex_ball
                    .copy_id_of(&parse_word(&g, from)?, &oracle)
                    .map_err(Failure::from)?
                    .ok_or_else(|| Failure::input(format!("copy `{from}` not in ball")))?;
                let to_id = complex_ball
                    .copy_id_of(&parse_word(&g, to)?, &oracle)
                    .map_err(Failure::from)?
                    .ok_or_else(|| Failure::input(format!("copy `{to}` not in ball")))?;
                let key = (from_id.min(to_id), from_id.max(to_id));
                let side = *side_index
                    .get(&key)
                    .ok_or_else(|| Failure::input("seed copies do not share a side"))?;
                let value = match kind {
                    "double" => hexagon::SpokeValue::Double,
                    "single" if from_id < to_id => hexagon::SpokeValue::SingleForward,
                    "single" => hexagon::SpokeValue::SingleBackward,
                    other => return Err(Failure::input(format!("bad arrow kind `{other}`"))),
                };
                seeds.push((side, value));
            }
            let outcome = hexagon::complete_strip(&patch, &seeds)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let (tag, detail): (&str, Value) = match &outcome {
                hexagon::CompletionOutcome::Completed(values) => (
                    "completed",
                    json!(values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>()),
                ),
                hexagon::CompletionOutcome::Extended(domains) => (
                    "extended",
                    json!(domains
                        .iter()
                        .map(|d| d.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>())
                        .collect::<Vec<_>>()),
                ),
                hexagon::CompletionOutcome::Contradiction { hexagon } => {
                    ("contradiction", json!({ "hexagon": hexagon }))
                }
            };
            emit(
                format,
                &json!({
                    "config": {"ball": ball, "seed_arrows": seed_arrows},
                    "outcome": tag,
                    "detail": detail,
                }),
            );
            if tag == "contradiction" {
                Err(Failure::negative("arrow system is contradictory"))
            } else {
                Ok(())
            }
        }
    }
}

fn run_classify(cmd: ClassifyCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        ClassifyCmd::Exotic {
            graph,
            triple,
            conjugator,
            cap,
        } => {
            let g = load_graph(&graph)?;
            let idx = parse_names(&g, &triple)?;
            if idx.len() != 3 {
                return Err(Failure::input("--triple needs three generators"));
            }
            let conj = parse_word(&g, &conjugator)?;
            let oracle = make_oracle(&g, cap)?;
            let subgroup = classify::exotic_subgroup(&g, (idx[0], idx[1], idx[2]), conj)
                .map_err(|e| Failure::input(e.to_string()))?;
            let relation = classify::verify_a4_relation(&subgroup, &oracle)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let witness = subgroup.centre_witness();
            let checks = classify::centraliser_presentation_checks(
                &g,
                (idx[0], idx[1], idx[2]),
                &oracle,
                6,
            )
            .map_err(|e| Failure::diagnostic(e.to_string()))?;
            emit(
                format,
                &json!({
                    "config": {"graph": graph, "triple": triple, "conjugator": conjugator},
                    "kind": "exotic",
                    "coefficient": subgroup.coefficient,
                    "generator_s": subgroup.gen_s.display(&g),
                    "generator_t": subgroup.gen_t.display(&g),
                    "centre": witness.z.display(&g),
                    "m_prime": witness.m_prime,
                    "a4_relation_holds": relation,
                    "centraliser_checks": {
                        "square_is_centre": checks.square_is_centre,
                        "tree_generator_commutes": checks.tree_generator_commutes,
                        "powers_escape": checks.power_escapes,
                    },
                }),
            );
            if relation {
                Ok(())
            } else {
                Err(Failure::negative("A4 relation failed"))
            }
        }
        ClassifyCmd::Probe {
            graph,
            kind,
            pair,
            triple,
            conjugator,
            radius,
            length_bound,
            cap,
        } => {
            let g = load_graph(&graph)?;
            let oracle = make_oracle(&g, cap)?;
            let conj = parse_word(&g, &conjugator)?;
            let subgroup = match kind.as_str() {
                "classical" => {
                    let p = pair.ok_or_else(|| Failure::input("--pair required"))?;
                    let idx = parse_names(&g, &p)?;
                    if idx.len() != 2 {
                        return Err(Failure::input("--pair needs two generators"));
                    }
                    classify::DihedralSubgroup::classical(&g, (idx[0], idx[1]), conj)
                        .map_err(|e| Failure::input(e.to_string()))?
                }
                _ => {
                    let t = triple.ok_or_else(|| Failure::input("--triple required"))?;
                    let idx = parse_names(&g, &t)?;
                    if idx.len() != 3 {
                        return Err(Failure::input("--triple needs three generators"));
                    }
                    classify::exotic_subgroup(&g, (idx[0], idx[1], idx[2]), conj)
                        .map_err(|e| Failure::input(e.to_string()))?
                }
            };
            let ball = deligne::build_ball(
                &g,
                &oracle,
                BallConfig {
                    radius,
                    length_bound,
                },
            )
            .map_err(|e| Failure::diagnostic(e.to_string()))?;
            let report = classify::isolated_intersections_probe(&subgroup, &ball, &oracle)
                .map_err(|e| Failure::diagnostic(e.to_string()))?;
            emit(
                format,
                &json!({
                    "config": {
                        "graph": graph, "kind": kind, "radius": radius,
                        "length_bound": length_bound,
                    },
                    "verdict": serde_json::to_value(&report.verdict).unwrap(),
                }),
            );
            Ok(())
        }
    }
}

fn run_reconstruct(args: ReconstructArgs, format: Format) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    let oracle = make_oracle(&g, args.cap)?;
    let ball = deligne::build_ball(
        &g,
        &oracle,
        BallConfig {
            radius: args.radius,
            length_bound: args.length_bound,
        },
    )
    .map_err(|e| Failure::diagnostic(e.to_string()))?;
    let d1 = reconstruct::build_d1(&ball, &oracle)
        .map_err(|e| Failure::diagnostic(e.to_string()))?;
    let subgraphs = reconstruct::characteristic_subgraphs(&d1, &g);
    let f1 = if args.verify_f {
        Some(
            reconstruct::verify_f1(&ball, &d1)
                .map_err(|e| Failure::diagnostic(e.to_string()))?,
        )
    } else {
        None
    };
    let complex = reconstruct::build_algebraic_complex(d1, subgraphs);
    let f = if args.verify_f {
        Some(
            reconstruct::verify_f(&ball, &complex)
                .map_err(|e| Failure::diagnostic(e.to_string()))?,
        )
    } else {
        None
    };

    let handles: Vec<Value> = complex
        .d1
        .data
        .handles
        .iter()
        .map(|h| {
            json!({
                "rep": h.rep.display(&g),
                "pair": [g.name(h.pair.0), g.name(h.pair.1)],
                "certified": h.certified,
            })
        })
        .collect();
    let nodes: Vec<Value> = complex
        .d1
        .nodes
        .iter()
        .map(|n| {
            json!({
                "handles": n.handles.iter().collect::<Vec<_>>(),
                "parabolic": complex.d1.data.parabolics[n.common_parabolic].word.display(&g),
                "sweep_size": n.sweep_size,
            })
        })
        .collect();
    let report = json!({
        "config": {
            "graph": args.graph, "radius": args.radius,
            "length_bound": args.length_bound, "cap": oracle.cap(),
        },
        "handles": handles,
        "nodes": nodes,
        "edges": complex.d1.edges,
        "characteristic_subgraphs": complex.subgraphs.iter().map(|sg| {
            json!({"handles": sg.handles, "nodes": sg.nodes})
        }).collect::<Vec<_>>(),
        "simplices": complex.simplices,
        "f1_check": f1.as_ref().map(|r| json!({
            "holds": r.holds,
            "certified_v1": r.certified_v1,
            "certified_v2": r.certified_v2,
            "matched_nodes": r.matched_nodes,
            "matched_edges": r.matched_edges,
        })),
        "f_check": f.as_ref().map(|r| json!({
            "holds": r.holds,
            "certified_copies": r.certified_copies,
            "matched_subgraphs": r.matched_subgraphs,
            "matched_simplices": r.matched_simplices,
        })),
    });
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&report).unwrap())
            .map_err(|e| Failure::input(format!("cannot write {path}: {e}")))?;
    }
    emit(format, &report);
    let verified_ok = f1.map(|r| r.holds).unwrap_or(true) && f.map(|r| r.holds).unwrap_or(true);
    if verified_ok {
        Ok(())
    } else {
        Err(Failure::negative("reconstruction verification failed"))
    }
}

fn run_aut(cmd: AutCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        AutCmd::Out { graph } => {
            let g = load_graph(&graph)?;
            let out = aut::out_group(&g).map_err(|e| Failure::diagnostic(e.to_string()))?;
            emit(
                format,
                &json!({
                    "config": {"graph": graph},
                    "order": out.order,
                    "graph_automorphisms": out.graph_auts.len(),
                    "elements": out.elements.iter().map(|(idx, inv)| {
                        json!({"graph_aut": idx, "inversion": inv})
                    }).collect::<Vec<_>>(),
                }),
            );
            Ok(())
        }
        AutCmd::DecideIso { g1, g2 } => {
            let a = load_graph(&g1)?;
            let b = load_graph(&g2)?;
            match aut::decide_isomorphic(&a, &b) {
                Ok(Some(iso)) => {
                    let mapping: BTreeMap<&str, &str> = (0..a.rank())
                        .map(|i| (a.name(i), b.name(iso.apply(i))))
                        .collect();
                    emit(
                        format,
                        &json!({"config": {"g1": g1, "g2": g2}, "isomorphic": true, "witness": mapping}),
                    );
                    Ok(())
                }
                Ok(None) => {
                    emit(
                        format,
                        &json!({"config": {"g1": g1, "g2": g2}, "isomorphic": false}),
                    );
                    Err(Failure::negative("groups are not isomorphic"))
                }
                Err(e) => Err(Failure::diagnostic(e.to_string())),
            }
        }
        AutCmd::Apply {
            graph,
            map,
            word,
            cap,
        } => {
            let g = load_graph(&graph)?;
            let map_text = fs::read_to_string(&map)
                .map_err(|e| Failure::input(format!("cannot read {map}: {e}")))?;
            let map_json: Value =
                serde_json::from_str(&map_text).map_err(|e| Failure::input(e.to_string()))?;
            let images_obj = map_json["images"]
                .as_object()
                .ok_or_else(|| Failure::input("map file needs an `images` object"))?;
            let mut images = Vec::with_capacity(g.rank());
            for i in 0..g.rank() {
                let image_text = images_obj
                    .get(g.name(i))
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| {
                        Failure::input(format!("missing image for generator `{}`", g.name(i)))
                    })?;
                images.push(parse_word(&g, image_text)?);
            }
            let artin_map = ArtinMap::new(g.clone(), g.clone(), images)
                .map_err(|e| Failure::input(e.to_string()))?;
            let oracle = make_oracle(&g, cap)?;
            if let Err(e) = artin_map.validate_relations(&oracle) {
                return Err(Failure::negative(format!("map is not a homomorphism: {e}")));
            }
            let w = parse_word(&g, &word)?;
            let image = artin_map.apply(&w);
            let canonical = oracle.shortlex_geodesic(&image).map_err(Failure::from)?;
            emit(
                format,
                &json!({
                    "config": {"graph": graph, "map": map, "word": word},
                    "image": image.display(&g),
                    "canonical": canonical.display(&g),
                }),
            );
            Ok(())
        }
    }
}
