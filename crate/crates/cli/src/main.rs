use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stree_core::ballgraphs::{build_gn, build_indexed, detect_cycle, lemma_failures, GraphError, Side};
use stree_core::balls::{profile_of, Analysis, BallsError};
use stree_core::eig::{parse_eig, segment_embedding, serialize_eig, to_dot, validate_graph, Graph};
use stree_core::induction::{
    agreement_index, beta_of_vertex, boundedness_of, sequence_from_trace, trace_of, InductionError,
};
use stree_core::synthesis::{build_prefix, letters_to_string, validate_alpha_i, validate_beta, AdmissibleSequence, SynthesisError};
use stree_core::words::{
    cf_induction, mechanical_word, parse_number, required_length, word_rauzy_graph, word_string, Rounding, Surd,
    WordError,
};

const SCHEMA: &str = "stree/1";

#[derive(Parser)]
#[command(name = "stree", about = "Sturmian colorings of regular trees: analysis, synthesis and word tools")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Plain,
    A,
    B,
}

#[derive(Subcommand)]
enum Cmd {
    /// Complexity, special chain, ball graphs and induction trace of a quotient prefix.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        /// Write the full report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write G_n, G^A_n, G^B_n as DOT files into this directory.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a quotient prefix from an admissible sequence.
    Synthesize {
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Embedding maps of every F^{beta_k}_k into the output.
        #[arg(long)]
        maps: Option<PathBuf>,
    },
    /// Sequence -> graph -> sequence, or graph -> sequence -> graph.
    Roundtrip {
        #[arg(long, conflicts_with = "input")]
        seq: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        /// Levels analyzed when starting from a graph.
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sturmian words from a slope or from partial quotients.
    Word {
        /// Partial quotients a_1,a_2,...
        #[arg(long, value_delimiter = ',')]
        cf: Option<Vec<u32>>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        ceil: bool,
        /// Print the Rauzy graph of this order as DOT instead of the word.
        #[arg(long)]
        rauzy: Option<usize>,
    },
    /// DOT for a graph, or for one of its ball graphs.
    ExportDot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        level: Option<isize>,
        #[arg(long, value_enum, default_value_t = SideArg::Plain)]
        side: SideArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and check degree conditions.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Failure with the exit code it maps to.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn input(msg: impl Into<String>) -> Fail {
        Fail { code: 1, msg: msg.into() }
    }
    fn structure(msg: impl Into<String>) -> Fail {
        Fail { code: 2, msg: msg.into() }
    }
    fn horizon(msg: impl Into<String>) -> Fail {
        Fail { code: 3, msg: msg.into() }
    }
}

impl From<BallsError> for Fail {
    fn from(e: BallsError) -> Fail {
        match e {
            BallsError::NotSturmian { .. } | BallsError::AmbiguousAssignment(_) => Fail::structure(e.to_string()),
            BallsError::UnknownVertex(_) => Fail::input(e.to_string()),
            _ => Fail::horizon(e.to_string()),
        }
    }
}

impl From<GraphError> for Fail {
    fn from(e: GraphError) -> Fail {
        match e {
            GraphError::Balls(b) => b.into(),
            GraphError::IllDefined { .. } => Fail::structure(e.to_string()),
            GraphError::NoRepresentative { .. } => Fail::horizon(e.to_string()),
        }
    }
}

impl From<InductionError> for Fail {
    fn from(e: InductionError) -> Fail {
        match e {
            InductionError::Balls(b) => b.into(),
            InductionError::Graph(g) => g.into(),
            _ => Fail::structure(e.to_string()),
        }
    }
}

impl From<SynthesisError> for Fail {
    fn from(e: SynthesisError) -> Fail {
        match e {
            SynthesisError::TooShort { .. } => Fail::input(e.to_string()),
            _ => Fail::structure(e.to_string()),
        }
    }
}

impl From<WordError> for Fail {
    fn from(e: WordError) -> Fail {
        match e {
            WordError::PrefixTooShort { .. } => Fail::horizon(e.to_string()),
            _ => Fail::input(e.to_string()),
        }
    }
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, text: &str) -> Result<(), Fail> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Fail::input(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, text).map_err(|e| Fail::input(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn load_graph(path: &Path) -> Result<Graph, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    let g = parse_eig(&text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    let bad = validate_graph(&g);
    if !bad.is_empty() {
        let lines: Vec<String> = bad.iter().map(|v| v.to_string()).collect();
        return Err(Fail::input(format!("{}: {}", path.display(), lines.join("; "))));
    }
    Ok(g)
}

fn load_seq(path: &Path) -> Result<AdmissibleSequence, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn analyze(input: &Path, nmax: usize, json_out: Option<&Path>, dot_dir: Option<&Path>, format: Format) -> Result<(), Fail> {
    let g = load_graph(input)?;
    let an = Analysis::new(&g, nmax + 2);
    let profile = profile_of(&an);
    if !profile.sturmian {
        let n = profile.b.iter().enumerate().find(|(n, &b)| b != n + 2).map(|(n, _)| n).unwrap_or(0);
        return Err(Fail::structure(format!("not Sturmian: b_{n} = {} (expected {})", profile.b[n], n + 2)));
    }
    if profile.b.len() <= nmax {
        return Err(Fail::horizon(format!(
            "complexity known only up to n = {}: {}",
            profile.b.len() as isize - 1,
            profile.cut.clone().unwrap_or_default()
        )));
    }
    let b: Vec<usize> = profile.b[..=nmax].to_vec();
    let mut chain = Vec::new();
    for n in 0..=nmax {
        chain.push(an.full_chain_at(n)?);
    }
    let cyclic = (0..=nmax).find_map(|n| detect_cycle(&build_gn(&an, n)).map(|c| (n, c)));
    let bounded = boundedness_of(&an, nmax)?;
    let mut lemmas = Vec::new();
    for n in 0..nmax {
        lemmas.extend(lemma_failures(&an, n)?);
    }
    let trace = match cyclic {
        None => Some(trace_of(&an, nmax)?),
        Some(_) => None,
    };
    let tables: Vec<Value> = (0..=nmax).map(|n| serde_json::to_value(an.table(n)).unwrap()).collect();
    let report = json!({
        "schema": SCHEMA,
        "input": input.display().to_string(),
        "degree": g.degree,
        "nmax": nmax,
        "b": b,
        "sturmian": true,
        "chain": chain,
        "tables": tables,
        "cyclic": cyclic.as_ref().map(|(n, c)| json!({"level": n, "cycle": c})),
        "bounded": bounded,
        "lemma_failures": lemmas,
        "trace": trace,
    });
    if let Some(dir) = dot_dir {
        fs::create_dir_all(dir).map_err(|e| Fail::input(format!("{}: {e}", dir.display())))?;
        for n in 0..=nmax {
            write_atomic(&dir.join(format!("g_{n}.dot")), &build_gn(&an, n).to_dot())?;
            for (side, tag) in [(Side::A, "A"), (Side::B, "B")] {
                let bg = build_indexed(&an, n as isize, side)?;
                write_atomic(&dir.join(format!("g{tag}_{n}.dot")), &bg.to_dot(&an))?;
            }
        }
    }
    if let Some(path) = json_out {
        write_atomic(path, &pretty(&report))?;
    }
    match format {
        Format::Json => print!("{}", pretty(&report)),
        Format::Text => {
            println!("b = {b:?}");
            for ch in &chain {
                println!("n = {}: S = {}, A = {}, B = {}, C = {}", ch.n, ch.s, ch.a, ch.b, ch.c.unwrap());
            }
            match &cyclic {
                Some((n, c)) => println!("cyclic: cycle {c:?} at n = {n}"),
                None => println!("acyclic up to n = {nmax}"),
            }
            println!("boundedness: {:?} (runs A/B = {:?}, required {})", bounded.verdict, bounded.runs, bounded.required_run);
            if let Some(t) = &trace {
                println!("K = {:?}, n_k = {:?}, alpha = {}", t.k, t.nk, letters_to_string(&t.alpha));
                println!("i = {}", serde_json::to_string(&t.i).unwrap());
            }
            if !lemmas.is_empty() {
                println!("lemma failures: {}", lemmas.len());
                for l in &lemmas {
                    println!("  {l}");
                }
            }
        }
    }
    Ok(())
}

fn synthesize(seq_path: &Path, kmax: Option<usize>, out: &Path, maps: Option<&Path>) -> Result<(), Fail> {
    let seq = load_seq(seq_path)?;
    let report = validate_alpha_i(&seq);
    if let Some(f) = report.failure {
        return Err(Fail::structure(format!("not admissible at k = {}: {}", f.k, f.rule)));
    }
    if !validate_beta(&seq.alpha, &seq.beta) {
        return Err(Fail::structure("beta_k must be alpha_k or beta_(k-1)"));
    }
    let kmax = kmax.unwrap_or(seq.i.len().saturating_sub(1));
    let prefix = build_prefix(&seq, kmax)?;
    write_atomic(out, &serialize_eig(&prefix.graph))?;
    if let Some(m) = maps {
        let v = json!({"schema": SCHEMA, "nk": prefix.nk, "into_final": prefix.into_final});
        write_atomic(m, &pretty(&v))?;
    }
    println!("{} vertices, n_k = {:?}", prefix.graph.len(), prefix.nk);
    Ok(())
}

fn roundtrip_sequence(seq: &AdmissibleSequence, kmax: usize) -> Result<(Value, Vec<String>), Fail> {
    let last = seq.i.len().checked_sub(1).ok_or_else(|| Fail::input("empty sequence"))?;
    if kmax > last {
        return Err(Fail::input(format!("kmax {kmax} exceeds the sequence ({} steps)", last + 1)));
    }
    // synthesize as far as the file allows so levels up to n_kmax are saturated
    let prefix = build_prefix(seq, last)?;
    let nmax = prefix.nk[kmax];
    let an = Analysis::new(&prefix.graph, nmax + 2);
    let trace = trace_of(&an, nmax)?;
    let mut diffs = Vec::new();
    let got = trace.nk.len();
    if got <= kmax {
        diffs.push(format!("recovered only {got} steps, expected {}", kmax + 1));
    }
    if trace.k != Some(seq.k) && seq.k <= kmax {
        diffs.push(format!("K: expected {}, recovered {:?}", seq.k, trace.k));
    }
    for k in 0..=kmax.min(got.saturating_sub(1)) {
        if trace.alpha[k] != seq.alpha[k] {
            diffs.push(format!("alpha_{k}: expected {}, recovered {}", seq.alpha[k], trace.alpha[k]));
        }
        if trace.i[k] != seq.i[k] {
            diffs.push(format!("i_{k}: expected {:?}, recovered {:?}", Vec::<u32>::from(seq.i[k]), Vec::<u32>::from(trace.i[k])));
        }
        if trace.nk[k] != prefix.nk[k] {
            diffs.push(format!("n_{k}: expected {}, recovered {}", prefix.nk[k], trace.nk[k]));
        }
    }
    // beta of the vertex the whole direct system starts from
    let origin = prefix.graph.vertices[prefix.into_final[0][0]].id;
    let kb = kmax.min(got.saturating_sub(2));
    let beta = beta_of_vertex(&an, &trace, origin, kb)?;
    let tail = agreement_index(&beta.beta, &seq.beta[..beta.beta.len()]);
    if tail.is_none() {
        diffs.push(format!(
            "beta {} of vertex {origin} does not end like {}",
            letters_to_string(&beta.beta),
            letters_to_string(&seq.beta[..beta.beta.len()])
        ));
    }
    let v = json!({
        "schema": SCHEMA,
        "mode": "sequence",
        "kmax": kmax,
        "prefix_vertices": prefix.graph.len(),
        "recovered": trace,
        "beta_vertex": origin,
        "beta_recovered": letters_to_string(&beta.beta),
        "beta_agrees_from": tail,
        "diffs": diffs,
    });
    Ok((v, diffs))
}

fn roundtrip_graph(g: &Graph, nmax: usize) -> Result<(Value, Vec<String>), Fail> {
    let an = Analysis::new(g, nmax + 2);
    let trace = trace_of(&an, nmax)?;
    let (seq, origin) = sequence_from_trace(&an, &trace)?;
    let last = seq.i.len() - 1;
    let prefix = build_prefix(&seq, last)?;
    let fit = segment_embedding(&prefix.graph, g)
        .map(|(o, r)| ("synthesized inside input", o, r))
        .or_else(|| segment_embedding(g, &prefix.graph).map(|(o, r)| ("input inside synthesized", o, r)));
    let mut diffs = Vec::new();
    if fit.is_none() {
        diffs.push("synthesized prefix and input do not agree on their overlap".to_string());
    }
    let v = json!({
        "schema": SCHEMA,
        "mode": "graph",
        "nmax": nmax,
        "sequence": seq,
        "beta_vertex": origin,
        "synthesized_vertices": prefix.graph.len(),
        "overlap": fit.map(|(how, o, r)| json!({"direction": how, "offset": o, "reversed": r})),
        "diffs": diffs,
    });
    Ok((v, diffs))
}

fn roundtrip(seq: Option<&Path>, input: Option<&Path>, kmax: usize, nmax: usize, json_out: Option<&Path>) -> Result<(), Fail> {
    let (report, diffs) = match (seq, input) {
        (Some(s), _) => {
            let seq = load_seq(s)?;
            if let Some(f) = validate_alpha_i(&seq).failure {
                return Err(Fail::structure(format!("not admissible at k = {}: {}", f.k, f.rule)));
            }
            roundtrip_sequence(&seq, kmax)?
        }
        (None, Some(i)) => roundtrip_graph(&load_graph(i)?, nmax)?,
        (None, None) => return Err(Fail::input("give --seq or --input")),
    };
    if let Some(p) = json_out {
        write_atomic(p, &pretty(&report))?;
    }
    if diffs.is_empty() {
        println!("round trip ok");
        Ok(())
    } else {
        for d in &diffs {
            println!("{d}");
        }
        Err(Fail::structure(format!("round trip differs in {} place(s)", diffs.len())))
    }
}

fn word(
    cf: Option<Vec<u32>>,
    theta: Option<String>,
    rho: Option<String>,
    len: Option<usize>,
    ceil: bool,
    rauzy: Option<usize>,
) -> Result<(), Fail> {
    let len = len.unwrap_or(match rauzy {
        Some(n) => required_length(n + 1),
        None => 20,
    });
    if len == 0 && rauzy.is_none() {
        return Ok(());
    }
    let w = match (cf, theta) {
        (Some(q), None) => {
            if q.contains(&0) {
                return Err(Fail::input("partial quotients must be positive"));
            }
            let ind = cf_induction(&q, q.len());
            let p = ind.prefix();
            if p.len() < len {
                return Err(Fail::horizon(format!("these quotients determine only {} letters; add more", p.len())));
            }
            p[..len].to_vec()
        }
        (None, Some(t)) => {
            let theta = parse_number(&t)?;
            let rho = match rho {
                Some(r) => parse_number(&r)?,
                None => Surd::rational(0, 1),
            };
            mechanical_word(&theta, &rho, len, if ceil { Rounding::Ceil } else { Rounding::Floor })?
        }
        _ => return Err(Fail::input("give exactly one of --cf or --theta")),
    };
    match rauzy {
        Some(n) => {
            let g = word_rauzy_graph(&w, n)?;
            print!("{}", g.to_dot());
        }
        None => println!("{}", word_string(&w)),
    }
    Ok(())
}

fn export_dot(input: &Path, level: Option<isize>, side: SideArg, out: Option<&Path>) -> Result<(), Fail> {
    let g = load_graph(input)?;
    let dot = match level {
        None => to_dot(&g),
        Some(n) => {
            let an = Analysis::new(&g, (n.max(0) as usize) + 2);
            match side {
                SideArg::Plain if n >= 0 => build_gn(&an, n as usize).to_dot(),
                SideArg::Plain => return Err(Fail::input("level must be >= 0 for the plain ball graph")),
                SideArg::A => build_indexed(&an, n, Side::A)?.to_dot(&an),
                SideArg::B => build_indexed(&an, n, Side::B)?.to_dot(&an),
            }
        }
    };
    match out {
        Some(p) => write_atomic(p, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn validate(input: &Path) -> Result<(), Fail> {
    let text = fs::read_to_string(input).map_err(|e| Fail::input(format!("{}: {e}", input.display())))?;
    let g = parse_eig(&text).map_err(|e| Fail::input(format!("{}: {e}", input.display())))?;
    let bad = validate_graph(&g);
    for v in &bad {
        println!("{v}");
    }
    if bad.is_empty() {
        println!("ok: {} vertices, {} edges, degree {}", g.len(), g.edges.len(), g.degree);
        Ok(())
    } else {
        Err(Fail::input(format!("{} violation(s)", bad.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Analyze { input, nmax, json, dot_dir, format } => analyze(&input, nmax, json.as_deref(), dot_dir.as_deref(), format),
        Cmd::Synthesize { seq, kmax, out, maps } => synthesize(&seq, kmax, &out, maps.as_deref()),
        Cmd::Roundtrip { seq, input, kmax, nmax, json } => roundtrip(seq.as_deref(), input.as_deref(), kmax, nmax, json.as_deref()),
        Cmd::Word { cf, theta, rho, len, ceil, rauzy } => word(cf, theta, rho, len, ceil, rauzy),
        Cmd::ExportDot { input, level, side, out } => export_dot(&input, level, side, out.as_deref()),
        Cmd::Validate { input } => validate(&input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
