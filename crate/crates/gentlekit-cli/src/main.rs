use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::RangedU64ValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use gentlekit::brauer::{brauer_classify, multiplicity_map, BrauerError, BrauerGraph};
use gentlekit::derived::{
    ar_translate, enumerate_perfect_classes, expected_root_class, q_value, root_classify,
    root_system_check, StringComplex, DEFAULT_ENUMERATION_LEN,
};
use gentlekit::invariants::{
    aag_invariant, aag_to_json, aag_to_string, analyze, compare, coxeter, fingerprint,
    InvariantError, Verdict,
};
use gentlekit::random::{random_instance, rng_from_seed, Shape};
use gentlekit::ribbon::orientation_table;
use gentlekit::walks::{classify_walk, enumerate_reduced_walks, faces};
use gentlekit::{GentleInstance, RibbonGraph, Walk};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "gentlekit",
    version,
    about = "Derived invariants of gentle algebras"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Euler form, AAG invariant, Coxeter polynomial and fingerprint.
    Analyze {
        path: PathBuf,
        /// Print the ribbon graph in DOT format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Compare fingerprints; exit 1 if provably not derived equivalent.
    Compare { a: PathBuf, b: PathBuf },
    /// String complex of a walk, its root class and AR triangle.
    Walk {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        walk: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
    },
    /// K₀ classes of string complexes up to a walk length.
    Roots {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LEN, value_parser = RangedU64ValueParser::<usize>::new().range(1..=16))]
        max_len: usize,
    },
    /// AAG invariant.
    Aag { path: PathBuf },
    /// Coxeter matrix and polynomial.
    Coxeter { path: PathBuf },
    /// Cartan matrix and definiteness of a Brauer graph algebra.
    Brauer { path: PathBuf },
    /// Randomized identity checks over generated gentle quivers.
    Selftest {
        #[arg(long, env = "GENTLEKIT_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
        count: usize,
    },
}

/// Error with its exit code: 2 for input problems, 3 for internal mismatches.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }
}

impl From<BrauerError> for Failure {
    fn from(e: BrauerError) -> Self {
        let code = if matches!(e, BrauerError::InternalMismatch(_)) {
            3
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command prints, and its exit code on success.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            code: 0,
        }
    }
}

fn load(path: &Path) -> Result<GentleInstance, Failure> {
    GentleInstance::load(path).map_err(Failure::input)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
                ),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Analyze { path, dot } => cmd_analyze(path, *dot),
        Command::Compare { a, b } => cmd_compare(a, b),
        Command::Walk { path, walk, m } => cmd_walk(path, walk, *m),
        Command::Roots { path, max_len } => cmd_roots(path, *max_len),
        Command::Aag { path } => {
            let inst = load(path)?;
            let aag = aag_invariant(&inst.quiver)?;
            Ok(Output::ok(
                json!({ "aag": aag_to_json(&aag) }),
                format!("{}\n", aag_to_string(&aag)),
            ))
        }
        Command::Coxeter { path } => {
            let inst = load(path)?;
            let c = coxeter(&inst.quiver)?;
            let json = json!({
                "coxeterMatrix": c.matrix.to_json(),
                "coxeterPoly": c.poly.to_json(),
                "coxeterPolyText": c.poly.to_string(),
                "palindromic": c.poly.is_palindromic(),
            });
            Ok(Output::ok(
                json,
                format!("Ψ =\n{}ψ(z) = {}\n", c.matrix, c.poly),
            ))
        }
        Command::Brauer { path } => cmd_brauer(path),
        Command::Selftest { seed, count } => Ok(cmd_selftest(*seed, *count)),
    }
}

fn graph_tables(g: &RibbonGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices of G (half-edges in order):");
    for v in g.vertices() {
        let hs: Vec<&str> = v
            .half_edges
            .iter()
            .map(|&h| g.half_edges()[h].name.as_str())
            .collect();
        let _ = writeln!(s, "  {:<8} [{}]", v.id, hs.join(", "));
    }
    let _ = writeln!(s, "edges of G (reference orientation, source → target):");
    for (k, (sv, sp, tv, tp)) in orientation_table(g) {
        let _ = writeln!(
            s,
            "  {:<8} {}#{} → {}#{}",
            g.edges()[k].name,
            sv,
            sp,
            tv,
            tp
        );
    }
    let _ = writeln!(s, "faces:");
    for f in faces(g) {
        let kind = if f.is_full { "full" } else { "anti-walks" };
        let _ = writeln!(
            s,
            "  ℓ={:<3} deg°={:<3} {:<10} {}",
            f.len(),
            f.closed_degree,
            kind,
            f.walk.to_text(g)
        );
    }
    s
}

fn cmd_analyze(path: &Path, dot: bool) -> Result<Output, Failure> {
    let inst = load(path)?;
    if dot {
        let d = inst.graph.to_dot();
        return Ok(Output::ok(json!({ "dot": d }), d));
    }
    let r = analyze(&inst.quiver)?;
    let e = &r.euler;
    let mut t = String::new();
    let _ = writeln!(t, "{}", inst.quiver.render().trim_end());
    t.push_str(&graph_tables(&inst.graph));
    let _ = writeln!(t, "Cartan matrix C:\n{}", e.cartan.to_string().trim_end());
    let _ = writeln!(t, "C + Cᵗʳ:\n{}", e.gram_projectives.to_string().trim_end());
    let _ = writeln!(
        t,
        "∇ = {}   rank = {}   corank = {}",
        e.nabla, e.rank, e.corank
    );
    let _ = writeln!(
        t,
        "projectives: unit = {}, Dynkin type {}",
        e.unit_projectives, e.dynkin_projectives
    );
    match &e.dynkin_simples {
        Some(d) => {
            let _ = writeln!(
                t,
                "simples: unit = {}, Dynkin type {d}",
                e.unit_simples.unwrap_or(false)
            );
        }
        None => {
            let _ = writeln!(t, "simples: infinite global dimension");
        }
    }
    let _ = writeln!(t, "AAG = {}", aag_to_string(&r.aag));
    let pal = if r.coxeter.poly.is_palindromic() {
        "palindromic"
    } else {
        "not palindromic"
    };
    let _ = writeln!(t, "ψ(z) = {} ({pal})", r.coxeter.poly);
    Ok(Output::ok(r.to_json(), t))
}

fn cmd_compare(a: &Path, b: &Path) -> Result<Output, Failure> {
    let fa = fingerprint(&load(a)?.quiver)?;
    let fb = fingerprint(&load(b)?.quiver)?;
    let c = compare(&fa, &fb);
    let mut t = format!("{}\n", c.verdict.as_str());
    for (field, x, y) in &c.differences {
        let _ = writeln!(t, "  {field}: {x} vs {y}");
    }
    let code = if c.verdict == Verdict::NotDerivedEquivalent {
        1
    } else {
        0
    };
    Ok(Output {
        json: c.to_json(),
        text: t,
        code,
    })
}

fn cmd_walk(path: &Path, text: &str, m: i64) -> Result<Output, Failure> {
    let inst = load(path)?;
    let g = &inst.graph;
    let w = Walk::parse(text, g).map_err(Failure::input)?;
    let x = StringComplex::build(g, m, &w).map_err(Failure::input)?;
    let tri = ar_translate(g, m, &w).map_err(Failure::input)?;
    let gram = analyze(&inst.quiver)?.euler.gram_projectives;
    let class = x.k0_class(g);
    let q = q_value(&gram, &class);
    let kind = classify_walk(g, &w);
    let json = json!({
        "complex": x.to_json(g),
        "k0Class": class,
        "qValue": q,
        "rootClass": root_classify(&gram, &class).label(),
        "walkClass": kind.as_str(),
        "arTriangle": tri.to_json(g),
    });
    let mut t = String::new();
    let _ = writeln!(
        t,
        "X({m}, {}): {} terms, {} maps",
        w.to_text(g),
        x.terms.len(),
        x.maps.len()
    );
    for (term, mp) in x
        .terms
        .iter()
        .zip(x.maps.iter().map(Some).chain(std::iter::once(None)))
    {
        let _ = write!(
            t,
            "  P{} in degree {}",
            g.edges()[term.projective].name,
            term.degree
        );
        if let Some(mp) = mp {
            let arrow = if mp.reversed { "←" } else { "→" };
            let _ = write!(t, "  {arrow} {}", mp.path.join("."));
        }
        t.push('\n');
    }
    let _ = writeln!(
        t,
        "class {class:?}, q = {q} ({}), walk is {}",
        root_classify(&gram, &class).label(),
        kind.as_str()
    );
    let mid: Vec<String> = tri
        .middle
        .iter()
        .map(|c| format!("X({}, {})", c.m, c.walk.to_text(g)))
        .collect();
    let _ = writeln!(
        t,
        "AR triangle: X({}, {}) → {} → X({}, {}) → ; m(w) = {}",
        tri.start.m,
        tri.start.walk.to_text(g),
        if mid.is_empty() {
            "0".to_string()
        } else {
            mid.join(" ⊕ ")
        },
        tri.end.m,
        tri.end.walk.to_text(g),
        tri.shift
    );
    Ok(Output::ok(json, t))
}

fn cmd_roots(path: &Path, max_len: usize) -> Result<Output, Failure> {
    let inst = load(path)?;
    let g = &inst.graph;
    let pc = enumerate_perfect_classes(g, max_len).map_err(Failure::input)?;
    let e = analyze(&inst.quiver)?.euler;
    let gram = &e.gram_projectives;
    let mut rows = Vec::new();
    let mut t = String::new();
    for (x, (m, w)) in &pc.classes {
        let q = q_value(gram, x);
        rows.push(json!({ "class": x, "q": q, "m": m, "walk": w.to_text(g) }));
        let _ = writeln!(t, "{x:?}  q = {q}  via X({m}, {})", w.to_text(g));
    }
    let check = root_system_check(gram, e.nabla, &pc);
    if let Some(c) = &check {
        let _ = writeln!(
            t,
            "positive form: {} nonzero classes (expected {} once saturated), {} of {} 1-roots reached",
            c.walk_nonzero,
            c.expected_total(),
            c.walk_ones,
            c.box_ones
        );
    }
    let json = json!({
        "maxLen": max_len,
        "classes": rows,
        "rootSystem": check.map(|c| json!({
            "n": c.n,
            "multiClock": c.multi_clock,
            "walkNonzero": c.walk_nonzero,
            "walkOnes": c.walk_ones,
            "walkTwos": c.walk_twos,
            "boxOnes": c.box_ones,
            "boxTwos": c.box_twos,
            "expectedTotal": c.expected_total(),
            "saturated": c.saturated(),
        })),
    });
    Ok(Output::ok(json, t))
}

fn cmd_brauer(path: &Path) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(Failure::input)?;
    let b = BrauerGraph::from_json(&v)?;
    let c = brauer_classify(&b)?;
    let mut json = c.to_json();
    json["multiplicity"] = json!(multiplicity_map(&b));
    let mut t = format!("C_B:\n{}", c.cartan);
    let _ = writeln!(
        t,
        "corank {}, {}",
        c.corank,
        if c.positive_definite {
            "positive definite"
        } else {
            "singular"
        }
    );
    let _ = writeln!(t, "structure: {}", c.structure.as_str());
    if let Some(r) = c.rep_type {
        let _ = writeln!(t, "representation type: {r}");
    }
    Ok(Output::ok(json, t))
}

/// One generated instance through the identities; `Err` names the first failure.
fn check_instance(inst: &GentleInstance) -> Result<(), String> {
    let r = analyze(&inst.quiver).map_err(|e| e.to_string())?;
    let e = &r.euler;
    if !e.projective_identity_holds() {
        return Err("C + Cᵗʳ ≠ Inc·Incᵗʳ".into());
    }
    if e.simples_identity_holds() == Some(false) {
        return Err("C·Inc(Ĝ)Inc(Ĝ)ᵗʳ·Cᵗʳ ≠ C + Cᵗʳ".into());
    }
    let b = inst.quiver.base();
    let expect = b.num_arrows() as i64 - b.num_vertices() as i64 + inst.graph.is_bipartite() as i64;
    if e.corank as i64 != expect {
        return Err(format!("corank {} ≠ {expect}", e.corank));
    }
    let g = &inst.graph;
    for w in enumerate_reduced_walks(g, 6) {
        let x = StringComplex::build(g, 0, &w)
            .map_err(|e| e.to_string())?
            .k0_class(g);
        if root_classify(&e.gram_projectives, &x) != expected_root_class(g, &w) {
            return Err(format!("parity rule fails on {}", w.to_text(g)));
        }
    }
    let back = RibbonGraph::from_gentle(&inst.quiver)
        .to_quiver()
        .map_err(|e| e.to_string())?;
    if back.base().structural_key() != b.structural_key() {
        return Err("▽△ round trip".into());
    }
    Ok(())
}

fn cmd_selftest(seed: u64, count: usize) -> Output {
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let inst = random_instance(&mut rng, 6, 3, Shape::Any);
        if let Err(msg) = check_instance(&inst) {
            failures.push(json!({ "instance": k, "quiver": inst.quiver.render(), "failure": msg }));
        }
    }
    let mut t = format!(
        "seed {seed}: {count} instances, {} failures\n",
        failures.len()
    );
    for f in &failures {
        let _ = writeln!(
            t,
            "  #{}: {}",
            f["instance"],
            f["failure"].as_str().unwrap_or_default()
        );
    }
    let code = if failures.is_empty() { 0 } else { 1 };
    Output {
        json: json!({ "seed": seed, "instances": count, "failures": failures }),
        text: t,
        code,
    }
}
