mod cache;
mod graph_file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use ngo_strings::homology::cographic_homology;
use ngo_strings::hypertoric::{certify_small, circuit_relations, enumerate_strata, local_model_dims, SmallnessCertificate};
use ngo_strings::intlinalg::{gale_dual, verify_exact};
use ngo_strings::matroid::{f_h_vectors, global_cache, top_betti, tutte_polynomial};
use ngo_strings::partitions::{admissible_partitions, gcd, local_system_rank, partitions_of, stabilizer_order};
use ngo_strings::quiver::spectral_dual_graph;
use ngo_strings::strings::{ngo_string_graded_ranks, stabilization_codim, string_table, stratum_dims, table_report};
use ngo_strings::{CographicMatroid, Matrix, MultiGraph, Partition, Quiver};

use output::{num, strs, table, Output};

/// Combinatorial invariants of GL_n Hitchin fibrations: string-rank tables,
/// spectral dual graphs, Gale duals, Tutte polynomials and hypertoric strata.
#[derive(Parser)]
#[command(name = "ngo-strings", version, arg_required_else_help = true)]
struct Cli {
    /// Emit JSON with every integer encoded as a decimal string.
    #[arg(long, global = true)]
    json: bool,

    /// Size of the worker pool for parallel Tutte and homology branches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Persistent Tutte memo cache; loaded before and saved after the command.
    #[arg(long, global = true, env = "NGO_STRINGS_CACHE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// String ranks for every partition of n at degree d.
    Strings {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// The full table indexed by the divisors gcd(n, d).
    Report {
        #[arg(long)]
        n: u32,
    },
    /// Partitions of n with their local-system ranks, optionally only the admissible ones for d.
    Partition {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Vertices, edge multiplicities and first Betti number of a graph.
    Graph {
        #[command(flatten)]
        input: GraphInput,
        /// Print Graphviz DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Boundary matrix A, its Gale dual B, the exactness check and the circuit relations.
    Gale {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Tutte polynomial, optionally evaluated at integer points.
    Tutte {
        #[command(flatten)]
        input: GraphInput,
        /// Evaluation point `x,y`; repeatable.
        #[arg(long = "eval", value_name = "X,Y", allow_hyphen_values = true)]
        eval: Vec<String>,
    },
    /// f- and h-vectors of the cographic matroid and its top-sphere count.
    Matroid {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Reduced homology of the cographic matroid complex.
    MatroidHomology {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Vertex-partition strata with codimensions and multiplicities.
    Strata {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Dimension constants of the local model at a stratum.
    LocalModel {
        #[arg(long)]
        partition: Partition,
        #[arg(long)]
        genus: u32,
    },
    /// Stratum dimensions on the Hitchin base, graded string ranks and the stabilization codimension.
    Dims {
        #[arg(long)]
        partition: Partition,
        #[arg(long)]
        genus: u32,
    },
}

/// A graph given either as the spectral dual graph of a partition or as a file.
#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["partition", "quiver"])))]
struct GraphInput {
    /// Partition such as `2,1,1`.
    #[arg(long)]
    partition: Option<Partition>,
    /// Genus of the curve, used with --partition.
    #[arg(long, default_value_t = 2, requires = "partition")]
    genus: u32,
    /// Graph file: {"version":1,"vertices":N,"edges":[[u,v],...]}.
    #[arg(long, value_name = "FILE")]
    quiver: Option<PathBuf>,
}

impl GraphInput {
    fn quiver(&self) -> Result<Quiver, String> {
        match (&self.partition, &self.quiver) {
            (Some(p), _) => Ok(Quiver::from_graph(&spectral_dual_graph(p, self.genus).map_err(err)?)),
            (None, Some(path)) => graph_file::read_quiver(path),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }

    fn graph(&self) -> Result<MultiGraph, String> {
        self.quiver().map(|q| q.underlying())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn run(command: &Command) -> Result<Output, String> {
    match command {
        Command::Strings { n, d } => strings(*n, *d),
        Command::Report { n } => report(*n),
        Command::Partition { n, d } => partition(*n, *d),
        Command::Graph { input, dot } => graph(input, *dot),
        Command::Gale { input } => gale(input),
        Command::Tutte { input, eval } => tutte(input, eval),
        Command::Matroid { input } => matroid(input),
        Command::MatroidHomology { input } => matroid_homology(input),
        Command::Strata { input } => strata(input),
        Command::LocalModel { partition, genus } => local_model(partition, *genus),
        Command::Dims { partition, genus } => dims(partition, *genus),
    }
}

fn strings(n: u32, d: i64) -> Result<Output, String> {
    let t = string_table(n, d).map_err(err)?;
    let rows: Vec<Vec<String>> = t.entries().map(|(p, r)| vec![p.braced(), r.to_string()]).collect();
    let text = format!("n = {n}, d = {d}, gcd(n,d) = {}\n{}", t.q, table(&["partition", "rank"], &rows));
    let ranks: Vec<Value> = t.entries().map(|(p, r)| json!({"partition": p.to_string(), "rank": num(r)})).collect();
    Ok(Output::new(text, json!({"n": num(n), "d": num(d), "gcd": num(t.q), "ranks": ranks})))
}

fn report(n: u32) -> Result<Output, String> {
    let r = table_report(n).map_err(err)?;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|(q, ranks)| {
            let ranks: Vec<Value> = r
                .columns
                .iter()
                .zip(ranks)
                .map(|(p, v)| json!({"partition": p.to_string(), "rank": num(v)}))
                .collect();
            json!({"gcd": num(q), "ranks": ranks})
        })
        .collect();
    let columns: Vec<String> = r.columns.iter().map(ToString::to_string).collect();
    Ok(Output::new(r.to_string(), json!({"n": num(n), "columns": columns, "rows": rows})))
}

fn partition(n: u32, d: Option<i64>) -> Result<Output, String> {
    let parts = match d {
        Some(d) => admissible_partitions(n, d),
        None => partitions_of(n),
    }
    .map_err(err)?;
    let rows: Vec<Vec<String>> = parts
        .iter()
        .map(|p| vec![p.braced(), p.len().to_string(), local_system_rank(p).to_string(), stabilizer_order(p).to_string()])
        .collect();
    let mut text = String::new();
    if let Some(d) = d {
        text.push_str(&format!("admissible for n = {n}, d = {d} (gcd {}): {}\n", gcd(n as i64, d), parts.len()));
    }
    text.push_str(&table(&["partition", "r", "local_rank", "stabilizer"], &rows));
    let items: Vec<Value> = parts
        .iter()
        .map(|p| {
            json!({
                "partition": p.to_string(),
                "r": num(p.len()),
                "local_rank": num(local_system_rank(p)),
                "stabilizer": num(stabilizer_order(p)),
            })
        })
        .collect();
    let mut doc = json!({"n": num(n), "partitions": items});
    if let Some(d) = d {
        doc["d"] = num(d);
    }
    Ok(Output::new(text, doc))
}

fn graph(input: &GraphInput, dot: bool) -> Result<Output, String> {
    let q = input.quiver()?;
    if dot {
        let text = match input.partition {
            Some(_) => q.underlying().to_dot(),
            None => q.to_dot(),
        };
        return Ok(Output::new(text.clone(), json!({"dot": text})));
    }
    let g = q.underlying();
    let mut bundles: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for &(u, v) in g.edges() {
        *bundles.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    let b1 = g.betti1().ok();
    let b1_text = b1.map_or("disconnected".to_string(), |b| b.to_string());
    let rows: Vec<Vec<String>> =
        bundles.iter().map(|(&(u, v), m)| vec![format!("{u} -- {v}"), m.to_string()]).collect();
    let text = format!(
        "r = {}, s = {}, b1 = {b1_text}\n{}",
        g.vertex_count(),
        g.edge_count(),
        table(&["edge", "multiplicity"], &rows)
    );
    let edges: Vec<Value> = q.arrows().iter().map(|&(u, v)| json!([num(u), num(v)])).collect();
    let doc = json!({
        "vertices": num(g.vertex_count()),
        "edges": edges,
        "b1": b1.map_or(Value::Null, num),
    });
    Ok(Output::new(text, doc))
}

fn gale(input: &GraphInput) -> Result<Output, String> {
    let q = input.quiver()?;
    let a: Matrix = q.boundary_matrix().map_err(err)?;
    let b = gale_dual(&a).map_err(err)?;
    let report = verify_exact(&a, &b).map_err(err)?;
    let rels = circuit_relations(&q).map_err(err)?;
    let exact = if report.is_exact() { "yes".to_string() } else { format!("no ({})", report.failures().join("; ")) };
    let mut text = format!("A ({} x {})\n{a}B ({} x {})\n{b}exact: {exact}\ncircuit relations\n", a.rows(), a.cols(), b.rows(), b.cols());
    for rel in &rels {
        text.push_str(&format!("  {}: {rel}\n", rel.index));
    }
    let matrix = |m: &Matrix| -> Vec<Vec<String>> { (0..m.rows()).map(|i| strs(m.row(i))).collect() };
    let relations: Vec<Value> = rels
        .iter()
        .map(|r| json!({"index": num(r.index), "coefficients": strs(&r.coefficients), "text": r.to_string()}))
        .collect();
    let doc = json!({
        "a": matrix(&a),
        "b": matrix(&b),
        "exact": report.is_exact(),
        "failures": report.failures(),
        "relations": relations,
    });
    Ok(Output::new(text, doc))
}

fn parse_point(s: &str) -> Result<(BigInt, BigInt), String> {
    let bad = || format!("evaluation point {s:?} is not of the form x,y");
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

fn tutte(input: &GraphInput, eval: &[String]) -> Result<Output, String> {
    let points = eval.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
    let t = tutte_polynomial(&input.graph()?).map_err(err)?;
    let mut text = format!("T(x,y) = {t}\n");
    let mut evaluations = Vec::new();
    for (x, y) in &points {
        let v = t.evaluate(x, y);
        text.push_str(&format!("T({x},{y}) = {v}\n"));
        evaluations.push(json!({"x": num(x), "y": num(y), "value": num(v)}));
    }
    let terms: Vec<Value> = t.terms().map(|(i, j, c)| json!({"i": num(i), "j": num(j), "coefficient": num(c)})).collect();
    Ok(Output::new(text, json!({"polynomial": t.to_string(), "terms": terms, "evaluations": evaluations})))
}

fn matroid(input: &GraphInput) -> Result<Output, String> {
    let g = input.graph()?;
    let m = CographicMatroid::new(g.clone()).map_err(err)?;
    let (f, h) = f_h_vectors(&m).map_err(err)?;
    let top = top_betti(&g).map_err(err)?;
    let text = format!(
        "rank = {}\nf = ({})\nh = ({})\ntop_betti = {top}\n",
        m.rank(),
        strs(&f).join(", "),
        strs(&h).join(", ")
    );
    Ok(Output::new(text, json!({"rank": num(m.rank()), "f": strs(&f), "h": strs(&h), "top_betti": num(top)})))
}

fn matroid_homology(input: &GraphInput) -> Result<Output, String> {
    let g = input.graph()?;
    let h = cographic_homology(&g).map_err(err)?;
    let b1 = g.betti1().map_err(err)? as isize;
    let top = top_betti(&g).map_err(err)?;
    let shape = if g.loop_count() > 0 {
        if h.ranks.iter().any(|&r| r > 0) {
            return Err("complex with a cone point has nonzero reduced homology".into());
        }
        "contractible (every loop is a cone point)".to_string()
    } else {
        if !h.vanishes_below(b1 - 1) || BigUint::from(h.degree(b1 - 1)) != top {
            return Err(format!("homology {:?} is not a wedge of {top} spheres of dimension {}", h.ranks, b1 - 1));
        }
        format!("wedge of {top} spheres of dimension {}", b1 - 1)
    };
    let rows: Vec<Vec<String>> =
        h.ranks.iter().enumerate().map(|(i, r)| vec![(i as isize - 1).to_string(), r.to_string()]).collect();
    let text = format!("{}{shape}\n", table(&["degree", "rank"], &rows));
    let ranks: Vec<Value> =
        h.ranks.iter().enumerate().map(|(i, r)| json!({"degree": num(i as isize - 1), "rank": num(r)})).collect();
    Ok(Output::new(text, json!({"ranks": ranks, "top_betti": num(top), "shape": shape})))
}

fn strata(input: &GraphInput) -> Result<Output, String> {
    let q = input.quiver()?;
    let records = enumerate_strata(&q).map_err(err)?;
    let cert = certify_small(&q).map_err(err)?;
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|st| {
            vec![
                st.vp.to_string(),
                st.contracted.vertex_count().to_string(),
                st.contracted.arrow_count().to_string(),
                st.b1_contracted.to_string(),
                st.codim_in_y.to_string(),
                st.codim_in_x.to_string(),
                st.fiber_dim.to_string(),
                st.deleted_loops.to_string(),
                st.multiplicity.to_string(),
            ]
        })
        .collect();
    let headers = ["blocks", "r", "s", "b1", "codim_Y", "codim_X", "fiber", "loops", "multiplicity"];
    let small = match &cert {
        SmallnessCertificate::Pass { strata_checked } => format!("small: yes ({strata_checked} strata checked)"),
        SmallnessCertificate::Fail { stratum } => format!("small: no (fails at {})", stratum.vp),
    };
    let text = format!("{}{small}\n", table(&headers, &rows));
    let items: Vec<Value> = records
        .iter()
        .map(|st| {
            json!({
                "blocks": st.vp.to_string(),
                "r": num(st.contracted.vertex_count()),
                "s": num(st.contracted.arrow_count()),
                "b1": num(st.b1_contracted),
                "codim_y": num(st.codim_in_y),
                "codim_x": num(st.codim_in_x),
                "fiber_dim": num(st.fiber_dim),
                "deleted_loops": num(st.deleted_loops),
                "multiplicity": num(&st.multiplicity),
            })
        })
        .collect();
    Ok(Output::new(text, json!({"strata": items, "small": cert.passed()})))
}

fn key_values(pairs: &[(&str, String)]) -> Output {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let text: String = pairs.iter().map(|(k, v)| format!("{k:<width$} = {v}\n")).collect();
    let doc: serde_json::Map<String, Value> = pairs.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
    Output::new(text, Value::Object(doc))
}

fn local_model(p: &Partition, genus: u32) -> Result<Output, String> {
    let d = local_model_dims(p, genus).map_err(err)?;
    Ok(key_values(&[
        ("partition", d.partition.to_string()),
        ("n", d.n.to_string()),
        ("g", d.g.to_string()),
        ("s", d.s.to_string()),
        ("b1", d.b1.to_string()),
        ("d", d.d_dim.to_string()),
        ("c", d.c_dim.to_string()),
        ("dim_M", d.dim_m.to_string()),
        ("dim_Y", d.dim_y.to_string()),
        ("dim_X", d.dim_x.to_string()),
        ("dim_Jbar", d.dim_jbar.to_string()),
    ]))
}

fn dims(p: &Partition, genus: u32) -> Result<Output, String> {
    let s = stratum_dims(p, genus).map_err(err)?;
    let graded = ngo_string_graded_ranks(p, genus).map_err(err)?;
    let stab = if p.n() >= 2 { stabilization_codim(p.n(), genus).map_err(err)?.to_string() } else { "n/a".into() };
    let mut out = key_values(&[
        ("partition", s.partition.to_string()),
        ("g", s.g.to_string()),
        ("dim_A", s.dim_a.to_string()),
        ("dim_S", s.dim_s.to_string()),
        ("codim_S", s.codim_s.to_string()),
        ("component_genera", strs(&s.component_genera).join(",")),
        ("genus_sum", s.genus_sum.to_string()),
        ("delta", s.delta.to_string()),
        ("spectral_genus", s.spectral_genus.to_string()),
        ("psi", s.psi.to_string()),
        ("graded_ranks", strs(&graded).join(",")),
        ("stabilization_codim", stab),
    ]);
    out.json["component_genera"] = json!(strs(&s.component_genera));
    out.json["graded_ranks"] = json!(strs(&graded));
    Ok(out)
}

fn load_cache(path: &std::path::Path) {
    match cache::load(path) {
        cache::Loaded::Missing => {}
        cache::Loaded::Rejected(msg) => eprintln!("warning: {msg}; starting with an empty cache"),
        cache::Loaded::Entries(entries) => {
            let memo = global_cache();
            for (key, poly) in entries {
                memo.insert(key, poly);
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    if let Some(path) = &cli.cache {
        load_cache(path);
    }
    let result = run(&cli.command);
    if let Some(path) = &cli.cache {
        if let Err(e) = cache::store(path, global_cache()) {
            eprintln!("warning: could not write cache {}: {e}", path.display());
        }
    }
    match result {
        Ok(out) => {
            out.print(cli.json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
