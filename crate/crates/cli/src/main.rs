use clap::{Parser, Subcommand, ValueEnum};
use crossbound::bounds::bound_functions;
use crossbound::cliquesum::{fixture_trees, join};
use crossbound::convex::{convex_draw_chordal, convex_draw_interval, convex_draw_pathwidth};
use crossbound::decomposition::interval_order;
use crossbound::drawers::{
    draw_clique_decomposition, draw_planar_decomposition, draw_planar_partition,
    make_home_assignment,
};
use crossbound::formats::{
    bound_json, drawing_from_json, drawing_to_json, q_to_string, read_graph, report_to_json,
    CertificateJson, GraphJson, ReportJson,
};
use crossbound::generators::{
    gen_degree_set, gen_k33_free, gen_kh_based, gen_random_certified, witness_drawing_k33_free,
    Certificate, RandomKind,
};
use crossbound::geometry::{count_crossings, BoundCheck, CrossingReport};
use crossbound::oracle::convex_optimum;
use crossbound::{svg, Drawing, Error, Graph};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "crossbound",
    version,
    about = "Certified drawings with exact crossing counts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Partition,
    Decomposition,
    CliqueBags,
    Interval,
    Pathwidth,
    Chordal,
    Cliquesum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    K33free,
    Degreeset,
    Khbased,
    RandomKtree,
    RandomInterval,
    RandomPlanar,
    /// One of the built-in clique-sum trees, picked by `--index`.
    Cliquesum,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a graph from a certificate; exit 0 iff every bound holds.
    Draw {
        /// Graph JSON or edge list (optional for cliquesum).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum)]
        method: Method,
        /// Drawing JSON output (stdout gets the report).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Recount the crossings of a drawing.
    Count {
        #[arg(long)]
        drawing: PathBuf,
        /// Report to compare against; any difference exits 3.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Recompute a degree bound from the graph and compare with the drawing.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        drawing: PathBuf,
        /// sum_deg_sq, sum_edge_deg_prod, sum_deg_cubed, two_delta_m or two_delta_sq_m
        #[arg(long)]
        bound: String,
    },
    /// Emit a graph with its certificate and metadata.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 8)]
        delta: usize,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Degree set, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,8")]
        set: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        h: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, env = "CROSSBOUND_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum convex crossings over all circular orders (n <= 9).
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
}

struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::InvalidGraph(_)
            | Error::TooLarge(_) => 2,
            _ => 3,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Fail {
    Fail {
        code,
        msg: msg.into(),
    }
}

fn read(p: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(p).map_err(|e| fail(2, format!("{}: {e}", p.display())))
}

fn write(p: &Path, s: &str) -> Result<(), Fail> {
    std::fs::write(p, s).map_err(|e| fail(2, format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, s: &str) -> Result<(), Fail> {
    match out {
        Some(p) => write(p, s),
        None => {
            println!("{s}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("crossbound: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, Fail> {
    match cmd {
        Cmd::Draw {
            input,
            certificate,
            method,
            out,
            report,
            svg,
        } => draw(
            input.as_deref(),
            certificate.as_deref(),
            method,
            out.as_deref(),
            report.as_deref(),
            svg.as_deref(),
        ),
        Cmd::Count { drawing, expect } => {
            let d = drawing_from_json(&read(&drawing)?)?;
            let r = count_crossings(&d)?;
            let s = report_to_json(&r);
            println!("{s}");
            if let Some(p) = expect {
                let want: ReportJson =
                    serde_json::from_str(&read(&p)?).map_err(|e| fail(2, e.to_string()))?;
                let got = ReportJson::from(&r);
                if want.total != got.total
                    || want.pairs != got.pairs
                    || want.per_edge != got.per_edge
                {
                    return Err(fail(
                        3,
                        format!(
                            "recount {} differs from the report ({})",
                            got.total, want.total
                        ),
                    ));
                }
            }
            Ok(0)
        }
        Cmd::Verify {
            graph,
            drawing,
            bound,
        } => {
            let g = read_graph(&read(&graph)?)?;
            let d = drawing_from_json(&read(&drawing)?)?;
            if d.graph()? != g {
                return Err(fail(3, "drawing does not match the graph"));
            }
            let value = bound_functions(&g)
                .get(&bound)
                .cloned()
                .ok_or_else(|| fail(2, format!("unknown bound {bound:?}")))?;
            let r = count_crossings(&d)?;
            let b = BoundCheck::int(bound, value, r.total);
            println!(
                "{}",
                serde_json::to_string(&bound_json(&b)).expect("plain data")
            );
            Ok(if b.satisfied { 0 } else { 4 })
        }
        Cmd::Generate {
            family,
            delta,
            copies,
            set,
            h,
            k,
            n,
            index,
            seed,
            out,
        } => {
            let v = generate(family, delta, copies, &set, h, k, n, index, seed)?;
            emit(
                out.as_deref(),
                &serde_json::to_string(&v).expect("plain data"),
            )?;
            Ok(0)
        }
        Cmd::Oracle { input } => {
            let g = read_graph(&read(&input)?)?;
            let o = convex_optimum(&g)?;
            println!("{}", json!({ "crossings": o.crossings, "order": o.order }));
            Ok(0)
        }
    }
}

fn need_input(input: Option<&Path>) -> Result<Graph, Fail> {
    let p = input.ok_or_else(|| fail(2, "--input is required for this method"))?;
    Ok(read_graph(&read(p)?)?)
}

fn cert(p: Option<&Path>) -> Result<Option<CertificateJson>, Fail> {
    match p {
        Some(p) => Ok(Some(CertificateJson::parse(&read(p)?)?)),
        None => Ok(None),
    }
}

fn need_cert(p: Option<&Path>) -> Result<CertificateJson, Fail> {
    cert(p)?.ok_or_else(|| fail(2, "--certificate is required for this method"))
}

fn draw(
    input: Option<&Path>,
    certificate: Option<&Path>,
    method: Method,
    out: Option<&Path>,
    report_path: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<u8, Fail> {
    let (drawing, report): (Drawing, CrossingReport) = match method {
        Method::Partition => {
            let g = need_input(input)?;
            let d = need_cert(certificate)?.decomposition()?;
            let c = draw_planar_partition(&g, &d)?;
            (c.drawing, c.report)
        }
        Method::Decomposition => {
            let g = need_input(input)?;
            let d = need_cert(certificate)?.decomposition()?;
            let h = make_home_assignment(&g, &d)?;
            let c = draw_planar_decomposition(&g, &d, &h)?;
            (c.drawing, c.report)
        }
        Method::CliqueBags => {
            let g = need_input(input)?;
            let cj = need_cert(certificate)?;
            let d = cj.decomposition()?;
            let c = match cj.k {
                Some(k) => k as u64,
                None => {
                    let of = d.bags_of(g.n());
                    g.edges()
                        .iter()
                        .map(|&(a, b)| {
                            of[a]
                                .iter()
                                .filter(|x| of[b].binary_search(x).is_ok())
                                .count() as u64
                        })
                        .max()
                        .unwrap_or(0)
                }
            };
            let c = draw_clique_decomposition(&g, &d, c)?;
            (c.drawing, c.report)
        }
        Method::Interval => {
            let g = need_input(input)?;
            let order = match cert(certificate)?.and_then(|c| c.order) {
                Some(o) => o,
                None => interval_order(&g)?,
            };
            let c = convex_draw_interval(&g, &order)?;
            (Drawing::convex(&g, &c.order), c.report)
        }
        Method::Pathwidth => {
            let g = need_input(input)?;
            let cj = need_cert(certificate)?;
            let d = cj.decomposition()?;
            let k = cj.k.unwrap_or(d.width().saturating_sub(1));
            let c = convex_draw_pathwidth(&g, &d, k)?;
            (Drawing::convex(&g, &c.order), c.report)
        }
        Method::Chordal => {
            let g = need_input(input)?;
            let c = convex_draw_chordal(&g)?;
            (Drawing::convex(&g, &c.order), c.report)
        }
        Method::Cliquesum => {
            let t = need_cert(certificate)?.tree()?;
            let c = join(&t)?;
            if let Some(p) = input {
                if read_graph(&read(p)?)? != c.graph {
                    return Err(fail(3, "input graph differs from the composed clique-sum"));
                }
            }
            eprintln!(
                "constant {} ratio {}",
                q_to_string(&c.constant),
                q_to_string(&c.ratio)
            );
            (c.drawing, c.report)
        }
    };
    if let Some(p) = out {
        write(p, &drawing_to_json(&drawing))?;
    }
    if let Some(p) = svg_path {
        write(p, &svg::render(&drawing, report.total, 800.0))?;
    }
    let r = report_to_json(&report);
    emit(report_path, &r)?;
    if report_path.is_some() {
        println!("{r}");
    }
    let bad: Vec<&str> = report
        .bounds
        .iter()
        .filter(|b| !b.satisfied)
        .map(|b| b.name.as_str())
        .collect();
    if bad.is_empty() {
        Ok(0)
    } else {
        Err(fail(4, format!("bound violated: {}", bad.join(", "))))
    }
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::CliqueTree(d) | Certificate::PathDecomposition(d) => {
            serde_json::to_value(CertificateJson::from(d)).expect("plain data")
        }
        Certificate::IntervalOrder(o) => json!({ "order": o }),
        Certificate::Embedding(e) => json!({ "rotation": e.rotation }),
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    family: Family,
    delta: usize,
    copies: usize,
    set: &[usize],
    h: usize,
    k: usize,
    n: usize,
    index: usize,
    seed: u64,
) -> Result<Value, Fail> {
    let (name, graph, certificate, metadata) = match family {
        Family::K33free => {
            let inst = gen_k33_free(delta, copies)?;
            let w = witness_drawing_k33_free(delta, copies)?;
            (
                "k33free",
                inst.graph,
                serde_json::to_value(CertificateJson::from(&inst.partition)).expect("plain data"),
                json!({
                    "delta": delta,
                    "copies": copies,
                    "crossing_number": inst.crossing_number,
                    "formula": q_to_string(&inst.formula),
                    "witness_crossings": w.report.total,
                    "witness": serde_json::from_str::<Value>(&drawing_to_json(&w.drawing)).expect("own output"),
                }),
            )
        }
        Family::Degreeset => {
            let inst = gen_degree_set(set, copies)?;
            (
                "degreeset",
                inst.graph,
                Value::Null,
                json!({
                    "degree_set": inst.degree_set,
                    "copies": copies,
                    "sum_deg_sq": inst.sum_deg_sq,
                    "crossing_number": inst.crossing_number,
                    "exceeds_fraction": inst.exceeds_fraction,
                }),
            )
        }
        Family::Khbased => {
            let g = gen_kh_based(h, delta)?;
            let meta = json!({ "h": h, "delta": delta, "n": g.n(), "m": g.m() });
            ("khbased", g, Value::Null, meta)
        }
        Family::RandomKtree | Family::RandomInterval | Family::RandomPlanar => {
            let (name, kind) = match family {
                Family::RandomKtree => ("random-ktree", RandomKind::KTree { k }),
                Family::RandomInterval => ("random-interval", RandomKind::Interval),
                _ => ("random-planar", RandomKind::Planar),
            };
            let (g, c) = gen_random_certified(kind, n, seed)?;
            let meta = json!({ "n": n, "k": k, "seed": seed });
            (name, g, certificate_json(&c), meta)
        }
        Family::Cliquesum => {
            let fx = fixture_trees();
            let (label, t) = fx
                .get(index)
                .ok_or_else(|| fail(2, format!("index must be below {}", fx.len())))?
                .clone();
            let c = crossbound::cliquesum::compose(&t)?;
            let meta = json!({ "fixture": label, "pieces": t.pieces.len(), "h": c.h });
            (
                "cliquesum",
                c.graph,
                serde_json::to_value(&t).expect("plain data"),
                meta,
            )
        }
    };
    Ok(json!({
        "family": name,
        "seed": seed,
        "graph": GraphJson::from(&graph),
        "certificate": certificate,
        "metadata": metadata,
    }))
}
