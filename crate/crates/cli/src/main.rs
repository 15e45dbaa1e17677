use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path as FsPath;
use std::process::ExitCode;

use clap::{Parser as ClapParser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qha_core::coxeter::{cartan_inverse, cartan_matrix, coxeter_phi, coxeter_psi};
use qha_core::cyclotomic::Cyclotomic;
use qha_core::field::Rational;
use qha_core::knit::{format_multiset, hat_an_predict, is_hat_a, multiset_to_json, Knitter};
use qha_core::matrix::format_poly;
use qha_core::relations::{
    parse_element, verify_against_knitting, verify_preprojective, Comparison, Engine, EngineConfig,
    GradedDimTable, RelationFamily,
};
use qha_core::scalar::{parse_weight, AnyScalar, Parser};
use qha_core::weights::{
    a_n_shortcut_weight, check_vm, dynkin_eigenweight, extended_dynkin_semiregular_weight,
    is_directed_a, is_regular, is_semiregular, preprojective_preinjective_dims, radical_vector,
    regularity_forms,
};
use qha_core::{
    catalog, classify, AnyWeight, Error, Field, FieldSpec, Fp, IndecMultiset, Matrix, Quiver,
    QuiverClass, ZQVertex,
};

#[derive(ClapParser, Debug)]
#[command(name = "qha", version, about = "Exact computations for quiver Heisenberg and preprojective algebras")]
struct Cli {
    /// Scalar field: Q, Fp(p) or Q(zeta_n).
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Vertex weight, e.g. `3,-1,-1`, or a file holding one.
    #[arg(long, global = true, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long, global = true)]
    max_len: Option<usize>,
    #[arg(long, global = true)]
    max_star: Option<usize>,
    /// Window depth for infinite-type quivers.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest number of paths allowed in one bidegree cell.
    #[arg(long, global = true, default_value_t = EngineConfig::DEFAULT_CAP)]
    cap_cell_size: usize,
    /// Also scan the length band just past the Dynkin bound and require it to vanish.
    #[arg(long, global = true)]
    no_trust_bound: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dynkin / extended Dynkin / wild, with the Coxeter number.
    Classify { quiver: String },
    /// Cartan matrix and its inverse.
    Cartan { quiver: String },
    /// Coxeter matrices Φ and Ψ and the characteristic polynomial of Ψ.
    Coxeter { quiver: String },
    /// Indecomposables of a Dynkin quiver with dimension vectors.
    Indecs { quiver: String },
    /// The AR quiver window as a DOT graph.
    Arq { quiver: String },
    /// Ladder L_0, L_1, … starting at a vertex label (P_i) or `label,m`.
    Ladder {
        quiver: String,
        start: String,
        n_max: Option<usize>,
    },
    /// Regularity of a weight, or the linear forms deciding it.
    Regular {
        quiver: String,
        /// Weight as `v=…`; overrides --weight.
        #[arg(id = "positional_weight", value_name = "WEIGHT", allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Ψ-eigenweight (Dynkin) or C⁻¹δ (extended Dynkin).
    Eigenweight {
        quiver: String,
        /// Vertex label used to seed the Dynkin construction.
        vertex: Option<String>,
        /// Use the closed form for the directed A_N.
        #[arg(long)]
        shortcut: bool,
    },
    /// Geometric sums V_1(λ), …, V_n(λ) and whether any vanishes.
    Vm {
        #[arg(allow_hyphen_values = true)]
        lambda: String,
        n: usize,
    },
    /// Bigraded dimensions of the quotient (QHA with a weight, preprojective without).
    Dims {
        quiver: String,
        /// Weight as `v=…`; overrides --weight.
        #[arg(id = "positional_weight", value_name = "WEIGHT", allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Whether a homogeneous element is zero in the quotient.
    Zero {
        quiver: String,
        /// `[v=WEIGHT] ELEMENT`
        #[arg(allow_hyphen_values = true, num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    /// Compare the relation engine with knitting at every vertex.
    Verify {
        quiver: String,
        /// Weight as `v=…`; overrides --weight.
        #[arg(id = "positional_weight", value_name = "WEIGHT", allow_hyphen_values = true)]
        weight: Option<String>,
    },
}

/// Result of a command: printed text and the exit status.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceBound(_) => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// File path or builtin name.
fn load_quiver(arg: &str) -> std::result::Result<Quiver, Failure> {
    let path = FsPath::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{arg}: {e}")))?;
        let q = if path.extension().is_some_and(|e| e == "json") {
            Quiver::from_json(&text)
        } else {
            Quiver::parse(&text)
        };
        return Ok(q?);
    }
    catalog::builtin(arg).map_err(|_| input(format!("`{arg}` is neither a file nor a builtin quiver")))
}

fn vertex_arg(q: &Quiver, label: &str) -> std::result::Result<usize, Failure> {
    let label = label.trim();
    let bare = label.strip_prefix("P_").or_else(|| label.strip_prefix('P'));
    match q.vertex_index(label) {
        Ok(i) => Ok(i),
        Err(e) => match bare.map(|b| q.vertex_index(b)) {
            Some(Ok(i)) => Ok(i),
            _ => Err(e.into()),
        },
    }
}

/// Element types reachable from the command line.
trait CliField: Field {
    fn from_any(s: AnyScalar) -> Option<Self>;
}

impl CliField for Rational {
    fn from_any(s: AnyScalar) -> Option<Self> {
        match s {
            AnyScalar::Rational(x) => Some(x),
            _ => None,
        }
    }
}

impl CliField for Fp {
    fn from_any(s: AnyScalar) -> Option<Self> {
        match s {
            AnyScalar::Prime(x) => Some(x),
            _ => None,
        }
    }
}

impl CliField for Cyclotomic {
    fn from_any(s: AnyScalar) -> Option<Self> {
        match s {
            AnyScalar::Cyclotomic(x) => Some(x),
            _ => None,
        }
    }
}

macro_rules! with_weight {
    ($w:expr, $v:ident => $body:expr) => {
        match $w {
            AnyWeight::Rational($v) => $body,
            AnyWeight::Prime($v) => $body,
            AnyWeight::Cyclotomic($v) => $body,
        }
    };
}

macro_rules! with_scalar {
    ($s:expr, $x:ident => $body:expr) => {
        match $s {
            AnyScalar::Rational($x) => $body,
            AnyScalar::Prime($x) => $body,
            AnyScalar::Cyclotomic($x) => $body,
        }
    };
}

struct Ctx {
    spec: FieldSpec,
    weight: Option<String>,
    max_len: Option<usize>,
    max_star: Option<usize>,
    depth: usize,
    format: Format,
    cap: usize,
    no_trust_bound: bool,
}

impl Ctx {
    /// Positional `v=…` wins over `--weight`; a path to an existing file is read.
    fn weight(&self, positional: Option<&str>) -> std::result::Result<Option<AnyWeight>, Failure> {
        let raw = match positional {
            Some(p) => Some(p.strip_prefix("v=").unwrap_or(p).to_string()),
            None => self.weight.clone(),
        };
        let Some(raw) = raw else { return Ok(None) };
        let text = if FsPath::new(&raw).is_file() {
            std::fs::read_to_string(&raw).map_err(|e| input(format!("{raw}: {e}")))?
        } else {
            raw
        };
        Ok(Some(parse_weight(&text, self.spec)?))
    }

    fn parser(&self) -> Parser {
        Parser::new(self.spec)
    }

    fn engine_config(&self, q: &Quiver) -> std::result::Result<EngineConfig, Failure> {
        let base = match classify(q) {
            QuiverClass::Dynkin { .. } => EngineConfig::dynkin_default(q, self.no_trust_bound)?,
            _ => {
                let len = self
                    .max_len
                    .ok_or_else(|| input("--max-len is required for quivers of infinite type"))?;
                EngineConfig::new(len, len)
            }
        };
        Ok(EngineConfig {
            max_len: self.max_len.unwrap_or(base.max_len),
            max_star: self.max_star.unwrap_or(base.max_star),
            cell_cap: self.cap,
        })
    }
}

fn matrix_text<T: std::fmt::Display + Clone>(m: &Matrix<T>) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix_csv<T: std::fmt::Display + Clone>(m: &Matrix<T>) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix_json(m: &Matrix<i64>) -> Value {
    json!(m.to_rows())
}

fn render(ctx: &Ctx, text: String, value: Value) -> String {
    match ctx.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("serializable"),
        _ => text,
    }
}

fn cmd_classify(ctx: &Ctx, q: &Quiver) -> CmdResult {
    let class = classify(q);
    let value = match &class {
        QuiverClass::Dynkin {
            kind,
            rank,
            coxeter_number,
        } => json!({"class": "dynkin", "type": kind.to_string(), "rank": rank, "coxeter_number": coxeter_number}),
        QuiverClass::ExtendedDynkin { kind, rank } => {
            json!({"class": "extended_dynkin", "type": kind.to_string(), "rank": rank})
        }
        QuiverClass::Wild => json!({"class": "wild"}),
    };
    Ok(Outcome::ok(render(ctx, class.to_string(), value)))
}

fn cmd_cartan(ctx: &Ctx, q: &Quiver) -> CmdResult {
    let (c, ci) = (cartan_matrix(q), cartan_inverse(q));
    let text = match ctx.format {
        Format::Csv => matrix_csv(&c),
        _ => format!("C =\n{}\nC^-1 =\n{}", matrix_text(&c), matrix_text(&ci)),
    };
    Ok(Outcome::ok(render(ctx, text, json!({"cartan": matrix_json(&c), "inverse": matrix_json(&ci)}))))
}

fn cmd_coxeter(ctx: &Ctx, q: &Quiver) -> CmdResult {
    let (phi, psi) = (coxeter_phi(q), coxeter_psi(q));
    let cp = psi
        .to_field::<Rational>()
        .char_poly()
        .expect("square matrix");
    let poly = format_poly(&cp, "t");
    let mut text = format!(
        "Phi =\n{}\nPsi =\n{}\nchar poly of Psi: {poly}",
        matrix_text(&phi),
        matrix_text(&psi)
    );
    let mut value = json!({"phi": matrix_json(&phi), "psi": matrix_json(&psi), "char_poly_psi": poly});
    if let Some(h) = classify(q).coxeter_number() {
        let order_ok = phi.to_field::<Rational>().pow(h) == Matrix::identity(q.num_vertices());
        write!(text, "\nPhi^{h} = I: {order_ok}").unwrap();
        value["phi_order_h"] = json!(order_ok);
    }
    Ok(Outcome::ok(render(ctx, text, value)))
}

fn dims_str(d: &[i64]) -> String {
    format!("({})", d.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn cmd_indecs(ctx: &Ctx, q: &Quiver) -> CmdResult {
    let k = Knitter::new(q);
    let h = classify(q).coxeter_number().ok_or(Error::NotDynkin)?;
    let indecs = k.enumerate_indecomposables()?;
    let r = q.num_vertices() as u64;
    let sum: i64 = indecs.iter().map(|(_, d)| d.iter().sum::<i64>()).sum();
    let sum_sq: i64 = indecs.iter().map(|(_, d)| d.iter().sum::<i64>().pow(2)).sum();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("vertex,power,dimvec,names\n");
    for (x, d) in &indecs {
        let names = k.module_names(*x)?;
        writeln!(text, "({},{})  {}  {}", q.label(x.vertex), x.power, dims_str(d), names.join(" ")).unwrap();
        writeln!(csv, "{},{},\"{}\",{}", q.label(x.vertex), x.power, dims_str(d), names.join(" ")).unwrap();
        rows.push(json!({"vertex": [q.label(x.vertex), x.power], "dimvec": d, "names": names}));
    }
    write!(
        text,
        "count {} (rh/2 = {})\nsum dim {sum} (rh(h+1)/6 = {})\nsum dim^2 {sum_sq} (rh^2(h+1)/12 = {})",
        indecs.len(),
        r * h / 2,
        r * h * (h + 1) / 6,
        r * h * h * (h + 1) / 12
    )
    .unwrap();
    let ok = indecs.len() as u64 == r * h / 2
        && sum as u64 == r * h * (h + 1) / 6
        && sum_sq as u64 == r * h * h * (h + 1) / 12;
    let value = json!({"indecomposables": rows, "count": indecs.len(), "sum_dim": sum, "sum_dim_sq": sum_sq});
    let text = if ctx.format == Format::Csv { csv } else { text };
    Ok(Outcome {
        text: render(ctx, text, value),
        ok,
    })
}

fn cmd_arq(ctx: &Ctx, q: &Quiver) -> CmdResult {
    let k = Knitter::new(q);
    let window = k.default_window(ctx.depth)?;
    if ctx.format == Format::Json {
        let nodes = window
            .iter()
            .map(|x| {
                Ok(json!({"vertex": [q.label(x.vertex), x.power], "dimvec": k.dimvec(*x)?, "names": k.module_names(*x)?}))
            })
            .collect::<qha_core::Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        for x in &window {
            for (y, m) in k.successors(*x).iter() {
                if window.contains(&y) {
                    edges.push(json!({"from": [q.label(x.vertex), x.power], "to": [q.label(y.vertex), y.power], "mult": m}));
                }
            }
        }
        let value = json!({"nodes": nodes, "edges": edges});
        return Ok(Outcome::ok(serde_json::to_string_pretty(&value).expect("serializable")));
    }
    Ok(Outcome::ok(k.export_dot(&window)?.trim_end().to_string()))
}

fn parse_start(q: &Quiver, s: &str) -> std::result::Result<ZQVertex, Failure> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if let Some((label, m)) = t.split_once(',') {
        let m: i64 = m.trim().parse().map_err(|_| input(format!("bad power in `{s}`")))?;
        return Ok(ZQVertex::new(vertex_arg(q, label)?, m));
    }
    Ok(ZQVertex::new(vertex_arg(q, t)?, 0))
}

fn cmd_ladder(ctx: &Ctx, q: &Quiver, start: &str, n_max: Option<usize>) -> CmdResult {
    let k = Knitter::new(q);
    let x = parse_start(q, start)?;
    let n_max = match (n_max, k.class().coxeter_number()) {
        (Some(n), _) => n,
        (None, Some(h)) => h as usize - 1,
        (None, None) => ctx.depth,
    };
    let ladder = k.ladder(&IndecMultiset::singleton(x), n_max)?;
    let mut text = String::new();
    let mut steps = Vec::new();
    let mut ok = true;
    let hat = is_hat_a(q) && x.power == 0;
    for (n, l) in ladder.iter().enumerate() {
        let d = k.multiset_dimvec(l)?;
        write!(text, "L{n} = {}  dim {}", format_multiset(q, l), dims_str(&d)).unwrap();
        let mut step = json!({"n": n, "summands": multiset_to_json(q, l), "dimvec": d});
        if hat {
            let predicted = hat_an_predict(q, x.vertex, n)?;
            let agree = &predicted == l;
            ok &= agree;
            write!(text, "  closed form {}", if agree { "agrees" } else { "DIFFERS" }).unwrap();
            step["closed_form_agrees"] = json!(agree);
        }
        text.push('\n');
        steps.push(step);
    }
    Ok(Outcome {
        text: render(ctx, text.trim_end().to_string(), json!({"ladder": steps})),
        ok,
    })
}

fn cmd_regular(ctx: &Ctx, q: &Quiver, positional: Option<&str>) -> CmdResult {
    let Some(w) = ctx.weight(positional)? else {
        let k = Knitter::new(q);
        let (label, forms) = if k.class().is_dynkin() {
            ("positive roots", regularity_forms(q)?)
        } else {
            ("preprojective and preinjective dimension vectors", preprojective_preinjective_dims(&k, ctx.depth)?)
        };
        let mut text = format!("v is regular iff v·d != 0 for each of these {label}:\n");
        for d in &forms {
            writeln!(text, "{}", dims_str(d)).unwrap();
        }
        return Ok(Outcome::ok(render(ctx, text.trim_end().to_string(), json!({"forms": forms}))));
    };
    let report = with_weight!(&w, v => {
        let r = is_semiregular(q, v, ctx.depth)?;
        let mut text = r.verdict().to_string();
        for (d, _) in &r.witnesses {
            write!(text, "\nvanishes on {}", dims_str(d)).unwrap();
        }
        (text, r.to_json())
    });
    Ok(Outcome::ok(render(ctx, report.0, report.1)))
}

fn cmd_eigenweight(ctx: &Ctx, q: &Quiver, vertex: Option<&str>, shortcut: bool) -> CmdResult {
    let entries = |v: &[Cyclotomic]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    match classify(q) {
        QuiverClass::Dynkin { .. } => {
            let (ew, lambda) = if shortcut {
                let (ew, l) = a_n_shortcut_weight(q)?;
                (ew, Some(l))
            } else {
                let i0 = vertex.map(|v| vertex_arg(q, v)).transpose()?.unwrap_or(0);
                (dynkin_eigenweight(q, i0)?, None)
            };
            let regular = is_regular(q, &ew.weight)?;
            let field = format!("Q(zeta_{})", ew.field.conductor());
            let mut text = format!(
                "field {field}\nv = ({})\nPsi v = ({}) v: verified\n{}",
                entries(&ew.weight).join(", "),
                ew.eigenvalue,
                regular.verdict()
            );
            let mut value = json!({
                "field": field,
                "weight": entries(&ew.weight),
                "eigenvalue": ew.eigenvalue.to_string(),
                "eigen_equation": true,
                "regularity": regular.to_json(),
            });
            if let Some(l) = lambda {
                write!(text, "\nlambda = {l}").unwrap();
                value["lambda"] = json!(l.to_string());
                if is_directed_a(q) {
                    let n = q.num_vertices();
                    let mut all_nonzero = true;
                    let zero = ew.field.from_rational(Rational::from_i64(0));
                    for i in 0..n {
                        for j in i..n {
                            let chi = ew.weight[i..=j].iter().cloned().fold(zero.clone(), |a, b| a + b);
                            all_nonzero &= chi != zero;
                        }
                    }
                    write!(text, "\nweighted chi of every interval module nonzero: {all_nonzero}").unwrap();
                    value["interval_chi_nonzero"] = json!(all_nonzero);
                }
            }
            Ok(Outcome {
                text: render(ctx, text, value),
                ok: regular.regular == Some(true),
            })
        }
        QuiverClass::ExtendedDynkin { .. } => {
            let delta = radical_vector(q)?;
            let v = extended_dynkin_semiregular_weight(q, &delta)?;
            let rep = is_semiregular(q, &v, ctx.depth)?;
            let vs: Vec<String> = v.iter().map(ToString::to_string).collect();
            let text = format!(
                "delta = {}\nv = C^-1 delta = ({})\nPsi v = v\n{} (depth {})",
                dims_str(&delta),
                vs.join(", "),
                rep.verdict(),
                ctx.depth
            );
            let value = json!({"delta": delta, "weight": vs, "eigenvalue": "1", "semiregularity": rep.to_json()});
            Ok(Outcome {
                text: render(ctx, text, value),
                ok: rep.semiregular == Some(true),
            })
        }
        QuiverClass::Wild => Err(Error::NotExtendedDynkin.into()),
    }
}

fn cmd_vm(ctx: &Ctx, lambda: &str, n: usize) -> CmdResult {
    let s = ctx.parser().scalar(lambda)?;
    let (values, first_zero) = with_scalar!(&s, x => {
        let (series, _) = check_vm(x, n);
        (series.values.iter().map(ToString::to_string).collect::<Vec<_>>(), series.first_zero())
    });
    let mut text = String::new();
    for (m, v) in values.iter().enumerate() {
        writeln!(text, "V_{} = {v}{}", m + 1, if v == "0" { "  <- zero" } else { "" }).unwrap();
    }
    match first_zero {
        Some(m) => write!(text, "vanishes first at m = {m}").unwrap(),
        None => write!(text, "no V_m vanishes for m <= {n}").unwrap(),
    }
    Ok(Outcome {
        text: render(ctx, text, json!({"values": values, "first_zero": first_zero})),
        ok: first_zero.is_none(),
    })
}

fn bound_one(parser: &Parser) -> std::result::Result<AnyScalar, Failure> {
    Ok(parser.scalar("1")?)
}

fn run_dims<T: CliField>(
    q: &Quiver,
    family: RelationFamily<T>,
    unit: T,
    config: EngineConfig,
) -> std::result::Result<GradedDimTable, Failure> {
    Ok(Engine::new(q, &family, config)?.bind(&unit).graded_dims()?)
}

fn table_text(q: &Quiver, t: &GradedDimTable) -> String {
    let r = q.num_vertices();
    let mut out = String::new();
    for i in 0..r {
        writeln!(out, "e_j L e_{} (rows s, columns j):", q.label(i)).unwrap();
        for s in 0..=t.max_star {
            let slice = t.slice(i, s, r);
            if slice.iter().all(|&d| d == 0) {
                continue;
            }
            let cells: Vec<String> = slice.iter().map(u64::to_string).collect();
            writeln!(out, "  s={s}: ({})", cells.join(",")).unwrap();
        }
        let col: Vec<String> = t.column(i, r).iter().map(u64::to_string).collect();
        writeln!(out, "  total: ({})", col.join(",")).unwrap();
    }
    write!(out, "grand total {}", t.total()).unwrap();
    out
}

fn cmd_dims(ctx: &Ctx, q: &Quiver, positional: Option<&str>) -> CmdResult {
    let config = ctx.engine_config(q)?;
    let table = match ctx.weight(positional)? {
        Some(w) => with_weight!(w, v => {
            let unit = v.first().and_then(|x| x.inv().map(|i| i * x.clone())).ok_or_else(|| input("empty weight"))?;
            run_dims(q, RelationFamily::QuiverHeisenberg(v), unit, config)?
        }),
        None => with_scalar!(bound_one(&ctx.parser())?, one => run_dims(q, RelationFamily::Preprojective, one, config)?),
    };
    let text = match ctx.format {
        Format::Csv => table.to_csv(q).trim_end().to_string(),
        Format::Json => serde_json::to_string_pretty(&table.to_json(q)).expect("serializable"),
        _ => table_text(q, &table),
    };
    Ok(Outcome::ok(text))
}

fn zero_in<T: CliField>(
    q: &Quiver,
    family: RelationFamily<T>,
    unit: T,
    text: &str,
    parser: &Parser,
    cap: usize,
) -> std::result::Result<bool, Failure> {
    let engine = Engine::new(q, &family, EngineConfig::new(0, 0).with_cap(cap))?.bind(&unit);
    let scalar = |s: &str| parser.scalar(s).ok().and_then(T::from_any);
    let elem = parse_element(engine.double(), text, family.weight(), &scalar)?;
    let elem = elem.scale(&unit);
    Ok(engine.is_zero(&elem)?)
}

fn cmd_zero(ctx: &Ctx, q: &Quiver, args: &[String]) -> CmdResult {
    let (positional, element) = match args {
        [e] => (None, e.as_str()),
        [w, e] => (Some(w.as_str()), e.as_str()),
        _ => return Err(input("expected [v=WEIGHT] ELEMENT")),
    };
    let parser = ctx.parser();
    let zero = match ctx.weight(positional)? {
        Some(w) => {
            if w.len() != q.num_vertices() {
                return Err(Error::LengthMismatch {
                    expected: q.num_vertices(),
                    got: w.len(),
                }
                .into());
            }
            with_weight!(w, v => {
                let unit = v[0].inv().map(|i| i * v[0].clone()).ok_or(Error::NonSincereWeight(0))?;
                zero_in(q, RelationFamily::QuiverHeisenberg(v), unit, element, &parser, ctx.cap)?
            })
        }
        None => with_scalar!(bound_one(&parser)?, one => zero_in(q, RelationFamily::Preprojective, one, element, &parser, ctx.cap)?),
    };
    let verdict = if zero { "ZERO" } else { "NONZERO" };
    Ok(Outcome::ok(render(ctx, verdict.into(), json!({"element": element, "zero": zero}))))
}

fn group_line(label: &str, cmps: &[&Comparison]) -> (String, bool) {
    let bad: Vec<&&Comparison> = cmps.iter().filter(|c| !c.ok()).collect();
    let ok = bad.is_empty();
    let mut line = format!("{label}: {} ({} cells)", if ok { "ok" } else { "MISMATCH" }, cmps.len());
    if let Some(c) = bad.first() {
        write!(line, ", first: {c}").unwrap();
    }
    (line, ok)
}

fn cmd_verify(ctx: &Ctx, q: &Quiver, positional: Option<&str>) -> CmdResult {
    let h = classify(q).coxeter_number().ok_or(Error::NotDynkin)? as usize;
    let r = q.num_vertices();
    let w = match ctx.weight(positional)? {
        Some(w) => w,
        None => parse_weight(&vec!["1"; r].join(","), ctx.spec)?,
    };
    if w.len() != r {
        return Err(Error::LengthMismatch { expected: r, got: w.len() }.into());
    }
    let all: Vec<usize> = (0..r).collect();
    let report = with_weight!(&w, v => verify_against_knitting(q, v, &all, ctx.no_trust_bound, ctx.cap)?);
    let pi = verify_preprojective::<Rational>(q, ctx.cap)?;
    let mut text = format!("weight {}\n", if report.regular { "regular" } else { "NOT regular" });
    let mut ok = report.ok();
    for i in 0..r {
        for check in ["ladder", "duality", "vanishing"] {
            let cmps: Vec<&Comparison> = report
                .comparisons
                .iter()
                .filter(|c| c.vertex == i && c.check == check)
                .collect();
            let (line, _) = group_line(&format!("i={} {check}", q.label(i)), &cmps);
            writeln!(text, "{line}").unwrap();
        }
    }
    writeln!(
        text,
        "total {} (rh^2(h+1)/12 = {}): {}",
        report.engine_total,
        report.formula_total,
        if report.engine_total == report.formula_total { "ok" } else { "MISMATCH" }
    )
    .unwrap();
    if let Some(b) = report.extra_band {
        writeln!(text, "length band {}: dim {b}: {}", 2 * h - 3, if b == 0 { "ok" } else { "MISMATCH" }).unwrap();
    }
    let pi_refs: Vec<&Comparison> = pi.iter().collect();
    let (line, pi_ok) = group_line("preprojective slices", &pi_refs);
    ok &= pi_ok;
    write!(text, "{line}\n{}", if ok { "ALL OK" } else { "FAILED" }).unwrap();
    let mut value = report.to_json(q);
    value["preprojective_ok"] = json!(pi_ok);
    value["ok"] = json!(ok);
    Ok(Outcome {
        text: render(ctx, text, value),
        ok,
    })
}

fn run(cli: Cli) -> CmdResult {
    let ctx = Ctx {
        spec: cli.field.parse()?,
        weight: cli.weight,
        max_len: cli.max_len,
        max_star: cli.max_star,
        depth: cli.depth,
        format: cli.format,
        cap: cli.cap_cell_size,
        no_trust_bound: cli.no_trust_bound,
    };
    match &cli.command {
        Command::Classify { quiver } => cmd_classify(&ctx, &load_quiver(quiver)?),
        Command::Cartan { quiver } => cmd_cartan(&ctx, &load_quiver(quiver)?),
        Command::Coxeter { quiver } => cmd_coxeter(&ctx, &load_quiver(quiver)?),
        Command::Indecs { quiver } => cmd_indecs(&ctx, &load_quiver(quiver)?),
        Command::Arq { quiver } => cmd_arq(&ctx, &load_quiver(quiver)?),
        Command::Ladder { quiver, start, n_max } => cmd_ladder(&ctx, &load_quiver(quiver)?, start, *n_max),
        Command::Regular { quiver, weight } => cmd_regular(&ctx, &load_quiver(quiver)?, weight.as_deref()),
        Command::Eigenweight {
            quiver,
            vertex,
            shortcut,
        } => cmd_eigenweight(&ctx, &load_quiver(quiver)?, vertex.as_deref(), *shortcut),
        Command::Vm { lambda, n } => cmd_vm(&ctx, lambda, *n),
        Command::Dims { quiver, weight } => cmd_dims(&ctx, &load_quiver(quiver)?, weight.as_deref()),
        Command::Zero { quiver, args } => cmd_zero(&ctx, &load_quiver(quiver)?, args),
        Command::Verify { quiver, weight } => cmd_verify(&ctx, &load_quiver(quiver)?, weight.as_deref()),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QHA_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
