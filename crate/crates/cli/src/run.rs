use ncgauss::cumulant::{self, CumulantSpec};
use ncgauss::forms::{self, QuadraticForm};
use ncgauss::io::{self, rational_to_json, vector_to_json};
use ncgauss::lab::{self, CheckReport, LukacsInput};
use ncgauss::scalar::parse_rational;
use ncgauss::wick::{self, Pairing};
use ncgauss::{lattice, Error, LatticeFamily, Matrix, NCPolynomial, Partition, Rational, Result, WickState};
use serde_json::{json, Value};

use crate::args::*;

pub enum Outcome {
    Value(Value),
    Report { json: Value, passed: bool },
}

/// Every leaf subcommand with the library operation it exposes.
pub const COMMANDS: &[(&str, &str)] = &[
    ("partitions enum", "lattice::enumerate"),
    ("partitions mobius", "Partition::mobius"),
    ("partitions kernel", "partition::kernel"),
    ("partitions connect", "lattice::connecting_partitions"),
    ("partitions join", "Partition::join"),
    ("partitions leq", "Partition::leq"),
    ("partitions crossing", "Partition::crossing_number"),
    ("partitions count-maps", "Partition::count_kernel_maps"),
    ("cumulants to-moments", "cumulant::moment_function"),
    ("cumulants from-moments", "cumulant::cumulants_from_moments"),
    ("cumulants linear-form", "cumulant::linear_form_terms"),
    ("wick", "wick::wick_moment"),
    ("clt", "wick::clt_moment"),
    ("qform single", "forms::qform_cumulant"),
    ("qform joint", "forms::qform_joint_cumulants"),
    ("qform independence", "forms::qform_independence_check"),
    ("qform lq", "forms::lq_independence_data"),
    ("qform shifted", "forms::shifted_squares_decomposition"),
    ("check stability", "lab::check_stability"),
    ("check maxwell", "lab::check_maxwell_forward"),
    ("check bernstein", "lab::check_bernstein"),
    ("check skitovic", "lab::check_skitovic_failure"),
    ("check cramer", "lab::check_cramer_failure"),
    ("check sd-identity", "lab::check_sd_identity"),
    ("check lukacs", "lab::check_lukacs"),
    ("matrix orthogonal", "Matrix::is_orthogonal"),
    ("matrix irreducible", "Matrix::is_irreducible"),
    ("commands", "command table"),
];

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn value(v: Value) -> Result<Outcome> {
    Ok(Outcome::Value(v))
}

fn report(rep: CheckReport) -> Result<Outcome> {
    Ok(Outcome::Report { passed: rep.passed(), json: rep.to_json() })
}

fn family(text: &str) -> Result<LatticeFamily> {
    text.parse()
}

fn partition(text: &str) -> Result<Partition> {
    text.parse()
}

fn rational(text: &str) -> Result<Rational> {
    parse_rational(text)
}

impl Payload {
    fn load(&self) -> Result<Value> {
        match (&self.json, &self.spec) {
            (Some(text), None) => io::parse_json(text),
            (None, Some(path)) => io::read_json(path),
            (Some(_), Some(_)) => Err(bad("give either --json or --spec, not both")),
            (None, None) => Err(bad("missing input: pass --json or --spec")),
        }
    }

    fn is_given(&self) -> bool {
        self.json.is_some() || self.spec.is_some()
    }
}

impl MatrixInput {
    fn load(&self) -> Result<Option<Matrix<Rational>>> {
        match (&self.matrix, &self.matrix_json) {
            (Some(path), None) => Ok(Some(io::matrix_from_json(&io::read_json(path)?)?)),
            (None, Some(text)) => Ok(Some(io::matrix_from_json(&io::parse_json(text)?)?)),
            (Some(_), Some(_)) => Err(bad("give either --matrix or --matrix-json, not both")),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<Matrix<Rational>> {
        self.load()?.ok_or_else(|| bad("missing matrix: pass --matrix or --matrix-json"))
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("input needs a '{key}' field")))
}

fn specs_field(v: &Value) -> Result<Vec<CumulantSpec<Rational>>> {
    let list = match v {
        Value::Array(_) => v,
        _ => field(v, "specs")?,
    };
    list.as_array().ok_or_else(|| bad("'specs' must be an array"))?.iter().map(io::spec_from_json).collect()
}

fn matrices_field(v: &Value) -> Result<Vec<Matrix<Rational>>> {
    let list = match v {
        Value::Array(_) => v,
        _ => field(v, "matrices")?,
    };
    list.as_array().ok_or_else(|| bad("'matrices' must be an array"))?.iter().map(io::matrix_from_json).collect()
}

fn partition_list(ps: &[Partition]) -> Value {
    Value::Array(ps.iter().map(|p| json!(p.to_string())).collect())
}

pub fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Partitions(c) => partitions(c),
        Command::Cumulants(c) => cumulants(c),
        Command::Wick(a) => {
            let w = io::parse_weight(&a.weight)?;
            let word = io::parse_word(&a.word);
            value(json!({"value": rational_to_json(&wick::wick_moment(&w, &word)?)}))
        }
        Command::Clt(a) => clt(a),
        Command::Qform(c) => qform(c),
        Command::Check(c) => check(c),
        Command::Matrix(c) => matrix(c),
        Command::Commands => {
            let table: Vec<Value> = COMMANDS.iter().map(|(c, op)| json!({"command": c, "operation": op})).collect();
            value(Value::Array(table))
        }
    }
}

fn partitions(cmd: &PartitionsCmd) -> Result<Outcome> {
    match cmd {
        PartitionsCmd::Enum { family: f, n, count_only } => {
            let f = family(f)?;
            if *n > 16 {
                return Err(Error::DegreeCap { degree: *n, cap: 16 });
            }
            let ps = lattice::enumerate(f, *n);
            if *count_only {
                return value(json!({"count": ps.len()}));
            }
            value(json!({"family": f.name(), "n": n, "count": ps.len(), "partitions": partition_list(&ps)}))
        }
        PartitionsCmd::Mobius { p, q } => {
            let p = partition(p)?;
            let q = match q {
                Some(q) => partition(q)?,
                None => Partition::one_block(p.n()),
            };
            let mu: Rational = p.mobius(&q)?;
            value(json!({"p": p.to_string(), "q": q.to_string(), "mobius": rational_to_json(&mu)}))
        }
        PartitionsCmd::Kernel { word } => {
            let word = io::parse_word(word);
            value(json!({"kernel": ncgauss::kernel(&word).to_string()}))
        }
        PartitionsCmd::Connect { grouping, family: f } => {
            let g = partition(grouping)?;
            let ps = lattice::connecting_partitions(&g, family(f)?);
            value(json!({"grouping": g.to_string(), "count": ps.len(), "partitions": partition_list(&ps)}))
        }
        PartitionsCmd::Join { p, q } => value(json!({"join": partition(p)?.join(&partition(q)?)?.to_string()})),
        PartitionsCmd::Leq { p, q } => value(json!({"leq": partition(p)?.leq(&partition(q)?)?})),
        PartitionsCmd::Crossing { p } => value(json!({"crossings": partition(p)?.crossing_number()?})),
        PartitionsCmd::CountMaps { p, pool } => {
            value(json!({"count": partition(p)?.count_kernel_maps(*pool).to_string()}))
        }
    }
}

fn cumulants(cmd: &CumulantsCmd) -> Result<Outcome> {
    match cmd {
        CumulantsCmd::ToMoments { input, max_order, word, partition: p } => {
            let spec = io::spec_from_json(&input.load()?)?;
            match (word, p) {
                (Some(word), None) => {
                    let word = io::parse_word(word);
                    value(json!({"value": rational_to_json(&cumulant::moments_from_cumulants(&spec, &word)?)}))
                }
                (Some(word), Some(p)) => {
                    let word = io::parse_word(word);
                    let v = cumulant::partitioned_cumulant(&spec, &partition(p)?, &word)?;
                    value(json!({"value": rational_to_json(&v)}))
                }
                (None, Some(_)) => Err(bad("--partition needs --word")),
                (None, None) => value(io::moments_to_json(&cumulant::moment_function(&spec, *max_order)?)),
            }
        }
        CumulantsCmd::FromMoments { input, family: f } => {
            let m = io::moments_from_json(&input.load()?)?;
            value(io::spec_to_json(&cumulant::cumulants_from_moments(&m, family(f)?)?))
        }
        CumulantsCmd::LinearForm { input, matrix: mi } => {
            let v = input.load()?;
            let c = match mi.load()? {
                Some(c) => c,
                None => io::matrix_from_json(field(&v, "matrix")?)?,
            };
            let specs = specs_field(&v)?;
            let args: Vec<usize> = field(&v, "args")?
                .as_array()
                .ok_or_else(|| bad("'args' must be an array of 1-based row numbers"))?
                .iter()
                .map(|a| match a.as_u64() {
                    Some(r) if r >= 1 => Ok(r as usize - 1),
                    _ => Err(bad(format!("bad row number {a}"))),
                })
                .collect::<Result<_>>()?;
            let terms = cumulant::linear_form_terms(&c, &specs, &args)?;
            let total = terms.iter().fold(Rational::from_integer(0.into()), |acc, t| acc + &t.value);
            let terms: Vec<Value> = terms
                .iter()
                .map(|t| {
                    json!({
                        "column": t.column + 1,
                        "coefficient": rational_to_json(&t.coefficient),
                        "cumulant": rational_to_json(&t.cumulant),
                        "value": rational_to_json(&t.value),
                    })
                })
                .collect();
            value(json!({"value": rational_to_json(&total), "terms": terms}))
        }
    }
}

fn clt(a: &CltArgs) -> Result<Outcome> {
    let result = match (&a.moments, &a.json) {
        (Some(m), None) => {
            let table = wick::factorized_table(io::parse_vector(m)?);
            (wick::clt_moment(a.n, a.max_order, &table)?, wick::clt_limit(a.max_order, &table)?)
        }
        (None, Some(text)) => {
            let table = io::partition_table_from_json(&io::parse_json(text)?)?;
            let lookup = |p: &Partition| table.get(p).cloned().ok_or_else(|| Error::MissingEntry(p.to_string()));
            (wick::clt_moment(a.n, a.max_order, lookup)?, wick::clt_limit(a.max_order, lookup)?)
        }
        _ => return Err(bad("give exactly one of --moments or --json")),
    };
    let (m, limit) = result;
    value(json!({
        "samples": m.samples,
        "degree": m.degree,
        "weighted_sum": rational_to_json(&m.weighted_sum),
        "exponent": format!("{}/2", m.exponent_times_two()),
        "value": m.value().as_ref().map(rational_to_json),
        "limit": rational_to_json(&limit),
    }))
}

fn natural(w: &ncgauss::PairWeight<Rational>) -> LatticeFamily {
    w.matching_family().unwrap_or(LatticeFamily::All)
}

fn qform(cmd: &QformCmd) -> Result<Outcome> {
    match cmd {
        QformCmd::Single { matrix: mi, weight, max_order } => {
            let a = QuadraticForm::symmetric(mi.require()?)?;
            let w = io::parse_weight(weight)?;
            let ksq = forms::square_cumulants(&w, natural(&w), *max_order)?;
            let ks = (1..=*max_order).map(|n| forms::qform_cumulant(a.matrix(), &ksq, n)).collect::<Result<Vec<_>>>()?;
            value(json!({"weight": w.name(), "square_cumulants": vector_to_json(&ksq), "cumulants": vector_to_json(&ks)}))
        }
        QformCmd::Joint { input, weight, variance } => {
            let ms = matrices_field(&input.load()?)?;
            let w = io::parse_weight(weight)?;
            let v = forms::qform_joint_cumulants(&ms, &w, &rational(variance)?)?;
            value(json!({"value": rational_to_json(&v)}))
        }
        QformCmd::Independence { input, weight, max_order } => {
            let v = input.load()?;
            let a = io::matrix_from_json(field(&v, "a")?)?;
            let b = io::matrix_from_json(field(&v, "b")?)?;
            let w = io::parse_weight(weight)?;
            let r = forms::qform_independence_check(&a, &b, &w, *max_order)?;
            let mixed: Vec<Value> = r
                .mixed
                .iter()
                .map(|c| json!({"args": c.describe(&["Q", "Q'"]), "value": rational_to_json(&c.value)}))
                .collect();
            value(json!({
                "product": io::matrix_to_json(&r.product),
                "product_is_zero": r.product_is_zero,
                "trace_identity": rational_to_json(&r.trace_identity),
                "product_norm": rational_to_json(&r.product_norm),
                "mixed_all_zero": r.mixed_all_zero(),
                "consistent": r.consistent(),
                "mixed": mixed,
            }))
        }
        QformCmd::Lq { matrix: mi, vector, weight, max_order } => {
            let a = mi.require()?;
            let b = io::parse_vector(vector)?;
            let w = io::parse_weight(weight)?;
            let r = forms::lq_independence_data(&a, &b, &w, *max_order)?;
            let mixed: Vec<Value> = r
                .mixed
                .iter()
                .map(|c| json!({"args": c.describe(&["L", "Q"]), "value": rational_to_json(&c.value)}))
                .collect();
            value(json!({
                "ab": vector_to_json(&r.ab),
                "bta": vector_to_json(&r.bta),
                "diagnostics": vector_to_json(&r.diagnostics),
                "annihilates": r.annihilates(),
                "mixed_all_zero": r.mixed_all_zero(),
                "mixed": mixed,
            }))
        }
        QformCmd::Shifted { vector, weight, family: f, max_order, override_pairing } => {
            let a = io::parse_vector(vector)?;
            let w = io::parse_weight(weight)?;
            let f = match f {
                Some(f) => family(f)?,
                None => natural(&w),
            };
            let pairing = if *override_pairing { Pairing::Override } else { Pairing::Enforce };
            let y = forms::shifted_squares(&a);
            let sq = NCPolynomial::generator(0).pow(2);
            let state = WickState::new(w.clone());
            let mut direct = Vec::new();
            let mut decomposed = Vec::new();
            for m in 1..=*max_order {
                let ksq = wick::joint_cumulant_of_polynomials_with(&state, f, &vec![sq.clone(); m], pairing)?;
                direct.push(wick::joint_cumulant_of_polynomials_with(&state, f, &vec![y.clone(); m], pairing)?);
                decomposed.push(forms::shifted_squares_decomposition(&a, f, &ksq, m)?);
            }
            value(json!({
                "family": f.name(),
                "weight": w.name(),
                "direct": vector_to_json(&direct),
                "decomposition": vector_to_json(&decomposed),
                "agree": direct == decomposed,
            }))
        }
    }
}

fn check(cmd: &CheckCmd) -> Result<Outcome> {
    match cmd {
        CheckCmd::Stability { input, vector, max_order } => {
            let spec = io::spec_from_json(&input.load()?)?;
            report(lab::check_stability(&io::parse_vector(vector)?, &spec, *max_order)?)
        }
        CheckCmd::Maxwell { matrix: mi, weight, max_order } => {
            report(lab::check_maxwell_forward(&io::parse_weight(weight)?, &mi.require()?, *max_order)?)
        }
        CheckCmd::Bernstein { input, vector, max_order } => {
            let coeffs: [Rational; 4] =
                io::parse_vector(vector)?.try_into().map_err(|_| bad("--vector needs alpha,beta,gamma,delta"))?;
            let specs: [CumulantSpec<Rational>; 2] =
                specs_field(&input.load()?)?.try_into().map_err(|_| bad("Bernstein check needs exactly two specs"))?;
            report(lab::check_bernstein(coeffs, &specs, *max_order)?)
        }
        CheckCmd::Skitovic { eps, max_order } => report(lab::check_skitovic_failure(&rational(eps)?, *max_order)?),
        CheckCmd::Cramer { eps, grid, hankel_size } => match (eps, grid) {
            (Some(e), None) => report(lab::check_cramer_failure(&rational(e)?, *hankel_size)?),
            (None, Some(g)) => {
                let (reports, first) = lab::cramer_grid(&io::parse_vector(g)?, *hankel_size)?;
                let passed = first.is_none();
                let json = json!({
                    "reports": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
                    "first_failure": first.as_ref().map(rational_to_json),
                });
                Ok(Outcome::Report { json, passed })
            }
            _ => Err(bad("give exactly one of --eps or --grid")),
        },
        CheckCmd::SdIdentity { input, vector, alpha, beta, max_order } => {
            let specs = specs_field(&input.load()?)?;
            let b = io::parse_vector(vector)?;
            report(lab::check_sd_identity(&b, &specs, &rational(alpha)?, &rational(beta)?, *max_order)?)
        }
        CheckCmd::Lukacs { n, weight, input, max_order } => {
            let lukacs_input = match (weight, input.is_given()) {
                (Some(w), false) => LukacsInput::Gaussian(io::parse_weight(w)?),
                (None, true) => {
                    let spec = io::spec_from_json(&input.load()?)?;
                    if spec.labels().len() != 1 {
                        return Err(Error::InvalidSpec("Lukacs check needs a single-label spec".into()));
                    }
                    let cumulants = (1..=*max_order).map(|m| spec.diagonal(0, m)).collect();
                    LukacsInput::Cumulants { family: spec.family(), cumulants }
                }
                _ => return Err(bad("give exactly one of --weight or a spec (--json/--spec)")),
            };
            report(lab::check_lukacs(*n, &lukacs_input, *max_order)?)
        }
    }
}

fn matrix(cmd: &MatrixCmd) -> Result<Outcome> {
    match cmd {
        MatrixCmd::Orthogonal { matrix: mi } => value(json!({"orthogonal": mi.require()?.is_orthogonal()})),
        MatrixCmd::Irreducible { matrix: mi } => value(json!({"irreducible": mi.require()?.is_irreducible()?})),
    }
}
