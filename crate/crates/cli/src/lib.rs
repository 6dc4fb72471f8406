//! Request/response layer behind the `waring` binary. Every command runs
//! through [`run_command`], which never panics on bad input and always returns
//! a [`Response`]; the binary only parses flags and prints.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use waring_core::apolarity::{apolar_generators, build_catalecticant, kernel};
use waring_core::binform::{descartes_gap_bound, is_hyperbolic, parse_form, real_root_count, BinaryForm};
use waring_core::decompose::{
    extract_decomposition_at, flambda_identity_check_at, gen_flambda, gen_pd, verify_decomposition, Coef, Decomposition,
    IdentityCheck, Verification,
};
use waring_core::parse::{parse_rational, parse_scalar};
use waring_core::rank::{
    classify_small_rank, complex_rank, flambda_real_bracket, multiplicity_lower_bound, real_rank, Budget, Claim,
    Evidence, RankCertificate, SmallRank,
};
use waring_core::scalar::approx::DEFAULT_PRECISION;
use waring_core::Error;

pub const PRECISION_ENV: &str = "WARING_DEFAULT_PRECISION";
const PRECISION_RANGE: std::ops::RangeInclusive<u32> = 32..=8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Rank,
    RealRank,
    Decompose,
    Verify,
    Apolar,
    Kernel,
    Classify,
    Family,
    GapBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Flambda { k: usize, lambda: String },
    Pd { d: usize, gamma: String },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_samples: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub numeric_ok: bool,
    /// Reject forms with irrational coefficients.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub rational_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// Decomposition JSON for `verify`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form_text: Option<String>,
    #[serde(default)]
    pub options: Options,
}

impl Request {
    pub fn new(command: Command, form_text: Option<String>) -> Self {
        Request {
            command,
            form_text,
            options: Options::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Response {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// Plain-text rendering for the terminal; the first line is what
    /// `--quiet` prints.
    #[serde(skip)]
    pub human: Vec<String>,
}

impl Response {
    /// 0 on success, 1 for bad input, 2 when the engine caught itself in an
    /// inconsistency.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            None => 0,
            Some(e) if e.kind == ErrorKind::Internal => 2,
            Some(_) => 1,
        }
    }

    pub fn input_error(command: Option<Command>, message: impl Into<String>) -> Self {
        Fail::input(message).into_response(command)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("responses serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("responses serialize")
    }

    pub fn render_human(&self, quiet: bool) -> String {
        if let Some(e) = &self.error {
            return format!("error: {}", e.message);
        }
        if quiet {
            return self.human.first().cloned().unwrap_or_default();
        }
        let mut lines = self.human.clone();
        lines.extend(self.diagnostics.iter().map(|d| format!("note: {d}")));
        lines.join("\n")
    }
}

#[derive(Debug)]
struct Fail {
    kind: ErrorKind,
    message: String,
    position: Option<usize>,
}

impl Fail {
    fn input(message: impl Into<String>) -> Self {
        Fail {
            kind: ErrorKind::Input,
            message: message.into(),
            position: None,
        }
    }

    fn into_response(self, command: Option<Command>) -> Response {
        Response {
            status: Status::Error,
            command,
            result: None,
            diagnostics: Vec::new(),
            error: Some(ErrorInfo {
                kind: self.kind,
                message: self.message,
                position: self.position,
            }),
            human: Vec::new(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let position = match &e {
            Error::Parse { position, .. } => Some(*position),
            _ => None,
        };
        Fail {
            kind: if e.is_internal() { ErrorKind::Internal } else { ErrorKind::Input },
            message: e.to_string(),
            position,
        }
    }
}

struct Outcome {
    result: Value,
    human: Vec<String>,
    diagnostics: Vec<String>,
}

/// Precision from the environment value, if any, else the library default.
pub fn default_precision(env: Option<&str>) -> Result<u32, String> {
    match env {
        None => Ok(DEFAULT_PRECISION),
        Some(text) => text
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|p| PRECISION_RANGE.contains(p))
            .ok_or_else(|| format!("{PRECISION_ENV}={text:?} is not a precision in {PRECISION_RANGE:?} bits")),
    }
}

pub fn run_command(req: &Request, default_precision: u32) -> Response {
    match dispatch(req, default_precision) {
        Ok(o) => Response {
            status: Status::Ok,
            command: Some(req.command),
            result: Some(o.result),
            diagnostics: o.diagnostics,
            error: None,
            human: o.human,
        },
        Err(f) => f.into_response(Some(req.command)),
    }
}

fn dispatch(req: &Request, default_precision: u32) -> Result<Outcome, Fail> {
    let prec = req.options.precision.unwrap_or(default_precision);
    if !PRECISION_RANGE.contains(&prec) {
        return Err(Fail::input(format!("precision {prec} outside {PRECISION_RANGE:?} bits")));
    }
    match req.command {
        Command::Rank => rank(&form(req)?),
        Command::RealRank => real(&form(req)?, &req.options, prec),
        Command::Decompose => decompose(&form(req)?, req.options.numeric_ok, prec),
        Command::Verify => verify(&form(req)?, &req.options),
        Command::Apolar => apolar(&form(req)?),
        Command::Kernel => {
            let r = req.options.r.ok_or_else(|| Fail::input("kernel needs the level r"))?;
            kernel_at(&form(req)?, r)
        }
        Command::Classify => classify(&form(req)?),
        Command::Family => match &req.options.family {
            Some(FamilySpec::Flambda { k, lambda }) => flambda(*k, lambda, prec),
            Some(FamilySpec::Pd { d, gamma }) => pd(*d, gamma),
            None => Err(Fail::input("family needs a family specification (flambda or pd)")),
        },
        Command::GapBound => gap(&form(req)?),
    }
}

fn form(req: &Request) -> Result<BinaryForm, Fail> {
    let text = req
        .form_text
        .as_deref()
        .ok_or_else(|| Fail::input("missing form"))?;
    let f = parse_form(text)?;
    if req.options.rational_only && !f.is_rational() {
        return Err(Fail::input(format!("{f} has irrational coefficients")));
    }
    Ok(f)
}

fn evidence_text(e: &Evidence) -> String {
    match e {
        Evidence::KernelEmptyAt { r } => format!("no apolar form of degree {r}"),
        Evidence::NoSquareFreeMember { r, dim, common_factor } => {
            format!("degree {r}: all {dim}-dimensional apolar forms share a repeated factor of {common_factor}")
        }
        Evidence::NoRealSylvesterForm { r, dim, method } => {
            format!("degree {r}: no real-rooted square-free apolar form (dimension {dim}, {method})")
        }
        Evidence::MultiplicityBound { multiplicity, bound } => {
            format!("root of multiplicity {multiplicity} forces rank >= {bound}")
        }
        Evidence::TauBound { tau } => format!("{tau} real roots counted with multiplicity"),
        Evidence::GapBound { r, forced_nonreal } => {
            format!("degree {r}: coefficient gaps force {forced_nonreal} non-real roots")
        }
        Evidence::ComplexRank { rank } => format!("complex rank {rank}"),
    }
}

fn certificate_lines(cert: &RankCertificate) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(h) = &cert.witness {
        out.push(format!("Sylvester form: {h}"));
    }
    out.extend(cert.lower_bound_evidence.iter().map(|e| format!("  {}", evidence_text(e))));
    out
}

fn rank(f: &BinaryForm) -> Result<Outcome, Fail> {
    let (r, cert) = complex_rank(f)?;
    let mut human = vec![format!("complex rank {r}")];
    human.extend(certificate_lines(&cert));
    Ok(Outcome {
        result: json!({
            "form": f,
            "degree": f.degree(),
            "complex_rank": r,
            "multiplicity_bound": multiplicity_lower_bound(f)?,
            "certificate": cert,
        }),
        human,
        diagnostics: cert.notes.clone(),
    })
}

fn real(f: &BinaryForm, opts: &Options, prec: u32) -> Result<Outcome, Fail> {
    let mut budget = Budget::default();
    if let Some(n) = opts.budget_samples {
        budget.samples = n;
    }
    let cert = real_rank(f, &budget)?;
    let (exact, lo, hi) = match cert.claim {
        Claim::RealRank { r } => (Some(r), r, r),
        Claim::RealRankIn { lo, hi } => (None, lo, hi),
        Claim::ComplexRank { .. } => return Err(Fail::from(Error::Invariant("complex claim from real_rank".into()))),
    };
    let mut result = json!({
        "form": f,
        "degree": f.degree(),
        "real_rank": exact,
        "bracket": [lo, hi],
        "exact": exact.is_some(),
        "hyperbolic": is_hyperbolic(f)?,
        "certificate": cert,
    });
    let mut human = vec![match exact {
        Some(r) => format!("real rank {r}"),
        None => format!("real rank in [{lo}, {hi}]"),
    }];
    human.extend(certificate_lines(&cert));
    if let Some(h) = &cert.witness {
        let dec = extract_decomposition_at(f, h, prec)?;
        let v = verify_decomposition(&dec, f)?;
        human.push(format!("decomposition: {}", v.status()));
        result["decomposition"] = json!(dec);
        result["verification"] = json!(v);
    }
    Ok(Outcome {
        result,
        human,
        diagnostics: cert.notes,
    })
}

/// Exact values verbatim; balls as 15-digit midpoints.
fn coef_text(c: &Coef) -> String {
    match c.as_exact() {
        Some(x) => x.to_string(),
        None => c.to_approx(64).to_decimal(15),
    }
}

fn summand_lines(dec: &Decomposition) -> Vec<String> {
    dec.summands
        .iter()
        .map(|s| {
            let linear = match (s.alpha.as_exact(), s.beta.as_exact()) {
                (Some(a), Some(b)) => BinaryForm::linear(a.clone(), b.clone())
                    .map(|l| l.to_string())
                    .unwrap_or_default(),
                _ => format!("{}*x + ({})*y", coef_text(&s.alpha), coef_text(&s.beta)),
            };
            let lambda = coef_text(&s.lambda);
            let lambda = if lambda.contains(' ') { format!("({lambda})") } else { lambda };
            format!("  {lambda} * ({linear})^{}", dec.degree)
        })
        .collect()
}

fn decompose(f: &BinaryForm, numeric_ok: bool, prec: u32) -> Result<Outcome, Fail> {
    let (r, cert) = complex_rank(f)?;
    let h = cert
        .witness
        .clone()
        .ok_or_else(|| Fail::from(Error::Invariant("rank certificate without witness".into())))?;
    let dec = extract_decomposition_at(f, &h, prec)?;
    if !dec.is_exact() && !numeric_ok {
        return Err(Fail::input(format!(
            "the roots of {h} leave the supported quadratic fields; rerun with --numeric-ok for a numeric decomposition"
        )));
    }
    let v = verify_decomposition(&dec, f)?;
    let mut human = vec![format!("{r} summands, {}", v.status())];
    human.push(format!("Sylvester form: {h}"));
    human.extend(summand_lines(&dec));
    let mut diagnostics = Vec::new();
    if let Verification::Numeric { residual } = &v {
        diagnostics.push(format!("numeric at {prec} bits, residual {}", residual.to_sci_string()));
    }
    Ok(Outcome {
        result: json!({
            "form": f,
            "rank": r,
            "sylvester_form": h,
            "decomposition": dec,
            "verification": v,
        }),
        human,
        diagnostics,
    })
}

fn verify(f: &BinaryForm, opts: &Options) -> Result<Outcome, Fail> {
    let raw = opts
        .decomposition
        .clone()
        .ok_or_else(|| Fail::input("verify needs a decomposition"))?;
    let dec: Decomposition =
        serde_json::from_value(raw).map_err(|e| Fail::input(format!("bad decomposition: {e}")))?;
    let v = verify_decomposition(&dec, f)?;
    let mut human = vec![v.status().to_string()];
    match &v {
        Verification::Mismatch { diff } => human.push(format!("difference: {diff}")),
        Verification::Numeric { residual } => human.push(format!("residual {}", residual.to_sci_string())),
        Verification::Dishonest { reason } => human.push(reason.clone()),
        Verification::ExactMatch => {}
    }
    Ok(Outcome {
        result: json!({ "form": f, "verification": v }),
        human,
        diagnostics: Vec::new(),
    })
}

fn apolar(f: &BinaryForm) -> Result<Outcome, Fail> {
    let p = apolar_generators(f)?;
    let degrees = [p.g1.degree(), p.g2.degree()];
    Ok(Outcome {
        human: vec![format!("{}", p.g1), format!("{}", p.g2)],
        result: json!({ "form": f, "g1": p.g1, "g2": p.g2, "degrees": degrees }),
        diagnostics: Vec::new(),
    })
}

fn kernel_at(f: &BinaryForm, r: usize) -> Result<Outcome, Fail> {
    let cat = build_catalecticant(f, r)?;
    let kb = kernel(&cat);
    let mut human = vec![format!("dimension {}", kb.dim)];
    human.extend(kb.basis.iter().map(|h| format!("  {h}")));
    Ok(Outcome {
        result: json!({
            "form": f,
            "r": r,
            "dim": kb.dim,
            "basis": kb.basis,
            "catalecticant": cat.matrix.row_data(),
        }),
        human,
        diagnostics: Vec::new(),
    })
}

fn classify(f: &BinaryForm) -> Result<Outcome, Fail> {
    let c = classify_small_rank(f)?;
    let mut diagnostics = Vec::new();
    let human = match &c {
        SmallRank::Rank1 => vec!["rank 1".to_string()],
        SmallRank::Rank2 { u, sylvester_form } => {
            vec![format!("rank 2"), format!("Sylvester form: {sylvester_form}"), format!("u = {u}")]
        }
        SmallRank::Rank3(k) => {
            if !k.unique {
                diagnostics.push(format!(
                    "degree {} < 5: other representations of length 3 may exist",
                    f.degree()
                ));
            }
            vec![
                format!("rank 3, {}", k.case.name()),
                format!("Sylvester form: {}", k.sylvester_form),
                format!("u = {}", k.u),
                format!("field: {}", k.field_description),
            ]
        }
        SmallRank::Other { rank } => vec![format!("rank {rank} (no small-rank classification)")],
    };
    Ok(Outcome {
        result: json!({ "form": f, "classification": c }),
        human,
        diagnostics,
    })
}

fn flambda(k: usize, lambda_text: &str, prec: u32) -> Result<Outcome, Fail> {
    let lambda = parse_scalar(lambda_text)?;
    let f = gen_flambda(k, &lambda)?;
    let (r, cert) = complex_rank(&f)?;
    let identity = flambda_identity_check_at(k, &lambda, prec)?;
    let mut human = vec![format!("{f}"), format!("complex rank {r}")];
    let mut diagnostics = Vec::new();
    human.push(match &identity {
        IdentityCheck::Verified { exact, correction, .. } => format!(
            "identity verified ({}), correction {correction}",
            if *exact { "exact" } else { "numeric" }
        ),
        IdentityCheck::Failed { diff } => format!("identity failed: {diff}"),
    });
    let mut result = json!({
        "family": "flambda",
        "k": k,
        "lambda": lambda,
        "form": f,
        "complex_rank": r,
        "certificate": cert,
        "identity": identity,
    });
    match lambda.as_rational() {
        Some(q) => {
            let b = flambda_real_bracket(k, q)?;
            human.push(if b.lo == b.hi {
                format!("real rank {}", b.lo)
            } else {
                format!("real rank in [{}, {}]", b.lo, b.hi)
            });
            if b.hyperbolic {
                diagnostics.push(format!("hyperbolic: real rank equals the degree {}", 2 * k));
            }
            result["real_bracket"] = json!(b);
        }
        None => diagnostics.push("real bracket needs a rational lambda".into()),
    }
    Ok(Outcome {
        result,
        human,
        diagnostics,
    })
}

fn pd(d: usize, gamma_text: &str) -> Result<Outcome, Fail> {
    let gamma = parse_rational(gamma_text)?;
    let p = gen_pd(d, &gamma)?;
    let (r, cert) = complex_rank(&p.form)?;
    let v = verify_decomposition(&p.decomposition, &p.form)?;
    let mut human = vec![format!("{}", p.form), format!("complex rank {r}, {}", v.status())];
    human.extend(summand_lines(&p.decomposition));
    let mut diagnostics = Vec::new();
    if !p.gamma_is_square {
        diagnostics.push(format!("gamma = {gamma} is not a rational square: the two summands are conjugate"));
    }
    Ok(Outcome {
        result: json!({
            "family": "pd",
            "d": d,
            "gamma": waring_core::Scalar::from(gamma),
            "form": p.form,
            "complex_rank": r,
            "certificate": cert,
            "decomposition": p.decomposition,
            "gamma_is_square": p.gamma_is_square,
            "verification": v,
        }),
        human,
        diagnostics,
    })
}

fn gap(f: &BinaryForm) -> Result<Outcome, Fail> {
    let g = descartes_gap_bound(f);
    let real = real_root_count(f, true)?;
    Ok(Outcome {
        human: vec![format!("{g}"), format!("{real} real roots of {}", f.degree())],
        result: json!({ "form": f, "degree": f.degree(), "gap_bound": g, "real_roots": real }),
        diagnostics: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub error: usize,
}

/// One response per nonblank line of newline-delimited JSON requests, in
/// input order whatever the parallelism.
pub fn run_batch(text: &str, parallelism: usize, default_precision: u32) -> (Vec<Response>, Summary) {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let one = |&(n, line): &(usize, &str)| match serde_json::from_str::<Request>(line) {
        Ok(req) => run_command(&req, default_precision),
        Err(e) => Response::input_error(None, format!("line {}: {e}", n + 1)),
    };
    let responses: Vec<Response> = if parallelism <= 1 {
        lines.iter().map(one).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .expect("thread pool")
            .install(|| lines.par_iter().map(one).collect())
    };
    let ok = responses.iter().filter(|r| r.status == Status::Ok).count();
    let summary = Summary {
        total: responses.len(),
        ok,
        error: responses.len() - ok,
    };
    (responses, summary)
}
