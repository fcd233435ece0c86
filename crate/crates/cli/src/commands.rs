use crate::output::{Cell, Doc, Format, Table};
use crate::{
    report, CertifyCmd, ClassCmd, Cli, Command, ConeCmd, ConventionArg, FcurveCmd, JacobianCmd, SyzygyCmd, TableCmd,
};
use modcone_core::cones::{
    apply_separator, cone_member, enumerate_fcurve_functionals, enumerate_fcurves_0n, f_ample_check, f_nef_check,
    FCheck, Membership,
};
use modcone_core::jacobian::{harris_tu, lemma_check, solve_coefficients, ChernMonomial, Convention, EvalContext, CALIBRATED};
use modcone_core::picard::{
    AnnotatedClass, AnnotatedSymmetricClass, ClassDocument, Coordinate, DivisorClass, ModuliSignature,
    MAX_ENUMERATED_POINTS,
};
use modcone_core::pointed::{
    canonical_class_gn, canonical_class_gn_symmetric, general_type_certificate_gn, logan_class, mgn_table,
    mrc_class, symmetric_candidate, GnOutcome, MGN_TABLE_LABEL,
};
use modcone_core::slopes::{
    brill_noether_class, canonical_class_mg, general_type_certificate_mg, named_class, pair, slope, slope_bound,
    CurveProfile, GtOutcome, SlopeValue, TestCurve,
};
use modcone_core::syzygy::{bound_check, family, fixed_slopes, published_2_2, ranks, virtual_slope};
use modcone_core::{Error, Rational};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Text for stdout and whether the command's check passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn doc(doc: Doc, format: Format, pass: bool) -> Outcome {
        Outcome { text: doc.render(format), pass }
    }

    fn class(doc: ClassDocument) -> Outcome {
        let mut text = doc.to_json();
        text.push('\n');
        Outcome { text, pass: true }
    }
}

pub fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let f = cli.global.format;
    match &cli.command {
        Command::Cone(c) => cone(c, f),
        Command::Fcurve(FcurveCmd::List { g, zero_n }) => fcurve_list(*g, *zero_n, f),
        Command::Slope { class } => slope_cmd(class, f),
        Command::Class(c) => class_cmd(c),
        Command::Pair { class, curve } => pair_cmd(class, curve, f),
        Command::Certify(c) => certify(c, f),
        Command::Syzygy(c) => syzygy(c, f),
        Command::Jacobian(c) => jacobian(c, f),
        Command::Table(t) => table(t, f),
        Command::Report(args) => report::run(args, &cli.global),
    }
}

pub fn load_document(path: &Path) -> CliResult<ClassDocument> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    ClassDocument::from_json(&text).map_err(CliError::from)
}

fn load_class(path: &Path) -> CliResult<DivisorClass> {
    match load_document(path)? {
        ClassDocument::Full(a) => Ok(a.class),
        ClassDocument::Symmetric(s) => Ok(s.class.expand()?),
    }
}

fn load_annotated(path: &Path) -> CliResult<AnnotatedClass> {
    match load_document(path)? {
        ClassDocument::Full(a) => Ok(a),
        ClassDocument::Symmetric(_) => {
            Err(CliError::Usage(format!("{}: a full (non-symmetric) class document is expected", path.display())))
        }
    }
}

fn render_coordinate(c: &Coordinate, sig: &ModuliSignature) -> String {
    match c {
        Coordinate::Lambda => "λ".into(),
        Coordinate::Psi(i) => format!("ψ{i}"),
        Coordinate::Delta(idx) => format!("δ{}", idx.render_key(sig)),
    }
}

fn f_check_doc(name: &str, check: &FCheck) -> Doc {
    let mut t = Table::new(&["family", "functional", "value"]);
    for (func, v) in &check.violations {
        t.push(vec![func.family.to_string().into(), func.formula().into(), v.into()]);
    }
    Doc::new()
        .field("check", name)
        .field("pass", check.pass)
        .field("violations", check.violations.len() as i64)
        .with_table(t)
}

fn cone(c: &ConeCmd, f: Format) -> CliResult<Outcome> {
    match c {
        ConeCmd::Fnef { class } => {
            let check = f_nef_check(&load_class(class)?)?;
            Ok(Outcome::doc(f_check_doc("F-nef", &check), f, check.pass))
        }
        ConeCmd::Fample { class } => {
            let check = f_ample_check(&load_class(class)?)?;
            Ok(Outcome::doc(f_check_doc("F-ample", &check), f, check.pass))
        }
        ConeCmd::Member { target, gens } => {
            let t = load_class(target)?;
            let g: Vec<DivisorClass> = gens.iter().map(|p| load_class(p)).collect::<CliResult<_>>()?;
            match cone_member(&t, &g)? {
                Membership::Member(cert) => {
                    let mut table = Table::new(&["generator", "multiplier"]);
                    for (p, m) in gens.iter().zip(&cert.multipliers) {
                        table.push(vec![p.display().to_string().into(), m.into()]);
                    }
                    let doc = Doc::new().field("member", true).with_table(table);
                    Ok(Outcome::doc(doc, f, true))
                }
                Membership::NotInCone { separator } => {
                    let sig = t.signature();
                    let mut table = Table::new(&["coordinate", "weight"]);
                    for (c, v) in &separator {
                        table.push(vec![render_coordinate(c, &sig).into(), v.into()]);
                    }
                    let doc = Doc::new()
                        .field("member", false)
                        .field("separator_on_target", apply_separator(&separator, &t))
                        .with_table(table);
                    Ok(Outcome::doc(doc, f, false))
                }
            }
        }
    }
}

fn fcurve_list(g: Option<u32>, zero_n: Option<u32>, f: Format) -> CliResult<Outcome> {
    if let Some(g) = g {
        let list = enumerate_fcurve_functionals(g)?;
        let mut t = Table::new(&["index", "family", "functional"]);
        for (k, func) in list.iter().enumerate() {
            t.push(vec![(k as i64 + 1).into(), func.family.to_string().into(), func.formula().into()]);
        }
        let doc = Doc::new().field("g", g).field("count", list.len() as i64).with_table(t);
        return Ok(Outcome::doc(doc, f, true));
    }
    let n = zero_n.ok_or_else(|| CliError::Usage("one of --g or --zero-n is required".into()))?;
    let list = enumerate_fcurves_0n(n)?;
    let mut t = Table::new(&["index", "partition"]);
    for (k, p) in list.iter().enumerate() {
        t.push(vec![(k as i64 + 1).into(), p.to_string().into()]);
    }
    let doc = Doc::new().field("n", n).field("count", list.len() as i64).with_table(t);
    Ok(Outcome::doc(doc, f, true))
}

fn slope_cell(v: &SlopeValue) -> Cell {
    match v {
        SlopeValue::Finite(q) => q.into(),
        SlopeValue::Infinite => "inf".into(),
    }
}

fn slope_cmd(class: &Path, f: Format) -> CliResult<Outcome> {
    let d = load_class(class)?;
    let g = d.signature().g;
    let s = slope(&d)?;
    let bound = slope_bound(g);
    let below = s.finite().is_some_and(|q| *q < bound);
    let doc = Doc::new().field("g", g).field("slope", slope_cell(&s)).field("bound", bound).field("below_bound", below);
    Ok(Outcome::doc(doc, f, true))
}

fn class_cmd(c: &ClassCmd) -> CliResult<Outcome> {
    let full = |d: DivisorClass| ClassDocument::Full(AnnotatedClass::plain(d));
    let doc = match c {
        ClassCmd::Bn { g, r, d } => full(brill_noether_class(*g, *r, *d)?),
        ClassCmd::Canonical { g } => full(canonical_class_mg(*g)?),
        ClassCmd::Kgn { g, n } => {
            if *n <= MAX_ENUMERATED_POINTS {
                full(canonical_class_gn(*g, *n)?)
            } else {
                ClassDocument::Symmetric(AnnotatedSymmetricClass::plain(canonical_class_gn_symmetric(*g, *n)?))
            }
        }
        ClassCmd::Mrc { g, r, i } => ClassDocument::Symmetric(mrc_class(*g, *r, *i)?),
        ClassCmd::Logan { g, a } => ClassDocument::Full(logan_class(*g, a)?),
        ClassCmd::Named { name } => ClassDocument::Full(named_class(name)?),
    };
    Ok(Outcome::class(doc))
}

fn pair_cmd(class: &Path, curve: &str, f: Format) -> CliResult<Outcome> {
    let d = load_class(class)?;
    let c = TestCurve::parse(curve)?;
    let profile = CurveProfile::new(c, d.signature().g)?;
    let v = pair(&d, &profile)?;
    let doc = Doc::new().field("curve", c.to_string()).field("g", d.signature().g).field("degree", v);
    Ok(Outcome::doc(doc, f, true))
}

fn certify(c: &CertifyCmd, f: Format) -> CliResult<Outcome> {
    match c {
        CertifyCmd::Mg { class } => {
            let doc = load_annotated(class)?;
            match general_type_certificate_mg(&doc)? {
                GtOutcome::Certified(cert) => {
                    let mut t = Table::new(&["divisor", "multiplier"]);
                    for (i, c) in cert.boundary.iter().enumerate() {
                        t.push(vec![format!("δ{i}").into(), c.into()]);
                    }
                    let out = Doc::new()
                        .field("result", "certified")
                        .field("alpha", &cert.alpha)
                        .field("beta", &cert.beta)
                        .field("uses_bounds", cert.uses_bounds)
                        .with_table(t);
                    Ok(Outcome::doc(out, f, true))
                }
                GtOutcome::Infeasible => Ok(Outcome::doc(Doc::new().field("result", "infeasible"), f, false)),
            }
        }
        CertifyCmd::Mgn { g, n, candidates } => {
            let mut cands = Vec::new();
            for p in candidates {
                cands.push(match load_document(p)? {
                    ClassDocument::Full(a) => symmetric_candidate(&a)?,
                    ClassDocument::Symmetric(s) => s,
                });
            }
            match general_type_certificate_gn(*g, *n, &cands)? {
                GnOutcome::Certified(cert) => {
                    let sig = ModuliSignature::new(*g, *n)?;
                    let mut t = Table::new(&["term", "multiplier"]);
                    for (p, a) in candidates.iter().zip(&cert.multipliers) {
                        t.push(vec![p.display().to_string().into(), a.into()]);
                    }
                    t.push(vec!["δ0".into(), (&cert.delta0).into()]);
                    for (k, v) in &cert.boundary {
                        let key = if sig.n == 0 { k.genus.to_string() } else { format!("{}:{}", k.genus, k.size) };
                        t.push(vec![format!("δ{key}").into(), v.into()]);
                    }
                    let out = Doc::new()
                        .field("result", "certified")
                        .field("scale", &cert.scale)
                        .field("ample_lambda", &cert.ample_lambda)
                        .field("ample_psi", &cert.ample_psi)
                        .field("uses_bounds", cert.uses_bounds)
                        .with_table(t);
                    Ok(Outcome::doc(out, f, true))
                }
                GnOutcome::Inconclusive => Ok(Outcome::doc(Doc::new().field("result", "inconclusive"), f, false)),
            }
        }
    }
}

fn syzygy(c: &SyzygyCmd, f: Format) -> CliResult<Outcome> {
    match c {
        SyzygyCmd::Params(a) => {
            let fam = family(a.s, a.i)?;
            let doc = Doc::new()
                .field("s", fam.s)
                .field("i", fam.i)
                .field("r", fam.r)
                .field("g", fam.g)
                .field("d", fam.d)
                .field("twist", fam.twist());
            Ok(Outcome::doc(doc, f, true))
        }
        SyzygyCmd::Ranks(a) => {
            let rk = ranks(&family(a.s, a.i)?);
            let equal = rk.a == rk.b;
            let doc = Doc::new()
                .field("rank_a", rk.a.to_string())
                .field("rank_b", rk.b.to_string())
                .field("equal", equal);
            Ok(Outcome::doc(doc, f, equal))
        }
        SyzygyCmd::Slope(a) => {
            let fam = family(a.s, a.i)?;
            let v = virtual_slope(a.s, a.i)?;
            let mut doc = Doc::new()
                .field("g", fam.g)
                .field("f", v.f.to_string())
                .field("g_poly", v.g.to_string())
                .field("slope", &v.slope);
            let mut pass = true;
            if a.s >= 2 {
                let b = bound_check(a.s, a.i)?;
                doc = doc.field("upper", &b.upper).field("bound_pass", b.pass);
                pass = b.pass;
            }
            Ok(Outcome::doc(doc, f, pass))
        }
        SyzygyCmd::Sweep { s, i, smax, imax } => {
            let mut t = Table::new(&["s", "i", "g", "slope", "upper", "bound_pass"]);
            let mut pass = true;
            for s in *s..=*smax {
                for i in *i..=*imax {
                    let fam = family(s, i)?;
                    let v = virtual_slope(s, i)?;
                    let (upper, ok): (Cell, Cell) = if s >= 2 {
                        let b = bound_check(s, i)?;
                        pass &= b.pass;
                        (b.upper.into(), b.pass.into())
                    } else {
                        (slope_bound(fam.g as u32).into(), "n/a".into())
                    };
                    t.push(vec![s.into(), i.into(), fam.g.into(), v.slope.into(), upper, ok]);
                }
            }
            Ok(Outcome::doc(Doc::new().with_table(t), f, pass))
        }
    }
}

fn convention(arg: Option<ConventionArg>) -> Convention {
    match arg {
        None => CALIBRATED,
        Some(ConventionArg::Full) => Convention::FullExpansion,
        Some(ConventionArg::Ascending) => Convention::SortedAscendingOnce,
        Some(ConventionArg::Descending) => Convention::SortedDescendingOnce,
    }
}

fn jacobian(c: &JacobianCmd, f: Format) -> CliResult<Outcome> {
    match c {
        JacobianCmd::LemmaCheck { si, convention: conv } => {
            let ctx = EvalContext::new(si.s, si.i)?;
            let check = lemma_check(&ctx, convention(*conv))?;
            let mut t = Table::new(&["identity", "value", "expected", "holds"]);
            for id in &check.identities {
                t.push(vec![id.label.into(), (&id.value).into(), (&id.expected).into(), id.holds.into()]);
            }
            let doc = Doc::new()
                .field("convention", format!("{:?}", check.convention))
                .field("c_r", &check.c_r)
                .field("all_hold", check.all_hold())
                .with_table(t);
            Ok(Outcome::doc(doc, f, check.all_hold()))
        }
        JacobianCmd::Solve { si, json } => {
            let c = solve_coefficients(si.s, si.i)?;
            let doc = Doc::new()
                .field("s", c.s)
                .field("i", c.i)
                .field("A", &c.a)
                .field("B0", &c.b0)
                .field("B1", &c.b1)
                .field("slope", &c.slope)
                .field("deg_x", &c.deg_x)
                .field("deg_y", &c.deg_y)
                .field("virtual_slope", &c.virtual_slope)
                .field("matches", c.slope == c.virtual_slope);
            let format = if *json { Format::Json } else { f };
            Ok(Outcome::doc(doc, format, c.slope == c.virtual_slope))
        }
        JacobianCmd::Ht { exponents, theta, si } => {
            let ctx = EvalContext::new(si.s, si.i)?;
            let mono = ChernMonomial { exponents: exponents.clone(), theta: *theta };
            let v = harris_tu(&mono, &ctx)?;
            let exps: Vec<String> = exponents.iter().map(u32::to_string).collect();
            let doc = Doc::new()
                .field("exponents", exps.join(","))
                .field("theta", *theta)
                .field("r", ctx.r)
                .field("h", ctx.h)
                .field("degree", v);
            Ok(Outcome::doc(doc, f, true))
        }
    }
}

fn table(t: &TableCmd, f: Format) -> CliResult<Outcome> {
    match t {
        TableCmd::Mgn => {
            let mut table = Table::new(&["g", "f(g)"]);
            for (g, v) in mgn_table() {
                table.push(vec![g.into(), v.into()]);
            }
            Ok(Outcome::doc(Doc::new().with_table(table).note(MGN_TABLE_LABEL), f, true))
        }
        TableCmd::Slopes => {
            let mut table = Table::new(&["label", "g", "slope", "bound"]);
            for s in fixed_slopes() {
                table.push(vec![s.label.into(), s.g.into(), (&s.value).into(), slope_bound(s.g).into()]);
            }
            let v: Rational = published_2_2();
            table.push(vec!["(s,i) = (2,2) published".into(), 22u32.into(), v.into(), slope_bound(22).into()]);
            Ok(Outcome::doc(Doc::new().with_table(table), f, true))
        }
    }
}
