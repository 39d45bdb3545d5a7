use std::path::PathBuf;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{check_table, emit, fmt_f, json_bytes, CheckRow, Failure, Format, Table};
use super::{
    read_vector, AnalyzeArgs, ClassifyArgs, CocycleArgs, Command, DivergeArgs, FamilySpec,
    GenerateArgs, InterpolateArgs, OutputArgs, SCHEMA_VERSION,
};
use crate::classify::{bounded_case_coboundary, classify, BoundedCaseReport};
use crate::cocycle::{
    coboundary_of, divergence_diagnostic, interpolation_check, nonexpander_cocycle,
    nonneg_reduction, norm_pow, solve_coboundary, verify_cocycle_identity, CoboundarySolution,
    Cocycle, Exponent, IdentityReport, InterpolationReport, LpVector, SOLVED_TOL,
};
use crate::error::{Error, Result};
use crate::graphgen::{nonexpander_family, seeded_rng, NonExpanderParams, RNG_ALGORITHM};
use crate::perm_rep::{orbit_decomposition, Representation};
use crate::spectral::{is_expander_family, spectral_report, PoincareOptions, SpectralReport};

pub(super) fn dispatch(cmd: &Command) -> Result<Vec<Failure>> {
    match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Cocycle(a) => cocycle(a),
        Command::Interpolate(a) => interpolate(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Generate(a) => generate(a),
        Command::Diverge(a) => diverge(a),
    }
}

fn finite_exponent(p: f64) -> Result<f64> {
    match Exponent::finite(p)? {
        Exponent::Finite(p) => Ok(p),
        Exponent::Infinite => Err(Error::InvalidExponent(p)),
    }
}

fn random_vector(n: usize, seed: u64, exponent: Exponent) -> LpVector {
    let mut rng = seeded_rng(seed);
    let x = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    LpVector::new(exponent, x).expect("finite coordinates")
}

fn write(output: &OutputArgs, table: impl FnOnce() -> Table, doc: &impl Serialize) -> Result<()> {
    let bytes = match output.format {
        Format::Csv => table().render()?,
        Format::Json => json_bytes(doc)?,
    };
    emit(&bytes, output.out.as_deref())
}

#[derive(Serialize)]
struct AnalyzeRow {
    component: usize,
    least: usize,
    size: usize,
    edges: usize,
    /// `None` for singleton components
    spectral: Option<SpectralReport>,
}

#[derive(Serialize)]
struct AnalyzeDoc<'a> {
    schema: u32,
    command: &'static str,
    source: Option<String>,
    n: usize,
    ps: &'a [f64],
    rows: Vec<AnalyzeRow>,
    threshold: f64,
    expander_family: bool,
}

fn analyze(a: &AnalyzeArgs) -> Result<Vec<Failure>> {
    let ps =
        a.p.iter()
            .map(|&p| finite_exponent(p))
            .collect::<Result<Vec<_>>>()?;
    let src = a.source.load()?;
    let components = orbit_decomposition(&src.rep);
    let opts = PoincareOptions {
        seed: a.source.seed,
        ..PoincareOptions::default()
    };
    let rows = components
        .par_iter()
        .enumerate()
        .map(|(id, c)| {
            let spectral = if c.len() < 2 {
                None
            } else {
                Some(spectral_report(&c.graph, id, &ps, a.max_exhaustive, &opts)?)
            };
            Ok(AnalyzeRow {
                component: id,
                least: c.least(),
                size: c.len(),
                edges: c.graph.edge_count(),
                spectral,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failures = Vec::new();
    for r in &rows {
        if let Some(s) = &r.spectral {
            if !s.is_consistent() {
                failures.push(Failure::new(
                    "cheeger_bounds",
                    format!("component {}", r.component),
                    format!(
                        "h = {}, lambda1 = {}, k = {}",
                        s.cheeger,
                        fmt_f(s.lambda1),
                        s.degree
                    ),
                ));
            }
        }
    }
    let verdict = is_expander_family(rows.iter().filter_map(|r| r.spectral.as_ref()), a.threshold);

    let doc = AnalyzeDoc {
        schema: SCHEMA_VERSION,
        command: "analyze",
        source: src.family.map(|f| f.to_string()),
        n: src.rep.n(),
        ps: &ps,
        rows,
        threshold: a.threshold,
        expander_family: verdict,
    };
    write(
        &a.output,
        || {
            let header = [
                "component",
                "least",
                "size",
                "edges",
                "degree",
                "regular",
                "h_method",
                "h",
                "h_float",
                "lambda1",
            ];
            let mut header: Vec<String> = header.into_iter().map(String::from).collect();
            header.extend(ps.iter().map(|p| format!("c_p={}", fmt_f(*p))));
            let mut t = Table::new("analyze", &header);
            for r in &doc.rows {
                let mut cells = vec![
                    r.component.to_string(),
                    r.least.to_string(),
                    r.size.to_string(),
                    r.edges.to_string(),
                ];
                match &r.spectral {
                    Some(s) => {
                        cells.extend([
                            s.degree.to_string(),
                            s.regular.to_string(),
                            if s.cheeger_exact { "exact" } else { "sweep" }.to_string(),
                            s.cheeger.to_string(),
                            fmt_f(s.cheeger.to_f64()),
                            fmt_f(s.lambda1),
                        ]);
                        cells.extend(s.p_constants.iter().map(|c| fmt_f(c.value)));
                    }
                    None => {
                        cells.extend(["0".into(), "true".into()]);
                        cells.extend(std::iter::repeat_n(String::new(), 4 + ps.len()));
                    }
                }
                t.push(cells);
            }
            t.footer(format!(
                "expander_family threshold={} verdict={}",
                fmt_f(doc.threshold),
                doc.expander_family
            ));
            t
        },
        &doc,
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct CocycleDoc {
    schema: u32,
    command: &'static str,
    cocycle_source: String,
    identity: IdentityReport,
    solution: CoboundarySolution,
    solved: bool,
}

fn cocycle(a: &CocycleArgs) -> Result<Vec<Failure>> {
    let q = Exponent::finite(a.q)?;
    let src = a.source.load()?;
    let rep = &src.rep;
    // (cocycle, description, whether it is a coboundary by construction)
    let (c, origin, expect_solved) = if let Some(path) = &a.cocycle {
        let text = std::fs::read_to_string(path)?;
        let c: Cocycle = serde_json::from_str(&text)?;
        (c, format!("file {}", path.display()), false)
    } else if let Some(from) = &a.from_vector {
        let v = if from == "random" {
            random_vector(rep.n(), a.source.seed, q)
        } else {
            read_vector(&PathBuf::from(from), q)?
        };
        if v.len() != rep.n() {
            return Err(Error::Dimension {
                expected: rep.n(),
                found: v.len(),
            });
        }
        (
            coboundary_of(rep, &v)?,
            format!("coboundary of vector {from}"),
            true,
        )
    } else if let Some(FamilySpec::Nonexpander { depth }) = src.family {
        let family = nonexpander_family(depth, &NonExpanderParams::default())?;
        let c = nonexpander_cocycle(&family, a.q)?.cocycle;
        (c, format!("marked-arc cocycle at depth {depth}"), true)
    } else {
        (Cocycle::zero(rep, q), "zero".to_string(), true)
    };
    c.check_shape(rep)?;
    let identity = verify_cocycle_identity(rep, &c, a.max_word_len)?;
    let solution = solve_coboundary(rep, &c, q)?;
    let solved = solution.solution.is_some();

    let mut failures = Vec::new();
    if !identity.passed {
        failures.push(Failure::new(
            "cocycle_identity",
            identity.worst.clone().unwrap_or_default(),
            format!("max violation {}", fmt_f(identity.max_violation)),
        ));
    }
    if expect_solved && !solved {
        failures.push(Failure::new(
            "coboundary",
            origin.clone(),
            format!("residual {}", fmt_f(solution.residual)),
        ));
    }
    let doc = CocycleDoc {
        schema: SCHEMA_VERSION,
        command: "cocycle",
        cocycle_source: origin,
        identity,
        solved,
        solution,
    };
    write(
        &a.output,
        || {
            let mut rows = vec![
                CheckRow::info("identity", "words", doc.identity.words as f64),
                CheckRow::info("identity", "splits", doc.identity.splits as f64),
                CheckRow {
                    check: "identity",
                    subject: "max_violation".into(),
                    lhs: None,
                    rhs: None,
                    value: Some(doc.identity.max_violation),
                    bound: Some(doc.identity.tolerance),
                    passed: Some(doc.identity.passed),
                },
                CheckRow {
                    check: "coboundary",
                    subject: "residual".into(),
                    lhs: None,
                    rhs: None,
                    value: Some(doc.solution.residual),
                    bound: Some(SOLVED_TOL),
                    passed: Some(doc.solved),
                },
                CheckRow::info(
                    "coboundary",
                    format!("qnorm q={}", fmt_f(doc.solution.q.value())),
                    doc.solution.solution_qnorm,
                ),
            ];
            rows.extend(
                doc.solution
                    .per_component_shifts
                    .iter()
                    .map(|(id, s)| CheckRow::info("shift", format!("component {id}"), *s)),
            );
            check_table("cocycle", &rows)
        },
        &doc,
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct ReductionRow {
    name: String,
    before: f64,
    after: f64,
    holds: bool,
}

#[derive(Serialize)]
struct InterpolateDoc {
    schema: u32,
    command: &'static str,
    reduction: Vec<ReductionRow>,
    report: InterpolationReport,
    identity_tol: f64,
}

/// Relative tolerance of the power-map identities.
const IDENTITY_REL_TOL: f64 = 1e-12;

fn interpolate(a: &InterpolateArgs) -> Result<Vec<Failure>> {
    let (p, q) = (a.p, a.q);
    if p.is_nan() || q.is_nan() || !(1.0 < p && p < q && q.is_finite()) {
        return Err(Error::ExponentOrder { p, q });
    }
    let src = a.source.load()?;
    let v = match &a.vector {
        Some(path) => read_vector(path, Exponent::Finite(p))?,
        None => random_vector(src.rep.n(), a.source.seed, Exponent::Finite(p)),
    };
    let (rep, v_abs) = nonneg_reduction(&src.rep, &v)?;
    let reduction: Vec<ReductionRow> = src
        .rep
        .generators()
        .zip(rep.generators())
        .map(|((name, g), (_, g_abs))| {
            let before = norm_pow(&g.displacement_slice(v.coords()), p);
            let after = norm_pow(&g_abs.displacement_slice(v_abs.coords()), p);
            ReductionRow {
                name: name.to_string(),
                before,
                after,
                holds: after <= before * (1.0 + 1e-12),
            }
        })
        .collect();
    let report = interpolation_check(&rep, &v_abs, p, q)?;

    let mut failures = Vec::new();
    for r in reduction.iter().filter(|r| !r.holds) {
        failures.push(Failure::new(
            "nonneg_reduction",
            r.name.clone(),
            format!("{} > {}", fmt_f(r.after), fmt_f(r.before)),
        ));
    }
    for (which, err) in [
        ("r", report.identities.rel_err_r),
        ("q", report.identities.rel_err_q),
    ] {
        if err > IDENTITY_REL_TOL {
            failures.push(Failure::new(
                "power_map_identity",
                which,
                format!("relative error {}", fmt_f(err)),
            ));
        }
    }
    for g in report.per_generator.iter().filter(|g| g.ratio > 1.0) {
        failures.push(Failure::new(
            "interpolation",
            g.name.clone(),
            format!("ratio {}", fmt_f(g.ratio)),
        ));
    }
    let doc = InterpolateDoc {
        schema: SCHEMA_VERSION,
        command: "interpolate",
        reduction,
        report,
        identity_tol: IDENTITY_REL_TOL,
    };
    write(
        &a.output,
        || {
            let id = &doc.report.identities;
            let mut rows: Vec<CheckRow> = doc
                .reduction
                .iter()
                .map(|r| CheckRow {
                    check: "reduction",
                    subject: r.name.clone(),
                    lhs: Some(r.after),
                    rhs: Some(r.before),
                    value: None,
                    bound: None,
                    passed: Some(r.holds),
                })
                .collect();
            for (subject, lhs, rhs, err) in [
                ("w_r=v_q", id.w_r, id.v_q, id.rel_err_r),
                ("w_q=v_p", id.w_q, id.v_p, id.rel_err_q),
            ] {
                rows.push(CheckRow {
                    check: "power_map",
                    subject: subject.into(),
                    lhs: Some(lhs),
                    rhs: Some(rhs),
                    value: Some(err),
                    bound: Some(IDENTITY_REL_TOL),
                    passed: Some(err <= IDENTITY_REL_TOL),
                });
            }
            rows.extend(doc.report.per_generator.iter().map(|g| CheckRow {
                check: "interpolation",
                subject: g.name.clone(),
                lhs: Some(g.lhs),
                rhs: Some(g.rhs),
                value: Some(g.ratio),
                bound: Some(1.0),
                passed: Some(g.ratio <= 1.0),
            }));
            check_table("interpolate", &rows)
        },
        &doc,
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct ClassifyDoc {
    schema: u32,
    command: &'static str,
    d: usize,
    classes: Vec<Vec<usize>>,
    covering_set: crate::classify::CoveringSet,
    bounded_case: BoundedCaseReport,
}

fn classify_cmd(a: &ClassifyArgs) -> Result<Vec<Failure>> {
    let p = finite_exponent(a.p)?;
    let src = a.source.load()?;
    let rep = if src.rep.all_positive() {
        src.rep
    } else {
        src.rep.unsigned()
    };
    let (_, q_set) = classify(&rep, a.d)?;
    let v = match &a.vector {
        Some(path) => read_vector(path, Exponent::Finite(p))?,
        None => random_vector(rep.n(), a.source.seed, Exponent::Finite(p)),
    };
    let (_, report) = bounded_case_coboundary(&rep, &v, &q_set, p)?;
    let mut failures = Vec::new();
    if !report.chain_holds {
        failures.push(Failure::new(
            "bounded_chain",
            "",
            format!("{} < {}", fmt_f(report.lhs), fmt_f(report.rhs)),
        ));
    }
    if !report.holds && report.chain_holds {
        failures.push(Failure::new(
            "fixed_point",
            "",
            format!("residual {}", fmt_f(report.fixed_point_residual)),
        ));
    }
    let doc = ClassifyDoc {
        schema: SCHEMA_VERSION,
        command: "classify",
        d: a.d,
        classes: q_set.classes.clone(),
        covering_set: q_set,
        bounded_case: report,
    };
    write(
        &a.output,
        || {
            let r = &doc.bounded_case;
            let mut rows = vec![
                CheckRow::info("classes", "count", doc.classes.len() as f64),
                CheckRow::info("covering_set", "order", doc.covering_set.len() as f64),
            ];
            rows.extend(doc.classes.iter().enumerate().map(|(k, members)| {
                CheckRow::info("class", format!("class {k}"), members.len() as f64)
            }));
            rows.push(CheckRow {
                check: "bounded_chain",
                subject: format!("p={}", fmt_f(r.p)),
                lhs: Some(r.lhs),
                rhs: Some(r.rhs),
                value: None,
                bound: None,
                passed: Some(r.chain_holds),
            });
            rows.push(CheckRow {
                check: "fixed_point",
                subject: "residual".into(),
                lhs: None,
                rhs: None,
                value: Some(r.fixed_point_residual.max(r.coboundary_residual)),
                bound: None,
                passed: Some(r.holds),
            });
            check_table("classify", &rows)
        },
        &doc,
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct GenerateMeta {
    schema: u32,
    family: FamilySpec,
    seed: u64,
    rng: &'static str,
    n: usize,
    symmetric: bool,
    generators: Vec<String>,
    component_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nonexpander: Option<crate::graphgen::FamilyMetadata>,
}

fn generate(a: &GenerateArgs) -> Result<Vec<Failure>> {
    let Some(spec) = a.source.family_spec()? else {
        return Err(Error::InvalidArgument("generate needs --family".into()));
    };
    let rep: Representation = spec.build(a.source.seed)?;
    let mut text = serde_json::to_vec_pretty(&rep)?;
    text.push(b'\n');
    emit(&text, a.out.as_deref())?;
    if let Some(out) = &a.out {
        let nonexpander = match spec {
            FamilySpec::Nonexpander { depth } => {
                let params = NonExpanderParams::default();
                Some(nonexpander_family(depth, &params)?.metadata(&params))
            }
            _ => None,
        };
        let meta = GenerateMeta {
            schema: SCHEMA_VERSION,
            family: spec,
            seed: a.source.seed,
            rng: RNG_ALGORITHM,
            n: rep.n(),
            symmetric: rep.is_symmetric(),
            generators: rep.names().map(String::from).collect(),
            component_sizes: orbit_decomposition(&rep).iter().map(|c| c.len()).collect(),
            nonexpander,
        };
        emit(&json_bytes(&meta)?, Some(&out.with_extension("meta.json")))?;
    }
    Ok(Vec::new())
}

fn diverge(a: &DivergeArgs) -> Result<Vec<Failure>> {
    let q = finite_exponent(a.q)?;
    let table = divergence_diagnostic(&NonExpanderParams::default(), q, &a.depths)?;
    let mut failures: Vec<Failure> = table
        .rows
        .iter()
        .filter(|r| !r.holds)
        .map(|r| {
            Failure::new(
                "divergence_lower_bound",
                format!("depth {}", r.depth),
                format!("{} < {}", fmt_f(r.qnorm_q), fmt_f(r.lower_bound)),
            )
        })
        .collect();
    if !table.strictly_increasing {
        failures.push(Failure::new(
            "divergence_growth",
            "qnorm_q",
            "not strictly increasing in depth",
        ));
    }
    write(
        &a.output,
        || {
            let mut t = Table::new(
                "diverge",
                &[
                    "depth",
                    "components",
                    "qnorm_q",
                    "lower_bound",
                    "residual",
                    "holds",
                ],
            );
            for r in &table.rows {
                t.push(vec![
                    r.depth.to_string(),
                    r.components.to_string(),
                    fmt_f(r.qnorm_q),
                    fmt_f(r.lower_bound),
                    fmt_f(r.residual),
                    r.holds.to_string(),
                ]);
            }
            t
        },
        &table,
    )?;
    Ok(failures)
}
