use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use circledom_core::decision::{
    algebraic_characterization, cross_check, decide as run_query, exhaustive_sweep, AlgebraicType,
    ConsistencyReport, Decision, DecisionError, Query, Witness,
};
use circledom_core::group::{
    free_cover_rank, reidemeister_schreier_rank_oracle, FreeProductData, GroupError,
};
use circledom_core::manifold::{classify_geometry, format_rational, Manifold, PrimePiece};
use circledom_core::witness::{
    verify_schema, BranchComponents, BranchedCoverSchema, Check, CoverDescriptor,
    FiniteCoverWitness, VerificationReport,
};
use serde_json::{json, Value};

use crate::corpus::{evaluate, load_manifold, Corpus, Token, QUERIES};
use crate::{EXIT_INCONSISTENT, EXIT_OK, SCHEMA_VERSION};

pub(crate) struct Options {
    pub max_order: u64,
}

pub(crate) struct Outcome {
    pub human: String,
    pub json: Value,
    pub code: i32,
}

pub(crate) struct Rejection {
    query: String,
    input: String,
    pub message: String,
}

impl Rejection {
    fn new(query: &str, input: &str, message: impl Into<String>) -> Self {
        Rejection {
            query: query.to_string(),
            input: input.to_string(),
            message: message.into(),
        }
    }

    pub fn json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "query": self.query,
            "input": self.input,
            "error": { "kind": "rejected", "message": self.message },
        })
    }
}

type CmdResult = Result<Outcome, Rejection>;

fn load(query: &str, desc: &str) -> Result<Manifold, Rejection> {
    load_manifold(desc).map_err(|e| Rejection::new(query, desc, e))
}

fn code_for(checks: &[Check]) -> i32 {
    if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn render_checks(text: &mut String, checks: &[Check], verbose: bool) {
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(text, "checks: {passed}/{} passed", checks.len());
    for c in checks {
        if verbose || !c.passed {
            let mark = if c.passed { "ok" } else { "FAILED" };
            let _ = writeln!(text, "  {mark} {}: {}", c.name, c.detail);
        }
    }
}

/// Brute-force confirmation of the free-cover rank, if within the bound.
fn oracle_check(m: &Manifold, opts: &Options) -> Option<Check> {
    let fp = FreeProductData::from_manifold(m)?;
    let rank = free_cover_rank(&fp).ok()?.rank;
    Some(
        match reidemeister_schreier_rank_oracle(&fp, opts.max_order) {
            Ok(r) => check(
                "free_cover_oracle",
                rank == r.into(),
                format!("formula rank {rank}, coset enumeration rank {r}"),
            ),
            Err(GroupError::BoundExceeded { cosets, bound }) => check(
                "free_cover_oracle",
                true,
                format!("skipped: {cosets} cosets exceed --max-order {bound}"),
            ),
            Err(e) => check("free_cover_oracle", false, e.to_string()),
        },
    )
}

fn path_check(query: Query, m: &Manifold, verdict: bool) -> Option<Check> {
    let r = cross_check(m);
    let paths = match query {
        Query::Product => [
            r.product.topological,
            r.product.geometric,
            r.product.algebraic,
        ],
        Query::NontrivialBundle => [r.bundle.topological, r.bundle.geometric, r.bundle.algebraic],
        Query::AnyBundle => [
            r.product.topological || r.bundle.topological,
            r.product.geometric || r.bundle.geometric,
            r.product.algebraic || r.bundle.algebraic,
        ],
        Query::Presentable => return None,
    };
    Some(check(
        "path_agreement",
        r.consistent() && paths.iter().all(|&p| p == verdict),
        format!(
            "topological {}, geometric {}, algebraic {}",
            paths[0], paths[1], paths[2]
        ),
    ))
}

fn witness_checks(m: &Manifold, witness: &Witness, opts: &Options) -> Vec<Check> {
    match witness {
        Witness::FiniteCover(w) => match m.single_piece().and_then(PrimePiece::as_seifert) {
            Some(s) => w.verify_against(s).checks,
            None => vec![check(
                "cover_target",
                false,
                "finite-cover witness on a non-Seifert input",
            )],
        },
        Witness::BranchedCover { free_cover, schema } => {
            let mut checks: Vec<Check> = oracle_check(m, opts).into_iter().collect();
            match schema {
                Some(s) => {
                    let rank_ok = free_cover.rank == num_bigint::BigInt::from(schema_rank(s));
                    checks.push(check(
                        "schema_matches_free_cover",
                        rank_ok,
                        format!(
                            "schema for n = {}, free cover rank {}",
                            schema_rank(s),
                            free_cover.rank
                        ),
                    ));
                    checks.extend(verify_schema(s).checks);
                }
                None => checks.push(check(
                    "schema_omitted",
                    true,
                    format!(
                        "rank {} exceeds machine integers; no schema emitted",
                        free_cover.rank
                    ),
                )),
            }
            checks
        }
    }
}

fn schema_rank(s: &BranchedCoverSchema) -> u64 {
    match s.source {
        circledom_core::witness::Space::Product { genus } => genus,
        circledom_core::witness::Space::CircleBundle { base_genus, .. } => base_genus,
        _ => u64::MAX,
    }
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "YES"
    } else {
        "NO"
    }
}

/// The parenthesised reason on the first output line.
fn summary(m: &Manifold, d: &Decision) -> String {
    use circledom_core::decision::Clause;
    match d.clause {
        Clause::ProductGeometry | Clause::TwistedBundleGeometry => {
            match m.single_piece().map(classify_geometry) {
                Some(Ok(g)) => format!("geometry {}", g.symbol()),
                _ => d.explanation.clone(),
            }
        }
        _ => d.explanation.clone(),
    }
}

fn describe_cover(w: &FiniteCoverWitness) -> String {
    let cover = match &w.cover {
        CoverDescriptor::Product { genus } => format!("Sigma_{genus} x S1"),
        CoverDescriptor::CircleBundle {
            base_genus,
            euler_number,
        } => format!("circle bundle over Sigma_{base_genus} with Euler number {euler_number}"),
    };
    let status = match w.construction_status {
        circledom_core::witness::ConstructionStatus::Explicit => "explicit",
        circledom_core::witness::ConstructionStatus::ExistenceBacked => {
            "existence-backed, not constructed; minimal arithmetic choice, not canonical"
        }
    };
    format!("finite cover by {cover}, degree {} ({status})", w.degree)
}

fn describe_witness(text: &mut String, witness: &Witness, full: bool) {
    match witness {
        Witness::FiniteCover(w) => {
            let _ = writeln!(text, "witness: {}", describe_cover(w));
        }
        Witness::BranchedCover { free_cover, schema } => {
            let _ = writeln!(
                text,
                "witness: #_{}(S2xS1) covers the input with degree {}",
                free_cover.rank, free_cover.degree
            );
            let Some(s) = schema else {
                let _ = writeln!(text, "  branched-cover schema omitted: rank too large");
                return;
            };
            let _ = writeln!(
                text,
                "  {}: {} -> {}, degree {}",
                s.name, s.source, s.target, s.degree
            );
            if !full {
                return;
            }
            let components = match s.branch_components {
                BranchComponents::Determined(c) => c.to_string(),
                BranchComponents::Undetermined => "undetermined".into(),
            };
            let _ = writeln!(text, "  branch components: {components}");
            if !s.local_degrees.is_empty() {
                let _ = writeln!(text, "  local degrees: {:?}", s.local_degrees);
            }
            for slice in &s.slice_checks {
                let _ = writeln!(
                    text,
                    "  slice {}: chi {} over chi {}, local degrees {:?}",
                    slice.label,
                    slice.source_euler_characteristic,
                    slice.target_euler_characteristic,
                    slice.local_degrees
                );
            }
            if let Some(m) = &s.monodromy {
                let _ = writeln!(
                    text,
                    "  monodromy: {:?}, involution {:?}",
                    m.matrix, m.involution
                );
            }
            if let Some(fs) = &s.fiber_sum {
                let _ = writeln!(
                    text,
                    "  fiber sum: {} summand group(s), Euler number {}, base genus {}",
                    fs.summands.len(),
                    fs.total_euler_number,
                    fs.total_base_genus
                );
            }
            if let Some(pb) = &s.pullback {
                let _ = writeln!(
                    text,
                    "  pullback: base degree {}, Euler number {} -> {}",
                    pb.base_map_degree, pb.bundle_euler_number, pb.pulled_back_euler_number
                );
            }
            if let Some(st) = &s.unramified_stage {
                let _ = writeln!(
                    text,
                    "  unramified stage: {} sheets, free rank {} -> {}",
                    st.sheets, st.base_free_rank, st.cover_free_rank
                );
            }
            if let Some(pi1) = &s.pi1_data {
                let images: Vec<String> = pi1
                    .images
                    .iter()
                    .map(|g| format!("{} -> {}", g.source_generator, g.image))
                    .collect();
                let _ = writeln!(text, "  pi_1 images: {}", images.join(", "));
            }
            for note in &s.notes {
                let _ = writeln!(text, "  note: {note}");
            }
        }
    }
}

fn decision_json(d: &Decision) -> Value {
    json!({
        "verdict": d.verdict,
        "clause": d.clause.id(),
        "explanation": d.explanation,
    })
}

fn query_report(query: Query, desc: &str, opts: &Options, full: bool) -> CmdResult {
    let name = query.id();
    let m = load(name, desc)?;
    let d = match run_query(query, &m) {
        Ok(d) => d,
        Err(e @ DecisionError::FiniteFundamentalGroup { .. }) => {
            return Err(Rejection::new(
                name,
                desc,
                format!("finite fundamental group: {e}"),
            ))
        }
        Err(e @ DecisionError::Inconsistent(_)) => {
            return Ok(Outcome {
                human: format!("internal error: {e}\n"),
                json: json!({"schema_version": SCHEMA_VERSION, "query": name, "input": m.to_string(), "error": {"kind": "inconsistent", "message": e.to_string()}}),
                code: EXIT_INCONSISTENT,
            })
        }
    };

    let mut checks: Vec<Check> = path_check(query, &m, d.verdict).into_iter().collect();
    if let Some(w) = &d.witness {
        checks.extend(witness_checks(&m, w, opts));
    } else if d.verdict && query != Query::Presentable {
        checks.push(check(
            "witness_present",
            false,
            "positive domination without a witness",
        ));
    }

    let mut text = format!(
        "{} ({}: {})\n",
        yes_no(d.verdict),
        d.clause,
        summary(&m, &d)
    );
    let _ = writeln!(text, "input: {m}");
    if summary(&m, &d) != d.explanation {
        let _ = writeln!(text, "explanation: {}", d.explanation);
    }
    if let Some(w) = &d.witness {
        describe_witness(&mut text, w, full);
    } else if full {
        let _ = writeln!(text, "no witness: the answer is negative");
    }
    render_checks(&mut text, &checks, full);

    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "query": name,
        "input": m.to_string(),
        "decision": decision_json(&d),
        "witness_detail": d.witness,
        "checks": checks,
    });
    Ok(Outcome {
        human: text,
        json,
        code: code_for(&checks),
    })
}

pub(crate) fn decide(query: Query, desc: &str, opts: &Options) -> CmdResult {
    query_report(query, desc, opts, false)
}

pub(crate) fn witness(query: Query, desc: &str, opts: &Options) -> CmdResult {
    query_report(query, desc, opts, true)
}

fn algebraic_text(a: &AlgebraicType) -> String {
    match a {
        AlgebraicType::VirtuallyProductFxZ { genus } => {
            format!("virtually pi_1(Sigma_{genus}) x Z")
        }
        AlgebraicType::VirtuallyFree { rank } => format!("virtually free of rank {rank}"),
        AlgebraicType::CentralExtension(c) => format!(
            "virtually a central extension of pi_1(Sigma_{}) by Z with Euler class {}",
            c.base_genus, c.euler_class
        ),
        AlgebraicType::None => "none of the above".into(),
    }
}

pub(crate) fn classify(desc: &str, opts: &Options) -> CmdResult {
    let m = load("classify", desc)?;
    let mut text = format!("input: {m}\n");
    let mut pieces = Vec::new();
    for p in &m.pieces {
        let geometry = classify_geometry(p).ok();
        let mut line = format!("piece {p}: geometry ");
        line.push_str(&geometry.map_or("?".to_string(), |g| format!("{} ({g})", g.symbol())));
        let mut entry = json!({ "piece": p.to_string(), "geometry": geometry, "aspherical": p.is_aspherical() });
        if let Some(s) = p.as_seifert() {
            let e = format_rational(&s.euler_number());
            let chi = format_rational(&s.orbifold_euler_characteristic());
            let _ = write!(line, ", e = {e}, chi_orb = {chi}");
            entry["euler_number"] = json!(e);
            entry["orbifold_euler_characteristic"] = json!(chi);
        }
        let _ = writeln!(text, "{line}");
        pieces.push(entry);
    }
    let essential = m.is_rationally_essential();
    let _ = writeln!(
        text,
        "rationally essential: {}",
        if essential { "yes" } else { "no" }
    );

    let mut checks = Vec::new();
    let mut free_cover = Value::Null;
    if let Some(fp) = FreeProductData::from_manifold(&m) {
        if let Ok(c) = free_cover_rank(&fp) {
            let _ = writeln!(text, "free cover: #_{}(S2xS1), degree {}", c.rank, c.degree);
            free_cover = json!(c);
        }
        checks.extend(oracle_check(&m, opts));
    }
    let algebraic = algebraic_characterization(&m);
    match &algebraic {
        Ok(a) => {
            let _ = writeln!(text, "algebraic: {}", algebraic_text(a));
        }
        Err(e) => checks.push(check("algebraic_characterization", false, e.to_string())),
    }
    let report = cross_check(&m);
    checks.push(consistency_check(&report));

    let mut decisions = serde_json::Map::new();
    for q in QUERIES {
        let (token, clause) = match run_query(q, &m) {
            Ok(d) => (yes_no(d.verdict).to_string(), Some(d.clause.id())),
            Err(DecisionError::FiniteFundamentalGroup { .. }) => ("ERR".to_string(), None),
            Err(e) => {
                checks.push(check("decision", false, e.to_string()));
                ("ERR".to_string(), None)
            }
        };
        match clause {
            Some(c) => {
                let _ = writeln!(text, "{}: {token} ({c})", q.id());
            }
            None => {
                let _ = writeln!(text, "{}: undefined (finite fundamental group)", q.id());
            }
        }
        decisions.insert(
            q.id().to_string(),
            json!({ "verdict": token, "clause": clause }),
        );
    }
    render_checks(&mut text, &checks, false);

    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "query": "classify",
        "input": m.to_string(),
        "pieces": pieces,
        "rationally_essential": essential,
        "free_cover": free_cover,
        "algebraic": algebraic.ok(),
        "decisions": decisions,
        "checks": checks,
    });
    Ok(Outcome {
        human: text,
        json,
        code: code_for(&checks),
    })
}

pub(crate) fn verify(path: &Path) -> CmdResult {
    let input = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|e| Rejection::new("verify", &input, format!("cannot read {input}: {e}")))?;
    let schema: BranchedCoverSchema = serde_json::from_str(&text)
        .map_err(|e| Rejection::new("verify", &input, format!("malformed schema: {e}")))?;
    let report: VerificationReport = verify_schema(&schema);
    let mut human = format!(
        "{} {}\n",
        if report.passed() { "PASS" } else { "FAIL" },
        schema.name
    );
    render_checks(&mut human, &report.checks, true);
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "query": "verify",
        "input": input,
        "schema": schema.name,
        "passed": report.passed(),
        "checks": report.checks,
    });
    Ok(Outcome {
        human,
        json,
        code: code_for(&report.checks),
    })
}

fn consistency_check(r: &ConsistencyReport) -> Check {
    check(
        "path_agreement",
        r.consistent(),
        format!(
            "product {}/{}/{}, bundle {}/{}/{}",
            r.product.topological,
            r.product.geometric,
            r.product.algebraic,
            r.bundle.topological,
            r.bundle.geometric,
            r.bundle.algebraic
        ),
    )
}

fn report_line(r: &ConsistencyReport) -> String {
    format!(
        "{} {}: product {}, ntbundle {}",
        if r.consistent() { "ok" } else { "DISCREPANCY" },
        r.manifold,
        yes_no(r.product.topological),
        yes_no(r.bundle.topological)
    )
}

pub(crate) fn crosscheck(desc: Option<&str>, sweep: bool, corpus_path: Option<&Path>) -> CmdResult {
    if sweep {
        let summary = exhaustive_sweep();
        let mut text = format!(
            "sweep: {} inputs, {} rejected descriptions, {} discrepancies\n",
            summary.inputs,
            summary.rejected,
            summary.discrepancies.len()
        );
        for r in &summary.discrepancies {
            let _ = writeln!(text, "{}", report_line(r));
            for t in &r.trace {
                let _ = writeln!(text, "    {t}");
            }
        }
        let code = if summary.passed() {
            EXIT_OK
        } else {
            EXIT_INCONSISTENT
        };
        let json = json!({
            "schema_version": SCHEMA_VERSION,
            "query": "crosscheck",
            "input": "sweep",
            "inputs": summary.inputs,
            "rejected": summary.rejected,
            "discrepancies": summary.discrepancies,
        });
        return Ok(Outcome {
            human: text,
            json,
            code,
        });
    }

    let (input, manifolds) = match desc {
        Some(d) => (d.to_string(), vec![load("crosscheck", d)?]),
        None => {
            let corpus = load_corpus(corpus_path, "crosscheck")?;
            let ms = corpus
                .entries
                .iter()
                .filter_map(|e| load_manifold(e).ok())
                .collect();
            (corpus_name(corpus_path), ms)
        }
    };
    let reports: Vec<ConsistencyReport> = manifolds.iter().map(cross_check).collect();
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{}", report_line(r));
        if desc.is_some() || !r.consistent() {
            for t in &r.trace {
                let _ = writeln!(text, "    {t}");
            }
        }
    }
    let bad = reports.iter().filter(|r| !r.consistent()).count();
    let _ = writeln!(text, "{} inputs, {bad} discrepancies", reports.len());
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "query": "crosscheck",
        "input": input,
        "reports": reports,
        "discrepancies": bad,
    });
    Ok(Outcome {
        human: text,
        json,
        code: if bad == 0 { EXIT_OK } else { EXIT_INCONSISTENT },
    })
}

fn corpus_name(path: Option<&Path>) -> String {
    path.map_or("bundled corpus".into(), |p| p.display().to_string())
}

fn load_corpus(path: Option<&Path>, query: &str) -> Result<Corpus, Rejection> {
    match path {
        None => Ok(Corpus::bundled()),
        Some(p) => Corpus::load(p).map_err(|e| Rejection::new(query, &p.display().to_string(), e)),
    }
}

pub(crate) fn corpus(path: Option<&Path>) -> CmdResult {
    let corpus = load_corpus(path, "corpus")?;
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut mismatches = 0;
    let mut internal = 0;
    let width = corpus.entries.iter().map(String::len).max().unwrap_or(0);
    let _ = writeln!(
        text,
        "{:width$}  product ntbundle anybundle presentable",
        "description"
    );
    for desc in &corpus.entries {
        let expected = corpus.expected.as_ref().map(|t| t.get(desc).copied());
        let row = match evaluate(desc) {
            Ok(row) => row,
            Err(e) => {
                internal += 1;
                let _ = writeln!(text, "{desc:width$}  internal error: {e}");
                entries.push(json!({ "input": desc, "error": e }));
                continue;
            }
        };
        let status = match expected {
            None => "",
            Some(Some(exp)) if exp == row => "ok",
            Some(Some(_)) => "MISMATCH",
            Some(None) => "MISSING",
        };
        if matches!(status, "MISMATCH" | "MISSING") {
            mismatches += 1;
        }
        let cells: Vec<String> = row.iter().map(Token::to_string).collect();
        let mut line = format!(
            "{desc:width$}  {:7} {:8} {:9} {:11} {status}",
            cells[0], cells[1], cells[2], cells[3]
        );
        if let Some(Some(exp)) = expected.filter(|e| *e != Some(row)) {
            let exp: Vec<String> = exp.iter().map(Token::to_string).collect();
            let _ = write!(line, " (expected {})", exp.join(" "));
        }
        let _ = writeln!(text, "{}", line.trim_end());
        entries.push(json!({
            "input": desc,
            "verdicts": row,
            "expected": expected.flatten(),
            "status": status,
        }));
    }
    let _ = writeln!(
        text,
        "{} entries, {mismatches} mismatches, {internal} internal errors",
        corpus.entries.len()
    );
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "query": "corpus",
        "input": corpus_name(path),
        "entries": entries,
        "mismatches": mismatches,
        "internal_errors": internal,
    });
    Ok(Outcome {
        human: text,
        json,
        code: if mismatches + internal == 0 {
            EXIT_OK
        } else {
            EXIT_INCONSISTENT
        },
    })
}
