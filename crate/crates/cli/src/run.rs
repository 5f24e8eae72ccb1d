use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rlim_core::coherence::{
    build_akl_systems, extend_family, find_trivialization, is_n_coherent, set_name, verify_trivialization, CoherentFamily,
    Target, Trivialization,
};
use rlim_core::prosys::{
    derived_limits, is_flasque, les_of_ses, limit_restriction_cokernel, roos_complex, roos_complex_to_degree, Caps,
    InverseSystem,
};
use rlim_core::walks::{
    build_tau_phi, defect_statistics, recursive_base_family, support_invariant_holds, CanonicalLadders, OrdinalCNF,
    OrdinalFunction, StageKind, WalkFamily,
};
use rlim_core::zmodule::{rank_mod_p, Coeff, FinAbGroup};
use serde_json::{json, Value};

use crate::error::{AtPath, CliError};
use crate::input::{
    coefficient, load_family, load_ses, load_system, load_walks, read_document, ses_source, system_source, Node,
};
use crate::report::{Format, Report, Table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Limn,
    Roos,
    Flasque,
    Les,
    CohCheck,
    CohTrivialize,
    CohExtend { kappa: usize, lambda: usize, mu: usize, nu: usize },
    SuiteAkl { kappa_max: usize, lambda_max: usize },
    SuiteOracle { max_rank: usize },
    WalksRho1,
    WalksDefect,
    WalksFamily,
    WalksRecurse,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Limn => "limn",
            Command::Roos => "roos",
            Command::Flasque => "flasque",
            Command::Les => "les",
            Command::CohCheck => "coh check",
            Command::CohTrivialize => "coh trivialize",
            Command::CohExtend { .. } => "coh extend",
            Command::SuiteAkl { .. } => "suite akl",
            Command::SuiteOracle { .. } => "suite oracle",
            Command::WalksRho1 => "walks rho1",
            Command::WalksDefect => "walks defect",
            Command::WalksFamily => "walks family",
            Command::WalksRecurse => "walks recurse",
        }
    }

    fn parameters(&self) -> Value {
        match *self {
            Command::CohExtend { kappa, lambda, mu, nu } => json!({"kappa": kappa, "lambda": lambda, "mu": mu, "nu": nu}),
            Command::SuiteAkl { kappa_max, lambda_max } => json!({"kappa_max": kappa_max, "lambda_max": lambda_max}),
            Command::SuiteOracle { max_rank } => json!({"max_rank": max_rank}),
            _ => json!({}),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Input document; for `suite oracle`, a corpus directory.
    pub input: Option<PathBuf>,
    pub coeff: Option<Coeff>,
    pub nmax: usize,
    pub seed: Option<u64>,
    pub caps: Caps,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(command: Command, input: Option<PathBuf>) -> Self {
        ExperimentConfig { command, input, coeff: None, nmax: 2, seed: None, caps: Caps::default(), format: Format::Text }
    }

    fn validate(&self) -> Result<(), CliError> {
        let c = &self.caps;
        if c.max_chains == 0 || c.max_subsets == 0 || c.max_poset == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        Ok(())
    }

    fn echo(&self, document: Option<&Value>) -> Value {
        json!({
            "input": self.input.as_ref().map(|p| p.display().to_string()),
            "coeff": self.coeff.map(|c| c.to_string()),
            "nmax": self.nmax,
            "seed": self.seed,
            "parameters": self.command.parameters(),
            "document": document,
        })
    }
}

/// The corpus shipped with this crate.
pub fn bundled_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    if let Command::SuiteOracle { max_rank } = cfg.command {
        let dir = cfg.input.clone().unwrap_or_else(bundled_corpus);
        return suite_oracle(cfg, &dir, max_rank);
    }
    if let Command::SuiteAkl { kappa_max, lambda_max } = cfg.command {
        return suite_akl(cfg, kappa_max, lambda_max);
    }
    let path = cfg.input.as_ref().ok_or_else(|| CliError::Usage(format!("{} needs an input document", cfg.command.name())))?;
    let owned = read_document(path)?;
    let doc = owned.node();
    let mut report = Report::new(cfg.command.name(), cfg.echo(Some(doc.value())), &cfg.caps);
    match &cfg.command {
        Command::Limn => limn(cfg, doc, &mut report)?,
        Command::Roos => roos(cfg, doc, &mut report)?,
        Command::Flasque => flasque(cfg, doc, &mut report)?,
        Command::Les => les(cfg, doc, &mut report)?,
        Command::CohCheck => coh_check(cfg, doc, &mut report)?,
        Command::CohTrivialize => coh_trivialize(cfg, doc, &mut report)?,
        &Command::CohExtend { kappa, lambda, mu, nu } => coh_extend(cfg, doc, &mut report, (kappa, lambda, mu, nu))?,
        Command::WalksRho1 => walks_rho1(doc, &mut report)?,
        Command::WalksDefect => walks_defect(cfg, doc, &mut report)?,
        Command::WalksFamily => walks_family(doc, &mut report)?,
        Command::WalksRecurse => walks_recurse(cfg, doc, &mut report)?,
        Command::SuiteAkl { .. } | Command::SuiteOracle { .. } => unreachable!("handled above"),
    }
    Ok(report)
}

fn system_summary(report: &mut Report, source: &str, s: &InverseSystem) {
    report.caps.record(s.poset());
    let mut t = Table::new("system", &["key", "value"]);
    t.push(["source", source]);
    t.push(["coefficients".to_string(), s.coeff().to_string()]);
    t.push(["elements".to_string(), s.poset().len().to_string()]);
    t.push(["total rank".to_string(), s.total_rank().to_string()]);
    t.push(["directed".to_string(), s.poset().is_directed().to_string()]);
    report.tables.push(t);
    if !s.poset().is_directed() {
        report.warnings.push("poset is not directed".into());
    }
}

fn limn(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let coeff = coefficient(doc, cfg.coeff)?;
    let s = load_system(doc, coeff, &cfg.caps)?;
    system_summary(report, system_source(doc).unwrap_or("-"), &s);
    let lims = derived_limits(&s, cfg.nmax, &cfg.caps).at("$")?;
    let mut t = Table::new("derived limits", &["n", "lim^n"]);
    for (n, g) in lims.iter().enumerate() {
        t.push([n.to_string(), g.to_string()]);
    }
    report.tables.push(t);
    Ok(())
}

fn roos(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let coeff = coefficient(doc, cfg.coeff)?;
    let s = load_system(doc, coeff, &cfg.caps)?;
    system_summary(report, system_source(doc).unwrap_or("-"), &s);
    let r = roos_complex_to_degree(&s, cfg.nmax + 1, &cfg.caps).at("$")?;
    let c = r.complex();
    let mut t = Table::new("roos complex", &["degree", "chains", "rank", "cohomology"]);
    for n in 0..=cfg.nmax + 1 {
        let h = if n <= cfg.nmax { c.cohomology_at(n as i64).at("$")?.to_string() } else { "-".into() };
        t.push([n.to_string(), r.chains(n).len().to_string(), c.rank_at(n as i64).to_string(), h]);
    }
    report.tables.push(t);
    Ok(())
}

fn flasque(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let coeff = coefficient(doc, cfg.coeff)?;
    let s = load_system(doc, coeff, &cfg.caps)?;
    system_summary(report, system_source(doc).unwrap_or("-"), &s);
    let f = is_flasque(&s, &cfg.caps).at("$")?;
    let mut t = Table::new("flasque", &["key", "value"]);
    t.push(["flasque".to_string(), f.flasque.to_string()]);
    t.push(["down-sets checked".to_string(), f.down_sets_checked.to_string()]);
    if let Some(w) = &f.witness {
        let names: Vec<&str> = w.iter().map(|&x| s.poset().name(x)).collect();
        t.push(["witness".to_string(), format!("{{{}}}", names.join(","))]);
        let coker = limit_restriction_cokernel(&s, w).at("$")?;
        t.push(["restriction cokernel".to_string(), coker.to_string()]);
    }
    report.tables.push(t);
    Ok(())
}

fn les(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let coeff = coefficient(doc, cfg.coeff)?;
    let ses = load_ses(doc, coeff, &cfg.caps)?;
    report.caps.record(ses.mid().poset());
    let mut info = Table::new("sequence", &["key", "value"]);
    info.push(["source", ses_source(doc).unwrap_or("-")]);
    info.push(["elements".to_string(), ses.mid().poset().len().to_string()]);
    report.tables.push(info);
    let r = les_of_ses(&ses, cfg.nmax, &cfg.caps).at("$")?;
    if !r.directed {
        report.warnings.push("poset is not directed".into());
    }
    let mut groups = Table::new("derived limits", &["n", "sub", "mid", "quot", "connecting nonzero"]);
    let cell = |v: &[FinAbGroup], n: usize| v.get(n).map_or("-".to_string(), ToString::to_string);
    for n in 0..r.sub.len().max(r.mid.len()).max(r.quot.len()) {
        let delta = r.connecting_nonzero.get(n).map_or("-".to_string(), |b| b.to_string());
        groups.push([n.to_string(), cell(&r.sub, n), cell(&r.mid, n), cell(&r.quot, n), delta]);
    }
    report.tables.push(groups);
    let mut nodes = Table::new("exactness", &["position", "exact"]);
    for node in &r.nodes {
        nodes.push([node.position.clone(), node.exact.to_string()]);
        if !node.exact {
            report.failures.push(format!("long exact sequence not exact at {}", node.position));
        }
    }
    report.tables.push(nodes);
    let show = |b: Option<bool>| b.map_or("undecided".to_string(), |b| b.to_string());
    let mut q = Table::new("flasque middle", &["key", "value"]);
    q.push(["mid flasque".to_string(), show(r.mid_flasque)]);
    q.push(["lim quot / im lim mid".to_string(), r.lim1_quotient.to_string()]);
    q.push(["lim^1 sub matches quotient".to_string(), show(r.lim1_holds)]);
    for &(n, ok) in &r.limn_holds {
        q.push([format!("lim^{n} sub matches lim^{} quot", n - 1), ok.to_string()]);
    }
    report.tables.push(q);
    if r.lim1_holds == Some(false) {
        report.failures.push("lim^1 of sub differs from lim quot / im lim mid with flasque mid".into());
    }
    for &(n, ok) in &r.limn_holds {
        if !ok {
            report.failures.push(format!("lim^{n} of sub differs from lim^{} of quot with flasque mid", n - 1));
        }
    }
    Ok(())
}

fn family_summary(report: &mut Report, fam: &CoherentFamily) {
    let mut t = Table::new("family", &["key", "value"]);
    t.push(["dimension".to_string(), fam.n().to_string()]);
    t.push(["index".to_string(), fam.index().iter().map(|&s| set_name(s)).collect::<Vec<_>>().join(" ")]);
    t.push(["modulus J_max".to_string(), set_name(fam.modulus().jmax())]);
    t.push(["target".to_string(), format!("{}^{}", fam.target().coeff, fam.target().rank)]);
    t.push(["nonzero entries".to_string(), fam.entries().count().to_string()]);
    report.tables.push(t);
    report.warnings.extend(fam.modulus().warnings());
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn coh_check(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let fam = load_family(doc, coefficient(doc, cfg.coeff)?)?;
    family_summary(report, &fam);
    let c = is_n_coherent(&fam);
    let mut t = Table::new("coherence", &["key", "value"]);
    t.push(["coherent".to_string(), c.coherent.to_string()]);
    if let Some(w) = &c.witness {
        t.push(["witness tuple".to_string(), fam.describe_tuple(&w.tuple)]);
        t.push(["witness element".to_string(), w.element.to_string()]);
        t.push(["witness component".to_string(), w.component.to_string()]);
        t.push(["alternating sum".to_string(), w.value.to_string()]);
    }
    report.tables.push(t);
    Ok(())
}

fn trivialization_table(fam: &CoherentFamily, triv: &Trivialization) -> Table {
    match triv {
        Trivialization::Function(psi) => {
            let r = fam.target().rank;
            let mut t = Table::new("trivialization", &["y", "component", "value"]);
            for (i, v) in psi.iter().enumerate() {
                t.push([(i / r).to_string(), (i % r).to_string(), v.to_string()]);
            }
            t
        }
        Trivialization::Family(psi) => family_table("trivialization", psi),
    }
}

fn family_table(name: &str, fam: &CoherentFamily) -> Table {
    let mut t = Table::new(name, &["tuple", "domain", "values"]);
    for (tuple, values) in fam.entries() {
        t.push([fam.describe_tuple(tuple), set_name(fam.domain(tuple)), join(values)]);
    }
    t
}

fn coh_trivialize(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let fam = load_family(doc, coefficient(doc, cfg.coeff)?)?;
    family_summary(report, &fam);
    let coherent = is_n_coherent(&fam).coherent;
    let found = find_trivialization(&fam).at("$.family")?;
    let mut t = Table::new("result", &["key", "value"]);
    t.push(["coherent".to_string(), coherent.to_string()]);
    t.push(["trivial".to_string(), found.is_some().to_string()]);
    report.tables.push(t);
    if let Some(triv) = found {
        if !verify_trivialization(&fam, &triv) {
            report.failures.push("returned trivialization does not reverify".into());
        }
        report.tables.push(trivialization_table(&fam, &triv));
    }
    Ok(())
}

fn coh_extend(
    cfg: &ExperimentConfig,
    doc: Node<'_>,
    report: &mut Report,
    (kappa, lambda, mu, nu): (usize, usize, usize, usize),
) -> Result<(), CliError> {
    let fam = load_family(doc, coefficient(doc, cfg.coeff)?)?;
    family_summary(report, &fam);
    let ext = extend_family(&fam, kappa, lambda, mu, nu, &cfg.caps).at("$.family")?;
    let before = (is_n_coherent(&fam).coherent, find_trivialization(&fam).at("$.family")?.is_some());
    let after = (is_n_coherent(&ext).coherent, find_trivialization(&ext).at("$.family")?.is_some());
    let mut t = Table::new("extension", &["property", "before", "after"]);
    t.push(["coherent".to_string(), before.0.to_string(), after.0.to_string()]);
    t.push(["trivial".to_string(), before.1.to_string(), after.1.to_string()]);
    report.tables.push(t);
    if before.0 != after.0 {
        report.failures.push("extension changed n-coherence".into());
    }
    if before.1 != after.1 {
        report.failures.push("extension changed triviality".into());
    }
    report.tables.push(family_table("extended family", &ext));
    Ok(())
}

struct AklRow {
    cells: Vec<String>,
    failures: Vec<String>,
    poset: rlim_core::prosys::Poset,
}

fn suite_akl(cfg: &ExperimentConfig, kappa_max: usize, lambda_max: usize) -> Result<Report, CliError> {
    let mut report = Report::new(cfg.command.name(), cfg.echo(None), &cfg.caps);
    let coeff = cfg.coeff.unwrap_or(Coeff::Integers);
    let items: Vec<(usize, usize)> = (1..=kappa_max).flat_map(|k| (1..=lambda_max).map(move |l| (k, l))).collect();
    let rows: Vec<Result<AklRow, CliError>> = items
        .par_iter()
        .map(|&(k, l)| {
            let start = Instant::now();
            let id = format!("A({k},{l})");
            let ses = build_akl_systems(k, l, Target::new(coeff, 1), &cfg.caps).at(&id)?;
            let a = derived_limits(ses.sub(), cfg.nmax, &cfg.caps).at(&id)?;
            let b = derived_limits(ses.mid(), cfg.nmax, &cfg.caps).at(&id)?;
            let flasque = is_flasque(ses.mid(), &cfg.caps).at(&id)?.flasque;
            let les = les_of_ses(&ses, cfg.nmax, &cfg.caps).at(&id)?;
            let mut failures = Vec::new();
            let expected0 = FinAbGroup::free(coeff, k * l);
            if a[0] != expected0 {
                failures.push(format!("{id}: lim^0 is {}, expected {expected0}", a[0]));
            }
            for (n, g) in a.iter().enumerate().skip(1) {
                if !g.is_trivial() {
                    failures.push(format!("{id}: lim^{n} is {g}, expected 0"));
                }
            }
            if !flasque {
                failures.push(format!("B({k},{l}) is not flasque"));
            }
            if !les.all_exact() {
                failures.push(format!("{id}: long exact sequence not exact"));
            }
            let mut cells = vec![id, ses.sub().poset().len().to_string()];
            cells.extend(a.iter().map(ToString::to_string));
            cells.push(flasque.to_string());
            cells.push(b.iter().skip(1).all(FinAbGroup::is_trivial).to_string());
            cells.push(les.all_exact().to_string());
            eprintln!("suite akl: A({k},{l}) in {:.3}s", start.elapsed().as_secs_f64());
            Ok(AklRow { cells, failures, poset: ses.sub().poset().clone() })
        })
        .collect();
    let mut columns: Vec<String> = vec!["item".into(), "elements".into()];
    columns.extend((0..=cfg.nmax).map(|n| format!("lim^{n} A")));
    columns.extend(["B flasque".to_string(), "lim^>0 B = 0".into(), "les exact".into()]);
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut t = Table::new("akl", &cols);
    for row in rows {
        let row = row?;
        report.caps.record(&row.poset);
        t.push(row.cells);
        report.failures.extend(row.failures);
    }
    report.tables.push(t);
    Ok(report)
}

/// `dim H^n` over `ℤ/p` by row reduction, independent of the Smith-form path.
pub fn gaussian_dims(c: &rlim_core::complex::CochainComplex, p: u32) -> Vec<usize> {
    c.degrees()
        .map(|n| c.rank_at(n) - rank_mod_p(&c.differential_at(n), p) - rank_mod_p(&c.differential_at(n - 1), p))
        .collect()
}

enum OracleItem {
    Checked { id: String, rank: usize, snf: Vec<usize>, gauss: Vec<usize> },
    Skipped { id: String, reason: String },
}

/// Every system in the corpus, keyed `file` or `file:part` for sequences.
pub fn corpus_systems(dir: &Path, caps: &Caps) -> Result<(Vec<(String, InverseSystem)>, Vec<(String, String)>), CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|source| CliError::Io { path: dir.display().to_string(), source })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut systems = Vec::new();
    let mut skipped = Vec::new();
    for f in files {
        let id = f.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        let owned = match read_document(&f) {
            Ok(d) => d,
            Err(e) => {
                skipped.push((id, e.to_string()));
                continue;
            }
        };
        let doc = owned.node();
        if system_source(doc).is_some() {
            match load_system(doc, Coeff::Integers, caps) {
                Ok(s) => systems.push((id.clone(), s)),
                Err(e) => skipped.push((id.clone(), e.to_string())),
            }
        }
        if doc.has("ses") {
            match load_ses(doc, Coeff::Integers, caps) {
                Ok(s) => {
                    systems.push((format!("{id}:sub"), s.sub().clone()));
                    systems.push((format!("{id}:mid"), s.mid().clone()));
                    systems.push((format!("{id}:quot"), s.quot().clone()));
                }
                Err(e) => skipped.push((format!("{id}:ses"), e.to_string())),
            }
        }
        if system_source(doc).is_none() && !doc.has("ses") {
            skipped.push((id, "no system in document".into()));
        }
    }
    Ok((systems, skipped))
}

fn suite_oracle(cfg: &ExperimentConfig, dir: &Path, max_rank: usize) -> Result<Report, CliError> {
    let coeff = cfg.coeff.unwrap_or(Coeff::ModP(2));
    let Some(p) = coeff.modulus() else {
        return Err(CliError::Usage("suite oracle needs a field, Z/p".into()));
    };
    let mut report = Report::new(cfg.command.name(), cfg.echo(None), &cfg.caps);
    let (systems, skipped_files) = corpus_systems(dir, &cfg.caps)?;
    let items: Vec<Result<OracleItem, CliError>> = systems
        .par_iter()
        .map(|(id, s)| {
            let start = Instant::now();
            let s = s.with_coeff(coeff);
            let total: u128 = s.poset().chain_counts().iter().fold(0u128, |a, &c| a.saturating_add(c));
            if total > cfg.caps.max_chains as u128 {
                return Ok(OracleItem::Skipped { id: id.clone(), reason: format!("{total} chains exceed the chain cap") });
            }
            let r = roos_complex(&s, &cfg.caps).at(id)?;
            let c = r.complex();
            let rank = c.total_rank();
            if rank > max_rank {
                return Ok(OracleItem::Skipped { id: id.clone(), reason: format!("total Roos rank {rank} > {max_rank}") });
            }
            let snf = c.degrees().map(|n| c.cohomology_at(n).map(|g| g.free_rank())).collect::<Result<Vec<_>, _>>().at(id)?;
            let gauss = gaussian_dims(c, p);
            eprintln!("suite oracle: {id} in {:.3}s", start.elapsed().as_secs_f64());
            Ok(OracleItem::Checked { id: id.clone(), rank, snf, gauss })
        })
        .collect();
    let mut checked = Table::new("oracle", &["item", "roos rank", "smith dims", "gaussian dims", "agree"]);
    let mut skipped = Table::new("skipped", &["item", "reason"]);
    for (id, reason) in skipped_files {
        skipped.push([id, reason]);
    }
    for (item, (_, s)) in items.into_iter().zip(&systems) {
        match item? {
            OracleItem::Checked { id, rank, snf, gauss } => {
                report.caps.record(s.poset());
                let agree = snf == gauss;
                if !agree {
                    report.failures.push(format!("{id}: Smith-form dims {snf:?} differ from row-reduction dims {gauss:?}"));
                }
                checked.push([id, rank.to_string(), join(&snf), join(&gauss), agree.to_string()]);
            }
            OracleItem::Skipped { id, reason } => skipped.push([id, reason]),
        }
    }
    skipped.rows.sort();
    report.tables.push(checked);
    report.tables.push(skipped);
    Ok(report)
}

fn walk_family(bound: &OrdinalCNF) -> WalkFamily {
    WalkFamily::new(Arc::new(CanonicalLadders), bound.clone())
}

fn walks_rho1(doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let input = load_walks(doc)?;
    let w = walk_family(&input.bound);
    let mut t = Table::new("rho1", &["xi", "beta", "rho1", "walk"]);
    for (xi, beta) in &input.pairs {
        let r = w.rho1(xi, beta).at("$.walks.pairs")?;
        let steps = w.walk(xi, beta).at("$.walks.pairs")?;
        let trace: Vec<String> = steps.iter().map(|(g, c)| format!("{g}:{c}")).collect();
        t.push([xi.to_string(), beta.to_string(), r.to_string(), trace.join(" > ")]);
    }
    report.tables.push(t);
    Ok(())
}

/// A random ordinal below `bound` with coefficients below 5.
fn sample_below(rng: &mut ChaCha8Rng, bound: &OrdinalCNF) -> OrdinalCNF {
    let top = bound.degree().unwrap_or(0);
    loop {
        let mut x = OrdinalCNF::zero();
        for e in (0..=top).rev() {
            x = x.add(&OrdinalCNF::monomial(e, rng.gen_range(0..5)));
        }
        if &x < bound {
            return x;
        }
    }
}

fn walks_defect(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let input = load_walks(doc)?;
    let w = walk_family(&input.bound);
    let mut pairs = input.pairs.clone();
    if let Some(samples) = input.samples {
        let seed = cfg.seed.ok_or_else(|| CliError::Usage("sampled pairs need --seed".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (a, b) = (sample_below(&mut rng, &input.bound), sample_below(&mut rng, &input.bound));
            pairs.push(if a <= b { (a, b) } else { (b, a) });
        }
    }
    let mut t = Table::new("defects", &["alpha", "beta", "size", "defect"]);
    for (a, b) in &pairs {
        let d = w.coherence_defect(a, b).at("$.walks")?;
        t.push([a.to_string(), b.to_string(), d.len().to_string(), join(&d.iter().collect::<Vec<_>>())]);
    }
    report.tables.push(t);
    let stats = defect_statistics(&w, &pairs, input.max_k).at("$.walks")?;
    let mut s = Table::new("statistics", &["key", "value"]);
    s.push(["pairs".to_string(), stats.pairs.to_string()]);
    s.push(["max defect".to_string(), stats.max_defect.to_string()]);
    s.push([format!("max fiber, k <= {}", input.max_k), stats.max_fiber.to_string()]);
    for (size, count) in &stats.defect_sizes {
        s.push([format!("defects of size {size}"), count.to_string()]);
    }
    report.tables.push(s);
    Ok(())
}

fn walks_family(doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let input = load_walks(doc)?;
    let w = walk_family(&input.bound);
    let f = OrdinalFunction::new(input.function);
    let tp = build_tau_phi(&w, &f).at("$.walks.f")?;
    let mut summary = Table::new("function", &["key", "value"]);
    summary.push(["sp(f)".to_string(), tp.sp.to_string()]);
    summary.push(["|X(f)|".to_string(), tp.phi.len().to_string()]);
    report.tables.push(summary);
    let mut cols = Table::new("tau columns", &["xi", "row"]);
    for (xi, row) in &tp.tau_columns {
        cols.push([xi.to_string(), row.to_string()]);
    }
    report.tables.push(cols);
    let mut phi = Table::new("phi", &["i", "xi", "value"]);
    for ((i, xi), v) in &tp.phi {
        phi.push([i.to_string(), xi.to_string(), v.to_string()]);
    }
    report.tables.push(phi);
    Ok(())
}

fn walks_recurse(cfg: &ExperimentConfig, doc: Node<'_>, report: &mut Report) -> Result<(), CliError> {
    let input = load_walks(doc)?;
    let coeff = coefficient(doc, cfg.coeff)?;
    let width = input.width.unwrap_or(3);
    let fam = recursive_base_family(&CanonicalLadders, &input.bound, width, coeff).at("$.walks")?;
    let mut t = Table::new("stages", &["beta", "kind", "nonzero", "inserted", "trivialization support", "invariant"]);
    for s in &fam.stages {
        let holds = support_invariant_holds(&fam.stages, &s.beta.succ());
        if !holds {
            report.failures.push(format!("support invariant fails at {}", s.beta));
        }
        let (kind, inserted, triv) = match &s.kind {
            StageKind::Zero => ("zero", 0, 0),
            StageKind::Successor => ("successor", 0, 0),
            StageKind::Limit { trivialization, inserted } => ("limit", inserted.len(), trivialization.len()),
        };
        t.push([s.beta.to_string(), kind.to_string(), s.values.len().to_string(), inserted.to_string(), triv.to_string(), holds.to_string()]);
    }
    report.tables.push(t);
    Ok(())
}
