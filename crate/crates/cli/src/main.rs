use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hlirred::criteria::{self, Conclusion, Verdict};
use hlirred::diagram::parse_diagram;
use hlirred::homcount::{Engine, HomCensus, HomError, DEFAULT_ORBIT_CAP};
use hlirred::ksinv::{self, KsError, SubgroupParts};
use hlirred::permgroup::{make_group, FiniteGroup, GroupSpec, Perm, DEFAULT_ORDER_CAP};
use hlirred::presentation::catalog::{load_catalog, CatalogError, KsValues, LinkRecord};
use hlirred::presentation::{parse_presentation, Presentation};

#[derive(Parser, Debug)]
#[command(
    name = "hlirred",
    version,
    about = "ks-invariants and irreducibility tests for handlebody links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct EngineOpts {
    /// Worker threads for the search.
    #[arg(long, env = "HLIRRED_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Largest hom count for which orbits are enumerated directly.
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    orbit_cap: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count homomorphisms into a finite group, raw and up to conjugacy.
    Homs {
        /// Presentation file.
        #[arg(long, conflicts_with = "diagram", required_unless_present = "diagram")]
        pres: Option<PathBuf>,
        /// Diagram file; its Wirtinger presentation is used.
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// A4, A5, Zn:<n>, Sn:<n>, V4 or file:<path> (one permutation per line in cycle notation).
        #[arg(long, default_value = "A4")]
        group: String,
        /// Only report counts that do not need orbit enumeration.
        #[arg(long)]
        burnside_only: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineOpts,
    },
    /// Apply the irreducibility criteria to catalog records.
    Verdict {
        #[arg(long)]
        catalog: PathBuf,
        /// Record name.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        name: Option<String>,
        /// Every record in the catalog.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
        /// Exit with status 4 when some record has no applicable rule.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        engine: EngineOpts,
    },
    /// Print the catalog as a table of invariants and criterion marks.
    Table {
        #[arg(long)]
        catalog: PathBuf,
        #[command(flatten)]
        engine: EngineOpts,
    },
    /// Print the Wirtinger presentation of a diagram.
    Wirtinger { diagram: PathBuf },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Cap(String),
    Strict(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Strict(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Cap(m) | CliError::Strict(m) | CliError::Other(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        match e {
            HomError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<KsError> for CliError {
    fn from(e: KsError) -> Self {
        match e {
            KsError::Hom(h) => h.into(),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<criteria::CriteriaError> for CliError {
    fn from(e: criteria::CriteriaError) -> Self {
        use criteria::CriteriaError as E;
        match e {
            E::Hom(h) => h.into(),
            E::Catalog(c) => c.into(),
            E::MalformedType(_) | E::RankBelowGenus { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn engine(opts: &EngineOpts) -> Result<Engine, CliError> {
    let built = match opts.jobs {
        Some(j) => Engine::new(j as usize),
        None => Ok(Engine::default()),
    };
    Ok(built.and_then(|e| e.with_orbit_cap(opts.orbit_cap))?)
}

fn load_group(spec: &str) -> Result<FiniteGroup, CliError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let path = Path::new(path);
        let text = read(path)?;
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        let bad =
            |e: hlirred::permgroup::GroupError| CliError::Parse(format!("{}: {e}", path.display()));
        let first: Vec<Perm> = lines
            .iter()
            .map(|l| Perm::from_cycles(l, 1))
            .collect::<Result<_, _>>()
            .map_err(bad)?;
        let degree = first.iter().map(Perm::degree).max().unwrap_or(1);
        let gens: Vec<Perm> = lines
            .iter()
            .map(|l| Perm::from_cycles(l, degree))
            .collect::<Result<_, _>>()
            .map_err(bad)?;
        let name = path
            .file_stem()
            .map_or("group".to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(make_group(&gens, DEFAULT_ORDER_CAP)
            .map_err(bad)?
            .with_name(name));
    }
    let parsed: GroupSpec = spec
        .parse()
        .map_err(|e| CliError::Parse(format!("--group {spec}: {e}")))?;
    parsed
        .build(DEFAULT_ORDER_CAP)
        .map_err(|e| CliError::Parse(format!("--group {spec}: {e}")))
}

fn load_presentation(
    pres: Option<&Path>,
    diagram: Option<&Path>,
) -> Result<Presentation, CliError> {
    match (pres, diagram) {
        (Some(p), _) => parse_presentation(&read(p)?)
            .map_err(|e| CliError::Parse(format!("{}: {e}", p.display()))),
        (None, Some(d)) => Ok(parse_diagram(&read(d)?)
            .map_err(|e| CliError::Parse(format!("{}: {e}", d.display())))?
            .wirtinger()),
        (None, None) => Err(CliError::Parse(
            "one of --pres or --diagram is required".into(),
        )),
    }
}

#[derive(Serialize)]
struct AbelianizationOut {
    free_rank: usize,
    torsion: Vec<u64>,
}

#[derive(Serialize)]
struct HomsReport {
    group: String,
    order: usize,
    generators: usize,
    relators: usize,
    abelianization: AbelianizationOut,
    ks_w: u64,
    ks: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ks_orbits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    census: Option<HomCensus>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    abelian_parts: Vec<SubgroupParts>,
}

fn cmd_homs(
    pres: Option<&Path>,
    diagram: Option<&Path>,
    group: &str,
    burnside_only: bool,
    json: bool,
    opts: &EngineOpts,
) -> Result<(), CliError> {
    let p = load_presentation(pres, diagram)?;
    let g = load_group(group)?;
    let engine = engine(opts)?;
    let ab = p.abelianization();
    let ks_w = engine.count_homs(&p, &g, None)?;
    let ks = engine.ks_burnside(&p, &g)?;
    let abelian_parts = if ab.is_free_abelian() {
        match ksinv::enumerated_parts(&engine, &p, &g) {
            Ok(parts) => parts,
            Err(KsError::HypothesisFails(_)) => Vec::new(),
            Err(e) => return Err(e.into()),
        }
    } else {
        Vec::new()
    };
    let mut report = HomsReport {
        group: g.name().to_string(),
        order: g.order(),
        generators: p.generator_count(),
        relators: p.relators().len(),
        abelianization: AbelianizationOut {
            free_rank: ab.free_rank,
            torsion: ab.torsion,
        },
        ks_w,
        ks,
        ks_orbits: None,
        census: None,
        abelian_parts,
    };
    let census = if burnside_only {
        Ok(())
    } else {
        engine.classify_homs(&p, &g).map(|c| {
            report.ks_orbits = Some(c.orbits);
            report.census = Some(c);
        })
    };
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Other(e.to_string()))?
        );
    } else {
        print_homs(&report);
    }
    census.map_err(CliError::from)
}

fn print_homs(r: &HomsReport) {
    println!("group {} (order {})", r.group, r.order);
    let torsion: Vec<String> = r
        .abelianization
        .torsion
        .iter()
        .map(|t| format!(" + Z/{t}"))
        .collect();
    println!(
        "presentation: {} generators, {} relators, abelianization Z^{}{}",
        r.generators,
        r.relators,
        r.abelianization.free_rank,
        torsion.concat()
    );
    println!("ks_w={}", r.ks_w);
    println!("ks={}", r.ks);
    if let Some(c) = &r.census {
        println!("ks_orbits={}", c.orbits);
        println!("census:");
        for (t, tally) in &c.by_image_type {
            println!(
                "  {:<14} homs={:<10} orbits={}",
                t.to_string(),
                tally.homs,
                tally.orbits
            );
        }
        println!("surjective_orbits={}", c.surjective_orbits);
    }
    for p in &r.abelian_parts {
        println!(
            "abelian {:<4} count={} ks_H_w={} ks_H_G={}",
            p.iso_type.to_string(),
            p.multiplicity,
            p.ks_h_w,
            p.ks_h_g
        );
    }
}

#[derive(Serialize)]
struct VerdictOut<'a> {
    name: &'a str,
    ks: KsValues,
    summary: String,
    #[serde(flatten)]
    verdict: &'a Verdict,
}

fn evaluate_all(
    records: &[LinkRecord],
    engine: &Engine,
) -> Result<Vec<(KsValues, Verdict)>, CliError> {
    records
        .iter()
        .map(|r| {
            let ks = criteria::resolve_ks(r, engine)?;
            Ok((ks, criteria::verdict(r, ks)?))
        })
        .collect()
}

fn print_verdict(record: &LinkRecord, ks: &KsValues, v: &Verdict) {
    println!(
        "{}  type {}  genus {}  rank {}",
        record.name, v.type_vector, v.genus, v.rank
    );
    let show = |x: Option<u64>| x.map_or("-".to_string(), |n| n.to_string());
    println!("ks_A4={}  ks_A5={}", show(ks.a4), show(ks.a5));
    match &v.rule {
        Some(rule) => println!("rule: {rule}"),
        None => println!("rule: none"),
    }
    for res in &v.results {
        let state = if res.satisfied { "satisfied" } else { "failed" };
        let witnesses: Vec<String> = res.witnesses.iter().map(u32::to_string).collect();
        println!("  {} {state}; witnesses [{}]", res.id, witnesses.join(","));
        for step in &res.trail {
            println!("    {step}");
        }
    }
    println!("{}", v.summary());
}

fn cmd_verdict(
    catalog: &Path,
    name: Option<&str>,
    json: bool,
    strict: bool,
    opts: &EngineOpts,
) -> Result<(), CliError> {
    let mut records = load_catalog(catalog)?;
    if let Some(name) = name {
        records.retain(|r| r.name == name);
        if records.is_empty() {
            return Err(CliError::Parse(format!(
                "no record named {name} in {}",
                catalog.display()
            )));
        }
    }
    let engine = engine(opts)?;
    let results = evaluate_all(&records, &engine)?;
    let outs: Vec<VerdictOut> = records
        .iter()
        .zip(&results)
        .map(|(r, (ks, v))| VerdictOut {
            name: &r.name,
            ks: *ks,
            summary: v.summary(),
            verdict: v,
        })
        .collect();
    if json {
        let text = match name {
            Some(_) => serde_json::to_string_pretty(&outs[0]),
            None => serde_json::to_string_pretty(&outs),
        };
        println!("{}", text.map_err(|e| CliError::Other(e.to_string()))?);
    } else if name.is_some() {
        let (ks, v) = &results[0];
        print_verdict(&records[0], ks, v);
    } else {
        let width = records.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for (r, (_, v)) in records.iter().zip(&results) {
            println!("{:<width$}  {}", r.name, v.summary());
        }
    }
    let unavailable: Vec<&str> = records
        .iter()
        .zip(&results)
        .filter(|(_, (_, v))| v.conclusion == Conclusion::RuleUnavailable)
        .map(|(r, _)| r.name.as_str())
        .collect();
    if strict && !unavailable.is_empty() {
        return Err(CliError::Strict(format!(
            "no applicable rule for {}",
            unavailable.join(", ")
        )));
    }
    Ok(())
}

fn cmd_table(catalog: &Path, opts: &EngineOpts) -> Result<(), CliError> {
    let records = load_catalog(catalog)?;
    let engine = engine(opts)?;
    let results = evaluate_all(&records, &engine)?;
    let show = |x: Option<u64>| x.map_or("-".to_string(), |n| n.to_string());
    let mut rows = vec![[
        "name".to_string(),
        "rank".to_string(),
        "ks_A4".to_string(),
        "A4".to_string(),
        "ks_A5".to_string(),
        "A5".to_string(),
    ]];
    for (r, (ks, v)) in records.iter().zip(&results) {
        rows.push([
            r.name.clone(),
            r.rank.to_string(),
            show(ks.a4),
            v.a4_mark.to_string(),
            show(ks.a5),
            v.a5_mark.to_string(),
        ]);
    }
    let mut widths = [0usize; 6];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
            .collect();
        println!("{}", cells.join("  ").trim_end());
    }
    Ok(())
}

fn cmd_wirtinger(path: &Path) -> Result<(), CliError> {
    let d = parse_diagram(&read(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let (g, ty) = d.genus_and_type();
    let ty: Vec<String> = ty.iter().map(usize::to_string).collect();
    println!("# genus {g}, type [{}]", ty.join(","));
    print!("{}", d.wirtinger());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Homs {
            pres,
            diagram,
            group,
            burnside_only,
            json,
            engine,
        } => cmd_homs(
            pres.as_deref(),
            diagram.as_deref(),
            &group,
            burnside_only,
            json,
            &engine,
        ),
        Command::Verdict {
            catalog,
            name,
            all: _,
            json,
            strict,
            engine,
        } => cmd_verdict(&catalog, name.as_deref(), json, strict, &engine),
        Command::Table { catalog, engine } => cmd_table(&catalog, &engine),
        Command::Wirtinger { diagram } => cmd_wirtinger(&diagram),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hlirred: {e}");
            ExitCode::from(e.code())
        }
    }
}
