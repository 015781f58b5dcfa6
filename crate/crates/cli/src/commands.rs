use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

use cdmx_markov::estimation::{
    check_crossed_consistency, count_findings, decompose_regions, fit_matrix_from_horizons, matrix_differences,
    mle_from_counts, CountTable, FitConfig, FitResult, HorizonTable, StructureMask, TABLE_HORIZONS,
};
use cdmx_markov::io::{
    canonical_locality, crossed_findings, emit_plot_data, emit_report, parse_count_table, parse_delegation_table,
    parse_horizon_table, parse_matrix, parse_matrix_rows, parse_region_table, FitSummary, IoError, ReportBody,
    ReportDocument, ReportFormat, ReportMetadata,
};
use cdmx_markov::simulate::{compare_empirical_analytic, simulate_cohort};
use cdmx_markov::{fixtures, ChainError, Finding, StochasticMatrix};

use crate::args::{Common, EstimateArgs, FitArgs, Format, MatrixSource, PlotArgs, SimulateArgs};

/// Entries of the estimate further than this from the bundled matrix are
/// reported; the bundled matrix is printed to two decimals.
const REFERENCE_THRESHOLD: f64 = 0.005;

#[derive(Debug)]
pub enum Failure {
    /// Invalid model or data: exit 1.
    Domain(String),
    /// Unreadable or malformed input, unwritable output, bad usage: exit 2.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn domain(err: impl Display) -> Self {
        Failure::Domain(err.to_string())
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

fn input(path: &Path, err: IoError) -> Failure {
    match err {
        IoError::Chain(_) | IoError::Estimation(_) => Failure::Domain(format!("{}: {err}", path.display())),
        _ => Failure::Io(format!("{}: {err}", path.display())),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_file<T>(path: &Path, parse: impl Fn(&[u8]) -> Result<T, IoError>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| input(path, e))
}

/// What a command produced. `failed` forces exit 1 after the output is written.
pub struct Outcome {
    pub output: Vec<u8>,
    pub findings: usize,
    pub failed: bool,
}

impl Outcome {
    fn report(doc: &ReportDocument, format: Format) -> Self {
        Outcome {
            output: emit_report(doc, report_format(format)),
            findings: doc.body.findings.len(),
            failed: false,
        }
    }
}

fn report_format(format: Format) -> ReportFormat {
    match format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    }
}

fn days(common: &Common) -> Result<Vec<u32>, Failure> {
    let days = common
        .days
        .as_ref()
        .map_or_else(|| TABLE_HORIZONS.to_vec(), |d| d.0.clone());
    if days.is_empty() {
        return Err(Failure::Io("--days must name at least one day".into()));
    }
    Ok(days)
}

fn fit_config(common: &Common) -> FitConfig {
    FitConfig {
        seed: common.seed,
        ..FitConfig::default()
    }
}

fn fit_table(table: &HorizonTable, config: &FitConfig) -> Result<FitResult, Failure> {
    fit_matrix_from_horizons(table, &StructureMask::paper(), config).map_err(Failure::domain)
}

fn load_counts(path: Option<&Path>) -> Result<CountTable, Failure> {
    match path {
        Some(path) => parse_file(path, parse_count_table),
        None => Ok(fixtures::table3()),
    }
}

pub fn resolve_matrix(common: &Common) -> Result<StochasticMatrix, Failure> {
    match &common.matrix {
        MatrixSource::Paper => Ok(fixtures::paper_matrix()),
        MatrixSource::File(path) => parse_file(path, parse_matrix),
        MatrixSource::Mle(path) => mle_from_counts(&load_counts(path.as_deref())?).map_err(Failure::domain),
        MatrixSource::Fit(path) => {
            let table = match path {
                Some(path) => parse_file(path, parse_horizon_table)?,
                None => fixtures::table4(),
            };
            Ok(fit_table(&table, &fit_config(common))?.matrix)
        }
    }
}

fn metadata(common: &Common, horizons: Vec<u32>, parameters: &[(&str, String)]) -> ReportMetadata {
    ReportMetadata {
        matrix_source: common.matrix.to_string(),
        horizons,
        parameters: parameters
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect::<BTreeMap<_, _>>(),
    }
}

fn violation_finding(err: &ChainError) -> Finding {
    match *err {
        ChainError::RowSum { row, sum, .. } => Finding::new("row_sum", format!("row {row}"), 1.0, sum),
        ChainError::Range { row, col, value } => {
            Finding::new("entry_range", format!("{row}->{col}"), value.clamp(0.0, 1.0), value)
        }
        _ => Finding::new(err.to_string(), "matrix", 0.0, 0.0),
    }
}

pub fn validate(common: &Common) -> Result<Outcome, Failure> {
    let rows = match &common.matrix {
        MatrixSource::File(path) => parse_file(path, parse_matrix_rows)?,
        _ => *resolve_matrix(common)?.rows(),
    };
    let findings: Vec<Finding> = StochasticMatrix::violations(&rows)
        .iter()
        .map(violation_finding)
        .collect();
    let failed = !findings.is_empty();
    let doc = ReportDocument {
        metadata: metadata(common, Vec::new(), &[]),
        body: ReportBody {
            findings,
            ..Default::default()
        },
    };
    let mut outcome = Outcome::report(&doc, common.format);
    outcome.failed = failed;
    Ok(outcome)
}

pub fn horizons(common: &Common) -> Result<Outcome, Failure> {
    let p = resolve_matrix(common)?;
    let days = days(common)?;
    let table = HorizonTable::from_matrix(&p, &days).map_err(Failure::domain)?;
    let doc = ReportDocument {
        metadata: metadata(common, table.horizons().to_vec(), &[]),
        body: ReportBody {
            horizon_table: Some(table),
            ..Default::default()
        },
    };
    Ok(Outcome::report(&doc, common.format))
}

pub fn absorb(common: &Common) -> Result<Outcome, Failure> {
    let p = resolve_matrix(common)?;
    let report = p.absorbing_analysis().map_err(Failure::domain)?;
    let doc = ReportDocument {
        metadata: metadata(common, Vec::new(), &[]),
        body: ReportBody {
            absorption: Some(report),
            ..Default::default()
        },
    };
    Ok(Outcome::report(&doc, common.format))
}

pub fn estimate(common: &Common, args: &EstimateArgs) -> Result<Outcome, Failure> {
    let counts = load_counts(args.counts.as_deref())?;
    let p = mle_from_counts::<f64>(&counts).map_err(Failure::domain)?;

    let delegations = match &args.delegations {
        Some(path) => parse_file(path, parse_delegation_table)?,
        None => fixtures::table1(),
    };
    let regions = match &args.regions {
        Some(path) => parse_file(path, parse_region_table)?,
        None => fixtures::table2(),
    };
    let key = |name: &str| canonical_locality(name).map_or_else(|| name.to_owned(), str::to_owned);
    let wanted = key(&args.locality);
    let record = delegations
        .iter()
        .find(|r| key(&r.locality) == wanted)
        .ok_or_else(|| Failure::Io(format!("locality `{}` not in the delegation table", args.locality)))?;
    let region = regions
        .iter()
        .find(|r| key(&r.locality) == wanted)
        .ok_or_else(|| Failure::Io(format!("locality `{}` not in the region table", args.locality)))?;

    let mut findings = count_findings(&counts);
    let (venn, venn_findings) = decompose_regions(region, record.uci, record.intubated);
    findings.extend(venn_findings);
    findings.extend(check_crossed_consistency(&counts, &venn));
    findings.extend(crossed_findings(&counts, record));
    findings.extend(matrix_differences(
        "mle_vs_reference",
        &p,
        &fixtures::paper_matrix(),
        REFERENCE_THRESHOLD,
    ));

    let source = args
        .counts
        .as_ref()
        .map_or_else(|| "bundled".to_owned(), |p| p.display().to_string());
    let doc = ReportDocument {
        metadata: ReportMetadata {
            matrix_source: format!("mle:{source}"),
            horizons: Vec::new(),
            parameters: [("locality".to_owned(), record.locality.clone())].into(),
        },
        body: ReportBody {
            matrix: Some(p),
            findings,
            ..Default::default()
        },
    };
    Ok(Outcome::report(&doc, common.format))
}

pub fn fit(common: &Common, args: &FitArgs) -> Result<Outcome, Failure> {
    let table = parse_file(&args.table, parse_horizon_table)?;
    let config = fit_config(common);
    let result = fit_table(&table, &config)?;
    let doc = ReportDocument {
        metadata: ReportMetadata {
            matrix_source: format!("fit:{}", args.table.display()),
            horizons: table.horizons().to_vec(),
            parameters: [("seed".to_owned(), common.seed.to_string())].into(),
        },
        body: ReportBody {
            matrix: Some(result.matrix),
            fit: Some(FitSummary {
                residual: result.residual,
                iterations: result.iterations,
                converged: result.converged,
                starts: result.starts,
            }),
            ..Default::default()
        },
    };
    Ok(Outcome::report(&doc, common.format))
}

pub fn simulate(common: &Common, args: &SimulateArgs) -> Result<Outcome, Failure> {
    let p = resolve_matrix(common)?;
    let horizon = days(common)?.into_iter().max().unwrap_or(0);
    let cohort = simulate_cohort(&p, args.start, horizon, common.n, common.seed).map_err(Failure::domain)?;
    let z = compare_empirical_analytic(&cohort, &p).map_err(Failure::domain)?;
    let doc = ReportDocument {
        metadata: metadata(
            common,
            vec![horizon],
            &[
                ("seed", common.seed.to_string()),
                ("n", common.n.to_string()),
                ("start", args.start.to_string()),
            ],
        ),
        body: ReportBody {
            cohort: Some(cohort),
            z_scores: Some(z),
            ..Default::default()
        },
    };
    Ok(Outcome::report(&doc, common.format))
}

pub fn plotdata(common: &Common, args: &PlotArgs) -> Result<Outcome, Failure> {
    if common.format != Format::Csv {
        return Err(Failure::Io("plotdata writes CSV only".into()));
    }
    let p = resolve_matrix(common)?;
    let days = match &common.days {
        Some(d) if !d.0.is_empty() => d.0.clone(),
        Some(_) => return Err(Failure::Io("--days must name at least one day".into())),
        None => (1..=365).collect(),
    };
    let csv = emit_plot_data(&p, &args.transitions.0, days).map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(Outcome {
        output: csv.into_bytes(),
        findings: 0,
        failed: false,
    })
}
