use std::collections::BTreeSet;
use std::fmt::Display;
use std::str::FromStr;

use csv::{ReaderBuilder, StringRecord, Trim};
use serde::{Deserialize, Serialize};

use super::{canonical_locality, format_number, IoError};
use crate::chain::StochasticMatrix;
use crate::estimation::{decompose_regions, CountTable, HorizonTable, RegionRow, Transition};
use crate::findings::Finding;
use crate::state::{StateId, STATE_COUNT};

pub const DELEGATION_HEADER: [&str; 9] = [
    "locality",
    "population",
    "cases",
    "deaths",
    "hospitalized",
    "non_hospitalized",
    "uci",
    "recovered",
    "intubated",
];
pub const REGION_HEADER: [&str; 9] = ["locality", "r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"];
pub const HORIZON_HEADER: [&str; 11] = ["days", "EF", "HF", "UF", "IF", "HU", "UI", "HI", "HS", "US", "IS"];

/// One row of the official per-locality totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelegationRecord {
    pub locality: String,
    pub population: u64,
    pub cases: u64,
    pub deaths: u64,
    pub hospitalized: u64,
    pub non_hospitalized: u64,
    pub uci: u64,
    pub recovered: u64,
    pub intubated: u64,
}

struct Table {
    rows: Vec<(u64, StringRecord)>,
}

fn read_table(bytes: &[u8], header_ok: impl Fn(&StringRecord) -> bool, expected: &str) -> Result<Table, IoError> {
    let mut reader = ReaderBuilder::new().trim(Trim::All).from_reader(bytes);
    let header = reader.headers().map_err(csv_error)?.clone();
    if !header_ok(&header) {
        return Err(IoError::HeaderMismatch {
            expected: expected.to_owned(),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        rows.push((line, record));
    }
    Ok(Table { rows })
}

fn exact_header(expected: &'static [&'static str]) -> impl Fn(&StringRecord) -> bool {
    move |h: &StringRecord| h.iter().eq(expected.iter().copied())
}

fn csv_error(err: csv::Error) -> IoError {
    match err.kind() {
        csv::ErrorKind::UnequalLengths { pos, expected_len, len } => IoError::FieldParse {
            line: pos.as_ref().map_or(0, |p| p.line()),
            column: "(record)".into(),
            value: format!("{len} fields"),
            reason: format!("expected {expected_len} fields"),
        },
        _ => IoError::Structure(err.to_string()),
    }
}

fn field<T>(record: &StringRecord, line: u64, index: usize, column: &str) -> Result<T, IoError>
where
    T: FromStr,
    T::Err: Display,
{
    let raw = record.get(index).unwrap_or("");
    raw.parse().map_err(|e: T::Err| IoError::FieldParse {
        line,
        column: column.to_owned(),
        value: raw.to_owned(),
        reason: e.to_string(),
    })
}

pub fn parse_delegation_table(bytes: &[u8]) -> Result<Vec<DelegationRecord>, IoError> {
    let table = read_table(bytes, exact_header(&DELEGATION_HEADER), &DELEGATION_HEADER.join(","))?;
    table
        .rows
        .iter()
        .map(|(line, r)| {
            let n = |i: usize| field::<u64>(r, *line, i, DELEGATION_HEADER[i]);
            Ok(DelegationRecord {
                locality: r[0].to_owned(),
                population: n(1)?,
                cases: n(2)?,
                deaths: n(3)?,
                hospitalized: n(4)?,
                non_hospitalized: n(5)?,
                uci: n(6)?,
                recovered: n(7)?,
                intubated: n(8)?,
            })
        })
        .collect()
}

pub fn parse_region_table(bytes: &[u8]) -> Result<Vec<RegionRow>, IoError> {
    let table = read_table(bytes, exact_header(&REGION_HEADER), &REGION_HEADER.join(","))?;
    table
        .rows
        .iter()
        .map(|(line, r)| {
            let mut regions = [0u64; 8];
            for (k, slot) in regions.iter_mut().enumerate() {
                *slot = field(r, *line, k + 1, REGION_HEADER[k + 1])?;
            }
            Ok(RegionRow {
                locality: r[0].to_owned(),
                regions,
            })
        })
        .collect()
}

/// Reads a horizon table; rows may come in any order and are sorted by day.
/// Input that is empty or blank is an empty table.
pub fn parse_horizon_table(bytes: &[u8]) -> Result<HorizonTable, IoError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(HorizonTable::new(Vec::new(), Vec::new())?);
    }
    let table = read_table(bytes, exact_header(&HORIZON_HEADER), &HORIZON_HEADER.join(","))?;
    let mut rows: Vec<(u32, [f64; 10])> = Vec::with_capacity(table.rows.len());
    let mut seen = BTreeSet::new();
    for (line, r) in &table.rows {
        let day: u32 = field(r, *line, 0, "days")?;
        if !seen.insert(day) {
            return Err(IoError::DuplicateHorizon(day));
        }
        let mut values = [0.0; 10];
        for (k, slot) in values.iter_mut().enumerate() {
            *slot = field(r, *line, k + 1, HORIZON_HEADER[k + 1])?;
        }
        rows.push((day, values));
    }
    rows.sort_by_key(|(day, _)| *day);
    let (horizons, values) = rows.into_iter().unzip();
    Ok(HorizonTable::new(horizons, values)?)
}

/// Header of a square state table: `from` followed by the six states in
/// canonical order, `D` and `F` interchangeable.
fn state_header(h: &StringRecord) -> bool {
    h.len() == STATE_COUNT + 1
        && &h[0] == "from"
        && h.iter()
            .skip(1)
            .zip(StateId::ALL)
            .all(|(name, s)| name.parse::<StateId>().ok() == Some(s))
}

fn state_rows<V>(
    bytes: &[u8],
    header_hint: &str,
    mut cell: impl FnMut(&str, u64, &str) -> Result<V, IoError>,
) -> Result<[[V; STATE_COUNT]; STATE_COUNT], IoError>
where
    V: Copy + Default,
{
    let table = read_table(bytes, state_header, header_hint)?;
    let mut out = [[V::default(); STATE_COUNT]; STATE_COUNT];
    let mut seen = [false; STATE_COUNT];
    for (line, r) in &table.rows {
        let from: StateId = r[0]
            .parse()
            .map_err(|e: crate::state::ParseStateError| IoError::FieldParse {
                line: *line,
                column: "from".into(),
                value: r[0].to_owned(),
                reason: e.to_string(),
            })?;
        if std::mem::replace(&mut seen[from.index()], true) {
            return Err(IoError::Structure(format!("row {from} appears more than once")));
        }
        for to in StateId::ALL {
            out[from.index()][to.index()] = cell(&r[to.index() + 1], *line, to.code())?;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(IoError::Structure(format!("row {} is missing", StateId::ALL[missing])));
    }
    Ok(out)
}

/// Reads the six matrix rows without checking that they are stochastic.
pub fn parse_matrix_rows(bytes: &[u8]) -> Result<[[f64; STATE_COUNT]; STATE_COUNT], IoError> {
    state_rows(bytes, "from,S,E,H,U,I,D", |raw, line, col| {
        raw.parse::<f64>().map_err(|e| IoError::FieldParse {
            line,
            column: col.into(),
            value: raw.into(),
            reason: e.to_string(),
        })
    })
}

pub fn parse_matrix(bytes: &[u8]) -> Result<StochasticMatrix<f64>, IoError> {
    Ok(StochasticMatrix::new(parse_matrix_rows(bytes)?)?)
}

pub fn parse_count_table(bytes: &[u8]) -> Result<CountTable, IoError> {
    let cells = state_rows(bytes, "from,S,E,H,U,I,F", |raw, line, col| {
        if raw == "-" {
            return Ok(None);
        }
        raw.parse::<i64>().map(Some).map_err(|e| IoError::FieldParse {
            line,
            column: col.into(),
            value: raw.into(),
            reason: e.to_string(),
        })
    })?;
    Ok(CountTable::new(cells)?)
}

pub fn emit_delegation_table(records: &[DelegationRecord]) -> String {
    let mut out = DELEGATION_HEADER.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            quote(&r.locality),
            r.population,
            r.cases,
            r.deaths,
            r.hospitalized,
            r.non_hospitalized,
            r.uci,
            r.recovered,
            r.intubated
        ));
    }
    out
}

pub fn emit_region_table(rows: &[RegionRow]) -> String {
    let mut out = REGION_HEADER.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&quote(&row.locality));
        for v in row.regions {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn emit_horizon_table(table: &HorizonTable) -> String {
    let mut out = HORIZON_HEADER.join(",");
    out.push('\n');
    for (day, values) in table.rows() {
        out.push_str(&day.to_string());
        for v in values {
            out.push(',');
            out.push_str(&format_number(*v));
        }
        out.push('\n');
    }
    out
}

pub fn emit_matrix(p: &StochasticMatrix<f64>) -> String {
    let mut out = String::from("from,S,E,H,U,I,D\n");
    for from in StateId::ALL {
        out.push_str(from.code());
        for v in p.row(from) {
            out.push(',');
            out.push_str(&format_number(*v));
        }
        out.push('\n');
    }
    out
}

pub fn emit_count_table(counts: &CountTable) -> String {
    let mut out = String::from("from,S,E,H,U,I,F\n");
    for from in StateId::ALL {
        out.push_str(from.display_alias());
        for to in StateId::ALL {
            out.push(',');
            match counts.get(from, to) {
                Some(n) => out.push_str(&n.to_string()),
                None => out.push('-'),
            }
        }
        out.push('\n');
    }
    out
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

pub fn emit_findings_csv(findings: &[Finding]) -> String {
    let mut out = String::from("check,subject,expected,observed,difference\n");
    for f in findings {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            quote(&f.check),
            quote(&f.subject),
            format_number(f.expected),
            format_number(f.observed),
            format_number(f.difference)
        ));
    }
    out
}

/// Long-format n-step probabilities for every day in `days` and every
/// transition, written at full round-trip precision.
pub fn emit_plot_data(
    p: &StochasticMatrix<f64>,
    transitions: &[Transition],
    days: impl IntoIterator<Item = u32>,
) -> Result<String, IoError> {
    let mut out = String::from("day,from,to,probability\n");
    for day in days {
        let pn = p.power(day)?;
        for t in transitions {
            out.push_str(&format!("{day},{},{},{}\n", t.from, t.to, pn.get(t.from, t.to)));
        }
    }
    Ok(out)
}

/// Rows whose hospitalized and non-hospitalized counts do not add up to the
/// case count.
pub fn delegation_findings(records: &[DelegationRecord]) -> Vec<Finding> {
    records
        .iter()
        .filter(|r| r.hospitalized + r.non_hospitalized != r.cases)
        .map(|r| {
            Finding::new(
                "hospitalized_plus_non_hospitalized",
                &r.locality,
                r.cases as f64,
                (r.hospitalized + r.non_hospitalized) as f64,
            )
        })
        .collect()
}

/// Diagonal (occupancy) cells of a crossed count table against the
/// delegation record they should repeat: population, cases,
/// hospitalized, UCI, intubated and deaths. Unpublished cells are skipped.
pub fn crossed_findings(counts: &CountTable, record: &DelegationRecord) -> Vec<Finding> {
    let pairs = [
        (StateId::S, "population", record.population),
        (StateId::E, "cases", record.cases),
        (StateId::H, "hospitalized", record.hospitalized),
        (StateId::U, "uci", record.uci),
        (StateId::I, "intubated", record.intubated),
        (StateId::D, "deaths", record.deaths),
    ];
    pairs
        .iter()
        .filter_map(|&(state, column, expected)| {
            let observed = counts.get(state, state)?;
            (observed != expected).then(|| {
                Finding::new(
                    format!("crossed_{}_vs_{column}", state.code()),
                    &record.locality,
                    expected as f64,
                    observed as f64,
                )
            })
        })
        .collect()
}

/// Venn-region totals of every region row against the matching delegation
/// record (matched through [`canonical_locality`]).
pub fn region_findings(records: &[DelegationRecord], regions: &[RegionRow]) -> Vec<Finding> {
    let key = |name: &str| {
        canonical_locality(name)
            .map(str::to_owned)
            .unwrap_or_else(|| name.to_owned())
    };
    regions
        .iter()
        .flat_map(
            |row| match records.iter().find(|r| key(&r.locality) == key(&row.locality)) {
                Some(record) => decompose_regions(row, record.uci, record.intubated).1,
                None => vec![Finding::new("unmatched_locality", &row.locality, 1.0, 0.0)],
            },
        )
        .collect()
}
