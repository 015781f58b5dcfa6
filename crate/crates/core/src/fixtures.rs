//! The published tables, embedded from `data/`.

use crate::chain::StochasticMatrix;
use crate::estimation::{CountTable, HorizonTable, RegionRow};
use crate::io::{self, DelegationRecord};
use crate::scalar::Scalar;

pub const TABLE1_DELEGATIONS: &str = include_str!("../data/table1_delegations.csv");
pub const TABLE2_REGIONS: &str = include_str!("../data/table2_regions.csv");
pub const TABLE3_CROSSED: &str = include_str!("../data/table3_crossed.csv");
pub const TABLE4_CDMX: &str = include_str!("../data/table4_cdmx.csv");
pub const TABLE5_TLALPAN: &str = include_str!("../data/table5_tlalpan.csv");
pub const TABLE6_GUSTAVO_A_MADERO: &str = include_str!("../data/table6_gustavo_a_madero.csv");
pub const TABLE7_IZTAPALAPA: &str = include_str!("../data/table7_iztapalapa.csv");
pub const TABLE8_ALVARO_OBREGON: &str = include_str!("../data/table8_alvaro_obregon.csv");
pub const PAPER_MATRIX: &str = include_str!("../data/paper_matrix.csv");

/// Daily transition matrix of the Mexico City model, as published (rows
/// and columns `S E H U I D`).
pub const PAPER_ROWS: [[f64; 6]; 6] = [
    [0.68, 0.32, 0.0, 0.0, 0.0, 0.0],
    [0.31, 0.65, 0.04, 0.0, 0.0, 0.0],
    [0.66, 0.0, 0.08, 0.01, 0.02, 0.23],
    [0.49, 0.0, 0.0, 0.20, 0.26, 0.05],
    [0.25, 0.0, 0.0, 0.0, 0.0, 0.75],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
];

pub fn paper_matrix<T: Scalar>() -> StochasticMatrix<T> {
    StochasticMatrix::new(PAPER_ROWS.map(|row| row.map(T::lit))).expect("published matrix is stochastic")
}

pub fn table1() -> Vec<DelegationRecord> {
    io::parse_delegation_table(TABLE1_DELEGATIONS.as_bytes()).expect("bundled table 1")
}

pub fn table2() -> Vec<RegionRow> {
    io::parse_region_table(TABLE2_REGIONS.as_bytes()).expect("bundled table 2")
}

pub fn table3() -> CountTable {
    io::parse_count_table(TABLE3_CROSSED.as_bytes()).expect("bundled table 3")
}

pub fn table4() -> HorizonTable {
    io::parse_horizon_table(TABLE4_CDMX.as_bytes()).expect("bundled table 4")
}

/// Horizon tables published for individual delegations, by name.
pub fn appendix_tables() -> Vec<(&'static str, HorizonTable)> {
    [
        ("Tlalpan", TABLE5_TLALPAN),
        ("Gustavo A. Madero", TABLE6_GUSTAVO_A_MADERO),
        ("Iztapalapa", TABLE7_IZTAPALAPA),
        ("Alvaro Obregon", TABLE8_ALVARO_OBREGON),
    ]
    .into_iter()
    .map(|(name, text)| {
        (
            name,
            io::parse_horizon_table(text.as_bytes()).expect("bundled appendix table"),
        )
    })
    .collect()
}
