use serde::{Deserialize, Serialize};

use super::CountTable;
use crate::findings::Finding;
use crate::state::StateId;

/// The eight region counts `I..VIII` of one locality's hospitalization table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRow {
    pub locality: String,
    pub regions: [u64; 8],
}

/// Hospitalized patients split by membership in U (intensive care),
/// I (intubated) and D (dead).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VennCounts {
    pub u_only: u64,
    pub i_only: u64,
    pub d_only_hospitalized: u64,
    pub ui_only: u64,
    pub ud_only: u64,
    pub id_only: u64,
    pub uid: u64,
    pub hospitalized_total: u64,
}

impl VennCounts {
    pub fn uci_total(&self) -> u64 {
        self.u_only + self.ui_only + self.ud_only + self.uid
    }

    pub fn intubated_total(&self) -> u64 {
        self.i_only + self.ui_only + self.id_only + self.uid
    }

    pub fn dead_hospitalized(&self) -> u64 {
        self.d_only_hospitalized + self.ud_only + self.id_only + self.uid
    }
}

/// Maps table columns to Venn regions and checks the U and I set sizes
/// against the locality's published totals.
///
/// Column order is `I = U only`, `II = D only`, `III = I only`, `IV = U∩I`,
/// `V = U∩D`, `VI = I∩D`, `VII = U∩I∩D`, `VIII = all hospitalized`.
/// Mismatches are returned as findings.
pub fn decompose_regions(row: &RegionRow, uci_total: u64, intubated_total: u64) -> (VennCounts, Vec<Finding>) {
    let r = row.regions;
    let venn = VennCounts {
        u_only: r[0],
        d_only_hospitalized: r[1],
        i_only: r[2],
        ui_only: r[3],
        ud_only: r[4],
        id_only: r[5],
        uid: r[6],
        hospitalized_total: r[7],
    };
    let mut findings = Vec::new();
    if venn.uci_total() != uci_total {
        findings.push(Finding::new(
            "uci_total",
            &row.locality,
            uci_total as f64,
            venn.uci_total() as f64,
        ));
    }
    if venn.intubated_total() != intubated_total {
        findings.push(Finding::new(
            "intubated_total",
            &row.locality,
            intubated_total as f64,
            venn.intubated_total() as f64,
        ));
    }
    (venn, findings)
}

/// Checks the pairwise intersections against the crossed count table:
/// `U∩I`, `U∩D` and `I∩D` (each including the triple overlap). Cells the
/// table leaves unpublished are not checked.
pub fn check_crossed_consistency(crossed: &CountTable, venn: &VennCounts) -> Vec<Finding> {
    use StateId::{D, I, U};
    let checks = [
        ("crossed_u_i", U, I, venn.ui_only + venn.uid),
        ("crossed_u_d", U, D, venn.ud_only + venn.uid),
        ("crossed_i_d", I, D, venn.id_only + venn.uid),
    ];
    checks
        .iter()
        .filter_map(|&(check, a, b, observed)| {
            let expected = crossed.get(a, b)?;
            (expected != observed).then(|| {
                Finding::new(
                    check,
                    format!("({a}, {})", b.display_alias()),
                    expected as f64,
                    observed as f64,
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cdmx() -> RegionRow {
        RegionRow {
            locality: "CDMX".into(),
            regions: [1830, 27900, 2193, 1971, 348, 9086, 3545, 119240],
        }
    }

    #[test]
    fn cdmx_intubated_total_is_off_by_two() {
        let (venn, findings) = decompose_regions(&cdmx(), 7694, 16793);
        assert_eq!(venn.uci_total(), 7694);
        assert_eq!(venn.intubated_total(), 16795);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].check, "intubated_total");
        assert_eq!(findings[0].difference, 2.0);
    }

    #[test]
    fn gustavo_a_madero_uci() {
        let row = RegionRow {
            locality: "Gustavo A.".into(),
            regions: [235, 4457, 237, 203, 52, 1391, 415, 16448],
        };
        let (_, findings) = decompose_regions(&row, 905, 2246);
        assert!(findings.is_empty());
    }

    #[test]
    fn all_zero_row() {
        let row = RegionRow {
            locality: "nowhere".into(),
            regions: [0; 8],
        };
        let (venn, findings) = decompose_regions(&row, 0, 0);
        assert_eq!(venn, VennCounts::default());
        assert!(findings.is_empty());
    }

    #[test]
    fn cdmx_crossed_values_hold() {
        let (venn, _) = decompose_regions(&cdmx(), 7694, 16793);
        assert!(check_crossed_consistency(&fixtures::table3(), &venn).is_empty());
    }

    #[test]
    fn perturbed_triple_overlap_breaks_all_three() {
        let (mut venn, _) = decompose_regions(&cdmx(), 7694, 16793);
        venn.uid += 1;
        let findings = check_crossed_consistency(&fixtures::table3(), &venn);
        assert_eq!(findings.len(), 3);
        assert!(findings.iter().all(|f| f.difference == 1.0));
    }
}
