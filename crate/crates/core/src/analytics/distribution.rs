use serde::Serialize;

use crate::pwi::PwiRow;

/// One step of an empirical CDF: the share of the group with PWI <= `pwi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CdfPoint {
    pub pwi: f64,
    pub cum_prob: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DistributionExport {
    pub laureates: Vec<CdfPoint>,
    pub non_laureates: Vec<CdfPoint>,
    pub warnings: Vec<String>,
}

fn ecdf(mut values: Vec<f64>) -> Vec<CdfPoint> {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mut points: Vec<CdfPoint> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let cum_prob = (i + 1) as f64 / n;
        match points.last_mut() {
            Some(last) if last.pwi == *v => last.cum_prob = cum_prob,
            _ => points.push(CdfPoint { pwi: *v, cum_prob }),
        }
    }
    points
}

/// Empirical CDFs of PWI, split by laureate status. Ties collapse to one
/// point carrying the cumulative share.
pub fn cumulative_distribution(rows: &[PwiRow]) -> DistributionExport {
    let (laureates, others): (Vec<&PwiRow>, Vec<&PwiRow>) = rows.iter().partition(|r| r.is_laureate);
    let mut warnings = Vec::new();
    if laureates.is_empty() {
        warnings.push("no laureates among the results; laureate series is empty".to_string());
    }
    if others.is_empty() {
        warnings.push("no non-laureates among the results; non-laureate series is empty".to_string());
    }
    DistributionExport {
        laureates: ecdf(laureates.iter().map(|r| r.pwi).collect()),
        non_laureates: ecdf(others.iter().map(|r| r.pwi).collect()),
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::AuthorKey;

    fn row(name: &str, pwi: f64, is_laureate: bool) -> PwiRow {
        PwiRow {
            author: AuthorKey::parse(name).unwrap(),
            pwi,
            n_papers: 1,
            n_coauthors: 0,
            is_laureate,
            pwi_per_paper: pwi,
            pwi_per_coauthor: None,
        }
    }

    fn pts(v: &[(f64, f64)]) -> Vec<CdfPoint> {
        v.iter().map(|&(pwi, cum_prob)| CdfPoint { pwi, cum_prob }).collect()
    }

    #[test]
    fn two_values() {
        assert_eq!(ecdf(vec![1.0, 0.0]), pts(&[(0.0, 0.5), (1.0, 1.0)]));
    }

    #[test]
    fn ties_collapse() {
        assert_eq!(ecdf(vec![2.0, 2.0, 2.0]), pts(&[(2.0, 1.0)]));
    }

    #[test]
    fn table_two_split() {
        let rows = vec![
            row("WALTMAN L", 1.0, true),
            row("BOEKHOUT H", 0.5, false),
            row("VAN DER WEIJDEN I", 0.5, false),
            row("MAHLCK P", 0.0, false),
        ];
        let d = cumulative_distribution(&rows);
        assert_eq!(d.laureates, pts(&[(1.0, 1.0)]));
        assert_eq!(d.non_laureates, pts(&[(0.0, 1.0 / 3.0), (0.5, 1.0)]));
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn empty_group_warns() {
        let d = cumulative_distribution(&[row("A A", 0.0, false)]);
        assert!(d.laureates.is_empty());
        assert_eq!(d.non_laureates, pts(&[(0.0, 1.0)]));
        assert_eq!(d.warnings.len(), 1);
    }
}
