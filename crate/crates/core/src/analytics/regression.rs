use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// A named predictor column.
#[derive(Clone, Debug, PartialEq)]
pub struct Predictor {
    pub name: String,
    pub values: Vec<f64>,
}

impl Predictor {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegressionTerm {
    pub name: String,
    pub coefficient: f64,
    /// Standardized slope `b * sd(x) / sd(y)`.
    pub beta: f64,
    /// Drop in R² when this predictor is removed from the model.
    pub semipartial_r2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegressionReport {
    pub constant: f64,
    pub terms: Vec<RegressionTerm>,
    pub r2: f64,
    /// Overall F; absent when the fit is exact (R² = 1).
    pub f_statistic: Option<f64>,
    pub n: usize,
}

struct Fit {
    coefficients: Vec<f64>,
    r2: f64,
}

fn sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Least squares with an intercept, via Householder QR. `names` labels the
/// columns for rank-deficiency reports.
fn fit(y: &[f64], columns: &[&[f64]], names: &[&str]) -> Result<Fit> {
    let n = y.len();
    let p = columns.len() + 1;
    let design = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] });
    let qr = design.clone().qr();
    let r = qr.r();

    // A vanishing diagonal entry means that column lies in the span of the
    // ones before it.
    let mut collinear = Vec::new();
    for j in 0..p {
        let norm = design.column(j).norm();
        if norm == 0.0 || r[(j, j)].abs() <= 1e-10 * norm {
            collinear.push(if j == 0 {
                "constant".to_string()
            } else {
                names[j - 1].to_string()
            });
        }
    }
    if !collinear.is_empty() {
        return Err(Error::RankDeficient(collinear));
    }

    let y_vec = DVector::from_column_slice(y);
    let qty = qr.q().transpose() * &y_vec;
    let b = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient(names.iter().map(|s| s.to_string()).collect()))?;

    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let residuals = &y_vec - &design * &b;
    let sse = residuals.norm_squared();
    let r2 = if sst == 0.0 {
        0.0
    } else {
        (1.0 - sse / sst).clamp(0.0, 1.0)
    };
    Ok(Fit {
        coefficients: b.iter().copied().collect(),
        r2,
    })
}

/// Ordinary least squares of `y` on the predictors plus a constant.
///
/// Reports coefficients, standardized betas, semipartial R² per predictor
/// (full R² minus R² without that predictor), overall R² and F.
pub fn ols_regress(y: &[f64], predictors: &[Predictor]) -> Result<RegressionReport> {
    let n = y.len();
    let k = predictors.len();
    for p in predictors {
        if p.values.len() != n {
            return Err(Error::LengthMismatch(n, p.values.len()));
        }
    }
    if n <= k + 1 {
        return Err(Error::TooFewObservations(format!(
            "{n} observations for {k} predictors"
        )));
    }
    if y.iter()
        .chain(predictors.iter().flat_map(|p| &p.values))
        .any(|v| !v.is_finite())
    {
        return Err(Error::NonFinite);
    }

    let columns: Vec<&[f64]> = predictors.iter().map(|p| p.values.as_slice()).collect();
    let names: Vec<&str> = predictors.iter().map(|p| p.name.as_str()).collect();
    let full = fit(y, &columns, &names)?;

    let sd_y = sd(y);
    if sd_y == 0.0 {
        // Constant response: the mean explains everything there is.
        return Ok(RegressionReport {
            constant: y[0],
            terms: predictors
                .iter()
                .map(|p| RegressionTerm {
                    name: p.name.clone(),
                    coefficient: 0.0,
                    beta: 0.0,
                    semipartial_r2: 0.0,
                })
                .collect(),
            r2: 0.0,
            f_statistic: Some(0.0),
            n,
        });
    }

    let mut terms = Vec::with_capacity(k);
    for (j, p) in predictors.iter().enumerate() {
        let mut reduced_cols = columns.clone();
        let mut reduced_names = names.clone();
        reduced_cols.remove(j);
        reduced_names.remove(j);
        let reduced = fit(y, &reduced_cols, &reduced_names)?;
        let coefficient = full.coefficients[j + 1];
        terms.push(RegressionTerm {
            name: p.name.clone(),
            coefficient,
            beta: coefficient * sd(&p.values) / sd_y,
            semipartial_r2: (full.r2 - reduced.r2).clamp(0.0, full.r2),
        });
    }

    let f_statistic = (full.r2 < 1.0).then(|| (full.r2 / k as f64) / ((1.0 - full.r2) / (n - k - 1) as f64));
    Ok(RegressionReport {
        constant: full.coefficients[0],
        terms,
        r2: full.r2,
        f_statistic,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Solves the normal equations X'X b = X'y by Gauss-Jordan elimination
    /// with partial pivoting.
    fn normal_equations(y: &[f64], cols: &[&[f64]]) -> Vec<f64> {
        let n = y.len();
        let p = cols.len() + 1;
        let x = |i: usize, j: usize| if j == 0 { 1.0 } else { cols[j - 1][i] };
        let mut a = vec![vec![0.0; p + 1]; p];
        for r in 0..p {
            for c in 0..p {
                a[r][c] = (0..n).map(|i| x(i, r) * x(i, c)).sum();
            }
            a[r][p] = (0..n).map(|i| x(i, r) * y[i]).sum();
        }
        for c in 0..p {
            let pivot = (c..p).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            a.swap(c, pivot);
            for r in 0..p {
                if r != c {
                    let f = a[r][c] / a[c][c];
                    for k in c..=p {
                        a[r][k] -= f * a[c][k];
                    }
                }
            }
        }
        (0..p).map(|r| a[r][p] / a[r][r]).collect()
    }

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (1..=6).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let report = ols_regress(&y, &[Predictor::new("x", x)]).unwrap();
        assert!((report.terms[0].coefficient - 2.0).abs() < 1e-12);
        assert!(report.constant.abs() < 1e-12);
        assert!((report.r2 - 1.0).abs() < 1e-12);
        assert!((report.terms[0].beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_response() {
        let report = ols_regress(&[3.0; 5], &[Predictor::new("x", vec![1.0, 2.0, 3.0, 5.0, 8.0])]).unwrap();
        assert_eq!(report.r2, 0.0);
        assert_eq!(report.terms[0].coefficient, 0.0);
        assert_eq!(report.constant, 3.0);
    }

    #[test]
    fn eight_points_two_predictors_match_normal_equations() {
        let x1 = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let x2 = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0, 9.0, 7.0];
        let y = [3.1, 3.9, 7.2, 7.8, 11.5, 11.9, 16.8, 15.2];
        let oracle = normal_equations(&y, &[&x1, &x2]);
        let report = ols_regress(
            &y,
            &[Predictor::new("x1", x1.to_vec()), Predictor::new("x2", x2.to_vec())],
        )
        .unwrap();
        assert!((report.constant - oracle[0]).abs() < 1e-9);
        assert!((report.terms[0].coefficient - oracle[1]).abs() < 1e-9);
        assert!((report.terms[1].coefficient - oracle[2]).abs() < 1e-9);
        assert!(report.r2 > 0.9 && report.r2 <= 1.0);
        for t in &report.terms {
            assert!(t.semipartial_r2 >= 0.0 && t.semipartial_r2 <= report.r2);
        }
        let f = report.f_statistic.unwrap();
        let expected = (report.r2 / 2.0) / ((1.0 - report.r2) / 5.0);
        assert!((f - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn single_predictor_semipartial_is_r2() {
        let x = vec![1.0, 3.0, 2.0, 5.0, 4.0];
        let y = [2.0, 5.0, 1.0, 6.0, 5.0];
        let report = ols_regress(&y, &[Predictor::new("x", x)]).unwrap();
        assert!((report.terms[0].semipartial_r2 - report.r2).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_names_columns() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v + 1.0).collect();
        let err = ols_regress(
            &[1.0, 3.0, 2.0, 5.0, 4.0],
            &[Predictor::new("a", a), Predictor::new("b", b)],
        )
        .unwrap_err();
        match err {
            Error::RankDeficient(cols) => assert_eq!(cols, vec!["b".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
        let err = ols_regress(&[1.0, 3.0, 2.0, 5.0], &[Predictor::new("flag", vec![0.0; 4])]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(c) if c == vec!["flag".to_string()]));
    }

    #[test]
    fn too_few_observations() {
        assert!(matches!(
            ols_regress(&[1.0, 2.0], &[Predictor::new("x", vec![1.0, 2.0])]),
            Err(Error::TooFewObservations(_))
        ));
        assert!(matches!(
            ols_regress(&[1.0, 2.0, 3.0], &[Predictor::new("x", vec![1.0, 2.0])]),
            Err(Error::LengthMismatch(3, 2))
        ));
    }
}
