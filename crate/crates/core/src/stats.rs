//! Reporting intervals and the pairings / relative-improvement scores.

use crate::error::{Error, Result};
use crate::special::z_critical;

/// Gaussian confidence interval reported as `(mean, half_width)`.
pub fn report_ci(samples: &[f64], level: f64) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("reporting level {level} outside (0, 1)")));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, z_critical(level) * (var / n).sqrt()))
}

/// Mean performance of `n` agents on `m` tasks, `perf[agent][task]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerformanceTable {
    perf: Vec<Vec<f64>>,
}

impl PerformanceTable {
    pub fn new(perf: Vec<Vec<f64>>) -> Result<Self> {
        if perf.len() < 2 {
            return Err(Error::invalid("a performance table needs at least two agents"));
        }
        let m = perf[0].len();
        if m == 0 || perf.iter().any(|row| row.len() != m) {
            return Err(Error::invalid("every agent needs the same, non-zero number of tasks"));
        }
        if perf.iter().flatten().any(|p| !p.is_finite()) {
            return Err(Error::invalid("performances must be finite"));
        }
        Ok(Self { perf })
    }

    pub fn agents(&self) -> usize {
        self.perf.len()
    }

    pub fn tasks(&self) -> usize {
        self.perf[0].len()
    }

    pub fn get(&self, agent: usize, task: usize) -> f64 {
        self.perf[agent][task]
    }
}

/// Antisymmetric agent-versus-agent score matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    pub entries: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn task_average(table: &PerformanceTable, term: impl Fn(f64, f64) -> f64) -> ScoreMatrix {
    let n = table.agents();
    let m = table.tasks();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return 0.0;
                    }
                    let total: f64 = (0..m).map(|k| term(table.get(i, k), table.get(j, k))).sum();
                    total / m as f64
                })
                .collect()
        })
        .collect();
    ScoreMatrix { entries }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `M[i][j] = (1/m) Σ_k sgn(p[i][k] - p[j][k])`.
pub fn pairings_matrix(table: &PerformanceTable) -> ScoreMatrix {
    task_average(table, |a, b| sign(a - b))
}

/// `M[i][j] = (1/m) Σ_k (p[i][k] - p[j][k]) / max(|p[i][k]|, |p[j][k]|)`,
/// with a zero term when both performances are zero.
pub fn relative_matrix(table: &PerformanceTable) -> ScoreMatrix {
    task_average(table, |a, b| {
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            0.0
        } else {
            (a - b) / scale
        }
    })
}

/// Row means excluding the diagonal.
pub fn agent_scores(matrix: &ScoreMatrix) -> Vec<f64> {
    let n = matrix.len();
    assert!(n >= 2, "scores need at least two agents");
    matrix
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v)
                .sum::<f64>()
                / (n - 1) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: &[&[f64]]) -> PerformanceTable {
        PerformanceTable::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn report_ci_cases() {
        // z* = 1 at level erf(1/sqrt 2)
        let level = crate::special::erf(1.0 / std::f64::consts::SQRT_2);
        let (m, h) = report_ci(&[1.0, 3.0], level).unwrap();
        assert_eq!(m, 2.0);
        assert!((h - 1.0).abs() < 1e-9);
        assert_eq!(report_ci(&[4.0, 4.0, 4.0], 0.99).unwrap(), (4.0, 0.0));
        let (m, h) = report_ci(&[0.0, 2.0], 0.99).unwrap();
        assert_eq!(m, 1.0);
        assert!((h - 2.575_829_303_548_901).abs() < 1e-9);
        assert!(report_ci(&[1.0], 0.99).is_err());
    }

    #[test]
    fn pairings_cases() {
        assert!(pairings_matrix(&table(&[&[1.0, 2.0], &[1.0, 2.0]]))
            .entries
            .iter()
            .flatten()
            .all(|v| *v == 0.0));
        let m = pairings_matrix(&table(&[&[3.0], &[1.0]]));
        assert_eq!(m.entries, vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let m = pairings_matrix(&table(&[&[3.0, 0.0], &[1.0, 2.0]]));
        assert_eq!(m.entries[0][1], 0.0);
    }

    #[test]
    fn relative_cases() {
        let m = relative_matrix(&table(&[&[2.0], &[1.0]]));
        assert_eq!(m.entries[0][1], 0.5);
        assert_eq!(m.entries[1][0], -0.5);
        assert_eq!(relative_matrix(&table(&[&[0.0], &[0.0]])).entries[0][1], 0.0);
        assert!(relative_matrix(&table(&[&[5.0, -1.0], &[5.0, -1.0]]))
            .entries
            .iter()
            .flatten()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn score_cases() {
        assert_eq!(
            agent_scores(&ScoreMatrix {
                entries: vec![vec![0.0; 3]; 3]
            }),
            vec![0.0; 3]
        );
        let m = ScoreMatrix {
            entries: vec![vec![0.0, 1.0], vec![-1.0, 0.0]],
        };
        assert_eq!(agent_scores(&m), vec![1.0, -1.0]);
        let m = ScoreMatrix {
            entries: vec![vec![0.0, 1.0, 0.5], vec![-1.0, 0.0, 0.0], vec![-0.5, 0.0, 0.0]],
        };
        assert_eq!(agent_scores(&m)[0], 0.75);
    }

    #[test]
    fn table_validation() {
        assert!(PerformanceTable::new(vec![vec![1.0]]).is_err());
        assert!(PerformanceTable::new(vec![vec![1.0], vec![]]).is_err());
        assert!(PerformanceTable::new(vec![vec![], vec![]]).is_err());
        assert!(PerformanceTable::new(vec![vec![f64::NAN], vec![1.0]]).is_err());
    }

    proptest! {
        #[test]
        fn pairings_invariant_under_affine_task_transform(
            rows in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 2..5),
            scale in 0.1f64..10.0,
            shift in -5.0f64..5.0,
            task in 0usize..3,
        ) {
            let t = PerformanceTable::new(rows.clone()).unwrap();
            let mut moved = rows;
            for r in &mut moved {
                r[task] = r[task] * scale + shift;
            }
            let t2 = PerformanceTable::new(moved).unwrap();
            prop_assert_eq!(pairings_matrix(&t), pairings_matrix(&t2));
        }

        #[test]
        fn relative_invariant_under_positive_scaling(
            rows in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 2..5),
            scale in 0.1f64..10.0,
        ) {
            let t = PerformanceTable::new(rows.clone()).unwrap();
            let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
            let a = relative_matrix(&t);
            let b = relative_matrix(&PerformanceTable::new(scaled).unwrap());
            for (ra, rb) in a.entries.iter().zip(&b.entries) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }
}
