//! Dense semidefinite programming: linear objective over Hermitian and scalar
//! blocks, scalar affine constraints, affine PSD constraints.
//!
//! Solves are single-threaded and self-contained; distinct solves may run
//! concurrently.

mod compile;
mod problem;
mod solver;
mod stats;

pub use compile::{compile_standard_form, ConeBlock, ConicProgram, VarBlock};
pub use problem::{
    BlockKind, BlockValue, PsdConstraint, RayCertificate, Relation, ScalarConstraint, SdpBlock,
    SdpObjective, SdpProblem, SdpResiduals, SdpSettings, SdpSolution, SdpStatus,
};
pub use solver::{solve_conic, solve_sdp};
pub use stats::{solve_stats, SolveStats};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HermitianOperator;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn herm(entries: &[Complex64], d: usize) -> HermitianOperator {
        HermitianOperator::try_new(DMatrix::from_row_slice(d, d, entries)).unwrap()
    }

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli3() -> HermitianOperator {
        herm(&[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)], 2)
    }

    fn hermitian_block(id: &str, d: usize) -> SdpBlock {
        SdpBlock {
            id: id.into(),
            kind: BlockKind::Hermitian(d),
        }
    }

    /// min tr(X) s.t. X >= C: optimum tr(C), attained at X = C.
    #[test]
    fn min_trace_above_fixed_operator() {
        let c = herm(
            &[z(1.0, 0.0), z(0.3, 0.4), z(0.3, -0.4), z(-0.5, 0.0)],
            2,
        );
        let problem = SdpProblem {
            blocks: vec![hermitian_block("X", 2)],
            objective: SdpObjective {
                operator_coeffs: vec![(0, HermitianOperator::identity(2))],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints: vec![],
            psd_constraints: vec![PsdConstraint {
                terms: vec![(0, 1.0)],
                constant: c.scale(-1.0),
                label: "X - C >= 0".into(),
            }],
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective, c.trace(), epsilon = 1e-7);
        let x = sol.block_values[0].as_hermitian().unwrap();
        assert!((x - &c).max_abs_entry() < 1e-5);
    }

    /// min tr(σ₃ Q) s.t. Q >= 0, tr Q = 1: optimum -1 at the ground-state
    /// projector.
    #[test]
    fn ground_state_projector() {
        let problem = SdpProblem {
            blocks: vec![hermitian_block("Q", 2)],
            objective: SdpObjective {
                operator_coeffs: vec![(0, pauli3())],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints: vec![ScalarConstraint {
                operator_terms: vec![(0, HermitianOperator::identity(2))],
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: 1.0,
                label: "tr Q = 1".into(),
            }],
            psd_constraints: vec![PsdConstraint {
                terms: vec![(0, 1.0)],
                constant: HermitianOperator::zeros(2),
                label: "Q >= 0".into(),
            }],
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective, -1.0, epsilon = 1e-7);
    }

    /// max tr(PD), D = diag(1,-1), 0 <= P <= I: optimum 1 at P = diag(1,0).
    #[test]
    fn variational_trace_distance_form() {
        let problem = SdpProblem {
            blocks: vec![hermitian_block("P", 2)],
            objective: SdpObjective {
                // Minimize -tr(PD).
                operator_coeffs: vec![(0, pauli3().scale(-1.0))],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints: vec![],
            psd_constraints: vec![
                PsdConstraint {
                    terms: vec![(0, 1.0)],
                    constant: HermitianOperator::zeros(2),
                    label: "P >= 0".into(),
                },
                PsdConstraint {
                    terms: vec![(0, -1.0)],
                    constant: HermitianOperator::identity(2),
                    label: "P <= I".into(),
                },
            ],
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert_abs_diff_eq!(-sol.objective, 1.0, epsilon = 1e-7);

        // Enumeration oracle: diagonal P on a fine grid. By unitary freedom in
        // the eigenbasis of D the optimum is attained at diagonal P.
        let mut best = f64::NEG_INFINITY;
        let steps = 200;
        for a in 0..=steps {
            for b in 0..=steps {
                let p1 = a as f64 / steps as f64;
                let p2 = b as f64 / steps as f64;
                best = best.max(p1 - p2);
            }
        }
        assert_abs_diff_eq!(-sol.objective, best, epsilon = 1e-7);
    }

    /// Determinism: identical problem and settings give bit-identical results.
    #[test]
    fn deterministic_solves() {
        let problem = SdpProblem {
            blocks: vec![hermitian_block("Q", 2)],
            objective: SdpObjective {
                operator_coeffs: vec![(0, pauli3())],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints: vec![ScalarConstraint {
                operator_terms: vec![(0, HermitianOperator::identity(2))],
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: 1.0,
                label: "tr Q = 1".into(),
            }],
            psd_constraints: vec![PsdConstraint {
                terms: vec![(0, 1.0)],
                constant: HermitianOperator::zeros(2),
                label: "Q >= 0".into(),
            }],
        };
        let a = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        let b = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    /// Conflicting scalar bounds on the same coordinate: primal infeasible
    /// with a certificate.
    #[test]
    fn detects_primal_infeasibility() {
        let problem = SdpProblem {
            blocks: vec![hermitian_block("Q", 2)],
            objective: SdpObjective::default(),
            scalar_constraints: vec![
                ScalarConstraint {
                    operator_terms: vec![(0, HermitianOperator::identity(2))],
                    scalar_terms: vec![],
                    relation: Relation::Ge,
                    rhs: 2.0,
                    label: "tr >= 2".into(),
                },
                ScalarConstraint {
                    operator_terms: vec![(0, HermitianOperator::identity(2))],
                    scalar_terms: vec![],
                    relation: Relation::Le,
                    rhs: 1.0,
                    label: "tr <= 1".into(),
                },
            ],
            psd_constraints: vec![PsdConstraint {
                terms: vec![(0, 1.0)],
                constant: HermitianOperator::zeros(2),
                label: "Q >= 0".into(),
            }],
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::PrimalInfeasible);
        let cert = sol.certificate.unwrap();
        assert!(cert.ray_margin > 0.0);
        assert!(cert.ray_residual <= 1e-6 * cert.ray_margin);
    }

    /// Unbounded objective: dual infeasibility certificate.
    #[test]
    fn detects_unboundedness() {
        // min tr(σ₃ X) with X only bounded above: X <= I. Pushing the
        // σ₃-component down is unbounded.
        let problem = SdpProblem {
            blocks: vec![hermitian_block("X", 2)],
            objective: SdpObjective {
                operator_coeffs: vec![(0, pauli3())],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints: vec![],
            psd_constraints: vec![PsdConstraint {
                terms: vec![(0, -1.0)],
                constant: HermitianOperator::identity(2),
                label: "X <= I".into(),
            }],
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::DualInfeasibleOrUnbounded);
    }

    /// Problems with 1x1 blocks are linear programs; compare with a vertex
    /// enumeration oracle.
    #[test]
    fn lp_matches_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..8 {
            // min c.x over [-1,1]^2 with one extra halfspace a.x <= b.
            let c = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0)];
            let a = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0)];
            let b = rng.gen_range(0.2..1.0f64);

            let blocks = vec![
                SdpBlock {
                    id: "x0".into(),
                    kind: BlockKind::Hermitian(1),
                },
                SdpBlock {
                    id: "x1".into(),
                    kind: BlockKind::Hermitian(1),
                },
            ];
            let unit = HermitianOperator::identity(1);
            let mut scalar_constraints = vec![ScalarConstraint {
                operator_terms: vec![(0, unit.scale(a[0])), (1, unit.scale(a[1]))],
                scalar_terms: vec![],
                relation: Relation::Le,
                rhs: b,
                label: "halfspace".into(),
            }];
            for i in 0..2 {
                scalar_constraints.push(ScalarConstraint {
                    operator_terms: vec![(i, unit.clone())],
                    scalar_terms: vec![],
                    relation: Relation::Le,
                    rhs: 1.0,
                    label: format!("x{i} <= 1"),
                });
                scalar_constraints.push(ScalarConstraint {
                    operator_terms: vec![(i, unit.clone())],
                    scalar_terms: vec![],
                    relation: Relation::Ge,
                    rhs: -1.0,
                    label: format!("x{i} >= -1"),
                });
            }
            let problem = SdpProblem {
                blocks,
                objective: SdpObjective {
                    operator_coeffs: vec![(0, unit.scale(c[0])), (1, unit.scale(c[1]))],
                    scalar_coeffs: vec![],
                    constant: 0.0,
                },
                scalar_constraints,
                psd_constraints: vec![],
            };
            // The oracle comparison is absolute at 1e-8; solve beyond the
            // default relative tolerance.
            let settings = SdpSettings {
                gap_tol: 1e-10,
                feas_tol: 1e-10,
                ..SdpSettings::default()
            };
            let sol = solve_sdp(&problem, &settings).unwrap();
            assert_eq!(sol.status, SdpStatus::Optimal, "trial {trial}");

            // Vertex oracle: intersect all pairs of the 5 constraint lines.
            let lines: Vec<([f64; 2], f64)> = vec![
                ([a[0], a[1]], b),
                ([1.0, 0.0], 1.0),
                ([-1.0, 0.0], 1.0),
                ([0.0, 1.0], 1.0),
                ([0.0, -1.0], 1.0),
            ];
            let feasible = |x: [f64; 2]| {
                lines
                    .iter()
                    .all(|(nrm, r)| nrm[0] * x[0] + nrm[1] * x[1] <= r + 1e-9)
            };
            let mut best = f64::INFINITY;
            for i in 0..lines.len() {
                for j in (i + 1)..lines.len() {
                    let (n1, r1) = &lines[i];
                    let (n2, r2) = &lines[j];
                    let det = n1[0] * n2[1] - n1[1] * n2[0];
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let x = [
                        (r1 * n2[1] - r2 * n1[1]) / det,
                        (n1[0] * r2 - n2[0] * r1) / det,
                    ];
                    if feasible(x) {
                        best = best.min(c[0] * x[0] + c[1] * x[1]);
                    }
                }
            }
            assert_abs_diff_eq!(sol.objective, best, epsilon = 1e-8);
        }
    }

    /// Roundtrip of compile + reconstruct: block values reproduce the solver
    /// objective through the user-level formula.
    #[test]
    fn reconstructed_blocks_reproduce_objective() {
        let c = herm(&[z(0.5, 0.0), z(0.1, 0.2), z(0.1, -0.2), z(-0.3, 0.0)], 2);
        let problem = SdpProblem {
            blocks: vec![hermitian_block("Q", 2)],
            objective: SdpObjective {
                operator_coeffs: vec![(0, c.clone())],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints: vec![ScalarConstraint {
                operator_terms: vec![(0, HermitianOperator::identity(2))],
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: 1.0,
                label: "tr Q = 1".into(),
            }],
            psd_constraints: vec![PsdConstraint {
                terms: vec![(0, 1.0)],
                constant: HermitianOperator::zeros(2),
                label: "Q >= 0".into(),
            }],
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        let q = sol.block_values[0].as_hermitian().unwrap();
        assert_abs_diff_eq!(c.hs_inner(q), sol.objective, epsilon = 1e-9);
    }

    /// An affine PSD constraint tying several blocks: the lifted slack form
    /// solves and the witnessed expression is PSD.
    #[test]
    fn affine_psd_combination() {
        // Q + 0.5 (R - S) >= 0 with Q, R, S density-like blocks; minimize
        // tr(σ₃ Q).
        let eye = HermitianOperator::identity(2);
        let blocks = vec![
            hermitian_block("Q", 2),
            hermitian_block("R", 2),
            hermitian_block("S", 2),
        ];
        let mut scalar_constraints = Vec::new();
        for i in 0..3 {
            scalar_constraints.push(ScalarConstraint {
                operator_terms: vec![(i, eye.clone())],
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: 1.0,
                label: format!("tr block {i} = 1"),
            });
        }
        let mut psd_constraints: Vec<PsdConstraint> = (0..3)
            .map(|i| PsdConstraint {
                terms: vec![(i, 1.0)],
                constant: HermitianOperator::zeros(2),
                label: format!("block {i} >= 0"),
            })
            .collect();
        psd_constraints.push(PsdConstraint {
            terms: vec![(0, 1.0), (1, 0.5), (2, -0.5)],
            constant: HermitianOperator::zeros(2),
            label: "Q + (R-S)/2 >= 0".into(),
        });
        let problem = SdpProblem {
            blocks,
            objective: SdpObjective {
                operator_coeffs: vec![(0, pauli3())],
                scalar_coeffs: vec![],
                constant: 0.0,
            },
            scalar_constraints,
            psd_constraints,
        };
        let sol = solve_sdp(&problem, &SdpSettings::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        let q = sol.block_values[0].as_hermitian().unwrap();
        let r = sol.block_values[1].as_hermitian().unwrap();
        let s = sol.block_values[2].as_hermitian().unwrap();
        let expr = &(q + &r.scale(0.5)) - &s.scale(0.5);
        assert!(expr.min_eigenvalue().unwrap() >= -1e-8);
        assert!(q.min_eigenvalue().unwrap() >= -1e-8);
        // Weak duality.
        assert!(sol.dual_objective <= sol.objective + 1e-8 * (1.0 + sol.objective.abs()));
    }
}
