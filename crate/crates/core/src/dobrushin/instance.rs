//! Compilation of energy-constrained Dobrushin instances into jointly
//! constrained semidefinite bilinear programs.
//!
//! General mode optimizes over quadruples (P, Q, R, S); qubit mode eliminates
//! S = I − R and optimizes over triples (P, Q, R). The library minimizes, so
//! the maximization is negated at build time and un-negated (and δ-scaled)
//! when reporting.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bnb::{assemble_coupling, BilinearProblem, Layout, Side, VariableBlock};
use crate::error::{CoreError, Result};
use crate::operator::{flip_operator, HermitianOperator};
use crate::sdp::{PsdConstraint, Relation, ScalarConstraint};

use super::channel::QuantumChannel;

/// Which reformulation to compile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DobrushinMode {
    /// Quadruples (P, Q, R, S); valid in any dimension.
    General,
    /// Triples (P, Q, R) with S eliminated; qubit channels only.
    Qubit,
}

/// One point of the Dobrushin-curve problem family.
#[derive(Debug, Clone)]
pub struct DobrushinInstance {
    pub channel: QuantumChannel,
    pub hamiltonian: HermitianOperator,
    pub energy: f64,
    pub delta: f64,
    pub mode: DobrushinMode,
    /// Adds tr(σ₂ Q) = 0, exploiting the rotation symmetry of channels like
    /// the dephasing family (qubit only).
    pub symmetry_constraint: bool,
    /// Adds tr(P) = 1; valid when the optimal P has rank one (qubit only).
    pub trace_one_p: bool,
}

/// A compiled instance: the bilinear program plus the sign/scale metadata
/// mapping solver values back to curve values.
#[derive(Debug, Clone)]
pub struct BuiltInstance {
    pub problem: BilinearProblem,
    /// Curve value = `scale` × (−solver objective); `scale` = δ.
    pub scale: f64,
}

impl BuiltInstance {
    /// Maps a solver-side objective value (a minimum) to the curve value.
    pub fn curve_value(&self, solver_value: f64) -> f64 {
        self.scale * (-solver_value)
    }
}

impl DobrushinInstance {
    pub fn new(
        channel: QuantumChannel,
        hamiltonian: HermitianOperator,
        energy: f64,
        delta: f64,
        mode: DobrushinMode,
    ) -> Result<Self> {
        let inst = Self {
            channel,
            hamiltonian,
            energy,
            delta,
            mode,
            symmetry_constraint: false,
            trace_one_p: false,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_symmetry_constraint(mut self, on: bool) -> Result<Self> {
        self.symmetry_constraint = on;
        self.validate()?;
        Ok(self)
    }

    pub fn with_trace_one_p(mut self, on: bool) -> Result<Self> {
        self.trace_one_p = on;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let d = self.channel.dim();
        if self.hamiltonian.dim() != d {
            return Err(CoreError::Validation(format!(
                "Hamiltonian dimension {} does not match the channel dimension {d}",
                self.hamiltonian.dim()
            )));
        }
        if !(0.0..=2.0).contains(&self.delta) {
            return Err(CoreError::ParameterRange(format!(
                "delta = {} outside [0, 2]",
                self.delta
            )));
        }
        let ground = self.hamiltonian.min_eigenvalue()?;
        if self.energy < ground - 1e-12 {
            return Err(CoreError::Infeasible(format!(
                "energy bound E = {} lies below the ground energy {ground:.6}; G_E is empty",
                self.energy
            )));
        }
        if self.mode == DobrushinMode::Qubit && d != 2 {
            return Err(CoreError::Validation(
                "qubit mode requires a channel on C^2".into(),
            ));
        }
        if (self.symmetry_constraint || self.trace_one_p) && d != 2 {
            return Err(CoreError::Validation(
                "the symmetry and trace-one-P constraints are qubit-specific".into(),
            ));
        }
        Ok(())
    }

    /// Compiles to a bilinear minimization problem.
    ///
    /// δ = 0 carries an identically zero curve value and is short-circuited
    /// by the evaluation layer rather than compiled.
    pub fn build(&self) -> Result<BuiltInstance> {
        self.validate()?;
        if self.delta == 0.0 {
            return Err(CoreError::ParameterRange(
                "delta = 0 short-circuits to the value 0 without a solve".into(),
            ));
        }
        let d = self.channel.dim();
        // Q̂ = (I ⊗ Φ*)(F); tr(Q̂ (P ⊗ R)) = tr(P Φ(R)).
        let q_hat = self
            .channel
            .apply_adjoint_second_factor(&flip_operator(d)?)?;

        match self.mode {
            DobrushinMode::General => self.build_general(&q_hat),
            DobrushinMode::Qubit => self.build_qubit(&q_hat),
        }
    }

    /// Quadruple form: maximize tr(P Φ(R − S)) over (P, Q, R, S).
    fn build_general(&self, q_hat: &HermitianOperator) -> Result<BuiltInstance> {
        let d = self.channel.dim();
        let delta = self.delta;
        let layout = Layout::new(vec![
            VariableBlock {
                id: "P".into(),
                side: Side::X,
                dim: d,
            },
            VariableBlock {
                id: "Q".into(),
                side: Side::Y,
                dim: d,
            },
            VariableBlock {
                id: "R".into(),
                side: Side::Y,
                dim: d,
            },
            VariableBlock {
                id: "S".into(),
                side: Side::Y,
                dim: d,
            },
        ])?;
        // Minimize −tr(P Φ(R)) + tr(P Φ(S)).
        let coupling = assemble_coupling(
            &layout,
            &[(0, 1, q_hat.scale(-1.0)), (0, 2, q_hat.clone())],
        )?;
        let (p_idx, q_idx, r_idx, s_idx) = (0usize, 1usize, 2usize, 3usize);

        let mut scalar = vec![
            trace_row(q_idx, d, 1.0, "tr Q = 1"),
            trace_row(r_idx, d, 1.0, "tr R = 1"),
            trace_row(s_idx, d, 1.0, "tr S = 1"),
            ScalarConstraint {
                operator_terms: vec![(q_idx, self.hamiltonian.clone())],
                scalar_terms: vec![],
                relation: Relation::Le,
                rhs: self.energy,
                label: "tr(H Q) <= E".into(),
            },
            // tr(H (Q + (δ/2)(R − S))) ≤ E.
            ScalarConstraint {
                operator_terms: vec![
                    (q_idx, self.hamiltonian.clone()),
                    (r_idx, self.hamiltonian.scale(delta / 2.0)),
                    (s_idx, self.hamiltonian.scale(-delta / 2.0)),
                ],
                scalar_terms: vec![],
                relation: Relation::Le,
                rhs: self.energy,
                label: "energy of the shifted state".into(),
            },
        ];
        self.push_optional_rows(&mut scalar, p_idx, q_idx, d);

        let psd = vec![
            psd_row(vec![(q_idx, 1.0)], d, "Q >= 0"),
            psd_row(vec![(r_idx, 1.0)], d, "R >= 0"),
            psd_row(vec![(s_idx, 1.0)], d, "S >= 0"),
            // Q + (δ/2)(R − S) ⪰ 0.
            psd_row(
                vec![(q_idx, 1.0), (r_idx, delta / 2.0), (s_idx, -delta / 2.0)],
                d,
                "shifted state psd",
            ),
            psd_row(vec![(p_idx, 1.0)], d, "P >= 0"),
            PsdConstraint {
                terms: vec![(p_idx, -1.0)],
                constant: HermitianOperator::identity(d),
                label: "P <= I".into(),
            },
        ];

        let problem = BilinearProblem::new(
            layout,
            coupling,
            HermitianOperator::zeros(d),
            HermitianOperator::zeros(3 * d),
            scalar,
            psd,
        )?;
        Ok(BuiltInstance {
            problem,
            scale: delta,
        })
    }

    /// Triple form: maximize tr(P Φ(2R − I)) =
    /// 2 tr(Q̂ (P ⊗ R)) − tr(P Φ(I)) over (P, Q, R).
    fn build_qubit(&self, q_hat: &HermitianOperator) -> Result<BuiltInstance> {
        let d = 2usize;
        let delta = self.delta;
        let layout = Layout::new(vec![
            VariableBlock {
                id: "P".into(),
                side: Side::X,
                dim: d,
            },
            VariableBlock {
                id: "Q".into(),
                side: Side::Y,
                dim: d,
            },
            VariableBlock {
                id: "R".into(),
                side: Side::Y,
                dim: d,
            },
        ])?;
        let coupling = assemble_coupling(&layout, &[(0, 1, q_hat.scale(-2.0))])?;
        let (p_idx, q_idx, r_idx) = (0usize, 1usize, 2usize);

        // tr(H (Q + (δ/2)(2R − I))) ≤ E.
        let h_trace = self.hamiltonian.trace();
        let mut scalar = vec![
            trace_row(q_idx, d, 1.0, "tr Q = 1"),
            trace_row(r_idx, d, 1.0, "tr R = 1"),
            ScalarConstraint {
                operator_terms: vec![(q_idx, self.hamiltonian.clone())],
                scalar_terms: vec![],
                relation: Relation::Le,
                rhs: self.energy,
                label: "tr(H Q) <= E".into(),
            },
            ScalarConstraint {
                operator_terms: vec![
                    (q_idx, self.hamiltonian.clone()),
                    (r_idx, self.hamiltonian.scale(delta)),
                ],
                scalar_terms: vec![],
                relation: Relation::Le,
                rhs: self.energy + (delta / 2.0) * h_trace,
                label: "energy of the shifted state".into(),
            },
        ];
        self.push_optional_rows(&mut scalar, p_idx, q_idx, d);

        let psd = vec![
            psd_row(vec![(q_idx, 1.0)], d, "Q >= 0"),
            psd_row(vec![(r_idx, 1.0)], d, "R >= 0"),
            // Q + (δ/2)(2R − I) ⪰ 0.
            PsdConstraint {
                terms: vec![(q_idx, 1.0), (r_idx, delta)],
                constant: HermitianOperator::identity(d).scale(-delta / 2.0),
                label: "shifted state psd".into(),
            },
            psd_row(vec![(p_idx, 1.0)], d, "P >= 0"),
            PsdConstraint {
                terms: vec![(p_idx, -1.0)],
                constant: HermitianOperator::identity(d),
                label: "P <= I".into(),
            },
        ];

        // The linear-in-P term +tr(P Φ(I)) of the negated objective.
        let phi_of_identity = self.channel.apply(&HermitianOperator::identity(d));
        let problem = BilinearProblem::new(
            layout,
            coupling,
            phi_of_identity,
            HermitianOperator::zeros(2 * d),
            scalar,
            psd,
        )?;
        Ok(BuiltInstance {
            problem,
            scale: delta,
        })
    }

    fn push_optional_rows(
        &self,
        scalar: &mut Vec<ScalarConstraint>,
        p_idx: usize,
        q_idx: usize,
        d: usize,
    ) {
        if self.symmetry_constraint {
            let z = Complex64::new;
            let sigma2 = HermitianOperator::try_new(DMatrix::from_row_slice(
                2,
                2,
                &[z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)],
            ))
            .expect("σ₂ is Hermitian");
            scalar.push(ScalarConstraint {
                operator_terms: vec![(q_idx, sigma2)],
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: 0.0,
                label: "tr(σ₂ Q) = 0".into(),
            });
        }
        if self.trace_one_p {
            scalar.push(trace_row(p_idx, d, 1.0, "tr P = 1"));
        }
    }
}

fn trace_row(idx: usize, d: usize, rhs: f64, label: &str) -> ScalarConstraint {
    ScalarConstraint {
        operator_terms: vec![(idx, HermitianOperator::identity(d))],
        scalar_terms: vec![],
        relation: Relation::Eq,
        rhs,
        label: label.into(),
    }
}

fn psd_row(terms: Vec<(usize, f64)>, d: usize, label: &str) -> PsdConstraint {
    PsdConstraint {
        terms,
        constant: HermitianOperator::zeros(d),
        label: label.into(),
    }
}
