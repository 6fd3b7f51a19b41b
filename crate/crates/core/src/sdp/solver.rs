//! Infeasible-start primal-dual path-following interior-point method with
//! Nesterov-Todd scaling and a Mehrotra-style predictor-corrector, on the
//! conic form produced by [`compile_standard_form`].
//!
//! The iteration is deterministic: fixed schedule, dense factorizations with
//! partial pivoting, no randomization.
//!
//! [`compile_standard_form`]: super::compile::compile_standard_form

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};

use super::compile::{compile_standard_form, ConicProgram};
use super::problem::{
    RayCertificate, SdpProblem, SdpResiduals, SdpSettings, SdpSolution, SdpStatus,
};
use super::stats;

/// Step length below which the iteration is declared stalled.
const MIN_STEP: f64 = 1e-10;
/// Fraction-to-boundary damping.
const STEP_FRACTION: f64 = 0.99;
/// Norm-ratio divergence threshold flagging an infeasibility certificate.
const DIVERGENCE_RATIO: f64 = 1e8;
/// Minimum normalized margin for an improving-ray certificate.
const RAY_MARGIN_FLOOR: f64 = 1e-8;
/// Residual-to-margin ratio accepted for an improving-ray certificate.
const RAY_RESIDUAL_RATIO: f64 = 1e-6;

/// Solves a user-level SDP: compile to conic form, run the interior-point
/// iteration, reconstruct block values.
pub fn solve_sdp(problem: &SdpProblem, settings: &SdpSettings) -> Result<SdpSolution> {
    let conic = compile_standard_form(problem)?;
    solve_conic(&conic, settings)
}

/// Solves an already-compiled conic program.
pub fn solve_conic(conic: &ConicProgram, settings: &SdpSettings) -> Result<SdpSolution> {
    let mut ipm = Ipm::new(conic, settings);
    let outcome = ipm.run();
    stats::record_solve();

    let (y, lambda) = (ipm.y.clone(), ipm.lambda.clone());
    let pobj = conic.c.dot(&y) + conic.obj_constant;
    let dobj = conic.eq_rhs.dot(&lambda) - ipm.dual_constant_pairing() + conic.obj_constant;
    let residuals = ipm.current_residuals();

    let status = match outcome {
        Outcome::Optimal => SdpStatus::Optimal,
        Outcome::PrimalInfeasible(_) => SdpStatus::PrimalInfeasible,
        Outcome::DualInfeasible(_) => SdpStatus::DualInfeasibleOrUnbounded,
        Outcome::Stalled(_) => {
            stats::record_trouble();
            SdpStatus::NumericalTrouble
        }
        Outcome::IterationLimit => SdpStatus::IterationLimit,
    };

    if status == SdpStatus::Optimal {
        let ok = dobj <= pobj + settings.gap_tol * (1.0 + pobj.abs() + dobj.abs());
        if !ok {
            stats::record_violation();
        }
    }

    let certificate = match outcome {
        Outcome::PrimalInfeasible(cert) | Outcome::DualInfeasible(cert) => Some(cert),
        _ => None,
    };

    Ok(SdpSolution {
        status,
        block_values: conic.block_values_from(&y),
        objective: pobj,
        dual_objective: dobj,
        residuals,
        iterations: ipm.iterations,
        certificate,
    })
}

enum Outcome {
    Optimal,
    PrimalInfeasible(RayCertificate),
    DualInfeasible(RayCertificate),
    Stalled(String),
    IterationLimit,
}

/// Per-cone NT scaling data for one iteration.
struct Scaling {
    /// Scaled point Λ (diagonal entries); Λ = R⁻¹SR⁻ᵀ = RᵀZR.
    lambda: DVector<f64>,
    r: DMatrix<f64>,
    r_inv: DMatrix<f64>,
    /// Scaled constraint coefficients B̃_i = R⁻¹ B_i R⁻ᵀ, aligned with the
    /// cone's sparse coefficient list.
    b_tilde: Vec<DMatrix<f64>>,
    /// Scaled primal residual R̃ = R⁻¹ (M(y) − S) R⁻ᵀ.
    res_tilde: DMatrix<f64>,
}

struct Ipm<'a> {
    conic: &'a ConicProgram,
    settings: &'a SdpSettings,
    y: DVector<f64>,
    lambda: DVector<f64>,
    s: Vec<DMatrix<f64>>,
    z: Vec<DMatrix<f64>>,
    iterations: usize,
    total_cone_dim: f64,
    initial_dual_norm: f64,
    c_norm: f64,
    d_norm: f64,
    k_norms: Vec<f64>,
    best: Option<BestIterate>,
    no_improve: usize,
}

/// Snapshot of the iterate with the smallest residual merit seen so far.
struct BestIterate {
    y: DVector<f64>,
    lambda: DVector<f64>,
    s: Vec<DMatrix<f64>>,
    z: Vec<DMatrix<f64>>,
    merit: f64,
}

impl<'a> Ipm<'a> {
    fn new(conic: &'a ConicProgram, settings: &'a SdpSettings) -> Self {
        let s: Vec<DMatrix<f64>> = conic
            .cones
            .iter()
            .map(|cone| {
                let tau = 1.0f64.max(cone.constant.norm());
                DMatrix::identity(cone.dim, cone.dim).scale(tau)
            })
            .collect();
        let z = s.clone();
        let total_cone_dim = conic.cones.iter().map(|c| c.dim as f64).sum::<f64>();
        let k_norms = conic.cones.iter().map(|c| c.constant.amax()).collect();
        let initial_dual_norm = dual_norm(&z, &DVector::zeros(conic.eq.nrows()));
        Self {
            conic,
            settings,
            y: DVector::zeros(conic.n),
            lambda: DVector::zeros(conic.eq.nrows()),
            s,
            z,
            iterations: 0,
            total_cone_dim,
            initial_dual_norm,
            c_norm: conic.c.amax(),
            d_norm: if conic.eq_rhs.is_empty() {
                0.0
            } else {
                conic.eq_rhs.amax()
            },
            k_norms,
            best: None,
            no_improve: 0,
        }
    }

    /// Σ_k ⟨K_k, Z_k⟩.
    fn dual_constant_pairing(&self) -> f64 {
        self.conic
            .cones
            .iter()
            .zip(&self.z)
            .map(|(cone, z)| frob_inner(&cone.constant, z))
            .sum()
    }

    /// M_k(y) = K_k + Σ_i y_i B_{k,i}.
    fn cone_expression(&self, k: usize) -> DMatrix<f64> {
        let cone = &self.conic.cones[k];
        let mut m = cone.constant.clone();
        for (i, b) in &cone.coeffs {
            m += b * self.y[*i];
        }
        m
    }

    /// A*(Z)_i = Σ_k ⟨B_{k,i}, Z_k⟩.
    fn adjoint_applied(&self) -> DVector<f64> {
        let mut out = DVector::zeros(self.conic.n);
        for (cone, z) in self.conic.cones.iter().zip(&self.z) {
            for (i, b) in &cone.coeffs {
                out[*i] += frob_inner(b, z);
            }
        }
        out
    }

    fn current_residuals(&self) -> SdpResiduals {
        let rp_eq = (&self.conic.eq_rhs - &self.conic.eq * &self.y).amax_or_zero()
            / (1.0 + self.d_norm);
        let mut rp_cone = 0.0f64;
        for k in 0..self.conic.cones.len() {
            let res = (self.cone_expression(k) - &self.s[k]).amax() / (1.0 + self.k_norms[k]);
            rp_cone = rp_cone.max(res);
        }
        let rd = (&self.conic.c - self.adjoint_applied() - self.conic.eq.transpose() * &self.lambda)
            .amax()
            / (1.0 + self.c_norm);
        let pobj = self.conic.c.dot(&self.y);
        let dobj = self.conic.eq_rhs.dot(&self.lambda) - self.dual_constant_pairing();
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        SdpResiduals {
            primal: rp_eq.max(rp_cone),
            dual: rd,
            rel_gap,
        }
    }

    fn run(&mut self) -> Outcome {
        let trace = std::env::var_os("BBSDP_IPM_TRACE").is_some();
        for iter in 0..self.settings.max_iters {
            self.iterations = iter;

            let res = self.current_residuals();
            if trace {
                let mu = self
                    .conic
                    .cones
                    .iter()
                    .zip(&self.s)
                    .zip(&self.z)
                    .map(|((_, s), z)| frob_inner(s, z))
                    .sum::<f64>()
                    / self.total_cone_dim;
                eprintln!(
                    "ipm it {iter:3} rp {:9.2e} rd {:9.2e} gap {:9.2e} mu {:9.2e} pobj {:+.6e}",
                    res.primal,
                    res.dual,
                    res.rel_gap,
                    mu,
                    self.conic.c.dot(&self.y)
                );
            }
            if res.primal <= self.settings.feas_tol
                && res.dual <= self.settings.feas_tol
                && res.rel_gap <= self.settings.gap_tol
                && self.cone_expressions_feasible()
            {
                return Outcome::Optimal;
            }

            // Track the best iterate; cut the run short once it stops
            // improving (the double-precision residual floor).
            let merit = res.primal.max(res.dual).max(res.rel_gap);
            let improved = self.best.as_ref().map_or(true, |b| merit < 0.97 * b.merit);
            if improved {
                self.best = Some(BestIterate {
                    y: self.y.clone(),
                    lambda: self.lambda.clone(),
                    s: self.s.clone(),
                    z: self.z.clone(),
                    merit,
                });
                self.no_improve = 0;
            } else {
                self.no_improve += 1;
                if self.no_improve >= 12 {
                    self.restore_best();
                    return self.stalled("no residual progress at the numerical floor");
                }
            }

            if let Some(cert) = self.primal_infeasibility_certificate() {
                return Outcome::PrimalInfeasible(cert);
            }
            if let Some(cert) = self.dual_infeasibility_certificate() {
                return Outcome::DualInfeasible(cert);
            }
            let ratio = dual_norm(&self.z, &self.lambda) / self.initial_dual_norm.max(1e-30);
            if ratio > DIVERGENCE_RATIO {
                return Outcome::Stalled(format!(
                    "dual iterate norm diverged (ratio {ratio:.2e}) without a clean certificate"
                ));
            }

            match self.step() {
                Ok(true) => {}
                Ok(false) => {
                    self.restore_best();
                    return self.stalled("step length below 1e-10");
                }
                Err(e) => {
                    self.restore_best();
                    return self.stalled(&e.to_string());
                }
            }
        }
        self.iterations = self.settings.max_iters;
        self.restore_best();
        Outcome::IterationLimit
    }

    fn stalled(&self, why: &str) -> Outcome {
        if std::env::var_os("BBSDP_IPM_TRACE").is_some() {
            eprintln!("ipm stall at iteration {}: {why}", self.iterations);
        }
        Outcome::Stalled(why.to_string())
    }

    /// Rewinds the state to the best iterate so callers see its residuals.
    fn restore_best(&mut self) {
        if let Some(best) = &self.best {
            self.y = best.y.clone();
            self.lambda = best.lambda.clone();
            self.s = best.s.clone();
            self.z = best.z.clone();
        }
    }

    fn cone_expressions_feasible(&self) -> bool {
        (0..self.conic.cones.len()).all(|k| {
            let m = self.cone_expression(k);
            min_sym_eigenvalue(&m) >= -self.settings.feas_tol
        })
    }

    fn primal_infeasibility_certificate(&self) -> Option<RayCertificate> {
        let nu = dual_norm(&self.z, &self.lambda).max(1e-300);
        let margin = (self.conic.eq_rhs.dot(&self.lambda) - self.dual_constant_pairing()) / nu;
        if margin <= RAY_MARGIN_FLOOR {
            return None;
        }
        let res =
            (self.adjoint_applied() + self.conic.eq.transpose() * &self.lambda).amax_or_zero() / nu;
        if res <= RAY_RESIDUAL_RATIO * margin {
            Some(RayCertificate {
                ray_residual: res,
                ray_margin: margin,
            })
        } else {
            None
        }
    }

    fn dual_infeasibility_certificate(&self) -> Option<RayCertificate> {
        let ynorm = self.y.norm();
        if ynorm < 1e3 {
            return None;
        }
        let ybar = &self.y / ynorm;
        let margin = -self.conic.c.dot(&ybar);
        if margin <= RAY_MARGIN_FLOOR {
            return None;
        }
        let mut res = (&self.conic.eq * &ybar).amax_or_zero();
        for cone in &self.conic.cones {
            let mut lin = DMatrix::zeros(cone.dim, cone.dim);
            for (i, b) in &cone.coeffs {
                lin += b * ybar[*i];
            }
            res = res.max(-min_sym_eigenvalue(&lin).min(0.0));
        }
        if res <= RAY_RESIDUAL_RATIO * margin {
            Some(RayCertificate {
                ray_residual: res,
                ray_margin: margin,
            })
        } else {
            None
        }
    }

    /// One predictor-corrector iteration. Returns Ok(false) on a stalled step.
    fn step(&mut self) -> Result<bool> {
        let ncones = self.conic.cones.len();
        let n = self.conic.n;
        let p = self.conic.eq.nrows();

        // NT scaling per cone.
        let mut scalings = Vec::with_capacity(ncones);
        for k in 0..ncones {
            scalings.push(self.nt_scaling(k)?);
        }

        let mu = scalings
            .iter()
            .map(|sc| sc.lambda.iter().map(|l| l * l).sum::<f64>())
            .sum::<f64>()
            / self.total_cone_dim;

        // Schur-like matrix H and the augmented KKT factorization, shared by
        // the predictor and corrector solves.
        let mut h = DMatrix::<f64>::zeros(n, n);
        for (k, sc) in scalings.iter().enumerate() {
            let cone = &self.conic.cones[k];
            for (a, (i, _)) in cone.coeffs.iter().enumerate() {
                for (b, (j, _)) in cone.coeffs.iter().enumerate().skip(a) {
                    let v = frob_inner(&sc.b_tilde[a], &sc.b_tilde[b]);
                    h[(*i, *j)] += v;
                    if i != j {
                        h[(*j, *i)] += v;
                    }
                }
            }
        }
        let mut aug0 = DMatrix::zeros(n + p, n + p);
        for i in 0..n {
            for j in 0..n {
                aug0[(i, j)] = -h[(i, j)];
            }
        }
        for r in 0..p {
            for j in 0..n {
                aug0[(n + r, j)] = self.conic.eq[(r, j)];
                aug0[(j, n + r)] = self.conic.eq[(r, j)];
            }
        }
        let reg = 1e-13 * (1.0 + h.amax());
        let mut aug = aug0.clone();
        for i in 0..n {
            aug[(i, i)] -= reg;
        }
        for r in 0..p {
            aug[(n + r, n + r)] += reg;
        }
        let lu = aug.lu();

        let r_p = &self.conic.eq_rhs - &self.conic.eq * &self.y;
        let r_d = &self.conic.c - self.adjoint_applied() - self.conic.eq.transpose() * &self.lambda;

        // Predictor (affine direction): D = -Λ.
        let d_aff: Vec<DMatrix<f64>> = scalings
            .iter()
            .map(|sc| -DMatrix::from_diagonal(&sc.lambda))
            .collect();
        let aff = self.solve_direction(&lu, &aug0, &scalings, &d_aff, &r_p, &r_d)?;

        let (alpha_p_aff, alpha_d_aff) = step_lengths(&scalings, &aff, 1.0);
        let mut mu_aff = 0.0;
        for (k, sc) in scalings.iter().enumerate() {
            let s_new = DMatrix::from_diagonal(&sc.lambda) + &aff.ds_tilde[k] * alpha_p_aff;
            let z_new = DMatrix::from_diagonal(&sc.lambda) + &aff.dz_tilde[k] * alpha_d_aff;
            mu_aff += frob_inner(&s_new, &z_new);
        }
        mu_aff /= self.total_cone_dim;
        let mut sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3).max(1e-8);
        // Keep μ from racing below the feasibility residuals: the KKT system
        // conditioning degrades like 1/μ, which would freeze the residuals
        // at a floor above tolerance.
        let resid_scale = {
            let mut r = r_p.amax_or_zero();
            for k in 0..ncones {
                r = r.max((self.cone_expression(k) - &self.s[k]).amax());
            }
            r.max(r_d.amax()) * 0.1
        };
        if mu * sigma < resid_scale {
            sigma = (resid_scale / mu).min(0.9);
        }

        // Corrector: D = L_Λ⁻¹(σμI − Λ² − sym(ΔS̃ ΔZ̃)).
        let d_corr: Vec<DMatrix<f64>> = scalings
            .iter()
            .enumerate()
            .map(|(k, sc)| {
                let dim = sc.lambda.len();
                let prod = &aff.ds_tilde[k] * &aff.dz_tilde[k];
                let mut rhs = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        let sym = 0.5 * (prod[(i, j)] + prod[(j, i)]);
                        let mut v = -sym;
                        if i == j {
                            v += sigma * mu - sc.lambda[i] * sc.lambda[i];
                        }
                        rhs[(i, j)] = v;
                    }
                }
                lyapunov_solve_diag(&sc.lambda, &rhs)
            })
            .collect();
        let dir = self.solve_direction(&lu, &aug0, &scalings, &d_corr, &r_p, &r_d)?;

        let (alpha_p, alpha_d) = step_lengths(&scalings, &dir, STEP_FRACTION);
        if alpha_p.max(alpha_d) < MIN_STEP {
            return Ok(false);
        }

        self.y += &dir.dy * alpha_p;
        self.lambda += &dir.dlambda * alpha_d;
        for k in 0..ncones {
            let ds = self.unscale_primal(&scalings[k], &dir.ds_tilde[k]);
            let dz = self.unscale_dual(&scalings[k], &dir.dz_tilde[k]);
            self.s[k] += ds * alpha_p;
            self.z[k] += dz * alpha_d;
            symmetrize(&mut self.s[k]);
            symmetrize(&mut self.z[k]);
        }
        Ok(true)
    }

    /// NT scaling for cone k: Cholesky factors of S and Z, SVD of LzᵀLs.
    fn nt_scaling(&self, k: usize) -> Result<Scaling> {
        let cone = &self.conic.cones[k];
        let ls = nalgebra::Cholesky::new(self.s[k].clone())
            .ok_or_else(|| CoreError::Numerical(format!("cone '{}' slack lost definiteness", cone.label)))?
            .l();
        let lz = nalgebra::Cholesky::new(self.z[k].clone())
            .ok_or_else(|| CoreError::Numerical(format!("cone '{}' dual lost definiteness", cone.label)))?
            .l();
        let g = lz.transpose() * &ls;
        let svd = g.svd(true, true);
        let u = svd.u.as_ref().expect("svd with u");
        let _ = u;
        let vt = svd.v_t.as_ref().expect("svd with v_t");
        let lambda = svd.singular_values.clone();
        if lambda.iter().any(|&s| s <= 0.0 || !s.is_finite()) {
            return Err(CoreError::Numerical(format!(
                "cone '{}' scaling point degenerated",
                cone.label
            )));
        }
        // R = Ls V Λ^{-1/2};  R⁻¹ = Λ^{1/2} Vᵀ Ls⁻¹.
        let v = vt.transpose();
        let mut r = &ls * v;
        for (j, l) in lambda.iter().enumerate() {
            let f = 1.0 / l.sqrt();
            r.column_mut(j).scale_mut(f);
        }
        let ls_inv = ls
            .solve_lower_triangular(&DMatrix::identity(cone.dim, cone.dim))
            .ok_or_else(|| CoreError::Numerical("singular Cholesky factor".into()))?;
        let mut r_inv = vt * ls_inv;
        for (i, l) in lambda.iter().enumerate() {
            let f = l.sqrt();
            r_inv.row_mut(i).scale_mut(f);
        }

        let b_tilde: Vec<DMatrix<f64>> = cone
            .coeffs
            .iter()
            .map(|(_, b)| {
                let mut m = &r_inv * b * r_inv.transpose();
                symmetrize(&mut m);
                m
            })
            .collect();
        let res = self.cone_expression(k) - &self.s[k];
        let mut res_tilde = &r_inv * res * r_inv.transpose();
        symmetrize(&mut res_tilde);

        Ok(Scaling {
            lambda,
            r,
            r_inv,
            b_tilde,
            res_tilde,
        })
    }

    /// Solves the Newton system for a given centrality RHS `d_mats` (scaled
    /// space), reusing the factored augmented matrix.
    fn solve_direction(
        &self,
        lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
        aug0: &DMatrix<f64>,
        scalings: &[Scaling],
        d_mats: &[DMatrix<f64>],
        r_p: &DVector<f64>,
        r_d: &DVector<f64>,
    ) -> Result<Direction> {
        let n = self.conic.n;
        let p = self.conic.eq.nrows();

        // g_i = Σ_k ⟨B̃_i, D_k − R̃_k⟩.
        let mut g = DVector::<f64>::zeros(n);
        for (k, sc) in scalings.iter().enumerate() {
            let cone = &self.conic.cones[k];
            let dm = &d_mats[k] - &sc.res_tilde;
            for (a, (i, _)) in cone.coeffs.iter().enumerate() {
                g[*i] += frob_inner(&sc.b_tilde[a], &dm);
            }
        }

        let mut rhs = DVector::zeros(n + p);
        for i in 0..n {
            rhs[i] = r_d[i] - g[i];
        }
        for r in 0..p {
            rhs[n + r] = r_p[r];
        }
        let mut sol = lu
            .solve(&rhs)
            .ok_or_else(|| CoreError::Numerical("KKT system singular beyond recovery".into()))?;
        if sol.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::Numerical("KKT solve produced non-finite values".into()));
        }
        // Iterative refinement against the unregularized system.
        for _ in 0..2 {
            let residual = &rhs - aug0 * &sol;
            if residual.amax() <= 1e-14 * (1.0 + rhs.amax()) {
                break;
            }
            match lu.solve(&residual) {
                Some(corr) if corr.iter().all(|v| v.is_finite()) => sol += corr,
                _ => break,
            }
        }

        let dy = DVector::from_iterator(n, (0..n).map(|i| sol[i]));
        let dlambda = DVector::from_iterator(p, (0..p).map(|r| sol[n + r]));

        let mut ds_tilde = Vec::with_capacity(scalings.len());
        let mut dz_tilde = Vec::with_capacity(scalings.len());
        for (k, sc) in scalings.iter().enumerate() {
            let cone = &self.conic.cones[k];
            let mut ds = sc.res_tilde.clone();
            for (a, (i, _)) in cone.coeffs.iter().enumerate() {
                ds += &sc.b_tilde[a] * dy[*i];
            }
            let dz = &d_mats[k] - &ds;
            ds_tilde.push(ds);
            dz_tilde.push(dz);
        }

        Ok(Direction {
            dy,
            dlambda,
            ds_tilde,
            dz_tilde,
        })
    }

    fn unscale_primal(&self, sc: &Scaling, ds_tilde: &DMatrix<f64>) -> DMatrix<f64> {
        let mut m = &sc.r * ds_tilde * sc.r.transpose();
        symmetrize(&mut m);
        m
    }

    fn unscale_dual(&self, sc: &Scaling, dz_tilde: &DMatrix<f64>) -> DMatrix<f64> {
        let mut m = sc.r_inv.transpose() * dz_tilde * &sc.r_inv;
        symmetrize(&mut m);
        m
    }
}

struct Direction {
    dy: DVector<f64>,
    dlambda: DVector<f64>,
    ds_tilde: Vec<DMatrix<f64>>,
    dz_tilde: Vec<DMatrix<f64>>,
}

/// Longest steps keeping Σ + αΔS̃ and Σ + αΔZ̃ positive definite, damped by
/// `fraction` and capped at 1.
fn step_lengths(scalings: &[Scaling], dir: &Direction, fraction: f64) -> (f64, f64) {
    let mut alpha_p = 1.0f64 / fraction;
    let mut alpha_d = 1.0f64 / fraction;
    for (k, sc) in scalings.iter().enumerate() {
        alpha_p = alpha_p.min(max_step_diag(&sc.lambda, &dir.ds_tilde[k]));
        alpha_d = alpha_d.min(max_step_diag(&sc.lambda, &dir.dz_tilde[k]));
    }
    ((fraction * alpha_p).min(1.0), (fraction * alpha_d).min(1.0))
}

/// Longest α with diag(λ) + αΔ ⪰ 0, via λ^{-1/2} Δ λ^{-1/2}.
fn max_step_diag(lambda: &DVector<f64>, delta: &DMatrix<f64>) -> f64 {
    let dim = lambda.len();
    let mut scaled = delta.clone();
    for i in 0..dim {
        for j in 0..dim {
            scaled[(i, j)] /= (lambda[i] * lambda[j]).sqrt();
        }
    }
    symmetrize(&mut scaled);
    let min_eig = min_sym_eigenvalue(&scaled);
    if min_eig >= 0.0 {
        f64::INFINITY
    } else {
        1.0 / (-min_eig)
    }
}

/// Solves (ΛX + XΛ)/2 = M elementwise for diagonal Λ.
fn lyapunov_solve_diag(lambda: &DVector<f64>, m: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = lambda.len();
    DMatrix::from_fn(dim, dim, |i, j| 2.0 * m[(i, j)] / (lambda[i] + lambda[j]))
}

fn frob_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn min_sym_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn dual_norm(z: &[DMatrix<f64>], lambda: &DVector<f64>) -> f64 {
    let zn: f64 = z.iter().map(|m| m.norm_squared()).sum();
    (zn + lambda.norm_squared()).sqrt()
}

trait AmaxOrZero {
    fn amax_or_zero(&self) -> f64;
}

impl AmaxOrZero for DVector<f64> {
    fn amax_or_zero(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.amax()
        }
    }
}
