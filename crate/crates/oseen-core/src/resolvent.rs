//! Resolvent-side instruments for the mode operators: smallest singular
//! values of shifted operators, resolvent-norm sweeps along the imaginary
//! axis, the pseudospectral growth function `Ψ(α)`, complex-plane
//! pseudospectrum grids, truncated spectra, and log-log scaling fits.
//!
//! Every quantity here reduces to `σ_min(A − z)` for an assembled,
//! orthonormalized mode matrix `A`: the resolvent norm at `z` is its
//! reciprocal, `Ψ` is the reciprocal of the sweep maximum, and the
//! pseudospectrum is its level map. Truncation honesty is built in — each
//! sweep point is recomputed on a wider, finer companion grid and flagged
//! stable only when the two agree to 1%, so a reported resonance can be told
//! apart from a discretization artifact.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{make_log_grid, LogGrid};
use crate::linalg;
use crate::operators::{assemble_half_line_raw, assemble_log_line_raw, BasisTag, OperatorMatrix, Variant};
use crate::parallel;

/// Largest interior dimension sent to the dense SVD / dense QR paths.
///
/// Beyond this, σ_min falls back to LU inverse iteration (same answer,
/// different cost profile) and general eigendecompositions are refused —
/// sparse and Krylov methods are out of scope for this crate.
pub const DENSE_SIGMA_MIN_CAP: usize = 1500;

/// Relative σ_min agreement between the base grid and its refinement for a
/// point to be marked truncation-stable.
pub const TRUNCATION_AGREEMENT: f64 = 0.01;

/// σ_min of an interior matrix, choosing dense SVD or inverse iteration by
/// size.
fn sigma_min_of_matrix(a: &Array2<Complex64>) -> Result<f64> {
    if a.nrows() <= DENSE_SIGMA_MIN_CAP {
        linalg::smallest_singular_value(a)
    } else {
        linalg::smallest_singular_value_inverse_iteration(a)
    }
}

/// Smallest singular value of `A − z` for an orthonormalized operator.
///
/// The two Dirichlet identity rows are dropped first (the full matrix is
/// exactly `diag(1, A_int, 1)`, so keeping them would report the spurious
/// value `|1 − z|` whenever `z` is near 1). Relative accuracy is ~1e−8 or
/// better: dense SVD up to [`DENSE_SIGMA_MIN_CAP`], LU inverse iteration
/// beyond.
///
/// Passing a raw-grid matrix is a contract violation: its Euclidean σ_min is
/// not the `L²` operator quantity.
pub fn smallest_singular_value(op: &OperatorMatrix, z: Complex64) -> Result<f64> {
    if op.basis != BasisTag::Orthonormalized {
        return Err(Error::precondition(
            "smallest_singular_value requires an orthonormalized operator \
             (raw-grid σ_min is not the L² quantity)",
        ));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("shift z must be finite"));
    }
    let mut a = op.interior();
    let m = a.nrows();
    if m == 0 {
        return Err(Error::precondition("operator has no interior"));
    }
    for i in 0..m {
        a[[i, i]] -= z;
    }
    sigma_min_of_matrix(&a)
}

/// σ_min of the half-line family member `ℋ_{α,k,λ}` — the quantity behind
/// every sweep record. `λ` enters the operator as `−iλ·Id`, so it is folded
/// into the shift of a single `λ = 0` assembly.
fn sigma_min_half_line(op_at_lambda_zero: &OperatorMatrix, lambda: f64) -> Result<f64> {
    smallest_singular_value(op_at_lambda_zero, Complex64::new(0.0, lambda))
}

/// σ_min of the same family member computed through the logarithmic route:
/// assemble the log-line operator `𝓛̃_k(λ)` on `grid` and take the smallest
/// singular value of `W⁻¹ 𝓛̃ W⁻¹`, `W = diag(e^{t_i})`, which is the
/// half-line matrix expressed in the other variable. Agreement of the two
/// routes within 1e−3 relative is a toolkit-level invariant (the residual
/// difference is the two stencils' truncation error).
pub fn sigma_min_log_route(
    k: u32,
    beta: f64,
    lambda: f64,
    grid: &LogGrid,
    include_nonlocal: bool,
) -> Result<f64> {
    let op = assemble_log_line_raw(k, beta, lambda, grid, Variant::FullTilde, include_nonlocal)?;
    let mut a = op.interior();
    let m = a.nrows();
    for i in 0..m {
        let wi = (-grid.nodes[i + 1]).exp();
        for j in 0..m {
            let wj = (-grid.nodes[j + 1]).exp();
            a[[i, j]] *= wi * wj;
        }
    }
    sigma_min_of_matrix(&a)
}

/// Where along the imaginary axis a sweep evaluates the resolvent.
///
/// `NuRange` is in the natural units `ν = λ/β_k` (the default covers
/// `[−0.5, 1.5]`, one half-width beyond the range of `σ` on each side);
/// `Explicit` is a raw `λ` list for callers that know what they want.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LambdaSpec {
    /// Raw λ values.
    Explicit(Vec<f64>),
    /// `count` equispaced values of `ν = λ/β_k` in `[lo, hi]`.
    NuRange { lo: f64, hi: f64, count: usize },
}

impl Default for LambdaSpec {
    fn default() -> Self {
        LambdaSpec::NuRange {
            lo: -0.5,
            hi: 1.5,
            count: 41,
        }
    }
}

/// One record of a λ sweep. `resolvent_norm` is stored as exactly
/// `1/sigma_min`, so the per-record product identity holds by construction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepPoint {
    /// Spectral parameter λ (the operator is evaluated at `z = iλ`).
    pub lambda: f64,
    /// `λ/β_k`; `NaN` when `β_k = 0` (no natural scale).
    pub nu: f64,
    /// σ_min on the requested grid.
    pub sigma_min: f64,
    /// σ_min on the wider, finer companion grid.
    pub sigma_min_refined: f64,
    /// `1/sigma_min`.
    pub resolvent_norm: f64,
    /// Base and refined σ_min agree to [`TRUNCATION_AGREEMENT`].
    pub stable: bool,
}

/// A λ sweep of one mode operator, with its truncation companion.
#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub alpha: f64,
    pub k: u32,
    pub beta_k: f64,
    pub include_nonlocal: bool,
    /// Requested grid.
    pub grid_n: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Companion grid used for the stability bits.
    pub refined_n: usize,
    pub refined_t_min: f64,
    pub refined_t_max: f64,
    pub points: Vec<SweepPoint>,
    /// `1 / max resolvent_norm` over the sweep (equivalently the smallest
    /// σ_min encountered).
    pub psi: f64,
    /// λ attaining the maximum.
    pub argmax_lambda: f64,
    /// `argmax_lambda / β_k`; `NaN` when `β_k = 0`.
    pub argmax_nu: f64,
    /// Stability bit of the maximizing record.
    pub argmax_stable: bool,
}

/// Companion grid for truncation checks: two units wider on the left, one on
/// the right, 1.5× the points.
fn refined_companion(grid: &LogGrid) -> Result<LogGrid> {
    make_log_grid(grid.t_min - 2.0, grid.t_max + 1.0, 3 * grid.n / 2)
}

fn materialize_lambdas(spec: &LambdaSpec, beta: f64) -> Result<Vec<f64>> {
    match spec {
        LambdaSpec::Explicit(v) => {
            if v.is_empty() {
                return Err(Error::config("explicit λ list must be non-empty"));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::domain("λ values must be finite"));
            }
            Ok(v.clone())
        }
        LambdaSpec::NuRange { lo, hi, count } => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config("ν-range must be finite with lo < hi"));
            }
            if *count < 2 {
                return Err(Error::config("ν-range sweep needs at least 2 points"));
            }
            if beta <= 0.0 {
                return Err(Error::domain(
                    "ν-range sweep requires β_k > 0 (λ = β_k·ν has no scale at α = 0)",
                ));
            }
            let step = (hi - lo) / (*count as f64 - 1.0);
            Ok((0..*count).map(|i| beta * (lo + step * i as f64)).collect())
        }
    }
}

/// Sweep the resolvent norm of `ℋ_{α,k,λ}` along the imaginary axis.
///
/// The operator is assembled once per grid at `λ = 0` and each record is a
/// shifted σ_min; records are computed in parallel and reduced in input
/// order, so the result is deterministic. Every record carries the companion
/// σ_min from the refined grid and the stability bit derived from it.
pub fn sweep_lambda(
    alpha: f64,
    k: u32,
    lambdas: &LambdaSpec,
    grid: &LogGrid,
    include_nonlocal: bool,
) -> Result<SweepResult> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain("α must be finite and ≥ 0"));
    }
    let beta = alpha * k as f64 / (8.0 * PI);
    let lams = materialize_lambdas(lambdas, beta)?;
    let refined = refined_companion(grid)?;
    let base_op = assemble_half_line_raw(k, beta, 0.0, &grid.radial(), include_nonlocal)?;
    let ref_op = assemble_half_line_raw(k, beta, 0.0, &refined.radial(), include_nonlocal)?;

    let points: Vec<SweepPoint> = parallel::par_map(&lams, |&lam| -> Result<SweepPoint> {
        let s = sigma_min_half_line(&base_op, lam)?;
        let sr = sigma_min_half_line(&ref_op, lam)?;
        Ok(SweepPoint {
            lambda: lam,
            nu: if beta > 0.0 { lam / beta } else { f64::NAN },
            sigma_min: s,
            sigma_min_refined: sr,
            resolvent_norm: 1.0 / s,
            stable: (s - sr).abs() <= TRUNCATION_AGREEMENT * s,
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let best = points
        .iter()
        .max_by(|a, b| a.resolvent_norm.total_cmp(&b.resolvent_norm))
        .expect("non-empty λ list");
    Ok(SweepResult {
        alpha,
        k,
        beta_k: beta,
        include_nonlocal,
        grid_n: grid.n,
        t_min: grid.t_min,
        t_max: grid.t_max,
        refined_n: refined.n,
        refined_t_min: refined.t_min,
        refined_t_max: refined.t_max,
        psi: best.sigma_min,
        argmax_lambda: best.lambda,
        argmax_nu: best.nu,
        argmax_stable: best.stable,
        points,
    })
}

/// One point of the growth function `Ψ(α) = 1/sup_λ ‖resolvent‖`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsiPoint {
    pub alpha: f64,
    pub beta_k: f64,
    /// `1 / max resolvent norm` (the refined maximizer's σ_min).
    pub psi: f64,
    /// `1/psi`.
    pub resolvent_norm_max: f64,
    pub argmax_lambda: f64,
    pub argmax_nu: f64,
    /// Base/refined σ_min agreement at the maximizer.
    pub stable: bool,
    /// Number of σ_min evaluations spent on this point.
    pub sigma_evaluations: usize,
}

/// Golden-section minimization of `ν ↦ σ_min(iβν)` on a bracket from a
/// coarse scan. Returns `(ν*, σ*, evaluations)`.
fn golden_refine(
    op: &OperatorMatrix,
    beta: f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64, usize)> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 1.0 - INVPHI;
    // Stated λ tolerance: 1e−3 relative (λ = βν, so ν carries the ratio).
    let tol = 1e-3 * lo.abs().max(hi.abs()).max(1e-6);
    let mut evals = 0usize;
    let mut c = lo + INVPHI2 * (hi - lo);
    let mut d = lo + INVPHI * (hi - lo);
    let mut fc = sigma_min_half_line(op, beta * c)?;
    let mut fd = sigma_min_half_line(op, beta * d)?;
    evals += 2;
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = lo + INVPHI2 * (hi - lo);
            fc = sigma_min_half_line(op, beta * c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INVPHI * (hi - lo);
            fd = sigma_min_half_line(op, beta * d)?;
        }
        evals += 1;
    }
    Ok(if fc < fd { (c, fc, evals) } else { (d, fd, evals) })
}

/// Tabulate `Ψ(α)` for a list of circulation Reynolds numbers at fixed `k`.
///
/// Per α: a coarse scan over the default ν-range brackets the maximizer,
/// golden-section refinement polishes it to 1e−3 relative in λ, and the
/// winner is re-evaluated on the refined companion grid for its stability
/// bit. `α ≥ 8π` is required — below that the mode family is outside its
/// regime and `Ψ` is not meaningful.
pub fn psi_of_alpha(
    alphas: &[f64],
    k: u32,
    grid: &LogGrid,
    include_nonlocal: bool,
) -> Result<Vec<PsiPoint>> {
    if alphas.is_empty() {
        return Err(Error::precondition("α list must be non-empty"));
    }
    for &a in alphas {
        if !(a >= 8.0 * PI) || !a.is_finite() {
            return Err(Error::domain(format!(
                "Ψ(α) requires α ≥ 8π ≈ 25.13, got {a}"
            )));
        }
    }
    let refined = refined_companion(grid)?;
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let beta = alpha * k as f64 / (8.0 * PI);
        let base_op = assemble_half_line_raw(k, beta, 0.0, &grid.radial(), include_nonlocal)?;

        // Coarse scan (parallel), then bracket the argmin of σ_min.
        let (lo0, hi0, count) = (-0.5f64, 1.5f64, 41usize);
        let step = (hi0 - lo0) / (count as f64 - 1.0);
        let nus: Vec<f64> = (0..count).map(|i| lo0 + step * i as f64).collect();
        let sigmas: Vec<f64> = parallel::par_map(&nus, |&nu| sigma_min_half_line(&base_op, beta * nu))
            .into_iter()
            .collect::<Result<_>>()?;
        let i_best = sigmas
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("non-empty coarse scan");
        let lo = nus[i_best.saturating_sub(1)];
        let hi = nus[(i_best + 1).min(count - 1)];
        let (nu_g, sigma_g, evals) = golden_refine(&base_op, beta, lo, hi)?;
        let (nu_star, sigma_star) = if sigma_g < sigmas[i_best] {
            (nu_g, sigma_g)
        } else {
            (nus[i_best], sigmas[i_best])
        };

        let ref_op = assemble_half_line_raw(k, beta, 0.0, &refined.radial(), include_nonlocal)?;
        let sigma_ref = sigma_min_half_line(&ref_op, beta * nu_star)?;
        out.push(PsiPoint {
            alpha,
            beta_k: beta,
            psi: sigma_star,
            resolvent_norm_max: 1.0 / sigma_star,
            argmax_lambda: beta * nu_star,
            argmax_nu: nu_star,
            stable: (sigma_star - sigma_ref).abs() <= TRUNCATION_AGREEMENT * sigma_star,
            sigma_evaluations: count + evals + 1,
        });
    }
    Ok(out)
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl PlaneRect {
    fn validate(&self) -> Result<()> {
        let vals = [self.re_min, self.re_max, self.im_min, self.im_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("rectangle bounds must be finite"));
        }
        if self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::config(
                "rectangle must have re_min < re_max and im_min < im_max",
            ));
        }
        Ok(())
    }
}

/// Resolvent-norm samples of one mode operator over a complex rectangle.
///
/// `resolvent_norm[iy*nx + ix]` is `1/σ_min(A − z)` at
/// `z = re[ix] + i·im[iy]`. Stability bits are not computed per pixel (a
/// picture is diagnostic; the sweep and Ψ paths carry the honest bits).
#[derive(Clone, Debug, Serialize)]
pub struct PseudospectrumGrid {
    pub alpha: f64,
    pub k: u32,
    pub beta_k: f64,
    pub include_nonlocal: bool,
    pub rect: PlaneRect,
    pub nx: usize,
    pub ny: usize,
    pub grid_n: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Sample abscissae, length `nx`.
    pub re: Vec<f64>,
    /// Sample ordinates, length `ny`.
    pub im: Vec<f64>,
    /// Row-major `ny × nx` values of `1/σ_min(A − z)`.
    pub resolvent_norm: Vec<f64>,
}

impl PseudospectrumGrid {
    /// Value at column `ix`, row `iy`.
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.resolvent_norm[iy * self.nx + ix]
    }
}

/// Sample `1/σ_min(A − z)` of the half-line mode operator over a rectangle.
///
/// Grid points are independent and computed in parallel with a
/// deterministic, input-ordered reduction.
pub fn pseudospectrum(
    alpha: f64,
    k: u32,
    rect: PlaneRect,
    nx: usize,
    ny: usize,
    grid: &LogGrid,
    include_nonlocal: bool,
) -> Result<PseudospectrumGrid> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain("α must be finite and ≥ 0"));
    }
    rect.validate()?;
    if nx < 2 || ny < 2 {
        return Err(Error::config("pseudospectrum grid needs nx ≥ 2 and ny ≥ 2"));
    }
    let beta = alpha * k as f64 / (8.0 * PI);
    let op = assemble_half_line_raw(k, beta, 0.0, &grid.radial(), include_nonlocal)?;
    let re: Vec<f64> = (0..nx)
        .map(|i| rect.re_min + (rect.re_max - rect.re_min) * i as f64 / (nx as f64 - 1.0))
        .collect();
    let im: Vec<f64> = (0..ny)
        .map(|j| rect.im_min + (rect.im_max - rect.im_min) * j as f64 / (ny as f64 - 1.0))
        .collect();
    let flat: Vec<usize> = (0..nx * ny).collect();
    let resolvent_norm: Vec<f64> = parallel::par_map(&flat, |&idx| -> Result<f64> {
        let z = Complex64::new(re[idx % nx], im[idx / nx]);
        Ok(1.0 / smallest_singular_value(&op, z)?)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(PseudospectrumGrid {
        alpha,
        k,
        beta_k: beta,
        include_nonlocal,
        rect,
        nx,
        ny,
        grid_n: grid.n,
        t_min: grid.t_min,
        t_max: grid.t_max,
        re,
        im,
        resolvent_norm,
    })
}

/// Truncated spectrum of one mode operator, with truncation-stable members
/// marked.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub alpha: f64,
    pub k: u32,
    pub beta_k: f64,
    pub include_nonlocal: bool,
    pub grid_n: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub refined_n: usize,
    /// Whether the Hermitian fast path was taken (exact at `α = 0`, where
    /// the skew part vanishes identically).
    pub hermitian_route: bool,
    /// Eigenvalues sorted by real part, then imaginary part.
    pub values: Vec<Complex64>,
    /// `stable[i]`: some refined-grid eigenvalue lies within
    /// `1e−3·(1+|z_i|)` of `values[i]`.
    pub stable: Vec<bool>,
}

fn eigenvalues_of(op: &OperatorMatrix, hermitian: bool) -> Result<Vec<Complex64>> {
    let interior = op.interior();
    if hermitian {
        let vals = linalg::hermitian_eigenvalues(&interior)?;
        Ok(vals.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    } else {
        if interior.nrows() > DENSE_SIGMA_MIN_CAP {
            return Err(Error::config(format!(
                "dense eigendecomposition is limited to interior dimension ≤ {DENSE_SIGMA_MIN_CAP}"
            )));
        }
        linalg::eigenvalues(&interior)
    }
}

/// Eigenvalues of the truncated half-line mode operator.
///
/// `α = 0` is admitted (the operator is then Hermitian and the spectrum is
/// the exact ladder `(k + 2n)/2`, a calibration case). The same spectrum is
/// recomputed on the wider/finer companion grid; a base eigenvalue is marked
/// stable when a refined eigenvalue lies within `1e−3·(1+|z|)` — truncation
/// artifacts (barrier and box modes) move under refinement, genuine
/// discrete-spectrum approximations do not. The general (non-Hermitian)
/// dense path is capped at interior dimension [`DENSE_SIGMA_MIN_CAP`]; the
/// Hermitian path has no cap.
pub fn eigenvalues(
    alpha: f64,
    k: u32,
    grid: &LogGrid,
    include_nonlocal: bool,
) -> Result<SpectrumResult> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain("α must be finite and ≥ 0"));
    }
    let beta = alpha * k as f64 / (8.0 * PI);
    // At α = 0 the matrix is real symmetric by construction (no imaginary
    // entry is ever written), so the graded Hermitian solver applies and is
    // far more accurate on the small eigenvalues than dense QR.
    let hermitian_route = alpha == 0.0;
    let base_op = assemble_half_line_raw(k, beta, 0.0, &grid.radial(), include_nonlocal)?;
    let values = eigenvalues_of(&base_op, hermitian_route)?;

    let refined = refined_companion(grid)?;
    let ref_op = assemble_half_line_raw(k, beta, 0.0, &refined.radial(), include_nonlocal)?;
    let ref_values = eigenvalues_of(&ref_op, hermitian_route)?;

    let stable = values
        .iter()
        .map(|z| {
            let tol = 1e-3 * (1.0 + z.norm());
            ref_values.iter().any(|w| (z - w).norm() <= tol)
        })
        .collect();
    Ok(SpectrumResult {
        alpha,
        k,
        beta_k: beta,
        include_nonlocal,
        grid_n: grid.n,
        t_min: grid.t_min,
        t_max: grid.t_max,
        refined_n: refined.n,
        hermitian_route,
        values,
        stable,
    })
}

/// Least-squares power law `Ψ ≈ e^{intercept} · α^{exponent}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScalingFit {
    /// Slope of `ln Ψ` against `ln α`.
    pub exponent: f64,
    /// Intercept of the log-log line (`ln` of the prefactor).
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
    /// `log10(α_max/α_min)` of the table.
    pub decades: f64,
}

/// Ordinary least squares on `(ln α, ln Ψ)`.
///
/// Refuses tables that cannot support a power-law claim: fewer than 4
/// points, or less than 1.5 decades of α span. All entries must be finite
/// and positive.
pub fn fit_scaling(table: &[(f64, f64)]) -> Result<ScalingFit> {
    if table.len() < 4 {
        return Err(Error::config(format!(
            "scaling fit needs at least 4 points, got {}",
            table.len()
        )));
    }
    for &(a, psi) in table {
        if !(a > 0.0) || !(psi > 0.0) || !a.is_finite() || !psi.is_finite() {
            return Err(Error::domain(
                "scaling fit requires finite positive (α, Ψ) pairs",
            ));
        }
    }
    let a_min = table.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let a_max = table.iter().map(|p| p.0).fold(0.0f64, f64::max);
    let decades = (a_max / a_min).log10();
    if decades < 1.5 {
        return Err(Error::config(format!(
            "scaling fit needs ≥ 1.5 decades of α, got {decades:.3}"
        )));
    }
    let n = table.len() as f64;
    let xs: Vec<f64> = table.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = table.iter().map(|p| p.1.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + exponent * x);
            r * r
        })
        .sum();
    Ok(ScalingFit {
        exponent,
        intercept,
        residual: (ss / n).sqrt(),
        points: table.len(),
        decades,
    })
}
