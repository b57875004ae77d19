//! Dense assembly of the mode-family operators on both routes.
//!
//! Half-line route (`L²(ℝ₊; r dr)`):
//! `ℋ v = −v″ − v′/r + (k²/r²) v + (r²/16) v − v/2 + i(β_k σ(r) − λ) v − i β_k g 𝒦_k[g v]`.
//!
//! Log-line route (`L²(ℝ; dt)`, `r = e^t`, `u = v∘exp`):
//! `𝓛̃ u = −u″ + k² u + (e^{4t}/16) u − (e^{2t}/2) u + i e^{2t}(β_k σ(e^t) − λ) u − i β_k γ ⟨D_k⟩^{−2}[γ u]`,
//! where `γ(t) = e^{2t} g(e^t)` and `⟨D_k⟩^{−2}` is convolution with
//! `(2k)^{−1} e^{−k|t|}`. The two are conjugate: `(𝓛̃ u)(t) = e^{2t} (ℋ v)(e^t)`.
//!
//! All matrices are assembled with homogeneous Dirichlet truncation in exact
//! block-diagonal form `diag(1, A_int, 1)` (identity boundary rows, zeroed
//! boundary columns), so spectral routines can work on the interior block
//! with no boundary contamination. Assembled operators are returned in the
//! orthonormalized basis — conjugated by the diagonal square root of the
//! quadrature metric — with the Hermitian part explicitly symmetrized and
//! the skew part exactly skew by construction.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{second_derivative_matrix, LogGrid, RadialGrid};
use crate::profile;

/// Basis in which a dense operator's entries are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    /// Plain nodal values; the quadrature metric is diagonal but non-trivial.
    RawGrid,
    /// Conjugated by the square root of the quadrature metric, so the
    /// Euclidean inner product of coefficient vectors equals the weighted
    /// `L²` product of the functions they sample.
    Orthonormalized,
}

/// Which zero-order shift the log-line operator carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// The full conjugated operator, including the `−e^{2t}/2` shift.
    FullTilde,
    /// Drops `−e^{2t}/2`; the variant the coercivity estimates certify.
    NoHalfShift,
}

/// Route on which a nonlocal sandwich matrix was assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonlocalRoute {
    /// `g 𝒦_k[g ·]` on the half-line (raw nodal basis).
    HalfLine,
    /// `γ ⟨D_k⟩^{−2} γ` on the log line (raw nodal basis).
    LogLine,
}

/// Dense quadrature matrix of a nonlocal sandwich operator.
///
/// Integral operators need no boundary closure, so the matrix covers all
/// nodes; the assembly routines zero its boundary rows and columns when
/// embedding it into a Dirichlet-truncated operator.
#[derive(Clone, Debug)]
pub struct NonlocalKernel {
    /// Angular mode number `k ≥ 1`.
    pub k: u32,
    /// Route the kernel lives on.
    pub route: NonlocalRoute,
    /// Dense real matrix in the raw nodal basis.
    pub matrix: Array2<f64>,
}

/// Dense operator with grid and basis metadata.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    /// Dense complex entries.
    pub entries: Array2<Complex64>,
    /// Basis the entries are expressed in.
    pub basis: BasisTag,
    /// Underlying log grid (half-line operators keep their log parent).
    pub grid: LogGrid,
    /// Frobenius norm of the Hermitian part `(A + A†)/2`.
    pub hermitian_part_norm: f64,
    /// Frobenius norm of the skew part `(A − A†)/2`.
    pub skew_part_norm: f64,
}

impl OperatorMatrix {
    /// Wrap entries, computing the Hermitian/skew split norms.
    pub fn new(entries: Array2<Complex64>, basis: BasisTag, grid: LogGrid) -> Self {
        let n = entries.nrows();
        let mut herm = 0.0;
        let mut skew = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = entries[[i, j]];
                let bt = entries[[j, i]].conj();
                herm += (0.5 * (a + bt)).norm_sqr();
                skew += (0.5 * (a - bt)).norm_sqr();
            }
        }
        OperatorMatrix {
            entries,
            basis,
            grid,
            hermitian_part_norm: herm.sqrt(),
            skew_part_norm: skew.sqrt(),
        }
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// The interior block, dropping the two Dirichlet identity rows/columns.
    ///
    /// Because assembly zeroes the boundary taps, the full matrix is exactly
    /// `diag(1, A_int, 1)` and this block carries the whole truncated
    /// operator.
    pub fn interior(&self) -> Array2<Complex64> {
        let n = self.n();
        self.entries
            .slice(ndarray::s![1..n - 1, 1..n - 1])
            .to_owned()
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Array2<Complex64> {
        let n = self.n();
        Array2::from_shape_fn((n, n), |(i, j)| {
            0.5 * (self.entries[[i, j]] + self.entries[[j, i]].conj())
        })
    }

    /// Skew part `(A − A†)/2`.
    pub fn skew_part(&self) -> Array2<Complex64> {
        let n = self.n();
        Array2::from_shape_fn((n, n), |(i, j)| {
            0.5 * (self.entries[[i, j]] - self.entries[[j, i]].conj())
        })
    }
}

fn validate_mode(k: u32, beta: f64, lambda: f64) -> Result<()> {
    if k < 1 {
        return Err(Error::domain("mode family requires k ≥ 1"));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("β_k must be finite and ≥ 0, got {beta}")));
    }
    if !lambda.is_finite() {
        return Err(Error::domain("λ must be finite"));
    }
    Ok(())
}

/// Real part of the half-line operator in the raw nodal basis:
/// `−d²/dr² − (1/r) d/dr + k²/r² + r²/16 − 1/2` with Dirichlet truncation.
///
/// `k = 0` is admitted here (only) for the radial sanity check: the `k = 0`
/// real part annihilates the Gaussian profile `g`.
pub fn real_part_half_line(k: u32, grid: &RadialGrid) -> Result<Array2<f64>> {
    let n = grid.log.n;
    let r = &grid.r;
    let mut a = Array2::<f64>::zeros((n, n));

    let add_row = |a: &mut Array2<f64>, i: usize, lo: usize, hi: usize| {
        let win = &r[lo..hi];
        let w2 = crate::grid::finite_difference_weights(r[i], win, 2);
        let w1 = crate::grid::finite_difference_weights(r[i], win, 1);
        for (s, j) in (lo..hi).enumerate() {
            a[[i, j]] += -w2[s] - w1[s] / r[i];
        }
    };
    for i in 2..n - 2 {
        add_row(&mut a, i, i - 2, i + 3);
    }
    add_row(&mut a, 1, 0, 6);
    add_row(&mut a, n - 2, n - 6, n);

    let kk = (k * k) as f64;
    for i in 1..n - 1 {
        a[[i, i]] += kk / (r[i] * r[i]) + r[i] * r[i] / 16.0 - 0.5;
    }

    for i in 0..n {
        a[[i, 0]] = 0.0;
        a[[i, n - 1]] = 0.0;
        a[[0, i]] = 0.0;
        a[[n - 1, i]] = 0.0;
    }
    a[[0, 0]] = 1.0;
    a[[n - 1, n - 1]] = 1.0;
    Ok(a)
}

/// Dense quadrature matrix of the velocity-field kernel
/// `𝒦_k[f](r) = (2k)^{−1} ∫₀^∞ min(r/s, s/r)^k f(s) s ds` (raw basis).
///
/// The power-law factor is evaluated as `e^{−k|t_i−t_j|}` (the same thing on
/// a geometric grid), which is immune to overflow at large `k`. All kernel
/// quadratures in this module are corner-corrected trapezoid rules: the
/// `|t−s|` corner of the kernel contributes `(h²/12)·2k·(density at t)` to
/// the composite-trapezoid error, independent of `k` after the `(2k)^{−1}`
/// prefactor, so subtracting `h²/12` times the density weight on the
/// diagonal restores `O(h⁴)` accuracy (and agreement with the spectral
/// route, whose convolution is exact for resolved functions).
pub fn assemble_biot_savart(k: u32, grid: &RadialGrid) -> Result<Array2<f64>> {
    if k == 0 {
        return Err(Error::precondition(
            "assemble_biot_savart: k = 0 (logarithmic kernel) is unsupported",
        ));
    }
    let n = grid.log.n;
    let t = &grid.log.nodes;
    let h = grid.log.h;
    let fk = f64::from(k);
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| {
        (-fk * (t[i] - t[j]).abs()).exp() / (2.0 * fk) * grid.r[j] * grid.measure_weights[j]
    });
    for i in 0..n {
        a[[i, i]] -= h * h / 12.0 * grid.r[i] * grid.r[i];
    }
    Ok(a)
}

/// The half-line nonlocal sandwich `g 𝒦_k[g ·]` in the raw nodal basis.
pub fn nonlocal_half_line(k: u32, grid: &RadialGrid) -> Result<NonlocalKernel> {
    let kmat = assemble_biot_savart(k, grid)?;
    let n = grid.log.n;
    let g: Vec<f64> = grid.r.iter().map(|&r| profile::g(r)).collect();
    let matrix = Array2::from_shape_fn((n, n), |(i, j)| g[i] * kmat[[i, j]] * g[j]);
    Ok(NonlocalKernel {
        k,
        route: NonlocalRoute::HalfLine,
        matrix,
    })
}

/// The log-line nonlocal sandwich `γ ⟨D_k⟩^{−2} γ` in the raw nodal basis,
/// assembled as a Toeplitz-cored dense matrix
/// `γ(t_i) (2k)^{−1} e^{−k|t_i−t_j|} γ(t_j) h`, corner-corrected on the
/// diagonal (see [`assemble_biot_savart`]).
pub fn nonlocal_log_line(k: u32, grid: &LogGrid) -> Result<NonlocalKernel> {
    if k == 0 {
        return Err(Error::precondition("nonlocal_log_line requires k ≥ 1"));
    }
    let n = grid.n;
    let t = &grid.nodes;
    let fk = f64::from(k);
    let gam: Vec<f64> = t.iter().map(|&ti| profile::gamma(ti)).collect();
    let corner = grid.h * grid.h / 12.0;
    let matrix = Array2::from_shape_fn((n, n), |(i, j)| {
        let core = if i == j {
            grid.h / (2.0 * fk) - corner
        } else {
            (-fk * (t[i] - t[j]).abs()).exp() / (2.0 * fk) * grid.h
        };
        gam[i] * core * gam[j]
    });
    Ok(NonlocalKernel {
        k,
        route: NonlocalRoute::LogLine,
        matrix,
    })
}

/// Dense matrix of `⟨D_k⟩^{−2}` (convolution with `(2k)^{−1} e^{−k|t|}`),
/// corner-corrected on the diagonal (see [`assemble_biot_savart`]).
pub fn inverse_helmholtz_matrix(k: u32, grid: &LogGrid) -> Result<Array2<f64>> {
    if k == 0 {
        return Err(Error::precondition("inverse_helmholtz_matrix requires k ≥ 1"));
    }
    let n = grid.n;
    let t = &grid.nodes;
    let fk = f64::from(k);
    let corner = grid.h * grid.h / 12.0;
    Ok(Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            grid.h / (2.0 * fk) - corner
        } else {
            (-fk * (t[i] - t[j]).abs()).exp() / (2.0 * fk) * grid.h
        }
    }))
}

/// Dense matrix of the weighted conjugate `e^{−2t} ⟨D_k⟩^{−2} e^{2t}`, whose
/// operator norm is at most `1/(k(k−2))`. Requires `k ≥ 3` (the conjugate is
/// unbounded for `k ≤ 2`).
pub fn weighted_conjugate_matrix(k: u32, grid: &LogGrid) -> Result<Array2<f64>> {
    if k < 3 {
        return Err(Error::precondition(format!(
            "weighted conjugate kernel requires k ≥ 3, got {k}"
        )));
    }
    let n = grid.n;
    let t = &grid.nodes;
    let fk = f64::from(k);
    // Same corner correction as the unweighted kernel: the one-sided decay
    // rates are k+2 and k−2, whose sum is again 2k.
    let corner = grid.h * grid.h / 12.0;
    Ok(Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            grid.h / (2.0 * fk) - corner
        } else {
            let d = t[i] - t[j];
            (-fk * d.abs() - 2.0 * d).exp() / (2.0 * fk) * grid.h
        }
    }))
}

/// Orthonormalizing diagonal, symmetrization, and Dirichlet-preserving
/// embedding shared by the two assembly routes.
fn finish_assembly(
    mut real: Array2<f64>,
    imag_diag: Vec<f64>,
    nonlocal: Option<(f64, Array2<f64>)>,
    d: &[f64],
    grid: &LogGrid,
) -> OperatorMatrix {
    let n = grid.n;
    // Conjugate the real part into the orthonormalized basis and symmetrize
    // explicitly (the one-sided closure rows are the only asymmetric part).
    for i in 0..n {
        for j in 0..n {
            real[[i, j]] *= d[i] / d[j];
        }
    }
    let mut entries = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let sym = 0.5 * (real[[i, j]] + real[[j, i]]);
            entries[[i, j]] = Complex64::new(sym, 0.0);
        }
    }
    // Local skew term: diagonal, hence exactly skew after multiplication by i.
    for i in 1..n - 1 {
        entries[[i, i]] += Complex64::new(0.0, imag_diag[i]);
    }
    // Nonlocal skew term: the sandwich is exactly symmetric in the
    // orthonormalized basis; symmetrize to remove rounding residue.
    if let Some((beta, nl)) = nonlocal {
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                let v = nl[[i, j]] * d[i] / d[j];
                let vt = nl[[j, i]] * d[j] / d[i];
                entries[[i, j]] += Complex64::new(0.0, -beta * 0.5 * (v + vt));
            }
        }
    }
    OperatorMatrix::new(entries, BasisTag::Orthonormalized, grid.clone())
}

/// Assemble the half-line operator `ℋ − iλ`-family member with parameters
/// `(k, β_k, λ)` on `grid`, in the orthonormalized basis of `L²(r dr)`.
pub fn assemble_half_line_raw(
    k: u32,
    beta: f64,
    lambda: f64,
    grid: &RadialGrid,
    include_nonlocal: bool,
) -> Result<OperatorMatrix> {
    validate_mode(k, beta, lambda)?;
    let n = grid.log.n;
    let r = &grid.r;

    let real = real_part_half_line(k, grid)?;

    let mut imag_diag = vec![0.0; n];
    for i in 1..n - 1 {
        imag_diag[i] = beta * profile::sigma_unchecked(r[i]) - lambda;
    }

    let nonlocal = if include_nonlocal && beta > 0.0 {
        Some((beta, nonlocal_half_line(k, grid)?.matrix))
    } else {
        None
    };

    let d: Vec<f64> = (0..n)
        .map(|i| r[i] * grid.log.weights[i].sqrt())
        .collect();
    Ok(finish_assembly(
        real,
        imag_diag,
        nonlocal,
        &d,
        &grid.log,
    ))
}

/// [`assemble_half_line_raw`] driven by classified mode parameters.
pub fn assemble_half_line(
    mp: &profile::ModeParams,
    grid: &RadialGrid,
    include_nonlocal: bool,
) -> Result<OperatorMatrix> {
    assemble_half_line_raw(mp.k, mp.beta_k, mp.lambda, grid, include_nonlocal)
}

/// Assemble the log-line operator with parameters `(k, β_k, λ)` on `grid`,
/// in the orthonormalized basis of `L²(dt)`.
pub fn assemble_log_line_raw(
    k: u32,
    beta: f64,
    lambda: f64,
    grid: &LogGrid,
    variant: Variant,
    include_nonlocal: bool,
) -> Result<OperatorMatrix> {
    validate_mode(k, beta, lambda)?;
    let n = grid.n;
    let t = &grid.nodes;

    let d2 = second_derivative_matrix(grid)?;
    let mut real = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            real[[i, j]] = d2.entries[[i, j]].re;
        }
    }
    let kk = (k * k) as f64;
    for i in 1..n - 1 {
        let e2 = (2.0 * t[i]).exp();
        let mut pot = kk + e2 * e2 / 16.0;
        if variant == Variant::FullTilde {
            pot -= e2 / 2.0;
        }
        real[[i, i]] += pot;
    }

    let mut imag_diag = vec![0.0; n];
    for i in 1..n - 1 {
        let e2 = (2.0 * t[i]).exp();
        imag_diag[i] = e2 * (beta * profile::sigma_unchecked(t[i].exp()) - lambda);
    }

    let nonlocal = if include_nonlocal && beta > 0.0 {
        Some((beta, nonlocal_log_line(k, grid)?.matrix))
    } else {
        None
    };

    let d: Vec<f64> = grid.weights.iter().map(|&w| w.sqrt()).collect();
    Ok(finish_assembly(real, imag_diag, nonlocal, &d, grid))
}

/// [`assemble_log_line_raw`] driven by classified mode parameters.
pub fn assemble_log_line(
    mp: &profile::ModeParams,
    grid: &LogGrid,
    variant: Variant,
    include_nonlocal: bool,
) -> Result<OperatorMatrix> {
    assemble_log_line_raw(mp.k, mp.beta_k, mp.lambda, grid, variant, include_nonlocal)
}

/// Sample the numerical range `{⟨A u, u⟩ : ‖u‖ = 1}` of an orthonormalized
/// operator with seeded random interior vectors.
pub fn numerical_range_sample(
    op: &OperatorMatrix,
    trials: usize,
    seed: u64,
) -> Result<Vec<Complex64>> {
    if op.basis != BasisTag::Orthonormalized {
        return Err(Error::precondition(
            "numerical_range_sample requires an orthonormalized operator",
        ));
    }
    let n = op.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        // Random interior vector (boundary components stay zero: they carry
        // the Dirichlet identity rows, not the operator).
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        let mut nrm = 0.0;
        for ui in u.iter_mut().take(n - 1).skip(1) {
            *ui = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            nrm += ui.norm_sqr();
        }
        let nrm = nrm.sqrt();
        for ui in u.iter_mut() {
            *ui /= nrm;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..n - 1 {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 1..n - 1 {
                row += op.entries[[i, j]] * u[j];
            }
            acc += u[i].conj() * row;
        }
        out.push(acc);
    }
    Ok(out)
}
