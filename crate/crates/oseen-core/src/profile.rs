//! Scalar profile functions, cutoff families, case classification, and the
//! numerical constant searches behind the coercivity estimates.
//!
//! The basic objects are the angular-average profile of the Gaussian vortex
//!
//! ```text
//! σ(r) = (1 − e^{−r²/4}) / (r²/4),       g(r) = e^{−r²/8},
//! ```
//!
//! the log-variable weight `γ(t) = e^{2t} g(e^t)`, and the bound
//! `κ(r) = g(r)^{1/2} · max(1, |2 − r²/4|, |4 − (3/2)r² + r⁴/16|)` on the
//! weighted derivatives of `γ`. Everything here is a pure function of its
//! arguments; all constants produced by searches carry explicit safety
//! margins and are re-verifiable by sampling (see the `verify` module).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default `ε₀` of the case partition (reference configuration).
pub const DEFAULT_EPS0: f64 = 0.462;
/// Default `ε₁` of the case partition (reference configuration).
pub const DEFAULT_EPS1: f64 = 0.426;

// ---------------------------------------------------------------------------
// σ and its derivatives
// ---------------------------------------------------------------------------

/// `h(x) = 2(e^{−x} − 1 + x)/x²`, the analytic function with `h(0) = 1`.
///
/// Series branch below `|x| = 0.5` avoids the catastrophic cancellation of
/// the direct expression near zero; used wherever `1 − σ` is needed at small
/// arguments.
pub(crate) fn h_one_minus(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // h(x) = Σ_{j≥0} 2 (−x)^j / (j+2)!
        let mut term = 1.0; // j = 0: 2/2! = 1
        let mut sum = 1.0;
        for j in 1..=20 {
            term *= -x / (j as f64 + 2.0);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        2.0 * ((-x).exp() - 1.0 + x) / (x * x)
    }
}

/// σ without the domain check; callers guarantee `r > 0`.
pub(crate) fn sigma_unchecked(r: f64) -> f64 {
    let x = r * r / 4.0;
    if r < 1e-4 {
        // Taylor branch: σ = Σ_{m≥0} (−x)^m/(m+1)!; x < 2.5e−9 so three
        // terms already reach machine precision. Both branches agree to
        // better than 1e−13 at the switch point.
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// `1 − σ(r)` evaluated without cancellation at small `r`.
pub(crate) fn one_minus_sigma(r: f64) -> f64 {
    let x = r * r / 4.0;
    (x / 2.0) * h_one_minus(x)
}

/// The profile `σ(r) = (1 − e^{−r²/4})/(r²/4)`.
///
/// Strictly decreasing from `1` (at `r → 0`) to `0` (as `r → ∞`).
pub fn sigma(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("sigma requires r > 0, got {r}")));
    }
    Ok(sigma_unchecked(r))
}

/// One closed-form term `c · r^a · e^{−r²/4 · [has_exp]}`.
///
/// σ = 4r^{−2} − 4r^{−2}e^{−r²/4} in this representation; differentiation
/// maps the family into itself, which gives exact derivatives of any order.
#[derive(Clone, Copy)]
struct SigmaTerm {
    coef: f64,
    pow: i32,
    has_exp: bool,
}

fn differentiate_terms(terms: &[SigmaTerm]) -> Vec<SigmaTerm> {
    let mut out = Vec::with_capacity(terms.len() * 2);
    for t in terms {
        let dp = t.coef * t.pow as f64;
        if dp != 0.0 {
            out.push(SigmaTerm {
                coef: dp,
                pow: t.pow - 1,
                has_exp: t.has_exp,
            });
        }
        if t.has_exp {
            // d/dr e^{−r²/4} = −(r/2) e^{−r²/4}
            out.push(SigmaTerm {
                coef: -t.coef / 2.0,
                pow: t.pow + 1,
                has_exp: true,
            });
        }
    }
    out
}

fn eval_terms(terms: &[SigmaTerm], r: f64) -> f64 {
    let e = (-r * r / 4.0).exp();
    terms
        .iter()
        .map(|t| t.coef * r.powi(t.pow) * if t.has_exp { e } else { 1.0 })
        .sum()
}

/// `n`-th derivative of σ, `0 ≤ n ≤ 4`.
///
/// For `n = 1` this matches the closed form
/// `σ′(r) = −(8/r³)(1 − e^{−r²/4} − (r²/4)e^{−r²/4})`. Higher orders are
/// obtained by exact recursive differentiation of the closed form (the
/// term family `c·r^a·e^{−r²/4}` is closed under `d/dr`). Below `r²/4 = 0.1`
/// the closed form loses digits to cancellation, so the convergent power
/// series of σ is differentiated termwise instead.
pub fn sigma_derivative(n: u32, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!(
            "sigma_derivative requires r > 0, got {r}"
        )));
    }
    if n > 4 {
        return Err(Error::precondition(format!(
            "sigma_derivative supports n ≤ 4, got n = {n}"
        )));
    }
    if n == 0 {
        return Ok(sigma_unchecked(r));
    }
    let x = r * r / 4.0;
    if x < 0.1 {
        // σ(r) = Σ_m c_m r^{2m}, c_m = (−1)^m / (4^m (m+1)!); differentiate
        // the series termwise. Alternating with rapidly decaying terms, so
        // no cancellation for x < 0.1.
        let mut sum = 0.0;
        let mut c = 1.0; // c_0
        for m in 0..=24u32 {
            if m > 0 {
                c *= -1.0 / (4.0 * (m as f64 + 1.0));
            }
            let p = 2 * m as i64 - n as i64;
            if (2 * m as i64) < n as i64 {
                continue;
            }
            // falling factorial 2m (2m−1) … (2m−n+1)
            let mut fall = 1.0;
            for j in 0..n as i64 {
                fall *= (2 * m as i64 - j) as f64;
            }
            if fall == 0.0 {
                continue;
            }
            sum += c * fall * r.powi(p as i32);
        }
        Ok(sum)
    } else {
        let mut terms = vec![
            SigmaTerm {
                coef: 4.0,
                pow: -2,
                has_exp: false,
            },
            SigmaTerm {
                coef: -4.0,
                pow: -2,
                has_exp: true,
            },
        ];
        for _ in 0..n {
            terms = differentiate_terms(&terms);
        }
        Ok(eval_terms(&terms, r))
    }
}

// ---------------------------------------------------------------------------
// g, γ, κ
// ---------------------------------------------------------------------------

/// The Gaussian weight `g(r) = e^{−r²/8}`.
pub fn g(r: f64) -> f64 {
    (-r * r / 8.0).exp()
}

/// The log-variable weight `γ(t) = e^{2t} g(e^t) = e^{2t} e^{−e^{2t}/8}`.
///
/// Globally bounded by `8/e` (maximum at `e^{2t} = 8`).
pub fn gamma(t: f64) -> f64 {
    // Single-exponential form is total: for large t the exponent → −∞ and
    // the value underflows cleanly to 0.
    (2.0 * t - (2.0 * t).exp() / 8.0).exp()
}

/// First or second derivative of `γ`.
///
/// `γ′(t) = e^{2t} g(e^t)(2 − e^{2t}/4)` and
/// `γ″(t) = e^{2t} g(e^t)(4 − (3/2)e^{2t} + e^{4t}/16)`.
pub fn gamma_derivative(n: u32, t: f64) -> Result<f64> {
    let ga = gamma(t);
    if ga == 0.0 {
        // Underflowed tail: the true value is indistinguishable from 0 and
        // the polynomial factor must not turn 0·∞ into NaN.
        return match n {
            1 | 2 => Ok(0.0),
            _ => Err(Error::domain(format!(
                "gamma_derivative supports n ∈ {{1, 2}}, got n = {n}"
            ))),
        };
    }
    let u = (2.0 * t).exp();
    match n {
        1 => Ok(ga * (2.0 - u / 4.0)),
        2 => Ok(ga * (4.0 - 1.5 * u + u * u / 16.0)),
        _ => Err(Error::domain(format!(
            "gamma_derivative supports n ∈ {{1, 2}}, got n = {n}"
        ))),
    }
}

/// `κ(r) = g(r)^{1/2} · max(1, |2 − r²/4|, |4 − (3/2)r² + r⁴/16|)`.
///
/// Dominates the weighted size of `γ`, `γ′`, `γ″` at `t = log r`; tends to 0
/// as `r → ∞` since the Gaussian beats the polynomial factors.
pub fn kappa(r: f64) -> f64 {
    let q = r * r;
    let p1 = (2.0 - q / 4.0).abs();
    let p2 = (4.0 - 1.5 * q + q * q / 16.0).abs();
    (-q / 16.0).exp() * p1.max(p2).max(1.0)
}

// ---------------------------------------------------------------------------
// Forward-mode jets (value + first + second derivative)
// ---------------------------------------------------------------------------

/// Second-order jet for exact evaluation of cutoff derivatives.
///
/// All cutoff functions are compositions of affine maps, field operations,
/// `exp` and `sqrt`; propagating `(f, f′, f″)` through those operations
/// yields derivatives without finite differencing.
#[derive(Clone, Copy, Debug)]
struct Jet {
    v: f64,
    d1: f64,
    d2: f64,
}

impl Jet {
    const ZERO: Jet = Jet {
        v: 0.0,
        d1: 0.0,
        d2: 0.0,
    };

    fn constant(v: f64) -> Jet {
        Jet { v, d1: 0.0, d2: 0.0 }
    }

    /// The identity jet at the evaluation point.
    fn variable(v: f64) -> Jet {
        Jet { v, d1: 1.0, d2: 0.0 }
    }

    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }

    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }

    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }

    fn scale(self, c: f64) -> Jet {
        Jet {
            v: c * self.v,
            d1: c * self.d1,
            d2: c * self.d2,
        }
    }

    fn recip(self) -> Jet {
        let v = self.v;
        Jet {
            v: 1.0 / v,
            d1: -self.d1 / (v * v),
            d2: (2.0 * self.d1 * self.d1 - v * self.d2) / (v * v * v),
        }
    }

    fn div(self, o: Jet) -> Jet {
        self.mul(o.recip())
    }

    fn exp(self) -> Jet {
        let e = self.v.exp();
        Jet {
            v: e,
            d1: e * self.d1,
            d2: e * (self.d1 * self.d1 + self.d2),
        }
    }

    /// Square root with a guard at the smooth vanishing edge: where the
    /// radicand vanishes (to infinite order, by construction of the bump
    /// functions) the square root and all its derivatives vanish too.
    fn sqrt_clamped(self) -> Jet {
        if self.v < 1e-300 {
            return Jet::ZERO;
        }
        let s = self.v.sqrt();
        let d1 = self.d1 / (2.0 * s);
        let d2 = self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * self.v * s);
        Jet { v: s, d1, d2 }
    }
}

/// Bump building block `B(x) = e^{−1/x}` for `x > 0`, `0` otherwise.
fn bump_jet(x: Jet) -> Jet {
    if x.v <= 0.0 {
        return Jet::ZERO;
    }
    x.recip().scale(-1.0).exp()
}

/// Smooth step `S(x) = B(x)/(B(x) + B(1−x))`: `0` for `x ≤ 0`, `1` for
/// `x ≥ 1`, strictly increasing in between, flat to infinite order at both
/// ends.
fn step_jet(x: Jet) -> Jet {
    if x.v <= 0.0 {
        return Jet::ZERO;
    }
    if x.v >= 1.0 {
        return Jet::constant(1.0);
    }
    let b = bump_jet(x);
    let c = bump_jet(Jet::constant(1.0).sub(x));
    b.div(b.add(c))
}

// ---------------------------------------------------------------------------
// Cutoff family
// ---------------------------------------------------------------------------

/// The partition-of-unity cutoffs and the Fourier-multiplier profile ψ.
///
/// * `χ₀² + χ₊² + χ₋² = 1` with `supp χ₀ ⊂ [−c0, c0]`, `χ₊ = 1` on
///   `[c0, ∞)` with `supp χ₊ ⊂ [c0/2, ∞)`, and `χ₋(θ) = χ₊(−θ)`;
/// * `χ̃₀ = 1` on `[−2c0, 2c0]` with `supp χ̃₀ ⊂ [−3c0, 3c0]`;
/// * `ψ(θ) = −e(θ)·θ` with `e = 1/2` on `[−1,1]`, `e(θ) = 1/|θ|` for
///   `|θ| ≥ 2`, smoothly blended in between; ψ is nonincreasing, equals `1`
///   on `(−∞,−2]`, `−1` on `[2,∞)`, and has slope `−1/2` on `[−1,1]`.
///
/// All six functions expose derivatives up to order 2 via forward-mode jets
/// (exact chain rule, no finite differencing).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CutoffFamily {
    /// Half-width scale of the partition; supports are as listed above.
    pub c0: f64,
}

/// Build a [`CutoffFamily`] with supports scaled by `c0 ∈ (0, 1)`.
pub fn build_cutoffs(c0: f64) -> Result<CutoffFamily> {
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::domain(format!(
            "build_cutoffs requires c0 ∈ (0,1), got {c0}"
        )));
    }
    Ok(CutoffFamily { c0 })
}

impl CutoffFamily {
    /// Jet of `χ₊` at `θ`: `sqrt(S((θ − c0/2)/(c0/2)))`.
    fn chi_plus_jet(&self, theta: f64) -> Jet {
        let half = self.c0 / 2.0;
        let x = Jet {
            v: (theta - half) / half,
            d1: 1.0 / half,
            d2: 0.0,
        };
        step_jet(x).sqrt_clamped()
    }

    fn chi_minus_jet(&self, theta: f64) -> Jet {
        let j = self.chi_plus_jet(-theta);
        Jet {
            v: j.v,
            d1: -j.d1,
            d2: j.d2,
        }
    }

    fn chi0_jet(&self, theta: f64) -> Jet {
        let half = self.c0 / 2.0;
        let xp = Jet {
            v: (theta - half) / half,
            d1: 1.0 / half,
            d2: 0.0,
        };
        let xm = Jet {
            v: (-theta - half) / half,
            d1: -1.0 / half,
            d2: 0.0,
        };
        let inside = Jet::constant(1.0).sub(step_jet(xp)).sub(step_jet(xm));
        inside.sqrt_clamped()
    }

    /// Jet of `χ̃₀`: `1 − S(|θ|/c0 − 2)`, even, plateau 1 on `[−2c0, 2c0]`.
    fn chi_tilde0_jet(&self, theta: f64) -> Jet {
        let s = if theta >= 0.0 { 1.0 } else { -1.0 };
        let x = Jet {
            v: theta.abs() / self.c0 - 2.0,
            d1: s / self.c0,
            d2: 0.0,
        };
        // Smooth despite |θ|: the function is constant near θ = 0.
        Jet::constant(1.0).sub(step_jet(x))
    }

    /// Jet of the even factor `e(θ)`; constant `1/2` for `|θ| ≤ 1`.
    fn e_jet(&self, theta: f64) -> Jet {
        let a = theta.abs();
        if a <= 1.0 {
            return Jet::constant(0.5);
        }
        let s = if theta >= 0.0 { 1.0 } else { -1.0 };
        let u = Jet {
            v: a,
            d1: s,
            d2: 0.0,
        };
        let blend = step_jet(u.sub(Jet::constant(1.0))); // S(|θ|−1)
        let one_over = u.recip();
        // (1 − S)·(1/2) + S·(1/|θ|)
        Jet::constant(1.0)
            .sub(blend)
            .scale(0.5)
            .add(blend.mul(one_over))
    }

    fn psi_jet(&self, theta: f64) -> Jet {
        self.e_jet(theta).mul(Jet::variable(theta)).scale(-1.0)
    }

    fn deriv_of(j: Jet, n: u32) -> Result<f64> {
        match n {
            0 => Ok(j.v),
            1 => Ok(j.d1),
            2 => Ok(j.d2),
            _ => Err(Error::precondition(format!(
                "cutoff derivatives available for n ≤ 2, got n = {n}"
            ))),
        }
    }

    /// Central cutoff `χ₀(θ)`, supported in `[−c0, c0]`.
    pub fn chi0(&self, theta: f64) -> f64 {
        self.chi0_jet(theta).v
    }

    /// `n`-th derivative of `χ₀`, `n ≤ 2`.
    pub fn chi0_deriv(&self, n: u32, theta: f64) -> Result<f64> {
        Self::deriv_of(self.chi0_jet(theta), n)
    }

    /// Right cutoff `χ₊(θ)`: `0` below `c0/2`, `1` above `c0`.
    pub fn chi_plus(&self, theta: f64) -> f64 {
        self.chi_plus_jet(theta).v
    }

    /// `n`-th derivative of `χ₊`, `n ≤ 2`.
    pub fn chi_plus_deriv(&self, n: u32, theta: f64) -> Result<f64> {
        Self::deriv_of(self.chi_plus_jet(theta), n)
    }

    /// Left cutoff `χ₋(θ) = χ₊(−θ)`.
    pub fn chi_minus(&self, theta: f64) -> f64 {
        self.chi_minus_jet(theta).v
    }

    /// `n`-th derivative of `χ₋`, `n ≤ 2`.
    pub fn chi_minus_deriv(&self, n: u32, theta: f64) -> Result<f64> {
        Self::deriv_of(self.chi_minus_jet(theta), n)
    }

    /// Wide plateau cutoff `χ̃₀`: `1` on `[−2c0, 2c0]`, supported in
    /// `[−3c0, 3c0]`.
    pub fn chi_tilde0(&self, theta: f64) -> f64 {
        self.chi_tilde0_jet(theta).v
    }

    /// `n`-th derivative of `χ̃₀`, `n ≤ 2`.
    pub fn chi_tilde0_deriv(&self, n: u32, theta: f64) -> Result<f64> {
        Self::deriv_of(self.chi_tilde0_jet(theta), n)
    }

    /// The multiplier profile `ψ(θ) = −e(θ)·θ`.
    pub fn psi(&self, theta: f64) -> f64 {
        self.psi_jet(theta).v
    }

    /// `n`-th derivative of ψ, `n ≤ 2`.
    pub fn psi_deriv(&self, n: u32, theta: f64) -> Result<f64> {
        Self::deriv_of(self.psi_jet(theta), n)
    }

    /// The even factor `e(θ)` of the factorization `ψ(θ) = −e(θ)·θ`.
    pub fn e(&self, theta: f64) -> f64 {
        self.e_jet(theta).v
    }

    /// `n`-th derivative of `e`, `n ≤ 2`.
    pub fn e_deriv(&self, n: u32, theta: f64) -> Result<f64> {
        Self::deriv_of(self.e_jet(theta), n)
    }
}

// ---------------------------------------------------------------------------
// ρ and ρ̃
// ---------------------------------------------------------------------------

/// `ρ(t, t_k) = χ₀(t−t_k)² + e^{2t} σ(e^{t_k}) χ₊(t−t_k)² + e^{2t} σ(e^t) χ₋(t−t_k)²`.
pub fn rho(t: f64, t_k: f64, cuts: &CutoffFamily) -> f64 {
    let th = t - t_k;
    let e2t = (2.0 * t).exp();
    let chi0 = cuts.chi0(th);
    let chip = cuts.chi_plus(th);
    let chim = cuts.chi_minus(th);
    chi0 * chi0
        + e2t * sigma_unchecked(t_k.exp()) * chip * chip
        + e2t * sigma_unchecked(t.exp()) * chim * chim
}

/// `ρ̃(t, t_k) = e^{4t_k} χ₀² + e^{2t}(1−σ(e^t)) χ₊² + e^{2t}(1−σ(e^{t_k})) χ₋²`
/// (cutoffs evaluated at `t − t_k`).
pub fn rho_tilde(t: f64, t_k: f64, cuts: &CutoffFamily) -> f64 {
    let th = t - t_k;
    let e2t = (2.0 * t).exp();
    let chi0 = cuts.chi0(th);
    let chip = cuts.chi_plus(th);
    let chim = cuts.chi_minus(th);
    (4.0 * t_k).exp() * chi0 * chi0
        + e2t * one_minus_sigma(t.exp()) * chip * chip
        + e2t * one_minus_sigma(t_k.exp()) * chim * chim
}

// ---------------------------------------------------------------------------
// Change-of-sign point
// ---------------------------------------------------------------------------

/// Solve `σ(e^{t}) = ν` for the unique `t ∈ ℝ`, by bisection on the
/// strictly decreasing `t ↦ σ(e^t)`.
///
/// Returns `t` with `|σ(e^t) − ν| < 1e−12`.
pub fn solve_tk(nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::domain(format!(
            "solve_tk requires ν ∈ (0,1), got {nu}"
        )));
    }
    let f = |t: f64| sigma_unchecked(t.exp()) - nu;
    let mut lo = -60.0;
    let mut hi = 60.0;
    // σ(e^{−60}) = 1 and σ(e^{60}) = 0 to double precision, so the bracket
    // is valid for every representable ν strictly inside (0, 1).
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::internal(format!(
            "solve_tk bracket failed for ν = {nu}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    let res = (sigma_unchecked(t.exp()) - nu).abs();
    if res >= 1e-12 {
        return Err(Error::internal(format!(
            "solve_tk residual {res:.3e} exceeds 1e−12 at ν = {nu}"
        )));
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Case classification
// ---------------------------------------------------------------------------

/// Which of the six estimate regimes a mode falls into.
///
/// The easy regimes `ν ≥ 1` / `ν ≤ 0` use constant multipliers; the four
/// interior cases partition `ν ∈ (0,1)` by the location of the
/// change-of-sign point `e^{t_k}` relative to `ε₀⁻¹`, `ε₁` and `β_k^{−1/4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `ν ≥ 1`: the local symbol has a fixed sign; multiplier `(1−i)·Id`.
    EasyHigh,
    /// `ν ≤ 0`: fixed sign the other way; multiplier `(1+i)·Id`.
    EasyLow,
    /// `e^{t_k} > ε₀⁻¹` — sign change far outside the vortex core.
    Case1,
    /// `e^{t_k} ∈ [ε₁, ε₀⁻¹]` — sign change at core scale.
    Case2,
    /// `e^{t_k} ∈ (β_k^{−1/4}, ε₁)` — sign change inside the core but above
    /// the semiclassical scale.
    Case3,
    /// `e^{t_k} ≤ β_k^{−1/4}` — sign change below the semiclassical scale;
    /// constant multiplier `(1−i)·Id` suffices.
    Case4,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseTag::EasyHigh => "EasyHigh",
            CaseTag::EasyLow => "EasyLow",
            CaseTag::Case1 => "Case1",
            CaseTag::Case2 => "Case2",
            CaseTag::Case3 => "Case3",
            CaseTag::Case4 => "Case4",
        };
        f.write_str(s)
    }
}

/// Parameters of a single angular mode.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ModeParams {
    /// Circulation Reynolds number `α > 0`.
    pub alpha: f64,
    /// Angular mode number `k ≥ 1`.
    pub k: u32,
    /// Spectral parameter on the imaginary axis (`z = iλ`).
    pub lambda: f64,
    /// `β_k = α k / (8π)`.
    pub beta_k: f64,
    /// `ν_k = λ / β_k`.
    pub nu_k: f64,
    /// Change-of-sign point: `σ(e^{t_k}) = ν_k`, present iff `ν_k ∈ (0,1)`.
    pub t_k: Option<f64>,
    /// The estimate regime this mode falls into.
    pub case_tag: CaseTag,
}

fn classify_raw(nu: f64, beta_k: f64, t_k: Option<f64>, consts: &SigmaConstants) -> CaseTag {
    if nu >= 1.0 {
        return CaseTag::EasyHigh;
    }
    if nu <= 0.0 {
        return CaseTag::EasyLow;
    }
    let etk = t_k.expect("t_k present for ν ∈ (0,1)").exp();
    if etk > 1.0 / consts.eps0 {
        CaseTag::Case1
    } else if etk >= consts.eps1 {
        CaseTag::Case2
    } else if etk > beta_k.powf(-0.25) {
        CaseTag::Case3
    } else {
        CaseTag::Case4
    }
}

impl ModeParams {
    /// Build mode parameters from `(α, k, λ)` and classify the case.
    pub fn new(alpha: f64, k: u32, lambda: f64, consts: &SigmaConstants) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "ModeParams requires α > 0, got {alpha}"
            )));
        }
        if k < 1 {
            return Err(Error::domain("ModeParams requires k ≥ 1"));
        }
        if !lambda.is_finite() {
            return Err(Error::domain("ModeParams requires finite λ"));
        }
        let beta_k = alpha * k as f64 / (8.0 * std::f64::consts::PI);
        let nu_k = lambda / beta_k;
        let t_k = if nu_k > 0.0 && nu_k < 1.0 {
            Some(solve_tk(nu_k)?)
        } else {
            None
        };
        let case_tag = classify_raw(nu_k, beta_k, t_k, consts);
        Ok(ModeParams {
            alpha,
            k,
            lambda,
            beta_k,
            nu_k,
            t_k,
            case_tag,
        })
    }

    /// Build mode parameters from `(α, k, ν)`; `λ = β_k·ν`.
    pub fn from_nu(alpha: f64, k: u32, nu: f64, consts: &SigmaConstants) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "ModeParams requires α > 0, got {alpha}"
            )));
        }
        let beta_k = alpha * k as f64 / (8.0 * std::f64::consts::PI);
        Self::new(alpha, k, beta_k * nu, consts)
    }
}

/// Recompute the case tag of `mp` against `consts`.
///
/// Boundaries follow the interval notation of the partition: Case 2 is the
/// closed interval `[ε₁, ε₀⁻¹]`, Case 3 is open on both sides, and equality
/// `e^{t_k} = β_k^{−1/4}` belongs to Case 4. The partition is total: every
/// `(ν, β_k)` receives exactly one tag.
pub fn classify_case(mp: &ModeParams, consts: &SigmaConstants) -> Result<CaseTag> {
    if mp.nu_k > 0.0 && mp.nu_k < 1.0 && mp.t_k.is_none() {
        return Err(Error::domain(
            "ModeParams with ν ∈ (0,1) must carry its change-of-sign point",
        ));
    }
    Ok(classify_raw(mp.nu_k, mp.beta_k, mp.t_k, consts))
}

// ---------------------------------------------------------------------------
// Constant search for the σ-inequalities
// ---------------------------------------------------------------------------

/// Numerical constants of the σ-inequalities used by the case estimates.
///
/// `μ₁, μ₂` bracket the weighted derivative: `−μ₁ w(r) ≤ σ′(r) ≤ −μ₂ w(r)`
/// with weight `r^{−3}` for `r > e^{−2}ε₀^{−1}`, `1` on
/// `[e^{−2}ε₁, e²ε₀^{−1}]`, and `r` for `r < e²ε₁`. The width `c0` satisfies
/// `4c0·e^{4c0} ≤ μ₂/(2μ₁)`, which makes the commutator losses of the case
/// estimates absorbable; `C1, C2, C3` are the resulting derivative-bound
/// constants and `c1, c2, c3` the ratio constants of the case separation
/// inequalities.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SigmaConstants {
    /// Outer case threshold `ε₀ ∈ (0,1)`.
    pub eps0: f64,
    /// Inner case threshold `ε₁ ∈ (0,1)`.
    pub eps1: f64,
    /// Upper weighted-derivative bound (with 1% safety margin).
    pub mu1: f64,
    /// Lower weighted-derivative bound (with 1% safety margin).
    pub mu2: f64,
    /// Cutoff half-width: largest `c0` with `4c0·e^{4c0} ≤ μ₂/(2μ₁)`.
    pub c0: f64,
    /// Case-1 derivative bound `C1 = μ₂/2`.
    pub c_1: f64,
    /// Case-2 derivative bound `C2 = μ₂ e^{−6} ε₁³ / 2`.
    pub c_2: f64,
    /// Case-3 derivative bound `C3 = μ₂ e^{−8c0} / 2`.
    pub c_3: f64,
    /// Case-1 separation ratio constant.
    pub c1: f64,
    /// Case-2 separation ratio constant.
    pub c2: f64,
    /// Case-3 separation ratio constant.
    pub c3: f64,
}

impl SigmaConstants {
    /// `4c0·e^{4c0} ≤ μ₂/(2μ₁)` and strict positivity of every field.
    pub fn invariants_hold(&self) -> bool {
        let all_pos = [
            self.eps0, self.eps1, self.mu1, self.mu2, self.c0, self.c_1, self.c_2, self.c_3,
            self.c1, self.c2, self.c3,
        ]
        .iter()
        .all(|&v| v > 0.0 && v.is_finite());
        let unit = |v: f64| v > 0.0 && v < 1.0;
        all_pos
            && unit(self.eps0)
            && unit(self.eps1)
            && unit(self.c0)
            && unit(self.c1)
            && unit(self.c2)
            && unit(self.c3)
            && 4.0 * self.c0 * (4.0 * self.c0).exp() <= self.mu2 / (2.0 * self.mu1)
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Search the σ-inequality constants for the thresholds `(ε₀, ε₁)` using the
/// default sampling resolution (2000 points per dimension).
pub fn find_sigma_constants(eps0: f64, eps1: f64) -> Result<SigmaConstants> {
    find_sigma_constants_with_resolution(eps0, eps1, 2000)
}

/// Same as [`find_sigma_constants`] with an explicit per-dimension sample
/// count (minimum 16).
///
/// All constants are estimated by dense sampling and carry a 1% safety
/// margin in the safe direction; they are therefore slightly conservative
/// and re-verifiable by independent sampling.
pub fn find_sigma_constants_with_resolution(
    eps0: f64,
    eps1: f64,
    samples: usize,
) -> Result<SigmaConstants> {
    if !(eps0 > 0.0 && eps0 < 1.0 && eps1 > 0.0 && eps1 < 1.0) {
        return Err(Error::domain(format!(
            "find_sigma_constants requires ε₀, ε₁ ∈ (0,1), got ε₀ = {eps0}, ε₁ = {eps1}"
        )));
    }
    if samples < 16 {
        return Err(Error::config("constant search needs ≥ 16 samples/dim"));
    }

    // --- μ₁, μ₂: extrema of the weighted −σ′ over the three ranges. The
    // unbounded ends are capped where the weighted derivative is provably
    // monotone and its limit is attained to double precision (r = 50 for the
    // tail, r = 1e−4 for the origin).
    let e2 = std::f64::consts::E * std::f64::consts::E;
    let range_a = log_spaced(1.0 / (e2 * eps0), 50.0, samples);
    let range_b = log_spaced(eps1 / e2, e2 / eps0, samples);
    let range_c = log_spaced(1e-4, e2 * eps1, samples);

    let weighted = |r: f64, w: i32| -> Result<f64> {
        Ok(-sigma_derivative(1, r)? * r.powi(w))
    };
    let mut sup = f64::MIN;
    let mut inf = f64::MAX;
    for (range, w) in [(&range_a, 3), (&range_b, 0), (&range_c, -1)] {
        for &r in range.iter() {
            let v = weighted(r, w)?;
            sup = sup.max(v);
            inf = inf.min(v);
        }
    }
    if inf <= 0.0 {
        return Err(Error::internal(
            "sampled μ₂ ≤ 0 contradicts σ strictly decreasing",
        ));
    }
    let mu1 = 1.01 * sup;
    let mu2 = 0.99 * inf;

    // --- c0: largest value with 4c0·e^{4c0} ≤ μ₂/(2μ₁), by bisection on the
    // increasing left-hand side.
    let target = mu2 / (2.0 * mu1);
    let f = |c: f64| 4.0 * c * (4.0 * c).exp();
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    if f(hi) <= target {
        lo = hi; // entire interval admissible (cannot happen for sane μ's)
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c0 = lo;
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::internal(format!("c0 search failed: c0 = {c0}")));
    }

    let c_1 = mu2 / 2.0;
    let c_2 = mu2 * (-6.0_f64).exp() * eps1.powi(3) / 2.0;
    let c_3 = mu2 * (-8.0 * c0).exp() / 2.0;

    // --- c1, c2, c3: sampled minimization of the separation ratios over a
    // dense (t, t_k) grid. For each t_k the extremal t lies on the support
    // boundary |t − t_k| = c0/2, so the offset grid starts there and spans
    // two e-foldings outward.
    let offsets: Vec<f64> = (0..samples)
        .map(|i| c0 / 2.0 + 2.0 * i as f64 / (samples - 1) as f64)
        .collect();

    // Case 1 and Case 2 ratios:  upper branch 1 − σ(r_k e^{s})/σ(r_k),
    // lower branch 1 − σ(r_k)/σ(r_k e^{−s}).
    let ratio_12 = |rk_grid: &[f64]| -> f64 {
        let mut m = f64::MAX;
        for &rk in rk_grid {
            let srk = sigma_unchecked(rk);
            for &s in &offsets {
                let up = 1.0 - sigma_unchecked(rk * s.exp()) / srk;
                let dn = 1.0 - srk / sigma_unchecked(rk * (-s).exp());
                m = m.min(up).min(dn);
            }
        }
        m
    };
    let rk1 = log_spaced(1.0 / eps0, 50.0, samples);
    let rk2 = log_spaced(eps1, 1.0 / eps0, samples);
    let c1 = 0.99 * ratio_12(&rk1);
    let c2 = 0.99 * ratio_12(&rk2);

    // Case 3 ratios: upper branch (σ(r_k) − σ(r))/(1 − σ(r)) for
    // r = r_k e^{s}; lower branch (σ(r) − σ(r_k))/(1 − σ(r_k)) for
    // r = r_k e^{−s}. Differences of σ computed via 1 − σ to avoid
    // cancellation near the origin.
    let rk3 = log_spaced(1e-6, eps1, samples);
    let mut m3 = f64::MAX;
    for &rk in &rk3 {
        let oms_rk = one_minus_sigma(rk);
        for &s in &offsets {
            let r_up = rk * s.exp();
            let up = (one_minus_sigma(r_up) - oms_rk) / one_minus_sigma(r_up);
            let r_dn = rk * (-s).exp();
            let dn = (oms_rk - one_minus_sigma(r_dn)) / oms_rk;
            m3 = m3.min(up).min(dn);
        }
    }
    let c3 = 0.99 * m3;

    let consts = SigmaConstants {
        eps0,
        eps1,
        mu1,
        mu2,
        c0,
        c_1,
        c_2,
        c_3,
        c1,
        c2,
        c3,
    };
    if !consts.invariants_hold() {
        return Err(Error::internal(format!(
            "constant search produced an invalid set: {consts:?}"
        )));
    }
    Ok(consts)
}

// ---------------------------------------------------------------------------
// Stateless namespace handle
// ---------------------------------------------------------------------------

/// Stateless namespace over the profile evaluators, for contexts that want
/// a value to pass around. All methods delegate to the module-level
/// functions.
#[derive(Clone, Copy, Debug, Default)]
pub struct VortexProfile;

impl VortexProfile {
    /// See [`sigma`].
    pub fn sigma(&self, r: f64) -> Result<f64> {
        sigma(r)
    }

    /// See [`sigma_derivative`].
    pub fn sigma_derivative(&self, n: u32, r: f64) -> Result<f64> {
        sigma_derivative(n, r)
    }

    /// See [`g`].
    pub fn g(&self, r: f64) -> f64 {
        g(r)
    }

    /// See [`gamma`].
    pub fn gamma(&self, t: f64) -> f64 {
        gamma(t)
    }

    /// See [`gamma_derivative`].
    pub fn gamma_derivative(&self, n: u32, t: f64) -> Result<f64> {
        gamma_derivative(n, t)
    }

    /// See [`kappa`].
    pub fn kappa(&self, r: f64) -> f64 {
        kappa(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn sigma_known_values() {
        // σ(2) = 1 − e^{−1}
        assert_relative_eq!(
            sigma(2.0).unwrap(),
            1.0 - (-1.0f64).exp(),
            epsilon = 1e-15
        );
        // Taylor regime
        assert_relative_eq!(sigma(0.01).unwrap(), 0.9999875, epsilon = 1e-9);
        // Tail: dominant term 4/r²
        assert_relative_eq!(sigma(100.0).unwrap(), 4.0e-4, epsilon = 1e-12);
    }

    #[test]
    fn sigma_rejects_nonpositive() {
        assert!(matches!(sigma(0.0), Err(Error::Domain(_))));
        assert!(matches!(sigma(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sigma_branches_agree_at_switch() {
        // Both branches at the 1e−4 switch point agree to 1e−13.
        let r = 1e-4_f64;
        let x = r * r / 4.0;
        let taylor = 1.0 - x / 2.0 + x * x / 6.0;
        let direct = -(-x).exp_m1() / x;
        assert_abs_diff_eq!(taylor, direct, epsilon = 1e-13);
    }

    #[test]
    fn sigma_derivative_closed_form_at_two() {
        // σ′(2) = −(1 − 2/e)
        let want = -(1.0 - 2.0 * (-1.0f64).exp());
        assert_relative_eq!(sigma_derivative(1, 2.0).unwrap(), want, epsilon = 1e-13);
    }

    #[test]
    fn sigma_derivative_order_zero_is_sigma() {
        assert_eq!(sigma_derivative(0, 1.0).unwrap(), sigma(1.0).unwrap());
    }

    #[test]
    fn sigma_derivative_matches_finite_differences() {
        // Central differences of σ as the oracle for n = 1, of σ′ for n = 2,
        // across both evaluation branches.
        for &r in &[1e-3, 0.01, 0.1, 0.3, 0.64, 1.0, 2.0, 5.0, 10.0, 30.0] {
            let h = 1e-5 * (1.0 + r);
            let d1 = sigma_derivative(1, r).unwrap();
            let fd1 = (sigma_unchecked(r + h) - sigma_unchecked(r - h)) / (2.0 * h);
            assert!(
                (d1 - fd1).abs() < 1e-6 * (1.0 + d1.abs()),
                "n=1 FD mismatch at r={r}: {d1} vs {fd1}"
            );
            let d2 = sigma_derivative(2, r).unwrap();
            let fd2 = (sigma_derivative(1, r + h).unwrap() - sigma_derivative(1, r - h).unwrap())
                / (2.0 * h);
            assert!(
                (d2 - fd2).abs() < 1e-6 * (1.0 + d2.abs()),
                "n=2 FD mismatch at r={r}: {d2} vs {fd2}"
            );
            let d4 = sigma_derivative(4, r).unwrap();
            let fd4 = (sigma_derivative(3, r + h).unwrap() - sigma_derivative(3, r - h).unwrap())
                / (2.0 * h);
            assert!(
                (d4 - fd4).abs() < 1e-5 * (1.0 + d4.abs()),
                "n=4 FD mismatch at r={r}: {d4} vs {fd4}"
            );
        }
    }

    #[test]
    fn sigma_derivative_rejects_high_order() {
        assert!(matches!(
            sigma_derivative(5, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gamma_peak_value() {
        // Maximum 8/e at e^{2t} = 8.
        let t = 8.0f64.ln() / 2.0;
        assert_relative_eq!(gamma(t), 8.0 / std::f64::consts::E, epsilon = 1e-14);
        // And it is a bound (sampled broadly; also an invariant test).
        for i in 0..2000 {
            let t = -20.0 + 25.0 * i as f64 / 1999.0;
            assert!(gamma(t) <= 8.0 / std::f64::consts::E + 1e-12);
        }
    }

    #[test]
    fn gamma_derivative_printed_formula() {
        // γ′(0) = 1·g(1)·(2 − 1/4) = (7/4)e^{−1/8}
        let want = 1.75 * (-0.125f64).exp();
        assert_relative_eq!(gamma_derivative(1, 0.0).unwrap(), want, epsilon = 1e-14);
        // FD cross-checks of both orders.
        for &t in &[-3.0, -1.0, 0.0, 0.5, 1.0, 1.5] {
            let h = 1e-6;
            let fd1 = (gamma(t + h) - gamma(t - h)) / (2.0 * h);
            assert_relative_eq!(
                gamma_derivative(1, t).unwrap(),
                fd1,
                max_relative = 1e-7,
                epsilon = 1e-9
            );
            let fd2 = (gamma(t + h) - 2.0 * gamma(t) + gamma(t - h)) / (h * h);
            assert_relative_eq!(
                gamma_derivative(2, t).unwrap(),
                fd2,
                max_relative = 1e-3,
                epsilon = 1e-6
            );
        }
        assert!(matches!(gamma_derivative(3, 0.0), Err(Error::Domain(_))));
        // Deep tail underflows to zero rather than NaN.
        assert_eq!(gamma_derivative(1, 400.0).unwrap(), 0.0);
    }

    #[test]
    fn kappa_formula_and_decay() {
        // κ(10) = e^{−6.25}·max(1, 23, 479) = 479·e^{−6.25}
        assert_relative_eq!(kappa(10.0), 479.0 * (-6.25f64).exp(), epsilon = 1e-13);
        // κ(r) → 0 as r → ∞; by r = 30 it is far below 1e−4.
        assert!(kappa(30.0) < 1e-4);
        // Near the origin the second-derivative polynomial dominates the max.
        let q = 0.01;
        assert_relative_eq!(
            kappa(0.1),
            g(0.1).sqrt() * (4.0 - 1.5 * q + q * q / 16.0),
            epsilon = 1e-13
        );
    }

    #[test]
    fn cutoff_plateaus_and_partition() {
        let cuts = build_cutoffs(0.35).unwrap();
        assert_relative_eq!(cuts.chi0(0.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.chi_plus(0.35), 1.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.chi_minus(-0.35), 1.0, epsilon = 1e-14);
        // Supports.
        assert_eq!(cuts.chi0(0.36), 0.0);
        assert_eq!(cuts.chi0(-0.36), 0.0);
        assert_eq!(cuts.chi_plus(0.17), 0.0);
        assert_eq!(cuts.chi_minus(0.0), 0.0);
        assert_relative_eq!(cuts.chi_tilde0(0.69), 1.0, epsilon = 1e-14);
        assert_eq!(cuts.chi_tilde0(1.06), 0.0);
        // Partition of unity at 10³ sampled points.
        for i in 0..1000 {
            let th = -0.8 + 1.6 * i as f64 / 999.0;
            let s = cuts.chi0(th).powi(2) + cuts.chi_plus(th).powi(2) + cuts.chi_minus(th).powi(2);
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn psi_shape() {
        let cuts = build_cutoffs(0.35).unwrap();
        // Plateaus ±1 and the −1/2 slope in the core.
        assert_relative_eq!(cuts.psi(-2.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.psi(-5.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.psi(2.0), -1.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.psi(7.0), -1.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.psi_deriv(1, 0.0).unwrap(), -0.5, epsilon = 1e-14);
        assert_relative_eq!(cuts.psi_deriv(1, 0.9).unwrap(), -0.5, epsilon = 1e-14);
        assert_relative_eq!(cuts.psi(0.5), -0.25, epsilon = 1e-14);
        // ψ nonincreasing; e ∈ [0,1] with its plateau and tail laws.
        let mut prev = f64::INFINITY;
        for i in 0..4000 {
            let th = -4.0 + 8.0 * i as f64 / 3999.0;
            let v = cuts.psi(th);
            assert!(v <= prev + 1e-12, "ψ increased at θ = {th}");
            prev = v;
            let e = cuts.e(th);
            assert!((0.0..=1.0 + 1e-12).contains(&e));
        }
        assert_relative_eq!(cuts.e(0.3), 0.5, epsilon = 1e-14);
        assert_relative_eq!(cuts.e(3.0), 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(cuts.e(-2.5), 0.4, epsilon = 1e-14);
    }

    #[test]
    fn cutoff_derivatives_match_finite_differences() {
        let cuts = build_cutoffs(0.35).unwrap();
        let h = 1e-6;
        let check = |name: &str, f: &dyn Fn(f64) -> f64, th: f64, d: f64| {
            let fd = (f(th + h) - f(th - h)) / (2.0 * h);
            assert!(
                (fd - d).abs() < 1e-5 * (1.0 + d.abs()),
                "{name}′ mismatch at θ={th}: jet {d} vs FD {fd}"
            );
        };
        for &th in &[-0.3, -0.21, -0.1, 0.05, 0.12, 0.2, 0.27, 0.33, 0.8, 1.4, 1.9] {
            check("chi0", &|x| cuts.chi0(x), th, cuts.chi0_deriv(1, th).unwrap());
            check(
                "chi_plus",
                &|x| cuts.chi_plus(x),
                th,
                cuts.chi_plus_deriv(1, th).unwrap(),
            );
            check(
                "chi_minus",
                &|x| cuts.chi_minus(x),
                th,
                cuts.chi_minus_deriv(1, th).unwrap(),
            );
            check(
                "chi_tilde0",
                &|x| cuts.chi_tilde0(x),
                th,
                cuts.chi_tilde0_deriv(1, th).unwrap(),
            );
            check("psi", &|x| cuts.psi(x), th, cuts.psi_deriv(1, th).unwrap());
            // Second derivatives against FD of the jet first derivative.
            let fd2 = (cuts.chi0_deriv(1, th + h).unwrap() - cuts.chi0_deriv(1, th - h).unwrap())
                / (2.0 * h);
            let d2 = cuts.chi0_deriv(2, th).unwrap();
            assert!(
                (fd2 - d2).abs() < 1e-4 * (1.0 + d2.abs()),
                "chi0″ mismatch at θ={th}: jet {d2} vs FD {fd2}"
            );
        }
        assert!(matches!(
            cuts.psi_deriv(3, 0.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn build_cutoffs_validates_width() {
        assert!(build_cutoffs(0.0).is_err());
        assert!(build_cutoffs(1.0).is_err());
        assert!(build_cutoffs(0.5).is_ok());
    }

    #[test]
    fn rho_support_structure() {
        let cuts = build_cutoffs(0.2).unwrap();
        let t_k = 0.3;
        assert_relative_eq!(rho(t_k, t_k, &cuts), 1.0, epsilon = 1e-13);
        // At t − t_k = +2c0 only χ₊ is alive.
        let t = t_k + 0.4;
        assert_relative_eq!(
            rho(t, t_k, &cuts),
            (2.0 * t).exp() * sigma_unchecked(t_k.exp()),
            epsilon = 1e-13
        );
        // Mirror side uses σ(e^t).
        let t = t_k - 0.4;
        assert_relative_eq!(
            rho(t, t_k, &cuts),
            (2.0 * t).exp() * sigma_unchecked(t.exp()),
            epsilon = 1e-13
        );
        assert_relative_eq!(
            rho_tilde(t_k, t_k, &cuts),
            (4.0 * t_k).exp(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn solve_tk_examples() {
        // ν = 1/2: x = r²/4 solves 1 − e^{−x} = x/2, x ≈ 1.5936.
        let t = solve_tk(0.5).unwrap();
        assert_relative_eq!(t.exp(), 2.5245, max_relative = 1e-3);
        // Invert σ(2).
        let nu = sigma(2.0).unwrap();
        assert_relative_eq!(solve_tk(nu).unwrap(), 2.0f64.ln(), epsilon = 1e-11);
        // Round-trip near the endpoint.
        let t = solve_tk(0.999).unwrap();
        assert!((sigma_unchecked(t.exp()) - 0.999).abs() < 1e-12);
        assert!(matches!(solve_tk(0.0), Err(Error::Domain(_))));
        assert!(matches!(solve_tk(1.0), Err(Error::Domain(_))));
    }

    fn quick_consts() -> SigmaConstants {
        find_sigma_constants_with_resolution(DEFAULT_EPS0, DEFAULT_EPS1, 400).unwrap()
    }

    #[test]
    fn classify_examples() {
        let consts = quick_consts();
        let mp = ModeParams::new(1000.0, 5, 0.0, &consts).unwrap();
        assert_eq!(mp.case_tag, CaseTag::EasyLow);
        assert!(mp.t_k.is_none());

        let mp = ModeParams::from_nu(1000.0, 5, 0.5, &consts).unwrap();
        assert_eq!(mp.case_tag, CaseTag::Case1);
        assert!(mp.t_k.unwrap().exp() > 1.0 / consts.eps0);

        let mp = ModeParams::from_nu(1000.0, 5, 1.0, &consts).unwrap();
        assert_eq!(mp.case_tag, CaseTag::EasyHigh);

        // Boundary tie-break: e^{t_k} = β_k^{−1/4} exactly goes to Case 4.
        // Use a dyadic boundary 2^{−m} so that ln/exp round-trips exactly.
        let mut mp = ModeParams::from_nu(1000.0, 5, 0.9999, &consts).unwrap();
        let mut found = false;
        for m in 2..10 {
            let beta_k = 2.0f64.powi(4 * m);
            let x = beta_k.powf(-0.25);
            let t = x.ln();
            if t.exp() == x && x < consts.eps1 {
                mp.beta_k = beta_k;
                mp.t_k = Some(t);
                assert_eq!(classify_case(&mp, &consts).unwrap(), CaseTag::Case4);
                mp.t_k = Some((x * 1.5).ln());
                assert_eq!(classify_case(&mp, &consts).unwrap(), CaseTag::Case3);
                found = true;
                break;
            }
        }
        assert!(found, "no exactly-representable case boundary found");
    }

    #[test]
    fn mode_params_stores_beta_exactly() {
        let consts = quick_consts();
        let mp = ModeParams::new(9e4, 84, 17.0, &consts).unwrap();
        assert_eq!(mp.beta_k, 9e4 * 84.0 / (8.0 * std::f64::consts::PI));
        assert_eq!(mp.nu_k, 17.0 / mp.beta_k);
        // t_k consistency when present.
        if let Some(t_k) = mp.t_k {
            assert!((sigma_unchecked(t_k.exp()) - mp.nu_k).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_constants_reference_configuration() {
        let sc = quick_consts();
        assert!(sc.invariants_hold(), "invariants failed for {sc:?}");
        // Order-of-magnitude pins for the reference thresholds: the weighted
        // derivative tail gives μ₁ ≈ 8.08 and the Case-1 left endpoint gives
        // μ₂ ≈ 1.8e−3, hence c0 ≈ 2.8e−5.
        assert_relative_eq!(sc.mu1, 8.08, max_relative = 2e-2);
        assert!(sc.mu2 > 1e-3 && sc.mu2 < 3e-3, "mu2 = {}", sc.mu2);
        assert!(sc.c0 > 1e-5 && sc.c0 < 1e-4, "c0 = {}", sc.c0);
        assert!(sc.c1 > 0.0 && sc.c2 > 0.0 && sc.c3 > 0.0);
    }

    #[test]
    fn case1_derivative_bound_sampled() {
        // d/dt[e^{2t}(σ(e^t) − σ(e^{t_k}))] ≤ −C1 for e^{t_k} > ε₀⁻¹,
        // |t − t_k| ≤ 2c0, on a deterministic pseudo-random sample.
        let sc = quick_consts();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut unit = move || {
            // xorshift64* — deterministic, dependency-free sampling
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let rk = (1.0 / sc.eps0) * (1.0 + 20.0 * unit());
            let t_k = rk.ln();
            let t = t_k + sc.c0 * (4.0 * unit() - 2.0);
            let r = t.exp();
            let deriv = (2.0 * t).exp()
                * (2.0 * (sigma_unchecked(r) - sigma_unchecked(rk))
                    + r * sigma_derivative(1, r).unwrap());
            assert!(
                deriv <= -sc.c_1,
                "Case-1 derivative bound violated: {deriv} > {} at (t, t_k) = ({t}, {t_k})",
                -sc.c_1
            );
        }
    }
}
