//! The one-dimensional problem: minimize `∫_{-1}^{1} dx / (1 + u'²)` over
//! q-concave `u : [-1, 1] → [0, M]`.
//!
//! For `0 ≤ q ≤ 1` and `2M ≥ q` the minimizer is a central parabola of
//! curvature `q` on `[-γ*, γ*]` joined to two straight sides reaching zero at
//! `±1`. The kink `γ*` is the unique root in `(0, 1)` of the quartic
//! [`eval_phi`] when `M < 1`, and `γ* = 0` (a tent) when `M ≥ 1`.

use crate::error::{domain, precondition, Result};
use crate::numerics::{find_root, gauss_legendre, integrate, minimize_scalar, Bracket};
use crate::Real;

/// Below this `q` the arctangent term of [`eval_r`] switches to its linear
/// limit.
pub const Q_LINEAR_LIMIT: f64 = 1e-12;

fn in_unit(g: impl Real) -> bool {
    g >= num_traits::zero() && g <= num_traits::one()
}

/// Resistance of the parabola-plus-sides profile with kink at `gamma`:
/// `(2/q) atan(qγ) + 2(1-γ)³ / (M² + (1-γ)²)`, or `2γ + …` when `q = 0`.
pub fn eval_r<T: Real>(gamma: T, m: T, q: T) -> Result<T> {
    if !in_unit(gamma) {
        return Err(domain(format!("gamma = {gamma} outside [0, 1]")));
    }
    if !(m > T::zero()) || q < T::zero() {
        return Err(domain(format!("eval_r needs M > 0 and q >= 0 (M = {m}, q = {q})")));
    }
    let two = T::lit(2.0);
    let s = T::one() - gamma;
    let sides = two * s * s * s / (m * m + s * s);
    let center = if q < T::lit(Q_LINEAR_LIMIT) {
        two * gamma
    } else {
        two / q * (q * gamma).atan()
    };
    Ok(center + sides)
}

/// `M⁴ - M²(1-γ)² - q²γ²(1-γ)⁴ - 3M²q²γ²(1-γ)²`.
///
/// Has the sign of `d/dγ eval_r` and is strictly increasing on `[0, 1]`
/// under the solver preconditions.
pub fn eval_phi<T: Real>(gamma: T, m: T, q: T) -> Result<T> {
    if !in_unit(gamma) {
        return Err(domain(format!("gamma = {gamma} outside [0, 1]")));
    }
    check_problem(m, q).map_err(|e| domain(e.to_string()))?;
    Ok(phi_unchecked(gamma, m, q))
}

fn phi_unchecked<T: Real>(gamma: T, m: T, q: T) -> T {
    let s = T::one() - gamma;
    let (m2, q2, g2, s2) = (m * m, q * q, gamma * gamma, s * s);
    m2 * m2 - m2 * s2 - q2 * g2 * s2 * s2 - T::lit(3.0) * m2 * q2 * g2 * s2
}

fn check_problem<T: Real>(m: T, q: T) -> Result<()> {
    if !(m > T::zero()) || !m.is_finite() {
        return Err(precondition(format!("M > 0 required (M = {m})")));
    }
    if !(q >= T::zero()) {
        return Err(precondition(format!("q >= 0 required (q = {q})")));
    }
    if q > T::one() {
        return Err(precondition(format!(
            "single-shock condition q ≤ 1 violated (q = {q})"
        )));
    }
    if T::lit(2.0) * m < q {
        return Err(precondition(format!(
            "high-profile condition 2M ≥ q violated (2M = {}, q = {q})",
            T::lit(2.0) * m
        )));
    }
    Ok(())
}

/// The optimal 1D profile for given `(M, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile1D<T> {
    m: T,
    q: T,
    gamma_star: T,
}

impl<T: Real> Profile1D<T> {
    /// Rebuilds a profile from stored parameters (e.g. an exported record).
    pub fn from_parts(m: T, q: T, gamma_star: T) -> Result<Self> {
        check_problem(m, q)?;
        if !(gamma_star >= T::zero() && gamma_star < T::one()) {
            return Err(domain(format!("gamma_star = {gamma_star} outside [0, 1)")));
        }
        Ok(Profile1D { m, q, gamma_star })
    }

    pub fn height(&self) -> T {
        self.m
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn gamma_star(&self) -> T {
        self.gamma_star
    }

    /// `u(x)`; errors for `|x| > 1`.
    pub fn eval(&self, x: T) -> Result<T> {
        if x.abs() > T::one() {
            return Err(domain(format!("x = {x} outside [-1, 1]")));
        }
        Ok(self.value(x))
    }

    pub(crate) fn value(&self, x: T) -> T {
        let ax = x.abs().min(T::one());
        let g = self.gamma_star;
        if ax <= g {
            self.q / T::lit(2.0) * (x * x - g * g) + self.m
        } else {
            self.m * (T::one() - ax) / (T::one() - g)
        }
    }

    /// `u'(x)`. At the kinks `±γ*` the central (parabolic) branch is used.
    pub fn derivative(&self, x: T) -> T {
        if x.abs() <= self.gamma_star {
            self.q * x
        } else {
            -x.signum() * self.m / (T::one() - self.gamma_star)
        }
    }

    /// Resistance by adaptive quadrature of `1/(1+u'²)` piece by piece.
    ///
    /// This goes through the profile's derivative, not through
    /// [`eval_r`], so the two can be compared.
    pub fn resistance(&self) -> Result<T> {
        let g = self.gamma_star;
        let tol = T::lit(1e-13).max(T::epsilon() * T::lit(16.0));
        let f = |x: T| {
            let d = self.derivative(x);
            T::one() / (T::one() + d * d)
        };
        let side = integrate(f, g, T::one(), tol)?;
        let center = integrate(f, T::zero(), g, tol)?;
        Ok(T::lit(2.0) * (side + center))
    }

    /// `n` (≥ 2) uniformly spaced abscissae on `[-1, 1]`, with the kinks
    /// `±γ*` inserted, and the profile values there.
    pub fn sample(&self, n: usize) -> (Vec<T>, Vec<T>) {
        let n = n.max(2);
        let mut xs: Vec<T> = (0..n)
            .map(|i| T::lit(-1.0 + 2.0 * i as f64 / (n - 1) as f64))
            .collect();
        if self.gamma_star > T::zero() {
            xs.push(self.gamma_star);
            xs.push(-self.gamma_star);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite abscissae"));
        xs.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * T::lit(4.0));
        let us = xs.iter().map(|&x| self.value(x)).collect();
        (xs, us)
    }
}

/// Solves the 1D problem in closed form.
pub fn solve_1d<T: Real>(m: T, q: T) -> Result<Profile1D<T>> {
    check_problem(m, q)?;
    if m >= T::one() {
        return Ok(Profile1D { m, q, gamma_star: T::zero() });
    }
    // phi(0) = M²(M²-1) < 0 < M⁴ = phi(1)
    let gamma_star = find_root(
        |g| phi_unchecked(g, m, q),
        Bracket::new(T::zero(), T::one())?,
        T::epsilon() * T::lit(4.0),
    )?;
    Ok(Profile1D { m, q, gamma_star })
}

/// Same kink obtained by minimizing [`eval_r`] directly instead of solving
/// `phi = 0`. Used to cross-check [`solve_1d`].
pub fn gamma_by_minimization<T: Real>(m: T, q: T) -> Result<T> {
    check_problem(m, q)?;
    minimize_scalar(
        |g| eval_r(g, m, q).unwrap_or(T::infinity()),
        Bracket::new(T::zero(), T::one())?,
        T::epsilon(),
    )
}

/// Parameters of the reduced line–parabola–line family: sides joining
/// `(-1, α)` to `(a, m)` and `(b, m)` to `(1, β)`, a parabola of curvature
/// `q` on `[a, b]` with value `m` at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFamilyParams<T> {
    pub a: T,
    pub b: T,
    pub m: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> GammaFamilyParams<T> {
    /// Membership in the admissible parameter set for height bound `big_m`.
    pub fn is_admissible(&self, big_m: T) -> bool {
        let eps = T::lit(1e-12);
        let one = T::one();
        let Self { a, b, m, alpha, beta } = *self;
        a >= -one - eps
            && a <= one.min(-one + m) + eps
            && b >= (-one).max(one - m) - eps
            && b <= one + eps
            && a <= b + eps
            && m >= -eps
            && m <= big_m + eps
            && alpha >= -eps
            && alpha <= m + eps
            && beta >= -eps
            && beta <= m + eps
    }
}

fn side_term<T: Real>(len: T, rise: T) -> T {
    let den = len * len + rise * rise;
    if den == T::zero() {
        T::zero()
    } else {
        len * len * len / den
    }
}

/// Closed-form resistance of the line–parabola–line profile.
pub fn oracle_gamma<T: Real>(p: &GammaFamilyParams<T>, big_m: T, q: T) -> Result<T> {
    if !p.is_admissible(big_m) {
        return Err(domain(format!("parameters {p:?} outside the admissible set")));
    }
    if q < T::zero() {
        return Err(domain(format!("q = {q} must be nonnegative")));
    }
    let one = T::one();
    let width = p.b - p.a;
    let middle = if q < T::lit(Q_LINEAR_LIMIT) {
        width
    } else {
        T::lit(2.0) / q * (q / T::lit(2.0) * width).atan()
    };
    Ok(side_term(p.a + one, p.m - p.alpha) + middle + side_term(one - p.b, p.beta - p.m))
}

/// How `resistance_1d` obtains `u'` on each grid interval.
pub enum SlopeMode<'a, T> {
    /// Constant chord slope per interval (exact for piecewise-linear data).
    Chord,
    /// An analytic derivative, integrated with an 8-point Gauss rule on every
    /// interval. The rule never evaluates at the grid nodes, so kinks placed
    /// on nodes are handled exactly.
    Analytic(&'a dyn Fn(T) -> T),
}

/// `∫ dx / (1 + u'²)` of a sampled profile over its grid.
pub fn resistance_1d<T: Real>(xs: &[T], us: &[T], mode: SlopeMode<'_, T>) -> Result<T> {
    if xs.len() < 2 || xs.len() != us.len() {
        return Err(domain(format!(
            "need at least two samples with matching lengths (got {} and {})",
            xs.len(),
            us.len()
        )));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("grid must be strictly increasing"));
    }
    let mut total = T::zero();
    match mode {
        SlopeMode::Chord => {
            for (xw, uw) in xs.windows(2).zip(us.windows(2)) {
                let h = xw[1] - xw[0];
                let s = (uw[1] - uw[0]) / h;
                total = total + h / (T::one() + s * s);
            }
        }
        SlopeMode::Analytic(du) => {
            let rule = gauss_legendre::<T>(8);
            for xw in xs.windows(2) {
                total = total
                    + rule.integrate(
                        |x| {
                            let d = du(x);
                            T::one() / (T::one() + d * d)
                        },
                        xw[0],
                        xw[1],
                    );
            }
        }
    }
    Ok(total)
}
