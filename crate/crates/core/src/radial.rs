//! Radial minimizer on the disk `B_R`.
//!
//! The radial resistance is `D_R(u) = ∫_0^R r dr / (1 + u'(r)²)` (the
//! disk integral divided by `2π`). The optimal q-concave radial profile is a
//! parabolic cap `(q/2)(r² - a*²) + M` on `[0, a*]` followed by a decreasing
//! tail solving `-r u' / (1 + u'²)² = η*`, i.e. `u'(r) = h⁻¹(η*/r)` with
//! `h(t) = -t / (1 + t²)²` on `t ≤ -1`.
//!
//! The cap radius comes out of a chain of scalar root problems:
//!
//! 1. `a_M`: the root of `φ(a) = -∫_a^R h⁻¹(a / 4r) dr = M`,
//! 2. `η(a)`: for `a ≥ a_M`, the root of `ψ_a(η) = -∫_a^R h⁻¹(η / r) dr = M`,
//! 3. `a*`: the root of `ζ_q(a) = -∫_a^R h⁻¹(a h(-γ_q(a)) / r) dr = M`.
//!
//! [`RadialChain`] caches `a_M` so that scans over `a` stay cheap.

use crate::error::{domain, precondition, Result};
use crate::numerics::{find_root, gauss_legendre, integrate, Bracket};
use crate::profile1d::SlopeMode;
use crate::Real;

fn quad_tol<T: Real>() -> T {
    T::lit(1e-14).max(T::epsilon() * T::lit(64.0))
}

fn root_tol<T: Real>(scale: T) -> T {
    T::epsilon() * T::lit(8.0) * scale
}

/// `h(t) = -t (1 + t²)⁻²` for `t ≤ -1`. Increasing, with values in `(0, 1/4]`.
pub fn h_fun<T: Real>(t: T) -> Result<T> {
    if !(t <= -T::one()) {
        return Err(domain(format!("h is defined for t <= -1 (t = {t})")));
    }
    Ok(h_raw(t))
}

#[inline]
fn h_raw<T: Real>(t: T) -> T {
    let d = T::one() + t * t;
    -t / (d * d)
}

#[inline]
fn h_prime<T: Real>(t: T) -> T {
    let d = T::one() + t * t;
    (T::lit(3.0) * t * t - T::one()) / (d * d * d)
}

/// Inverse of [`h_fun`]: the unique `t ≤ -1` with `h(t) = s`, `s ∈ (0, 1/4]`.
pub fn h_inv<T: Real>(s: T) -> Result<T> {
    if !(s > T::zero() && s <= T::lit(0.25)) {
        return Err(domain(format!("h⁻¹ is defined on (0, 1/4] (s = {s})")));
    }
    Ok(h_inv_raw(s))
}

// Newton on t with a bisection safeguard. Since h(t) < |t|⁻³, the seed
// -max(1, s^(-1/3)) already satisfies h(seed) <= s and brackets the root
// together with -1.
fn h_inv_raw<T: Real>(s: T) -> T {
    let quarter = T::lit(0.25);
    if s >= quarter {
        return -T::one();
    }
    let mut lo = -(T::one().max(s.powf(T::lit(-1.0 / 3.0))));
    let mut hi = -T::one();
    let mut t = lo;
    for _ in 0..200 {
        let f = h_raw(t) - s;
        if f == T::zero() {
            return t;
        }
        if f > T::zero() {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = t - f / h_prime(t);
        if !(next > lo && next < hi) {
            next = T::lit(0.5) * (lo + hi);
        }
        let converged = (next - t).abs() <= T::lit(2.0) * T::epsilon() * t.abs();
        t = next;
        if converged || hi - lo <= T::lit(2.0) * T::epsilon() * t.abs() {
            break;
        }
    }
    t
}

/// `γ_q(a) = sqrt((3a²q² + 1 + sqrt(9a⁴q⁴ + 10a²q² + 1)) / 2)`, the kink
/// slope magnitude of the optimal profile with cap radius `a`.
pub fn gamma_q<T: Real>(a: T, q: T) -> T {
    let x = a * a * q * q;
    let inner = (T::lit(9.0) * x * x + T::lit(10.0) * x + T::one()).sqrt();
    ((T::lit(3.0) * x + T::one() + inner) / T::lit(2.0)).sqrt()
}

/// Problem data: disk radius `R`, height bound `M`, concavity `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem<T> {
    pub radius: T,
    pub height: T,
    pub q: T,
}

impl<T: Real> RadialProblem<T> {
    pub fn new(radius: T, height: T, q: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(precondition(format!("R > 0 required (R = {radius})")));
        }
        if !(height > T::zero()) || !height.is_finite() {
            return Err(precondition(format!("M > 0 required (M = {height})")));
        }
        if !(q >= T::zero()) {
            return Err(precondition(format!("q >= 0 required (q = {q})")));
        }
        if q * radius > T::one() {
            return Err(precondition(format!(
                "single-shock condition qR ≤ 1 violated (qR = {})",
                q * radius
            )));
        }
        if T::lit(2.0) * height < q * radius * radius {
            return Err(precondition(format!(
                "high-profile condition 2M ≥ qR² violated (2M = {}, qR² = {})",
                T::lit(2.0) * height,
                q * radius * radius
            )));
        }
        Ok(RadialProblem { radius, height, q })
    }
}

/// `-∫_a^R h⁻¹(c / r) dr` for `c ∈ (0, a/4]`.
fn tail_height<T: Real>(a: T, radius: T, c: T) -> Result<T> {
    integrate(|r| -h_inv_raw(c / r), a, radius, quad_tol())
}

/// `φ(a) = -∫_a^R h⁻¹(a / 4r) dr`.
pub fn phi_height<T: Real>(a: T, radius: T) -> Result<T> {
    if !(a > T::zero() && a <= radius) {
        return Err(domain(format!("a = {a} outside (0, R]")));
    }
    tail_height(a, radius, a / T::lit(4.0))
}

/// The smallest admissible cap radius: the unique `a ∈ (0, R)` with
/// `φ(a) = M`.
pub fn compute_a_m<T: Real>(radius: T, height: T) -> Result<T> {
    if !(radius > T::zero() && height > T::zero()) {
        return Err(precondition("R > 0 and M > 0 required"));
    }
    // phi decreases from +inf (a -> 0) to 0 (a = R)
    let mut lo = radius / T::lit(2.0);
    let mut iterations = 0;
    while phi_height(lo, radius)? <= height {
        lo = lo / T::lit(2.0);
        iterations += 1;
        if iterations > 2000 || lo == T::zero() {
            return Err(crate::Error::NoConvergence {
                what: "a_M bracket search",
                iterations,
            });
        }
    }
    find_root(
        |a| phi_height(a, radius).map(|p| p - height).unwrap_or(T::nan()),
        Bracket::new(lo, radius)?,
        root_tol(radius),
    )
}

/// Solves the radial problem's scalar chain for one `(R, M, q)`.
#[derive(Debug, Clone, Copy)]
pub struct RadialChain<T> {
    prob: RadialProblem<T>,
    a_m: T,
}

impl<T: Real> RadialChain<T> {
    pub fn new(prob: RadialProblem<T>) -> Result<Self> {
        let a_m = compute_a_m(prob.radius, prob.height)?;
        Ok(RadialChain { prob, a_m })
    }

    pub fn problem(&self) -> &RadialProblem<T> {
        &self.prob
    }

    pub fn a_m(&self) -> T {
        self.a_m
    }

    fn check_a(&self, a: T) -> Result<()> {
        let slack = T::lit(1e-12) * self.prob.radius;
        if a < self.a_m - slack || a >= self.prob.radius {
            return Err(domain(format!(
                "a = {a} outside [a_M, R) = [{}, {})",
                self.a_m, self.prob.radius
            )));
        }
        Ok(())
    }

    /// `ψ_a(η) = -∫_a^R h⁻¹(η / r) dr`.
    pub fn psi(&self, a: T, eta: T) -> Result<T> {
        if !(eta > T::zero() && eta <= a / T::lit(4.0)) {
            return Err(domain(format!("eta = {eta} outside (0, a/4]")));
        }
        tail_height(a, self.prob.radius, eta)
    }

    /// The Euler–Lagrange constant `η(a) ∈ (0, a/4]` making a tail that
    /// starts at height `M` at `r = a` land on zero at `r = R`.
    pub fn eta(&self, a: T) -> Result<T> {
        self.check_a(a)?;
        let m = self.prob.height;
        let hi = a / T::lit(4.0);
        // psi_a(a/4) = phi(a) <= M for a >= a_M; equality at a_M
        if self.psi(a, hi)? >= m {
            return Ok(hi);
        }
        let mut lo = hi / T::lit(2.0);
        let mut iterations = 0;
        while self.psi(a, lo)? <= m {
            lo = lo / T::lit(2.0);
            iterations += 1;
            if iterations > 2000 || lo == T::zero() {
                return Err(crate::Error::NoConvergence {
                    what: "eta bracket search",
                    iterations,
                });
            }
        }
        find_root(
            |eta| self.psi(a, eta).map(|p| p - m).unwrap_or(T::nan()),
            Bracket::new(lo, hi)?,
            root_tol(hi),
        )
    }

    /// `ζ_q(a) = -∫_a^R h⁻¹(a h(-γ_q(a)) / r) dr` for `a ∈ (0, R]`.
    pub fn zeta(&self, a: T) -> Result<T> {
        zeta_q(a, self.prob.radius, self.prob.q)
    }

    /// The optimal cap radius `a* ∈ [a_M, R)`.
    pub fn a_star(&self) -> Result<T> {
        if self.prob.q < T::lit(crate::profile1d::Q_LINEAR_LIMIT) {
            return Ok(self.a_m);
        }
        let m = self.prob.height;
        let f = |a: T| self.zeta(a).map(|z| z - m).unwrap_or(T::nan());
        if f(self.a_m) <= T::zero() {
            return Ok(self.a_m);
        }
        find_root(f, Bracket::new(self.a_m, self.prob.radius)?, root_tol(self.prob.radius))
    }

    /// Resistance of the candidate with cap radius `a`:
    /// `∫_0^a r/(1+q²r²) dr + ∫_a^R r/(1+h⁻¹(η(a)/r)²) dr`.
    pub fn energy(&self, a: T) -> Result<T> {
        let eta = self.eta(a)?;
        candidate_resistance(&self.prob, a, eta)
    }
}

fn cap_resistance<T: Real>(a: T, q: T) -> T {
    if q < T::lit(crate::profile1d::Q_LINEAR_LIMIT) {
        a * a / T::lit(2.0)
    } else {
        let q2 = q * q;
        (q2 * a * a).ln_1p() / (T::lit(2.0) * q2)
    }
}

fn candidate_resistance<T: Real>(prob: &RadialProblem<T>, a: T, eta: T) -> Result<T> {
    let tail = integrate(
        |r| {
            let d = h_inv_raw(eta / r);
            r / (T::one() + d * d)
        },
        a,
        prob.radius,
        quad_tol(),
    )?;
    Ok(cap_resistance(a, prob.q) + tail)
}

pub fn eta_of_a<T: Real>(a: T, prob: &RadialProblem<T>) -> Result<T> {
    RadialChain::new(*prob)?.eta(a)
}

pub fn zeta_q<T: Real>(a: T, radius: T, q: T) -> Result<T> {
    if !(a > T::zero() && a <= radius) {
        return Err(domain(format!("a = {a} outside (0, R]")));
    }
    let c = a * h_raw(-gamma_q(a, q));
    tail_height(a, radius, c)
}

pub fn compute_a_star<T: Real>(prob: &RadialProblem<T>) -> Result<T> {
    RadialChain::new(*prob)?.a_star()
}

pub fn energy_e<T: Real>(a: T, prob: &RadialProblem<T>) -> Result<T> {
    RadialChain::new(*prob)?.energy(a)
}

/// One sample of the radial minimizer. `du` is the derivative on the
/// interval to the right of `r` (the tail slope at the kink `a*`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample<T> {
    pub r: T,
    pub u: T,
    pub du: T,
}

/// The radial minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution<T> {
    prob: RadialProblem<T>,
    a_m: T,
    a_star: T,
    eta_star: T,
    samples: Vec<RadialSample<T>>,
}

pub const DEFAULT_RADIAL_SAMPLES: usize = 512;

/// Solves the radial problem and samples the minimizer at `n_samples`
/// radii: a uniform grid on the cap and a grid clustered quadratically
/// towards the kink on the tail. Both `a*` and `R` are grid nodes.
pub fn solve_radial<T: Real>(prob: &RadialProblem<T>, n_samples: usize) -> Result<RadialSolution<T>> {
    let chain = RadialChain::new(*prob)?;
    let a_star = chain.a_star()?;
    let eta_star = a_star * h_raw(-gamma_q(a_star, prob.q));
    RadialSolution::from_parts(*prob, chain.a_m(), a_star, eta_star, n_samples)
}

impl<T: Real> RadialSolution<T> {
    /// Rebuilds the minimizer from its characterizing numbers.
    pub fn from_parts(prob: RadialProblem<T>, a_m: T, a_star: T, eta_star: T, n_samples: usize) -> Result<Self> {
        let radius = prob.radius;
        if !(a_star > T::zero() && a_star < radius) {
            return Err(domain(format!("a* = {a_star} outside (0, R)")));
        }
        if !(eta_star > T::zero() && eta_star <= a_star / T::lit(4.0) * (T::one() + T::lit(1e-12))) {
            return Err(domain(format!("eta* = {eta_star} outside (0, a*/4]")));
        }
        let n = n_samples.max(4);
        let n_cap = (n / 4).max(2);
        let n_tail = n - n_cap;

        let mut rs: Vec<T> = (0..n_cap)
            .map(|i| a_star * T::lit(i as f64 / (n_cap - 1) as f64))
            .collect();
        for j in 1..=n_tail {
            let t = T::lit(j as f64 / n_tail as f64);
            rs.push(a_star + (radius - a_star) * t * t);
        }
        rs[n - 1] = radius;

        let mut us = vec![T::zero(); n];
        let slope = |r: T| h_inv_raw(eta_star / r);
        for k in (n_cap..n - 1).rev() {
            let piece = integrate(|s| -slope(s), rs[k], rs[k + 1], quad_tol())?;
            us[k] = us[k + 1] + piece;
        }
        let half_q = prob.q / T::lit(2.0);
        let mut samples = Vec::with_capacity(n);
        for (k, &r) in rs.iter().enumerate() {
            let (u, du) = if k < n_cap - 1 {
                (half_q * (r * r - a_star * a_star) + prob.height, prob.q * r)
            } else if k == n_cap - 1 {
                (prob.height, slope(r))
            } else {
                (us[k], slope(r))
            };
            samples.push(RadialSample { r, u, du });
        }
        Ok(RadialSolution {
            prob,
            a_m,
            a_star,
            eta_star,
            samples,
        })
    }

    pub fn problem(&self) -> &RadialProblem<T> {
        &self.prob
    }

    pub fn a_m(&self) -> T {
        self.a_m
    }

    pub fn a_star(&self) -> T {
        self.a_star
    }

    pub fn eta_star(&self) -> T {
        self.eta_star
    }

    pub fn samples(&self) -> &[RadialSample<T>] {
        &self.samples
    }

    /// `u(r)` for `r ∈ [0, R]` (clamped). Tail values are integrated from
    /// the nearest sample to the right.
    pub fn eval(&self, r: T) -> T {
        let r = r.max(T::zero()).min(self.prob.radius);
        if r <= self.a_star {
            return self.prob.q / T::lit(2.0) * (r * r - self.a_star * self.a_star) + self.prob.height;
        }
        let k = self.samples.partition_point(|s| s.r < r);
        let right = &self.samples[k.min(self.samples.len() - 1)];
        if right.r == r {
            return right.u;
        }
        let eta = self.eta_star;
        right.u
            + integrate(|s| -h_inv_raw(eta / s), r, right.r, quad_tol())
                .unwrap_or(T::nan())
    }

    /// `u'(r)`; the cap branch is used at `r = a*`.
    pub fn derivative(&self, r: T) -> T {
        if r <= self.a_star {
            self.prob.q * r
        } else {
            h_inv_raw(self.eta_star / r.min(self.prob.radius))
        }
    }

    /// Height reached by integrating the tail from `R` down to `a*`. Equal to
    /// `M` when `a*` and `η*` are consistent.
    pub fn tail_height_at_kink(&self) -> Result<T> {
        tail_height(self.a_star, self.prob.radius, self.eta_star)
    }

    /// `D_R(u)` of the minimizer.
    pub fn resistance(&self) -> Result<T> {
        candidate_resistance(&self.prob, self.a_star, self.eta_star)
    }

    /// Resistance over the full disk, `2π D_R(u)`.
    pub fn disk_resistance(&self) -> Result<T> {
        Ok(T::lit(2.0) * T::PI() * self.resistance()?)
    }

    /// `max |-r u'/(1+u'²)² - η*|` over the tail samples.
    pub fn euler_lagrange_residual(&self) -> T {
        self.samples
            .iter()
            .filter(|s| s.r > self.a_star && s.r < self.prob.radius)
            .map(|s| {
                let d = T::one() + s.du * s.du;
                (-s.r * s.du / (d * d) - self.eta_star).abs()
            })
            .fold(T::zero(), T::max)
    }
}

/// `∫ r dr / (1 + u'²)` of a sampled radial profile.
pub fn resistance_radial<T: Real>(rs: &[T], us: &[T], mode: SlopeMode<'_, T>) -> Result<T> {
    if rs.len() < 2 || rs.len() != us.len() {
        return Err(domain(format!(
            "need at least two samples with matching lengths (got {} and {})",
            rs.len(),
            us.len()
        )));
    }
    if rs[0] < T::zero() || rs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("radial grid must start at r >= 0 and be strictly increasing"));
    }
    let half = T::lit(0.5);
    let mut total = T::zero();
    match mode {
        SlopeMode::Chord => {
            for (rw, uw) in rs.windows(2).zip(us.windows(2)) {
                let s = (uw[1] - uw[0]) / (rw[1] - rw[0]);
                total = total + half * (rw[1] * rw[1] - rw[0] * rw[0]) / (T::one() + s * s);
            }
        }
        SlopeMode::Analytic(du) => {
            let rule = gauss_legendre::<T>(8);
            for rw in rs.windows(2) {
                total = total
                    + rule.integrate(
                        |r| {
                            let d = du(r);
                            r / (T::one() + d * d)
                        },
                        rw[0],
                        rw[1],
                    );
            }
        }
    }
    Ok(total)
}
