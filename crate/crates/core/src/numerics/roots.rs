use crate::error::{domain, Error, Result};
use crate::Real;

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_ROOT_MAX_ITER: usize = 200;

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo < hi) {
            return Err(domain(format!(
                "bracket requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Bracket { lo, hi })
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

/// Finds a root of `f` inside `bracket` with Brent's method.
///
/// The returned abscissa is within `tol` of a sign change of `f`. An exact
/// zero at either end of the bracket is returned as is.
pub fn find_root<T, F>(f: F, bracket: Bracket<T>, tol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    find_root_with(f, bracket, tol, DEFAULT_ROOT_MAX_ITER)
}

pub fn find_root_with<T, F>(mut f: F, bracket: Bracket<T>, tol: T, max_iter: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let zero = T::zero();
    let two = T::lit(2.0);
    let half = T::lit(0.5);

    let mut a = bracket.lo;
    let mut b = bracket.hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(domain("function is NaN at a bracket end"));
    }
    if fa == zero {
        return Ok(a);
    }
    if fb == zero {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: bracket.lo.to_f64_lossy(),
            hi: bracket.hi.to_f64_lossy(),
            f_lo: fa.to_f64_lossy(),
            f_hi: fb.to_f64_lossy(),
        });
    }

    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
        if (fb > zero && fc > zero) || (fb < zero && fc < zero) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == zero {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > zero {
                q = -q;
            }
            p = p.abs();
            let min1 = T::lit(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + tol1 * xm.signum();
        }
        fb = f(b);
        if fb.is_nan() {
            return Err(domain("function returned NaN inside the bracket"));
        }
    }
    Err(Error::NoConvergence {
        what: "brent root finder",
        iterations: max_iter,
    })
}
