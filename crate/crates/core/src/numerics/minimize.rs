use super::Bracket;
use crate::error::{Error, Result};
use crate::Real;

pub const DEFAULT_MIN_MAX_ITER: usize = 500;

/// Minimizes a unimodal `f` on `bracket` with Brent's golden-section /
/// parabolic interpolation scheme. Returns the abscissa of the minimum.
///
/// The search stops once the bracketing interval around the current best
/// point is below `tol + sqrt(eps)|x|`; for a smooth minimum `f` cannot
/// resolve the argmin much better than `sqrt(eps)` anyway.
pub fn minimize_scalar<T, F>(f: F, bracket: Bracket<T>, tol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    minimize_scalar_with(f, bracket, tol, DEFAULT_MIN_MAX_ITER)
}

pub fn minimize_scalar_with<T, F>(mut f: F, bracket: Bracket<T>, tol: T, max_iter: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let golden = T::lit(0.381_966_011_250_105_1);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let zero = T::zero();
    let rel = T::epsilon().sqrt();

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut x = a + golden * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d = zero;
    let mut e = zero;

    for _ in 0..max_iter {
        let xm = half * (a + b);
        let tol1 = rel * x.abs() + tol / T::lit(3.0);
        let tol2 = two * tol1;
        if (x - xm).abs() <= tol2 - half * (b - a) {
            return Ok(x);
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = two * (q - r);
            if q > zero {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if !(p.abs() >= (half * q * etemp).abs() || p <= q * (a - x) || p >= q * (b - x)) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1 * (xm - x).signum();
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x >= xm { a - x } else { b - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1 * d.signum() };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Err(Error::NoConvergence {
        what: "brent minimizer",
        iterations: max_iter,
    })
}
