use crate::error::{Error, Result};
use crate::Real;

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_QUAD_MAX_DEPTH: usize = 50;
const MAX_INTERVALS: usize = 20_000;

// 15-point Kronrod abscissae; odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    abs_value: T,
    depth: usize,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T, depth: usize) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    let mut abs_value = (fc * T::lit(WGK[7])).abs();
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let wk = T::lit(WGK[j]);
        kronrod = kronrod + wk * (f1 + f2);
        abs_value = abs_value + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let scale = half_len.abs();
    Panel {
        a,
        b,
        value: kronrod * half_len,
        error: ((kronrod - gauss) * half_len).abs(),
        abs_value: abs_value * scale,
        depth,
    }
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]` with an
/// absolute error target `tol`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `max(tol, 50 eps ∫|f|)`.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    integrate_with(f, a, b, tol, DEFAULT_QUAD_MAX_DEPTH)
}

pub fn integrate_with<T, F>(mut f: F, a: T, b: T, tol: T, max_depth: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if a == b {
        return Ok(T::zero());
    }
    if a > b {
        return integrate_with(f, b, a, tol, max_depth).map(|v| -v);
    }
    let mut panels = vec![gk15(&mut f, a, b, 0)];
    let floor = T::lit(50.0) * T::epsilon();
    loop {
        let (mut value, mut error, mut abs_value) = (T::zero(), T::zero(), T::zero());
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            value = value + p.value;
            error = error + p.error;
            abs_value = abs_value + p.abs_value;
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        if !value.is_finite() {
            return Err(crate::error::domain("integrand is not finite"));
        }
        if error <= tol.max(floor * abs_value) {
            return Ok(value);
        }
        let p = panels.swap_remove(worst);
        if p.depth >= max_depth || panels.len() + 2 > MAX_INTERVALS {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                iterations: panels.len() + 1,
            });
        }
        let mid = T::lit(0.5) * (p.a + p.b);
        panels.push(gk15(&mut f, p.a, mid, p.depth + 1));
        panels.push(gk15(&mut f, mid, p.b, p.depth + 1));
    }
}
