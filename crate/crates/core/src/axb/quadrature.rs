//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use thiserror::Error;

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error}")]
pub struct ToleranceNotReached {
    pub estimate: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions<F> {
    pub rel_tol: F,
    pub abs_tol: F,
    pub max_intervals: usize,
    /// Bisections allowed below the initial interval.
    pub max_depth: u32,
}

impl<F: Real> QuadratureOptions<F> {
    pub fn relative(rel_tol: F) -> Self {
        QuadratureOptions {
            rel_tol,
            abs_tol: F::zero(),
            max_intervals: 2000,
            max_depth: 40,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<F> {
    lo: F,
    hi: F,
    value: F,
    error: F,
    depth: u32,
}

fn kronrod15<F: Real>(f: &mut impl FnMut(F) -> F, lo: F, hi: F) -> (F, F) {
    let half = (hi - lo) * F::lit(0.5);
    let center = lo + half;
    let fc = f(center);
    let mut resk = F::lit(WGK[7]) * fc;
    let mut resg = F::lit(WG[3]) * fc;
    for j in 0..7 {
        let dx = half * F::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        resk = resk + F::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            resg = resg + F::lit(WG[j / 2]) * pair;
        }
    }
    let value = resk * half;
    let error = ((resk - resg) * half).abs();
    (value, error)
}

/// Integrates `f` over `[lo, hi]`, bisecting the panel with the largest
/// error estimate until the summed estimate meets
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<F: Real>(
    mut f: impl FnMut(F) -> F,
    lo: F,
    hi: F,
    opts: &QuadratureOptions<F>,
) -> Result<F, ToleranceNotReached> {
    if lo == hi {
        return Ok(F::zero());
    }
    let (value, error) = kronrod15(&mut f, lo, hi);
    let mut panels = vec![Panel {
        lo,
        hi,
        value,
        error,
        depth: 0,
    }];
    loop {
        let (total, err) = panels.iter().fold((F::zero(), F::zero()), |(v, e), p| {
            (v + p.value, e + p.error)
        });
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            // deterministic summation order: by position
            panels.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite endpoints"));
            return Ok(panels.iter().fold(F::zero(), |acc, p| acc + p.value));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).expect("finite error"))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        if panels.len() + 2 > opts.max_intervals || p.depth >= opts.max_depth || !err.is_finite() {
            return Err(ToleranceNotReached {
                estimate: total.to_f64().unwrap_or(f64::NAN),
                error: err.to_f64().unwrap_or(f64::NAN),
            });
        }
        let mid = (p.lo + p.hi) * F::lit(0.5);
        for (lo, hi) in [(p.lo, mid), (mid, p.hi)] {
            let (value, error) = kronrod15(&mut f, lo, hi);
            panels.push(Panel {
                lo,
                hi,
                value,
                error,
                depth: p.depth + 1,
            });
        }
    }
}
