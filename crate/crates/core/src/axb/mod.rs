//! The affine group of the line, `(a, b)·(a', b') = (aa', b + ab')` with
//! `a > 0`, as a concrete non-unimodular model.
//!
//! Left Haar measure has density `a⁻²` with respect to `da db`. Left
//! translations preserve it; a right translation by `(α, β)` scales it by
//! `α`, and the modular function is `Δ(a, b) = a⁻¹`. Everything here is
//! numeric and checked against those closed forms.

pub mod quadrature;
mod verify;

use thiserror::Error;

use crate::measure::Side;
use crate::scalar::Real;
use quadrature::{integrate_adaptive, QuadratureOptions, ToleranceNotReached};

pub use verify::{verify_suite, AxbConfig, AxbReport, Criterion};

/// Default relative tolerance for [`integrate`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AxbError {
    #[error("scale component must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("finite-difference stencil leaves the half plane a > 0")]
    StencilOutOfDomain,
    #[error("support [{lo}, {hi}] in the scale direction must lie in a > 0")]
    SupportOutOfDomain { lo: f64, hi: f64 },
    #[error("invalid test function: {0}")]
    InvalidTestFunction(&'static str),
    #[error(transparent)]
    ToleranceNotReached(#[from] ToleranceNotReached),
}

/// A point `(a, b)` with `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineElement<F> {
    a: F,
    b: F,
}

impl<F: Real> AffineElement<F> {
    pub fn new(a: F, b: F) -> Result<Self, AxbError> {
        if a.is_nan() || a <= F::zero() || !a.is_finite() || !b.is_finite() {
            return Err(AxbError::NonPositiveScale(a.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(AffineElement { a, b })
    }

    pub fn identity() -> Self {
        AffineElement {
            a: F::one(),
            b: F::zero(),
        }
    }

    pub fn a(&self) -> F {
        self.a
    }

    pub fn b(&self) -> F {
        self.b
    }

    /// The map `x ↦ a x + b` applied to a real number.
    pub fn act(&self, x: F) -> F {
        self.a * x + self.b
    }
}

pub fn affine_mul<F: Real>(g: &AffineElement<F>, h: &AffineElement<F>) -> AffineElement<F> {
    AffineElement {
        a: g.a * h.a,
        b: g.b + g.a * h.b,
    }
}

pub fn affine_inv<F: Real>(g: &AffineElement<F>) -> AffineElement<F> {
    let inv = g.a.recip();
    AffineElement {
        a: inv,
        b: -g.b * inv,
    }
}

/// Density of left Haar measure, `1 / a²`.
pub fn haar_density<F: Real>(p: &AffineElement<F>) -> F {
    (p.a * p.a).recip()
}

/// `Δ(a, b) = 1 / a`.
pub fn modular_function<F: Real>(g: &AffineElement<F>) -> F {
    g.a.recip()
}

/// `L_g(p) = g·p` or `R_g(p) = p·g`.
pub fn translate<F: Real>(
    side: Side,
    g: &AffineElement<F>,
    p: &AffineElement<F>,
) -> AffineElement<F> {
    match side {
        Side::Left => affine_mul(g, p),
        Side::Right => affine_mul(p, g),
    }
}

/// Coordinates of `T(a, b)` without the positivity check, for stencils.
fn translate_raw<F: Real>(side: Side, g: &AffineElement<F>, a: F, b: F) -> (F, F) {
    match side {
        Side::Left => (g.a * a, g.b + g.a * b),
        Side::Right => (a * g.a, b + a * g.b),
    }
}

/// Central-difference Jacobian determinant of `L_g` or `R_g` at `p`.
pub fn numeric_jacobian<F: Real>(
    side: Side,
    g: &AffineElement<F>,
    p: &AffineElement<F>,
    h: F,
) -> Result<F, AxbError> {
    if h.is_nan() || h <= F::zero() || p.a - h <= F::zero() {
        return Err(AxbError::StencilOutOfDomain);
    }
    let two_h = h + h;
    let (ua_p, va_p) = translate_raw(side, g, p.a + h, p.b);
    let (ua_m, va_m) = translate_raw(side, g, p.a - h, p.b);
    let (ub_p, vb_p) = translate_raw(side, g, p.a, p.b + h);
    let (ub_m, vb_m) = translate_raw(side, g, p.a, p.b - h);
    let du_da = (ua_p - ua_m) / two_h;
    let dv_da = (va_p - va_m) / two_h;
    let du_db = (ub_p - ub_m) / two_h;
    let dv_db = (vb_p - vb_m) / two_h;
    Ok((du_da * dv_db - du_db * dv_da).abs())
}

/// Compactly supported product bump
/// `φ((a − a₀)/r_a) · φ((b − b₀)/r_b)` with `φ(t) = (1 − t²)^k` on `|t| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction<F> {
    center: (F, F),
    radii: (F, F),
    order: i32,
}

impl<F: Real> TestFunction<F> {
    pub fn new(center: (F, F), radii: (F, F), order: i32) -> Result<Self, AxbError> {
        if !(radii.0 > F::zero() && radii.1 > F::zero()) {
            return Err(AxbError::InvalidTestFunction("radii must be positive"));
        }
        if order < 1 {
            return Err(AxbError::InvalidTestFunction(
                "smoothness order must be at least 1",
            ));
        }
        if center.0 - radii.0 <= F::zero() {
            return Err(AxbError::SupportOutOfDomain {
                lo: (center.0 - radii.0).to_f64().unwrap_or(f64::NAN),
                hi: (center.0 + radii.0).to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(TestFunction {
            center,
            radii,
            order,
        })
    }

    pub fn center(&self) -> (F, F) {
        self.center
    }

    pub fn radii(&self) -> (F, F) {
        self.radii
    }

    fn bump(&self, t: F) -> F {
        let s = F::one() - t * t;
        if s <= F::zero() {
            F::zero()
        } else {
            s.powi(self.order)
        }
    }

    pub fn eval(&self, a: F, b: F) -> F {
        self.bump((a - self.center.0) / self.radii.0)
            * self.bump((b - self.center.1) / self.radii.1)
    }

    /// `([a_lo, a_hi], [b_lo, b_hi])`.
    pub fn support(&self) -> ((F, F), (F, F)) {
        let (a0, b0) = self.center;
        let (ra, rb) = self.radii;
        ((a0 - ra, a0 + ra), (b0 - rb, b0 + rb))
    }
}

/// `a`-range of `T⁻¹(support)`. Both translations act on `a` by `a ↦ αa`.
fn pulled_back_a_range<F: Real>(
    f: &TestFunction<F>,
    translate_by: Option<(Side, AffineElement<F>)>,
) -> (F, F) {
    let ((lo, hi), _) = f.support();
    match translate_by {
        Some((_, g)) => (lo / g.a, hi / g.a),
        None => (lo, hi),
    }
}

/// `b`-interval of `T⁻¹(support)` on the line of fixed `a`. The second
/// coordinate of `T(a, b)` is affine in `b` with positive slope.
fn pulled_back_b_window<F: Real>(
    f: &TestFunction<F>,
    translate_by: Option<(Side, AffineElement<F>)>,
    a: F,
) -> (F, F) {
    let (_, (lo, hi)) = f.support();
    match translate_by {
        None => (lo, hi),
        Some((Side::Left, g)) => ((lo - g.b) / g.a, (hi - g.b) / g.a),
        Some((Side::Right, g)) => (lo - a * g.b, hi - a * g.b),
    }
}

/// `∫ f(T(p)) dμ(p)` for left Haar measure `μ`, by nested adaptive
/// quadrature over the exact preimage of the support.
pub fn integrate<F: Real>(
    f: &TestFunction<F>,
    translate_by: Option<(Side, AffineElement<F>)>,
    rel_tol: F,
) -> Result<F, AxbError> {
    let (a_lo, a_hi) = pulled_back_a_range(f, translate_by);
    if a_lo <= F::zero() {
        return Err(AxbError::SupportOutOfDomain {
            lo: a_lo.to_f64().unwrap_or(f64::NAN),
            hi: a_hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let inner_rel = rel_tol * F::lit(1e-2);
    let (b_lo, b_hi) = pulled_back_b_window(f, translate_by, a_lo);
    // inner integrals are bounded by the window width times the largest density
    let inner_scale = (b_hi - b_lo) / (a_lo * a_lo);
    let inner_opts = QuadratureOptions {
        abs_tol: inner_rel * F::lit(1e-6) * inner_scale,
        ..QuadratureOptions::relative(inner_rel)
    };
    let outer_opts = QuadratureOptions::relative(rel_tol);

    let mut failure = None;
    let value = integrate_adaptive(
        |a| {
            let density = (a * a).recip();
            let (lo, hi) = pulled_back_b_window(f, translate_by, a);
            let inner = integrate_adaptive(
                |b| {
                    let (u, v) = match translate_by {
                        Some((side, g)) => translate_raw(side, &g, a, b),
                        None => (a, b),
                    };
                    f.eval(u, v)
                },
                lo,
                hi,
                &inner_opts,
            );
            match inner {
                Ok(v) => v * density,
                Err(e) => {
                    failure.get_or_insert(e);
                    F::zero()
                }
            }
        },
        a_lo,
        a_hi,
        &outer_opts,
    )?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(value),
    }
}
