use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    affine_inv, affine_mul, integrate, modular_function, numeric_jacobian, AffineElement, AxbError,
    TestFunction,
};
use crate::measure::Side;

/// Parameters of the ax+b verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxbConfig {
    /// Number of random (f, g) pairs for each integral check.
    pub trials: usize,
    /// Relative tolerance for the integral checks.
    pub tol: f64,
    pub seed: u64,
    pub quad_tol: f64,
    pub jacobian_step: f64,
    pub jacobian_tol: f64,
    pub jacobian_points: usize,
    /// Random triples / pairs for the pure-arithmetic checks.
    pub algebra_samples: usize,
    pub algebra_tol: f64,
    pub smoothness: i32,
}

impl Default for AxbConfig {
    fn default() -> Self {
        AxbConfig {
            trials: 100,
            tol: 1e-6,
            seed: 1,
            quad_tol: super::DEFAULT_QUAD_TOL,
            jacobian_step: 1e-4,
            jacobian_tol: 1e-6,
            jacobian_points: 10,
            algebra_samples: 1000,
            algebra_tol: 1e-12,
            smoothness: 4,
        }
    }
}

/// Worst observed error of one check against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub max_error: f64,
    pub threshold: f64,
    pub samples: usize,
    pub passed: bool,
}

impl Criterion {
    fn new(name: &str, max_error: f64, threshold: f64, samples: usize) -> Self {
        Criterion {
            name: name.to_string(),
            max_error,
            threshold,
            samples,
            passed: max_error <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxbReport {
    pub config: AxbConfig,
    pub criteria: Vec<Criterion>,
    pub passed: bool,
}

impl AxbReport {
    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

fn random_element(rng: &mut ChaCha8Rng) -> AffineElement<f64> {
    AffineElement::new(rng.gen_range(0.1..10.0), rng.gen_range(-10.0..10.0)).expect("a > 0")
}

/// A bump whose support stays inside `a ∈ [0.4, 10]`, and a translation
/// whose pulled-back support stays inside `a ∈ [0.2, 20]`.
fn random_pair(rng: &mut ChaCha8Rng, smoothness: i32) -> (TestFunction<f64>, AffineElement<f64>) {
    let a0: f64 = rng.gen_range(0.6..8.0);
    let ra: f64 = rng.gen_range(0.1..0.6) * a0;
    let b0 = rng.gen_range(-5.0..5.0);
    let rb = rng.gen_range(0.2..2.0);
    let f = TestFunction::new((a0, b0), (ra, rb), smoothness).expect("support inside a > 0");
    let (lo, hi) = (a0 - ra, a0 + ra);
    // pulled back a-range is [lo/α, hi/α]
    let alpha_lo = (hi / 20.0).max(0.25);
    let alpha_hi = (lo / 0.2).min(4.0);
    let alpha = rng.gen_range(alpha_lo..alpha_hi);
    let beta = rng.gen_range(-3.0..3.0);
    (f, AffineElement::new(alpha, beta).expect("α > 0"))
}

/// Runs every ax+b check: group axioms, Jacobians, left invariance and
/// right scaling of the Haar integral, and the modular function.
pub fn verify_suite(config: &AxbConfig) -> Result<AxbReport, AxbError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut criteria = Vec::new();
    let n = config.algebra_samples;

    let (mut assoc, mut inverse) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let (g, h, k) = (
            random_element(&mut rng),
            random_element(&mut rng),
            random_element(&mut rng),
        );
        let l = affine_mul(&affine_mul(&g, &h), &k);
        let r = affine_mul(&g, &affine_mul(&h, &k));
        let scale = l.a().abs().max(l.b().abs()).max(1.0);
        assoc = assoc.max((l.a() - r.a()).abs().max((l.b() - r.b()).abs()) / scale);
        for e in [
            affine_mul(&g, &affine_inv(&g)),
            affine_mul(&affine_inv(&g), &g),
        ] {
            let scale = g.a().abs().max(g.b().abs()).max(1.0);
            inverse = inverse.max((e.a() - 1.0).abs().max(e.b().abs()) / scale);
        }
    }
    criteria.push(Criterion::new(
        "associativity",
        assoc,
        config.algebra_tol,
        n,
    ));
    criteria.push(Criterion::new(
        "inverse_law",
        inverse,
        config.algebra_tol,
        n,
    ));

    let (mut jl, mut jr) = (0.0f64, 0.0f64);
    for _ in 0..config.jacobian_points {
        let g = random_element(&mut rng);
        let p =
            AffineElement::new(rng.gen_range(0.5..5.0), rng.gen_range(-5.0..5.0)).expect("a > 0");
        let h = config.jacobian_step;
        jl = jl.max((numeric_jacobian(Side::Left, &g, &p, h)? - g.a() * g.a()).abs());
        jr = jr.max((numeric_jacobian(Side::Right, &g, &p, h)? - g.a()).abs());
    }
    criteria.push(Criterion::new(
        "jacobian_left",
        jl,
        config.jacobian_tol,
        config.jacobian_points,
    ));
    criteria.push(Criterion::new(
        "jacobian_right",
        jr,
        config.jacobian_tol,
        config.jacobian_points,
    ));

    let (mut left, mut right) = (0.0f64, 0.0f64);
    for _ in 0..config.trials {
        let (f, g) = random_pair(&mut rng, config.smoothness);
        let base = integrate(&f, None, config.quad_tol)?;
        let l = integrate(&f, Some((Side::Left, g)), config.quad_tol)?;
        let r = integrate(&f, Some((Side::Right, g)), config.quad_tol)?;
        left = left.max(rel_err(l, base));
        right = right.max(rel_err(r / base, g.a()));
    }
    criteria.push(Criterion::new(
        "left_invariance",
        left,
        config.tol,
        config.trials,
    ));
    criteria.push(Criterion::new(
        "right_scaling",
        right,
        config.tol,
        config.trials,
    ));

    let (mut formula, mut mult, mut convention) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n {
        let (g, h) = (random_element(&mut rng), random_element(&mut rng));
        formula = formula.max(rel_err(modular_function(&g) * g.a(), 1.0));
        let gh = affine_mul(&g, &h);
        mult = mult.max(rel_err(
            modular_function(&gh),
            modular_function(&g) * modular_function(&h),
        ));
        // right translation scales by α = Δ(g⁻¹)
        convention = convention.max(rel_err(modular_function(&affine_inv(&g)), g.a()));
    }
    criteria.push(Criterion::new(
        "modular_formula",
        formula,
        config.algebra_tol,
        n,
    ));
    criteria.push(Criterion::new(
        "modular_multiplicativity",
        mult,
        config.algebra_tol,
        n,
    ));
    criteria.push(Criterion::new(
        "modular_convention",
        convention,
        config.algebra_tol,
        n,
    ));

    let passed = criteria.iter().all(|c| c.passed);
    Ok(AxbReport {
        config: *config,
        criteria,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_reproducible() {
        let config = AxbConfig {
            trials: 3,
            algebra_samples: 50,
            ..AxbConfig::default()
        };
        let a = verify_suite(&config).unwrap();
        let b = verify_suite(&config).unwrap();
        assert!(a.passed, "{a:#?}");
        assert_eq!(a, b);
        assert_eq!(a.criteria.len(), 9);
    }

    #[test]
    fn random_pairs_respect_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (f, g) = random_pair(&mut rng, 4);
            let ((lo, hi), _) = f.support();
            assert!(lo > 0.2 * g.a() - 1e-12 && hi < 20.0 * g.a() + 1e-12);
        }
    }
}
