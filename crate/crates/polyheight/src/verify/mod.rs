//! Numerical verification at desk scale: oscillatory-integral decay along
//! frequency directions, and sublevel-set measures driving the
//! integrability dichotomy.
//!
//! Evaluation dispatches on the phase structure of the given polynomial:
//! idle axes factor into 1D bump transforms, additively separable phases
//! split into products, phases linear in two variables (the structural form
//! shape) reduce to a single outer integral against bump transforms, and
//! genuinely coupled two-variable phases run as an iterated integral whose
//! inner integral is oscillatory-aware. Everything else falls back to
//! budgeted adaptive quadrature and is dropped when the error estimate is
//! out of tolerance, never fabricated.

pub mod fit;
pub mod quad;
pub mod sublevel;

use crate::algebra::Polynomial;
use num_complex::Complex64;
use quad::{
    adapt_gk, bump_fourier_unit, bump_unit, osc_poly_1d, osc_poly_1d_real, Quality,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("quadrature tolerance not met at λ = {lambda}")]
    ToleranceNotMet { lambda: f64 },
    #[error("fewer than {needed} accepted samples")]
    InsufficientSamples { needed: usize },
    #[error("no window of the sample curve passes the linearity test")]
    NoLinearWindow,
    #[error("sampling budget exceeded")]
    BudgetExceeded,
}

/// Tensor bump density: ∏ exp(-1/(1-(xᵢ/rᵢ)²)) on the box |xᵢ| < rᵢ.
#[derive(Clone, Debug)]
pub struct BumpSpec {
    pub radii: [f64; 3],
}

impl BumpSpec {
    pub fn standard() -> Self {
        BumpSpec { radii: [1.0, 1.0, 1.0] }
    }

    pub fn with_radius(r: f64) -> Self {
        assert!(r > 0.0);
        BumpSpec { radii: [r, r, r] }
    }

    pub fn value_axis(&self, axis: usize, x: f64) -> f64 {
        bump_unit(x / self.radii[axis])
    }

    pub fn value(&self, x: &[f64; 3]) -> f64 {
        (0..3).map(|k| self.value_axis(k, x[k])).product()
    }

    /// ∫ b(t) e^{ist} dt along one axis (real by symmetry).
    pub fn fourier_axis(&self, axis: usize, s: f64) -> f64 {
        let r = self.radii[axis];
        r * bump_fourier_unit(r * s)
    }

    pub fn integral_axis(&self, axis: usize) -> f64 {
        self.fourier_axis(axis, 0.0)
    }

    pub fn mass(&self) -> f64 {
        (0..3).map(|k| self.integral_axis(k)).product()
    }
}

/// One evaluation of the oscillatory integral with its error estimate.
#[derive(Clone, Copy, Debug)]
pub struct OscValue {
    pub value: Complex64,
    pub err: f64,
}

struct Terms {
    terms: Vec<(f64, [u32; 3])>,
}

impl Terms {
    fn new(phi: &Polynomial) -> Self {
        Terms { terms: phi.to_f64_terms() }
    }

    fn vars_used(&self) -> Vec<usize> {
        (0..3)
            .filter(|&v| self.terms.iter().any(|(c, e)| *c != 0.0 && e[v] > 0))
            .collect()
    }

    fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(_, e)| e[v]).max().unwrap_or(0)
    }

    /// Phase coefficients in `v`, coefficients of other variables substituted.
    fn univariate_phase(&self, v: usize, scale: f64, fixed: &[(usize, f64)]) -> Vec<f64> {
        let mut coeffs = vec![0.0; self.degree_in(v) as usize + 1];
        'term: for (c, e) in &self.terms {
            let mut value = *c * scale;
            for k in 0..3 {
                if k == v || e[k] == 0 {
                    continue;
                }
                match fixed.iter().find(|(fk, _)| *fk == k) {
                    Some((_, x)) => value *= x.powi(e[k] as i32),
                    None => continue 'term, // variable not fixed: term skipped by caller design
                }
            }
            coeffs[e[v] as usize] += value;
        }
        coeffs
    }

    fn eval(&self, x: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for k in 0..3 {
                if e[k] > 0 {
                    t *= x[k].powi(e[k] as i32);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Evaluates Eq-style J(ξ) = ∫ e^{i(ξ₄φ(x)+ξ·x)} η(x) dx with an error
/// estimate obtained from a fine/coarse pair of runs.
pub fn eval_oscillatory(phi: &Polynomial, bump: &BumpSpec, xi: [f64; 4]) -> OscValue {
    let fine = eval_with_quality(phi, bump, xi, Quality::fine());
    let coarse = eval_with_quality(phi, bump, xi, Quality::coarse());
    match (fine, coarse) {
        (Some(f), Some(c)) => {
            let err = (f - c).norm() + 1e-15 * bump.mass();
            OscValue { value: f, err }
        }
        (Some(f), None) => OscValue { value: f, err: f64::INFINITY },
        _ => OscValue { value: Complex64::new(0.0, 0.0), err: f64::INFINITY },
    }
}

fn eval_with_quality(
    phi: &Polynomial,
    bump: &BumpSpec,
    xi: [f64; 4],
    q: Quality,
) -> Option<Complex64> {
    let terms = Terms::new(phi);
    let used = if xi[3] == 0.0 { vec![] } else { terms.vars_used() };

    // idle axes contribute exact 1D bump transforms
    let mut factor = 1.0;
    for k in 0..3 {
        if !used.contains(&k) {
            factor *= bump.fourier_axis(k, xi[k]);
        }
    }
    let lambda = xi[3];

    let value = match used.len() {
        0 => Complex64::new(factor, 0.0),
        1 => {
            let u = used[0];
            let mut phase = terms.univariate_phase(u, lambda, &[]);
            phase[1] += xi[u];
            let r = bump.radii[u];
            let amp = move |t: f64| bump_unit(t / r);
            let out = osc_poly_1d_real(&amp, &phase, -r, r, q);
            if out.budget_exceeded {
                return None;
            }
            out.value * factor
        }
        2 => {
            let (u, v) = (used[0], used[1]);
            let mixed = terms
                .terms
                .iter()
                .any(|(c, e)| *c != 0.0 && e[u] > 0 && e[v] > 0);
            if !mixed {
                // additively separable: product of two 1D integrals
                let mut pu = vec![0.0; terms.degree_in(u) as usize + 1];
                let mut pv = vec![0.0; terms.degree_in(v) as usize + 1];
                for (c, e) in &terms.terms {
                    if e[u] > 0 {
                        pu[e[u] as usize] += c * lambda;
                    } else if e[v] > 0 {
                        pv[e[v] as usize] += c * lambda;
                    } else {
                        pu[0] += c * lambda;
                    }
                }
                pu[1] += xi[u];
                pv[1] += xi[v];
                let (ru, rv) = (bump.radii[u], bump.radii[v]);
                let amp_u = move |t: f64| bump_unit(t / ru);
                let amp_v = move |t: f64| bump_unit(t / rv);
                let ou = osc_poly_1d_real(&amp_u, &pu, -ru, ru, q);
                let ov = osc_poly_1d_real(&amp_v, &pv, -rv, rv, q);
                if ou.budget_exceeded || ov.budget_exceeded {
                    return None;
                }
                ou.value * ov.value * factor
            } else {
                // iterated: inner over the higher-degree variable
                let (outer, inner) = if terms.degree_in(v) >= terms.degree_in(u) {
                    (u, v)
                } else {
                    (v, u)
                };
                // pure-outer terms go into the outer phase polynomial
                let mut outer_phase = vec![0.0; terms.degree_in(outer) as usize + 2];
                for (c, e) in &terms.terms {
                    if e[inner] == 0 {
                        outer_phase[e[outer] as usize] += c * lambda;
                    }
                }
                outer_phase[1] += xi[outer];
                let cross: Vec<(f64, u32, u32)> = terms
                    .terms
                    .iter()
                    .filter(|(_, e)| e[inner] > 0)
                    .map(|(c, e)| (*c, e[outer], e[inner]))
                    .collect();
                let inner_deg = cross.iter().map(|(_, _, b)| *b).max().unwrap() as usize;
                let (ro, ri) = (bump.radii[outer], bump.radii[inner]);
                let xi_inner = xi[inner];
                let budget_hit = std::cell::Cell::new(false);
                // the inner integral runs with a lighter base panelization;
                // its refinement is driven by phase curvature anyway
                let q_inner = Quality { base_panels: q.base_panels / 3, ..q };
                let amp = |t: f64| -> Complex64 {
                    let outer_weight = bump_unit(t / ro);
                    if outer_weight == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let mut phase = vec![0.0; inner_deg + 1];
                    for (c, a, b) in &cross {
                        phase[*b as usize] += c * lambda * t.powi(*a as i32);
                    }
                    if phase.len() < 2 {
                        phase.resize(2, 0.0);
                    }
                    phase[1] += xi_inner;
                    let amp_i = move |y: f64| bump_unit(y / ri);
                    let out = osc_poly_1d_real(&amp_i, &phase, -ri, ri, q_inner);
                    if out.budget_exceeded {
                        budget_hit.set(true);
                    }
                    out.value * outer_weight
                };
                let out = osc_poly_1d(&amp, &outer_phase, -ro, ro, q);
                if out.budget_exceeded || budget_hit.get() {
                    return None;
                }
                out.value * factor
            }
        }
        3 => {
            // try the form structure: linear in two variables, no cross term
            let pivot = (0..3).find(|&p| {
                let (i, j) = others(p);
                terms
                    .terms
                    .iter()
                    .all(|(_, e)| e[i] + e[j] <= 1)
            });
            match pivot {
                Some(p) => {
                    let (i, j) = others(p);
                    let mut q1 = vec![0.0; terms.degree_in(p) as usize + 2];
                    let mut q2 = vec![0.0; terms.degree_in(p) as usize + 1];
                    let mut q3 = vec![0.0; terms.degree_in(p) as usize + 1];
                    for (c, e) in &terms.terms {
                        if e[i] == 1 {
                            q2[e[p] as usize] += c;
                        } else if e[j] == 1 {
                            q3[e[p] as usize] += c;
                        } else {
                            q1[e[p] as usize] += c;
                        }
                    }
                    let mut phase: Vec<f64> = q1.iter().map(|c| c * lambda).collect();
                    phase[1] += xi[p];
                    let rp = bump.radii[p];
                    let (xii, xij) = (xi[i], xi[j]);
                    let amp = move |t: f64| -> f64 {
                        let s2 = xii + lambda * horner(&q2, t);
                        let s3 = xij + lambda * horner(&q3, t);
                        bump_unit(t / rp) * bump.fourier_axis(i, s2) * bump.fourier_axis(j, s3)
                    };
                    let out = osc_poly_1d_real(&amp, &phase, -rp, rp, q);
                    if out.budget_exceeded {
                        return None;
                    }
                    out.value
                }
                None => return generic_tensor(&terms, bump, xi, q),
            }
        }
        _ => unreachable!(),
    };
    Some(value)
}

fn others(p: usize) -> (usize, usize) {
    match p {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Budgeted adaptive tensor quadrature for unstructured phases; practical
/// only at moderate frequencies, by design.
fn generic_tensor(
    terms: &Terms,
    bump: &BumpSpec,
    xi: [f64; 4],
    q: Quality,
) -> Option<Complex64> {
    let freq = xi.iter().map(|x| x.abs()).sum::<f64>();
    if freq > 6000.0 {
        return None;
    }
    let tol = match q.base_panels {
        n if n >= 48 => 1e-8,
        _ => 3e-7,
    };
    let [r1, r2, r3] = bump.radii;
    let mut f1 = |x1: f64| {
        let mut f2 = |x2: f64| {
            let mut f3 = |x3: f64| {
                let x = [x1, x2, x3];
                let phase = xi[3] * terms.eval(&x) + xi[0] * x1 + xi[1] * x2 + xi[2] * x3;
                bump.value(&x) * Complex64::new(0.0, phase).exp()
            };
            adapt_gk(&mut f3, -r3, r3, tol * 0.1, 600).0
        };
        adapt_gk(&mut f2, -r2, r2, tol * 0.3, 600).0
    };
    let (v, _) = adapt_gk(&mut f1, -r1, r1, tol, 600);
    Some(v)
}

// ---------------------------------------------------------------------------
// Decay scans
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DecaySample {
    pub lambda: f64,
    pub value: Complex64,
    pub err: f64,
}

#[derive(Clone, Debug)]
pub struct DecaySamples {
    pub direction: [f64; 4],
    pub samples: Vec<DecaySample>,
    /// (λ, error estimate) of samples rejected by the 10% error rule.
    pub dropped: Vec<(f64, f64)>,
}

/// Samples |J(λ·direction)| on a geometric grid.
pub fn decay_scan(
    phi: &Polynomial,
    bump: &BumpSpec,
    direction: [f64; 4],
    lambda_min: f64,
    lambda_max: f64,
    points_per_octave: u32,
) -> DecaySamples {
    assert!(lambda_min > 1.0 && lambda_max > lambda_min);
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    assert!(norm > 0.0, "zero direction");
    let dir = direction.map(|d| d / norm);
    let mut samples = Vec::new();
    let mut dropped = Vec::new();
    let step = 2f64.powf(1.0 / points_per_octave as f64);
    let mut lambda = lambda_min;
    while lambda <= lambda_max * (1.0 + 1e-9) {
        let xi = [dir[0] * lambda, dir[1] * lambda, dir[2] * lambda, dir[3] * lambda];
        let ev = eval_oscillatory(phi, bump, xi);
        if ev.err.is_finite() && ev.err <= 0.1 * ev.value.norm() {
            samples.push(DecaySample { lambda, value: ev.value, err: ev.err });
        } else {
            dropped.push((lambda, ev.err));
        }
        lambda *= step;
    }
    DecaySamples { direction: dir, samples, dropped }
}

/// The eight fixed unit directions inside the cone |ξ'| ≤ δ·ξ₄, plus the
/// surface-normal direction, used by the uniformity checks.
pub fn cone_directions(delta: f64) -> Vec<[f64; 4]> {
    let mut dirs = vec![[0.0, 0.0, 0.0, 1.0]];
    let mut rng = crate::rng::SplitMix64::new(0x0511_C0DE);
    while dirs.len() < 9 {
        let a = 2.0 * rng.next_f64() - 1.0;
        let b = 2.0 * rng.next_f64() - 1.0;
        let c = 2.0 * rng.next_f64() - 1.0;
        let n = (a * a + b * b + c * c).sqrt();
        if n < 1e-6 || n > 1.0 {
            continue;
        }
        let scale = delta * rng.next_f64();
        let d = [a / n * scale, b / n * scale, c / n * scale, 1.0];
        dirs.push(d);
    }
    dirs
}

pub use fit::{fit_decay, fit_sublevel, FitResult};
pub use sublevel::{
    integrability_probe, sublevel_measure, ProbeResult, SublevelBudget, SublevelSample,
    SublevelSamples, Verdict,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(s: &str) -> Polynomial {
        Polynomial::parse(s, 3).unwrap()
    }

    #[test]
    fn zero_frequency_gives_bump_mass() {
        let bump = BumpSpec::standard();
        let v = eval_oscillatory(&p3("x1^2"), &bump, [0.0, 0.0, 0.0, 0.0]);
        let mass = bump.mass();
        assert!((v.value.re - mass).abs() < 1e-10);
        assert!(v.value.im.abs() < 1e-12);
    }

    #[test]
    fn fresnel_type_1d_decay() {
        // φ = x1²: |J(λ)| ~ c λ^{-1/2}
        let bump = BumpSpec::standard();
        let phi = p3("x1^2");
        let v1 = eval_oscillatory(&phi, &bump, [0.0, 0.0, 0.0, 4096.0]);
        let v2 = eval_oscillatory(&phi, &bump, [0.0, 0.0, 0.0, 16384.0]);
        let ratio = v1.value.norm() / v2.value.norm();
        assert!((ratio - 2.0).abs() < 0.05, "ratio {ratio}");
        assert!(v1.err < 0.01 * v1.value.norm());
    }

    #[test]
    fn separable_consistency() {
        // φ depending on two variables: 3D evaluation equals the 2D product
        // times the idle-axis bump integral
        let bump = BumpSpec::standard();
        let phi = p3("x1^2+x2^3");
        let lam = 300.0;
        let v = eval_oscillatory(&phi, &bump, [0.0, 0.0, 0.0, lam]);
        let u = eval_oscillatory(&p3("x1^2"), &bump, [0.0, 0.0, 0.0, lam]);
        let w = eval_oscillatory(&p3("x2^3"), &bump, [0.0, 0.0, 0.0, lam]);
        // u and w each carry two idle-axis factors; dividing by the full
        // bump mass leaves exactly one idle factor, as in v
        let prod = u.value * w.value / bump.mass();
        assert!(
            (v.value - prod).norm() < 1e-6 * v.value.norm().max(1e-12),
            "v={:?} prod={:?}",
            v.value,
            prod
        );
    }

    #[test]
    fn iterated_matches_generic_at_moderate_frequency() {
        // x1²x2² via the iterated path vs the generic tensor fallback
        let bump = BumpSpec::standard();
        let phi = p3("x1^2*x2^2");
        let xi = [0.0, 0.0, 0.0, 200.0];
        let fast = eval_oscillatory(&phi, &bump, xi);
        let terms = Terms::new(&phi);
        let slow = generic_tensor(&terms, &bump, xi, Quality::fine()).unwrap();
        assert!(
            (fast.value - slow).norm() < 0.01 * slow.norm(),
            "fast {:?} slow {:?}",
            fast.value,
            slow
        );
    }

    #[test]
    fn form_path_matches_generic() {
        let bump = BumpSpec::standard();
        let phi = p3("x1^3+x1^2*x2+x1^4*x3");
        let xi = [0.0, 0.0, 0.0, 150.0];
        let fast = eval_oscillatory(&phi, &bump, xi);
        let terms = Terms::new(&phi);
        let slow = generic_tensor(&terms, &bump, xi, Quality::fine()).unwrap();
        assert!(
            (fast.value - slow).norm() < 0.02 * slow.norm(),
            "fast {:?} slow {:?}",
            fast.value,
            slow
        );
    }

    #[test]
    fn flat_direction_superpolynomial() {
        // ξ₄ = 0: pure Fourier transform of the bump, decaying beyond any power
        let bump = BumpSpec::standard();
        let phi = p3("x1^2*x2^2");
        let lo = eval_oscillatory(&phi, &bump, [64.0, 0.0, 0.0, 0.0]);
        let hi = eval_oscillatory(&phi, &bump, [4096.0, 0.0, 0.0, 0.0]);
        assert!(hi.value.norm() < 1e-8 * lo.value.norm());
    }

    #[test]
    fn decay_scan_accepts_samples() {
        let bump = BumpSpec::standard();
        let phi = p3("x1^3");
        let scan = decay_scan(&phi, &bump, [0.0, 0.0, 0.0, 1.0], 64.0, 4096.0, 2);
        assert!(scan.samples.len() >= 12, "accepted {}", scan.samples.len());
        assert!(scan.dropped.is_empty());
    }

    #[test]
    fn cone_directions_are_in_cone() {
        let dirs = cone_directions(0.1);
        assert_eq!(dirs.len(), 9);
        assert_eq!(dirs[0], [0.0, 0.0, 0.0, 1.0]);
        for d in &dirs[1..] {
            let xi_prime = d[0].abs() + d[1].abs() + d[2].abs();
            assert!(xi_prime <= 0.1 * d[3] * 1.7321); // l1 vs l2 slack
            assert!(d[3] == 1.0);
        }
    }
}
