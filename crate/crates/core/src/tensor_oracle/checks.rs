//! Closed-form checks: the `P¹` chart formula for `su(1,1)` and the
//! `H^{τ_v}`-invariance of `R` and `Π_v`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::numeric::realify;
use super::{bivector_rank, pi_at_point, FlagPoint, Generator, OracleContext, Tolerances};
use crate::error::{Error, Result};
use crate::exact::q_to_f64;
use crate::vogan_realform::VoganDiagram;

/// Result of fitting `Π_v` in both affine charts of `P¹` for `su(1,1)`.
#[derive(Clone, Debug, Serialize)]
pub struct Sl2ChartReport {
    pub samples: usize,
    pub seed: u64,
    /// Fitted `λ` in `Π_{xy}(z) = λ (1 − |z|²)` on the chart `[z : 1]`.
    pub lambda_z: f64,
    /// Fitted `μ` in `Π_{xy}(u) = μ (|u|² − 1)|u|²` on the chart `[1 : u]`.
    pub lambda_u: f64,
    pub residual_z: f64,
    pub residual_u: f64,
    /// `|λ − μ| / |λ|`: one global constant must serve both charts.
    pub constant_mismatch: f64,
    pub unit_circle_ranks: Vec<usize>,
    pub basepoint_rank: usize,
    pub rank_at_z0: usize,
    pub rank_at_z2: usize,
    pub tolerances: Tolerances,
    pub pass: bool,
}

/// The su(1,1) Vogan diagram `A₁` with its vertex painted.
pub fn su11() -> VoganDiagram {
    VoganDiagram::parse(r#"{"type":"A","rank":1,"aut":"id","painted":[1]}"#)
        .expect("valid diagram")
}

/// `[z : 1] = exp(z e)·ṡ·B`.
fn z_chart_point(ctx: &OracleContext, z: (f64, f64)) -> Result<FlagPoint> {
    FlagPoint::new(
        ctx,
        vec![
            Generator::Root {
                root: 0,
                re: z.0,
                im: z.1,
            },
            Generator::Weyl(vec![0]),
        ],
    )
}

/// `[1 : u] = exp(u f)·B`.
fn u_chart_point(ctx: &OracleContext, u: (f64, f64)) -> Result<FlagPoint> {
    let k = q_to_f64(&ctx.basis().normalization(1));
    FlagPoint::new(
        ctx,
        vec![Generator::Root {
            root: 1,
            re: u.0 / k,
            im: u.1 / k,
        }],
    )
}

fn pi_xy(ctx: &OracleContext, x: &FlagPoint) -> Result<f64> {
    Ok(pi_at_point(ctx, x)?.coeffs[(0, 1)])
}

/// Least-squares `λ` with residual `‖Π − λ f‖ / ‖Π‖`.
fn fit(observed: &[f64], model: &[f64]) -> (f64, f64) {
    let num: f64 = observed.iter().zip(model).map(|(a, b)| a * b).sum();
    let den: f64 = model.iter().map(|b| b * b).sum();
    let lambda = num / den;
    let res: f64 = observed
        .iter()
        .zip(model)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = observed.iter().map(|a| a * a).sum::<f64>().sqrt();
    (lambda, res / norm)
}

/// Compares `Π_v` on `P¹` with `i(1 − |z|²) ∂_z ∧ ∂_z̄` (chart `[z:1]`) and
/// `i(|u|² − 1)|u|² ∂_u ∧ ∂_ū` (chart `[1:u]`), each up to one real constant.
pub fn sl2_chart_check(samples: usize, seed: u64, tol: Tolerances) -> Result<Sl2ChartReport> {
    let ctx = OracleContext::new(&su11(), tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let r: f64 = rng.gen_range(0.0..3.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (r * phi.cos(), r * phi.sin())
    };
    let (mut obs_z, mut mod_z, mut obs_u, mut mod_u) = (vec![], vec![], vec![], vec![]);
    for _ in 0..samples {
        let z = draw(&mut rng);
        let m2 = z.0 * z.0 + z.1 * z.1;
        obs_z.push(pi_xy(&ctx, &z_chart_point(&ctx, z)?)?);
        mod_z.push(1.0 - m2);
        let u = draw(&mut rng);
        let n2 = u.0 * u.0 + u.1 * u.1;
        obs_u.push(pi_xy(&ctx, &u_chart_point(&ctx, u)?)?);
        mod_u.push((n2 - 1.0) * n2);
    }
    let (lambda_z, residual_z) = fit(&obs_z, &mod_z);
    let (lambda_u, residual_u) = fit(&obs_u, &mod_u);
    let constant_mismatch = (lambda_z - lambda_u).abs() / lambda_z.abs();

    let rank_at = |x: FlagPoint| -> Result<usize> { Ok(bivector_rank(&pi_at_point(&ctx, &x)?, &tol)) };
    let unit_circle_ranks = (0..8)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 8.0;
            rank_at(z_chart_point(&ctx, (t.cos(), t.sin()))?)
        })
        .collect::<Result<Vec<_>>>()?;
    let basepoint_rank = rank_at(u_chart_point(&ctx, (0.0, 0.0))?)?;
    let rank_at_z0 = rank_at(z_chart_point(&ctx, (0.0, 0.0))?)?;
    let rank_at_z2 = rank_at(z_chart_point(&ctx, (2.0, 0.0))?)?;
    let pass = residual_z < tol.chart_rel
        && residual_u < tol.chart_rel
        && constant_mismatch < tol.chart_rel
        && unit_circle_ranks.iter().all(|&r| r == 0)
        && basepoint_rank == 0
        && rank_at_z0 == 2
        && rank_at_z2 == 2;
    Ok(Sl2ChartReport {
        samples,
        seed,
        lambda_z,
        lambda_u,
        residual_z,
        residual_u,
        constant_mismatch,
        unit_circle_ranks,
        basepoint_rank,
        rank_at_z0,
        rank_at_z2,
        tolerances: tol,
        pass,
    })
}

/// Result of the `H^{τ_v}`-invariance check.
#[derive(Clone, Debug, Serialize)]
pub struct HInvarianceReport {
    pub samples: usize,
    pub seed: u64,
    /// `max ‖Ad_h M_R Ad_hᵀ − M_R‖ / ‖M_R‖`.
    pub max_r_deviation: f64,
    /// `max ‖Π_v(h·x) − h_*Π_v(x)‖ / ‖Π_v(x)‖` (absolute if `Π_v(x) = 0`).
    pub max_pushforward_deviation: f64,
    pub ranks: Vec<usize>,
    pub tolerances: Tolerances,
    pub pass: bool,
}

/// `exp(H)` for `H ∈ h^{τ_v}` with the given coordinates on an eigenbasis.
pub fn torus_generator(ctx: &OracleContext, coeffs: &[f64]) -> Generator {
    let basis = ctx.tau_h.eigenspace(1);
    let r2 = ctx.tau_h.matrix.rows();
    let mut h = vec![0.0; r2];
    for (a, v) in coeffs.iter().zip(&basis) {
        for k in 0..r2 {
            h[k] += a * q_to_f64(&v[k]);
        }
    }
    Generator::Torus(h)
}

/// Checks `Ad_h R = R` and `Π_v(h·x) = h_*Π_v(x)` for `h = exp(H)`, `H ∈ h^{τ_v}`.
///
/// In the `n⁻` trivialization `h_*` is the identity, so the second check is a
/// plain matrix comparison.
pub fn h_invariance_check(
    ctx: &OracleContext,
    x: &FlagPoint,
    samples: usize,
    seed: u64,
) -> Result<HInvarianceReport> {
    let dim = ctx.tau_h.eigenspace(1).len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = pi_at_point(ctx, x)?;
    let base_norm = base.coeffs.norm();
    let r_norm = ctx.r_matrix.norm();
    let (mut max_r, mut max_pi) = (0.0f64, 0.0f64);
    let mut ranks = vec![bivector_rank(&base, &ctx.tol)];
    for _ in 0..samples {
        let coeffs: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = torus_generator(ctx, &coeffs);
        let h = FlagPoint::new(ctx, vec![g.clone()])?;
        let a = realify(&h.adjoint);
        let moved = &a * &ctx.r_matrix * a.transpose();
        max_r = max_r.max((moved - &ctx.r_matrix).norm() / r_norm);
        let hx = x.left_translate(ctx, vec![g])?;
        let p = pi_at_point(ctx, &hx)?;
        let dev = (&p.coeffs - &base.coeffs).norm() / base_norm.max(1.0);
        max_pi = max_pi.max(dev);
        ranks.push(bivector_rank(&p, &ctx.tol));
    }
    let pass = max_r < ctx.tol.invariance_rel
        && max_pi < ctx.tol.invariance_rel
        && ranks.iter().all(|&r| r == ranks[0]);
    Ok(HInvarianceReport {
        samples,
        seed,
        max_r_deviation: max_r,
        max_pushforward_deviation: max_pi,
        ranks,
        tolerances: ctx.tol,
        pass,
    })
}

/// `Ad_h R` versus `R` for one explicit Cartan element (realified `(H; iH)` coordinates).
pub fn r_deviation(ctx: &OracleContext, h: &[f64]) -> Result<f64> {
    if h.len() != ctx.tau_h.matrix.rows() {
        return Err(Error::DimensionMismatch {
            expected: ctx.tau_h.matrix.rows(),
            got: h.len(),
        });
    }
    let p = FlagPoint::new(ctx, vec![Generator::Torus(h.to_vec())])?;
    let a = realify(&p.adjoint);
    Ok((&a * &ctx.r_matrix * a.transpose() - &ctx.r_matrix).norm() / ctx.r_matrix.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_check_passes() {
        let rep = sl2_chart_check(100, 11, Tolerances::default()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn su11_invariance_examples() {
        let ctx = OracleContext::new(&su11(), Tolerances::default()).unwrap();
        // h = identity
        assert_eq!(r_deviation(&ctx, &[0.0, 0.0]).unwrap(), 0.0);
        // h = exp(0.3 i H_α)
        assert!(r_deviation(&ctx, &[0.0, 0.3]).unwrap() < 1e-9);
        let x = z_chart_point(&ctx, (0.4, 0.2)).unwrap();
        let rep = h_invariance_check(&ctx, &x, 10, 5).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.ranks.iter().all(|&r| r == 2));
    }
}
