//! Sampling points of `O_z ∩ C_w` and comparing bivector ranks with the
//! leaf formula.
//!
//! Two kinds of basepoints are used, both with a known orbit label `u`:
//!
//! * `u = e`: `x = n·ẇ·B` with `n ∈ N` random. Such points lie in `C_w`; the
//!   ones in an open `G_v`-orbit (numerical orbit codimension 0) have `u = e`.
//! * `u = s_β` for a noncompact imaginary root `β` (`τ_v(e_β) = e_{−β}`): the
//!   Cayley point `c_β = exp(π/4 (e_β − e_{−β}))` satisfies
//!   `c_β⁻¹ τ_v(c_β) = ṡ_β⁻¹`, so `σ = s_β τ_v|_h` at `c_β B`. Samples are
//!   `exp(y)·c_β·B` with `y ∈ g_v` random, which stay in the same orbit; the
//!   Bruhat cell of each sample is identified afterwards.
//!
//! Cell identification uses the standard representation and is therefore
//! limited to type A.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::numeric::{numeric_rank_c, CMat};
use super::{bivector_rank, gv_element, orbit_codim, pi_at_point, FlagPoint, Generator, OracleContext, Tolerances};
use crate::error::{Error, Result};
use crate::leaves::evaluate;
use crate::weyl::{WeylElement, WeylGroup};

/// Sampling measure and budget.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// `g_v` coefficients are uniform in `[−gv_scale, gv_scale]`.
    pub gv_scale: f64,
    /// Real and imaginary parts of `N` coordinates are uniform in `[−n_scale, n_scale]`.
    pub n_scale: f64,
    /// Draws allowed per requested sample before giving up.
    pub attempts_per_sample: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 20240917,
            gv_scale: 0.5,
            n_scale: 1.0,
            attempts_per_sample: 20,
        }
    }
}

/// Outcome of comparing observed ranks with the predicted leaf dimension at one `(u, w)`.
#[derive(Clone, Debug, Serialize)]
pub struct LeafCheck {
    pub vogan: String,
    pub u: Vec<usize>,
    pub w: Vec<usize>,
    pub basepoint: String,
    /// Samples that landed in the requested `(u, w)`.
    pub samples: usize,
    pub attempts: usize,
    /// `u = e` draws that fell outside the open orbits (skipped).
    pub off_orbit: usize,
    /// Cayley draws whose numerical orbit codimension differs from `l(u)`.
    pub orbit_mismatch: usize,
    pub predicted_dim: Option<i64>,
    pub observed_ranks: BTreeMap<usize, usize>,
    pub agree: bool,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// Bruhat cell of `gB` from the ranks of the lower-left submatrices of `g` in
/// the standard representation: for `g ∈ B ẇ B`,
/// `rank g[i.., ..=j] = |{k ≤ j : w(k) ≥ i}|`.
pub fn bruhat_cell(group: &WeylGroup, g: &CMat, tol: &Tolerances) -> Result<WeylElement> {
    let m = g.nrows();
    let scale = g.clone().svd(false, false).singular_values.max();
    let rank = |i: usize, j: usize| -> usize {
        if i >= m {
            return 0;
        }
        let sub = g.view((i, 0), (m - i, j + 1)).into_owned();
        numeric_rank_c(&sub, tol.rank_rel, tol.rank_abs.max(tol.rank_rel * scale))
    };
    let mut perm = vec![0usize; m];
    for j in 0..m {
        let mut wj = None;
        for i in 0..m {
            let prev = if j == 0 { 0 } else { rank(i, j - 1) };
            if rank(i, j) - prev.min(rank(i, j)) == 1 {
                wj = Some(i);
            }
        }
        perm[j] = wj.ok_or_else(|| Error::Inconsistent("cell identification failed".into()))?;
    }
    let mut seen = vec![false; m];
    for &p in &perm {
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::Inconsistent(format!(
                "cell identification produced a non-permutation {perm:?}"
            )));
        }
    }
    // w(α_j) = ε_{π(j)} − ε_{π(j+1)}
    let r = m - 1;
    let eps_diff = |a: usize, b: usize| -> Vec<i64> {
        let mut v = vec![0i64; r];
        let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
        for x in v.iter_mut().take(hi).skip(lo) {
            *x = s;
        }
        v
    };
    let mut mat = vec![vec![0i64; r]; r];
    for j in 0..r {
        let col = eps_diff(perm[j], perm[j + 1]);
        for i in 0..r {
            mat[i][j] = col[i];
        }
    }
    Ok(group.from_matrix(mat))
}

/// Noncompact imaginary positive roots `β` (`d β = β`, `τ_v(e_β) = +e_{−β}`).
pub fn noncompact_imaginary_roots(ctx: &OracleContext) -> Vec<usize> {
    let cb = ctx.basis();
    let rs = cb.root_system();
    let r = cb.rank();
    let tau = crate::vogan_realform::tau_v_perm(&ctx.vogan);
    (0..rs.num_positive())
        .filter(|&b| {
            let k = cb.root_basis_index(b);
            tau.target[k] == r + rs.negate_index(b) && tau.sign[k] == 1
        })
        .collect()
}

/// Reflection `s_β` as a Weyl element.
pub fn root_reflection(group: &WeylGroup, root: usize) -> WeylElement {
    let rs = group.root_system();
    let beta = rs.root(root);
    let bb = rs.inner(&beta, &beta);
    let r = rs.rank();
    let mut mat = vec![vec![0i64; r]; r];
    for j in 0..r {
        let mut aj = vec![0i64; r];
        aj[j] = 1;
        let c = 2 * rs.inner(&aj, &beta) / bb;
        for i in 0..r {
            mat[i][j] = aj[i] - c * beta[i];
        }
    }
    group.from_matrix(mat)
}

fn cayley_generator(ctx: &OracleContext, root: usize) -> Generator {
    let cb = ctx.basis();
    let n = cb.dim();
    let mut re = vec![0.0; n];
    re[cb.root_basis_index(root)] = std::f64::consts::FRAC_PI_4;
    re[cb.root_basis_index(cb.root_system().negate_index(root))] = -std::f64::consts::FRAC_PI_4;
    Generator::Exp {
        re,
        im: vec![0.0; n],
    }
}

fn random_n(ctx: &OracleContext, rng: &mut ChaCha8Rng, scale: f64) -> Vec<Generator> {
    (0..ctx.num_positive())
        .map(|b| Generator::Root {
            root: b,
            re: rng.gen_range(-scale..=scale),
            im: rng.gen_range(-scale..=scale),
        })
        .collect()
}

fn random_gv(ctx: &OracleContext, rng: &mut ChaCha8Rng, scale: f64) -> Generator {
    let coeffs: Vec<f64> = (0..ctx.dim()).map(|_| rng.gen_range(-scale..=scale)).collect();
    gv_element(ctx, &coeffs)
}

struct Observation {
    cell: WeylElement,
    codim: usize,
    rank: usize,
}

fn observe(ctx: &OracleContext, x: &FlagPoint) -> Result<Observation> {
    let g = x
        .standard
        .as_ref()
        .ok_or_else(|| Error::Unsupported("cell identification needs type A".into()))?;
    Ok(Observation {
        cell: bruhat_cell(&ctx.group, g, &ctx.tol)?,
        codim: orbit_codim(ctx, x),
        rank: bivector_rank(&pi_at_point(ctx, x)?, &ctx.tol),
    })
}

fn pair_seed(seed: u64, u: &WeylElement, w: &WeylElement) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &i in u.word().iter().chain(&[usize::MAX]).chain(w.word()) {
        h = h.wrapping_mul(0x100_0000_01b3) ^ (i as u64);
    }
    h
}

fn require_type_a(ctx: &OracleContext) -> Result<()> {
    if ctx.standard.is_none() {
        let rs = ctx.basis().root_system();
        return Err(Error::Unsupported(format!(
            "leaf verification identifies Bruhat cells in type A only, not {}{}",
            rs.lie_type(),
            rs.rank()
        )));
    }
    Ok(())
}

fn predicted(ctx: &OracleContext, u: &WeylElement, w: &WeylElement) -> Result<Option<i64>> {
    let rep = evaluate(&ctx.vogan, &ctx.group, u, w)?;
    Ok(rep.realizable.then_some(rep.leaf_dim))
}

fn finish(
    ctx: &OracleContext,
    u: &WeylElement,
    w: &WeylElement,
    basepoint: String,
    ranks: &[usize],
    attempts: usize,
    off_orbit: usize,
    orbit_mismatch: usize,
    seed: u64,
) -> Result<LeafCheck> {
    let predicted_dim = predicted(ctx, u, w)?;
    let mut observed_ranks = BTreeMap::new();
    for &r in ranks {
        *observed_ranks.entry(r).or_insert(0) += 1;
    }
    let agree = !ranks.is_empty()
        && orbit_mismatch == 0
        && predicted_dim.is_some_and(|p| ranks.iter().all(|&r| r as i64 == p));
    Ok(LeafCheck {
        vogan: ctx.vogan.spec().to_json(),
        u: u.word_1based(),
        w: w.word_1based(),
        basepoint,
        samples: ranks.len(),
        attempts,
        off_orbit,
        orbit_mismatch,
        predicted_dim,
        observed_ranks,
        agree,
        seed,
        tolerances: ctx.tol,
    })
}

/// Samples `samples` points of `O_u ∩ C_w` and compares their bivector rank
/// with `2l(w) − l(u) − δ`.
pub fn verify_leaf_formula(
    ctx: &OracleContext,
    u: &WeylElement,
    w: &WeylElement,
    samples: usize,
    cfg: &SamplerConfig,
) -> Result<LeafCheck> {
    require_type_a(ctx)?;
    let group = &ctx.group;
    if !group.is_twisted_involution(ctx.vogan.aut(), u)? {
        return Err(Error::NotTwistedInvolution(u.word_string()));
    }
    let rep = evaluate(&ctx.vogan, group, u, w)?;
    if !rep.realizable {
        return Err(Error::NotRealizable {
            intersection_dim: rep.intersection_dim,
        });
    }
    let seed = pair_seed(cfg.seed, u, w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = samples * cfg.attempts_per_sample;
    let mut ranks = Vec::new();
    let (mut attempts, mut off_orbit, mut mismatch) = (0, 0, 0);

    let basepoint = if u.is_identity() {
        while ranks.len() < samples && attempts < budget {
            attempts += 1;
            let mut recipe = random_n(ctx, &mut rng, cfg.n_scale);
            recipe.push(Generator::Weyl(w.word().to_vec()));
            let obs = observe(ctx, &FlagPoint::new(ctx, recipe)?)?;
            if obs.cell != *w {
                return Err(Error::Inconsistent(format!(
                    "cell identification: n·ẇ with w = {w} identified as {}",
                    obs.cell
                )));
            }
            if obs.codim != 0 {
                off_orbit += 1;
                continue;
            }
            ranks.push(obs.rank);
        }
        "n·ẇ·B".to_string()
    } else {
        let beta = noncompact_imaginary_roots(ctx)
            .into_iter()
            .find(|&b| root_reflection(group, b) == *u)
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "u = {u} is not reachable by the sampler (not a noncompact imaginary reflection)"
                ))
            })?;
        let cayley = cayley_generator(ctx, beta);
        while ranks.len() < samples && attempts < budget {
            attempts += 1;
            let recipe = vec![random_gv(ctx, &mut rng, cfg.gv_scale), cayley.clone()];
            let obs = observe(ctx, &FlagPoint::new(ctx, recipe)?)?;
            if obs.cell != *w {
                continue;
            }
            if obs.codim != u.length() {
                mismatch += 1;
            }
            ranks.push(obs.rank);
        }
        format!("exp(y)·c_β·B, β = {:?}", group.root_system().root(beta))
    };
    if ranks.is_empty() {
        return Err(Error::NoSamples(format!(
            "u = {u}, w = {w} after {attempts} draws"
        )));
    }
    finish(ctx, u, w, basepoint, &ranks, attempts, off_orbit, mismatch, seed)
}

/// Every `(u, w)` pair the sampler reaches for this Vogan diagram: `u = e`
/// with every `w`, and each Cayley orbit with whichever cells its samples hit.
pub fn sweep_reachable(
    ctx: &OracleContext,
    per_pair: usize,
    cfg: &SamplerConfig,
) -> Result<Vec<LeafCheck>> {
    require_type_a(ctx)?;
    let group = &ctx.group;
    let bound = crate::weyl::max_weyl_from_env();
    let mut out = Vec::new();
    let e = group.identity();
    for w in group.enumerate(bound)? {
        match verify_leaf_formula(ctx, &e, &w, per_pair, cfg) {
            Ok(c) => out.push(c),
            Err(Error::NoSamples(_)) => {}
            Err(err) => return Err(err),
        }
    }
    let mut done = Vec::new();
    for beta in noncompact_imaginary_roots(ctx) {
        let u = root_reflection(group, beta);
        if done.contains(&u) {
            continue;
        }
        done.push(u.clone());
        let seed = pair_seed(cfg.seed, &u, &e) ^ 0x5bd1_e995;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cayley = cayley_generator(ctx, beta);
        let mut buckets: BTreeMap<WeylElement, (Vec<usize>, usize)> = BTreeMap::new();
        let attempts = per_pair * cfg.attempts_per_sample;
        for _ in 0..attempts {
            let recipe = vec![random_gv(ctx, &mut rng, cfg.gv_scale), cayley.clone()];
            let obs = observe(ctx, &FlagPoint::new(ctx, recipe)?)?;
            let entry = buckets.entry(obs.cell).or_default();
            entry.0.push(obs.rank);
            if obs.codim != u.length() {
                entry.1 += 1;
            }
        }
        let label = format!("exp(y)·c_β·B, β = {:?}", group.root_system().root(beta));
        for (w, (ranks, mismatch)) in buckets {
            out.push(finish(ctx, &u, &w, label.clone(), &ranks, attempts, 0, mismatch, seed)?);
        }
    }
    Ok(out)
}
