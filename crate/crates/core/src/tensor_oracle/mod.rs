//! Numerical oracle for the Poisson bivector `Π_v = ½κ(R)` on `X = G/B`.
//!
//! A point `x = gB` is given by a recipe of group generators and realized
//! through `Ad_g` (and, in type A, the standard representation). Tangent
//! vectors at `x` are trivialized by `T_x X ≅ g/Ad_g(b) ≅ n⁻`,
//! `v ↦ (Ad_{g⁻¹} v)_{n⁻}`; in realified coordinates this is a `2N × 2n`
//! matrix `S_x` and `Π_v(x) = ½ S_x M_R S_xᵀ`. The rank of `Π_v(x)` is the
//! dimension of the symplectic leaf through `x`.

pub mod checks;
pub mod numeric;
pub mod sampler;

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{ChevalleyBasis, GVec};
use crate::vogan_realform::{lagrangian_splitting, r_element, tau_v, CartanMap, VoganDiagram};
use crate::weyl::WeylGroup;
use numeric::{ad_matrices, c, combine, condition_number, expm, gvec_to_complex, gvec_realified_f64,
    nilpotent_exp, numeric_rank, realify, standard_rep, CMat, C64};

pub use checks::{h_invariance_check, sl2_chart_check, HInvarianceReport, Sl2ChartReport};
pub use sampler::{bruhat_cell, sweep_reachable, verify_leaf_formula, LeafCheck, SamplerConfig};

/// Numerical thresholds used throughout the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Singular values below `rank_rel · σ_max` count as zero.
    pub rank_rel: f64,
    /// Absolute floor below which a matrix is zero.
    pub rank_abs: f64,
    /// Relative tolerance of the `Ad_h R = R` check.
    pub invariance_rel: f64,
    /// Relative residual allowed in the chart proportionality fit.
    pub chart_rel: f64,
    /// Largest acceptable condition number of `Ad_g`.
    pub max_condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-8,
            rank_abs: 1e-12,
            invariance_rel: 1e-9,
            chart_rel: 1e-6,
            max_condition: 1e12,
        }
    }
}

/// Everything the oracle needs about one Vogan diagram, precomputed.
pub struct OracleContext {
    pub vogan: VoganDiagram,
    pub group: WeylGroup,
    pub ads: Vec<DMatrix<f64>>,
    /// Standard representation (type A only).
    pub standard: Option<Vec<DMatrix<f64>>>,
    /// Realified `M_R`, `2n × 2n`.
    pub r_matrix: DMatrix<f64>,
    /// Realified `g_v` basis as columns, `2n × n`.
    pub gv_basis: DMatrix<f64>,
    pub gv_vectors: Vec<GVec>,
    pub tau_h: CartanMap,
    pub tol: Tolerances,
}

impl OracleContext {
    pub fn new(v: &VoganDiagram, tol: Tolerances) -> Result<Self> {
        let cb = v.basis();
        let sd = lagrangian_splitting(v)?;
        let r = r_element(&sd);
        let n = cb.dim();
        let cols: Vec<Vec<f64>> = sd.gv.vectors.iter().map(gvec_realified_f64).collect();
        let gv_basis = DMatrix::from_fn(2 * n, n, |i, j| cols[j][i]);
        Ok(Self {
            vogan: v.clone(),
            group: WeylGroup::new(cb.root_system()),
            ads: ad_matrices(cb),
            standard: standard_rep(cb).ok(),
            r_matrix: r.matrix.to_f64(),
            gv_basis,
            gv_vectors: sd.gv.vectors,
            tau_h: tau_v(v).1,
            tol,
        })
    }

    pub fn basis(&self) -> &ChevalleyBasis {
        self.vogan.basis()
    }

    pub fn basis_arc(&self) -> Arc<ChevalleyBasis> {
        self.vogan.basis_arc()
    }

    fn dim(&self) -> usize {
        self.basis().dim()
    }

    fn num_positive(&self) -> usize {
        self.basis().root_system().num_positive()
    }
}

/// A group generator in a flag-point recipe.
#[derive(Clone, Debug, Serialize)]
pub enum Generator {
    /// `exp(c · E_β)` for the Killing-normalized root vector of root index `β`.
    Root { root: usize, re: f64, im: f64 },
    /// Representative `ẇ = ṡ_{i_1} ⋯ ṡ_{i_k}` with `ṡ_i = exp(π/2 (e_i − f_i))` (0-based word).
    Weyl(Vec<usize>),
    /// `exp(H)` for `H` with realified coordinates in the basis `(H_{α_i}; iH_{α_i})`.
    Torus(Vec<f64>),
    /// `exp(Y)` for an arbitrary `Y ∈ g` given by complex Chevalley coordinates `(re, im)`.
    Exp { re: Vec<f64>, im: Vec<f64> },
}

/// A point `gB` of the flag variety with `g` realized in the adjoint and
/// (type A) standard representations; inverses are built generator by generator.
#[derive(Clone, Debug)]
pub struct FlagPoint {
    pub recipe: Vec<Generator>,
    pub adjoint: CMat,
    pub adjoint_inv: CMat,
    pub standard: Option<CMat>,
}

fn std_of(ctx: &OracleContext, coeffs: &[C64]) -> Option<CMat> {
    ctx.standard.as_ref().map(|rho| combine(rho, coeffs))
}

impl FlagPoint {
    pub fn basepoint(ctx: &OracleContext) -> Self {
        Self::new(ctx, vec![]).expect("empty recipe")
    }

    pub fn new(ctx: &OracleContext, recipe: Vec<Generator>) -> Result<Self> {
        let cb = ctx.basis();
        let n = cb.dim();
        let r = cb.rank();
        let mut adjoint = CMat::identity(n, n);
        let mut adjoint_inv = CMat::identity(n, n);
        let m = ctx.standard.as_ref().map(|s| s[0].nrows());
        let mut standard = m.map(|m| CMat::identity(m, m));
        for g in &recipe {
            // coefficients of the Lie algebra element being exponentiated
            let mut factors: Vec<(Vec<C64>, bool)> = Vec::new();
            match g {
                Generator::Root { root, re, im } => {
                    if *root >= cb.root_system().num_roots() {
                        return Err(Error::Inconsistent(format!("root index {root} out of range")));
                    }
                    let mut x = vec![C64::new(0.0, 0.0); n];
                    let s = crate::exact::q_to_f64(&cb.normalization(*root));
                    x[cb.root_basis_index(*root)] = c(re * s, im * s);
                    factors.push((x, true));
                }
                Generator::Weyl(word) => {
                    let rs = cb.root_system();
                    for &i in word {
                        if i >= r {
                            return Err(Error::InvalidWord(format!("index {} out of range", i + 1)));
                        }
                        let a = rs.simple_index(i);
                        let mut x = vec![C64::new(0.0, 0.0); n];
                        x[cb.root_basis_index(a)] = c(std::f64::consts::FRAC_PI_2, 0.0);
                        x[cb.root_basis_index(rs.negate_index(a))] =
                            c(-std::f64::consts::FRAC_PI_2, 0.0);
                        factors.push((x, false));
                    }
                }
                Generator::Torus(h) => {
                    if h.len() != 2 * r {
                        return Err(Error::DimensionMismatch {
                            expected: 2 * r,
                            got: h.len(),
                        });
                    }
                    let mut x = vec![C64::new(0.0, 0.0); n];
                    for i in 0..r {
                        let k = crate::exact::q_to_f64(
                            cb.killing_scale(cb.root_system().simple_index(i)),
                        );
                        x[i] = c(h[i] * k, h[r + i] * k);
                    }
                    factors.push((x, false));
                }
                Generator::Exp { re, im } => {
                    if re.len() != n || im.len() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            got: re.len(),
                        });
                    }
                    factors.push((re.iter().zip(im).map(|(a, b)| c(*a, *b)).collect(), false));
                }
            }
            for (x, nilpotent) in factors {
                let neg: Vec<C64> = x.iter().map(|z| -z).collect();
                let ad = combine(&ctx.ads, &x);
                let ad_neg = combine(&ctx.ads, &neg);
                let (e, einv) = if nilpotent {
                    (nilpotent_exp(&ad), nilpotent_exp(&ad_neg))
                } else {
                    (expm(&ad), expm(&ad_neg))
                };
                adjoint = &adjoint * e;
                adjoint_inv = einv * &adjoint_inv;
                if let (Some(s), Some(m)) = (standard.as_mut(), std_of(ctx, &x)) {
                    *s = &*s * expm(&m);
                }
            }
        }
        let cond = condition_number(&adjoint);
        if !cond.is_finite() || cond > ctx.tol.max_condition {
            return Err(Error::IllConditioned { condition: cond });
        }
        Ok(Self {
            recipe,
            adjoint,
            adjoint_inv,
            standard,
        })
    }

    /// `h·x` for `h` given by further generators applied on the left.
    pub fn left_translate(&self, ctx: &OracleContext, mut prefix: Vec<Generator>) -> Result<Self> {
        prefix.extend(self.recipe.iter().cloned());
        Self::new(ctx, prefix)
    }
}

/// Real skew matrix of `Π_v(x)` in the realified `n⁻` trivialization, `2N × 2N`.
#[derive(Clone, Debug)]
pub struct Bivector {
    pub coeffs: DMatrix<f64>,
}

/// `S_x`: realified `v ↦ (Ad_{g⁻¹} v)_{n⁻}`, `2N × 2n`.
pub fn tangent_projection(ctx: &OracleContext, x: &FlagPoint) -> DMatrix<f64> {
    let n = ctx.dim();
    let np = ctx.num_positive();
    let r = ctx.basis().rank();
    let full = realify(&x.adjoint_inv);
    let rows: Vec<usize> = (0..np)
        .map(|b| r + np + b)
        .chain((0..np).map(|b| n + r + np + b))
        .collect();
    DMatrix::from_fn(2 * np, 2 * n, |i, j| full[(rows[i], j)])
}

/// `Π_v(x) = ½ Σ_i p_x(ξ_i) ∧ p_x(y_i)`.
pub fn pi_at_point(ctx: &OracleContext, x: &FlagPoint) -> Result<Bivector> {
    let s = tangent_projection(ctx, x);
    let p = (&s * &ctx.r_matrix * s.transpose()) * 0.5;
    // enforce exact skew-symmetry
    let coeffs = (&p - p.transpose()) * 0.5;
    Ok(Bivector { coeffs })
}

/// Numerical rank of a bivector (even for a genuinely skew matrix).
pub fn bivector_rank(b: &Bivector, tol: &Tolerances) -> usize {
    numeric_rank(&b.coeffs, tol.rank_rel, tol.rank_abs)
}

/// Real codimension of the `G_v`-orbit through `x`: `2N − rank p_x(g_v)`.
pub fn orbit_codim(ctx: &OracleContext, x: &FlagPoint) -> usize {
    let s = tangent_projection(ctx, x);
    let img = &s * &ctx.gv_basis;
    2 * ctx.num_positive() - numeric_rank(&img, ctx.tol.rank_rel, ctx.tol.rank_abs)
}

/// Realified `Ad_g` for a flag point's group element.
pub fn realified_adjoint(x: &FlagPoint) -> DMatrix<f64> {
    realify(&x.adjoint)
}

/// Complex Chevalley coordinates of a real combination of `g_v` basis vectors.
pub fn gv_element(ctx: &OracleContext, coeffs: &[f64]) -> Generator {
    let n = ctx.dim();
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    for (a, v) in coeffs.iter().zip(&ctx.gv_vectors) {
        let z = gvec_to_complex(v);
        for k in 0..n {
            re[k] += a * z[k].re;
            im[k] += a * z[k].im;
        }
    }
    Generator::Exp { re, im }
}
