//! Floating-point representations of `g`: the adjoint representation on the
//! Chevalley basis and, for type A, the standard representation.

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{q, q_to_f64, QMatrix, Q};
use crate::rootdata::{ChevalleyBasis, GVec, LieType};

pub type C64 = nalgebra::Complex<f64>;
pub type CMat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `ad b_k` for every basis vector, as integer-valued real matrices.
pub fn ad_matrices(cb: &ChevalleyBasis) -> Vec<DMatrix<f64>> {
    let n = cb.dim();
    (0..n)
        .map(|k| {
            let mut m = DMatrix::zeros(n, n);
            for j in 0..n {
                for (i, v) in cb.bracket_basis(k, j) {
                    m[(i, j)] = v as f64;
                }
            }
            m
        })
        .collect()
}

/// `Σ_k x_k M_k` for complex coefficients.
pub fn combine(mats: &[DMatrix<f64>], coeffs: &[C64]) -> CMat {
    let n = mats[0].nrows();
    let mut out = CMat::zeros(n, n);
    for (m, &x) in mats.iter().zip(coeffs) {
        if x == C64::zero() {
            continue;
        }
        out += m.map(|v| x * v);
    }
    out
}

/// Exponential of a nilpotent matrix by its finite power series.
pub fn nilpotent_exp(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut out = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=n {
        term = &term * a / C64::from(k as f64);
        if term.iter().all(|x| x.norm() == 0.0) {
            break;
        }
        out += &term;
    }
    out
}

/// General matrix exponential (Padé with scaling and squaring).
pub fn expm(a: &CMat) -> CMat {
    a.clone().exp()
}

/// `[[Re A, −Im A], [Im A, Re A]]`, the action on realified coordinates.
pub fn realify(a: &CMat) -> DMatrix<f64> {
    let (r, cc) = a.shape();
    let mut m = DMatrix::zeros(2 * r, 2 * cc);
    for i in 0..r {
        for j in 0..cc {
            let z = a[(i, j)];
            m[(i, j)] = z.re;
            m[(i, cc + j)] = -z.im;
            m[(r + i, j)] = z.im;
            m[(r + i, cc + j)] = z.re;
        }
    }
    m
}

pub fn gvec_to_complex(v: &GVec) -> Vec<C64> {
    v.re.iter()
        .zip(&v.im)
        .map(|(a, b)| c(q_to_f64(a), q_to_f64(b)))
        .collect()
}

pub fn gvec_realified_f64(v: &GVec) -> Vec<f64> {
    v.realified().iter().map(q_to_f64).collect()
}

pub fn qmatrix_to_f64(m: &QMatrix) -> DMatrix<f64> {
    m.to_f64()
}

/// Numerical rank: singular values above `max(rel · σ_max, abs)`.
pub fn numeric_rank(m: &DMatrix<f64>, rel: f64, abs: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top <= abs {
        return 0;
    }
    let cut = (rel * top).max(abs);
    sv.iter().filter(|&&s| s > cut).count()
}

pub fn numeric_rank_c(m: &CMat, rel: f64, abs: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top <= abs {
        return 0;
    }
    let cut = (rel * top).max(abs);
    sv.iter().filter(|&&s| s > cut).count()
}

/// `σ_max / σ_min` of a square matrix.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let bottom = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    top / bottom
}

/// Exact `exp(c · ad E_β)` for rational `c`, with `E_β` Killing-normalized.
pub fn adjoint_exp_exact(cb: &ChevalleyBasis, root: usize, amount: &Q) -> QMatrix {
    let n = cb.dim();
    let scale = cb.normalization(root) * amount;
    let ad = cb.ad_basis(cb.root_basis_index(root)).scale(&scale);
    let mut out = QMatrix::identity(n);
    let mut term = QMatrix::identity(n);
    for k in 1..=n {
        term = (&term * &ad).scale(&(Q::one() / q(k as i64)));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// Floating `exp(c · ad E_β)` for complex `c`.
pub fn adjoint_exp(cb: &ChevalleyBasis, ads: &[DMatrix<f64>], root: usize, amount: C64) -> CMat {
    let scale = q_to_f64(&cb.normalization(root));
    let m = &ads[cb.root_basis_index(root)];
    nilpotent_exp(&m.map(|v| amount * (v * scale)))
}

/// Standard representation of `sl_{r+1}` on the Chevalley basis, with root
/// vectors built by the same bracket recursion that fixes the structure
/// constants, so that it is a homomorphism for this basis.
pub fn standard_rep(cb: &ChevalleyBasis) -> Result<Vec<DMatrix<f64>>> {
    let rs = cb.root_system();
    if rs.lie_type() != LieType::A {
        return Err(Error::Unsupported(format!(
            "standard representation only implemented for type A, not {}{}",
            rs.lie_type(),
            rs.rank()
        )));
    }
    let r = rs.rank();
    let m = r + 1;
    let unit = |i: usize, j: usize| {
        let mut e = DMatrix::<f64>::zeros(m, m);
        e[(i, j)] = 1.0;
        e
    };
    let mut out = vec![DMatrix::zeros(m, m); cb.dim()];
    for (i, o) in out.iter_mut().enumerate().take(r) {
        *o = unit(i, i) - unit(i + 1, i + 1);
    }
    let np = rs.num_positive();
    for sign in [1i64, -1] {
        for b in 0..np {
            let beta = rs.root(b);
            let j = if sign == 1 { b } else { rs.negate_index(b) };
            let simple = (0..r).find(|&i| {
                let mut g = beta.clone();
                g[i] -= 1;
                rs.root_index(&g).is_some_and(|k| rs.is_positive_index(k))
            });
            let mat = match simple {
                None => {
                    let i = beta.iter().position(|&x| x == 1).unwrap();
                    if sign == 1 {
                        unit(i, i + 1)
                    } else {
                        unit(i + 1, i)
                    }
                }
                Some(i) => {
                    let mut g = beta.clone();
                    g[i] -= 1;
                    let gp = rs.root_index(&g).unwrap();
                    let ai = rs.simple_index(i);
                    let (a, gg) = if sign == 1 {
                        (ai, gp)
                    } else {
                        (rs.negate_index(ai), rs.negate_index(gp))
                    };
                    let x = &out[r + a];
                    let y = &out[r + gg];
                    (x * y - y * x) / cb.n(a, gg) as f64
                }
            };
            out[r + j] = mat;
        }
    }
    Ok(out)
}
