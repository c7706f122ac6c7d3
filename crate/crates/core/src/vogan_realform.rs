//! Vogan diagrams and the real forms they define.
//!
//! Every involution here is a *signed permutation* of the Chevalley basis,
//! either complex-linear (`γ_d`, `Ad_{t_v}`, `γ_v`) or conjugate-linear
//! (`θ`, `τ_v`). Vectors of `g` are handled in realified coordinates
//! `(Re, Im) ∈ Q^{2n}`, where a conjugate-linear signed permutation `P`
//! acts as `diag(P, −P)`.
//!
//! The compact conjugation is `θ(e_β) = −e_{−β}`, `θ(h) = −h` on the real
//! span of the coroots. On the Killing-normalized vectors this reads
//! `θ(E_α) = −E_{−α}/k_α` for `α > 0`; it is the same Cartan involution up to
//! conjugation by the torus, and it keeps every coefficient rational.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{q, QMatrix, Q};
use crate::rootdata::{build_chevalley_basis, build_root_system, ChevalleyBasis, GVec, LieType};
use crate::weyl::{AutSpec, DiagramAut, WeylElement};

/// A signed permutation of the Chevalley basis, `b_k ↦ sign_k · b_{target_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub target: Vec<usize>,
    pub sign: Vec<i64>,
    /// Whether the map is extended conjugate-linearly.
    pub conjugate: bool,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        Self {
            target: (0..n).collect(),
            sign: vec![1; n],
            conjugate: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut target = vec![0; n];
        let mut sign = vec![0; n];
        for k in 0..n {
            let j = other.target[k];
            target[k] = self.target[j];
            sign[k] = other.sign[k] * self.sign[j];
        }
        Self {
            target,
            sign,
            conjugate: self.conjugate ^ other.conjugate,
        }
    }

    pub fn apply(&self, v: &GVec) -> GVec {
        let n = self.dim();
        let mut out = GVec::zero(n);
        let s_im = if self.conjugate { -1 } else { 1 };
        for k in 0..n {
            let (j, s) = (self.target[k], self.sign[k]);
            out.re[j] = &v.re[k] * q(s);
            out.im[j] = &v.im[k] * q(s * s_im);
        }
        out
    }

    /// Matrix on realified coordinates `(Re, Im)`.
    pub fn realified(&self) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(2 * n, 2 * n);
        let s_im = if self.conjugate { -1 } else { 1 };
        for k in 0..n {
            let (j, s) = (self.target[k], self.sign[k]);
            m[(j, k)] = q(s);
            m[(n + j, n + k)] = q(s * s_im);
        }
        m
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self) == Self::identity(self.dim())
    }
}

/// Exact real-linear map on the realified Cartan, in the ordered basis
/// `(H_{α_1}, …, H_{α_r}, iH_{α_1}, …, iH_{α_r})`.
#[derive(Clone, PartialEq, Eq)]
pub struct CartanMap {
    pub matrix: QMatrix,
}

impl fmt::Debug for CartanMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CartanMap({:?})", self.matrix)
    }
}

impl CartanMap {
    pub fn rank(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn is_involution(&self) -> bool {
        &self.matrix * &self.matrix == QMatrix::identity(self.matrix.rows())
    }

    /// Complex-linear action of a Weyl element, `H_λ ↦ H_{wλ}`.
    pub fn from_weyl(w: &WeylElement) -> Self {
        let m = QMatrix::from_i64_rows(w.matrix());
        Self {
            matrix: QMatrix::block_diag(&m, &m),
        }
    }

    /// `M − λI`, whose kernel is the λ-eigenspace.
    pub fn shifted(&self, lambda: i64) -> QMatrix {
        let n = self.matrix.rows();
        self.matrix.sub(&QMatrix::identity(n).scale(&q(lambda)))
    }

    /// Basis of the λ-eigenspace, `λ = ±1`.
    pub fn eigenspace(&self, lambda: i64) -> Vec<Vec<Q>> {
        self.shifted(lambda).kernel()
    }
}

/// JSON form of a Vogan diagram, e.g. `{"type":"A","rank":2,"aut":"id","painted":[1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoganSpec {
    #[serde(rename = "type")]
    pub lie_type: LieType,
    pub rank: usize,
    pub aut: AutSpec,
    /// 1-based painted vertices.
    #[serde(default)]
    pub painted: Vec<usize>,
}

impl VoganSpec {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("Vogan diagram JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

/// Vogan diagram: diagram involution `d` and painted `d`-fixed vertices.
#[derive(Clone)]
pub struct VoganDiagram {
    cb: Arc<ChevalleyBasis>,
    d: DiagramAut,
    /// 0-based, sorted.
    painted: Vec<usize>,
}

impl fmt::Debug for VoganDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec().to_json())
    }
}

impl VoganDiagram {
    /// Validates the diagram; `painted` is 0-based.
    pub fn new(cb: Arc<ChevalleyBasis>, d: DiagramAut, painted: &[usize]) -> Result<Self> {
        let r = cb.rank();
        if d.perm().len() != r {
            return Err(Error::InvalidVogan("automorphism rank mismatch".into()));
        }
        let mut p = painted.to_vec();
        p.sort_unstable();
        p.dedup();
        for &i in &p {
            if i >= r {
                return Err(Error::InvalidVogan(format!(
                    "painted vertex {} out of range 1..={r}",
                    i + 1
                )));
            }
            if !d.is_fixed(i) {
                return Err(Error::InvalidVogan(format!(
                    "painted vertex {} is not fixed by the diagram automorphism",
                    i + 1
                )));
            }
        }
        Ok(Self { cb, d, painted: p })
    }

    pub fn from_spec(spec: &VoganSpec) -> Result<Self> {
        let rs = build_root_system(spec.lie_type, spec.rank)?;
        let d = spec.aut.resolve(&rs)?;
        if spec.painted.contains(&0) {
            return Err(Error::InvalidVogan("painted vertices are 1-based".into()));
        }
        let painted: Vec<usize> = spec.painted.iter().map(|i| i - 1).collect();
        let cb = Arc::new(build_chevalley_basis(&rs));
        Self::new(cb, d, &painted)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_spec(&VoganSpec::parse(s)?)
    }

    pub fn spec(&self) -> VoganSpec {
        let rs = self.cb.root_system();
        let aut = if self.d.is_identity() {
            AutSpec::Named("id".into())
        } else {
            AutSpec::Perm(self.d.perm().iter().map(|i| i + 1).collect())
        };
        VoganSpec {
            lie_type: rs.lie_type(),
            rank: rs.rank(),
            aut,
            painted: self.painted.iter().map(|i| i + 1).collect(),
        }
    }

    pub fn basis(&self) -> &ChevalleyBasis {
        &self.cb
    }

    pub fn basis_arc(&self) -> Arc<ChevalleyBasis> {
        Arc::clone(&self.cb)
    }

    pub fn aut(&self) -> &DiagramAut {
        &self.d
    }

    pub fn painted(&self) -> &[usize] {
        &self.painted
    }

    /// `ε_β = ∏_{i painted} (−1)^{c_i(β)}`: the eigenvalue of `Ad_{t_v}` on `g_β`.
    pub fn epsilon(&self, root: usize) -> i64 {
        let beta = self.cb.root_system().root(root);
        let odd: i64 = self.painted.iter().map(|&i| beta[i]).sum();
        if odd.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Every Vogan diagram on a root system: each diagram involution, each painted
/// subset of its fixed vertices.
pub fn all_vogan_diagrams(lie_type: LieType, rank: usize) -> Result<Vec<VoganDiagram>> {
    let rs = build_root_system(lie_type, rank)?;
    let cb = Arc::new(build_chevalley_basis(&rs));
    let mut auts = vec![DiagramAut::identity(rank)];
    if let Ok(f) = DiagramAut::flip(&rs) {
        auts.push(f);
    }
    let mut out = Vec::new();
    for d in auts {
        let fixed: Vec<usize> = (0..rank).filter(|&i| d.is_fixed(i)).collect();
        for mask in 0u32..(1 << fixed.len()) {
            let painted: Vec<usize> = fixed
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            out.push(VoganDiagram::new(Arc::clone(&cb), d.clone(), &painted)?);
        }
    }
    Ok(out)
}

/// The compact conjugation `θ`: `h_i ↦ −h_i`, `e_β ↦ −e_{−β}`, conjugate-linear.
pub fn theta_on_basis(cb: &ChevalleyBasis) -> SignedPerm {
    let rs = cb.root_system();
    let r = cb.rank();
    let n = cb.dim();
    let mut target: Vec<usize> = (0..n).collect();
    for j in 0..rs.num_roots() {
        target[r + j] = r + rs.negate_index(j);
    }
    SignedPerm {
        target,
        sign: vec![-1; n],
        conjugate: true,
    }
}

/// The automorphism `γ_d` determined by `e_{±α_i} ↦ e_{±α_{d(i)}}`; signs on
/// non-simple root vectors follow from the structure constants.
pub fn gamma_d(cb: &ChevalleyBasis, d: &DiagramAut) -> SignedPerm {
    let rs = cb.root_system();
    let r = cb.rank();
    let n = cb.dim();
    let np = rs.num_positive();
    let mut target: Vec<usize> = (0..n).collect();
    let mut sign = vec![1i64; n];
    for i in 0..r {
        target[i] = d.apply_index(i);
    }
    let mut s = vec![0i64; rs.num_roots()];
    // positive roots come in height order, so predecessors are known
    for b in 0..np {
        let beta = rs.root(b);
        let Some(i) = (0..r).find(|&i| {
            let mut g = beta.clone();
            g[i] -= 1;
            rs.root_index(&g).is_some_and(|k| rs.is_positive_index(k))
        }) else {
            s[b] = 1;
            s[rs.negate_index(b)] = 1;
            continue;
        };
        let mut gamma = beta.clone();
        gamma[i] -= 1;
        let g = rs.root_index(&gamma).unwrap();
        let ai = rs.simple_index(i);
        let dai = rs.simple_index(d.apply_index(i));
        let dg = rs.root_index(&d.apply_coords(&gamma)).unwrap();
        s[b] = s[g] * cb.n(dai, dg) / cb.n(ai, g);
        let (ng, nai, ndai, ndg) = (
            rs.negate_index(g),
            rs.negate_index(ai),
            rs.negate_index(dai),
            rs.negate_index(dg),
        );
        s[rs.negate_index(b)] = s[ng] * cb.n(ndai, ndg) / cb.n(nai, ng);
    }
    for j in 0..rs.num_roots() {
        let image = rs.root_index(&d.apply_coords(&rs.root(j))).unwrap();
        target[r + j] = r + image;
        sign[r + j] = s[j];
    }
    SignedPerm {
        target,
        sign,
        conjugate: false,
    }
}

/// `Ad_{t_v}`: the sign character `ε` on root vectors, identity on `h`.
pub fn ad_t(v: &VoganDiagram) -> SignedPerm {
    let cb = v.basis();
    let r = cb.rank();
    let mut p = SignedPerm::identity(cb.dim());
    for j in 0..cb.root_system().num_roots() {
        p.sign[r + j] = v.epsilon(j);
    }
    p
}

/// `τ_v = Ad_{t_v} ∘ γ_d ∘ θ`.
pub fn tau_v_perm(v: &VoganDiagram) -> SignedPerm {
    let cb = v.basis();
    ad_t(v).compose(&gamma_d(cb, v.aut()).compose(&theta_on_basis(cb)))
}

/// `γ_v = τ_v ∘ θ`.
pub fn gamma_v(v: &VoganDiagram) -> SignedPerm {
    tau_v_perm(v).compose(&theta_on_basis(v.basis()))
}

/// Realified `h`-block of a signed permutation, re-expressed in the basis `(H_{α_i}; iH_{α_i})`.
pub fn cartan_restriction(cb: &ChevalleyBasis, p: &SignedPerm) -> CartanMap {
    let r = cb.rank();
    let n = cb.dim();
    let full = p.realified();
    let idx = |k: usize| if k < r { k } else { n + k - r };
    let block = QMatrix::from_fn(2 * r, 2 * r, |i, j| full[(idx(i), idx(j))].clone());
    // H_{α_i} = k_i h_i
    let mut scale = QMatrix::zeros(2 * r, 2 * r);
    for i in 0..r {
        let k = cb.killing_scale(cb.root_system().simple_index(i)).clone();
        scale[(i, i)] = k.clone();
        scale[(r + i, r + i)] = k;
    }
    let inv = scale.inverse().expect("positive scales");
    CartanMap {
        matrix: &(&inv * &block) * &scale,
    }
}

/// `τ_v` on the Chevalley basis together with its restriction to `h`.
pub fn tau_v(v: &VoganDiagram) -> (SignedPerm, CartanMap) {
    let p = tau_v_perm(v);
    let c = cartan_restriction(v.basis(), &p);
    (p, c)
}

/// Converts a realified Cartan vector in the `(H; iH)` basis to an element of `g`.
pub fn cartan_vector(cb: &ChevalleyBasis, x: &[Q]) -> GVec {
    let r = cb.rank();
    let mut v = GVec::zero(cb.dim());
    for i in 0..r {
        let k = cb.killing_scale(cb.root_system().simple_index(i));
        v.re[i] = &x[i] * k;
        v.im[i] = &x[r + i] * k;
    }
    v
}

/// Basis of `g_v = g^{τ_v}` over the reals.
#[derive(Clone, Debug)]
pub struct RealFormBasis {
    pub vectors: Vec<GVec>,
    /// `ε` on every root, indexed like the root system.
    pub sign_character: Vec<i64>,
}

pub fn real_form_basis(v: &VoganDiagram) -> Result<RealFormBasis> {
    let cb = v.basis();
    let tau = tau_v_perm(v);
    let n = cb.dim();
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let (j, s) = (tau.target[k], tau.sign[k]);
        let mut a = GVec::zero(n);
        if j == k {
            // τ(c b_k) = c̄ s b_k
            if s == 1 {
                a.re[k] = Q::one();
            } else {
                a.im[k] = Q::one();
            }
            vectors.push(a);
        } else if k < j {
            // b_k + s b_j and i(b_k − s b_j)
            a.re[k] = Q::one();
            a.re[j] = q(s);
            vectors.push(a);
            let mut b = GVec::zero(n);
            b.im[k] = Q::one();
            b.im[j] = q(-s);
            vectors.push(b);
        }
    }
    let realified = QMatrix::from_columns(&vectors.iter().map(GVec::realified).collect::<Vec<_>>());
    if vectors.len() != n || realified.rank() != n {
        return Err(Error::Inconsistent(format!(
            "fixed space of τ_v has dimension {} (expected {n})",
            realified.rank()
        )));
    }
    for x in &vectors {
        if tau.apply(x) != *x {
            return Err(Error::Inconsistent("g_v basis vector not fixed by τ_v".into()));
        }
    }
    let sign_character = (0..cb.root_system().num_roots()).map(|j| v.epsilon(j)).collect();
    Ok(RealFormBasis {
        vectors,
        sign_character,
    })
}

/// The Lagrangian splitting `g = g_v + l_d` and a dual basis for `R`.
#[derive(Clone, Debug)]
pub struct SplittingData {
    pub gv: RealFormBasis,
    pub ld: Vec<GVec>,
    /// `(ξ_i, y_i)` with `Im⟪ξ_i, y_j⟫ = δ_ij`, `ξ_i ∈ l_d`, `y_i ∈ g_v`.
    pub dual_pairs: Vec<(GVec, GVec)>,
}

/// Basis of `h^{−τ_v}` as elements of `g`.
pub fn cartan_minus_part(v: &VoganDiagram) -> Vec<GVec> {
    let (_, tau_h) = tau_v(v);
    tau_h
        .eigenspace(-1)
        .iter()
        .map(|x| cartan_vector(v.basis(), x))
        .collect()
}

/// `l_d = h^{−τ_v} + n` with the given `g_v` basis paired against it.
pub fn lagrangian_splitting(v: &VoganDiagram) -> Result<SplittingData> {
    let gv = real_form_basis(v)?;
    splitting_with_basis(v, gv)
}

/// Builds the splitting for an arbitrary real basis of `g_v`.
pub fn splitting_with_basis(v: &VoganDiagram, gv: RealFormBasis) -> Result<SplittingData> {
    let cb = v.basis();
    let rs = cb.root_system();
    let n = cb.dim();
    let mut ld = cartan_minus_part(v);
    for b in 0..rs.num_positive() {
        let k = cb.root_basis_index(b);
        let mut e = GVec::zero(n);
        e.re[k] = Q::one();
        ld.push(e.clone());
        ld.push(e.times_i());
    }
    if ld.len() != n {
        return Err(Error::Inconsistent(format!(
            "l_d has dimension {} (expected {n})",
            ld.len()
        )));
    }
    let pairing = QMatrix::from_fn(n, n, |i, j| cb.im_killing(&ld[i], &gv.vectors[j]));
    let inv = pairing
        .inverse()
        .ok_or_else(|| Error::Inconsistent("singular pairing between l_d and g_v".into()))?;
    let dual_pairs = (0..n)
        .map(|i| {
            let mut xi = GVec::zero(n);
            for (k, l) in ld.iter().enumerate() {
                let c = &inv[(i, k)];
                if !c.is_zero() {
                    xi = xi.add(&l.scale(c));
                }
            }
            (xi, gv.vectors[i].clone())
        })
        .collect();
    Ok(SplittingData { gv, ld, dual_pairs })
}

/// `R = Σ_i ξ_i ∧ y_i` as wedge pairs plus its realified antisymmetric matrix
/// `M_R = Σ_i (ξ_i y_iᵀ − y_i ξ_iᵀ)`.
#[derive(Clone, Debug)]
pub struct RElement {
    pub pairs: Vec<(GVec, GVec)>,
    pub matrix: QMatrix,
}

pub fn r_element(sd: &SplittingData) -> RElement {
    let m = sd.dual_pairs.first().map_or(0, |p| 2 * p.0.dim());
    let mut matrix = QMatrix::zeros(m, m);
    for (xi, y) in &sd.dual_pairs {
        let a = xi.realified();
        let b = y.realified();
        for i in 0..m {
            if a[i].is_zero() && b[i].is_zero() {
                continue;
            }
            for j in 0..m {
                let v = &a[i] * &b[j] - &b[i] * &a[j];
                if !v.is_zero() {
                    let cur = &matrix[(i, j)] + v;
                    matrix[(i, j)] = cur;
                }
            }
        }
    }
    RElement {
        pairs: sd.dual_pairs.clone(),
        matrix,
    }
}

/// Realified Gram matrix `J` of `⟨x, y⟩ = Im⟪x, y⟫`.
pub fn im_killing_gram(cb: &ChevalleyBasis) -> QMatrix {
    let g = cb.killing_gram_full();
    let n = cb.dim();
    let mut j = QMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            if !g[(a, b)].is_zero() {
                j[(a, n + b)] = g[(a, b)].clone();
                j[(n + a, b)] = g[(a, b)].clone();
            }
        }
    }
    j
}

/// Whether the real span of `vectors` is closed under the bracket, checked by
/// a membership predicate for the span.
fn closed_under_bracket(
    cb: &ChevalleyBasis,
    vectors: &[GVec],
    member: impl Fn(&GVec) -> bool,
) -> bool {
    for (a, x) in vectors.iter().enumerate() {
        for y in &vectors[a + 1..] {
            if !member(&cb.bracket_c(x, y)) {
                return false;
            }
        }
    }
    true
}

/// Exact structural checks on a Vogan diagram; returns the first failure.
pub fn check_structure(v: &VoganDiagram) -> Result<()> {
    let cb = v.basis();
    let rs = cb.root_system();
    let r = cb.rank();
    let n = cb.dim();
    let fail = |s: &str| Err(Error::Inconsistent(format!("{v:?}: {s}")));

    let theta = theta_on_basis(cb);
    let gd = gamma_d(cb, v.aut());
    let (tau, tau_h) = tau_v(v);
    if !theta.is_involution() || !tau.is_involution() || !gd.is_involution() {
        return fail("involution property");
    }
    if !tau_h.is_involution() {
        return fail("τ_v|_h is not an involution");
    }
    // γ_d and τ_v are automorphisms of the bracket on basis pairs
    for x in 0..n {
        for y in x + 1..n {
            let bx = GVec::real(cb.basis_vector(x));
            let by = GVec::real(cb.basis_vector(y));
            let br = cb.bracket_c(&bx, &by);
            for p in [&gd, &tau, &theta] {
                if p.apply(&br) != cb.bracket_c(&p.apply(&bx), &p.apply(&by)) {
                    return fail("involution is not a Lie algebra automorphism");
                }
            }
        }
    }
    // γ_v = τθ = θτ, and it preserves Δ⁺
    let gv_map = tau.compose(&theta);
    if gv_map != theta.compose(&tau) || gv_map.conjugate {
        return fail("γ_v ≠ θτ_v or not complex-linear");
    }
    for b in 0..rs.num_positive() {
        let t = gv_map.target[r + b] - r;
        if !rs.is_positive_index(t) {
            return fail("γ_v does not preserve Δ⁺");
        }
    }
    // ε multiplicative
    for a in 0..rs.num_roots() {
        for b in 0..rs.num_roots() {
            if let Some(s) = cb.root_sum(a, b) {
                if v.epsilon(s) != v.epsilon(a) * v.epsilon(b) {
                    return fail("ε is not multiplicative");
                }
            }
        }
    }

    let sd = lagrangian_splitting(v)?;
    let in_gv = |x: &GVec| tau.apply(x) == *x;
    let in_ld = |x: &GVec| {
        // h-part in h^{−τ}, no n⁻ component
        let np = rs.num_positive();
        let neg_free = (0..np).all(|b| {
            let k = cb.root_basis_index(rs.negate_index(b));
            x.re[k].is_zero() && x.im[k].is_zero()
        });
        let mut h = GVec::zero(n);
        for i in 0..r {
            h.re[i] = x.re[i].clone();
            h.im[i] = x.im[i].clone();
        }
        neg_free && tau.apply(&h) == h.scale(&q(-1))
    };
    for (name, basis, member) in [
        ("g_v", &sd.gv.vectors, &in_gv as &dyn Fn(&GVec) -> bool),
        ("l_d", &sd.ld, &in_ld as &dyn Fn(&GVec) -> bool),
    ] {
        let m = QMatrix::from_columns(&basis.iter().map(GVec::realified).collect::<Vec<_>>());
        if basis.len() != n || m.rank() != n {
            return fail(&format!("{name} is not of real dimension {n}"));
        }
        if !basis.iter().all(member) {
            return fail(&format!("{name} basis vector outside {name}"));
        }
        for (a, x) in basis.iter().enumerate() {
            for y in &basis[a..] {
                if !cb.im_killing(x, y).is_zero() {
                    return fail(&format!("{name} is not isotropic"));
                }
            }
        }
        if !closed_under_bracket(cb, basis, member) {
            return fail(&format!("{name} is not a subalgebra"));
        }
    }
    // transversality: g_v ∩ l_d = 0
    let all: Vec<Vec<Q>> = sd
        .gv
        .vectors
        .iter()
        .chain(&sd.ld)
        .map(GVec::realified)
        .collect();
    if QMatrix::from_columns(&all).rank() != 2 * n {
        return fail("g_v + l_d ≠ g");
    }
    // h = h^{τ} ⊕ h^{−τ}
    if tau_h.eigenspace(1).len() + tau_h.eigenspace(-1).len() != 2 * r {
        return fail("Cartan eigenspaces do not span h");
    }
    check_r_identity(v, &sd)
}

/// Eq. identity `⟨R, (x₁+ξ₁)∧(x₂+ξ₂)⟩ = ⟨ξ₂, x₁⟩ − ⟨ξ₁, x₂⟩` on every pair of
/// basis vectors of `g_v ∪ l_d`, with `⟨ξ∧y, a∧b⟩ = ⟨ξ,a⟩⟨y,b⟩ − ⟨ξ,b⟩⟨y,a⟩`.
pub fn check_r_identity(v: &VoganDiagram, sd: &SplittingData) -> Result<()> {
    let cb = v.basis();
    let n = cb.dim();
    let r = r_element(sd);
    let j = im_killing_gram(cb);
    let q_form = &(&j * &r.matrix) * &j;
    // basis: first the g_v vectors (x-part), then the l_d vectors (ξ-part)
    let basis: Vec<Vec<Q>> = sd
        .gv
        .vectors
        .iter()
        .chain(&sd.ld)
        .map(GVec::realified)
        .collect();
    let bm = QMatrix::from_columns(&basis);
    let lhs = &(&bm.transpose() * &q_form) * &bm;
    let pair = |a: &GVec, b: &GVec| cb.im_killing(a, b);
    for a in 0..2 * n {
        for b in 0..2 * n {
            // a = x₁ + ξ₁, b = x₂ + ξ₂ with exactly one summand nonzero each
            let (x1, xi1) = split(a, n, sd);
            let (x2, xi2) = split(b, n, sd);
            let mut rhs = Q::zero();
            if let (Some(xi2), Some(x1)) = (xi2, x1) {
                rhs += pair(xi2, x1);
            }
            if let (Some(xi1), Some(x2)) = (xi1, x2) {
                rhs -= pair(xi1, x2);
            }
            if lhs[(a, b)] != rhs {
                return Err(Error::Inconsistent(format!(
                    "{v:?}: R-identity fails on basis pair ({a}, {b})"
                )));
            }
        }
    }
    Ok(())
}

fn split(a: usize, n: usize, sd: &SplittingData) -> (Option<&GVec>, Option<&GVec>) {
    if a < n {
        (Some(&sd.gv.vectors[a]), None)
    } else {
        (None, Some(&sd.ld[a - n]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;

    fn a1(painted: &[usize]) -> VoganDiagram {
        let rs = build_root_system(LieType::A, 1).unwrap();
        let cb = Arc::new(build_chevalley_basis(&rs));
        VoganDiagram::new(cb, DiagramAut::identity(1), painted).unwrap()
    }

    #[test]
    fn theta_fixes_compact_generators() {
        let v = a1(&[]);
        let cb = v.basis();
        let theta = theta_on_basis(cb);
        let n = cb.dim();
        let e = GVec::real(cb.basis_vector(1));
        let f = GVec::real(cb.basis_vector(2));
        let x = e.sub(&f);
        assert_eq!(theta.apply(&x), x);
        let y = e.add(&f).times_i();
        assert_eq!(theta.apply(&y), y);
        let ih = GVec::real(cb.basis_vector(0)).times_i();
        assert_eq!(theta.apply(&ih), ih);
        assert_eq!(theta.apply(&e), f.scale(&q(-1)));
        assert!(theta.is_involution());
        assert_eq!(theta.realified().rows(), 2 * n);
    }

    #[test]
    fn su11_tau() {
        let v = a1(&[0]);
        let (tau, tau_h) = tau_v(&v);
        let cb = v.basis();
        let e = GVec::real(cb.basis_vector(1));
        let f = GVec::real(cb.basis_vector(2));
        assert_eq!(tau.apply(&e), f);
        // τ(iH_α) = iH_α, τ(H_α) = −H_α
        assert_eq!(tau_h.matrix, QMatrix::from_i64_rows(&[vec![-1, 0], vec![0, 1]]));
        let compact = a1(&[]);
        assert_eq!(tau_v_perm(&compact), theta_on_basis(cb));
    }

    #[test]
    fn su11_real_form() {
        let v = a1(&[0]);
        let gv = real_form_basis(&v).unwrap();
        assert_eq!(gv.vectors.len(), 3);
        assert_eq!(gv.sign_character, vec![-1, -1]);
        let sd = lagrangian_splitting(&v).unwrap();
        // l_d = R·H_α + n for d = id
        assert_eq!(sd.ld[0].re[0], q_frac(1, 4));
        check_structure(&v).unwrap();
    }

    #[test]
    fn structure_a2_all_diagrams() {
        for v in all_vogan_diagrams(LieType::A, 2).unwrap() {
            check_structure(&v).unwrap();
        }
    }

    #[test]
    fn r_independent_of_dual_basis() {
        let v = VoganDiagram::parse(r#"{"type":"A","rank":2,"aut":"id","painted":[1]}"#).unwrap();
        let sd = lagrangian_splitting(&v).unwrap();
        let r1 = r_element(&sd).matrix;
        let mut gv = real_form_basis(&v).unwrap();
        // triangular change of basis
        let old = gv.vectors.clone();
        for (i, x) in gv.vectors.iter_mut().enumerate() {
            *x = x.scale(&q(i as i64 + 2));
            if i > 0 {
                *x = x.add(&old[i - 1].scale(&q_frac(1, 3)));
            }
        }
        let r2 = r_element(&splitting_with_basis(&v, gv).unwrap()).matrix;
        assert_eq!(r1, r2);
    }

    #[test]
    fn invalid_diagrams_rejected() {
        assert!(VoganDiagram::parse(r#"{"type":"A","rank":2,"aut":"flip","painted":[1]}"#).is_err());
        assert!(VoganDiagram::parse(r#"{"type":"A","rank":2,"aut":"id","painted":[3]}"#).is_err());
        assert!(VoganDiagram::parse(r#"{"type":"A","rank":2,"aut":"id","painted":[0]}"#).is_err());
        assert!(VoganDiagram::parse(r#"{"type":"B","rank":2,"aut":"flip"}"#).is_err());
        assert!(VoganDiagram::parse("not json").is_err());
        assert!(VoganDiagram::parse(r#"{"type":"A","rank":3,"aut":[3,2,1],"painted":[2]}"#).is_ok());
    }

    #[test]
    fn inner_class_differs_by_torus() {
        let all = all_vogan_diagrams(LieType::A, 3).unwrap();
        for a in &all {
            for b in &all {
                if a.aut() != b.aut() {
                    continue;
                }
                let c = tau_v_perm(a).compose(&tau_v_perm(b));
                assert!(!c.conjugate);
                assert_eq!(c.target, (0..c.dim()).collect::<Vec<_>>());
                assert!(c.sign[..3].iter().all(|&s| s == 1));
            }
        }
    }
}
