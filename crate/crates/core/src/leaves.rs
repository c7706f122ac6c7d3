//! Exact symplectic-leaf dimensions.
//!
//! For a Vogan diagram `v`, a `d`-twisted involution `u` (standing for the
//! orbit label `φ(z)`) and a Bruhat cell `C_w`, the leaf dimension is
//! `2l(w) − l(u) − δ` with
//! `δ = dim(h^{(w∗u)τ_v} ∩ h^{−τ_v})`, an exact rational kernel dimension.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::kernel_intersection_dim;
use crate::vogan_realform::{tau_v, CartanMap, VoganDiagram};
use crate::weyl::{WeylElement, WeylGroup};

/// `σ = u ∘ τ_v|_h`; requires `u ∈ I_d`.
pub fn sigma_map(v: &VoganDiagram, group: &WeylGroup, u: &WeylElement) -> Result<CartanMap> {
    if !group.is_twisted_involution(v.aut(), u)? {
        return Err(Error::NotTwistedInvolution(u.word_string()));
    }
    let (_, tau_h) = tau_v(v);
    let sigma = CartanMap::from_weyl(u).compose(&tau_h);
    debug_assert!(sigma.is_involution());
    Ok(sigma)
}

/// `dim(h^{M} ∩ h^{−τ_v})` for an involution `M` of the realified Cartan.
fn fixed_meet_minus_tau(m: &CartanMap, tau_h: &CartanMap) -> usize {
    kernel_intersection_dim(&m.shifted(1), &tau_h.shifted(-1))
}

/// `δ` computed both as `dim(h^{wσw⁻¹} ∩ h^{−τ_v})` and as
/// `dim(h^{(w∗u)τ_v} ∩ h^{−τ_v})`; the two must agree.
pub fn delta_both(
    v: &VoganDiagram,
    group: &WeylGroup,
    u: &WeylElement,
    w: &WeylElement,
) -> Result<(usize, usize)> {
    let sigma = sigma_map(v, group, u)?;
    let (_, tau_h) = tau_v(v);
    let winv = group.inverse(w)?;
    let conj = CartanMap::from_weyl(w)
        .compose(&sigma)
        .compose(&CartanMap::from_weyl(&winv));
    let via_conjugate = fixed_meet_minus_tau(&conj, &tau_h);
    let star = group.star_action(w, u, v.aut())?;
    let via_star = fixed_meet_minus_tau(&CartanMap::from_weyl(&star).compose(&tau_h), &tau_h);
    Ok((via_conjugate, via_star))
}

pub fn delta(v: &VoganDiagram, group: &WeylGroup, u: &WeylElement, w: &WeylElement) -> Result<usize> {
    let (a, b) = delta_both(v, group, u, w)?;
    if a != b {
        return Err(Error::Inconsistent(format!(
            "δ disagrees between the two expressions ({a} vs {b}) at u = {u}, w = {w}"
        )));
    }
    Ok(a)
}

/// Full evaluation of the leaf formula at `(u, w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafReport {
    pub u: WeylElement,
    pub w: WeylElement,
    /// `2l(w)`
    pub cell_dim: i64,
    /// `l(u)`
    pub orbit_codim: i64,
    pub intersection_dim: i64,
    pub delta: i64,
    pub leaf_dim: i64,
    /// `w ∗ u`
    pub star: WeylElement,
    pub open_leaf: bool,
    /// Necessary condition only: `intersection_dim ≥ 0` and `leaf_dim ≥ 0`.
    pub realizable: bool,
}

/// Evaluates the formula without rejecting non-realizable pairs.
pub fn evaluate(
    v: &VoganDiagram,
    group: &WeylGroup,
    u: &WeylElement,
    w: &WeylElement,
) -> Result<LeafReport> {
    let d = delta(v, group, u, w)? as i64;
    let star = group.star_action(w, u, v.aut())?;
    let cell_dim = 2 * w.length() as i64;
    let orbit_codim = u.length() as i64;
    let intersection_dim = cell_dim - orbit_codim;
    let leaf_dim = intersection_dim - d;
    if intersection_dim >= 0 && leaf_dim >= 0 && leaf_dim % 2 != 0 {
        return Err(Error::Inconsistent(format!(
            "odd leaf dimension {leaf_dim} at u = {u}, w = {w}"
        )));
    }
    Ok(LeafReport {
        u: u.clone(),
        w: w.clone(),
        cell_dim,
        orbit_codim,
        intersection_dim,
        delta: d,
        leaf_dim,
        open_leaf: star.is_identity(),
        star,
        realizable: intersection_dim >= 0 && leaf_dim >= 0,
    })
}

/// Leaf dimension for a realizable query.
pub fn leaf_dimension(
    v: &VoganDiagram,
    group: &WeylGroup,
    u: &WeylElement,
    w: &WeylElement,
) -> Result<LeafReport> {
    let rep = evaluate(v, group, u, w)?;
    if !rep.realizable {
        return Err(Error::NotRealizable {
            intersection_dim: rep.intersection_dim,
        });
    }
    Ok(rep)
}

/// One row per `(u, w)` with `u ∈ I_d`, `w ∈ W`; `u` ranges over all of
/// `I_d`, a superset of the orbit labels actually occurring.
#[derive(Clone, Debug, Serialize)]
pub struct LeafTable {
    pub vogan: String,
    pub twisted_involutions: Vec<WeylElement>,
    pub weyl: Vec<WeylElement>,
    pub rows: Vec<LeafReport>,
}

impl LeafTable {
    pub fn get(&self, u: &WeylElement, w: &WeylElement) -> Option<&LeafReport> {
        self.rows.iter().find(|r| &r.u == u && &r.w == w)
    }
}

pub fn leaf_table(v: &VoganDiagram, group: &WeylGroup, bound: usize) -> Result<LeafTable> {
    let weyl = group.enumerate(bound)?;
    let twisted = group.twisted_involutions(v.aut(), bound)?;
    let mut rows = Vec::with_capacity(weyl.len() * twisted.len());
    for u in &twisted {
        for w in &weyl {
            rows.push(evaluate(v, group, u, w)?);
        }
    }
    Ok(LeafTable {
        vogan: v.spec().to_json(),
        twisted_involutions: twisted,
        weyl,
        rows,
    })
}

pub const TABLE_COLUMNS: [&str; 10] = [
    "u_word",
    "w_word",
    "l_u",
    "l_w",
    "star_word",
    "delta",
    "intersection_dim",
    "leaf_dim",
    "open_leaf",
    "realizable",
];

/// CSV with a `#`-prefixed header block of `key: value` lines.
pub fn table_to_csv(table: &LeafTable, header: &[(String, String)]) -> Result<String> {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    wtr.write_record(TABLE_COLUMNS).map_err(io)?;
    for r in &table.rows {
        wtr.write_record([
            r.u.word_string(),
            r.w.word_string(),
            r.orbit_codim.to_string(),
            r.w.length().to_string(),
            r.star.word_string(),
            r.delta.to_string(),
            r.intersection_dim.to_string(),
            r.leaf_dim.to_string(),
            r.open_leaf.to_string(),
            r.realizable.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
    Ok(out)
}

pub fn table_to_json(table: &LeafTable, header: &[(String, String)]) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "u_word": r.u.word_1based(),
                "w_word": r.w.word_1based(),
                "l_u": r.orbit_codim,
                "l_w": r.w.length(),
                "star_word": r.star.word_1based(),
                "delta": r.delta,
                "intersection_dim": r.intersection_dim,
                "leaf_dim": r.leaf_dim,
                "open_leaf": r.open_leaf,
                "realizable": r.realizable,
            })
        })
        .collect();
    let header: serde_json::Map<String, serde_json::Value> = header
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    serde_json::json!({
        "header": header,
        "u_range": "all twisted involutions (superset of the orbit labels)",
        "rows": rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vogan_realform::all_vogan_diagrams;
    use crate::weyl::DEFAULT_MAX_WEYL;

    fn a1(painted: &str) -> (VoganDiagram, WeylGroup) {
        let v = VoganDiagram::parse(&format!(
            r#"{{"type":"A","rank":1,"aut":"id","painted":{painted}}}"#
        ))
        .unwrap();
        let g = WeylGroup::new(v.basis().root_system());
        (v, g)
    }

    #[test]
    fn su11_examples() {
        let (v, g) = a1("[1]");
        let e = g.identity();
        let s = g.simple(0).unwrap();
        let sigma = sigma_map(&v, &g, &s).unwrap();
        // σ(H_α) = H_α
        assert_eq!(sigma.matrix[(0, 0)], crate::exact::q(1));
        assert_eq!(delta(&v, &g, &s, &s).unwrap(), 1);
        assert_eq!(leaf_dimension(&v, &g, &e, &s).unwrap().leaf_dim, 2);
        assert!(leaf_dimension(&v, &g, &e, &s).unwrap().open_leaf);
        assert_eq!(leaf_dimension(&v, &g, &s, &s).unwrap().leaf_dim, 0);
        assert_eq!(
            leaf_dimension(&v, &g, &s, &e),
            Err(Error::NotRealizable { intersection_dim: -1 })
        );
        let t = leaf_table(&v, &g, DEFAULT_MAX_WEYL).unwrap();
        let dims: Vec<(i64, bool)> = t.rows.iter().map(|r| (r.leaf_dim, r.realizable)).collect();
        assert_eq!(dims, vec![(0, true), (2, true), (-2, false), (0, true)]);
    }

    #[test]
    fn su2_bruhat_cells() {
        let (v, g) = a1("[]");
        let e = g.identity();
        let s = g.simple(0).unwrap();
        assert_eq!(leaf_dimension(&v, &g, &e, &s).unwrap().leaf_dim, 2);
        assert_eq!(leaf_dimension(&v, &g, &e, &e).unwrap().leaf_dim, 0);
        assert_eq!(sigma_map(&v, &g, &e).unwrap(), tau_v(&v).1);
    }

    #[test]
    fn non_involution_rejected() {
        let v = VoganDiagram::parse(r#"{"type":"A","rank":2,"aut":"id"}"#).unwrap();
        let g = WeylGroup::new(v.basis().root_system());
        let u = g.parse_word("1,2").unwrap();
        assert!(matches!(sigma_map(&v, &g, &u), Err(Error::NotTwistedInvolution(_))));
    }

    #[test]
    fn delta_depends_only_on_aut() {
        let all = all_vogan_diagrams(crate::rootdata::LieType::A, 2).unwrap();
        let g = WeylGroup::new(all[0].basis().root_system());
        let base = &all[0];
        let weyl = g.enumerate(DEFAULT_MAX_WEYL).unwrap();
        for v in &all[1..] {
            if v.aut() != base.aut() {
                continue;
            }
            for u in g.twisted_involutions(v.aut(), DEFAULT_MAX_WEYL).unwrap() {
                for w in &weyl {
                    assert_eq!(delta(v, &g, &u, w).unwrap(), delta(base, &g, &u, w).unwrap());
                }
            }
        }
    }

    #[test]
    fn csv_emitter_has_header_and_rows() {
        let (v, g) = a1("[1]");
        let t = leaf_table(&v, &g, DEFAULT_MAX_WEYL).unwrap();
        let csv = table_to_csv(&t, &[("seed".into(), "7".into())]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# seed: 7");
        assert_eq!(lines[1], TABLE_COLUMNS.join(","));
        assert_eq!(lines.len(), 2 + 4);
        assert_eq!(lines[5], "1,1,1,1,1,1,1,0,false,true");
        let json = table_to_json(&t, &[]);
        assert_eq!(json["rows"].as_array().unwrap().len(), 4);
    }
}
