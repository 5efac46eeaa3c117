//! Brown-Gitler modules `G(n)`, stunted projective homology `H_*(P_k)`, and
//! the maps and extensions built from them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::amodule::{AModule, ModuleMap, ShortExactSeq, TensorLayout};
use crate::error::{BgxError, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::steenrod::{binom2, milnor_basis, milnor_product, AlgebraSpec, MilnorElt, SteenrodElement};

/// Basis of `G(n)` in degree `k`: Milnor elements of degree `n - k` whose
/// `bg_excess` is at most `n`, read as `ι_n·Sq(R)`.
pub fn g_basis(n: u32, k: i32) -> Vec<MilnorElt> {
    if k < 0 || k > n as i32 {
        return Vec::new();
    }
    milnor_basis(n as i32 - k)
        .iter()
        .filter(|m| m.bg_excess() <= n as u64)
        .cloned()
        .collect()
}

fn g_label(n: u32, m: &MilnorElt) -> String {
    if m.is_unit() {
        format!("ι{n}")
    } else {
        format!("ι{n}·{m}")
    }
}

type GCache = RwLock<HashMap<u32, Arc<AModule>>>;

fn g_cache() -> &'static GCache {
    static CACHE: OnceLock<GCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The free unstable module `G(n)` on a class `ι_n` of degree `n`.
pub fn brown_gitler(n: u32) -> AModule {
    brown_gitler_arc(n).as_ref().clone()
}

pub fn brown_gitler_arc(n: u32) -> Arc<AModule> {
    if let Some(g) = g_cache().read().unwrap().get(&n) {
        return Arc::clone(g);
    }
    let bases: Vec<Vec<MilnorElt>> = (0..=n as i32).map(|k| g_basis(n, k)).collect();
    let index: Vec<HashMap<&MilnorElt, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();
    let mut actions = BTreeMap::new();
    for k in 1..=n as i32 {
        for i in 1..=k {
            let t = (k - i) as usize;
            let mut mat = BitMatrix::zeros(bases[k as usize].len(), bases[t].len());
            for (r, b) in bases[k as usize].iter().enumerate() {
                for term in milnor_product(b, &MilnorElt::sq(i as u32)).terms() {
                    if let Some(&c) = index[t].get(term) {
                        mat.set(r, c, !mat.get(r, c));
                    }
                }
            }
            actions.insert((i as u32, k), mat);
        }
    }
    let labels = bases
        .iter()
        .map(|b| b.iter().map(|m| g_label(n, m)).collect())
        .collect();
    let dims = bases.iter().map(|b| b.len()).collect();
    let g = AModule::from_parts(format!("G({n})"), AlgebraSpec::Full, 0, dims, labels, actions)
        .expect("consistent shapes");
    let g = Arc::new(g);
    g_cache().write().unwrap().insert(n, Arc::clone(&g));
    g
}

/// The element `ι_n·a` of `G(n)` as a vector in degree `n - |a|`.
pub fn g_element(n: u32, a: &SteenrodElement) -> (i32, BitVec) {
    let k = n as i32 - a.degree();
    let basis = g_basis(n, k);
    let v = BitVec::from_indices(
        basis.len(),
        a.terms().filter_map(|t| basis.iter().position(|b| b == t)),
    );
    (k, v)
}

/// The module map `G(n) → target` sending `ι_n` to `u` (of degree `n`).
/// Fails unless `u` satisfies the relations of `ι_n`, which always holds for
/// unstable targets.
pub fn hom_from_g(n: u32, target: Arc<AModule>, u: &BitVec) -> Result<ModuleMap> {
    if u.len() != target.dim(n as i32) {
        return Err(BgxError::DimensionMismatch {
            expected: target.dim(n as i32),
            found: u.len(),
        });
    }
    let g = brown_gitler_arc(n);
    let mut matrices = BTreeMap::new();
    for k in 0..=n as i32 {
        let rows = g_basis(n, k)
            .iter()
            .map(|m| target.milnor_action(n as i32, u, m))
            .collect();
        matrices.insert(k, BitMatrix::from_rows(target.dim(k), rows));
    }
    let f = ModuleMap::new(g, target, 0, matrices)?;
    if let Some((gen, d)) = f.linearity_witness() {
        return Err(BgxError::contract(format!(
            "ι{n} ↦ u does not extend: fails against {gen} in degree {d}"
        )));
    }
    Ok(f)
}

/// Left multiplication `a·: G(n) → G(n + |a|)`, `ι_n ↦ ι_{n+|a|}·a`.
pub fn left_mult(a: &SteenrodElement, n: u32) -> ModuleMap {
    let big = n + a.degree() as u32;
    let target = brown_gitler_arc(big);
    let (_, u) = g_element(big, a);
    hom_from_g(n, target, &u).expect("targets of G-modules are unstable")
}

/// Truncation of `H_*(P_k)` for `k ∈ {-1, 0, 1}` with basis `t_j`, `k <= j <= top`,
/// and `t_{j+i}·Sq^i = binom(j, i) t_j`.
pub fn stunted_projective(k: i32, top: i32) -> Result<AModule> {
    if !(-1..=1).contains(&k) {
        return Err(BgxError::Domain(format!("H_*(P_{k}) is only built for k in -1..=1")));
    }
    if top < k {
        return Err(BgxError::Domain(format!("truncation {top} lies below the bottom cell t{k}")));
    }
    let n = (top - k + 1) as usize;
    let mut actions = BTreeMap::new();
    for j in k..=top {
        for i in 1..=(j - k) {
            let lower = j - i;
            if binom2(lower as i64, i as i64) {
                let mut m = BitMatrix::zeros(1, 1);
                m.set(0, 0, true);
                actions.insert((i as u32, j), m);
            }
        }
    }
    let labels = (k..=top).map(|j| vec![format!("t{j}")]).collect();
    Ok(AModule::from_parts(format!("H(P_{k})"), AlgebraSpec::Full, k, vec![1; n], labels, actions)?
        .with_exact_through(Some(top)))
}

/// The sequence `0 → Σ^{-1}m → m⊗H(P_{-1}) → m⊗H(P_0) → 0`, exact through degree `top`.
/// The inclusion sends `σ^{-1}y ↦ y⊗t_{-1}`.
pub fn basic_sequence(m: &AModule, top: i32) -> Result<ShortExactSeq> {
    let d = top - m.min_degree();
    let pm1 = stunted_projective(-1, d.max(-1))?;
    let p0 = stunted_projective(0, d.max(0))?;
    let lay_m1 = TensorLayout::new(m, &pm1);
    let lay_0 = TensorLayout::new(m, &p0);
    let x = Arc::new(m.tensor(&pm1)?.truncate_above(top));
    let n = Arc::new(m.tensor(&p0)?.truncate_above(top));
    let k = Arc::new(m.suspend(-1).truncate_above(top));
    let mut inc = BTreeMap::new();
    for e in k.degrees() {
        let a = e + 1;
        let rows = (0..k.dim(e))
            .map(|yi| BitVec::unit(x.dim(e), lay_m1.index(a, yi, -1, 0)))
            .collect();
        inc.insert(e, BitMatrix::from_rows(x.dim(e), rows));
    }
    let mut proj = BTreeMap::new();
    for e in x.degrees() {
        let rows = lay_m1
            .basis(e)
            .iter()
            .map(|&(a, ai, bi)| {
                let j = e - a;
                if j < 0 {
                    BitVec::zeros(n.dim(e))
                } else {
                    BitVec::unit(n.dim(e), lay_0.index(a, ai, j, bi))
                }
            })
            .collect();
        proj.insert(e, BitMatrix::from_rows(n.dim(e), rows));
    }
    let name = m.name().to_string();
    let x = Arc::new(x.as_ref().clone().with_name(format!("{name} ⊗ H(P_-1)")));
    let n = Arc::new(n.as_ref().clone().with_name(format!("{name} ⊗ H(P_0)")));
    ShortExactSeq::new(
        ModuleMap::new(k, Arc::clone(&x), 0, inc)?,
        ModuleMap::new(x, n, 0, proj)?,
    )
}

/// Default truncation for constructions involving `G(n+r)`.
pub fn default_top(n: u32, r: u32) -> i32 {
    (n + r + 1) as i32
}

/// `p_m: G(m+1) → ΣG(m)`, `ι_{m+1} ↦ σι_m`.
pub fn p_map(m: u32) -> ModuleMap {
    let target = Arc::new(brown_gitler(m).suspend(1));
    let u = BitVec::unit(target.dim(m as i32 + 1), 0);
    hom_from_g(m + 1, target, &u).expect("ΣG(m) is unstable")
}

/// The sequence `0 → G(n) → G(2n) → ΣG(2n-1) → 0` with inclusion `Sq^n·` and projection `p_{2n-1}`.
pub fn mahowald_sequence(n: u32) -> Result<ShortExactSeq> {
    if n == 0 {
        return Err(BgxError::Domain("Mahowald sequences start at n = 1".into()));
    }
    let inc = left_mult(&SteenrodElement::basis(MilnorElt::sq(n)), n);
    let proj = p_map(2 * n - 1);
    ShortExactSeq::new(inc, proj)
}

/// The element of `(G(n)⊗H(P_k))_{n+r}` summing every basis vector; `k ∈ {0, 1}`.
fn sum_element(target: &AModule, degree: i32) -> BitVec {
    BitVec::from_indices(target.dim(degree), 0..target.dim(degree))
}

/// `q(n, r): G(n+r) → G(n)⊗H(P_0)`, `ι_{n+r}` ↦ the sum of all basis vectors in degree `n+r`.
pub fn q_map(n: u32, r: u32) -> Result<ModuleMap> {
    let top = default_top(n, r);
    let g = brown_gitler(n);
    let p0 = stunted_projective(0, top - g.min_degree())?;
    let target = Arc::new(g.tensor(&p0)?.truncate_above(top).with_name(format!("G({n}) ⊗ H(P_0)")));
    let u = sum_element(&target, (n + r) as i32);
    hom_from_g(n + r, target, &u)
}

/// `Σ_j ι_n·χ(Sq^j) ⊗ t_{r+j}`, the closed form of `q(n, r)(ι_{n+r})`.
pub fn q_closed_form(n: u32, r: u32) -> Result<BitVec> {
    let top = default_top(n, r);
    let g = brown_gitler(n);
    let p0 = stunted_projective(0, top - g.min_degree())?;
    let layout = TensorLayout::new(&g, &p0);
    let deg = (n + r) as i32;
    let mut v = BitVec::zeros(layout.dim(deg));
    for j in 0..=n as i32 {
        let chi = crate::steenrod::conjugation_sum(j);
        let (k, x) = g_element(n, &chi);
        for xi in x.iter_ones() {
            let idx = layout.index(k, xi, r as i32 + j, 0);
            v.flip(idx);
        }
    }
    Ok(v)
}

/// `q̃(n, r): G(n+r) → G(n)⊗H(P_1)`, sending `ι_{n+r}` to the sum of all basis
/// vectors of degree `n+r`. For `r >= 1` its composite with the inclusion
/// `H(P_1) ⊂ H(P_0)` is exactly `q(n, r)`; for `r = 0` it differs from `q(n, 0)`
/// by the `t_0` summand, which does not change the extension class when `n >= 2`.
pub fn q_tilde(n: u32, r: u32) -> Result<ModuleMap> {
    if (n, r) == (0, 0) || (n, r) == (1, 0) {
        return Err(BgxError::Domain(format!(
            "q({n},{r}) does not factor through H(P_1) (the cases (0,0) and (1,0) are exceptions)"
        )));
    }
    let top = default_top(n, r);
    let g = brown_gitler(n);
    let p1 = stunted_projective(1, (top - g.min_degree()).max(1))?;
    let target = Arc::new(g.tensor(&p1)?.truncate_above(top).with_name(format!("G({n}) ⊗ H(P_1)")));
    let u = sum_element(&target, (n + r) as i32);
    hom_from_g(n + r, target, &u)
}

/// The inclusion `G(n)⊗H(P_1) → G(n)⊗H(P_0)` matching the truncations used by
/// [`q_tilde`] and [`q_map`].
pub fn p1_inclusion(n: u32, r: u32) -> Result<ModuleMap> {
    let top = default_top(n, r);
    let g = brown_gitler(n);
    let p1 = stunted_projective(1, (top - g.min_degree()).max(1))?;
    let p0 = stunted_projective(0, top - g.min_degree())?;
    let l1 = TensorLayout::new(&g, &p1);
    let l0 = TensorLayout::new(&g, &p0);
    let src = Arc::new(g.tensor(&p1)?.truncate_above(top).with_name(format!("G({n}) ⊗ H(P_1)")));
    let tgt = Arc::new(g.tensor(&p0)?.truncate_above(top).with_name(format!("G({n}) ⊗ H(P_0)")));
    let mut mats = BTreeMap::new();
    for e in src.degrees() {
        let rows = l1
            .basis(e)
            .iter()
            .map(|&(a, ai, bi)| BitVec::unit(tgt.dim(e), l0.index(a, ai, e - a, bi)))
            .collect();
        mats.insert(e, BitMatrix::from_rows(tgt.dim(e), rows));
    }
    ModuleMap::new(src, tgt, 0, mats)
}

/// `0 → Σ^{-1}G(n) → Q(n,r) → G(n+r) → 0`: the pullback of the basic sequence of `G(n)` along `q(n, r)`.
pub fn q_extension(n: u32, r: u32) -> Result<ShortExactSeq> {
    let e = basic_sequence(&brown_gitler(n), default_top(n, r))?;
    let q = q_map(n, r)?;
    let q = ModuleMap::new(
        Arc::clone(q.source()),
        Arc::clone(e.quotient()),
        0,
        q.source().degrees().map(|d| (d, q.matrix(d))).collect(),
    )?;
    let out = e.pullback(&q)?;
    Ok(rename_middle(out, format!("Q({n},{r})")))
}

fn rename_middle(e: ShortExactSeq, name: String) -> ShortExactSeq {
    let mid = Arc::new(e.middle().as_ref().clone().with_name(name));
    let inc = ModuleMap::new(
        Arc::clone(e.sub()),
        Arc::clone(&mid),
        0,
        e.sub().degrees().map(|d| (d, e.inclusion().matrix(d))).collect(),
    )
    .unwrap();
    let proj = ModuleMap::new(
        Arc::clone(&mid),
        Arc::clone(e.quotient()),
        0,
        mid.degrees().map(|d| (d, e.projection().matrix(d))).collect(),
    )
    .unwrap();
    ShortExactSeq::new(inc, proj).unwrap()
}

/// The nonsplit extension `0 → ΣF2 → G(2) → Σ²F2 → 0`.
pub fn h0_sequence() -> ShortExactSeq {
    let g = brown_gitler_arc(2);
    let k = Arc::new(AModule::f2_at(AlgebraSpec::Full, 1));
    let n = Arc::new(AModule::f2_at(AlgebraSpec::Full, 2));
    let inc = ModuleMap::new(k, Arc::clone(&g), 0, BTreeMap::from([(1, BitMatrix::identity(1))])).unwrap();
    let proj = ModuleMap::new(g, n, 0, BTreeMap::from([(2, BitMatrix::identity(1))])).unwrap();
    ShortExactSeq::new(inc, proj).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_g_modules() {
        assert_eq!(brown_gitler(0).dims_map(), BTreeMap::from([(0, 1)]));
        let g2 = brown_gitler(2);
        assert_eq!(g2.dims_map(), BTreeMap::from([(1, 1), (2, 1)]));
        assert!(!g2.sq(1, 2).is_zero());
        assert_eq!(
            brown_gitler(4).dims_map(),
            BTreeMap::from([(1, 1), (2, 1), (3, 1), (4, 1)])
        );
        for n in 0..=8 {
            let g = brown_gitler(n);
            assert!(g.validate().is_ok(), "G({n})");
            assert!(g.is_unstable(), "G({n})");
        }
    }

    #[test]
    fn g4_primitive() {
        let g = brown_gitler(4);
        let x = g.milnor_action(4, &BitVec::unit(1, 0), &MilnorElt::primitive(1));
        assert!(!x.is_zero());
    }

    #[test]
    fn projective_actions() {
        let pm1 = stunted_projective(-1, 6).unwrap();
        assert!(pm1.validate().is_ok());
        assert!(!pm1.sq(2, 1).is_zero());
        let p0 = stunted_projective(0, 6).unwrap();
        assert!(!p0.sq(1, 2).is_zero());
        assert!(p0.sq(1, 3).is_zero());
        let (_, _) = (pm1.clone(), p0);
        let t2 = BitVec::unit(1, 0);
        assert!(!pm1.milnor_action(2, &t2, &MilnorElt::primitive(1)).is_zero());
    }

    #[test]
    fn q_map_examples() {
        let q = q_map(0, 0).unwrap();
        assert_eq!(q.matrix(0), BitMatrix::identity(1));
        let q = q_map(2, 1).unwrap();
        assert_eq!(q.matrix(3).row(0).count_ones(), 2);
        assert!(q_tilde(0, 0).is_err());
        assert!(q_tilde(1, 0).is_err());
    }

    #[test]
    fn sequences_are_exact() {
        for n in 1..=4 {
            mahowald_sequence(n).unwrap();
            basic_sequence(&brown_gitler(n), 8).unwrap();
        }
        assert!(!h0_sequence().is_split().unwrap());
        let q = q_extension(2, 2).unwrap();
        assert_eq!(
            q.middle().total_dim(),
            brown_gitler(2).total_dim() + brown_gitler(4).total_dim()
        );
    }
}
