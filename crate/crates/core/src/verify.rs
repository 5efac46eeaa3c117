//! Acceptance checks. Each criterion compares two independent computations
//! (or a computation against a locked table) with exact equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amodule::{AModule, ModuleMap, TensorLayout};
use crate::brown_gitler::{
    brown_gitler, brown_gitler_arc, g_basis, h0_sequence, left_mult, mahowald_sequence, p_map, q_closed_form,
    q_extension, q_map, stunted_projective,
};
use crate::dyer_lashof::{
    add_into, adem_normalize, expand, is_admissible, is_allowable, nishida_action, normal_form, tilde_d0_element,
    DlComplex, DlSum, DlWord, FreeDlModule,
};
use crate::error::BgxError;
use crate::ext::{delta_m_on_hom, dl_generation_check, is_free_over, margolis_homology, resolution, BgExt};
use crate::f2::{BitVec, Subspace};
use crate::steenrod::{conjugation_sum, milnor_basis, milnor_product, AlgebraSpec, MilnorElt, SteenrodElement};

pub const CRITERIA: [&str; 12] = [
    "G-module oracle and Hom(G(n), M) = M_n",
    "conjugation antipode recursion",
    "d~0 of q(x, r) and the d0 triangle",
    "Q(n, n-1) is the desuspended Mahowald sequence",
    "Q(n, n) as a pushout of a Mahowald sequence",
    "squaring triangles over E(1)",
    "delta_M surjective, bijective in the stable range",
    "complex: d^2 = 0, H^0 = Omega^inf, H^1 = Ext^{1,1}",
    "d_s vanishing and Omega^inf(M (x) H(P_-1))",
    "Dyer-Lashof normal forms, d across rewriting, Nishida",
    "Margolis and freeness table for Q(n, 2^k)",
    "Dyer-Lashof generation report",
];

/// Locked output of the `Q(n, 2^k)` freeness sweep.
pub const MARGOLIS_LOCK: &str = include_str!("../data/margolis_q.tsv");
/// Locked generation report for `Σ²F2` over `E(1)`, `smax = nmax = 6`.
pub const GENERATION_LOCK: &str = include_str!("../data/generation_s2f2_e1.tsv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}: {} ({})", self.id, self.name, self.detail)
    }
}

#[derive(Debug)]
struct Fail(String);

impl From<BgxError> for Fail {
    fn from(e: BgxError) -> Self {
        Fail(e.to_string())
    }
}

type Check = std::result::Result<String, Fail>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(Fail(format!($($arg)*)));
        }
    };
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize) -> Outcome {
    let result = match id {
        1 => c01(),
        2 => c02(),
        3 => c03(),
        4 => c04(),
        5 => c05(),
        6 => c06(),
        7 => c07(),
        8 => c08(),
        9 => c09(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        _ => Err(Fail(format!("no criterion {id}"))),
    };
    let name = CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
    match result {
        Ok(detail) => Outcome { id, name, passed: true, detail },
        Err(Fail(detail)) => Outcome { id, name, passed: false, detail },
    }
}

pub fn run_all() -> Vec<Outcome> {
    let ids: Vec<usize> = (1..=CRITERIA.len()).collect();
    crate::par::sweep(&ids, |&i| run(i))
}

fn steenrod_vector(basis: &HashMap<MilnorElt, usize>, len: usize, a: &SteenrodElement) -> BitVec {
    BitVec::from_indices(len, a.terms().map(|t| basis[t]))
}

/// `G(n)` rebuilt as `ι·A` modulo the right ideal generated by instability,
/// compared with [`brown_gitler`] on dimensions, basis and action.
fn oracle_matches(n: u32) -> std::result::Result<(), String> {
    let g = brown_gitler(n);
    let n = n as i32;
    let index = |e: i32| -> HashMap<MilnorElt, usize> {
        milnor_basis(e).iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
    };
    let mut ideal: Vec<Subspace> = Vec::new();
    for e in 0..=n {
        let idx = index(e);
        let len = idx.len();
        let mut rels = Vec::new();
        for p in 0..=e {
            for i in 1..=(e - p) {
                if 2 * i <= n - p {
                    continue;
                }
                for a in milnor_basis(p).iter() {
                    let ai = milnor_product(a, &MilnorElt::sq(i as u32));
                    for b in milnor_basis(e - p - i).iter() {
                        let prod = ai.mul(&SteenrodElement::basis(b.clone()));
                        rels.push(steenrod_vector(&idx, len, &prod));
                    }
                }
            }
        }
        ideal.push(Subspace::from_spanning(len, rels));
    }
    for e in 0..=n {
        let idx = index(e);
        let len = idx.len();
        let k = n - e;
        if len - ideal[e as usize].dim() != g.dim(k) {
            return Err(format!(
                "G({n})_{k}: quotient has dimension {}, module has {}",
                len - ideal[e as usize].dim(),
                g.dim(k)
            ));
        }
        let bg = g_basis(n as u32, k);
        let span = Subspace::from_spanning(len, bg.iter().map(|m| BitVec::unit(len, idx[m])).collect());
        if span.sum(&ideal[e as usize]).dim() != len {
            return Err(format!("G({n})_{k}: basis does not span the quotient"));
        }
        for i in 1..=k {
            let t = k - i;
            let idx_t = index(e + i);
            let len_t = idx_t.len();
            let target = g_basis(n as u32, t);
            let act = g.sq(i as u32, k);
            for (r, b) in bg.iter().enumerate() {
                let mut v = steenrod_vector(&idx_t, len_t, &milnor_product(b, &MilnorElt::sq(i as u32)));
                for c in act.row(r).iter_ones() {
                    v.flip(idx_t[&target[c]]);
                }
                if !ideal[(e + i) as usize].contains(&v) {
                    return Err(format!("G({n}): ({b})·Sq^{i} disagrees with the quotient"));
                }
            }
        }
    }
    Ok(())
}

/// A quotient of a sum of suspended Brown-Gitler modules by a random cyclic-ish submodule.
pub fn random_unstable_module(rng: &mut ChaCha8Rng) -> crate::Result<AModule> {
    let mut m: Option<AModule> = None;
    for _ in 0..rng.gen_range(1..=3) {
        let g = brown_gitler(rng.gen_range(0..=5)).suspend(rng.gen_range(0..=3));
        m = Some(match m {
            None => g,
            Some(x) => x.direct_sum(&g),
        });
    }
    let m = m.expect("at least one summand");
    let degrees: Vec<i32> = m.degrees().filter(|&d| m.dim(d) > 0).collect();
    let mut elements = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let d = degrees[rng.gen_range(0..degrees.len())];
        let n = m.dim(d);
        let mut v = BitVec::zeros(n);
        while v.is_zero() {
            v = BitVec::from_bools(&(0..n).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
        }
        elements.push((d, v));
    }
    let (q, _) = m.quotient(&m.generated_subspaces(&elements))?;
    Ok(q.with_name("M"))
}

fn c01() -> Check {
    for n in 0..=8 {
        oracle_matches(n).map_err(Fail)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f64);
    let mut checked = 0;
    for k in 0..10 {
        let m = random_unstable_module(&mut rng)?;
        ensure!(m.is_unstable(), "random module {k} is not unstable");
        for n in 0..=8u32 {
            let hom = brown_gitler(n).hom_space(&m, 0).len();
            ensure!(
                hom == m.dim(n as i32),
                "module {k}: dim Hom(G({n}), M) = {hom} but dim M_{n} = {}",
                m.dim(n as i32)
            );
            checked += 1;
        }
    }
    Ok(format!("oracle agrees for n <= 8; {checked} Hom dimensions match"))
}

fn c02() -> Check {
    for j in 1..=20 {
        let mut left = SteenrodElement::zero(j);
        let mut right = SteenrodElement::zero(j);
        for i in 0..=j {
            let sq = SteenrodElement::basis(MilnorElt::sq(i as u32));
            let chi = conjugation_sum(j - i);
            left.add_assign(&sq.mul(&chi));
            right.add_assign(&chi.mul(&sq));
        }
        ensure!(left.is_zero(), "Σ Sq^i χ(Sq^(j-i)) = {left} for j = {j}");
        ensure!(right.is_zero(), "Σ χ(Sq^(j-i)) Sq^i = {right} for j = {j}");
    }
    Ok("both antipode identities vanish for 1 <= j <= 20".into())
}

/// `Σ_{b} x⊗t_b` terms of a vector in `G(n) ⊗ H(P_k)` decoded into `d̃_0`.
fn tilde_d0_of(m: &AModule, layout: &TensorLayout, deg: i32, v: &BitVec) -> DlSum {
    let mut out = DlSum::new();
    for c in v.iter_ones() {
        let (a, ai, _) = layout.basis(deg)[c];
        let x = BitVec::unit(m.dim(a), ai);
        add_into(&mut out, &tilde_d0_element(m, a, &x, deg - a));
    }
    out
}

fn c03() -> Check {
    const RANGE: i32 = 12;
    let mut pairs = 0;
    for n in 0..=RANGE as u32 {
        let g = brown_gitler(n);
        for r in 0..=(RANGE as u32 - n) {
            let closed = q_closed_form(n, r)?;
            let q = q_map(n, r)?;
            let deg = (n + r) as i32;
            ensure!(q.apply(deg, &BitVec::unit(1, 0)) == closed, "q({n},{r}) differs from its closed form");
            let p0 = stunted_projective(0, deg + 1)?;
            let layout = TensorLayout::new(&g, &p0);
            let lhs = tilde_d0_of(&g, &layout, deg, &closed);
            let rhs = expand(&[r as i32], n as i32, &BitVec::unit(1, 0), -1);
            ensure!(lhs == rhs, "d~0(q(ι_{n}, {r})) != σQ^{r}(σ^-1 ι_{n})");
            pairs += 1;
        }
    }
    let mut elements = 0;
    for n in 0..=RANGE as u32 {
        let g = brown_gitler(n);
        let pm1 = stunted_projective(-1, RANGE + 1)?;
        let layout = TensorLayout::new(&g, &pm1);
        let big = Arc::new(g.tensor(&pm1)?.truncate_above(RANGE));
        let complex = DlComplex::new(Arc::clone(&big), 0);
        for e in big.degrees() {
            for (z, &(a, ai, _)) in layout.basis(e).iter().enumerate() {
                let b = e - a;
                let d0 = complex.differential_word(&DlWord {
                    degree: e,
                    index: z,
                    ops: Vec::new(),
                    shift: -1,
                });
                let x = BitVec::unit(g.dim(a), ai);
                let mut mapped = DlSum::new();
                for w in tilde_d0_element(&g, a, &x, b) {
                    let y = w.degree;
                    mapped.insert(DlWord {
                        degree: y - 1,
                        index: layout.index(y, w.index, -1, 0),
                        ops: w.ops,
                        shift: 0,
                    });
                }
                ensure!(d0 == mapped, "d0 ≠ incl∘d~0 on G({n}) ⊗ t_{b} basis element in degree {e}");
                elements += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs (n, r); triangle on {elements} basis elements"))
}

fn c04() -> Check {
    for n in 1..=5u32 {
        let q = q_extension(n, n - 1)?;
        let mah = mahowald_sequence(n)?;
        ensure!(q.equivalent(&mah.suspend(-1))?, "Q({n},{}) is not the desuspended Mahowald sequence", n - 1);
        for (name, e) in [("ΣQ", q.suspend(1)), ("Mahowald", mah)] {
            ensure!(!e.is_split()?, "{name} sequence for n = {n} splits");
            let p = p_map(2 * n - 1).with_ends(brown_gitler_arc(2 * n), Arc::clone(e.quotient()))?;
            ensure!(e.pullback(&p)?.is_split()?, "{name} sequence for n = {n} survives pullback along p");
        }
    }
    Ok("1 <= n <= 5".into())
}

fn c05() -> Check {
    let mut even = 0;
    for n in 0..=4u32 {
        let q = q_extension(n, n)?;
        let top = mahowald_sequence(n + 1)?.suspend(-2);
        let pn = p_map(n).suspend(-2).with_ends(Arc::clone(top.sub()), Arc::new(brown_gitler(n).suspend(-1)))?;
        let po = top.pushout(&pn)?;
        let gamma = p_map(2 * n)
            .suspend(-1)
            .with_ends(Arc::clone(po.quotient()), Arc::clone(q.quotient()))?;
        let alpha = ModuleMap::identification(Arc::clone(po.sub()), Arc::clone(q.sub()))?;
        ensure!(po.equivalence_via(&q, &alpha, &gamma)?.is_some(), "Q({n},{n}) is not the pushout along p_{n}");
        if n % 2 == 0 {
            let alpha = p_map(n).suspend(-2).with_ends(Arc::clone(top.sub()), Arc::clone(q.sub()))?;
            ensure!(alpha.is_injective() && alpha.is_surjective(), "p_{n} is not an isomorphism");
            let gamma = gamma.with_ends(Arc::clone(top.quotient()), Arc::clone(q.quotient()))?;
            ensure!(
                top.equivalence_via(&q, &alpha, &gamma)?.is_some(),
                "Q({n},{n}) is not the desuspended Mahowald sequence"
            );
            even += 1;
        }
    }
    Ok(format!("pushouts for n <= 4; {even} even cases identified"))
}

fn c06() -> Check {
    let m = Arc::new(AModule::f2_at(AlgebraSpec::Full, 2));
    let ctx = BgExt::new(m, AlgebraSpec::Exterior(1), 5)?;
    let mut nonzero = 0;
    for n in 0..=4u32 {
        for s in 0..=4usize {
            let top = ctx.sq(n, 2 * n, s)?.then(&ctx.dl(n, n, s)?)?;
            let h = ctx.h0(2 * n, s)?;
            ensure!(top.matrix == h.matrix, "Q^{n} Sq^{n} ≠ h0 on Ext^{{{s},{s}}}(G({}))", 2 * n);
            let bottom = ctx.dl(n, n, s)?.then(&ctx.sq(n, 2 * n, s + 1)?)?;
            let h = ctx.h0_times(n + 1, n, s)?;
            ensure!(bottom.matrix == h.matrix, "Sq^{n} Q^{n} ≠ (n+1)h0 on Ext^{{{s},{s}}}(G({n}))");
            nonzero += usize::from(!top.is_zero()) + usize::from(!bottom.is_zero());
        }
    }
    for n in 0..=4u32 {
        let q2 = q_extension(n, n)?.suspend(2);
        let sq = SteenrodElement::basis(MilnorElt::sq(n));
        let f = left_mult(&sq, n).suspend(1);
        let f = f.with_ends(Arc::clone(q2.sub()), Arc::clone(f.target()))?;
        let po = q2.pushout(&f)?;
        let g2 = h0_sequence().tensor_right(&brown_gitler_arc(2 * n))?;
        let alpha = ModuleMap::identification(Arc::clone(po.sub()), Arc::clone(g2.sub()))?;
        let gamma = ModuleMap::identification(Arc::clone(po.quotient()), Arc::clone(g2.quotient()))?;
        ensure!(
            po.equivalence_via(&g2, &alpha, &gamma)?.is_some(),
            "pushout of Σ²Q({n},{n}) along Sq^{n} is not G(2)⊗G({})",
            2 * n
        );
    }
    Ok(format!("n <= 4, s <= 4 ({nonzero} nonzero composites); extension diagram for n <= 4"))
}

fn c07() -> Check {
    let mut cases = 0;
    let mut bijective = 0;
    for top in 1..=3u32 {
        let m = brown_gitler(top);
        for g in 0..=8u32 {
            let rep = delta_m_on_hom(&m, g)?;
            let res = resolution(&brown_gitler(g), AlgebraSpec::Full, 2, Some(m.min_degree() - 2))?;
            let ext = res.ext(&m, 1, 1)?.dim();
            ensure!(ext == rep.ext_dim, "Ext^{{1,1}}(G({g}), G({top})): {ext} vs {} after desuspension", rep.ext_dim);
            ensure!(rep.surjective(), "δ on Hom(G({g}), G({top})⊗H(P_0)) has rank {} < {}", rep.rank, rep.ext_dim);
            if g as i32 >= 2 * top as i32 - 1 {
                ensure!(rep.injective(), "δ not injective for G({top}), g = {g}");
                bijective += 1;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases surjective, {bijective} bijective"))
}

fn c08() -> Check {
    const WINDOW: i32 = 12;
    let mut nonzero = 0;
    for n in 0..=4u32 {
        let g = brown_gitler_arc(n);
        let c = DlComplex::new(Arc::clone(&g), -1);
        let m = g.suspend(-1);
        let omega = m.omega_inf_subspaces();
        for d in -1..=WINDOW {
            for s in 0..=1 {
                ensure!(
                    c.differential(s, d).mul(&c.differential(s + 1, d)).is_zero(),
                    "d∘d ≠ 0 on C^{s}(Σ^-1 G({n})) in degree {d}"
                );
            }
            let h0 = c.homology(0, d)?.dim();
            let om = omega.get(&d).map_or(0, |s| s.dim());
            ensure!(h0 == om, "H^0 = {h0} but Ω^∞ = {om} for Σ^-1 G({n}) in degree {d}");
        }
        for k in 0..=8u32 {
            let h1 = c.homology(1, k as i32)?.dim();
            let res = resolution(&brown_gitler(k), AlgebraSpec::Full, 2, Some(-1))?;
            let ext = res.ext(&g, 1, 1)?.dim();
            ensure!(h1 == ext, "H^1 = {h1} but Ext^{{1,1}}(G({k}), G({n})) = {ext}");
            nonzero += usize::from(h1 > 0);
        }
    }
    Ok(format!("n <= 4, degrees <= {WINDOW}; H^1 through G(8), {nonzero} nonzero groups"))
}

fn c09() -> Check {
    const WINDOW: i32 = 14;
    let mut modules: Vec<Arc<AModule>> = (0..=4).map(brown_gitler_arc).collect();
    modules.push(Arc::new(stunted_projective(0, WINDOW + 2)?));
    for m in &modules {
        for s in 0..=2usize {
            let c = DlComplex::new(Arc::clone(m), -(s as i32));
            for d in m.min_degree()..=WINDOW {
                c.check_window(s, d)?;
                ensure!(c.differential(s, d).is_zero(), "d_{s} ≠ 0 on R_{s}(Σ^-1 {}) in degree {d}", m.name());
            }
        }
    }
    for k in 0..=6i32 {
        let top = 2 * k + 10;
        let x = stunted_projective(-1, top)?.suspend(k);
        let omega = x.omega_inf_subspaces();
        for (&d, s) in omega.range((2 * k - 1)..) {
            ensure!(d > top || s.dim() == 0, "Ω^∞(Σ^{k} H(P_-1)) is nonzero in degree {d}");
        }
    }
    for n in 1..=4u32 {
        let g = brown_gitler(n);
        let pm1 = stunted_projective(-1, 3 * n as i32 + 4)?;
        let x = g.tensor(&pm1)?.truncate_above(3 * n as i32 + 3);
        let omega = x.omega_inf_subspaces();
        ensure!(
            omega.range((2 * n as i32 - 1)..).all(|(_, s)| s.dim() == 0),
            "Ω^∞(G({n}) ⊗ H(P_-1)) is nonzero at or above {}",
            2 * n - 1
        );
    }
    Ok(format!("s <= 2 through degree {WINDOW}; Ω^∞ vanishing for k <= 6"))
}

fn c10() -> Check {
    let mut words = 0;
    for base in 0..=4 {
        for len in 1..=3usize {
            let count = 13usize.pow(len as u32);
            for code in 0..count {
                let mut ops = Vec::with_capacity(len);
                let mut c = code;
                for _ in 0..len {
                    ops.push((c % 13) as i32);
                    c /= 13;
                }
                let nf = normal_form(&ops, base);
                for f in nf.iter() {
                    ensure!(
                        is_admissible(f) && is_allowable(f, base),
                        "normal form of {ops:?} on degree {base} contains {f:?}"
                    );
                    ensure!(*normal_form(f, base) == vec![f.clone()], "normal form of {f:?} is not fixed");
                }
                words += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x646c);
    let mut rewrites = 0;
    for _ in 0..400 {
        let n = rng.gen_range(1..=4u32);
        let g = brown_gitler_arc(n);
        let shift = rng.gen_range(-1..=1);
        let s = rng.gen_range(1..=2usize);
        let c = DlComplex::new(Arc::clone(&g), shift);
        let degree = rng.gen_range(0..=n as i32);
        if g.dim(degree) == 0 {
            continue;
        }
        let w = DlWord {
            degree,
            index: rng.gen_range(0..g.dim(degree)),
            ops: (0..s).map(|_| rng.gen_range(0..=10)).collect(),
            shift: c.word_shift(s),
        };
        let raw = c.differential_word(&w);
        let mut via = DlSum::new();
        for v in adem_normalize(&w) {
            add_into(&mut via, &c.differential_word(&v));
        }
        ensure!(raw == via, "d is not compatible with rewriting {w:?}");
        rewrites += usize::from(adem_normalize(&w) != [w.clone()].into_iter().collect());
    }
    let mut instances = 0;
    for k in 0..=6u32 {
        let g = brown_gitler(k);
        for n in 0..=10i32 {
            for degree in g.degrees().filter(|&d| d <= n) {
                for index in 0..g.dim(degree) {
                    let w = DlWord {
                        degree,
                        index,
                        ops: vec![n],
                        shift: 0,
                    };
                    let lhs = nishida_action(&g, &w, n as u32);
                    let rhs = if n % 2 == 0 {
                        let x = g.act_sq(n as u32 / 2, degree, &BitVec::unit(g.dim(degree), index));
                        expand(&[n / 2], degree - n / 2, &x, 0)
                    } else {
                        DlSum::new()
                    };
                    ensure!(lhs == rhs, "Nishida instance fails for Q^{n} on G({k}) degree {degree}");
                    instances += 1;
                }
            }
        }
    }
    for n in 1..=3u32 {
        let free = FreeDlModule::new(brown_gitler_arc(n), 0, 1, 10).to_amodule()?;
        free.validate()?;
    }
    Ok(format!(
        "{words} words idempotent; {rewrites} nontrivial rewrites respected by d; {instances} Nishida instances"
    ))
}

/// One row of the `Q(n, 2^k)` freeness sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MargolisRow {
    pub n: u32,
    pub k: u32,
    pub total_dim: usize,
    pub q0: BTreeMap<i32, usize>,
    pub q1: BTreeMap<i32, usize>,
    pub free: bool,
    pub agrees: bool,
}

impl MargolisRow {
    /// Freeness fails although `2^k > n`.
    pub fn flagged(&self) -> bool {
        !self.free && (1u32 << self.k) > self.n
    }
}

fn render_dims(m: &BTreeMap<i32, usize>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    m.iter().map(|(d, n)| format!("{d}:{n}")).collect::<Vec<_>>().join(",")
}

pub fn margolis_row(n: u32, k: u32) -> crate::Result<MargolisRow> {
    let q = q_extension(n, 1 << k)?;
    let mid = q.middle().restrict(AlgebraSpec::Exterior(1))?;
    let report = is_free_over(&mid, AlgebraSpec::Exterior(1))?;
    Ok(MargolisRow {
        n,
        k,
        total_dim: mid.total_dim(),
        q0: margolis_homology(&mid, 0)?,
        q1: margolis_homology(&mid, 1)?,
        free: report.free,
        agrees: report.margolis_agrees,
    })
}

/// The sweep over `1 <= n <= 6`, `2^k <= 16`.
pub fn margolis_table() -> crate::Result<Vec<MargolisRow>> {
    let cases: Vec<(u32, u32)> = (1..=6).flat_map(|n| (0..=4).map(move |k| (n, k))).collect();
    crate::par::sweep(&cases, |&(n, k)| margolis_row(n, k)).into_iter().collect()
}

pub fn margolis_tsv(rows: &[MargolisRow]) -> String {
    let mut out = String::from("n\tr\tdim\tH(Q0)\tH(Q1)\tfree\tflag\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.n,
            1u32 << r.k,
            r.total_dim,
            render_dims(&r.q0),
            render_dims(&r.q1),
            r.free,
            if r.flagged() { "FAILS" } else { "" }
        ));
    }
    out
}

fn c11() -> Check {
    let rows = margolis_table()?;
    ensure!(rows.iter().all(|r| r.agrees), "Margolis criterion disagrees with the cover test");
    let flagged: Vec<String> = rows.iter().filter(|r| r.flagged()).map(|r| format!("({},{})", r.n, r.k)).collect();
    ensure!(flagged.contains(&"(1,1)".to_string()), "(1,1) is not flagged");
    let tsv = margolis_tsv(&rows);
    ensure!(tsv == MARGOLIS_LOCK, "table differs from the locked copy:\n{tsv}");
    Ok(format!("{} rows; flagged {}", rows.len(), flagged.join(" ")))
}

pub fn generation_tsv() -> crate::Result<String> {
    let m = Arc::new(AModule::f2_at(AlgebraSpec::Full, 2).with_name("Σ²F2"));
    Ok(dl_generation_check(m, AlgebraSpec::Exterior(1), 6, 6)?.to_tsv())
}

fn c12() -> Check {
    let m = Arc::new(AModule::f2_at(AlgebraSpec::Full, 2).with_name("Σ²F2"));
    let report = dl_generation_check(m, AlgebraSpec::Exterior(1), 6, 6)?;
    ensure!(report.entries.len() == 7 * 7, "report has {} entries", report.entries.len());
    let tsv = report.to_tsv();
    ensure!(tsv == GENERATION_LOCK, "report differs from the locked copy:\n{tsv}");
    let short: Vec<String> = report
        .entries
        .iter()
        .filter(|e| e.generated < e.dim)
        .map(|e| format!("({},{})", e.s, e.n))
        .collect();
    Ok(if short.is_empty() {
        format!("{} groups, all generated", report.entries.len())
    } else {
        format!("{} groups; not generated at {}", report.entries.len(), short.join(" "))
    })
}
