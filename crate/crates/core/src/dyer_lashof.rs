//! Free allowable Dyer-Lashof modules `R_s(M)` and the cochain complex
//! `C^s(N) = Σ R_s(Σ^{s-1} N)` whose cohomology is `Ω^∞_s N`.
//!
//! A word `Q^{i_1} ⋯ Q^{i_s} σ^k x` applies `Q^{i_s}` first. It is admissible
//! when `i_j <= 2 i_{j+1}` and allowable when every operation is applied to a
//! class of degree at most its index.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::amodule::{AModule, TensorLayout};
use crate::error::{BgxError, Result};
use crate::f2::{BitMatrix, BitVec, QuotientSpace, Subspace};
use crate::steenrod::binom2;

/// `Q^{ops} σ^{shift} x` where `x` is basis vector `index` in degree `degree` of a base module.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DlWord {
    pub degree: i32,
    pub index: usize,
    pub ops: Vec<i32>,
    pub shift: i32,
}

impl DlWord {
    pub fn base_degree(&self) -> i32 {
        self.degree + self.shift
    }

    /// Degree of `Q^I σ^k x` (without any outer suspension).
    pub fn total_degree(&self) -> i32 {
        self.ops.iter().sum::<i32>() + self.base_degree()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.ops)
    }

    pub fn is_allowable(&self) -> bool {
        is_allowable(&self.ops, self.base_degree())
    }

    pub fn render(&self, base: &AModule) -> String {
        let mut s = String::new();
        for r in &self.ops {
            s.push_str(&format!("Q^{r}"));
        }
        if !self.ops.is_empty() {
            s.push(' ');
        }
        let label = base.label(self.degree, self.index);
        match self.shift {
            0 => s.push_str(label),
            1 => s.push_str(&format!("σ({label})")),
            k => s.push_str(&format!("σ^{k}({label})")),
        }
        s
    }
}

impl fmt::Debug for DlWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{:?} σ^{} x[{}][{}]", self.ops, self.shift, self.degree, self.index)
    }
}

/// An F2 sum of words.
pub type DlSum = BTreeSet<DlWord>;

pub fn toggle(sum: &mut DlSum, w: DlWord) {
    if !sum.remove(&w) {
        sum.insert(w);
    }
}

pub fn add_into(sum: &mut DlSum, other: &DlSum) {
    for w in other {
        toggle(sum, w.clone());
    }
}

pub fn is_admissible(ops: &[i32]) -> bool {
    ops.windows(2).all(|w| w[0] <= 2 * w[1])
}

/// Whether each `Q^{i_j}` is applied to a class of degree at most `i_j`.
pub fn is_allowable(ops: &[i32], base_degree: i32) -> bool {
    let mut deg = base_degree;
    for &r in ops.iter().rev() {
        if r < deg {
            return false;
        }
        deg += r;
    }
    true
}

/// Excess `i_1 - i_2 - ⋯ - i_s`.
pub fn excess(ops: &[i32]) -> i32 {
    match ops.split_first() {
        None => i32::MAX,
        Some((first, rest)) => first - rest.iter().sum::<i32>(),
    }
}

type OpsCache = RwLock<HashMap<(Vec<i32>, i32), Arc<Vec<Vec<i32>>>>>;

fn normal_cache() -> &'static OpsCache {
    static C: OnceLock<OpsCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn apply_cache() -> &'static OpsCache {
    static C: OnceLock<OpsCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn toggle_ops(set: &mut BTreeSet<Vec<i32>>, w: Vec<i32>) {
    if !set.remove(&w) {
        set.insert(w);
    }
}

/// Normal form of `Q^{ops} y` for a basis class `y` of degree `base_degree`
/// in a free allowable module: the set of admissible allowable sequences
/// whose sum it equals. Rewrites innermost-first with the Adem relations
/// `Q^r Q^s = Σ_i binom(i-s-1, 2i-r) Q^{r+s-i} Q^i` (`r > 2s`) and drops
/// words with `Q^r` applied below its degree.
pub fn normal_form(ops: &[i32], base_degree: i32) -> Arc<Vec<Vec<i32>>> {
    if ops.is_empty() {
        return Arc::new(vec![Vec::new()]);
    }
    let key = (ops.to_vec(), base_degree);
    if let Some(v) = normal_cache().read().unwrap().get(&key) {
        return Arc::clone(v);
    }
    let inner = normal_form(&ops[1..], base_degree);
    let mut out = BTreeSet::new();
    for j in inner.iter() {
        for k in apply_op(ops[0], j, base_degree).iter() {
            toggle_ops(&mut out, k.clone());
        }
    }
    let v = Arc::new(out.into_iter().collect::<Vec<_>>());
    normal_cache().write().unwrap().insert(key, Arc::clone(&v));
    v
}

/// Normal form of `Q^r Q^J y` where `J` is already admissible and allowable.
fn apply_op(r: i32, j: &[i32], base_degree: i32) -> Arc<Vec<Vec<i32>>> {
    let deg = j.iter().sum::<i32>() + base_degree;
    if r < deg {
        return Arc::new(Vec::new());
    }
    if j.is_empty() || r <= 2 * j[0] {
        let mut w = Vec::with_capacity(j.len() + 1);
        w.push(r);
        w.extend_from_slice(j);
        return Arc::new(vec![w]);
    }
    let mut key_ops = vec![r];
    key_ops.extend_from_slice(j);
    let key = (key_ops, base_degree);
    if let Some(v) = apply_cache().read().unwrap().get(&key) {
        return Arc::clone(v);
    }
    let s = j[0];
    let rest = &j[1..];
    let mut out = BTreeSet::new();
    for i in (r + 1) / 2..=r - s - 1 {
        if !binom2((i - s - 1) as i64, (2 * i - r) as i64) {
            continue;
        }
        for k in apply_op(i, rest, base_degree).iter() {
            for l in apply_op(r + s - i, k, base_degree).iter() {
                toggle_ops(&mut out, l.clone());
            }
        }
    }
    let v = Arc::new(out.into_iter().collect::<Vec<_>>());
    apply_cache().write().unwrap().insert(key, Arc::clone(&v));
    v
}

/// Normal form of an arbitrary word.
pub fn adem_normalize(w: &DlWord) -> DlSum {
    normal_form(&w.ops, w.base_degree())
        .iter()
        .map(|ops| DlWord {
            ops: ops.clone(),
            ..w.clone()
        })
        .collect()
}

/// Normal form of a sum of words.
pub fn normalize_sum(sum: &DlSum) -> DlSum {
    let mut out = DlSum::new();
    for w in sum {
        add_into(&mut out, &adem_normalize(w));
    }
    out
}

/// `Q^{ops} σ^{shift} v` for a vector `v` in degree `degree` of the base, in normal form.
pub fn expand(ops: &[i32], degree: i32, v: &BitVec, shift: i32) -> DlSum {
    let forms = normal_form(ops, degree + shift);
    let mut out = DlSum::new();
    for index in v.iter_ones() {
        for f in forms.iter() {
            toggle(
                &mut out,
                DlWord {
                    degree,
                    index,
                    ops: f.clone(),
                    shift,
                },
            );
        }
    }
    out
}

/// `μ`: prefixes `outer` to every word of `inner` and normalizes.
pub fn mu_concat(outer: &[i32], inner: &DlSum) -> DlSum {
    let mut out = DlSum::new();
    for w in inner {
        let mut ops = outer.to_vec();
        ops.extend_from_slice(&w.ops);
        add_into(
            &mut out,
            &adem_normalize(&DlWord {
                ops,
                ..w.clone()
            }),
        );
    }
    out
}

type EnumCache = RwLock<HashMap<(usize, i32, i32), Arc<Vec<Vec<i32>>>>>;

fn enum_cache() -> &'static EnumCache {
    static C: OnceLock<EnumCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// All admissible allowable sequences of length `len` with sum `total`, over a class of degree `base_degree`.
pub fn allowable_sequences(len: usize, total: i32, base_degree: i32) -> Arc<Vec<Vec<i32>>> {
    let key = (len, total, base_degree);
    if let Some(v) = enum_cache().read().unwrap().get(&key) {
        return Arc::clone(v);
    }
    // Built innermost first: `rev` holds i_s, i_{s-1}, ...
    fn min_rest(deg: i32, k: usize) -> i64 {
        deg as i64 * ((1i64 << k) - 1)
    }
    fn rec(k: usize, remaining: i32, deg: i32, prev: Option<i32>, rev: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if k == 0 {
            if remaining == 0 {
                out.push(rev.iter().rev().copied().collect());
            }
            return;
        }
        let mut r = deg;
        loop {
            if let Some(p) = prev {
                if r > 2 * p {
                    break;
                }
            }
            if r as i64 + min_rest(deg + r, k - 1) > remaining as i64 {
                break;
            }
            rev.push(r);
            rec(k - 1, remaining - r, deg + r, Some(r), rev, out);
            rev.pop();
            r += 1;
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
    } else {
        rec(len, total, base_degree, None, &mut Vec::new(), &mut out);
    }
    out.sort();
    let v = Arc::new(out);
    enum_cache().write().unwrap().insert(key, Arc::clone(&v));
    v
}

/// Nishida action `(Q^{ops} σ^k x)·Sq^k`, in normal form:
/// `(Q^r y)Sq^k = Σ_i binom(r-k, k-2i) Q^{r-k+i}(y Sq^i)`.
pub fn nishida_action(base: &AModule, w: &DlWord, k: u32) -> DlSum {
    fn rec(base: &AModule, ops: &[i32], w: &DlWord, k: u32) -> DlSum {
        match ops.split_first() {
            None => {
                let v = base.act_sq(k, w.degree, &BitVec::unit(base.dim(w.degree), w.index));
                expand(&[], w.degree - k as i32, &v, w.shift)
            }
            Some((&r, rest)) => {
                let mut out = DlSum::new();
                for i in 0..=k / 2 {
                    if !binom2(r as i64 - k as i64, k as i64 - 2 * i as i64) {
                        continue;
                    }
                    let inner = rec(base, rest, w, i);
                    add_into(&mut out, &mu_concat(&[r - k as i32 + i as i32], &inner));
                }
                out
            }
        }
    }
    if k == 0 {
        return adem_normalize(w);
    }
    rec(base, &w.ops, w, k)
}

/// `R_s(Σ^shift M)` through degree `top`, with its graded word basis.
pub struct FreeDlModule {
    base: Arc<AModule>,
    shift: i32,
    length: usize,
    top: i32,
    bases: BTreeMap<i32, Vec<DlWord>>,
}

impl FreeDlModule {
    pub fn new(base: Arc<AModule>, shift: i32, length: usize, top: i32) -> Self {
        let mut bases: BTreeMap<i32, Vec<DlWord>> = BTreeMap::new();
        for a in base.degrees() {
            let b = a + shift;
            let lo = if b >= 0 { b << length.min(30) } else { b * (1 << length.min(30)) };
            for total in lo.min(b)..=top {
                let ops_sum = total - b;
                for ops in allowable_sequences(length, ops_sum, b).iter() {
                    for index in 0..base.dim(a) {
                        bases.entry(total).or_default().push(DlWord {
                            degree: a,
                            index,
                            ops: ops.clone(),
                            shift,
                        });
                    }
                }
            }
        }
        for v in bases.values_mut() {
            v.sort();
        }
        Self {
            base,
            shift,
            length,
            top,
            bases,
        }
    }

    pub fn basis(&self, d: i32) -> &[DlWord] {
        self.bases.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.bases.keys().copied()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn to_vector(&self, d: i32, sum: &DlSum) -> Result<BitVec> {
        let basis = self.basis(d);
        let mut v = BitVec::zeros(basis.len());
        for w in sum {
            let i = basis
                .binary_search(w)
                .map_err(|_| BgxError::contract(format!("{w:?} is not a basis word in degree {d}")))?;
            v.flip(i);
        }
        Ok(v)
    }

    /// The module with the Nishida action, truncated at `top`.
    pub fn to_amodule(&self) -> Result<AModule> {
        let degrees: Vec<i32> = self.degrees().collect();
        let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) else {
            return Ok(AModule::zero(self.base.algebra()));
        };
        let mut actions = BTreeMap::new();
        for d in lo..=hi {
            for k in 1..=(d - lo) as u32 {
                let t = d - k as i32;
                let rows = self
                    .basis(d)
                    .iter()
                    .map(|w| self.to_vector(t, &nishida_action(&self.base, w, k)))
                    .collect::<Result<Vec<_>>>()?;
                actions.insert((k, d), BitMatrix::from_rows(self.basis(t).len(), rows));
            }
        }
        let dims = (lo..=hi).map(|d| self.basis(d).len()).collect();
        let labels = (lo..=hi)
            .map(|d| self.basis(d).iter().map(|w| w.render(&self.base)).collect())
            .collect();
        let name = if self.shift == 0 {
            format!("R_{}({})", self.length, self.base.name())
        } else {
            format!("R_{}(Σ^{}{})", self.length, self.shift, self.base.name())
        };
        Ok(AModule::from_parts(name, self.base.algebra(), lo, dims, labels, actions)?
            .with_exact_through(Some(self.top)))
    }
}

/// Cohomology of a complex in one bidegree, with a basis of representatives.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub level: usize,
    pub degree: i32,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    pub quotient: QuotientSpace,
}

impl HomologyGroup {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

type LevelCache = RwLock<HashMap<(usize, i32), Arc<Vec<DlWord>>>>;

/// The complex `C^s(Σ^k M) = Σ R_s(Σ^{k+s-1} M)` with differential
/// `σQ^I(σ^{k+s-1}x) ↦ Σ_i σQ^I Q^{i-1}(σ^{k+s}(x·Sq^i))`. Degrees include the outer suspension.
pub struct DlComplex {
    base: Arc<AModule>,
    shift: i32,
    cache: LevelCache,
}

impl DlComplex {
    /// The complex for `N = Σ^shift base`.
    pub fn new(base: Arc<AModule>, shift: i32) -> Self {
        Self {
            base,
            shift,
            cache: Default::default(),
        }
    }

    pub fn base(&self) -> &Arc<AModule> {
        &self.base
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn word_shift(&self, s: usize) -> i32 {
        self.shift + s as i32 - 1
    }

    /// Basis of `C^s` in degree `d`.
    pub fn basis(&self, s: usize, d: i32) -> Arc<Vec<DlWord>> {
        if let Some(b) = self.cache.read().unwrap().get(&(s, d)) {
            return Arc::clone(b);
        }
        let k = self.word_shift(s);
        let mut out = Vec::new();
        for a in self.base.degrees() {
            let n = self.base.dim(a);
            if n == 0 {
                continue;
            }
            let b = a + k;
            let ops_sum = d - 1 - b;
            for ops in allowable_sequences(s, ops_sum, b).iter() {
                for index in 0..n {
                    out.push(DlWord {
                        degree: a,
                        index,
                        ops: ops.clone(),
                        shift: k,
                    });
                }
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.cache.write().unwrap().insert((s, d), Arc::clone(&out));
        out
    }

    pub fn dim(&self, s: usize, d: i32) -> usize {
        self.basis(s, d).len()
    }

    pub fn to_vector(&self, s: usize, d: i32, sum: &DlSum) -> BitVec {
        let basis = self.basis(s, d);
        let mut v = BitVec::zeros(basis.len());
        for w in sum {
            let i = basis
                .binary_search(w)
                .unwrap_or_else(|_| panic!("{w:?} is not in C^{s} degree {d}"));
            v.flip(i);
        }
        v
    }

    /// Degree range of the base in which degree `d` of levels `s-1..=s+1` is computed exactly.
    pub fn check_window(&self, s: usize, d: i32) -> Result<()> {
        if let Some(e) = self.base.exact_through() {
            let needed = d - self.shift - s as i32 + 1;
            if needed > e {
                return Err(BgxError::Window {
                    needed,
                    exact_through: e,
                });
            }
        }
        Ok(())
    }

    /// `d` applied to a single word of `C^s`.
    pub fn differential_word(&self, w: &DlWord) -> DlSum {
        let mut out = DlSum::new();
        let lo = self.base.min_degree();
        for i in 0..=(w.degree - lo).max(0) as u32 {
            let v = self
                .base
                .act_sq(i, w.degree, &BitVec::unit(self.base.dim(w.degree), w.index));
            if v.is_zero() {
                continue;
            }
            let mut ops = w.ops.clone();
            ops.push(i as i32 - 1);
            add_into(&mut out, &expand(&ops, w.degree - i as i32, &v, w.shift + 1));
        }
        out
    }

    /// Matrix of `d: C^s_d → C^{s+1}_d`.
    pub fn differential(&self, s: usize, d: i32) -> BitMatrix {
        let src = self.basis(s, d);
        let cols = self.dim(s + 1, d);
        let rows = src
            .iter()
            .map(|w| self.to_vector(s + 1, d, &self.differential_word(w)))
            .collect();
        BitMatrix::from_rows(cols, rows)
    }

    /// `H^s` in degree `d`.
    pub fn homology(&self, s: usize, d: i32) -> Result<HomologyGroup> {
        self.check_window(s, d)?;
        let out = self.differential(s, d);
        let cycles = crate::f2::left_kernel(&out);
        let boundaries = if s == 0 {
            Subspace::zero(self.dim(0, d))
        } else {
            let inc = self.differential(s - 1, d);
            Subspace::from_spanning(inc.cols(), inc.row_vecs().to_vec())
        };
        let quotient = QuotientSpace::new(&cycles, &boundaries);
        Ok(HomologyGroup {
            level: s,
            degree: d,
            cycles,
            boundaries,
            quotient,
        })
    }

    /// `ε: C^s(Σ^k M)_d → C^s(Σ^{k+1} M)_{d+1}`, `σQ^I(σ^j x) ↦ σQ^I(σ^{j+1} x)`;
    /// a word dies when it is no longer allowable, i.e. when its excess equals its base degree.
    pub fn epsilon_word(w: &DlWord) -> Option<DlWord> {
        let v = DlWord {
            shift: w.shift + 1,
            ..w.clone()
        };
        v.is_allowable().then_some(v)
    }

    pub fn epsilon(&self, target: &DlComplex, s: usize, d: i32) -> Result<BitMatrix> {
        if !Arc::ptr_eq(&self.base, &target.base) && !self.base.same_structure(&target.base) {
            return Err(BgxError::contract("ε compares complexes over the same base"));
        }
        if target.shift != self.shift + 1 {
            return Err(BgxError::contract("ε raises the suspension by one"));
        }
        let cols = target.dim(s, d + 1);
        let rows = self
            .basis(s, d)
            .iter()
            .map(|w| {
                let mut sum = DlSum::new();
                if let Some(v) = Self::epsilon_word(w) {
                    sum.insert(v);
                }
                target.to_vector(s, d + 1, &sum)
            })
            .collect();
        Ok(BitMatrix::from_rows(cols, rows))
    }
}

/// `dim H^s(C(Σ^k M))_d` for `d` in `degrees`.
pub fn complex_homology_dims(
    m: Arc<AModule>,
    shift: i32,
    s: usize,
    degrees: impl IntoIterator<Item = i32>,
) -> Result<BTreeMap<i32, usize>> {
    let c = DlComplex::new(m, shift);
    degrees
        .into_iter()
        .map(|d| Ok((d, c.homology(s, d)?.dim())))
        .collect()
}

/// `dim L_s(M)_n`: rank of `ε: Ω^∞_s(Σ^{-s}M) → Σ^{-1}Ω^∞_s(Σ^{1-s}M)` in degree `n`.
pub fn ls_dims(
    m: Arc<AModule>,
    s: usize,
    degrees: impl IntoIterator<Item = i32>,
) -> Result<BTreeMap<i32, usize>> {
    let src = DlComplex::new(Arc::clone(&m), -(s as i32));
    let tgt = DlComplex::new(m, 1 - s as i32);
    let mut out = BTreeMap::new();
    for n in degrees {
        let hs = src.homology(s, n)?;
        let ht = tgt.homology(s, n + 1)?;
        let eps = src.epsilon(&tgt, s, n)?;
        let images: Vec<BitVec> = hs
            .quotient
            .representatives()
            .iter()
            .map(|v| {
                ht.quotient
                    .coordinates(&eps.vec_mul(v))
                    .expect("ε is a chain map")
            })
            .collect();
        out.insert(n, BitMatrix::from_rows(ht.dim(), images).rank());
    }
    Ok(out)
}

/// A class in `coker(d_0: Σ^{-1}m → ΣR_1(Σ^{-1}m))` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub degree: i32,
    pub coordinates: BitVec,
}

impl Coset {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_zero()
    }
}

fn require_unstable(m: &AModule) -> Result<()> {
    match m.instability_witness() {
        None => Ok(()),
        Some((d, i)) => Err(BgxError::NotUnstable(format!(
            "{}: Sq^{i} acts nontrivially in degree {d}",
            m.name()
        ))),
    }
}

/// `ρ(σQ^r(σ^{-1}x))` for `x` in degree `degree` of an unstable module `m`.
pub fn rho_coset(m: Arc<AModule>, r: i32, degree: i32, x: &BitVec) -> Result<Coset> {
    require_unstable(&m)?;
    let c = DlComplex::new(m, -1);
    let d = r + degree;
    let h = c.homology(1, d)?;
    let sum = expand(&[r], degree, x, -1);
    let v = c.to_vector(1, d, &sum);
    let coordinates = h
        .quotient
        .coordinates(&v)
        .ok_or_else(|| BgxError::contract("σQ^r(σ^{-1}x) is not a cycle"))?;
    Ok(Coset { degree: d, coordinates })
}

/// `d̃_0(x⊗t_r) = Σ_i σQ^{r+i}(σ^{-1}(x·Sq^i))`, landing in `C^1(Σ^{-1}m)`.
pub fn tilde_d0_element(m: &AModule, degree: i32, x: &BitVec, r: i32) -> DlSum {
    let mut out = DlSum::new();
    for i in 0..=(degree - m.min_degree()).max(0) as u32 {
        let v = m.act_sq(i, degree, x);
        if v.is_zero() {
            continue;
        }
        add_into(&mut out, &expand(&[r + i as i32], degree - i as i32, &v, -1));
    }
    out
}

/// Matrix of `d̃_0` from degree `d` of `m ⊗ H(P_{-1})` (as laid out by
/// [`TensorLayout`] with the given projective truncation) to `C^1(Σ^{-1}m)_d`.
pub fn tilde_d0_matrix(m: &AModule, pm1: &AModule, d: i32) -> Result<BitMatrix> {
    require_unstable(m)?;
    let layout = TensorLayout::new(m, pm1);
    let c = DlComplex::new(Arc::new(m.clone()), -1);
    let rows = layout
        .basis(d)
        .iter()
        .map(|&(a, ai, _)| {
            let x = BitVec::unit(m.dim(a), ai);
            c.to_vector(1, d, &tilde_d0_element(m, a, &x, d - a))
        })
        .collect();
    Ok(BitMatrix::from_rows(c.dim(1, d), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brown_gitler::brown_gitler;
    use crate::steenrod::AlgebraSpec;

    #[test]
    fn enumeration_examples() {
        assert_eq!(*allowable_sequences(1, 2, 1), vec![vec![2]]);
        assert_eq!(*allowable_sequences(2, 3, 0), vec![vec![2, 1]]);
        assert_eq!(*allowable_sequences(0, 0, 5), vec![Vec::<i32>::new()]);
    }

    #[test]
    fn unstable_relation() {
        assert!(normal_form(&[1], 2).is_empty());
        assert_eq!(*normal_form(&[2], 2), vec![vec![2]]);
    }

    #[test]
    fn nishida_examples() {
        let g1 = brown_gitler(1);
        let w = DlWord {
            degree: 1,
            index: 0,
            ops: vec![2],
            shift: 0,
        };
        let expected: DlSum = [DlWord {
            ops: vec![1],
            ..w.clone()
        }]
        .into_iter()
        .collect();
        assert_eq!(nishida_action(&g1, &w, 1), expected);
        assert_eq!(nishida_action(&g1, &w, 0), [w.clone()].into_iter().collect());
    }

    #[test]
    fn epsilon_death() {
        let w = DlWord {
            degree: 1,
            index: 0,
            ops: vec![1],
            shift: 0,
        };
        assert!(DlComplex::epsilon_word(&w).is_none());
        let w = DlWord { ops: vec![2], ..w };
        assert!(DlComplex::epsilon_word(&w).is_some());
    }

    #[test]
    fn small_homology_and_ls() {
        let g2 = Arc::new(brown_gitler(2));
        let c = DlComplex::new(Arc::clone(&g2), -1);
        assert_eq!(c.homology(0, 0).unwrap().dim(), 1);
        assert_eq!(c.homology(0, 1).unwrap().dim(), 0);
        let f = Arc::new(AModule::f2_at(AlgebraSpec::Full, 0));
        assert!(ls_dims(Arc::clone(&f), 1, 0..9).unwrap().values().all(|&n| n == 1));
        let pairs = |n: i32| (0..=n).filter(|&b| b <= n - b && n - b <= 2 * b).count();
        let l2 = ls_dims(Arc::clone(&f), 2, 0..9).unwrap();
        assert_eq!(l2, (0..9).map(|n| (n, pairs(n))).collect());
        let l0 = ls_dims(Arc::clone(&g2), 0, 0..4).unwrap();
        assert_eq!(l0, (0..4).map(|d| (d, g2.dim(d))).collect());
    }
}
