//! Minimal free resolutions over the Steenrod algebra and its finite
//! subalgebras, the groups `Ext^{s,t}(N, M) = Ext^s(N, Σ^{-t}M)`, and the maps
//! induced on them by module maps and extensions.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use crate::amodule::{AModule, ModuleMap, ShortExactSeq};
use crate::error::{BgxError, Result};
use crate::f2::{left_kernel, BitMatrix, BitVec, Eliminator, QuotientSpace, Subspace};
use crate::steenrod::{AlgebraSpec, AlgebraTables, MilnorElt};

/// Shared product tables per algebra.
pub fn tables(spec: AlgebraSpec) -> Arc<AlgebraTables> {
    static T: OnceLock<RwLock<HashMap<AlgebraSpec, Arc<AlgebraTables>>>> = OnceLock::new();
    let t = T.get_or_init(Default::default);
    if let Some(v) = t.read().unwrap().get(&spec) {
        return Arc::clone(v);
    }
    let v = Arc::new(AlgebraTables::new(spec));
    t.write().unwrap().entry(spec).or_insert(v).clone()
}

/// Hash of a module's structure (algebra, degrees, dimensions and actions).
pub fn fingerprint(m: &AModule) -> u64 {
    let mut h = DefaultHasher::new();
    m.algebra().name().hash(&mut h);
    m.min_degree().hash(&mut h);
    for d in m.degrees() {
        m.dim(d).hash(&mut h);
    }
    for ((i, d), mat) in m.actions() {
        (i, d).hash(&mut h);
        for r in mat.row_vecs() {
            r.to_bools().hash(&mut h);
        }
    }
    h.finish()
}

#[derive(Clone, Debug, Default)]
struct Level {
    degrees: Vec<i32>,
    images: Vec<BitVec>,
}

type MatCache = RwLock<HashMap<(usize, i32), Arc<BitMatrix>>>;
type SolverCache = RwLock<HashMap<(usize, i32), Arc<Eliminator>>>;
type ExtCache = RwLock<HashMap<(u64, usize, i32), Arc<ExtGroup>>>;

/// A minimal free resolution `⋯ → F_1 → F_0 → N`, complete in all degrees `>= floor`.
///
/// `F_s` in degree `d` has basis `g·a` for generators `g` of degree `>= d` and
/// Milnor basis elements `a` of degree `|g| - d`, ordered by generator then by `a`.
pub struct Resolution {
    spec: AlgebraSpec,
    tables: Arc<AlgebraTables>,
    module: Arc<AModule>,
    floor: i32,
    levels: Vec<Level>,
    matrices: MatCache,
    solvers: SolverCache,
    exts: ExtCache,
}

impl std::fmt::Debug for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Resolution({} over {}, floor {}, gens {:?})",
            self.module.name(),
            self.spec,
            self.floor,
            self.levels.iter().map(|l| l.degrees.len()).collect::<Vec<_>>()
        )
    }
}

/// `(generator, offset, length)` blocks of a free module in one degree.
type Layout = Vec<(usize, usize, usize)>;

/// The lowest degree for which a finite subalgebra resolution of `m` to level `smax` is complete.
pub fn auto_floor(m: &AModule, spec: AlgebraSpec, smax: usize) -> Option<i32> {
    spec.top_degree()
        .map(|top| m.min_degree() - (smax as i32 + 2) * top)
}

/// Minimal resolution of `m` over `spec` to homological degree `smax`.
/// A floor is required for the full algebra; finite subalgebras default to a floor below every generator.
pub fn minimal_resolution(
    m: Arc<AModule>,
    spec: AlgebraSpec,
    smax: usize,
    floor: Option<i32>,
) -> Result<Resolution> {
    if !spec.is_subalgebra_of(&m.algebra()) {
        return Err(BgxError::contract(format!(
            "{} is a module over {}, which does not contain {spec}",
            m.name(),
            m.algebra()
        )));
    }
    let floor = match (floor, auto_floor(&m, spec, smax)) {
        (Some(f), _) => f,
        (None, Some(f)) => f,
        (None, None) => {
            return Err(BgxError::contract("a full-algebra resolution needs a degree floor"));
        }
    };
    let mut res = Resolution {
        spec,
        tables: tables(spec),
        module: m,
        floor,
        levels: Vec::new(),
        matrices: Default::default(),
        solvers: Default::default(),
        exts: Default::default(),
    };
    for s in 0..=smax {
        let hi = if s == 0 {
            res.module.max_degree()
        } else {
            match res.levels[s - 1].degrees.first() {
                Some(&d) => d,
                None => {
                    res.levels.push(Level::default());
                    continue;
                }
            }
        };
        let mut level = Level::default();
        for d in (floor..=hi).rev() {
            let kernel: Vec<BitVec> = if s == 0 {
                let n = res.module.dim(d);
                (0..n).map(|i| BitVec::unit(n, i)).collect()
            } else {
                left_kernel(&res.matrix(s - 1, d)).basis_vectors().to_vec()
            };
            if kernel.is_empty() {
                continue;
            }
            let current = res.level_matrix(&level, s, d);
            let mut elim = Eliminator::new(kernel[0].len());
            for r in current.row_vecs() {
                elim.insert(r);
            }
            for v in kernel {
                if elim.insert(&v) {
                    level.degrees.push(d);
                    level.images.push(v);
                }
            }
        }
        res.levels.push(level);
    }
    Ok(res)
}

impl Resolution {
    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn module(&self) -> &Arc<AModule> {
        &self.module
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    /// Highest level computed.
    pub fn smax(&self) -> usize {
        self.levels.len() - 1
    }

    /// Generator degrees of `F_s`.
    pub fn generators(&self, s: usize) -> &[i32] {
        &self.levels[s].degrees
    }

    /// `d(g)` for generator `j` of `F_s`, in `F_{s-1}` (or the module for `s = 0`).
    pub fn image(&self, s: usize, j: usize) -> &BitVec {
        &self.levels[s].images[j]
    }

    fn layout_of(&self, degrees: &[i32], d: i32) -> Layout {
        let mut out = Vec::new();
        let mut off = 0;
        for (j, &g) in degrees.iter().enumerate() {
            if g < d {
                continue;
            }
            let n = self.tables.dim(g - d);
            if n > 0 {
                out.push((j, off, n));
                off += n;
            }
        }
        out
    }

    pub fn layout(&self, s: usize, d: i32) -> Layout {
        self.layout_of(&self.levels[s].degrees, d)
    }

    pub fn dim(&self, s: usize, d: i32) -> usize {
        self.layout(s, d).iter().map(|b| b.2).sum()
    }

    /// Dimension of the target of `d_s`: `F_{s-1}` or the module.
    fn target_dim(&self, s: usize, d: i32) -> usize {
        if s == 0 {
            self.module.dim(d)
        } else {
            self.dim(s - 1, d)
        }
    }

    /// `x·a` for `x ∈ (F_s)_d` and `a` the `ai`-th basis element in degree `q`.
    pub fn act(&self, s: usize, d: i32, x: &BitVec, q: i32, ai: usize) -> BitVec {
        let src = self.layout(s, d);
        let tgt = self.layout(s, d - q);
        let mut offs = vec![usize::MAX; self.levels[s].degrees.len()];
        for &(j, off, _) in &tgt {
            offs[j] = off;
        }
        let mut out = BitVec::zeros(tgt.iter().map(|b| b.2).sum());
        let mut blk = 0;
        for p in x.iter_ones() {
            while p >= src[blk].1 + src[blk].2 {
                blk += 1;
            }
            let (j, off, _) = src[blk];
            let g = self.levels[s].degrees[j];
            if offs[j] == usize::MAX {
                continue;
            }
            let prod = self.tables.product(g - d, p - off, q, ai);
            for u in prod.iter_ones() {
                out.flip(offs[j] + u);
            }
        }
        out
    }

    /// `x·a` for `x` in the target of `d_s` (the module when `s = 0`).
    fn act_target(&self, s: usize, d: i32, x: &BitVec, q: i32, ai: usize) -> BitVec {
        if s == 0 {
            let a = self.tables.element(q, ai);
            self.module.milnor_action(d, x, &a)
        } else {
            self.act(s - 1, d, x, q, ai)
        }
    }

    fn level_matrix(&self, level: &Level, s: usize, d: i32) -> BitMatrix {
        let cols = self.target_dim(s, d);
        let mut rows = Vec::new();
        for (j, _, n) in self.layout_of(&level.degrees, d) {
            let g = level.degrees[j];
            for ai in 0..n {
                rows.push(self.act_target(s, g, &level.images[j], g - d, ai));
            }
        }
        BitMatrix::from_rows(cols, rows)
    }

    /// Matrix of `d_s: (F_s)_d → (F_{s-1})_d` (or `→ N_d` for `s = 0`).
    pub fn matrix(&self, s: usize, d: i32) -> Arc<BitMatrix> {
        if let Some(m) = self.matrices.read().unwrap().get(&(s, d)) {
            return Arc::clone(m);
        }
        let m = Arc::new(self.level_matrix(&self.levels[s], s, d));
        self.matrices.write().unwrap().insert((s, d), Arc::clone(&m));
        m
    }

    fn solver(&self, s: usize, d: i32) -> Arc<Eliminator> {
        if let Some(e) = self.solvers.read().unwrap().get(&(s, d)) {
            return Arc::clone(e);
        }
        let m = self.matrix(s, d);
        let mut e = Eliminator::new(m.cols());
        for r in m.row_vecs() {
            e.insert(r);
        }
        let e = Arc::new(e);
        self.solvers.write().unwrap().insert((s, d), Arc::clone(&e));
        e
    }

    /// Some `x ∈ (F_s)_d` with `d_s(x) = y`.
    pub fn lift(&self, s: usize, d: i32, y: &BitVec) -> Option<BitVec> {
        if y.is_zero() {
            return Some(BitVec::zeros(self.dim(s, d)));
        }
        let combo = self.solver(s, d).express(y)?;
        Some(BitVec::from_indices(self.dim(s, d), combo))
    }

    /// Exactness `im d_{s+1} = ker d_s` and surjectivity onto the module, in every degree `>= floor`.
    pub fn check_exact(&self) -> Result<()> {
        let top = self.module.max_degree();
        for d in self.floor..=top {
            if self.matrix(0, d).rank() != self.module.dim(d) {
                return Err(BgxError::contract(format!("F_0 does not cover the module in degree {d}")));
            }
            for s in 0..self.smax() {
                let k = self.dim(s, d) - self.matrix(s, d).rank();
                let im = self.matrix(s + 1, d);
                if im.rank() != k || !im.mul(&self.matrix(s, d)).is_zero() {
                    return Err(BgxError::contract(format!("resolution is not exact at F_{s} in degree {d}")));
                }
            }
        }
        Ok(())
    }

    /// Every differential lands in the augmentation ideal.
    pub fn is_minimal(&self) -> bool {
        (1..self.levels.len()).all(|s| {
            self.levels[s].degrees.iter().zip(&self.levels[s].images).all(|(&g, img)| {
                self.layout(s - 1, g).iter().all(|&(j, off, _)| {
                    self.levels[s - 1].degrees[j] != g || !img.get(off)
                })
            })
        })
    }

    /// The resolution of `Σ^k N` obtained by shifting every generator.
    pub fn suspend(&self, k: i32) -> Resolution {
        let module = Arc::new(self.module.suspend(k));
        Resolution {
            spec: self.spec,
            tables: Arc::clone(&self.tables),
            module,
            floor: self.floor + k,
            levels: self
                .levels
                .iter()
                .map(|l| Level {
                    degrees: l.degrees.iter().map(|d| d + k).collect(),
                    images: l.images.clone(),
                })
                .collect(),
            matrices: Default::default(),
            solvers: Default::default(),
            exts: Default::default(),
        }
    }

    fn hom_layout(&self, s: usize, m: &AModule, t: i32) -> Layout {
        let mut out = Vec::new();
        let mut off = 0;
        for (j, &g) in self.levels[s].degrees.iter().enumerate() {
            let n = m.dim(g + t);
            if n > 0 {
                out.push((j, off, n));
                off += n;
            }
        }
        out
    }

    /// Dimension of `Hom_A(F_s, Σ^{-t}M) = ⊕_g M_{|g|+t}`.
    pub fn hom_dim(&self, s: usize, m: &AModule, t: i32) -> usize {
        self.hom_layout(s, m, t).iter().map(|b| b.2).sum()
    }

    fn check_window(&self, s: usize, m: &AModule, t: i32) -> Result<()> {
        if s + 1 > self.smax() {
            return Err(BgxError::contract(format!(
                "Ext^{s} needs level {} but the resolution stops at {}",
                s + 1,
                self.smax()
            )));
        }
        let needed = m.min_degree() - t;
        if !m.is_zero() && needed < self.floor {
            return Err(BgxError::ResolutionFloor {
                needed,
                floor: self.floor,
            });
        }
        Ok(())
    }

    /// `f ↦ f∘d_{s+1}` from `Hom(F_s, Σ^{-t}M)` to `Hom(F_{s+1}, Σ^{-t}M)`.
    pub fn coboundary(&self, s: usize, m: &AModule, t: i32) -> BitMatrix {
        let src = self.hom_layout(s, m, t);
        let tgt = self.hom_layout(s + 1, m, t);
        let rows: usize = src.iter().map(|b| b.2).sum();
        let cols: usize = tgt.iter().map(|b| b.2).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut src_off = vec![None; self.levels[s].degrees.len()];
        for &(j, off, _) in &src {
            src_off[j] = Some(off);
        }
        for &(h, hoff, _) in &tgt {
            let e = self.levels[s + 1].degrees[h];
            let img = &self.levels[s + 1].images[h];
            for (j, off, n) in self.layout(s, e) {
                let Some(row0) = src_off[j] else { continue };
                let g = self.levels[s].degrees[j];
                let mut b = BitMatrix::zeros(m.dim(g + t), m.dim(e + t));
                for a in (0..n).filter(|&a| img.get(off + a)) {
                    b.add_assign(&m.milnor_matrix(&self.tables.element(g - e, a), g + t));
                }
                for (r, row) in b.row_vecs().iter().enumerate() {
                    for c in row.iter_ones() {
                        out.set(row0 + r, hoff + c, true);
                    }
                }
            }
        }
        out
    }

    /// `Ext^{s,t}(N, M)` with a basis of cocycle representatives.
    pub fn ext(&self, m: &AModule, s: usize, t: i32) -> Result<Arc<ExtGroup>> {
        self.check_window(s, m, t)?;
        let key = (fingerprint(m), s, t);
        if let Some(g) = self.exts.read().unwrap().get(&key) {
            return Ok(Arc::clone(g));
        }
        let cocycles = left_kernel(&self.coboundary(s, m, t));
        let boundaries = if s == 0 {
            Subspace::zero(cocycles.ambient_dim())
        } else {
            let c = self.coboundary(s - 1, m, t);
            Subspace::from_spanning(c.cols(), c.row_vecs().to_vec())
        };
        let quotient = QuotientSpace::new(&cocycles, &boundaries);
        let g = Arc::new(ExtGroup {
            s,
            t,
            cocycles,
            boundaries,
            quotient,
        });
        self.exts.write().unwrap().insert(key, Arc::clone(&g));
        Ok(g)
    }

    /// `f(y) ∈ M_{d+t}` for a cochain `f ∈ Hom(F_s, Σ^{-t}M)` and `y ∈ (F_s)_d`.
    pub fn evaluate(&self, s: usize, m: &AModule, t: i32, f: &BitVec, d: i32, y: &BitVec) -> BitVec {
        let hom = self.hom_layout(s, m, t);
        let mut hom_off = vec![None; self.levels[s].degrees.len()];
        for &(j, off, n) in &hom {
            hom_off[j] = Some((off, n));
        }
        let mut out = BitVec::zeros(m.dim(d + t));
        for (j, off, n) in self.layout(s, d) {
            let Some((ho, hn)) = hom_off[j] else { continue };
            let g = self.levels[s].degrees[j];
            let fj = f.slice(ho, hn);
            if fj.is_zero() {
                continue;
            }
            for a in (0..n).filter(|&a| y.get(off + a)) {
                out.xor_assign(&m.milnor_action(g + t, &fj, &self.tables.element(g - d, a)));
            }
        }
        out
    }

    /// Assembles per-generator values `M_{|g|+t}` into a cochain on `F_s`.
    pub fn cochain(&self, s: usize, m: &AModule, t: i32, values: &[Option<BitVec>]) -> BitVec {
        let hom = self.hom_layout(s, m, t);
        let mut out = BitVec::zeros(hom.iter().map(|b| b.2).sum());
        for (j, off, _) in hom {
            if let Some(v) = &values[j] {
                for i in v.iter_ones() {
                    out.set(off + i, true);
                }
            }
        }
        out
    }

    /// The value of a cochain on generator `j`.
    pub fn cochain_value(&self, s: usize, m: &AModule, t: i32, f: &BitVec, j: usize) -> BitVec {
        let g = self.levels[s].degrees[j];
        match self.hom_layout(s, m, t).into_iter().find(|b| b.0 == j) {
            Some((_, off, n)) => f.slice(off, n),
            None => BitVec::zeros(m.dim(g + t)),
        }
    }

    /// Image of `y ∈ (F_s)_d` under a map defined on generators by `images[j] ∈ (F'_k)_{|g_j|}`.
    fn push_forward(&self, s: usize, d: i32, y: &BitVec, tgt: &Resolution, k: usize, images: &[Option<BitVec>]) -> Result<BitVec> {
        let mut out = BitVec::zeros(tgt.dim(k, d));
        for (j, off, n) in self.layout(s, d) {
            let g = self.levels[s].degrees[j];
            let ones: Vec<usize> = (0..n).filter(|&a| y.get(off + a)).collect();
            if ones.is_empty() {
                continue;
            }
            let img = images[j]
                .as_ref()
                .ok_or_else(|| BgxError::contract(format!("chain map undefined on a generator in degree {g}")))?;
            for a in ones {
                out.xor_assign(&tgt.act(k, g, img, g - d, a));
            }
        }
        Ok(out)
    }

    /// Describes a cochain as `g<j>↦<labels>` terms.
    pub fn describe_cochain(&self, s: usize, m: &AModule, t: i32, f: &BitVec) -> String {
        let mut parts = Vec::new();
        for (j, off, n) in self.hom_layout(s, m, t) {
            let g = self.levels[s].degrees[j];
            let v = f.slice(off, n);
            if v.is_zero() {
                continue;
            }
            let labels: Vec<&str> = v.iter_ones().map(|i| m.label(g + t, i)).collect();
            parts.push(format!("g{s}_{j}↦{}", labels.join("+")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }
}

/// One bidegree of Ext.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub s: usize,
    pub t: i32,
    pub cocycles: Subspace,
    pub boundaries: Subspace,
    pub quotient: QuotientSpace,
}

impl ExtGroup {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn representatives(&self) -> &[BitVec] {
        self.quotient.representatives()
    }

    pub fn class_of(&self, cocycle: &BitVec) -> Result<BitVec> {
        self.quotient
            .coordinates(cocycle)
            .ok_or_else(|| BgxError::contract(format!("not a cocycle in bidegree ({}, {})", self.s, self.t)))
    }
}

/// A chain map from levels `s0..` of one resolution to levels `0..` of another,
/// defined on generators of degree `>= lo`.
pub struct ChainMap {
    pub s0: usize,
    pub lo: i32,
    images: Vec<Vec<Option<BitVec>>>,
}

impl ChainMap {
    pub fn depth(&self) -> usize {
        self.images.len()
    }

    /// Lifts `φ`, given on the generators of `src` level `s0` as elements of
    /// `tgt`'s module, through `depth + 1` levels. `φ ∘ d` must vanish on level `s0 + 1`.
    pub fn lift(
        src: &Resolution,
        tgt: &Resolution,
        s0: usize,
        phi: &[Option<BitVec>],
        depth: usize,
        lo: i32,
    ) -> Result<ChainMap> {
        if lo < tgt.floor || lo < src.floor {
            return Err(BgxError::ResolutionFloor {
                needed: lo,
                floor: tgt.floor.max(src.floor),
            });
        }
        if s0 + depth > src.smax() || depth > tgt.smax() {
            return Err(BgxError::contract("chain map deeper than the resolutions"));
        }
        let mut images: Vec<Vec<Option<BitVec>>> = Vec::new();
        for k in 0..=depth {
            let s = s0 + k;
            let mut level = Vec::new();
            for (h, &e) in src.levels[s].degrees.iter().enumerate() {
                if e < lo {
                    level.push(None);
                    continue;
                }
                let y = if k == 0 {
                    phi[h].clone().ok_or_else(|| BgxError::contract("φ undefined on a generator"))?
                } else {
                    src.push_forward(s - 1, e, &src.levels[s].images[h], tgt, k - 1, &images[k - 1])?
                };
                let x = tgt.lift(k, e, &y).ok_or_else(|| {
                    BgxError::contract(format!("cannot lift through F_{k} in degree {e}"))
                })?;
                level.push(Some(x));
            }
            images.push(level);
        }
        Ok(ChainMap { s0, lo, images })
    }

    /// `[f] ↦ [f∘Φ_k]` from `Ext^{k,t}` over `tgt` to `Ext^{s0+k,t}` over `src`;
    /// rows are the classes of the source group.
    pub fn on_ext(&self, src: &Resolution, tgt: &Resolution, m: &AModule, k: usize, t: i32) -> Result<ExtMap> {
        if m.min_degree() - t < self.lo && !m.is_zero() {
            return Err(BgxError::ResolutionFloor {
                needed: m.min_degree() - t,
                floor: self.lo,
            });
        }
        let from = tgt.ext(m, k, t)?;
        let to = src.ext(m, self.s0 + k, t)?;
        let s = self.s0 + k;
        let rows = from
            .representatives()
            .iter()
            .map(|f| {
                let values: Vec<Option<BitVec>> = src.levels[s]
                    .degrees
                    .iter()
                    .enumerate()
                    .map(|(h, &e)| {
                        if m.dim(e + t) == 0 {
                            return None;
                        }
                        self.images[k][h].as_ref().map(|y| tgt.evaluate(k, m, t, f, e, y))
                    })
                    .collect();
                to.class_of(&src.cochain(s, m, t, &values))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtMap {
            from: (k, t),
            to: (s, t),
            matrix: BitMatrix::from_rows(to.dim(), rows),
        })
    }
}

/// A linear map between Ext groups; rows index the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtMap {
    pub from: (usize, i32),
    pub to: (usize, i32),
    pub matrix: BitMatrix,
}

impl ExtMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ExtMap) -> Result<ExtMap> {
        if self.matrix.cols() != next.matrix.rows() {
            return Err(BgxError::DimensionMismatch {
                expected: self.matrix.cols(),
                found: next.matrix.rows(),
            });
        }
        Ok(ExtMap {
            from: self.from,
            to: next.to,
            matrix: self.matrix.mul(&next.matrix),
        })
    }
}

type ResKey = (u64, AlgebraSpec);
type ResCache = RwLock<HashMap<ResKey, Arc<Resolution>>>;

fn res_cache() -> &'static ResCache {
    static C: OnceLock<ResCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// A memoized resolution reaching at least level `smax` and down to `floor`.
pub fn resolution(m: &AModule, spec: AlgebraSpec, smax: usize, floor: Option<i32>) -> Result<Arc<Resolution>> {
    let key = (fingerprint(m), spec);
    let want_floor = floor.or_else(|| auto_floor(m, spec, smax));
    if let Some(r) = res_cache().read().unwrap().get(&key) {
        if r.smax() >= smax && want_floor.is_none_or(|f| r.floor <= f) {
            return Ok(Arc::clone(r));
        }
    }
    let module = if m.algebra() == spec { m.clone() } else { m.restrict(spec)? };
    let r = Arc::new(minimal_resolution(Arc::new(module), spec, smax, want_floor)?);
    res_cache().write().unwrap().insert(key, Arc::clone(&r));
    Ok(r)
}

/// The cocycle `F_1 → K` classifying `0 → K → X → N → 0`: lift the augmentation
/// through `X → N`, then restrict along `d_1`. Defined on generators of degree `>= lo`.
pub fn extension_cocycle(e: &ShortExactSeq, res_n: &Resolution, lo: i32) -> Result<Vec<Option<BitVec>>> {
    if !res_n.module().same_structure_up_to_algebra(e.quotient()) {
        return Err(BgxError::contract("resolution does not resolve the quotient term"));
    }
    let x = e.middle();
    let proj = e.projection();
    let inc = e.inclusion();
    let solver = |mat: BitMatrix| {
        let mut el = Eliminator::new(mat.cols());
        for r in mat.row_vecs() {
            el.insert(r);
        }
        el
    };
    let mut proj_s: HashMap<i32, Eliminator> = HashMap::new();
    let mut lifts = Vec::new();
    for (j, &g) in res_n.generators(0).iter().enumerate() {
        if g < lo {
            lifts.push(None);
            continue;
        }
        let el = proj_s.entry(g).or_insert_with(|| solver(proj.matrix(g)));
        let combo = el
            .express(res_n.image(0, j))
            .ok_or_else(|| BgxError::contract("projection is not surjective"))?;
        lifts.push(Some(BitVec::from_indices(x.dim(g), combo)));
    }
    let mut inc_s: HashMap<i32, Eliminator> = HashMap::new();
    let mut out = Vec::new();
    for (h, &e_deg) in res_n.generators(1).iter().enumerate() {
        if e_deg < lo {
            out.push(None);
            continue;
        }
        let img = res_n.image(1, h);
        let mut v = BitVec::zeros(x.dim(e_deg));
        for (j, off, n) in res_n.layout(0, e_deg) {
            let g = res_n.generators(0)[j];
            for a in (0..n).filter(|&a| img.get(off + a)) {
                let l = lifts[j].as_ref().expect("generators above lo are lifted");
                let elt = res_n.tables.element(g - e_deg, a);
                v.xor_assign(&x.milnor_action(g, l, &elt));
            }
        }
        let el = inc_s.entry(e_deg).or_insert_with(|| solver(inc.matrix(e_deg)));
        let combo = el
            .express(&v)
            .ok_or_else(|| BgxError::contract("sequence is not exact"))?;
        out.push(Some(BitVec::from_indices(e.sub().dim(e_deg), combo)));
    }
    Ok(out)
}

/// The class of an extension in `Ext^1(N, K)`, i.e. `Ext^{1,0}` with target `K`.
pub fn extension_class(e: &ShortExactSeq, res_n: &Resolution) -> Result<BitVec> {
    let k = e.sub();
    let lo = k.min_degree();
    let values = extension_cocycle(e, res_n, lo)?;
    let f = res_n.cochain(1, k, 0, &values);
    res_n.ext(k, 1, 0)?.class_of(&f)
}

/// Connecting map `Ext^{s,t}(K, M) → Ext^{s+1,t}(N, M)` of `0 → K → X → N → 0`,
/// computed as the Yoneda product with the extension class.
pub fn connecting_map(
    e: &ShortExactSeq,
    m: &AModule,
    res_k: &Resolution,
    res_n: &Resolution,
    s: usize,
    t: i32,
) -> Result<ExtMap> {
    if !res_k.module().same_structure_up_to_algebra(e.sub()) {
        return Err(BgxError::contract("resolution does not resolve the sub term"));
    }
    let lo = m.min_degree() - t;
    let phi = extension_cocycle(e, res_n, lo)?;
    let chain = ChainMap::lift(res_n, res_k, 1, &phi, s, lo)?;
    chain.on_ext(res_n, res_k, m, s, t)
}

/// `f^*: Ext^{s,t}(N, M) → Ext^{s,t}(N', M)` for a module map `f: N' → N`.
pub fn induced_map(
    f: &ModuleMap,
    m: &AModule,
    res_src: &Resolution,
    res_tgt: &Resolution,
    s: usize,
    t: i32,
) -> Result<ExtMap> {
    if f.shift() != 0 {
        return Err(BgxError::contract("induced maps need degree-preserving module maps"));
    }
    let lo = m.min_degree() - t;
    let phi: Vec<Option<BitVec>> = res_src
        .generators(0)
        .iter()
        .enumerate()
        .map(|(j, &g)| (g >= lo).then(|| f.apply(g, res_src.image(0, j))))
        .collect();
    let chain = ChainMap::lift(res_src, res_tgt, 0, &phi, s, lo)?;
    chain.on_ext(res_src, res_tgt, m, s, t)
}

/// Margolis homology `ker Q_i / im Q_i` by degree.
pub fn margolis_homology(m: &AModule, i: usize) -> Result<BTreeMap<i32, usize>> {
    let q = MilnorElt::primitive(i);
    let k = q.degree();
    let mut out = BTreeMap::new();
    for d in m.degrees() {
        let here = m.milnor_matrix(&q, d);
        if !here.mul(&m.milnor_matrix(&q, d - k)).is_zero() {
            return Err(BgxError::contract(format!("Q_{i} does not square to zero in degree {d}")));
        }
        let ker = m.dim(d) - here.rank();
        let im = m.milnor_matrix(&q, d + k).rank();
        if ker > im {
            out.insert(d, ker - im);
        }
    }
    Ok(out)
}

/// Outcome of a freeness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub spec: AlgebraSpec,
    pub free: bool,
    /// Degrees of a minimal generating set.
    pub generators: Vec<i32>,
    /// A nonzero kernel element of the cover when not free.
    pub witness: Option<(i32, BitVec)>,
    /// Margolis homology for `Q_0..Q_h` over `E(h)`.
    pub margolis: Vec<BTreeMap<i32, usize>>,
    /// Whether Margolis vanishing agrees with the cover test (always true when not applicable).
    pub margolis_agrees: bool,
}

/// Freeness over a finite subalgebra by comparing a minimal cover with the module.
pub fn is_free_over(m: &AModule, spec: AlgebraSpec) -> Result<FreenessReport> {
    if spec.top_degree().is_none() {
        return Err(BgxError::contract("freeness is tested over finite subalgebras"));
    }
    let res = minimal_resolution(Arc::new(m.restrict(spec)?), spec, 0, None)?;
    let mut witness = None;
    for d in (res.floor()..=m.max_degree()).rev() {
        let k = left_kernel(&res.matrix(0, d));
        if let Some(v) = k.basis_vectors().first() {
            witness = Some((d, v.clone()));
            break;
        }
    }
    let free = witness.is_none();
    let (margolis, margolis_agrees) = match spec {
        AlgebraSpec::Exterior(h) => {
            let ms = (0..=h as usize)
                .map(|i| margolis_homology(m, i))
                .collect::<Result<Vec<_>>>()?;
            let vanish = ms.iter().all(|x| x.is_empty());
            (ms, vanish == free)
        }
        _ => (Vec::new(), true),
    };
    Ok(FreenessReport {
        spec,
        free,
        generators: res.generators(0).to_vec(),
        witness,
        margolis,
        margolis_agrees,
    })
}

/// `Ext^{s,s}(G(⋆), M)` over one algebra, with the operations `Q^r`, `Sq^k` and `h_0`.
pub struct BgExt {
    spec: AlgebraSpec,
    m: Arc<AModule>,
    smax: usize,
}

impl BgExt {
    /// Supports `Ext^{s,s}` for `s <= smax` and maps out of them.
    pub fn new(m: Arc<AModule>, spec: AlgebraSpec, smax: usize) -> Result<Self> {
        let m = if m.algebra() == spec { m } else { Arc::new(m.restrict(spec)?) };
        Ok(Self { spec, m, smax })
    }

    pub fn module(&self) -> &Arc<AModule> {
        &self.m
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    fn floor(&self) -> Option<i32> {
        match self.spec {
            AlgebraSpec::Full => Some(self.m.min_degree() - self.smax as i32 - 3),
            _ => None,
        }
    }

    /// Resolution of `G(n)` deep enough for `Ext^{smax+1}`.
    pub fn res_g(&self, n: u32) -> Result<Arc<Resolution>> {
        let g = crate::brown_gitler::brown_gitler_arc(n);
        let floor = self.floor().or_else(|| auto_floor(&g, self.spec, self.smax + 2));
        resolution(&g, self.spec, self.smax + 2, floor)
    }

    fn check_s(&self, s: usize) -> Result<()> {
        if s > self.smax + 1 {
            return Err(BgxError::contract(format!("s = {s} exceeds the computed range {}", self.smax + 1)));
        }
        Ok(())
    }

    pub fn ext(&self, n: u32, s: usize) -> Result<Arc<ExtGroup>> {
        self.check_s(s)?;
        self.res_g(n)?.ext(&self.m, s, s as i32)
    }

    pub fn dim(&self, n: u32, s: usize) -> Result<usize> {
        Ok(self.ext(n, s)?.dim())
    }

    /// `Q^r: Ext^{s,s}(G(n), M) → Ext^{s+1,s+1}(G(n+r), M)`, the connecting map of `Q(n, r)`.
    pub fn dl(&self, n: u32, r: u32, s: usize) -> Result<ExtMap> {
        self.check_s(s + 1)?;
        let e = crate::brown_gitler::q_extension(n, r)?.restrict(self.spec)?;
        let res_k = self.res_g(n)?.suspend(-1);
        let res_n = self.res_g(n + r)?;
        let mut map = connecting_map(&e, &self.m, &res_k, &res_n, s, s as i32 + 1)?;
        map.from = (s, s as i32);
        Ok(map)
    }

    /// `Sq^k: Ext^{s,s}(G(n), M) → Ext^{s,s}(G(n-k), M)`, induced by `Sq^k·: G(n-k) → G(n)`.
    pub fn sq(&self, k: u32, n: u32, s: usize) -> Result<ExtMap> {
        if k > n {
            return Err(BgxError::Domain(format!("Sq^{k} needs n >= k, got n = {n}")));
        }
        self.check_s(s)?;
        let a = crate::steenrod::SteenrodElement::basis(MilnorElt::sq(k));
        let f = crate::brown_gitler::left_mult(&a, n - k).restrict(self.spec)?;
        induced_map(&f, &self.m, &*self.res_g(n - k)?, &*self.res_g(n)?, s, s as i32)
    }

    /// `h_0: Ext^{s,s}(G(n), M) → Ext^{s+1,s+1}(G(n), M)`, the connecting map of `h_0`-sequence `⊗ G(n)`.
    pub fn h0(&self, n: u32, s: usize) -> Result<ExtMap> {
        self.check_s(s + 1)?;
        let g = Arc::new(crate::brown_gitler::brown_gitler(n).restrict(self.spec)?);
        let e = crate::brown_gitler::h0_sequence()
            .restrict(self.spec)?
            .tensor_right(&g)?;
        let res = self.res_g(n)?;
        let res_k = res.suspend(1);
        let res_n = res.suspend(2);
        let mut map = connecting_map(&e, &self.m, &res_k, &res_n, s, s as i32 - 1)?;
        map.from = (s, s as i32);
        map.to = (s + 1, s as i32 + 1);
        Ok(map)
    }

    /// A multiple of `h_0` by an integer.
    pub fn h0_times(&self, c: u32, n: u32, s: usize) -> Result<ExtMap> {
        let h = self.h0(n, s)?;
        if c % 2 == 1 {
            Ok(h)
        } else {
            Ok(ExtMap {
                matrix: BitMatrix::zeros(h.matrix.rows(), h.matrix.cols()),
                ..h
            })
        }
    }
}

/// `δ_M` on one degree: ranks of `Hom_A(G(g), M⊗H(P_0)) → Ext^{1,1}(G(g), M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    pub g: u32,
    pub hom_dim: usize,
    pub ext_dim: usize,
    pub rank: usize,
    pub matrix: BitMatrix,
}

impl DeltaReport {
    pub fn surjective(&self) -> bool {
        self.rank == self.ext_dim
    }

    pub fn injective(&self) -> bool {
        self.rank == self.hom_dim
    }
}

/// `δ_M(α)` = the class of the pullback of `0 → Σ^{-1}M → M⊗H(P_{-1}) → M⊗H(P_0) → 0` along `α`,
/// over the full Steenrod algebra.
pub fn delta_m_on_hom(m: &AModule, g: u32) -> Result<DeltaReport> {
    if let Some((d, i)) = m.instability_witness() {
        return Err(BgxError::NotUnstable(format!(
            "{}: Sq^{i} acts nontrivially in degree {d}",
            m.name()
        )));
    }
    let basic = crate::brown_gitler::basic_sequence(m, g as i32 + 1)?;
    let k = basic.sub();
    let res = resolution(
        &crate::brown_gitler::brown_gitler(g),
        AlgebraSpec::Full,
        2,
        Some(m.min_degree() - 2),
    )?;
    let ext = res.ext(k, 1, 0)?;
    let target = basic.quotient();
    let hom_dim = target.dim(g as i32);
    let rows = (0..hom_dim)
        .map(|i| {
            let u = BitVec::unit(hom_dim, i);
            let alpha = crate::brown_gitler::hom_from_g(g, Arc::clone(target), &u)?;
            let alpha = alpha.with_ends(Arc::clone(res.module()), Arc::clone(target))?;
            extension_class(&basic.pullback(&alpha)?, &res)
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = BitMatrix::from_rows(ext.dim(), rows);
    Ok(DeltaReport {
        g,
        hom_dim,
        ext_dim: ext.dim(),
        rank: matrix.rank(),
        matrix,
    })
}

/// The part of `Ext^{s,s}(G(n), M)` reached from `s = 0` by the operations `Q^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationEntry {
    pub s: usize,
    pub n: u32,
    pub dim: usize,
    pub generated: usize,
    /// Representatives of a complement to the generated subspace.
    pub missing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub spec: AlgebraSpec,
    pub module: String,
    pub smax: usize,
    pub nmax: u32,
    pub entries: Vec<GenerationEntry>,
}

impl GenerationReport {
    pub fn generated(&self) -> bool {
        self.entries.iter().all(|e| e.generated == e.dim)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("s\tn\tdim\tgenerated\tmissing\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.s,
                e.n,
                e.dim,
                e.generated,
                e.missing.join("; ")
            ));
        }
        out
    }
}

/// Closes `⊕_n Ext^{0,0}(G(n), M)` under every `Q^r` with `n + r <= nmax` and
/// compares with `Ext^{s,s}` for `s <= smax`.
pub fn dl_generation_check(m: Arc<AModule>, spec: AlgebraSpec, smax: usize, nmax: u32) -> Result<GenerationReport> {
    let name = m.name().to_string();
    let ctx = BgExt::new(m, spec, smax)?;
    let mut gen: BTreeMap<(usize, u32), Subspace> = BTreeMap::new();
    for n in 0..=nmax {
        let d = ctx.dim(n, 0)?;
        gen.insert((0, n), Subspace::full(d));
    }
    for s in 0..smax {
        for n2 in 0..=nmax {
            let d2 = ctx.dim(n2, s + 1)?;
            let mut vecs = Vec::new();
            for n in 0..=n2 {
                let r = n2 - n;
                let src = &gen[&(s, n)];
                if src.dim() == 0 || d2 == 0 {
                    continue;
                }
                let q = ctx.dl(n, r, s)?;
                vecs.extend(src.basis_vectors().iter().map(|v| q.matrix.vec_mul(v)));
            }
            gen.insert((s + 1, n2), Subspace::from_spanning(d2, vecs));
        }
    }
    let mut entries = Vec::new();
    for ((s, n), sub) in &gen {
        let ext = ctx.ext(*n, *s)?;
        let res = ctx.res_g(*n)?;
        let q = QuotientSpace::new(&Subspace::full(ext.dim()), sub);
        let missing = q
            .representatives()
            .iter()
            .map(|c| {
                let mut cocycle = BitVec::zeros(ext.cocycles.ambient_dim());
                for i in c.iter_ones() {
                    cocycle.xor_assign(&ext.representatives()[i]);
                }
                res.describe_cochain(*s, ctx.module(), *s as i32, &cocycle)
            })
            .collect();
        entries.push(GenerationEntry {
            s: *s,
            n: *n,
            dim: ext.dim(),
            generated: sub.dim(),
            missing,
        });
    }
    Ok(GenerationReport {
        spec,
        module: name,
        smax,
        nmax,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_e1() {
        let f = AModule::f2_at(AlgebraSpec::Exterior(1), 0);
        let res = resolution(&f, AlgebraSpec::Exterior(1), 5, None).unwrap();
        res.check_exact().unwrap();
        assert!(res.is_minimal());
        for s in 0..5usize {
            for t in -2..20 {
                let expected = (0..=s as i32).any(|b| (s as i32 - b) + 3 * b == t);
                assert_eq!(res.ext(&f, s, t).unwrap().dim(), expected as usize, "({s},{t})");
            }
        }
    }

    #[test]
    fn squaring_triangles_small() {
        let m = Arc::new(AModule::f2_at(AlgebraSpec::Full, 2));
        let ctx = BgExt::new(m, AlgebraSpec::Exterior(1), 3).unwrap();
        for n in 1..=2u32 {
            for s in 0..=2usize {
                let top = ctx.sq(n, 2 * n, s).unwrap().then(&ctx.dl(n, n, s).unwrap()).unwrap();
                assert_eq!(top.matrix, ctx.h0(2 * n, s).unwrap().matrix, "Q^n Sq^n, n={n} s={s}");
                let bottom = ctx.dl(n, n, s).unwrap().then(&ctx.sq(n, 2 * n, s + 1).unwrap()).unwrap();
                assert_eq!(bottom.matrix, ctx.h0_times(n + 1, n, s).unwrap().matrix, "Sq^n Q^n, n={n} s={s}");
            }
        }
    }

    #[test]
    fn free_module_has_length_zero() {
        let f = AModule::f2_at(AlgebraSpec::Exterior(0), 0);
        let r = is_free_over(&f, AlgebraSpec::Exterior(0)).unwrap();
        assert!(!r.free && r.margolis_agrees);
    }
}
