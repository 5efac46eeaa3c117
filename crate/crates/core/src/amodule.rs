//! Finite graded right modules over the Steenrod algebra (or one of its
//! finite sub-Hopf algebras), module maps, and short exact sequences.
//!
//! Conventions: a module stores, for each `i >= 1` and source degree `d`, the
//! matrix of `x ↦ x·Sq^i` from degree `d` to degree `d - i`, rows indexed by the
//! source basis. Elements are row vectors, so `(x·Sq^a)·Sq^b = x·M_a·M_b`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{AdemViolation, BgxError, Result};
use crate::f2::{left_kernel, solve, BitMatrix, BitVec, Subspace};
use crate::steenrod::{binom2, milnor_product, milnor_to_composite, AlgebraSpec, MilnorElt};

type MatrixCache = Arc<RwLock<HashMap<(MilnorElt, i32), BitMatrix>>>;

/// A finite graded right module.
#[derive(Clone)]
pub struct AModule {
    name: String,
    algebra: AlgebraSpec,
    min_degree: i32,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    actions: BTreeMap<(u32, i32), BitMatrix>,
    exact_through: Option<i32>,
    cache: MatrixCache,
}

impl PartialEq for AModule {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels && self.same_structure(other)
    }
}

impl fmt::Debug for AModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AModule({}, {}, dims {:?})", self.name, self.algebra, self.dims_map())
    }
}

impl AModule {
    /// Assembles a module from raw data. Checks shapes only; see [`AModule::validate`]
    /// for the module axioms.
    pub fn from_parts(
        name: impl Into<String>,
        algebra: AlgebraSpec,
        min_degree: i32,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        actions: BTreeMap<(u32, i32), BitMatrix>,
    ) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(BgxError::DimensionMismatch {
                expected: dims.len(),
                found: labels.len(),
            });
        }
        for (l, &n) in labels.iter().zip(&dims) {
            if l.len() != n {
                return Err(BgxError::DimensionMismatch {
                    expected: n,
                    found: l.len(),
                });
            }
        }
        let mut m = Self {
            name: name.into(),
            algebra,
            min_degree,
            dims,
            labels,
            actions: BTreeMap::new(),
            exact_through: None,
            cache: Default::default(),
        };
        for ((i, d), mat) in actions {
            if i == 0 {
                return Err(BgxError::contract("Sq^0 acts as the identity and is not stored"));
            }
            let (r, c) = (m.dim(d), m.dim(d - i as i32));
            if mat.rows() != r || mat.cols() != c {
                return Err(BgxError::contract(format!(
                    "Sq^{i} in degree {d} has shape {}x{}, expected {r}x{c}",
                    mat.rows(),
                    mat.cols()
                )));
            }
            if !mat.is_zero() {
                m.actions.insert((i, d), mat);
            }
        }
        m.trim();
        Ok(m)
    }

    /// The zero module.
    pub fn zero(algebra: AlgebraSpec) -> Self {
        Self::from_parts("0", algebra, 0, Vec::new(), Vec::new(), BTreeMap::new()).unwrap()
    }

    /// One copy of F2 in degree `d`.
    pub fn f2_at(algebra: AlgebraSpec, d: i32) -> Self {
        let name = if d == 0 {
            "F2".to_string()
        } else {
            format!("Σ^{d}F2")
        };
        Self::from_parts(name, algebra, d, vec![1], vec![vec!["1".into()]], BTreeMap::new()).unwrap()
    }

    fn trim(&mut self) {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.labels.pop();
        }
        while self.dims.first() == Some(&0) {
            self.dims.remove(0);
            self.labels.remove(0);
            self.min_degree += 1;
        }
        if self.dims.is_empty() {
            self.min_degree = 0;
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> AlgebraSpec {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Lowest nonzero degree (0 for the zero module).
    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    /// Highest nonzero degree (`min_degree - 1` for the zero module).
    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree()..=self.max_degree()
    }

    pub fn dim(&self, d: i32) -> usize {
        let k = d - self.min_degree;
        if k < 0 {
            0
        } else {
            self.dims.get(k as usize).copied().unwrap_or(0)
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dims_map(&self) -> BTreeMap<i32, usize> {
        self.degrees().map(|d| (d, self.dim(d))).filter(|&(_, n)| n > 0).collect()
    }

    pub fn labels(&self, d: i32) -> &[String] {
        let k = d - self.min_degree;
        if k < 0 || k as usize >= self.labels.len() {
            &[]
        } else {
            &self.labels[k as usize]
        }
    }

    pub fn label(&self, d: i32, i: usize) -> &str {
        &self.labels(d)[i]
    }

    /// Degree through which this module agrees with the (possibly infinite)
    /// module it truncates; `None` if it is not a truncation.
    pub fn exact_through(&self) -> Option<i32> {
        self.exact_through
    }

    pub fn with_exact_through(mut self, d: Option<i32>) -> Self {
        self.exact_through = d;
        self
    }

    /// Stored total-square actions with nonzero matrices, keyed by `(i, source degree)`.
    pub fn actions(&self) -> &BTreeMap<(u32, i32), BitMatrix> {
        &self.actions
    }

    /// Matrix of `x ↦ x·Sq^i` on degree `d`.
    pub fn sq(&self, i: u32, d: i32) -> BitMatrix {
        if i == 0 {
            return BitMatrix::identity(self.dim(d));
        }
        match self.actions.get(&(i, d)) {
            Some(m) => m.clone(),
            None => BitMatrix::zeros(self.dim(d), self.dim(d - i as i32)),
        }
    }

    pub fn act_sq(&self, i: u32, d: i32, x: &BitVec) -> BitVec {
        if i == 0 {
            return x.clone();
        }
        match self.actions.get(&(i, d)) {
            Some(m) => m.vec_mul(x),
            None => BitVec::zeros(self.dim(d - i as i32)),
        }
    }

    /// Matrix of `x ↦ x·m` on degree `d`, through the expansion of `m` in total squares.
    pub fn milnor_matrix(&self, m: &MilnorElt, d: i32) -> BitMatrix {
        if m.profile().len() == 1 {
            return self.sq(m.profile()[0], d);
        }
        if m.is_unit() {
            return BitMatrix::identity(self.dim(d));
        }
        let key = (m.clone(), d);
        if let Some(mat) = self.cache.read().unwrap().get(&key) {
            return mat.clone();
        }
        let target = d - m.degree();
        let mut acc = BitMatrix::zeros(self.dim(d), self.dim(target));
        if self.dim(d) > 0 && self.dim(target) > 0 {
            for word in milnor_to_composite(m) {
                let mut cur = d;
                let mut prod = BitMatrix::identity(self.dim(d));
                for &a in &word {
                    prod = prod.mul(&self.sq(a, cur));
                    cur -= a as i32;
                }
                acc.add_assign(&prod);
            }
        }
        self.cache.write().unwrap().insert(key, acc.clone());
        acc
    }

    /// `x·m` for `x` in degree `d`.
    pub fn milnor_action(&self, d: i32, x: &BitVec, m: &MilnorElt) -> BitVec {
        self.milnor_matrix(m, d).vec_mul(x)
    }

    /// Algebra elements whose actions generate all others on this module.
    pub fn generators(&self) -> Vec<MilnorElt> {
        algebra_generators(self.algebra, (self.max_degree() - self.min_degree()).max(0))
    }

    /// Checks the module axioms. For the full algebra these are the Adem
    /// relations on total squares; for a finite subalgebra, associativity of
    /// the induced action of its Milnor basis.
    pub fn validate(&self) -> Result<()> {
        match self.algebra {
            AlgebraSpec::Full => self.validate_adem(),
            spec => self.validate_subalgebra(spec),
        }
    }

    fn validate_adem(&self) -> Result<()> {
        let span = (self.max_degree() - self.min_degree()).max(0) as u32;
        for d in self.degrees() {
            if self.dim(d) == 0 {
                continue;
            }
            for b in 1..=span {
                for a in 1..(2 * b).min(span + 1) {
                    if a + b > span {
                        break;
                    }
                    let lhs = self.sq(a, d).mul(&self.sq(b, d - a as i32));
                    let mut rhs = BitMatrix::zeros(lhs.rows(), lhs.cols());
                    for c in 0..=a / 2 {
                        if binom2(b as i64 - c as i64 - 1, a as i64 - 2 * c as i64) {
                            let e = a + b - c;
                            rhs.add_assign(&self.sq(e, d).mul(&self.sq(c, d - e as i32)));
                        }
                    }
                    if lhs != rhs {
                        let basis_index = (0..lhs.rows())
                            .find(|&r| lhs.row(r) != rhs.row(r))
                            .unwrap_or(0);
                        return Err(BgxError::Adem(AdemViolation {
                            a,
                            b,
                            degree: d,
                            basis_index,
                        }));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_subalgebra(&self, spec: AlgebraSpec) -> Result<()> {
        let top = spec.top_degree().unwrap_or(0);
        let elems: Vec<MilnorElt> = (1..=top).flat_map(|k| spec.basis(k)).collect();
        for d in self.degrees() {
            for a in &elems {
                for b in &elems {
                    let ab = milnor_product(a, b);
                    let lhs = self
                        .milnor_matrix(a, d)
                        .mul(&self.milnor_matrix(b, d - a.degree()));
                    let mut rhs = BitMatrix::zeros(lhs.rows(), lhs.cols());
                    for t in ab.terms() {
                        if !spec.contains(t) {
                            return Err(BgxError::contract(format!(
                                "{a}·{b} leaves {spec}"
                            )));
                        }
                        rhs.add_assign(&self.milnor_matrix(t, d));
                    }
                    if lhs != rhs {
                        let basis_index = (0..lhs.rows())
                            .find(|&r| lhs.row(r) != rhs.row(r))
                            .unwrap_or(0);
                        return Err(BgxError::contract(format!(
                            "{spec}-action is not associative: ({a})({b}) on basis vector {basis_index} in degree {d}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `x·Sq^i = 0` whenever `2i > |x|`, for all `i >= 0`. Since `Sq^0`
    /// is the identity, an unstable module vanishes in negative degrees.
    pub fn is_unstable(&self) -> bool {
        self.instability_witness().is_none()
    }

    /// First `(degree, i)` at which instability fails.
    pub fn instability_witness(&self) -> Option<(i32, u32)> {
        for d in self.degrees() {
            if self.dim(d) == 0 {
                continue;
            }
            if d < 0 {
                return Some((d, 0));
            }
            for i in (d as u32 / 2 + 1)..=(d - self.min_degree()).max(0) as u32 {
                if !self.sq(i, d).is_zero() {
                    return Some((d, i));
                }
            }
        }
        None
    }

    /// Structural equality: same algebra, degrees, dimensions and action
    /// matrices; names and labels are ignored.
    pub fn same_structure(&self, other: &AModule) -> bool {
        self.algebra == other.algebra
            && self.min_degree == other.min_degree
            && self.dims == other.dims
            && self.actions == other.actions
    }

    /// Structural equality ignoring which algebra the module is regarded over.
    pub fn same_structure_up_to_algebra(&self, other: &AModule) -> bool {
        self.min_degree == other.min_degree && self.dims == other.dims && self.actions == other.actions
    }

    /// `Σ^k M`: degrees shift by `k`, action matrices are unchanged.
    pub fn suspend(&self, k: i32) -> AModule {
        if k == 0 {
            return self.clone();
        }
        let actions = self
            .actions
            .iter()
            .map(|(&(i, d), m)| ((i, d + k), m.clone()))
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|ls| ls.iter().map(|l| suspend_label(l, k)).collect())
            .collect();
        let mut m = AModule::from_parts(
            suspend_name(&self.name, k),
            self.algebra,
            self.min_degree + k,
            self.dims.clone(),
            labels,
            actions,
        )
        .unwrap();
        m.exact_through = self.exact_through.map(|e| e + k);
        m
    }

    /// The same module regarded over a subalgebra.
    pub fn restrict(&self, spec: AlgebraSpec) -> Result<AModule> {
        if !spec.is_subalgebra_of(&self.algebra) {
            return Err(BgxError::contract(format!(
                "{spec} is not a subalgebra of {}",
                self.algebra
            )));
        }
        let mut m = self.clone();
        m.algebra = spec;
        m.cache = Default::default();
        Ok(m)
    }

    /// Submodule of degrees `<= top`; exact through `top`.
    pub fn truncate_above(&self, top: i32) -> AModule {
        let spaces = self
            .degrees()
            .filter(|&d| d <= top)
            .map(|d| (d, Subspace::full(self.dim(d))))
            .collect();
        let (mut m, _) = self.submodule(&spaces).expect("degree truncations are submodules");
        m.name = self.name.clone();
        m.exact_through = Some(self.exact_through.map_or(top, |e| e.min(top)));
        m
    }

    /// The submodule with the given subspaces (absent degrees are zero),
    /// together with its inclusion. Basis vectors are the reduced echelon rows.
    pub fn submodule(&self, spaces: &BTreeMap<i32, Subspace>) -> Result<(AModule, ModuleMap)> {
        let get = |d: i32| -> Subspace {
            spaces
                .get(&d)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(self.dim(d)))
        };
        let degrees: Vec<i32> = self.degrees().collect();
        let mut actions = BTreeMap::new();
        for &d in &degrees {
            let s = get(d);
            if s.dim() == 0 {
                continue;
            }
            for i in 1..=(d - self.min_degree()).max(0) as u32 {
                let t = get(d - i as i32);
                let rows = s
                    .basis_vectors()
                    .iter()
                    .map(|v| {
                        let img = self.act_sq(i, d, v);
                        t.coordinates(&img).ok_or_else(|| {
                            BgxError::contract(format!(
                                "subspace in degree {d} is not closed under Sq^{i}"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                actions.insert((i, d), BitMatrix::from_rows(t.dim(), rows));
            }
        }
        let min = self.min_degree;
        let dims: Vec<usize> = degrees.iter().map(|&d| get(d).dim()).collect();
        let labels = degrees
            .iter()
            .map(|&d| {
                get(d)
                    .basis_vectors()
                    .iter()
                    .map(|v| combination_label(self.labels(d), v))
                    .collect()
            })
            .collect();
        let mut sub = AModule::from_parts(
            format!("sub({})", self.name),
            self.algebra,
            min,
            dims,
            labels,
            actions,
        )?;
        sub.exact_through = self.exact_through;
        let matrices = degrees
            .iter()
            .map(|&d| (d, get(d).basis().clone()))
            .collect();
        let sub = Arc::new(sub);
        let inc = ModuleMap::new(Arc::clone(&sub), Arc::new(self.clone()), 0, matrices)?;
        Ok(((*sub).clone(), inc))
    }

    /// The quotient by a submodule given by subspaces, with the projection. The
    /// basis of the quotient in degree `d` is the set of non-pivot basis vectors.
    pub fn quotient(&self, spaces: &BTreeMap<i32, Subspace>) -> Result<(AModule, ModuleMap)> {
        let get = |d: i32| -> Subspace {
            spaces
                .get(&d)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(self.dim(d)))
        };
        let degrees: Vec<i32> = self.degrees().collect();
        let keep: BTreeMap<i32, Vec<usize>> = degrees.iter().map(|&d| (d, get(d).non_pivots())).collect();
        let project = |d: i32, v: &BitVec| -> BitVec {
            let r = get(d).reduce(v);
            let k = &keep[&d];
            BitVec::from_indices(k.len(), k.iter().enumerate().filter(|(_, &c)| r.get(c)).map(|(j, _)| j))
        };
        for &d in &degrees {
            let s = get(d);
            for i in 1..=(d - self.min_degree()).max(0) as u32 {
                for v in s.basis_vectors() {
                    let img = self.act_sq(i, d, v);
                    if !get(d - i as i32).contains(&img) {
                        return Err(BgxError::contract(format!(
                            "subspace in degree {d} is not closed under Sq^{i}"
                        )));
                    }
                }
            }
        }
        let mut actions = BTreeMap::new();
        for &d in &degrees {
            for i in 1..=(d - self.min_degree()).max(0) as u32 {
                let t = d - i as i32;
                if !keep.contains_key(&t) {
                    continue;
                }
                let rows = keep[&d]
                    .iter()
                    .map(|&c| project(t, &self.act_sq(i, d, &BitVec::unit(self.dim(d), c))))
                    .collect();
                actions.insert((i, d), BitMatrix::from_rows(keep[&t].len(), rows));
            }
        }
        let dims = degrees.iter().map(|d| keep[d].len()).collect();
        let labels = degrees
            .iter()
            .map(|&d| keep[&d].iter().map(|&c| self.label(d, c).to_string()).collect())
            .collect();
        let mut q = AModule::from_parts(
            format!("{}/sub", self.name),
            self.algebra,
            self.min_degree,
            dims,
            labels,
            actions,
        )?;
        q.exact_through = self.exact_through;
        let q = Arc::new(q);
        let matrices = degrees
            .iter()
            .map(|&d| {
                let rows = (0..self.dim(d))
                    .map(|c| project(d, &BitVec::unit(self.dim(d), c)))
                    .collect();
                (d, BitMatrix::from_rows(keep[&d].len(), rows))
            })
            .collect();
        let proj = ModuleMap::new(Arc::new(self.clone()), Arc::clone(&q), 0, matrices)?;
        Ok(((*q).clone(), proj))
    }

    /// Per-degree subspaces of the submodule generated by the given homogeneous elements.
    pub fn generated_subspaces(&self, elements: &[(i32, BitVec)]) -> BTreeMap<i32, Subspace> {
        let gens = self.generators();
        let mut out: BTreeMap<i32, Subspace> = BTreeMap::new();
        for d in self.degrees().rev() {
            let mut vecs: Vec<BitVec> = elements
                .iter()
                .filter(|(e, _)| *e == d)
                .map(|(_, v)| v.clone())
                .collect();
            for g in &gens {
                let src = d + g.degree();
                if let Some(s) = out.get(&src) {
                    let mat = self.milnor_matrix(g, src);
                    vecs.extend(s.basis_vectors().iter().map(|v| mat.vec_mul(v)));
                }
            }
            let s = Subspace::from_spanning(self.dim(d), vecs);
            if s.dim() > 0 {
                out.insert(d, s);
            }
        }
        out
    }

    /// Direct sum; the basis in each degree lists `self` first.
    pub fn direct_sum(&self, other: &AModule) -> AModule {
        let lo = self.min_degree().min(other.min_degree());
        let hi = self.max_degree().max(other.max_degree());
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut actions = BTreeMap::new();
        for d in lo..=hi {
            for i in 1..=(d - lo).max(0) as u32 {
                let a = self.sq(i, d);
                let b = other.sq(i, d);
                let t = d - i as i32;
                let mut m = BitMatrix::zeros(self.dim(d) + other.dim(d), self.dim(t) + other.dim(t));
                for r in 0..a.rows() {
                    for c in a.row(r).iter_ones() {
                        m.set(r, c, true);
                    }
                }
                for r in 0..b.rows() {
                    for c in b.row(r).iter_ones() {
                        m.set(a.rows() + r, a.cols() + c, true);
                    }
                }
                actions.insert((i, d), m);
            }
        }
        let dims = (lo..=hi).map(|d| self.dim(d) + other.dim(d)).collect();
        let labels = (lo..=hi)
            .map(|d| {
                self.labels(d)
                    .iter()
                    .map(|l| format!("({l},0)"))
                    .chain(other.labels(d).iter().map(|l| format!("(0,{l})")))
                    .collect()
            })
            .collect();
        let mut m = AModule::from_parts(
            format!("{} ⊕ {}", self.name, other.name),
            self.algebra,
            lo,
            dims,
            labels,
            actions,
        )
        .unwrap();
        m.exact_through = min_opt(self.exact_through, other.exact_through);
        m
    }

    /// Tensor product with the Cartan formula. The basis in degree `d` lists
    /// pairs `x⊗y` ordered by the degree of `x`, then by the indices of `x` and `y`.
    pub fn tensor(&self, other: &AModule) -> Result<AModule> {
        if self.algebra != other.algebra {
            return Err(BgxError::contract(format!(
                "tensor of modules over {} and {}",
                self.algebra, other.algebra
            )));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(AModule::zero(self.algebra));
        }
        let lo = self.min_degree() + other.min_degree();
        let hi = self.max_degree() + other.max_degree();
        let layout = TensorLayout::new(self, other);
        let mut actions = BTreeMap::new();
        for d in lo..=hi {
            for k in 1..=(d - lo) as u32 {
                let t = d - k as i32;
                let mut m = BitMatrix::zeros(layout.dim(d), layout.dim(t));
                for (p, (a, ai, bi)) in layout.basis(d).iter().enumerate() {
                    let b = d - a;
                    for i in 0..=k {
                        let j = k - i;
                        let xa = self.act_sq(i, *a, &BitVec::unit(self.dim(*a), *ai));
                        if xa.is_zero() {
                            continue;
                        }
                        let yb = other.act_sq(j, b, &BitVec::unit(other.dim(b), *bi));
                        if yb.is_zero() {
                            continue;
                        }
                        let (na, nb) = (*a - i as i32, b - j as i32);
                        for u in xa.iter_ones() {
                            for v in yb.iter_ones() {
                                let q = layout.index(na, u, nb, v);
                                m.set(p, q, !m.get(p, q));
                            }
                        }
                    }
                }
                actions.insert((k, d), m);
            }
        }
        let dims = (lo..=hi).map(|d| layout.dim(d)).collect();
        let labels = (lo..=hi)
            .map(|d| {
                layout
                    .basis(d)
                    .iter()
                    .map(|&(a, ai, bi)| format!("{}⊗{}", self.label(a, ai), other.label(d - a, bi)))
                    .collect()
            })
            .collect();
        let mut m = AModule::from_parts(
            format!("{} ⊗ {}", self.name, other.name),
            self.algebra,
            lo,
            dims,
            labels,
            actions,
        )?;
        let e1 = self.exact_through.map(|e| e + other.min_degree());
        let e2 = other.exact_through.map(|e| e + self.min_degree());
        m.exact_through = min_opt(e1, e2);
        Ok(m)
    }

    /// `Ω^∞ M`: the largest unstable submodule, with its inclusion.
    pub fn omega_inf(&self) -> (AModule, ModuleMap) {
        let spaces = self.omega_inf_subspaces();
        let (m, inc) = self.submodule(&spaces).expect("largest unstable submodule is closed");
        (m.with_name(format!("Ω^∞({})", self.name)), inc)
    }

    /// Degreewise subspaces of `Ω^∞ M`, computed bottom-up.
    pub fn omega_inf_subspaces(&self) -> BTreeMap<i32, Subspace> {
        let mut out: BTreeMap<i32, Subspace> = BTreeMap::new();
        for d in self.degrees() {
            let n = self.dim(d);
            if n == 0 || d < 0 {
                continue;
            }
            let mut blocks: Vec<BitMatrix> = Vec::new();
            for i in 1..=(d - self.min_degree()) as u32 {
                let t = d - i as i32;
                let mat = self.sq(i, d);
                if mat.is_zero() {
                    continue;
                }
                if 2 * i as i32 > d {
                    blocks.push(mat);
                } else {
                    let v = out.get(&t).cloned().unwrap_or_else(|| Subspace::zero(self.dim(t)));
                    let rows = mat.row_vecs().iter().map(|r| v.reduce(r)).collect();
                    blocks.push(BitMatrix::from_rows(self.dim(t), rows));
                }
            }
            let s = if blocks.is_empty() {
                Subspace::full(n)
            } else {
                row_kernel(&blocks)
            };
            if s.dim() > 0 {
                out.insert(d, s);
            }
        }
        out
    }

    /// Basis of the space of module maps `self → Σ^{shift} target`.
    pub fn hom_space(&self, target: &AModule, shift: i32) -> Vec<ModuleMap> {
        let tgt = Arc::new(target.suspend(shift));
        let src = Arc::new(self.clone());
        let sys = MapSystem::new(Arc::clone(&src), Arc::clone(&tgt));
        sys.solution_basis()
            .into_iter()
            .map(|m| ModuleMap {
                shift,
                target: Arc::new(target.clone()),
                ..m
            })
            .collect()
    }
}

/// `{x : x·B = 0 for every block B}`.
fn row_kernel(blocks: &[BitMatrix]) -> Subspace {
    let mut big = blocks[0].clone();
    for b in &blocks[1..] {
        big = big.hstack(b);
    }
    left_kernel(&big)
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn suspend_name(name: &str, k: i32) -> String {
    format!("Σ^{k}{name}")
}

fn suspend_label(label: &str, k: i32) -> String {
    if k == 1 {
        format!("σ{label}")
    } else {
        format!("σ^{k}{label}")
    }
}

fn combination_label(labels: &[String], v: &BitVec) -> String {
    let parts: Vec<&str> = v.iter_ones().map(|i| labels[i].as_str()).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Generators of an algebra relevant on modules of degree span `span`.
pub fn algebra_generators(spec: AlgebraSpec, span: i32) -> Vec<MilnorElt> {
    match spec {
        AlgebraSpec::Full => {
            let mut out = Vec::new();
            let mut k = 1;
            while k <= span.max(1) {
                out.push(MilnorElt::sq(k as u32));
                k *= 2;
            }
            out
        }
        AlgebraSpec::A1 => vec![MilnorElt::sq(1), MilnorElt::sq(2)],
        AlgebraSpec::Exterior(h) => (0..=h as usize).map(MilnorElt::primitive).collect(),
    }
}

/// Index bookkeeping for the basis of a tensor product.
pub struct TensorLayout {
    bases: BTreeMap<i32, Vec<(i32, usize, usize)>>,
    index: HashMap<(i32, usize, i32, usize), usize>,
}

impl TensorLayout {
    pub fn new(m: &AModule, n: &AModule) -> Self {
        let mut bases: BTreeMap<i32, Vec<(i32, usize, usize)>> = BTreeMap::new();
        for a in m.degrees() {
            for b in n.degrees() {
                for ai in 0..m.dim(a) {
                    for bi in 0..n.dim(b) {
                        bases.entry(a + b).or_default().push((a, ai, bi));
                    }
                }
            }
        }
        let mut index = HashMap::new();
        for (&d, list) in bases.iter_mut() {
            list.sort();
            for (p, &(a, ai, bi)) in list.iter().enumerate() {
                index.insert((a, ai, d - a, bi), p);
            }
        }
        Self { bases, index }
    }

    pub fn dim(&self, d: i32) -> usize {
        self.bases.get(&d).map_or(0, |b| b.len())
    }

    /// `(degree of x, index of x, index of y)` for each basis vector in degree `d`.
    pub fn basis(&self, d: i32) -> &[(i32, usize, usize)] {
        self.bases.get(&d).map_or(&[], |b| b.as_slice())
    }

    /// Position of `x⊗y` with `x` the `ai`-th basis vector in degree `a`.
    pub fn index(&self, a: i32, ai: usize, b: i32, bi: usize) -> usize {
        self.index[&(a, ai, b, bi)]
    }
}

/// A graded linear map `source_d → target_{d+shift}`, stored per source degree.
#[derive(Clone)]
pub struct ModuleMap {
    source: Arc<AModule>,
    target: Arc<AModule>,
    shift: i32,
    matrices: BTreeMap<i32, BitMatrix>,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleMap({} → Σ^{}{})",
            self.source.name(),
            self.shift,
            self.target.name()
        )
    }
}

impl PartialEq for ModuleMap {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift
            && self.source.same_structure(&other.source)
            && self.target.same_structure(&other.target)
            && self
                .source
                .degrees()
                .all(|d| self.matrix(d) == other.matrix(d))
    }
}

impl ModuleMap {
    pub fn new(
        source: Arc<AModule>,
        target: Arc<AModule>,
        shift: i32,
        matrices: BTreeMap<i32, BitMatrix>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (d, m) in matrices {
            let (r, c) = (source.dim(d), target.dim(d + shift));
            if m.rows() != r || m.cols() != c {
                return Err(BgxError::contract(format!(
                    "map matrix in degree {d} has shape {}x{}, expected {r}x{c}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                kept.insert(d, m);
            }
        }
        Ok(Self {
            source,
            target,
            shift,
            matrices: kept,
        })
    }

    pub fn zero(source: Arc<AModule>, target: Arc<AModule>, shift: i32) -> Self {
        Self {
            source,
            target,
            shift,
            matrices: BTreeMap::new(),
        }
    }

    pub fn identity(m: Arc<AModule>) -> Self {
        let matrices = m.degrees().map(|d| (d, BitMatrix::identity(m.dim(d)))).collect();
        Self::new(Arc::clone(&m), m, 0, matrices).unwrap()
    }

    /// The identity map between two structurally equal modules.
    pub fn identification(source: Arc<AModule>, target: Arc<AModule>) -> Result<Self> {
        if !source.same_structure(&target) {
            return Err(BgxError::contract(format!(
                "{} and {} are not structurally equal",
                source.name(),
                target.name()
            )));
        }
        let matrices = source
            .degrees()
            .map(|d| (d, BitMatrix::identity(source.dim(d))))
            .collect();
        Self::new(source, target, 0, matrices)
    }

    pub fn source(&self) -> &Arc<AModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AModule> {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn matrix(&self, d: i32) -> BitMatrix {
        self.matrices
            .get(&d)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(self.source.dim(d), self.target.dim(d + self.shift)))
    }

    pub fn apply(&self, d: i32, x: &BitVec) -> BitVec {
        match self.matrices.get(&d) {
            Some(m) => m.vec_mul(x),
            None => BitVec::zeros(self.target.dim(d + self.shift)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.is_empty()
    }

    /// The same matrices between new ends with the same dimensions.
    pub fn with_ends(&self, source: Arc<AModule>, target: Arc<AModule>) -> Result<ModuleMap> {
        Self::new(source, target, self.shift, self.matrices.clone())
    }

    /// The same map between the restrictions of both ends to `spec`.
    pub fn restrict(&self, spec: AlgebraSpec) -> Result<ModuleMap> {
        self.with_ends(
            Arc::new(self.source.restrict(spec)?),
            Arc::new(self.target.restrict(spec)?),
        )
    }

    /// `f ⊗ 1: S ⊗ N → T ⊗ N`.
    pub fn tensor_right(&self, n: &Arc<AModule>) -> Result<ModuleMap> {
        let src = Arc::new(self.source.tensor(n)?);
        let tgt = Arc::new(self.target.tensor(n)?);
        let ls = TensorLayout::new(&self.source, n);
        let lt = TensorLayout::new(&self.target, n);
        let mut matrices = BTreeMap::new();
        for d in src.degrees() {
            let mut m = BitMatrix::zeros(src.dim(d), tgt.dim(d + self.shift));
            for (p, &(a, ai, bi)) in ls.basis(d).iter().enumerate() {
                let b = d - a;
                let img = self.apply(a, &BitVec::unit(self.source.dim(a), ai));
                for u in img.iter_ones() {
                    m.set(p, lt.index(a + self.shift, u, b, bi), true);
                }
            }
            matrices.insert(d, m);
        }
        Self::new(src, tgt, self.shift, matrices)
    }

    /// `x ↦ (x·self)·next`.
    pub fn then(&self, next: &ModuleMap) -> Result<ModuleMap> {
        if !self.target.same_structure(&next.source) {
            return Err(BgxError::contract(format!(
                "cannot compose {:?} with {:?}",
                self, next
            )));
        }
        let matrices = self
            .source
            .degrees()
            .map(|d| (d, self.matrix(d).mul(&next.matrix(d + self.shift))))
            .collect();
        ModuleMap::new(
            Arc::clone(&self.source),
            Arc::clone(&next.target),
            self.shift + next.shift,
            matrices,
        )
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.shift != other.shift
            || !self.source.same_structure(&other.source)
            || !self.target.same_structure(&other.target)
        {
            return Err(BgxError::contract("adding maps with different ends"));
        }
        let matrices = self
            .source
            .degrees()
            .map(|d| (d, self.matrix(d).add(&other.matrix(d))))
            .collect();
        ModuleMap::new(Arc::clone(&self.source), Arc::clone(&self.target), self.shift, matrices)
    }

    /// The same matrices between suspended modules.
    pub fn suspend(&self, k: i32) -> ModuleMap {
        ModuleMap {
            source: Arc::new(self.source.suspend(k)),
            target: Arc::new(self.target.suspend(k)),
            shift: self.shift,
            matrices: self.matrices.iter().map(|(&d, m)| (d + k, m.clone())).collect(),
        }
    }

    /// Reinterprets a map `S → Σ^s T` as a degree-preserving map `S → Σ^s T`.
    pub fn as_degree_zero(&self) -> ModuleMap {
        if self.shift == 0 {
            return self.clone();
        }
        ModuleMap {
            source: Arc::clone(&self.source),
            target: Arc::new(self.target.suspend(-self.shift)),
            shift: 0,
            matrices: self.matrices.clone(),
        }
    }

    /// First generator and degree at which the map fails to commute with the action.
    pub fn linearity_witness(&self) -> Option<(MilnorElt, i32)> {
        let span = (self.source.max_degree() - self.source.min_degree())
            .max(self.target.max_degree() - self.target.min_degree())
            .max(0);
        let gens = algebra_generators(self.source.algebra(), span);
        for d in self.source.degrees() {
            for g in &gens {
                let t = d - g.degree();
                let lhs = self.source.milnor_matrix(g, d).mul(&self.matrix(t));
                let rhs = self.matrix(d).mul(&self.target.milnor_matrix(g, d + self.shift));
                if lhs != rhs {
                    return Some((g.clone(), d));
                }
            }
        }
        None
    }

    pub fn is_linear(&self) -> bool {
        self.linearity_witness().is_none()
    }

    pub fn is_injective(&self) -> bool {
        self.source.degrees().all(|d| self.matrix(d).rank() == self.source.dim(d))
    }

    pub fn is_surjective(&self) -> bool {
        self.target.degrees().all(|e| {
            let d = e - self.shift;
            self.matrix(d).rank() == self.target.dim(e)
        })
    }

    pub fn kernel_subspaces(&self) -> BTreeMap<i32, Subspace> {
        self.source
            .degrees()
            .map(|d| (d, left_kernel(&self.matrix(d))))
            .filter(|(_, s)| s.dim() > 0)
            .collect()
    }

    /// Image subspaces indexed by target degree.
    pub fn image_subspaces(&self) -> BTreeMap<i32, Subspace> {
        self.source
            .degrees()
            .map(|d| {
                let m = self.matrix(d);
                (
                    d + self.shift,
                    Subspace::from_spanning(m.cols(), m.row_vecs().to_vec()),
                )
            })
            .filter(|(_, s)| s.dim() > 0)
            .collect()
    }
}

/// A short exact sequence `0 → K → X → N → 0` of degree-preserving maps.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    inclusion: ModuleMap,
    projection: ModuleMap,
}

impl ShortExactSeq {
    pub fn new(inclusion: ModuleMap, projection: ModuleMap) -> Result<Self> {
        let e = Self {
            inclusion,
            projection,
        };
        e.check()?;
        Ok(e)
    }

    pub fn inclusion(&self) -> &ModuleMap {
        &self.inclusion
    }

    pub fn projection(&self) -> &ModuleMap {
        &self.projection
    }

    pub fn sub(&self) -> &Arc<AModule> {
        self.inclusion.source()
    }

    pub fn middle(&self) -> &Arc<AModule> {
        self.inclusion.target()
    }

    pub fn quotient(&self) -> &Arc<AModule> {
        self.projection.target()
    }

    /// Linearity, injectivity, surjectivity and exactness in every degree.
    pub fn check(&self) -> Result<()> {
        let (i, p) = (&self.inclusion, &self.projection);
        if i.shift() != 0 || p.shift() != 0 {
            return Err(BgxError::contract("extension maps must preserve degree"));
        }
        if !i.target().same_structure(p.source()) {
            return Err(BgxError::contract("inclusion and projection are not composable"));
        }
        if let Some((g, d)) = i.linearity_witness() {
            return Err(BgxError::contract(format!("inclusion does not commute with {g} in degree {d}")));
        }
        if let Some((g, d)) = p.linearity_witness() {
            return Err(BgxError::contract(format!("projection does not commute with {g} in degree {d}")));
        }
        if !i.is_injective() {
            return Err(BgxError::contract("inclusion is not injective"));
        }
        if !p.is_surjective() {
            return Err(BgxError::contract("projection is not surjective"));
        }
        for d in self.middle().degrees() {
            let im = i.matrix(d);
            if !im.mul(&p.matrix(d)).is_zero() {
                return Err(BgxError::contract(format!("projection ∘ inclusion ≠ 0 in degree {d}")));
            }
            if im.rank() + p.matrix(d).rank() != self.middle().dim(d) {
                return Err(BgxError::contract(format!("sequence is not exact in degree {d}")));
            }
        }
        Ok(())
    }

    /// The split extension `0 → K → K ⊕ N → N → 0`.
    pub fn split(sub: Arc<AModule>, quotient: Arc<AModule>) -> Result<Self> {
        let mid = Arc::new(sub.direct_sum(&quotient));
        let lo = mid.min_degree();
        let hi = mid.max_degree();
        let mut inc = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for d in lo..=hi {
            let (a, b) = (sub.dim(d), quotient.dim(d));
            let mut im = BitMatrix::zeros(a, a + b);
            for r in 0..a {
                im.set(r, r, true);
            }
            let mut pm = BitMatrix::zeros(a + b, b);
            for r in 0..b {
                pm.set(a + r, r, true);
            }
            inc.insert(d, im);
            proj.insert(d, pm);
        }
        Self::new(
            ModuleMap::new(sub, Arc::clone(&mid), 0, inc)?,
            ModuleMap::new(mid, quotient, 0, proj)?,
        )
    }

    /// Pullback along `f: N' → N`.
    pub fn pullback(&self, f: &ModuleMap) -> Result<ShortExactSeq> {
        if f.shift() != 0 || !f.target().same_structure(self.quotient()) {
            return Err(BgxError::contract("pullback map must land in the quotient term"));
        }
        let x = self.middle();
        let np = f.source();
        let sum = Arc::new(x.direct_sum(np));
        // kernel of (u, v) ↦ p(u) + f(v)
        let mut spaces = BTreeMap::new();
        for d in sum.degrees() {
            let m = self.projection.matrix(d).vstack(&f.matrix(d));
            let k = left_kernel(&m);
            if k.dim() > 0 {
                spaces.insert(d, k);
            }
        }
        let (mid, inc) = sum.submodule(&spaces)?;
        let mid = Arc::new(mid.with_name(format!("pullback({})", x.name())));
        let inc = ModuleMap { source: Arc::clone(&mid), ..inc };
        let k = self.sub();
        let mut i_mats = BTreeMap::new();
        let mut p_mats = BTreeMap::new();
        for d in mid.degrees() {
            let basis = inc.matrix(d);
            let xd = x.dim(d);
            // K → X ⊕ N' → coordinates in mid
            let rows = (0..k.dim(d))
                .map(|r| {
                    let v = self.inclusion.matrix(d).row(r).concat(&BitVec::zeros(np.dim(d)));
                    spaces[&d].coordinates(&v).expect("image of K lies in the pullback")
                })
                .collect();
            i_mats.insert(d, BitMatrix::from_rows(mid.dim(d), rows));
            let rows = (0..mid.dim(d))
                .map(|r| basis.row(r).slice(xd, np.dim(d)))
                .collect();
            p_mats.insert(d, BitMatrix::from_rows(np.dim(d), rows));
        }
        ShortExactSeq::new(
            ModuleMap::new(Arc::clone(k), Arc::clone(&mid), 0, i_mats)?,
            ModuleMap::new(mid, Arc::clone(np), 0, p_mats)?,
        )
    }

    /// Pushout along `g: K → K'`.
    pub fn pushout(&self, g: &ModuleMap) -> Result<ShortExactSeq> {
        if g.shift() != 0 || !g.source().same_structure(self.sub()) {
            return Err(BgxError::contract("pushout map must start at the sub term"));
        }
        let kp = g.target();
        let x = self.middle();
        let sum = Arc::new(kp.direct_sum(x));
        let k = self.sub();
        let elems: Vec<(i32, BitVec)> = k
            .degrees()
            .flat_map(|d| {
                (0..k.dim(d)).map(move |r| (d, r))
            })
            .map(|(d, r)| {
                let v = g.matrix(d).row(r).concat(self.inclusion.matrix(d).row(r));
                (d, v)
            })
            .collect();
        let rel: BTreeMap<i32, Subspace> = {
            let mut m: BTreeMap<i32, Vec<BitVec>> = BTreeMap::new();
            for (d, v) in elems {
                m.entry(d).or_default().push(v);
            }
            m.into_iter()
                .map(|(d, vs)| (d, Subspace::from_spanning(sum.dim(d), vs)))
                .filter(|(_, s)| s.dim() > 0)
                .collect()
        };
        let (mid, proj_q) = sum.quotient(&rel)?;
        let mid = Arc::new(mid.with_name(format!("pushout({})", x.name())));
        let proj_q = ModuleMap { target: Arc::clone(&mid), ..proj_q };
        let n = self.quotient();
        let mut i_mats = BTreeMap::new();
        let mut p_mats = BTreeMap::new();
        for d in sum.degrees() {
            let q = proj_q.matrix(d);
            let kd = kp.dim(d);
            let rows = (0..kd).map(|r| q.row(r).clone()).collect();
            i_mats.insert(d, BitMatrix::from_rows(mid.dim(d), rows));
            // each quotient basis vector is the image of a unit vector of the sum
            let keep = rel
                .get(&d)
                .map(|s| s.non_pivots())
                .unwrap_or_else(|| (0..sum.dim(d)).collect());
            let rows = keep
                .iter()
                .map(|&c| {
                    if c < kd {
                        BitVec::zeros(n.dim(d))
                    } else {
                        self.projection.matrix(d).row(c - kd).clone()
                    }
                })
                .collect();
            p_mats.insert(d, BitMatrix::from_rows(n.dim(d), rows));
        }
        ShortExactSeq::new(
            ModuleMap::new(Arc::clone(kp), Arc::clone(&mid), 0, i_mats)?,
            ModuleMap::new(mid, Arc::clone(n), 0, p_mats)?,
        )
    }

    /// The sequence viewed over a subalgebra.
    pub fn restrict(&self, spec: AlgebraSpec) -> Result<ShortExactSeq> {
        let i = self.inclusion.restrict(spec)?;
        let p = self
            .projection
            .with_ends(Arc::clone(i.target()), Arc::new(self.quotient().restrict(spec)?))?;
        ShortExactSeq::new(i, p)
    }

    /// `0 → K⊗N → X⊗N → Q⊗N → 0`.
    pub fn tensor_right(&self, n: &Arc<AModule>) -> Result<ShortExactSeq> {
        let i = self.inclusion.tensor_right(n)?;
        let p = self.projection.tensor_right(n)?;
        let p = p.with_ends(Arc::clone(i.target()), Arc::clone(p.target()))?;
        ShortExactSeq::new(i, p)
    }

    /// The sequence with every term suspended `k` times.
    pub fn suspend(&self, k: i32) -> ShortExactSeq {
        let i = self.inclusion.suspend(k);
        let p = self.projection.suspend(k);
        let p = ModuleMap { source: Arc::clone(i.target()), ..p };
        ShortExactSeq {
            inclusion: i,
            projection: p,
        }
    }

    /// Equivalence of extensions with structurally equal ends.
    pub fn equivalent(&self, other: &ShortExactSeq) -> Result<bool> {
        let alpha = ModuleMap::identification(Arc::clone(self.sub()), Arc::clone(other.sub()))?;
        let gamma = ModuleMap::identification(Arc::clone(self.quotient()), Arc::clone(other.quotient()))?;
        Ok(self.equivalence_via(other, &alpha, &gamma)?.is_some())
    }

    /// A middle map `φ` with `i₁φ = α i₂` and `φ p₂ = p₁ γ`, if one exists.
    /// When `α` and `γ` are isomorphisms, so is `φ`.
    pub fn equivalence_via(
        &self,
        other: &ShortExactSeq,
        alpha: &ModuleMap,
        gamma: &ModuleMap,
    ) -> Result<Option<ModuleMap>> {
        if !alpha.source().same_structure(self.sub())
            || !alpha.target().same_structure(other.sub())
            || !gamma.source().same_structure(self.quotient())
            || !gamma.target().same_structure(other.quotient())
        {
            return Err(BgxError::contract("comparison maps do not match the extension ends"));
        }
        let mut sys = MapSystem::new(Arc::clone(self.middle()), Arc::clone(other.middle()));
        sys.require_pre(&self.inclusion, &alpha.then(&other.inclusion)?);
        sys.require_post(&other.projection, &self.projection.then(gamma)?);
        Ok(sys.solve_one())
    }

    pub fn is_split(&self) -> Result<bool> {
        let s = ShortExactSeq::split(Arc::clone(self.sub()), Arc::clone(self.quotient()))?;
        self.equivalent(&s)
    }
}

/// Linear system whose unknowns are the matrices of a degree-preserving
/// module map `S → T`.
pub struct MapSystem {
    source: Arc<AModule>,
    target: Arc<AModule>,
    offsets: BTreeMap<i32, usize>,
    nvars: usize,
    rows: Vec<BitVec>,
    rhs: Vec<bool>,
}

impl MapSystem {
    /// The system expressing linearity over the source's algebra.
    pub fn new(source: Arc<AModule>, target: Arc<AModule>) -> Self {
        let mut offsets = BTreeMap::new();
        let mut nvars = 0;
        for d in source.degrees() {
            offsets.insert(d, nvars);
            nvars += source.dim(d) * target.dim(d);
        }
        let mut sys = Self {
            source,
            target,
            offsets,
            nvars,
            rows: Vec::new(),
            rhs: Vec::new(),
        };
        sys.add_linearity();
        sys
    }

    fn var(&self, d: i32, r: usize, c: usize) -> usize {
        self.offsets[&d] + r * self.target.dim(d) + c
    }

    fn add_linearity(&mut self) {
        let span = (self.source.max_degree() - self.source.min_degree())
            .max(self.target.max_degree() - self.target.min_degree())
            .max(0);
        let gens = algebra_generators(self.source.algebra(), span);
        let degrees: Vec<i32> = self.source.degrees().collect();
        for &d in &degrees {
            for g in &gens {
                let t = d - g.degree();
                let (gs, gt) = (self.source.milnor_matrix(g, d), self.target.milnor_matrix(g, d));
                let (ns, nt) = (self.source.dim(d), self.target.dim(t));
                if ns == 0 || nt == 0 {
                    continue;
                }
                for r in 0..ns {
                    for c in 0..nt {
                        let mut row = BitVec::zeros(self.nvars);
                        for s in gs.row(r).iter_ones() {
                            row.flip(self.var(t, s, c));
                        }
                        for s in 0..self.target.dim(d) {
                            if gt.get(s, c) {
                                row.flip(self.var(d, r, s));
                            }
                        }
                        if !row.is_zero() {
                            self.rows.push(row);
                            self.rhs.push(false);
                        }
                    }
                }
            }
        }
    }

    /// Requires `a ∘ φ = b` (first `a`, then `φ`).
    pub fn require_pre(&mut self, a: &ModuleMap, b: &ModuleMap) {
        for d in a.source().degrees() {
            let (am, bm) = (a.matrix(d), b.matrix(d));
            for r in 0..am.rows() {
                for c in 0..self.target.dim(d) {
                    let mut row = BitVec::zeros(self.nvars);
                    for s in am.row(r).iter_ones() {
                        row.flip(self.var(d, s, c));
                    }
                    self.rows.push(row);
                    self.rhs.push(bm.get(r, c));
                }
            }
        }
    }

    /// Requires `φ ∘ c = e` (first `φ`, then `c`).
    pub fn require_post(&mut self, c: &ModuleMap, e: &ModuleMap) {
        for d in self.source.degrees() {
            let (cm, em) = (c.matrix(d), e.matrix(d));
            for r in 0..self.source.dim(d) {
                for col in 0..cm.cols() {
                    let mut row = BitVec::zeros(self.nvars);
                    for s in 0..self.target.dim(d) {
                        if cm.get(s, col) {
                            row.flip(self.var(d, r, s));
                        }
                    }
                    self.rows.push(row);
                    self.rhs.push(em.get(r, col));
                }
            }
        }
    }

    fn to_map(&self, x: &BitVec) -> ModuleMap {
        let matrices = self
            .source
            .degrees()
            .map(|d| {
                let mut m = BitMatrix::zeros(self.source.dim(d), self.target.dim(d));
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        if x.get(self.var(d, r, c)) {
                            m.set(r, c, true);
                        }
                    }
                }
                (d, m)
            })
            .collect();
        ModuleMap::new(Arc::clone(&self.source), Arc::clone(&self.target), 0, matrices).unwrap()
    }

    pub fn solve_one(&self) -> Option<ModuleMap> {
        let a = BitMatrix::from_rows(self.nvars, self.rows.clone());
        let b = BitVec::from_bools(&self.rhs);
        solve(&a, &b).expect("consistent shapes").map(|x| self.to_map(&x))
    }

    /// Basis of solutions of the homogeneous system.
    pub fn solution_basis(&self) -> Vec<ModuleMap> {
        let a = BitMatrix::from_rows(self.nvars, self.rows.clone());
        crate::f2::kernel_basis(&a)
            .basis_vectors()
            .iter()
            .map(|x| self.to_map(x))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> AModule {
        let mut actions = BTreeMap::new();
        actions.insert((1, 2), BitMatrix::identity(1));
        AModule::from_parts(
            "G(2)",
            AlgebraSpec::Full,
            1,
            vec![1, 1],
            vec![vec!["e1".into()], vec!["e2".into()]],
            actions,
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(rp2().validate().is_ok());
        assert!(AModule::f2_at(AlgebraSpec::Full, 0).validate().is_ok());
        let mut actions = BTreeMap::new();
        actions.insert((1, 2), BitMatrix::identity(1));
        actions.insert((1, 1), BitMatrix::identity(1));
        let bad = AModule::from_parts(
            "bad",
            AlgebraSpec::Full,
            0,
            vec![1, 1, 1],
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            actions,
        )
        .unwrap();
        match bad.validate() {
            Err(BgxError::Adem(v)) => assert_eq!((v.a, v.b, v.degree), (1, 1, 2)),
            other => panic!("expected Adem violation, got {other:?}"),
        }
    }

    #[test]
    fn instability_examples() {
        assert!(rp2().is_unstable());
        assert!(!rp2().suspend(-1).is_unstable());
        let (o, _) = rp2().suspend(-1).omega_inf();
        assert_eq!(o.dims_map(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn suspension_round_trip() {
        let m = rp2();
        assert!(m.suspend(1).suspend(-1).same_structure(&m));
        let s = AModule::f2_at(AlgebraSpec::Full, 0).suspend(2);
        assert_eq!(s.dims_map(), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn hom_examples() {
        let f0 = AModule::f2_at(AlgebraSpec::Full, 0);
        let f1 = AModule::f2_at(AlgebraSpec::Full, 1);
        assert!(f0.hom_space(&f1, 0).is_empty());
        assert_eq!(rp2().hom_space(&rp2(), 0).len(), 1);
    }

    #[test]
    fn tensor_with_unit() {
        let f0 = AModule::f2_at(AlgebraSpec::Full, 0);
        assert!(f0.tensor(&rp2()).unwrap().same_structure(&rp2()));
    }

    #[test]
    fn split_and_pullback() {
        let k = Arc::new(AModule::f2_at(AlgebraSpec::Full, 1));
        let n = Arc::new(AModule::f2_at(AlgebraSpec::Full, 2));
        let g = Arc::new(rp2());
        let inc = ModuleMap::new(Arc::clone(&k), Arc::clone(&g), 0, BTreeMap::from([(1, BitMatrix::identity(1))])).unwrap();
        let proj = ModuleMap::new(Arc::clone(&g), Arc::clone(&n), 0, BTreeMap::from([(2, BitMatrix::identity(1))])).unwrap();
        let e = ShortExactSeq::new(inc, proj).unwrap();
        assert!(!e.is_split().unwrap());
        assert!(e.equivalent(&e).unwrap());
        let zero = ModuleMap::zero(Arc::clone(&n), Arc::clone(&n), 0);
        assert!(e.pullback(&zero).unwrap().is_split().unwrap());
        assert!(e.pushout(&ModuleMap::zero(Arc::clone(&k), Arc::clone(&k), 0)).unwrap().is_split().unwrap());
        let id = ModuleMap::identity(Arc::clone(&n));
        assert!(e.pullback(&id).unwrap().equivalent(&e).unwrap());
        let idk = ModuleMap::identity(Arc::clone(&k));
        assert!(e.pushout(&idk).unwrap().equivalent(&e).unwrap());
    }
}
