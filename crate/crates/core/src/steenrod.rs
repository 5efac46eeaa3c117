//! The mod 2 Steenrod algebra in the Milnor basis.
//!
//! A Milnor basis element `Sq(r1, r2, ..., rk)` has degree
//! `Σ r_i (2^i - 1)`. Products are computed with Milnor's matrix formula;
//! the resulting tables are memoized in process-wide caches whose contents
//! are fully determined by their keys.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{BgxError, Result};
use crate::f2::{solve, BitMatrix, BitVec};

/// `binom(n, k) mod 2`, read off the formal expansion of `(1+x)^n` over F2.
///
/// For `n >= 0` this is Lucas' theorem; for negative `n`,
/// `binom(n, k) = (-1)^k binom(k-n-1, k)`, so `binom(-1, k) = 1` for all `k >= 0`.
pub fn binom2(n: i64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    if n >= 0 {
        k & !n == 0
    } else {
        let m = k - n - 1;
        k & !m == 0
    }
}

/// Whether the multinomial coefficient of `parts` is odd (pairwise disjoint binary digits).
pub fn multinomial_odd(parts: &[u32]) -> bool {
    let mut seen = 0u32;
    for &p in parts {
        if seen & p != 0 {
            return false;
        }
        seen |= p;
    }
    true
}

/// A Milnor basis element `Sq(r1, ..., rk)`, stored without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MilnorElt(Vec<u32>);

impl MilnorElt {
    pub fn new(profile: Vec<u32>) -> Self {
        let mut p = profile;
        while p.last() == Some(&0) {
            p.pop();
        }
        MilnorElt(p)
    }

    pub fn unit() -> Self {
        MilnorElt(Vec::new())
    }

    /// `Sq(n)`, which is the total square `Sq^n`.
    pub fn sq(n: u32) -> Self {
        Self::new(vec![n])
    }

    /// The Milnor primitive `Q_i`: a single 1 in slot `i + 1`.
    pub fn primitive(i: usize) -> Self {
        let mut p = vec![0; i + 1];
        p[i] = 1;
        MilnorElt(p)
    }

    pub fn profile(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| r as i32 * ((1 << (i + 1)) - 1))
            .sum()
    }

    /// Standard excess `Σ r_i`.
    pub fn excess(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `Σ 2^i r_i`. A basis element of `A^{n-k}` survives in `G(n)_k` iff this is at most `n`.
    pub fn bg_excess(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| (r as u64) << (i + 1))
            .sum()
    }

    fn padded(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

/// Lexicographic order on profiles with larger entries first, so that
/// `Sq(3)` precedes `Sq(0,1)`.
impl Ord for MilnorElt {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            match other.padded(i).cmp(&self.padded(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for MilnorElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MilnorElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sq(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MilnorElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MilnorElt {
    type Err = BgxError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("Sq(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| BgxError::Parse(format!("expected Sq(r1,...,rk), got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(MilnorElt::unit());
        }
        let profile = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| BgxError::Parse(format!("bad entry {t:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MilnorElt::new(profile))
    }
}

/// A homogeneous element of the Steenrod algebra: an F2 sum of Milnor basis elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SteenrodElement {
    degree: i32,
    terms: BTreeSet<MilnorElt>,
}

impl SteenrodElement {
    pub fn zero(degree: i32) -> Self {
        Self {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn basis(m: MilnorElt) -> Self {
        let degree = m.degree();
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Self { degree, terms }
    }

    pub fn from_terms(degree: i32, terms: impl IntoIterator<Item = MilnorElt>) -> Self {
        let mut e = Self::zero(degree);
        for t in terms {
            e.toggle(t);
        }
        e
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = &MilnorElt> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn contains(&self, m: &MilnorElt) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: MilnorElt) {
        assert_eq!(m.degree(), self.degree, "term {m} has the wrong degree");
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &SteenrodElement) {
        if other.is_zero() {
            return;
        }
        assert_eq!(self.degree, other.degree, "adding elements of different degree");
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn mul(&self, other: &SteenrodElement) -> SteenrodElement {
        let mut out = SteenrodElement::zero(self.degree + other.degree);
        for a in &self.terms {
            for b in &other.terms {
                out.add_assign(&milnor_product(a, b));
            }
        }
        out
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

type ProductCache = RwLock<HashMap<(MilnorElt, MilnorElt), Arc<SteenrodElement>>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The product `a · b` in the Milnor basis.
pub fn milnor_product(a: &MilnorElt, b: &MilnorElt) -> SteenrodElement {
    if a.is_unit() {
        return SteenrodElement::basis(b.clone());
    }
    if b.is_unit() {
        return SteenrodElement::basis(a.clone());
    }
    let key = (a.clone(), b.clone());
    if let Some(p) = product_cache().read().unwrap().get(&key) {
        return (**p).clone();
    }
    let p = SteenrodElement::from_terms(a.degree() + b.degree(), product_terms(&a.0, &b.0));
    product_cache()
        .write()
        .unwrap()
        .insert(key, Arc::new(p.clone()));
    p
}

/// Enumerates Milnor matrices `X` with weighted row sums `r` and column sums
/// `s`, yielding the profile of every matrix with odd coefficient.
fn product_terms(r: &[u32], s: &[u32]) -> Vec<MilnorElt> {
    let rows = r.len();
    let cols = s.len();
    let width = cols + 1;
    let mut x = vec![0u32; (rows + 1) * width];
    let mut row_rem: Vec<u32> = r.to_vec();
    let mut col_rem: Vec<u32> = s.to_vec();
    let mut out = Vec::new();
    let cells: Vec<(usize, usize)> = (1..=rows)
        .flat_map(|i| (1..=cols).map(move |j| (i, j)))
        .collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        x: &mut [u32],
        width: usize,
        row_rem: &mut [u32],
        col_rem: &mut [u32],
        rows: usize,
        cols: usize,
        out: &mut Vec<MilnorElt>,
    ) {
        if k == cells.len() {
            for i in 1..=rows {
                x[i * width] = row_rem[i - 1];
            }
            x[1..=cols].copy_from_slice(&col_rem[..cols]);
            let n = rows + cols;
            let mut t = Vec::with_capacity(n);
            let mut diag = Vec::new();
            for d in 1..=n {
                diag.clear();
                let mut sum = 0;
                for i in 0..=d.min(rows) {
                    let j = d - i;
                    if j > cols {
                        continue;
                    }
                    let v = x[i * width + j];
                    diag.push(v);
                    sum += v;
                }
                if !multinomial_odd(&diag) {
                    return;
                }
                t.push(sum);
            }
            out.push(MilnorElt::new(t));
            return;
        }
        let (i, j) = cells[k];
        let max = (row_rem[i - 1] >> j).min(col_rem[j - 1]);
        for v in 0..=max {
            x[i * width + j] = v;
            row_rem[i - 1] -= v << j;
            col_rem[j - 1] -= v;
            rec(k + 1, cells, x, width, row_rem, col_rem, rows, cols, out);
            row_rem[i - 1] += v << j;
            col_rem[j - 1] += v;
        }
        x[i * width + j] = 0;
    }

    rec(
        0,
        &cells,
        &mut x,
        width,
        &mut row_rem,
        &mut col_rem,
        rows,
        cols,
        &mut out,
    );
    out
}

type BasisCache = RwLock<HashMap<i32, Arc<Vec<MilnorElt>>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All Milnor basis elements of degree `d`, in profile order (largest entries first).
pub fn milnor_basis(d: i32) -> Arc<Vec<MilnorElt>> {
    if d < 0 {
        return Arc::new(Vec::new());
    }
    if let Some(b) = basis_cache().read().unwrap().get(&d) {
        return Arc::clone(b);
    }
    let mut out = Vec::new();
    let mut top = 0;
    while (1i32 << (top + 1)) - 1 <= d.max(1) {
        top += 1;
    }
    let mut profile = vec![0u32; top];

    fn rec(slot: usize, remaining: i32, profile: &mut Vec<u32>, out: &mut Vec<MilnorElt>) {
        if slot == 0 {
            if remaining == 0 {
                out.push(MilnorElt::new(profile.clone()));
            }
            return;
        }
        let w = (1i32 << slot) - 1;
        for v in 0..=remaining / w {
            profile[slot - 1] = v as u32;
            rec(slot - 1, remaining - v * w, profile, out);
        }
        profile[slot - 1] = 0;
    }

    rec(top, d, &mut profile, &mut out);
    out.sort();
    out.dedup();
    let out = Arc::new(out);
    basis_cache().write().unwrap().insert(d, Arc::clone(&out));
    out
}

/// `χ(Sq^j)`: the sum of all Milnor basis elements of degree `j`.
pub fn conjugation_sum(j: i32) -> SteenrodElement {
    SteenrodElement::from_terms(j, milnor_basis(j).iter().cloned())
}

/// Admissible sequences `(a1, ..., ak)` with `a_i >= 2 a_{i+1}`, `a_k >= 1`, summing to `d`.
pub fn admissible_words(d: i32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            let mut w = prefix.clone();
            w.reverse();
            out.push(w);
            return;
        }
        // Build from the right: the next (leftward) entry must be >= 2 * previous.
        let lo = prefix.last().map_or(1, |&p| 2 * p);
        for a in lo..=remaining {
            prefix.push(a);
            rec(remaining - a, prefix, out);
            prefix.pop();
        }
    }
    if d < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(d as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The product `Sq^{a1} Sq^{a2} ... Sq^{ak}` in the Milnor basis.
pub fn word_to_milnor(word: &[u32]) -> SteenrodElement {
    let mut acc = SteenrodElement::basis(MilnorElt::unit());
    for &a in word {
        acc = acc.mul(&SteenrodElement::basis(MilnorElt::sq(a)));
    }
    acc
}

type CompositeCache = RwLock<HashMap<i32, Arc<HashMap<MilnorElt, Vec<Vec<u32>>>>>>;

fn composite_cache() -> &'static CompositeCache {
    static CACHE: OnceLock<CompositeCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn composite_table(d: i32) -> Arc<HashMap<MilnorElt, Vec<Vec<u32>>>> {
    if let Some(t) = composite_cache().read().unwrap().get(&d) {
        return Arc::clone(t);
    }
    let basis = milnor_basis(d);
    let words = admissible_words(d);
    assert_eq!(words.len(), basis.len(), "admissible and Milnor bases differ in size");
    let index: HashMap<&MilnorElt, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<BitVec> = words
        .iter()
        .map(|w| BitVec::from_indices(basis.len(), word_to_milnor(w).terms().map(|t| index[t])))
        .collect();
    let wt = BitMatrix::from_rows(basis.len(), rows).transpose();
    let mut table = HashMap::new();
    for (j, m) in basis.iter().enumerate() {
        let c = solve(&wt, &BitVec::unit(basis.len(), j))
            .expect("square system")
            .expect("admissible-to-Milnor change of basis is invertible");
        table.insert(m.clone(), c.iter_ones().map(|w| words[w].clone()).collect());
    }
    let table = Arc::new(table);
    composite_cache()
        .write()
        .unwrap()
        .insert(d, Arc::clone(&table));
    table
}

/// Writes a Milnor basis element as an F2 sum of admissible products of total squares.
pub fn milnor_to_composite(m: &MilnorElt) -> Vec<Vec<u32>> {
    if m.is_unit() {
        return vec![Vec::new()];
    }
    composite_table(m.degree())[m].clone()
}

/// Which algebra acts on a module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraSpec {
    /// The whole Steenrod algebra; resolutions are computed on an explicit degree window.
    Full,
    /// `E(h)`, exterior on the Milnor primitives `Q_0, ..., Q_h`.
    Exterior(u32),
    /// `A(1)`, generated by `Sq^1` and `Sq^2`.
    A1,
}

impl AlgebraSpec {
    pub fn name(&self) -> String {
        match self {
            AlgebraSpec::Full => "A".into(),
            AlgebraSpec::Exterior(h) => format!("E{h}"),
            AlgebraSpec::A1 => "A1".into(),
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(AlgebraSpec::Full),
            "A1" => Ok(AlgebraSpec::A1),
            _ => s
                .strip_prefix('E')
                .and_then(|h| h.parse().ok())
                .map(AlgebraSpec::Exterior)
                .ok_or_else(|| BgxError::Parse(format!("unknown algebra {s:?}"))),
        }
    }

    pub fn contains(&self, m: &MilnorElt) -> bool {
        match self {
            AlgebraSpec::Full => true,
            AlgebraSpec::Exterior(h) => {
                m.profile().len() <= *h as usize + 1 && m.profile().iter().all(|&r| r <= 1)
            }
            AlgebraSpec::A1 => {
                let p = m.profile();
                p.len() <= 2 && p.first().is_none_or(|&r| r < 4) && p.get(1).is_none_or(|&r| r < 2)
            }
        }
    }

    /// Top nonzero degree, `None` for the full algebra.
    pub fn top_degree(&self) -> Option<i32> {
        match self {
            AlgebraSpec::Full => None,
            AlgebraSpec::Exterior(h) => Some((0..=*h).map(|i| (1 << (i + 1)) - 1).sum()),
            AlgebraSpec::A1 => Some(6),
        }
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subalgebra_of(&self, other: &AlgebraSpec) -> bool {
        match (self, other) {
            (_, AlgebraSpec::Full) => true,
            (AlgebraSpec::Full, _) => false,
            (AlgebraSpec::Exterior(a), AlgebraSpec::Exterior(b)) => a <= b,
            (AlgebraSpec::Exterior(a), AlgebraSpec::A1) => *a <= 1,
            (AlgebraSpec::A1, AlgebraSpec::A1) => true,
            (AlgebraSpec::A1, AlgebraSpec::Exterior(_)) => false,
        }
    }

    /// Basis of the algebra in degree `d`.
    pub fn basis(&self, d: i32) -> Vec<MilnorElt> {
        if let Some(top) = self.top_degree() {
            if d > top {
                return Vec::new();
            }
        }
        milnor_basis(d)
            .iter()
            .filter(|m| self.contains(m))
            .cloned()
            .collect()
    }

    pub fn total_dim(&self) -> Option<usize> {
        self.top_degree()
            .map(|top| (0..=top).map(|d| self.basis(d).len()).sum())
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Milnor basis elements of degree `d` lying in a proper sub-Hopf algebra.
pub fn subalgebra_basis(spec: &AlgebraSpec, d: i32) -> Vec<MilnorElt> {
    spec.basis(d)
}

/// Per-degree bases of an algebra with index lookup and a memoized product
/// table returning products as bit vectors over the target degree's basis.
pub struct AlgebraTables {
    spec: AlgebraSpec,
    bases: RwLock<HashMap<i32, Arc<IndexedBasis>>>,
    products: RwLock<HashMap<ProductKey, Arc<BitVec>>>,
}

type IndexedBasis = (Vec<MilnorElt>, HashMap<MilnorElt, usize>);
type ProductKey = (i32, usize, i32, usize);

impl AlgebraTables {
    pub fn new(spec: AlgebraSpec) -> Self {
        Self {
            spec,
            bases: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    fn entry(&self, d: i32) -> Arc<(Vec<MilnorElt>, HashMap<MilnorElt, usize>)> {
        if let Some(e) = self.bases.read().unwrap().get(&d) {
            return Arc::clone(e);
        }
        let b = if d < 0 { Vec::new() } else { self.spec.basis(d) };
        let idx = b.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let e = Arc::new((b, idx));
        self.bases.write().unwrap().insert(d, Arc::clone(&e));
        e
    }

    pub fn dim(&self, d: i32) -> usize {
        self.entry(d).0.len()
    }

    pub fn basis(&self, d: i32) -> Vec<MilnorElt> {
        self.entry(d).0.clone()
    }

    pub fn element(&self, d: i32, i: usize) -> MilnorElt {
        self.entry(d).0[i].clone()
    }

    pub fn index_of(&self, m: &MilnorElt) -> Option<usize> {
        self.entry(m.degree()).1.get(m).copied()
    }

    /// Product of basis element `i` in degree `p` with basis element `j` in degree `q`.
    pub fn product(&self, p: i32, i: usize, q: i32, j: usize) -> Arc<BitVec> {
        let key = (p, i, q, j);
        if let Some(v) = self.products.read().unwrap().get(&key) {
            return Arc::clone(v);
        }
        let a = self.element(p, i);
        let b = self.element(q, j);
        let target = self.entry(p + q);
        let prod = milnor_product(&a, &b);
        let v = BitVec::from_indices(
            target.0.len(),
            prod.terms().map(|t| {
                *target
                    .1
                    .get(t)
                    .unwrap_or_else(|| panic!("{a}·{b} leaves the subalgebra {}", self.spec))
            }),
        );
        let v = Arc::new(v);
        self.products.write().unwrap().insert(key, Arc::clone(&v));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(p: &[u32]) -> MilnorElt {
        MilnorElt::new(p.to_vec())
    }

    #[test]
    fn binomials() {
        assert!(binom2(1, 1));
        assert!(!binom2(2, 1));
        assert!(binom2(0, 0));
        assert!(!binom2(0, 2));
        for k in 0..10 {
            assert!(binom2(-1, k));
        }
        // (1+x)^{-2} = 1 + x^2 + x^4 + ...
        assert!(binom2(-2, 2));
        assert!(!binom2(-2, 1));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(*milnor_basis(0), vec![MilnorElt::unit()]);
        assert_eq!(*milnor_basis(2), vec![el(&[2])]);
        assert_eq!(*milnor_basis(3), vec![el(&[3]), el(&[0, 1])]);
        assert!(milnor_basis(-1).is_empty());
    }

    #[test]
    fn product_examples() {
        let x = el(&[2, 1]);
        assert_eq!(milnor_product(&MilnorElt::unit(), &x), SteenrodElement::basis(x));
        assert!(milnor_product(&el(&[1]), &el(&[1])).is_zero());
        assert_eq!(milnor_product(&el(&[1]), &el(&[2])), SteenrodElement::basis(el(&[3])));
        assert_eq!(
            milnor_product(&el(&[2]), &el(&[1])),
            SteenrodElement::from_terms(3, [el(&[3]), el(&[0, 1])])
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(conjugation_sum(1).to_string(), "Sq(1)");
        assert_eq!(conjugation_sum(2).to_string(), "Sq(2)");
        assert_eq!(conjugation_sum(3).to_string(), "Sq(3) + Sq(0,1)");
    }

    #[test]
    fn bg_excess_examples() {
        assert_eq!(MilnorElt::unit().bg_excess(), 0);
        assert_eq!(el(&[1]).bg_excess(), 2);
        assert_eq!(el(&[0, 1]).bg_excess(), 4);
    }

    #[test]
    fn composite_examples() {
        assert_eq!(milnor_to_composite(&el(&[3])), vec![vec![3]]);
        let mut c = milnor_to_composite(&el(&[0, 1]));
        c.sort();
        assert_eq!(c, vec![vec![2, 1], vec![3]]);
        assert_eq!(milnor_to_composite(&el(&[1, 1])), vec![vec![3, 1]]);
    }

    #[test]
    fn subalgebra_examples() {
        assert_eq!(subalgebra_basis(&AlgebraSpec::Exterior(0), 1), vec![el(&[1])]);
        assert_eq!(subalgebra_basis(&AlgebraSpec::Exterior(1), 4), vec![el(&[1, 1])]);
        assert_eq!(subalgebra_basis(&AlgebraSpec::A1, 5), vec![el(&[2, 1])]);
        assert_eq!(AlgebraSpec::Exterior(1).total_dim(), Some(4));
        assert_eq!(AlgebraSpec::A1.total_dim(), Some(8));
        assert_eq!(AlgebraSpec::Exterior(2).total_dim(), Some(8));
    }

    #[test]
    fn parse_and_render() {
        let m: MilnorElt = "Sq(1,0,0)".parse().unwrap();
        assert_eq!(m.to_string(), "Sq(1)");
        assert_eq!("Sq()".parse::<MilnorElt>().unwrap(), MilnorElt::unit());
        assert!("Sq(1,x)".parse::<MilnorElt>().is_err());
        assert_eq!(AlgebraSpec::from_name("E1").unwrap(), AlgebraSpec::Exterior(1));
    }
}
