//! The Dyer-Lashof normal form against a separate rewriter that applies the
//! Adem relations outermost-first.

use std::collections::{BTreeSet, HashMap};

use bgx_core::dyer_lashof::{is_admissible, normal_form};
use proptest::prelude::*;

fn binom(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (n & k) == k
}

fn allowable(ops: &[i32], base: i32) -> bool {
    let mut deg = base;
    for &r in ops.iter().rev() {
        if r < deg {
            return false;
        }
        deg += r;
    }
    true
}

struct Rewriter {
    memo: HashMap<(Vec<i32>, i32), BTreeSet<Vec<i32>>>,
}

impl Rewriter {
    fn new() -> Self {
        Self { memo: HashMap::new() }
    }

    fn normal(&mut self, ops: &[i32], base: i32) -> BTreeSet<Vec<i32>> {
        if !allowable(ops, base) {
            return BTreeSet::new();
        }
        let key = (ops.to_vec(), base);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let bad = (0..ops.len().saturating_sub(1)).find(|&j| ops[j] > 2 * ops[j + 1]);
        let out = match bad {
            None => BTreeSet::from([ops.to_vec()]),
            Some(j) => {
                let (r, s) = (ops[j] as i64, ops[j + 1] as i64);
                let mut acc = BTreeSet::new();
                for i in 0..=r + s {
                    if !binom(i - s - 1, 2 * i - r) {
                        continue;
                    }
                    let mut w = ops.to_vec();
                    w[j] = (r + s - i) as i32;
                    w[j + 1] = i as i32;
                    for t in self.normal(&w, base) {
                        if !acc.remove(&t) {
                            acc.insert(t);
                        }
                    }
                }
                acc
            }
        };
        self.memo.insert(key, out.clone());
        out
    }
}

#[test]
fn exhaustive_short_words() {
    let mut rw = Rewriter::new();
    for base in 0..=4 {
        for a in 0..=10 {
            for b in 0..=10 {
                let w = vec![a, b];
                let got: BTreeSet<Vec<i32>> = normal_form(&w, base).iter().cloned().collect();
                assert_eq!(got, rw.normal(&w, base), "{w:?} on degree {base}");
                for c in 0..=8 {
                    let w = vec![a, b, c];
                    let got: BTreeSet<Vec<i32>> = normal_form(&w, base).iter().cloned().collect();
                    assert_eq!(got, rw.normal(&w, base), "{w:?} on degree {base}");
                }
            }
        }
    }
}

#[test]
fn known_relations() {
    // Q^3 Q^1 on a class of degree 1: the only candidate is i = 2, binom(0, 1) = 0.
    assert!(normal_form(&[3, 1], 1).is_empty());
    // Q^5 Q^2 on degree 2: i = 3 gives binom(0, 1) = 0, so the word vanishes.
    assert!(normal_form(&[5, 2], 2).is_empty());
    // Q^5 Q^1 on degree 0: i = 3 gives binom(1, 1) = 1, i.e. Q^3 Q^3.
    assert_eq!(*normal_form(&[5, 1], 0), vec![vec![3, 3]]);
    // On degree 1 the same term is applied below its degree and vanishes.
    assert!(normal_form(&[5, 1], 1).is_empty());
}

proptest! {
    #[test]
    fn agrees_on_longer_words(ops in prop::collection::vec(0i32..9, 4), base in 0i32..3) {
        let mut rw = Rewriter::new();
        let got: BTreeSet<Vec<i32>> = normal_form(&ops, base).iter().cloned().collect();
        prop_assert_eq!(&got, &rw.normal(&ops, base));
        for w in &got {
            prop_assert!(is_admissible(w) && allowable(w, base));
        }
    }
}
