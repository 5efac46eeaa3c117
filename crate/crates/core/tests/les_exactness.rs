//! The long exact sequence in `Ext(-, F2)` over E(1) for a few short exact
//! sequences, checked by ranks of the induced and connecting maps.

use std::sync::Arc;

use bgx_core::amodule::{AModule, ShortExactSeq};
use bgx_core::brown_gitler::{h0_sequence, mahowald_sequence, q_extension};
use bgx_core::ext::{connecting_map, induced_map, resolution, ExtMap};
use bgx_core::steenrod::AlgebraSpec;

const SMAX: usize = 3;
const E1: AlgebraSpec = AlgebraSpec::Exterior(1);

fn composite_zero(a: &ExtMap, b: &ExtMap) -> bool {
    a.then(b).unwrap().is_zero()
}

/// Returns the number of nonzero connecting maps and the total rank seen.
fn check(e: &ShortExactSeq) -> (usize, usize) {
    let e = e.restrict(E1).unwrap();
    e.check().unwrap();
    let (k, x, n) = (e.sub(), e.middle(), e.quotient());
    let floor = x.min_degree() - 4 * (SMAX as i32 + 3);
    let res = |m: &Arc<AModule>| resolution(m, E1, SMAX + 1, Some(floor)).unwrap();
    let (rk, rx, rn) = (res(k), res(x), res(n));
    let f2 = AModule::f2_at(E1, 0);
    let (mut nonzero, mut total) = (0, 0);
    for t in -x.max_degree()..=-x.min_degree() + 3 * SMAX as i32 + 2 {
        for s in 0..=SMAX - 1 {
            let dim = |r: &bgx_core::ext::Resolution, s| r.ext(&f2, s, t).unwrap().dim();
            let p = induced_map(e.projection(), &f2, &rx, &rn, s, t).unwrap();
            let i = induced_map(e.inclusion(), &f2, &rk, &rx, s, t).unwrap();
            let d = connecting_map(&e, &f2, &rk, &rn, s, t).unwrap();
            let p_next = induced_map(e.projection(), &f2, &rx, &rn, s + 1, t).unwrap();
            let ctx = format!("{} at s = {s}, t = {t}", x.name());
            assert!(composite_zero(&p, &i), "i*p* ≠ 0 for {ctx}");
            assert!(composite_zero(&i, &d), "δi* ≠ 0 for {ctx}");
            assert!(composite_zero(&d, &p_next), "p*δ ≠ 0 for {ctx}");
            assert_eq!(p.rank() + i.rank(), dim(&rx, s), "not exact at Ext(X) for {ctx}");
            assert_eq!(i.rank() + d.rank(), dim(&rk, s), "not exact at Ext(K) for {ctx}");
            assert_eq!(d.rank() + p_next.rank(), dim(&rn, s + 1), "not exact at Ext(N) for {ctx}");
            if s == 0 {
                assert_eq!(p.rank(), dim(&rn, 0), "p* not injective on Hom for {ctx}");
            }
            nonzero += usize::from(!d.is_zero());
            total += p.rank() + i.rank() + d.rank();
        }
    }
    (nonzero, total)
}

#[test]
fn h0_extension() {
    assert!(check(&h0_sequence()).0 > 0);
}

#[test]
fn mahowald_sequences() {
    for n in 1..=3 {
        assert!(check(&mahowald_sequence(n).unwrap()).1 > 0);
    }
}

#[test]
fn q_extensions() {
    for (n, r) in [(1, 0), (1, 1), (2, 1), (2, 2), (3, 2)] {
        assert!(check(&q_extension(n, r).unwrap()).1 > 0);
    }
}
