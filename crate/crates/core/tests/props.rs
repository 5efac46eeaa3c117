use bgx_core::brown_gitler::brown_gitler;
use bgx_core::doc::ModuleDocument;
use bgx_core::ext::margolis_homology;
use bgx_core::f2::{kernel_basis, left_kernel, BitMatrix, BitVec};
use bgx_core::steenrod::{admissible_words, milnor_basis, word_to_milnor, AlgebraSpec, SteenrodElement};
use bgx_core::verify::random_unstable_module;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn basis_elt(d: i32, pick: usize) -> SteenrodElement {
    let b = milnor_basis(d);
    SteenrodElement::basis(b[pick % b.len()].clone())
}

fn matrix(rows: usize, cols: usize, bits: &[bool]) -> BitMatrix {
    let rows = (0..rows)
        .map(|r| BitVec::from_bools(&bits[r * cols..(r + 1) * cols]))
        .collect();
    BitMatrix::from_rows(cols, rows)
}

#[test]
fn admissible_monomials_form_a_basis() {
    for d in 0..=18 {
        let words = admissible_words(d);
        let basis = milnor_basis(d);
        assert_eq!(words.len(), basis.len(), "degree {d}");
        let rows = words
            .iter()
            .map(|w| {
                let e = word_to_milnor(w);
                BitVec::from_indices(basis.len(), e.terms().map(|m| basis.iter().position(|b| b == m).unwrap()))
            })
            .collect();
        assert_eq!(BitMatrix::from_rows(basis.len(), rows).rank(), basis.len(), "degree {d}");
    }
}

#[test]
fn finite_subalgebras_are_closed() {
    for spec in [AlgebraSpec::Exterior(0), AlgebraSpec::Exterior(1), AlgebraSpec::Exterior(2), AlgebraSpec::A1] {
        let top = spec.top_degree().unwrap();
        let total: usize = (0..=top).map(|d| spec.basis(d).len()).sum();
        assert_eq!(Some(total), spec.total_dim(), "{spec}");
        for p in 0..=top {
            for q in 0..=top - p {
                for a in spec.basis(p) {
                    for b in spec.basis(q) {
                        let ab = SteenrodElement::basis(a.clone()).mul(&SteenrodElement::basis(b.clone()));
                        assert!(ab.terms().all(|m| spec.contains(m)), "{spec}: {a} · {b}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn milnor_product_is_associative(
        (da, db, dc) in (0i32..9, 0i32..9, 0i32..9),
        (pa, pb, pc) in (0usize..64, 0usize..64, 0usize..64),
    ) {
        let (a, b, c) = (basis_elt(da, pa), basis_elt(db, pb), basis_elt(dc, pc));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn rank_nullity(rows in 0usize..12, cols in 0usize..12, bits in prop::collection::vec(any::<bool>(), 144)) {
        let a = matrix(rows, cols, &bits);
        let r = a.rank();
        let right = kernel_basis(&a);
        let left = left_kernel(&a);
        prop_assert_eq!(r + right.dim(), cols);
        prop_assert_eq!(r + left.dim(), rows);
        prop_assert_eq!(a.transpose().rank(), r);
        for v in right.basis_vectors() {
            prop_assert!(a.mul_vec(v).is_zero());
        }
        for v in left.basis_vectors() {
            prop_assert!(a.vec_mul(v).is_zero());
        }
    }

    #[test]
    fn random_modules_round_trip(seed in any::<u64>()) {
        let m = random_unstable_module(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(m.is_unstable());
        let doc = ModuleDocument::from_module(&m);
        let text = doc.to_canonical_json();
        let back = ModuleDocument::parse(&text).unwrap().to_module().unwrap();
        prop_assert!(back.same_structure(&m));
        prop_assert_eq!(ModuleDocument::from_module(&back).to_canonical_json(), text);
    }

    #[test]
    fn maps_out_of_g_n_are_elements(seed in any::<u64>(), n in 0u32..7) {
        let m = random_unstable_module(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let homs = brown_gitler(n).hom_space(&m, 0);
        prop_assert_eq!(homs.len(), m.dim(n as i32));
        for f in &homs {
            prop_assert!(f.is_linear());
        }
    }

    #[test]
    fn margolis_operators_square_to_zero(seed in any::<u64>()) {
        let m = random_unstable_module(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let e1 = m.restrict(AlgebraSpec::Exterior(1)).unwrap();
        prop_assert!(margolis_homology(&e1, 0).is_ok());
        prop_assert!(margolis_homology(&e1, 1).is_ok());
    }
}
