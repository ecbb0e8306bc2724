use og6_lattice::genus::genus_equal;
use og6_lattice::linalg::{saturate, unimodular_inverse};
use og6_lattice::{discriminant_form, parse_lattice, GramLattice, IntMatrix, LatticeExpr};
use proptest::prelude::*;

const ATOMS: [&str; 10] = ["U", "U(2)", "U(3)", "[2]", "[-2]", "[4]", "[-6]", "A2(-1)", "A3(-1)", "D4(-1)"];

fn expr() -> impl Strategy<Value = String> {
    prop::collection::vec(0..ATOMS.len(), 1..4).prop_map(|ix| ix.iter().map(|&i| ATOMS[i]).collect::<Vec<_>>().join("+"))
}

fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-6i128..=6, n * n).prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| v[i * n + j]))
}

/// Product of elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i128..=2), 0..3 * n).prop_map(move |ops| {
        let mut p = IntMatrix::identity(n);
        for (i, j, k) in ops {
            if i != j {
                for r in 0..n {
                    let v = p[(r, j)];
                    p[(r, i)] += k * v;
                }
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_factorization(m in small_matrix(4)) {
        let s = m.smith();
        let d = s.left.mul(&m).unwrap().mul(&s.right).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j && i < s.diag.len() { s.diag[i] } else { 0 };
                prop_assert_eq!(d[(i, j)], want);
            }
        }
        for w in s.diag[..s.rank].windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(s.left.mul(&s.left_inv).unwrap().is_identity());
        prop_assert!(s.right.mul(&s.right_inv).unwrap().is_identity());
    }

    #[test]
    fn kernel_is_annihilated_and_saturated(m in small_matrix(4)) {
        let k = m.kernel();
        prop_assert_eq!(k.cols(), 4 - m.rank());
        if k.cols() > 0 {
            prop_assert!(m.mul(&k).unwrap().to_rows().iter().flatten().all(|&x| x == 0));
            prop_assert_eq!(saturate(&k).index, 1);
        }
    }

    #[test]
    fn discriminant_order_is_det(e in expr()) {
        let l = parse_lattice(&e).unwrap();
        let f = discriminant_form(&l);
        prop_assert_eq!(f.order(), l.determinant().unsigned_abs());
        prop_assert!(f.check_consistency().unwrap());
    }

    #[test]
    fn expression_display_round_trips(e in expr()) {
        let x = LatticeExpr::parse(&e).unwrap();
        let y = LatticeExpr::parse(&x.to_string()).unwrap();
        prop_assert_eq!(x.lattice().unwrap(), y.lattice().unwrap());
    }

    #[test]
    fn genus_is_basis_independent(e in expr(), p in unimodular(6)) {
        let l = parse_lattice(&e).unwrap();
        prop_assume!(l.rank() == 6);
        let m = l.transform(&p).unwrap();
        prop_assert!(genus_equal(&l, &m).unwrap());
        prop_assert!(unimodular_inverse(&p).unwrap().mul(&p).unwrap().is_identity());
    }

    #[test]
    fn direct_sum_forms_add(a in expr(), b in expr()) {
        let (la, lb) = (parse_lattice(&a).unwrap(), parse_lattice(&b).unwrap());
        let sum = GramLattice::direct_sum(&[&la, &lb]);
        let f = discriminant_form(&la).direct_sum(&discriminant_form(&lb));
        prop_assert!(discriminant_form(&sum).is_isometric(&f).unwrap());
    }
}
