mod common;

use catmeas_core::boolalg::{coproduct, stone_space, BoolAlg, Element};
use catmeas_core::finban::{operator_norm, projective_tensor};
use catmeas_core::measures::{lipschitz_norm, Lipschitz};
use catmeas_core::random;
use catmeas_core::rational::Rational;
use catmeas_core::simple::{
    bochner, canonicalize, fubini, integral_map, integrate, l1_space, l1_tensor_witness, split_idempotent,
    stone_transfer, stone_transfer_measure, vector_l1_class, vector_l1_space, SimpleElement, SimpleMorphism, Term,
    VectorSimple,
};
use common::{projective_norm_lp, rng, sign_vectors};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_is_weighted_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=5)).unwrap();
        let d = r.random_range(1..=3);
        let sum = r.random_bool(0.5);
        let t = random::space(&mut r, d, sum);
        let nu = random::measure(&mut r, &alg, &t).unwrap();
        let f = random::simple(&mut r, &alg);
        let mut expected = vec![Rational::zero(); d];
        for i in 0..alg.n_atoms() {
            for (k, x) in nu.atom_value(i).iter().enumerate() {
                expected[k] += f.value_at(i) * x;
            }
        }
        prop_assert_eq!(integrate(&f, &nu).unwrap(), expected);
        let e = random::any_element(&mut r, &alg);
        prop_assert_eq!(integrate(&SimpleElement::chi(&alg, e), &nu).unwrap(), nu.eval(e));
    }

    #[test]
    fn integral_map_norm_is_semivariation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let d = r.random_range(1..=3);
        let sum = r.random_bool(0.5);
        let t = random::space(&mut r, d, sum);
        let nu = random::measure(&mut r, &alg, &t).unwrap();
        // the L∞ unit ball's vertices are the sign vectors
        let by_signs = sign_vectors(alg.n_atoms())
            .iter()
            .map(|eps| t.norm(&integrate(&SimpleElement::from_atom_values(&alg, eps.clone()).unwrap(), &nu).unwrap()))
            .max()
            .unwrap();
        let lift = integral_map(&nu);
        prop_assert_eq!(lift.operator_norm().unwrap(), by_signs.clone());
        prop_assert_eq!(nu.semivariation(alg.top()).unwrap(), by_signs);
    }

    #[test]
    fn l1_integral_map_norm_is_lipschitz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let d = r.random_range(1..=3);
        let sum = r.random_bool(0.5);
        let t = random::space(&mut r, d, sum);
        let nu = random::measure(&mut r, &alg, &t).unwrap();
        let mu = random::positive_measure(&mut r, &alg).unwrap();
        let l1 = l1_space(&mu);
        let map = l1.integral_map(&nu).unwrap();
        let Lipschitz::Finite(c) = lipschitz_norm(&nu, &mu).unwrap() else { panic!("positive μ") };
        prop_assert_eq!(map.operator_norm().unwrap(), c);
        let f = random::simple(&mut r, &alg);
        prop_assert_eq!(map.apply(&l1.class_of(&f).unwrap()), integrate(&f, &nu).unwrap());
        let norm: Rational = (0..alg.n_atoms()).map(|i| num_traits::Signed::abs(f.value_at(i)) * mu.atom_mass(i)).sum();
        prop_assert_eq!(l1.norm(&f).unwrap(), norm);
    }

    #[test]
    fn bochner_integral_and_norm(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let d = r.random_range(1..=3);
        let b = random::space(&mut r, d, true);
        let mu = random::positive_measure(&mut r, &alg).unwrap();
        let values: Vec<Vec<Rational>> = (0..alg.n_atoms()).map(|_| random::vector(&mut r, d)).collect();
        let f = VectorSimple::new(&alg, &b, values.clone()).unwrap();
        let out = bochner(&f, &mu).unwrap();
        let mut integral = vec![Rational::zero(); d];
        let mut norm = Rational::zero();
        for (i, v) in values.iter().enumerate() {
            for (k, x) in v.iter().enumerate() {
                integral[k] += x * mu.atom_mass(i);
            }
            norm += b.norm(v) * mu.atom_mass(i);
        }
        prop_assert_eq!(out.integral, integral);
        prop_assert_eq!(&out.l1_norm, &norm);
        let space = vector_l1_space(&mu, &b).unwrap();
        prop_assert_eq!(space.norm(&vector_l1_class(&f, &mu).unwrap()), norm);
    }

    #[test]
    fn l1_tensor_is_isometric_against_lp(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=3)).unwrap();
        let d = r.random_range(1..=2);
        let b = random::space(&mut r, d, true);
        let mu = random::positive_measure(&mut r, &alg).unwrap();
        let w = l1_tensor_witness(&mu, &b).unwrap();
        prop_assert!(w.is_isometric().unwrap());
        let f = VectorSimple::new(&alg, &b, (0..alg.n_atoms()).map(|_| random::vector(&mut r, d)).collect()).unwrap();
        let class = vector_l1_class(&f, &mu).unwrap();
        let image = w.forward().apply(&class);
        let l1 = l1_space(&mu);
        let lp = projective_norm_lp(&image, l1.space(), &b);
        prop_assert_eq!(bochner(&f, &mu).unwrap().l1_norm, lp);
        let t = projective_tensor(l1.space(), &b).unwrap();
        prop_assert_eq!(t.space().norm(&image), vector_l1_space(&mu, &b).unwrap().norm(&class));
    }

    #[test]
    fn fubini_matches_double_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (BoolAlg::numbered(r.random_range(1..=3)).unwrap(), BoolAlg::numbered(r.random_range(1..=3)).unwrap());
        let c = coproduct(&a, &b).unwrap();
        let mu = random::positive_measure(&mut r, &a).unwrap();
        let nu = random::positive_measure(&mut r, &b).unwrap();
        let f = random::simple(&mut r, c.algebra());
        let out = fubini(&f, &c, &mu, &nu).unwrap();
        let mut total = Rational::zero();
        for i in 0..a.n_atoms() {
            for j in 0..b.n_atoms() {
                total += f.value_at(c.pair_atom(i, j)) * mu.atom_mass(i) * nu.atom_mass(j);
            }
        }
        prop_assert_eq!(&out.joint, &total);
        prop_assert_eq!(&out.left_outer, &total);
        prop_assert_eq!(&out.right_outer, &total);
        prop_assert!(out.witness.is_isometric().unwrap());
    }

    #[test]
    fn simple_morphisms_form_a_category(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(3).unwrap();
        let (e, f, g) = (random::element(&mut r, &alg), random::element(&mut r, &alg), random::element(&mut r, &alg));
        let p = SimpleMorphism::new(e, f, random::simple_on(&mut r, &alg, e.meet(f))).unwrap();
        let q = SimpleMorphism::new(f, g, random::simple_on(&mut r, &alg, f.meet(g))).unwrap();
        prop_assert_eq!(&SimpleMorphism::identity(&alg, f).compose(&p).unwrap(), &p);
        prop_assert_eq!(&p.compose(&SimpleMorphism::identity(&alg, e)).unwrap(), &p);
        let qp = q.compose(&p).unwrap();
        let product: Vec<Rational> = (0..3).map(|i| q.function().value_at(i) * p.function().value_at(i)).collect();
        prop_assert_eq!(qp.function().atom_values(), &product[..]);
        prop_assert!(qp.function().support().is_below(e.meet(f).meet(g)));
        prop_assert!(qp.function().linf_norm() <= q.function().linf_norm() * p.function().linf_norm());
    }

    #[test]
    fn idempotents_split(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let e = random::element(&mut r, &alg);
        let g = random::any_element(&mut r, &alg).meet(e);
        let idem = SimpleMorphism::new(e, e, SimpleElement::chi(&alg, g)).unwrap();
        let s = split_idempotent(&idem).unwrap();
        prop_assert_eq!(s.support, g);
        prop_assert_eq!(&s.section.compose(&s.retraction).unwrap(), &idem);
        prop_assert_eq!(&s.retraction.compose(&s.section).unwrap(), &SimpleMorphism::identity(&alg, g));
    }

    #[test]
    fn stone_transfer_preserves_integrals(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=5)).unwrap();
        let stone = stone_space(&alg);
        let t = random::space(&mut r, 2, true);
        let nu = random::measure(&mut r, &alg, &t).unwrap();
        let f = random::simple(&mut r, &alg);
        let (f2, nu2) = (stone_transfer(&f, &stone).unwrap(), stone_transfer_measure(&nu, &stone).unwrap());
        prop_assert_eq!(integrate(&f2, &nu2).unwrap(), integrate(&f, &nu).unwrap());
        prop_assert_eq!(f2.linf_norm(), f.linf_norm());
    }

    #[test]
    fn canonical_form_sums_overlaps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let terms: Vec<Term> = (0..r.random_range(0..4))
            .map(|_| Term { algebra: alg.clone(), element: random::any_element(&mut r, &alg), coefficient: random::rational(&mut r) })
            .collect();
        let f = canonicalize(&alg, &terms).unwrap();
        for i in 0..alg.n_atoms() {
            let v: Rational = terms.iter().filter(|t| t.element.has_atom(i)).map(|t| t.coefficient.clone()).sum();
            prop_assert_eq!(f.value_at(i), &v);
        }
        // blocks are disjoint, nonzero and reproduce f
        let blocks = f.blocks();
        let mut seen = Element::BOTTOM;
        for (e, k) in &blocks {
            prop_assert!(e.is_disjoint(seen) && !k.is_zero());
            seen = seen.join(*e);
        }
        let rebuilt: Vec<Term> = blocks.into_iter().map(|(e, k)| Term { algebra: alg.clone(), element: e, coefficient: k }).collect();
        prop_assert_eq!(canonicalize(&alg, &rebuilt).unwrap(), f);
    }
}

#[test]
fn unit_simple_has_unit_norm() {
    let alg = BoolAlg::numbered(3).unwrap();
    let one = SimpleElement::chi(&alg, alg.top());
    assert_eq!(one.linf_norm(), Rational::one());
    let nu = catmeas_core::simple::chi_measure(&alg);
    assert_eq!(operator_norm(integral_map(&nu).matrix(), &catmeas_core::simple::linf_space(&alg), nu.target()).unwrap(), Rational::one());
}
