//! Acceptance run: one line per criterion, each checked against brute-force
//! oracles and a wall-clock bound. Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use catmeas_core::boolalg::{coproduct, stone_space, BoolAlg, Element};
use catmeas_core::bundles::{
    apply_compose_witness, associator, canonical_decomposition, delta_bundle, hom_bundle, integral_naturality, Base,
    Bundle, DiscreteCosheafMeasure, FunctorMatrix,
};
use catmeas_core::finban::{projective_tensor, FinBanSpace};
use catmeas_core::linalg::Matrix;
use catmeas_core::measures::{pullback, quotient_by_null, VectorMeasure};
use catmeas_core::random;
use catmeas_core::rational::Rational;
use catmeas_core::shcosh::{
    bva_cosheaf, constant_universal_map, cosheaf_hom, cosheafify, factor_through_cosheafification,
    integrate_simple_morphism, is_cosheaf, l1_cosheaf, random_precosheaf, spectral_measure, total_value, Cosheaf,
    PreCosheaf, PreCosheafMap, RandomKind,
};
use catmeas_core::simple::{
    bochner, fubini, integral_map, integrate, l1_space, l1_tensor_witness, vector_l1_class, SimpleElement,
    SimpleMorphism, VectorSimple,
};
use common::*;
use num_traits::{One, Signed, Zero};
use rand::Rng;

type Criterion = (&'static str, u64, fn());

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Stone round trip", 1, c1_stone),
        ("L-infinity universal property", 5, c2_linf_lift),
        ("projective tensor identity", 10, c3_tensor),
        ("Fubini", 2, c4_fubini),
        ("discrete categorified calculus", 10, c5_bundles),
        ("spectral measure laws", 10, c6_spectral),
        ("simple-morphism integration functor", 5, c7_integration),
        ("cosheafification adjunction", 10, c8_cosheafify),
        ("bva cosheaf", 5, c9_bva),
        ("negative controls", 1, c10_negative),
        ("CLI determinism", 30, c11_cli),
    ];
    // keep panic messages, drop the default hook's location noise
    std::panic::set_hook(Box::new(|info| eprintln!("    {info}")));
    let mut failed = 0;
    for (i, (name, secs, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*secs);
        let pass = outcome.is_ok() && in_time;
        failed += usize::from(!pass);
        let note = if outcome.is_ok() && !in_time { format!(", over the {secs} s bound") } else { String::new() };
        println!(
            "criterion {}: {} {name} ({:.2} s{note})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

/// Ultrafilters as sets of elements, by checking every subset.
fn ultrafilters_by_search(alg: &BoolAlg) -> Vec<BTreeSet<Element>> {
    let elems: Vec<Element> = alg.elements().collect();
    (0u64..1 << elems.len())
        .map(|mask| (0..elems.len()).filter(|i| mask >> i & 1 == 1).map(|i| elems[i]).collect::<BTreeSet<_>>())
        .filter(|m| is_ultrafilter(alg, m))
        .collect()
}

fn is_ultrafilter(alg: &BoolAlg, m: &BTreeSet<Element>) -> bool {
    let elems: Vec<Element> = alg.elements().collect();
    !m.contains(&Element::BOTTOM)
        && m.contains(&alg.top())
        && m.iter().all(|&e| elems.iter().all(|&f| !e.is_below(f) || m.contains(&f)))
        && m.iter().all(|&e| m.iter().all(|&f| m.contains(&e.meet(f))))
        && elems.iter().all(|&e| m.contains(&e) != m.contains(&alg.complement(e)))
}

fn c1_stone() {
    for n in 1..=6 {
        let alg = BoolAlg::numbered(n).unwrap();
        let s = stone_space(&alg);
        assert_eq!(s.points().len(), n, "ultrafilter count, n = {n}");
        let as_sets: Vec<BTreeSet<Element>> =
            s.points().iter().map(|p| alg.elements().filter(|&e| p.contains(e)).collect()).collect();
        assert!(as_sets.iter().all(|m| is_ultrafilter(&alg, m)));
        assert_eq!(as_sets.iter().collect::<BTreeSet<_>>().len(), n);
        if n <= 3 {
            let searched: BTreeSet<_> = ultrafilters_by_search(&alg).into_iter().collect();
            assert_eq!(searched, as_sets.iter().cloned().collect());
        }
        // η is a bijection onto clopens commuting with the operations
        let clopens = s.clopens();
        let images: BTreeSet<Element> = alg.elements().map(|e| s.eta(e)).collect();
        assert_eq!(images.len(), 1 << n);
        assert_eq!(images, clopens.elements().collect());
        for e in alg.elements() {
            let img = s.eta(e);
            assert_eq!(img.count(), as_sets.iter().filter(|m| m.contains(&e)).count());
            assert_eq!(s.eta_inverse(img), e);
            assert_eq!(s.eta(alg.complement(e)), clopens.complement(img));
            for f in alg.elements() {
                assert_eq!(s.eta(e.meet(f)), img.meet(s.eta(f)));
                assert_eq!(s.eta(e.join(f)), img.join(s.eta(f)));
            }
        }
        assert!(s.round_trip_holds());
    }
}

fn c2_linf_lift() {
    let mut r = rng(2);
    for _ in 0..200 {
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let d = r.random_range(1..=3);
        let sum = r.random_bool(0.5);
        let t = random::space(&mut r, d, sum);
        let nu = random::measure(&mut r, &alg, &t).unwrap();
        for e in alg.elements() {
            let by_hand = e.atoms().fold(vec![Rational::zero(); d], |acc, a| {
                acc.iter().zip(nu.atom_value(a)).map(|(x, y)| x + y).collect()
            });
            assert_eq!(integrate(&SimpleElement::chi(&alg, e), &nu).unwrap(), by_hand);
        }
        // sign vectors are the vertices of the L∞ unit ball
        let lift = integral_map(&nu);
        let by_signs = sign_vectors(alg.n_atoms()).iter().map(|eps| t.norm(&lift.apply(eps))).max().unwrap();
        assert_eq!(lift.operator_norm().unwrap(), by_signs);
        assert_eq!(nu.semivariation(alg.top()).unwrap(), by_signs);
    }
}

fn c3_tensor() {
    let mut r = rng(3);
    for _ in 0..100 {
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let d = r.random_range(1..=3);
        let b = random::space(&mut r, d, true);
        let mu = random::positive_measure(&mut r, &alg).unwrap();
        let w = l1_tensor_witness(&mu, &b).unwrap();
        assert!(w.is_isometric().unwrap());
        let f = VectorSimple::new(&alg, &b, (0..alg.n_atoms()).map(|_| random::vector(&mut r, d)).collect()).unwrap();
        let image = w.forward().apply(&vector_l1_class(&f, &mu).unwrap());
        let pointwise: Rational =
            (0..alg.n_atoms()).map(|i| b.norm(&f.values()[i]) * mu.atom_mass(i)).sum();
        assert_eq!(bochner(&f, &mu).unwrap().l1_norm, pointwise);
        let t = projective_tensor(l1_space(&mu).space(), &b).unwrap();
        assert_eq!(t.space().norm(&image), pointwise);
    }
    for n in 1..=4 {
        for m in 1..=4 {
            let (a, b) = (random::space(&mut r, n, true), random::space(&mut r, m, true));
            let t = projective_tensor(&a, &b).unwrap();
            let u = random::vector(&mut r, n * m);
            let weighted: Rational =
                (0..n * m).map(|k| &a.weights()[k / m] * &b.weights()[k % m] * u[k].abs()).sum();
            assert_eq!(projective_norm_lp(&u, &a, &b), weighted, "dims {n} x {m}");
            assert_eq!(t.space().norm(&u), weighted);
        }
    }
}

fn c4_fubini() {
    let mut r = rng(4);
    for _ in 0..500 {
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
        assert_eq!(out.joint, total);
        assert_eq!(out.left_outer, total);
        assert_eq!(out.right_outer, total);
    }
}

fn base(name: &str, n: usize) -> Base {
    Base::new(name, (0..n).map(|i| format!("{name}{i}")).collect()).unwrap()
}

fn random_matrix<R: Rng>(r: &mut R, name: &str, src: &Base, tgt: &Base, max_dim: usize) -> FunctorMatrix {
    let entries = (0..tgt.len())
        .map(|_| (0..src.len()).map(|_| { let d = r.random_range(0..=max_dim); random::space(r, d, true) }).collect())
        .collect();
    FunctorMatrix::new(name, src, tgt, entries).unwrap()
}

/// Every tuple in `0..=max` of length `n`.
fn dim_tuples(n: usize, max: usize) -> Vec<Vec<usize>> {
    (0..(max + 1).pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = code % (max + 1);
                    code /= max + 1;
                    d
                })
                .collect()
        })
        .collect()
}

fn c5_bundles() {
    let mut r = rng(5);
    for nx in 1..=3 {
        let x = base("X", nx);
        // Schur orthogonality of point bundles
        for p in x.points() {
            for q in x.points() {
                for dv in 1..=3 {
                    for dw in 1..=3 {
                        let d = delta_bundle("d", &x, p, &FinBanSpace::l1(dv)).unwrap();
                        let e = delta_bundle("e", &x, q, &FinBanSpace::l1(dw)).unwrap();
                        let dim = hom_bundle(&d, &e).unwrap().morphisms.dim();
                        assert_eq!(dim, if p == q { dv * dw } else { 0 });
                    }
                }
            }
        }
        for dims in dim_tuples(nx, 3) {
            let xi = Bundle::new("ξ", &x, dims.iter().map(|&d| random::space(&mut r, d, true)).collect()).unwrap();
            let (decomposed, ws) = canonical_decomposition(&xi).unwrap();
            assert_eq!(decomposed.dims(), dims);
            assert!(ws.iter().all(|w| w.is_isometric().unwrap()));
        }
        for ny in 1..=3 {
            let y = base("Y", ny);
            let t = random_matrix(&mut r, "T", &x, &y, 3);
            let s = random_matrix(&mut r, "S", &y, &x, 3);
            let rr = random_matrix(&mut r, "R", &x, &y, 2);
            let a = associator(&rr, &s, &t).unwrap();
            assert!(a.is_isometric().unwrap());
            assert_eq!(a.left.dims(), a.right.dims());
            for dims in dim_tuples(nx, 3) {
                let xi = Bundle::new("ξ", &x, dims.iter().map(|&d| FinBanSpace::l1(d)).collect()).unwrap();
                let ws = apply_compose_witness(&s, &t, &xi).unwrap();
                assert!(ws.iter().all(|w| w.is_isometric().unwrap()));
                let weights = dims.iter().map(|&d| FinBanSpace::l1(3 - d)).collect();
                let mu = DiscreteCosheafMeasure::new("μ", &x, weights).unwrap();
                let p = base("P", 1);
                let tp = random_matrix(&mut r, "T", &p, &y, 3);
                for w in integral_naturality(&tp, &xi, &mu).unwrap() {
                    assert!(w.is_isometric().unwrap());
                }
            }
        }
    }
}

/// Projection laws checked directly on the matrices, over every pair.
fn assert_spectral_laws(c: &Cosheaf) {
    let s = spectral_measure(c).unwrap();
    let alg = c.algebra();
    let id = Matrix::identity(s.carrier().dim());
    assert_eq!(s.projection(alg.top()), &id);
    for e in alg.elements() {
        let p = s.projection(e);
        assert_eq!(&p.mul(p), p);
        assert!(norm_by_vertices(p, s.carrier(), s.carrier()) <= Rational::one());
        for f in alg.elements() {
            assert_eq!(&p.mul(s.projection(f)), s.projection(e.meet(f)));
            if e.is_disjoint(f) {
                assert_eq!(&p.add(s.projection(f)), s.projection(e.join(f)));
            }
        }
    }
    let support: Vec<usize> = (0..alg.n_atoms()).filter(|&a| c.space(Element::atom(a)).dim() > 0).collect();
    // f ranges over {-2, 0, 1}^n
    for code in dim_tuples(alg.n_atoms(), 2) {
        let values: Vec<Rational> = code.iter().map(|&k| Rational::from_integer([-2, 0, 1][k].into())).collect();
        let f = SimpleElement::from_atom_values(alg, values).unwrap();
        let expected = support.iter().map(|&a| f.value_at(a).abs()).max().unwrap_or_default();
        let af = s.action(&f).unwrap();
        assert_eq!(norm_by_vertices(af.matrix(), s.carrier(), s.carrier()), expected);
    }
}

fn c6_spectral() {
    let mut r = rng(6);
    for n in 1..=4 {
        let alg = BoolAlg::numbered(n).unwrap();
        let mu = random::positive_measure(&mut r, &alg).unwrap();
        assert_spectral_laws(&Cosheaf::new(l1_cosheaf(&mu).unwrap()).unwrap());
    }
    for _ in 0..50 {
        let alg = BoolAlg::numbered(r.random_range(1..=4)).unwrap();
        let mu = random_precosheaf(&mut r, &alg, RandomKind::ScrambledL1, 2).unwrap();
        assert_spectral_laws(&Cosheaf::new(mu).unwrap());
    }
}

fn c7_integration() {
    let mut r = rng(7);
    let alg = BoolAlg::numbered(3).unwrap();
    for i in 0..120 {
        let l1 = i % 2 == 0;
        let mu = if l1 {
            l1_cosheaf(&random::positive_measure(&mut r, &alg).unwrap()).unwrap()
        } else {
            random_precosheaf(&mut r, &alg, RandomKind::ScrambledL1, 2).unwrap()
        };
        let c = Cosheaf::new(mu).unwrap();
        let (e, f, g) = (random::element(&mut r, &alg), random::element(&mut r, &alg), random::element(&mut r, &alg));
        let p = SimpleMorphism::new(e, f, random::simple_on(&mut r, &alg, e.meet(f))).unwrap();
        let q = SimpleMorphism::new(f, g, random::simple_on(&mut r, &alg, f.meet(g))).unwrap();
        let (ip, iq) = (integrate_simple_morphism(&p, &c).unwrap(), integrate_simple_morphism(&q, &c).unwrap());
        assert_eq!(integrate_simple_morphism(&q.compose(&p).unwrap(), &c).unwrap(), iq.compose(&ip).unwrap());
        assert!(integrate_simple_morphism(&SimpleMorphism::identity(&alg, e), &c).unwrap().is_identity());
        if l1 {
            assert_eq!(norm_by_vertices(ip.matrix(), c.space(e), c.space(f)), p.function().linf_norm());
            assert_eq!(norm_by_vertices(iq.matrix(), c.space(f), c.space(g)), q.function().linf_norm());
        }
    }
}

fn c8_cosheafify() {
    let mut r = rng(8);
    let kinds = [RandomKind::Constant, RandomKind::ScrambledL1, RandomKind::Scaled];
    for i in 0..60 {
        let alg = BoolAlg::numbered(r.random_range(1..=3)).unwrap();
        let max_dim = if alg.n_atoms() == 3 { 1 } else { 2 };
        let theta = random_precosheaf(&mut r, &alg, kinds[i % 3], max_dim).unwrap();
        let c = cosheafify(&theta).unwrap();
        assert!(is_cosheaf(&c.cosheaf, true).unwrap().holds());
        assert!(cosheaf_by_search(&c.cosheaf));
        assert_eq!(c.counit_is_isometric_iso(&theta).unwrap(), cosheaf_by_search(&theta));
        // a map ν -> θ built as ε ∘ ψ factors back through ψ, and only ψ
        let nu = Cosheaf::new(random_precosheaf(&mut r, &alg, RandomKind::ScrambledL1, 1).unwrap()).unwrap();
        let nat = cosheaf_hom(nu.precosheaf(), &c.cosheaf).unwrap();
        let psi = nat.transformation(&random::vector(&mut r, nat.dim()));
        let phi: Vec<Matrix> = psi.iter().zip(&c.counit).map(|(p, eps)| eps.mul(p)).collect();
        let phi = PreCosheafMap::new(nu.precosheaf(), &theta, phi).unwrap();
        let fact = factor_through_cosheafification(&nu, &theta, &phi).unwrap();
        assert!(fact.unique);
        assert_eq!(fact.map.components(), &psi[..]);
        for e in alg.elements() {
            let k = e.bits() as usize;
            assert_eq!(c.counit[k].mul(&fact.map.components()[k]), phi.components()[k]);
        }
    }
}

fn c9_bva() {
    let mut r = rng(9);
    for n in 1..=4 {
        let alg = BoolAlg::numbered(n).unwrap();
        for d in 1..=3 {
            let b = random::space(&mut r, d, true);
            let bva = bva_cosheaf(&alg, &b).unwrap();
            assert!(is_cosheaf(&bva, true).unwrap().holds());
            assert!(cosheaf_by_search(&bva));
            // the norm at the top is the variation: a sup over partitions
            let values: Vec<Vec<Rational>> = (0..n).map(|_| random::vector(&mut r, d)).collect();
            let value_on = |block: &[usize]| -> Vec<Rational> {
                (0..d).map(|k| block.iter().map(|&a| values[a][k].clone()).sum()).collect()
            };
            let atoms: Vec<usize> = (0..n).collect();
            let variation = set_partitions(&atoms)
                .iter()
                .map(|p| p.iter().map(|blk| b.norm(&value_on(blk))).sum::<Rational>())
                .max()
                .unwrap();
            assert_eq!(bva.space(alg.top()).norm(&values.concat()), variation);
            assert_eq!(total_value(alg.top(), &b).mul_vec(&values.concat()), value_on(&atoms));
            // the triangle through the constant precosheaf
            let theta = Cosheaf::new(random_precosheaf(&mut r, &alg, RandomKind::ScrambledL1, 2).unwrap()).unwrap();
            let top = alg.top();
            let tau_top = Matrix::from_fn(d, theta.space(top).dim(), |_, _| random::rational(&mut r));
            let tau: Vec<Matrix> =
                alg.elements().map(|e| tau_top.mul(&theta.precosheaf().extension(e, top).unwrap())).collect();
            let u = constant_universal_map(&theta, &b, &tau).unwrap();
            for e in alg.elements() {
                assert_eq!(total_value(e, &b).mul(u.component(e)), tau[e.bits() as usize]);
            }
        }
    }
}

fn c10_negative() {
    for n in 2..=4 {
        let alg = BoolAlg::numbered(n).unwrap();
        let k = PreCosheaf::constant(&alg, &FinBanSpace::l1(1)).unwrap();
        assert!(!cosheaf_by_search(&k));
        for exhaustive in [false, true] {
            let verdict = is_cosheaf(&k, exhaustive).unwrap();
            let ce = verdict.counterexample().expect("constant precosheaf is not a cosheaf");
            assert!(!ce.partition.blocks().is_empty());
            assert!(!partition_is_iso(&k, ce.partition.parent(), ce.partition.blocks()));
        }
    }
    let mut r = rng(10);
    let alg = BoolAlg::numbered(3).unwrap();
    let mu = VectorMeasure::scalar(alg.clone(), vec![Rational::zero(), Rational::one(), random::positive(&mut r)]).unwrap();
    let q = quotient_by_null(&mu).unwrap();
    let nu_bar = q.factor_through(&mu).unwrap();
    assert_eq!(pullback(q.projection(), &nu_bar).unwrap(), mu);
    let off_support = VectorMeasure::scalar(alg, vec![Rational::one(), Rational::zero(), Rational::zero()]).unwrap();
    assert!(q.factor_through(&off_support).is_err());
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_catmeas")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn c11_cli() {
    let reference = fixture("reference.json");
    let reference = reference.to_str().unwrap();
    for format in ["text", "structured"] {
        let args = ["verify-all", "--model", reference, "--seed", "42", "--format", format];
        let (code, first) = run_cli(&args);
        let (code2, second) = run_cli(&args);
        assert_eq!(code, Some(0), "{}", String::from_utf8_lossy(&first));
        assert_eq!(code2, Some(0));
        assert_eq!(first, second, "output differs between runs");
    }
    let broken = fixture("broken.json");
    let (code, out) = run_cli(&["verify-all", "--model", broken.to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert!(String::from_utf8_lossy(&out).contains("partition: {a} {b}"));
}
