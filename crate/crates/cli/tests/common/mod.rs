//! Independent oracles: brute-force searches that never call the library
//! routine they check.
#![allow(dead_code)]

use catmeas_core::boolalg::Element;
use catmeas_core::finban::{FinBanSpace, Flavor};
use catmeas_core::linalg::Matrix;
use catmeas_core::lp::{maximize, LpOutcome};
use catmeas_core::rational::Rational;
use catmeas_core::shcosh::PreCosheaf;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every set partition of `items`, built by inserting one item at a time.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&last, rest)) = items.split_last() else { return vec![Vec::new()] };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].push(last);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![last]);
        out.push(q);
    }
    out
}

pub fn element_partitions(e: Element) -> Vec<Vec<Element>> {
    let atoms: Vec<usize> = e.atoms().collect();
    set_partitions(&atoms).into_iter().map(|p| p.into_iter().map(Element::from_atoms).collect()).collect()
}

pub fn sign_vectors(n: usize) -> Vec<Vec<Rational>> {
    (0..1u32 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -Rational::one() } else { Rational::one() }).collect())
        .collect()
}

/// Vertices of the unit ball: a product over blocks of cross-polytopes
/// `conv{±eᵢ/wᵢ}`.
pub fn ball_vertices(space: &FinBanSpace) -> Vec<Vec<Rational>> {
    let n = space.dim();
    let mut out = vec![vec![Rational::zero(); n]];
    for block in space.blocks() {
        let mut next = Vec::new();
        for v in &out {
            for &i in &block {
                for sign in [Rational::one(), -Rational::one()] {
                    let mut w = v.clone();
                    w[i] = sign / &space.weights()[i];
                    next.push(w);
                }
            }
        }
        out = next;
    }
    out
}

pub fn norm_by_vertices(m: &Matrix, source: &FinBanSpace, target: &FinBanSpace) -> Rational {
    ball_vertices(source).iter().map(|v| target.norm(&m.mul_vec(v))).max().unwrap_or_default()
}

pub fn isometric_iso(m: &Matrix, source: &FinBanSpace, target: &FinBanSpace) -> bool {
    if source.dim() != target.dim() {
        return false;
    }
    if source.dim() == 0 {
        return true;
    }
    let Ok(inv) = m.inverse() else { return false };
    norm_by_vertices(m, source, target) <= Rational::one() && norm_by_vertices(&inv, target, source) <= Rational::one()
}

pub fn concat(spaces: &[&FinBanSpace], flavor: Flavor) -> FinBanSpace {
    let weights: Vec<Rational> = spaces.iter().flat_map(|s| s.weights().to_vec()).collect();
    let labels = (0..weights.len()).map(|i| format!("c{i}")).collect();
    FinBanSpace::new(labels, weights, flavor).unwrap()
}

/// Whether the partition map `⊕ μ(Fᵢ) -> μ(E)` is an isometric iso.
pub fn partition_is_iso(mu: &PreCosheaf, e: Element, blocks: &[Element]) -> bool {
    let legs: Vec<Matrix> = blocks.iter().map(|&f| mu.extension(f, e).unwrap()).collect();
    let m = Matrix::hstack(&legs.iter().collect::<Vec<_>>(), mu.space(e).dim());
    let spaces: Vec<&FinBanSpace> = blocks.iter().map(|&f| mu.space(f)).collect();
    isometric_iso(&m, &concat(&spaces, Flavor::Sum), mu.space(e))
}

/// The cosheaf condition over every partition of every element; the
/// bottom has only the empty partition, so its fiber must vanish.
pub fn cosheaf_by_search(mu: &PreCosheaf) -> bool {
    if mu.space(Element::BOTTOM).dim() != 0 {
        return false;
    }
    mu.algebra()
        .nonzero_elements()
        .all(|e| element_partitions(e).into_iter().all(|blocks| partition_is_iso(mu, e, &blocks)))
}

/// Projective norm of `u ∈ A ⊗ B` (left-major) by duality with bilinear
/// forms bounded by 1 on pairs of ball vertices, solved as an LP with
/// `T = P - N` plus slacks.
pub fn projective_norm_lp(u: &[Rational], a: &FinBanSpace, b: &FinBanSpace) -> Rational {
    let (n, m) = (a.dim(), b.dim());
    let nm = n * m;
    let (va, vb) = (ball_vertices(a), ball_vertices(b));
    let mut forms = Vec::new();
    for x in &va {
        for y in &vb {
            forms.push((0..nm).map(|k| &x[k / m] * &y[k % m]).collect::<Vec<Rational>>());
        }
    }
    let k = forms.len();
    let vars = 2 * nm + 2 * k;
    let mut rows = Vec::with_capacity(2 * k);
    for (r, coeff) in forms.iter().enumerate() {
        for (s, sign) in [Rational::one(), -Rational::one()].into_iter().enumerate() {
            let mut row = vec![Rational::zero(); vars];
            for j in 0..nm {
                row[j] = &coeff[j] * &sign;
                row[nm + j] = -&row[j];
            }
            row[2 * nm + 2 * r + s] = Rational::one();
            rows.push(row);
        }
    }
    let mat = Matrix::from_rows(vars, rows).unwrap();
    let mut c = vec![Rational::zero(); vars];
    for j in 0..nm {
        c[j] = u[j].clone();
        c[nm + j] = -u[j].clone();
    }
    match maximize(&c, &mat, &vec![Rational::one(); 2 * k]) {
        LpOutcome::Optimal { value, .. } => value,
        other => panic!("projective norm LP did not solve: {other:?}"),
    }
}
