#![allow(dead_code)]

use catmeas_core::finban::FinBanSpace;
use catmeas_core::linalg::Matrix;
use catmeas_core::lp::{maximize, LpOutcome};
use catmeas_core::rational::Rational;
use num_traits::{One, Signed, Zero};
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

pub fn sign_vectors(n: usize) -> Vec<Vec<Rational>> {
    (0..1u32 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -Rational::one() } else { Rational::one() }).collect())
        .collect()
}

/// Vertices of the unit ball, from first principles: the ball is the
/// product over blocks of the cross-polytopes `conv{±eᵢ/wᵢ}`.
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

/// The projective norm of `u ∈ A ⊗ B` (left-major coordinates) by duality
/// with bounded bilinear forms: maximize `⟨u, T⟩` over forms with
/// `|T(a, b)| ≤ 1` for all unit-ball vertices `a`, `b`. Solved as an LP with
/// `T = P - N` and slacks.
pub fn projective_norm_lp(u: &[Rational], a: &FinBanSpace, b: &FinBanSpace) -> Rational {
    let (n, m) = (a.dim(), b.dim());
    let nm = n * m;
    let va = ball_vertices(a);
    let vb = ball_vertices(b);
    let mut rows = Vec::new();
    for x in &va {
        for y in &vb {
            let coeff: Vec<Rational> = (0..nm).map(|k| &x[k / m] * &y[k % m]).collect();
            rows.push(coeff);
        }
    }
    // constraints: coeff·(P - N) + s = 1 and -coeff·(P - N) + s' = 1
    let k = rows.len();
    let vars = 2 * nm + 2 * k;
    let mut a_rows = Vec::with_capacity(2 * k);
    for (r, coeff) in rows.iter().enumerate() {
        for sign in [1i64, -1] {
            let mut row = vec![Rational::zero(); vars];
            for j in 0..nm {
                row[j] = &coeff[j] * Rational::from_integer(sign.into());
                row[nm + j] = -&row[j];
            }
            let slack = 2 * nm + 2 * r + usize::from(sign < 0);
            row[slack] = Rational::one();
            a_rows.push(row);
        }
    }
    let mat = Matrix::from_rows(vars, a_rows).unwrap();
    let rhs = vec![Rational::one(); 2 * k];
    let mut c = vec![Rational::zero(); vars];
    for j in 0..nm {
        c[j] = u[j].clone();
        c[nm + j] = -u[j].clone();
    }
    match maximize(&c, &mat, &rhs) {
        LpOutcome::Optimal { value, .. } => value,
        other => panic!("projective norm LP did not solve: {other:?}"),
    }
}

pub fn abs_sum(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).sum()
}
