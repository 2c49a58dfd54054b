//! Bundles of spaces over finite sets, matrices of spaces acting on them,
//! and discrete integrals against space-valued measures.
//!
//! Every space built here remembers, for each basis vector, a key naming the
//! factor indices it came from: which point of which base, which basis
//! vector of which named fiber. Two constructions that agree up to
//! reassociation and distributivity carry the same keys, so the canonical
//! isomorphism between them is the basis bijection matching keys.

use std::collections::BTreeMap;

use crate::boolalg::{BoolAlg, Element};
use crate::error::{Error, Result};
use crate::finban::{
    coproduct_of, hom_end, kan_extension, projective_tensor, End, FinBanSpace, FinCategory, FinFunctor, HomSpace,
    IsoWitness, KanExtension, LinMap,
};
use crate::linalg::Matrix;
use crate::shcosh::{atom_data, atomic_cosheaf, PreCosheaf};

/// Factor indices of one basis vector, by factor name.
pub type Key = BTreeMap<String, usize>;

/// An ℓ1-like space whose basis vectors carry keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexed {
    space: FinBanSpace,
    keys: Vec<Key>,
}

impl Indexed {
    /// A named factor: basis vector `i` gets key `{name: i}`.
    pub fn leaf(name: &str, space: &FinBanSpace) -> Result<Self> {
        if !space.is_sum_like() {
            return Err(Error::FlavorMismatch(format!("fiber `{name}` is not ℓ1-like")));
        }
        let keys = (0..space.dim()).map(|i| Key::from([(name.to_string(), i)])).collect();
        Ok(Indexed { space: space.clone(), keys })
    }

    pub fn zero() -> Self {
        Indexed { space: FinBanSpace::zero(), keys: Vec::new() }
    }

    pub fn space(&self) -> &FinBanSpace {
        &self.space
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Projective tensor product, left factor major.
    pub fn tensor(&self, other: &Indexed) -> Result<Indexed> {
        let t = projective_tensor(&self.space, &other.space)?;
        let mut keys = Vec::with_capacity(t.space().dim());
        for a in &self.keys {
            for b in &other.keys {
                keys.push(merge(a, b)?);
            }
        }
        Ok(Indexed { space: t.space().clone(), keys })
    }

    /// ℓ1-sum of `parts`, tagging each basis vector with `{tag: k}` for the
    /// part `k` it came from.
    pub fn sum(tag: &str, parts: &[(usize, Indexed)]) -> Result<Indexed> {
        let spaces: Vec<FinBanSpace> = parts.iter().map(|(_, p)| p.space.clone()).collect();
        let sum = coproduct_of(&spaces)?;
        let mut keys = Vec::with_capacity(sum.space().dim());
        for (k, p) in parts {
            for key in &p.keys {
                keys.push(merge(key, &Key::from([(tag.to_string(), *k)]))?);
            }
        }
        Ok(Indexed { space: sum.space().clone(), keys })
    }
}

fn merge(a: &Key, b: &Key) -> Result<Key> {
    let mut out = a.clone();
    for (name, &i) in b {
        if out.insert(name.clone(), i).is_some() {
            return Err(Error::InvalidModel(format!("factor name `{name}` is used twice")));
        }
    }
    Ok(out)
}

/// The basis bijection matching keys, after dropping the factor names in
/// `forget` (used when those factors are scalars or determined by the rest).
pub fn canonical_witness_forgetting(source: &Indexed, target: &Indexed, forget: &[&str]) -> Result<IsoWitness> {
    let strip = |k: &Key| -> Key { k.iter().filter(|(n, _)| !forget.contains(&n.as_str())).map(|(n, &i)| (n.clone(), i)).collect() };
    let mut position = BTreeMap::new();
    for (i, k) in target.keys.iter().enumerate() {
        if position.insert(strip(k), i).is_some() {
            return Err(Error::NotInverse("target keys are ambiguous".into()));
        }
    }
    if source.dim() != target.dim() {
        return Err(Error::NotInverse(format!("dimensions {} and {} differ", source.dim(), target.dim())));
    }
    let perm: Vec<usize> = source
        .keys
        .iter()
        .map(|k| position.get(&strip(k)).copied().ok_or_else(|| Error::NotInverse(format!("no basis vector with key {k:?}"))))
        .collect::<Result<_>>()?;
    IsoWitness::from_permutation(&source.space, &target.space, &perm)
}

pub fn canonical_witness(source: &Indexed, target: &Indexed) -> Result<IsoWitness> {
    canonical_witness_forgetting(source, target, &[])
}

/// A named finite ordered set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base {
    name: String,
    points: Vec<String>,
}

impl Base {
    pub fn new<S: Into<String>>(name: &str, points: Vec<S>) -> Result<Self> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidModel(format!("point `{p}` listed twice in base `{name}`")));
            }
        }
        Ok(Base { name: name.to_string(), points })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index(&self, point: &str) -> Result<usize> {
        self.points.iter().position(|p| p == point).ok_or_else(|| Error::UnknownPoint(point.to_string()))
    }

    /// `X × Y`, with `(x, y)` at `i * |Y| + j`.
    pub fn product(&self, other: &Base) -> Base {
        let points = self.points.iter().flat_map(|x| other.points.iter().map(move |y| format!("({x},{y})"))).collect();
        Base { name: format!("{}×{}", self.name, other.name), points }
    }

    /// The discrete Boolean algebra of subsets; atom order may differ from
    /// point order, see [`Base::atom_of`].
    pub fn powerset(&self) -> Result<BoolAlg> {
        BoolAlg::new(self.points.iter().cloned())
    }

    pub fn atom_of(&self, algebra: &BoolAlg, point: usize) -> usize {
        algebra.atom_index(&self.points[point]).expect("algebra built from this base")
    }
}

fn same_base(a: &Base, b: &Base) -> Result<()> {
    if a != b {
        return Err(Error::BaseMismatch(format!("`{}` against `{}`", a.name, b.name)));
    }
    Ok(())
}

/// `ξ: X -> Ban` for a finite set `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    name: String,
    base: Base,
    fibers: Vec<Indexed>,
}

impl Bundle {
    pub fn new(name: &str, base: &Base, fibers: Vec<FinBanSpace>) -> Result<Self> {
        if fibers.len() != base.len() {
            return Err(Error::DimensionMismatch(format!("{} fibers over {} points", fibers.len(), base.len())));
        }
        let fibers = fibers.iter().map(|f| Indexed::leaf(name, f)).collect::<Result<_>>()?;
        Ok(Bundle { name: name.to_string(), base: base.clone(), fibers })
    }

    fn from_indexed(name: String, base: &Base, fibers: Vec<Indexed>) -> Self {
        Bundle { name, base: base.clone(), fibers }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn fiber(&self, x: usize) -> &Indexed {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[Indexed] {
        &self.fibers
    }

    pub fn dims(&self) -> Vec<usize> {
        self.fibers.iter().map(Indexed::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.fibers.iter().map(Indexed::dim).sum()
    }

    fn spaces(&self) -> Vec<FinBanSpace> {
        self.fibers.iter().map(|f| f.space.clone()).collect()
    }

    /// Fiberwise `ξ_x ⊗ ζ_x`.
    pub fn tensor(&self, other: &Bundle) -> Result<Bundle> {
        same_base(&self.base, &other.base)?;
        let fibers = self.fibers.iter().zip(&other.fibers).map(|(a, b)| a.tensor(b)).collect::<Result<_>>()?;
        Ok(Bundle::from_indexed(format!("{}⊗{}", self.name, other.name), &self.base, fibers))
    }

    /// Fiberwise `ξ_x ⊗ V`, with `V` named `name`.
    pub fn tensor_space(&self, name: &str, v: &FinBanSpace) -> Result<Bundle> {
        let v = Indexed::leaf(name, v)?;
        let fibers = self.fibers.iter().map(|a| a.tensor(&v)).collect::<Result<_>>()?;
        Ok(Bundle::from_indexed(format!("{}⊗{name}", self.name), &self.base, fibers))
    }
}

/// `δ_x ⊗ V`: the fiber `V` at `x` and zero elsewhere.
pub fn delta_bundle(name: &str, base: &Base, x: &str, v: &FinBanSpace) -> Result<Bundle> {
    let at = base.index(x)?;
    let fibers = (0..base.len()).map(|i| if i == at { v.clone() } else { FinBanSpace::zero() }).collect();
    Bundle::new(name, base, fibers)
}

/// The morphism space of two bundles and the exponential bundle.
#[derive(Debug, Clone)]
pub struct HomBundle {
    /// `Hom(ξ, ζ)`: the end over the discrete base, i.e. the ℓ∞-product of
    /// the fiberwise operator-norm spaces.
    pub morphisms: End,
    /// `ζ^ξ` with fibers `Hom(ξ_x, ζ_x)`.
    pub exponential: Vec<HomSpace>,
}

pub fn hom_bundle(xi: &Bundle, zeta: &Bundle) -> Result<HomBundle> {
    same_base(&xi.base, &zeta.base)?;
    let morphisms = hom_end(&xi.spaces(), &zeta.spaces())?;
    let exponential = xi.fibers.iter().zip(&zeta.fibers).map(|(a, b)| HomSpace::new(&a.space, &b.space)).collect::<Result<_>>()?;
    Ok(HomBundle { morphisms, exponential })
}

/// Currying `Hom(ξ ⊗ ζ, ρ) ≅ Hom(ξ, ρ^ζ)` as a basis bijection of the
/// product spaces. On a fiber, the matrix entry for `ρ_k ← ξ_a ⊗ ζ_b` goes to
/// the entry for `(ρ_k ← ζ_b) ← ξ_a`.
pub fn currying_witness(xi: &Bundle, zeta: &Bundle, rho: &Bundle) -> Result<IsoWitness> {
    same_base(&xi.base, &zeta.base)?;
    same_base(&xi.base, &rho.base)?;
    let lhs = hom_end(&xi.tensor(zeta)?.spaces(), &rho.spaces())?;
    let curried: Vec<FinBanSpace> =
        zeta.fibers.iter().zip(&rho.fibers).map(|(z, r)| Ok(HomSpace::new(&z.space, &r.space)?.space().clone())).collect::<Result<_>>()?;
    let rhs = hom_end(&xi.spaces(), &curried)?;
    let mut perm = Vec::with_capacity(lhs.product().space().dim());
    for x in 0..xi.base.len() {
        let (na, nb, nk) = (xi.fibers[x].dim(), zeta.fibers[x].dim(), rho.fibers[x].dim());
        let (lo, ro) = (lhs.product().offset(x), rhs.product().offset(x));
        // column-major vectorization: entry (row, col) at col * rows + row
        for a in 0..na {
            for b in 0..nb {
                for k in 0..nk {
                    debug_assert_eq!(perm.len(), lo + (a * nb + b) * nk + k);
                    perm.push(ro + a * (nb * nk) + (b * nk + k));
                }
            }
        }
    }
    IsoWitness::from_permutation(lhs.product().space(), rhs.product().space(), &perm)
}

/// A matrix of spaces `T_x^y`, acting on bundles over `X` to give bundles
/// over `Y`. Entries are stored target-major: `entries[y][x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorMatrix {
    name: String,
    source: Base,
    target: Base,
    entries: Vec<Vec<Indexed>>,
}

impl FunctorMatrix {
    pub fn new(name: &str, source: &Base, target: &Base, entries: Vec<Vec<FinBanSpace>>) -> Result<Self> {
        if entries.len() != target.len() || entries.iter().any(|row| row.len() != source.len()) {
            return Err(Error::DimensionMismatch(format!(
                "matrix `{name}` must have {} rows of {} entries",
                target.len(),
                source.len()
            )));
        }
        let entries = entries.iter().map(|row| row.iter().map(|e| Indexed::leaf(name, e)).collect()).collect::<Result<_>>()?;
        Ok(FunctorMatrix { name: name.to_string(), source: source.clone(), target: target.clone(), entries })
    }

    /// Scalars on the diagonal, zero off it. The scalar factor is named
    /// `1:<base>`.
    pub fn identity(base: &Base) -> Self {
        let name = format!("1:{}", base.name);
        let entries = (0..base.len())
            .map(|y| (0..base.len()).map(|x| if x == y { FinBanSpace::l1(1) } else { FinBanSpace::zero() }).collect())
            .collect();
        FunctorMatrix::new(&name, base, base, entries).expect("square by construction")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Base {
        &self.source
    }

    pub fn target(&self) -> &Base {
        &self.target
    }

    pub fn entry(&self, y: usize, x: usize) -> &Indexed {
        &self.entries[y][x]
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.entries.iter().map(|row| row.iter().map(Indexed::dim).collect()).collect()
    }

    /// `(Tξ)_y = ⊕_x ξ_x ⊗ T_x^y`.
    pub fn apply(&self, xi: &Bundle) -> Result<Bundle> {
        same_base(&self.source, &xi.base)?;
        let fibers = (0..self.target.len())
            .map(|y| {
                let parts: Vec<(usize, Indexed)> =
                    (0..self.source.len()).map(|x| Ok((x, xi.fibers[x].tensor(&self.entries[y][x])?))).collect::<Result<_>>()?;
                Indexed::sum(&self.source.name, &parts)
            })
            .collect::<Result<_>>()?;
        Ok(Bundle::from_indexed(format!("{}{}", self.name, xi.name), &self.target, fibers))
    }

    /// `(self ∘ inner)_x^z = ⊕_y self_y^z ⊗ inner_x^y`.
    pub fn compose(&self, inner: &FunctorMatrix) -> Result<FunctorMatrix> {
        same_base(&inner.target, &self.source)?;
        let entries = (0..self.target.len())
            .map(|z| {
                (0..inner.source.len())
                    .map(|x| {
                        let parts: Vec<(usize, Indexed)> = (0..self.source.len())
                            .map(|y| Ok((y, self.entries[z][y].tensor(&inner.entries[y][x])?)))
                            .collect::<Result<_>>()?;
                        Indexed::sum(&self.source.name, &parts)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(FunctorMatrix {
            name: format!("({}{})", self.name, inner.name),
            source: inner.source.clone(),
            target: self.target.clone(),
            entries,
        })
    }

    /// Entrywise canonical witnesses `self ≅ other`, forgetting the given
    /// factor names.
    pub fn witnesses_to(&self, other: &FunctorMatrix, forget: &[&str]) -> Result<Vec<Vec<IsoWitness>>> {
        same_base(&self.source, &other.source)?;
        same_base(&self.target, &other.target)?;
        (0..self.target.len())
            .map(|y| (0..self.source.len()).map(|x| canonical_witness_forgetting(&self.entries[y][x], &other.entries[y][x], forget)).collect())
            .collect()
    }

    /// The matrix `X -> Y` of a bundle over `X × Y`, and back.
    pub fn from_product_bundle(xi: &Bundle, x: &Base, y: &Base) -> Result<FunctorMatrix> {
        same_base(&xi.base, &x.product(y))?;
        let entries = (0..y.len()).map(|j| (0..x.len()).map(|i| xi.fibers[i * y.len() + j].clone()).collect()).collect();
        Ok(FunctorMatrix { name: xi.name.clone(), source: x.clone(), target: y.clone(), entries })
    }

    pub fn to_product_bundle(&self) -> Bundle {
        let (nx, ny) = (self.source.len(), self.target.len());
        let fibers = (0..nx * ny).map(|k| self.entries[k % ny][k / ny].clone()).collect();
        Bundle::from_indexed(self.name.clone(), &self.source.product(&self.target), fibers)
    }
}

/// `((RS)T)_x^w ≅ (R(ST))_x^w` for `T: X -> Y`, `S: Y -> Z`, `R: Z -> W`.
#[derive(Debug, Clone)]
pub struct Associator {
    pub left: FunctorMatrix,
    pub right: FunctorMatrix,
    pub witnesses: Vec<Vec<IsoWitness>>,
}

pub fn associator(r: &FunctorMatrix, s: &FunctorMatrix, t: &FunctorMatrix) -> Result<Associator> {
    let left = r.compose(s)?.compose(t)?;
    let right = r.compose(&s.compose(t)?)?;
    let witnesses = left.witnesses_to(&right, &[])?;
    Ok(Associator { left, right, witnesses })
}

impl Associator {
    pub fn is_isometric(&self) -> Result<bool> {
        for row in &self.witnesses {
            for w in row {
                if !w.is_isometric()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `α ⊗ id` summed over the middle base: the entry `(x, w)` of `(AT) -> (BT)`
/// from entrywise maps `A_y^w -> B_y^w`.
fn whisker_right(alpha: &[Vec<IsoWitness>], t: &FunctorMatrix, w: usize, x: usize) -> Matrix {
    let blocks: Vec<Matrix> = (0..t.target.len())
        .map(|y| alpha[w][y].forward().matrix().kronecker(&Matrix::identity(t.entries[y][x].dim())))
        .collect();
    Matrix::block_diagonal(&blocks.iter().collect::<Vec<_>>())
}

/// `id ⊗ α`: the entry `(x, w)` of `(QA) -> (QB)` from maps `A_x^v -> B_x^v`.
fn whisker_left(q: &FunctorMatrix, alpha: &[Vec<IsoWitness>], w: usize, x: usize) -> Matrix {
    let blocks: Vec<Matrix> = (0..q.source.len())
        .map(|v| Matrix::identity(q.entries[w][v].dim()).kronecker(alpha[v][x].forward().matrix()))
        .collect();
    Matrix::block_diagonal(&blocks.iter().collect::<Vec<_>>())
}

/// The two reassociations `(((QR)S)T) -> (Q(R(ST)))` for
/// `T: X -> Y`, `S: Y -> Z`, `R: Z -> W`, `Q: W -> V`, built from whiskered
/// associators. Returns whether they agree entrywise.
pub fn pentagon_commutes(q: &FunctorMatrix, r: &FunctorMatrix, s: &FunctorMatrix, t: &FunctorMatrix) -> Result<bool> {
    let qrs = associator(q, r, s)?;
    let q_rs_t = associator(q, &r.compose(s)?, t)?;
    let rst = associator(r, s, t)?;
    let qr_s_t = associator(&q.compose(r)?, s, t)?;
    let q_r_st = associator(q, r, &s.compose(t)?)?;
    for v in 0..q.target.len() {
        for x in 0..t.source.len() {
            let long = whisker_left(q, &rst.witnesses, v, x)
                .mul(q_rs_t.witnesses[v][x].forward().matrix())
                .mul(&whisker_right(&qrs.witnesses, t, v, x));
            let short = q_r_st.witnesses[v][x].forward().matrix().mul(qr_s_t.witnesses[v][x].forward().matrix());
            if long != short {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `ξ ≅ Σ_x ξ_x ⊗ δ_x`: the decomposed bundle and fiberwise witnesses onto
/// `ξ`. The delta factor is the scalar named `δ`.
pub fn canonical_decomposition(xi: &Bundle) -> Result<(Bundle, Vec<IsoWitness>)> {
    let delta = Indexed::leaf("δ", &FinBanSpace::l1(1))?;
    let n = xi.base.len();
    let fibers: Vec<Indexed> = (0..n)
        .map(|y| {
            let parts: Vec<(usize, Indexed)> = (0..n)
                .map(|x| Ok((x, if x == y { xi.fibers[x].tensor(&delta)? } else { xi.fibers[x].tensor(&Indexed::zero())? })))
                .collect::<Result<_>>()?;
            Indexed::sum(&xi.base.name, &parts)
        })
        .collect::<Result<_>>()?;
    let decomposed = Bundle::from_indexed(format!("Σ{}⊗δ", xi.name), &xi.base, fibers);
    let forget = [xi.base.name.as_str(), "δ"];
    let witnesses =
        (0..n).map(|y| canonical_witness_forgetting(&decomposed.fibers[y], &xi.fibers[y], &forget)).collect::<Result<_>>()?;
    Ok((decomposed, witnesses))
}

/// `Hom(δ_x, ξ) ≅ ξ_x`, as a witness from the morphism space onto the fiber.
pub fn representable_witness(xi: &Bundle, x: &str) -> Result<IsoWitness> {
    let at = xi.base.index(x)?;
    let delta = delta_bundle("δ", &xi.base, x, &FinBanSpace::l1(1))?;
    let hom = hom_bundle(&delta, xi)?;
    let space = hom.morphisms.product().space().clone();
    let perm: Vec<usize> = (0..space.dim()).collect();
    let fiber = xi.fibers[at].space();
    IsoWitness::from_permutation(&space, fiber, &perm)
}

/// Left Kan extension along a monotone map of finite posets.
pub fn kan_extension_discrete(functor: &FinFunctor, target: &FinCategory, along: &[usize]) -> Result<KanExtension> {
    kan_extension(functor, target, along)
}

/// A space-valued measure on the subsets of a finite set, given by its
/// values on points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteCosheafMeasure {
    name: String,
    base: Base,
    weights: Vec<Indexed>,
}

impl DiscreteCosheafMeasure {
    pub fn new(name: &str, base: &Base, weights: Vec<FinBanSpace>) -> Result<Self> {
        if weights.len() != base.len() {
            return Err(Error::DimensionMismatch(format!("{} weights over {} points", weights.len(), base.len())));
        }
        let weights = weights.iter().map(|w| Indexed::leaf(name, w)).collect::<Result<_>>()?;
        Ok(DiscreteCosheafMeasure { name: name.to_string(), base: base.clone(), weights })
    }

    /// `V` at `x`, zero elsewhere.
    pub fn point_mass(name: &str, base: &Base, x: &str, v: &FinBanSpace) -> Result<Self> {
        let at = base.index(x)?;
        DiscreteCosheafMeasure::new(name, base, (0..base.len()).map(|i| if i == at { v.clone() } else { FinBanSpace::zero() }).collect())
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn weight(&self, x: usize) -> &Indexed {
        &self.weights[x]
    }

    /// `E ↦ ⊕_{x ∈ E} μ(x)` on the powerset of the base.
    pub fn cosheaf(&self) -> Result<PreCosheaf> {
        let alg = self.base.powerset()?;
        let by_atom: Vec<FinBanSpace> =
            (0..alg.n_atoms()).map(|a| self.weights[self.base.index(&alg.atoms()[a]).expect("same points")].space.clone()).collect();
        atomic_cosheaf(&alg, &by_atom)
    }

    /// Reads a measure off a precosheaf on the powerset: its fibers at the
    /// singletons.
    pub fn from_cosheaf(name: &str, base: &Base, mu: &PreCosheaf) -> Result<Self> {
        let alg = base.powerset()?;
        if mu.algebra() != &alg {
            return Err(Error::AlgebraMismatch);
        }
        let data = atom_data(mu);
        let weights = (0..base.len()).map(|x| data[base.atom_of(&alg, x)].clone()).collect();
        DiscreteCosheafMeasure::new(name, base, weights)
    }
}

/// `∫_X ξ dμ = ⊕_x ξ_x ⊗ μ(x)` and its indefinite version on subsets.
#[derive(Debug, Clone)]
pub struct DirectIntegral {
    pub total: Indexed,
    pub indefinite: PreCosheaf,
}

pub fn direct_integral_discrete(xi: &Bundle, mu: &DiscreteCosheafMeasure) -> Result<DirectIntegral> {
    same_base(&xi.base, &mu.base)?;
    let pieces: Vec<Indexed> = xi.fibers.iter().zip(&mu.weights).map(|(f, w)| f.tensor(w)).collect::<Result<_>>()?;
    let total = Indexed::sum(&xi.base.name, &pieces.iter().cloned().enumerate().collect::<Vec<_>>())?;
    let alg = xi.base.powerset()?;
    let by_atom: Vec<FinBanSpace> = (0..alg.n_atoms()).map(|a| pieces[xi.base.index(&alg.atoms()[a]).expect("same points")].space.clone()).collect();
    Ok(DirectIntegral { total, indefinite: atomic_cosheaf(&alg, &by_atom)? })
}

impl DirectIntegral {
    pub fn over(&self, e: Element) -> &FinBanSpace {
        self.indefinite.space(e)
    }
}

/// `T(∫ξ dμ) ≅ ∫(T ∘ ξ) dμ` for a matrix `T` out of a one-point base: the
/// witness at each point `y` of the target base.
pub fn integral_naturality(t: &FunctorMatrix, xi: &Bundle, mu: &DiscreteCosheafMeasure) -> Result<Vec<IsoWitness>> {
    if t.source.len() != 1 {
        return Err(Error::BaseMismatch("the functor must act on single spaces".into()));
    }
    let integral = direct_integral_discrete(xi, mu)?;
    (0..t.target.len())
        .map(|y| {
            let lhs = integral.total.tensor(&t.entries[y][0])?;
            let parts: Vec<(usize, Indexed)> = (0..xi.base.len())
                .map(|x| Ok((x, xi.fibers[x].tensor(&t.entries[y][0])?.tensor(&mu.weights[x])?)))
                .collect::<Result<_>>()?;
            let rhs = Indexed::sum(&xi.base.name, &parts)?;
            canonical_witness(&lhs, &rhs)
        })
        .collect()
}

/// `S(Tξ) ≅ (ST)ξ` fiberwise.
pub fn apply_compose_witness(s: &FunctorMatrix, t: &FunctorMatrix, xi: &Bundle) -> Result<Vec<IsoWitness>> {
    let twice = s.apply(&t.apply(xi)?)?;
    let once = s.compose(t)?.apply(xi)?;
    (0..s.target.len()).map(|z| canonical_witness(&twice.fibers[z], &once.fibers[z])).collect()
}

/// A fiberwise witness as one map between total spaces.
pub fn total_witness(witnesses: &[IsoWitness]) -> Result<IsoWitness> {
    let fwd: Vec<Matrix> = witnesses.iter().map(|w| w.forward().matrix().clone()).collect();
    let bwd: Vec<Matrix> = witnesses.iter().map(|w| w.backward().matrix().clone()).collect();
    let src = coproduct_of(&witnesses.iter().map(|w| w.forward().source().clone()).collect::<Vec<_>>())?;
    let dst = coproduct_of(&witnesses.iter().map(|w| w.forward().target().clone()).collect::<Vec<_>>())?;
    IsoWitness::new(
        LinMap::new(src.space().clone(), dst.space().clone(), Matrix::block_diagonal(&fwd.iter().collect::<Vec<_>>()))?,
        LinMap::new(dst.space().clone(), src.space().clone(), Matrix::block_diagonal(&bwd.iter().collect::<Vec<_>>()))?,
    )
}
