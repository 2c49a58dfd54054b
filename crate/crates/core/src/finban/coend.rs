//! Finite ends and coends over thin categories presented by generating
//! arrows, plus the Yoneda and Kan-extension constructions built on them.

use super::map::{HomSpace, IsoWitness, LinMap};
use super::quotient::{quotient, QuotientSpace, Subspace};
use super::space::FinBanSpace;
use super::sums::{coproduct_of, product_of, DirectSum};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// A finite thin category without nontrivial cycles (a finite poset),
/// presented by objects and generating arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<(usize, usize)>,
    reach: Vec<Vec<bool>>,
    order: Vec<usize>,
}

impl FinCategory {
    pub fn new<S: Into<String>>(objects: Vec<S>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let n = objects.len();
        for &(a, b) in &arrows {
            if a >= n || b >= n {
                return Err(Error::InvalidModel(format!("arrow {a} -> {b} leaves the category")));
            }
            if a == b {
                return Err(Error::InvalidModel("identity arrows are implicit".into()));
            }
        }
        // Kahn's algorithm; leftovers sit on a cycle
        let mut indeg = vec![0usize; n];
        for &(_, b) in &arrows {
            indeg[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(a, b) in &arrows {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        if order.len() != n {
            return Err(Error::InvalidModel("generating arrows contain a cycle".into()));
        }
        let mut reach = vec![vec![false; n]; n];
        for &v in order.iter().rev() {
            reach[v][v] = true;
            for &(a, b) in &arrows {
                if a == v {
                    let from_b = reach[b].clone();
                    for (r, &hit) in reach[v].iter_mut().zip(&from_b) {
                        *r |= hit;
                    }
                }
            }
        }
        Ok(FinCategory { objects, arrows, reach, order })
    }

    pub fn discrete<S: Into<String>>(objects: Vec<S>) -> Self {
        FinCategory::new(objects, Vec::new()).expect("no arrows, no cycles")
    }

    /// `0 -> 1 -> ... -> n-1`.
    pub fn chain(n: usize) -> Self {
        let objects = (0..n).map(|i| i.to_string()).collect();
        FinCategory::new(objects, (1..n).map(|i| (i - 1, i)).collect()).expect("a chain is acyclic")
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Whether there is a (necessarily unique) arrow `a -> b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }
}

/// A covariant functor from a [`FinCategory`] to spaces, given on generating
/// arrows. Construction checks that parallel paths compose to the same map.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    category: FinCategory,
    spaces: Vec<FinBanSpace>,
    maps: Vec<LinMap>,
    composites: Vec<Vec<Option<Matrix>>>,
}

impl FinFunctor {
    pub fn new(category: FinCategory, spaces: Vec<FinBanSpace>, maps: Vec<LinMap>) -> Result<Self> {
        let n = category.len();
        if spaces.len() != n || maps.len() != category.arrows().len() {
            return Err(Error::NotAFunctor("one space per object and one map per arrow".into()));
        }
        for (&(a, b), f) in category.arrows().iter().zip(&maps) {
            if !f.source().same_norm(&spaces[a]) || !f.target().same_norm(&spaces[b]) {
                return Err(Error::NotAFunctor(format!(
                    "map on {} -> {} has the wrong source or target",
                    category.objects[a], category.objects[b]
                )));
            }
        }
        let mut composites = vec![vec![None; n]; n];
        for a in 0..n {
            composites[a][a] = Some(Matrix::identity(spaces[a].dim()));
            for &v in category.topological_order() {
                for (&(c, b), f) in category.arrows().iter().zip(&maps) {
                    if b != v {
                        continue;
                    }
                    let Some(prev) = composites[a][c].clone() else { continue };
                    let candidate = f.matrix().mul(&prev);
                    match &composites[a][b] {
                        None => composites[a][b] = Some(candidate),
                        Some(existing) if *existing == candidate => {}
                        Some(_) => {
                            return Err(Error::NotAFunctor(format!(
                                "paths {} -> {} compose to different maps",
                                category.objects[a], category.objects[b]
                            )))
                        }
                    }
                }
            }
        }
        Ok(FinFunctor { category, spaces, maps, composites })
    }

    /// The constant-free functor on a discrete category.
    pub fn on_discrete(spaces: Vec<FinBanSpace>) -> Self {
        let cat = FinCategory::discrete((0..spaces.len()).map(|i| i.to_string()).collect());
        FinFunctor::new(cat, spaces, Vec::new()).expect("discrete functors have nothing to check")
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn space(&self, a: usize) -> &FinBanSpace {
        &self.spaces[a]
    }

    pub fn spaces(&self) -> &[FinBanSpace] {
        &self.spaces
    }

    pub fn arrow_maps(&self) -> &[LinMap] {
        &self.maps
    }

    /// `F(a ≤ b)`, if the arrow exists.
    pub fn map_between(&self, a: usize, b: usize) -> Option<LinMap> {
        let m = self.composites[a][b].clone()?;
        LinMap::new(self.spaces[a].clone(), self.spaces[b].clone(), m).ok()
    }
}

/// One coend relation: for `x ∈ R`, `ι_from(left x) ~ ι_to(right x)`.
#[derive(Debug, Clone)]
pub struct CoendRelation {
    pub from: usize,
    pub to: usize,
    pub left: Matrix,
    pub right: Matrix,
}

/// Coend of a bifunctor `G` given by its diagonal `G(m, m)` and, per
/// generating arrow `f: m -> m'`, the pair `G(f, 1), G(1, f)` out of `G(m', m)`.
pub fn coend(diagonal: &[FinBanSpace], relations: &[CoendRelation]) -> Result<Coend> {
    let sum = coproduct_of(diagonal)?;
    let mut gens = Vec::new();
    for r in relations {
        if r.from >= diagonal.len() || r.to >= diagonal.len() {
            return Err(Error::NotAFunctor("relation between unknown objects".into()));
        }
        if r.left.rows() != diagonal[r.from].dim()
            || r.right.rows() != diagonal[r.to].dim()
            || r.left.cols() != r.right.cols()
        {
            return Err(Error::NotAFunctor("relation maps have inconsistent shapes".into()));
        }
        for k in 0..r.left.cols() {
            let mut v = vec![Rational::default(); sum.space().dim()];
            let (fo, to) = (sum.offset(r.from), sum.offset(r.to));
            for i in 0..r.left.rows() {
                v[fo + i] += &r.left[(i, k)];
            }
            for i in 0..r.right.rows() {
                v[to + i] -= &r.right[(i, k)];
            }
            gens.push(v);
        }
    }
    let quotient = quotient(sum.space(), &gens)?;
    Ok(Coend { sum, quotient })
}

#[derive(Debug, Clone)]
pub struct Coend {
    sum: DirectSum,
    quotient: QuotientSpace,
}

impl Coend {
    pub fn sum(&self) -> &DirectSum {
        &self.sum
    }

    pub fn quotient(&self) -> &QuotientSpace {
        &self.quotient
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// The universal cowedge component `G(m, m) -> ∫^m G`.
    pub fn wedge(&self, m: usize) -> Matrix {
        self.quotient.projection().mul(self.sum.injection(m).matrix())
    }

    /// The map out of the coend induced by a cowedge, given as one matrix
    /// per diagonal object. Fails if the cowedge does not respect the
    /// relations.
    pub fn induced(&self, cowedge: &[Matrix]) -> Result<Matrix> {
        let rows = cowedge.first().map_or(0, Matrix::rows);
        let whole = Matrix::hstack(&cowedge.iter().collect::<Vec<_>>(), rows);
        if !whole.mul(self.quotient.span()).is_zero() {
            return Err(Error::NotAFunctor("cowedge does not coequalize the relations".into()));
        }
        Ok(whole.mul(&self.quotient.section()))
    }
}

/// One end relation, for `f: m -> m'`: `left x_m = right x_{m'}` in `G(m, m')`.
#[derive(Debug, Clone)]
pub struct EndRelation {
    pub from: usize,
    pub to: usize,
    pub left: Matrix,
    pub right: Matrix,
}

#[derive(Debug, Clone)]
pub struct End {
    product: DirectSum,
    subspace: Subspace,
}

/// End of a bifunctor as the equalizer inside the ℓ∞-product of its diagonal.
pub fn end(diagonal: &[FinBanSpace], relations: &[EndRelation]) -> Result<End> {
    let product = product_of(diagonal)?;
    let total = product.space().dim();
    let mut rows = Vec::new();
    for r in relations {
        if r.from >= diagonal.len() || r.to >= diagonal.len() {
            return Err(Error::NotAFunctor("relation between unknown objects".into()));
        }
        if r.left.cols() != diagonal[r.from].dim()
            || r.right.cols() != diagonal[r.to].dim()
            || r.left.rows() != r.right.rows()
        {
            return Err(Error::NotAFunctor("relation maps have inconsistent shapes".into()));
        }
        let (fo, to) = (product.offset(r.from), product.offset(r.to));
        for i in 0..r.left.rows() {
            let mut row = vec![Rational::default(); total];
            for j in 0..r.left.cols() {
                row[fo + j] += &r.left[(i, j)];
            }
            for j in 0..r.right.cols() {
                row[to + j] -= &r.right[(i, j)];
            }
            rows.push(row);
        }
    }
    let constraints = Matrix::from_rows(total, rows)?;
    let subspace = Subspace::kernel(product.space(), &constraints)?;
    Ok(End { product, subspace })
}

impl End {
    pub fn product(&self) -> &DirectSum {
        &self.product
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// The universal wedge component `∫_m G -> G(m, m)`.
    pub fn component(&self, m: usize) -> Matrix {
        self.product.projection(m).matrix().mul(self.subspace.basis())
    }

    /// Whether no relation cuts the product down, in which case the end is
    /// the product space itself.
    pub fn is_whole_product(&self) -> bool {
        self.dim() == self.product.space().dim()
    }
}

/// Natural transformations `F => G` as an end of `Hom(F-, G-)`.
pub fn nat_end(f: &FinFunctor, g: &FinFunctor) -> Result<End> {
    if f.category() != g.category() {
        return Err(Error::NotAFunctor("functors on different categories".into()));
    }
    let cat = f.category();
    let mut diagonal = Vec::with_capacity(cat.len());
    for m in 0..cat.len() {
        diagonal.push(HomSpace::new(f.space(m), g.space(m))?.space().clone());
    }
    let mut relations = Vec::new();
    for (k, &(m, mp)) in cat.arrows().iter().enumerate() {
        let (ff, gf) = (f.arrow_maps()[k].matrix(), g.arrow_maps()[k].matrix());
        relations.push(EndRelation {
            from: m,
            to: mp,
            left: HomSpace::conjugation_matrix(&Matrix::identity(f.space(m).dim()), gf),
            right: HomSpace::conjugation_matrix(ff, &Matrix::identity(g.space(mp).dim())),
        });
    }
    end(&diagonal, &relations)
}

/// End of `Hom(ξₓ, ζₓ)` over a discrete set: the product of hom spaces.
pub fn hom_end(xi: &[FinBanSpace], zeta: &[FinBanSpace]) -> Result<End> {
    if xi.len() != zeta.len() {
        return Err(Error::BaseMismatch(format!("{} fibers against {}", xi.len(), zeta.len())));
    }
    nat_end(&FinFunctor::on_discrete(xi.to_vec()), &FinFunctor::on_discrete(zeta.to_vec()))
}

/// A left Kan extension along a monotone map of posets, evaluated at every
/// object of the target category.
#[derive(Debug, Clone)]
pub struct KanExtension {
    functor: FinFunctor,
    target: FinCategory,
    along: Vec<usize>,
    values: Vec<Coend>,
}

/// `Lan_I F(a) = ∫^m Hom(I m, a) ⊗ F m`. Here `Hom(I m, a)` is the scalars
/// when `I m ≤ a` and zero otherwise, so the coend is a quotient of
/// `⊕_{I m ≤ a} F m`.
pub fn kan_extension(functor: &FinFunctor, target: &FinCategory, along: &[usize]) -> Result<KanExtension> {
    let source = functor.category();
    if along.len() != source.len() || along.iter().any(|&a| a >= target.len()) {
        return Err(Error::NotAFunctor("object map has the wrong shape".into()));
    }
    for &(m, mp) in source.arrows() {
        if !target.leq(along[m], along[mp]) {
            return Err(Error::NotAFunctor(format!(
                "arrow {} -> {} is not sent to an arrow",
                source.objects()[m],
                source.objects()[mp]
            )));
        }
    }
    let mut values = Vec::with_capacity(target.len());
    for a in 0..target.len() {
        let diagonal: Vec<FinBanSpace> = (0..source.len())
            .map(|m| if target.leq(along[m], a) { functor.space(m).clone() } else { FinBanSpace::zero() })
            .collect();
        let mut relations = Vec::new();
        for (k, &(m, mp)) in source.arrows().iter().enumerate() {
            if !target.leq(along[mp], a) {
                continue;
            }
            relations.push(CoendRelation {
                from: m,
                to: mp,
                left: Matrix::identity(functor.space(m).dim()),
                right: functor.arrow_maps()[k].matrix().clone(),
            });
        }
        values.push(coend(&diagonal, &relations)?);
    }
    Ok(KanExtension { functor: functor.clone(), target: target.clone(), along: along.to_vec(), values })
}

impl KanExtension {
    pub fn value(&self, a: usize) -> &Coend {
        &self.values[a]
    }

    pub fn values(&self) -> &[Coend] {
        &self.values
    }

    /// The universal map `ηₘ: F m -> Lan F (I m)`, in quotient coordinates.
    pub fn unit(&self, m: usize) -> Matrix {
        self.values[self.along[m]].wedge(m)
    }

    /// `Lan F (a ≤ b)` on quotient coordinates.
    pub fn map_between(&self, a: usize, b: usize) -> Result<Matrix> {
        if !self.target.leq(a, b) {
            return Err(Error::NotAFunctor("no arrow between the objects".into()));
        }
        let cowedge: Vec<Matrix> = (0..self.functor.category().len())
            .map(|m| {
                if self.target.leq(self.along[m], a) {
                    self.values[b].wedge(m)
                } else {
                    Matrix::zeros(self.values[b].dim(), 0)
                }
            })
            .collect();
        self.values[a].induced(&cowedge)
    }

    /// Whether `I` is fully faithful: injective, reflecting and preserving
    /// the order.
    pub fn along_fully_faithful(&self) -> bool {
        let src = self.functor.category();
        (0..src.len()).all(|m| {
            (0..src.len()).all(|n| (m == n || self.along[m] != self.along[n]) && src.leq(m, n) == self.target.leq(self.along[m], self.along[n]))
        })
    }

    /// For fully faithful `I`, each unit `ηₘ` as an iso witness onto the ℓ1
    /// presentation of `Lan F (I m)`.
    pub fn unit_witnesses(&self) -> Result<Vec<IsoWitness>> {
        if !self.along_fully_faithful() {
            return Err(Error::NotAFunctor("the unit is an iso only along fully faithful maps".into()));
        }
        (0..self.functor.category().len())
            .map(|m| {
                let value = &self.values[self.along[m]];
                let (space, change) = value
                    .quotient()
                    .as_l1()
                    .ok_or_else(|| Error::NotInverse("Kan extension value is not weighted ℓ1".into()))?;
                IsoWitness::from_invertible(LinMap::new(self.functor.space(m).clone(), space, change.mul(&self.unit(m)))?)
            })
            .collect()
    }
}

/// Strong Yoneda: the coend of `Hom(-, b) ⊗ F(-)` with its comparison map to
/// `F(b)`, packaged as an iso witness out of the coend's ℓ1 presentation.
pub fn yoneda_coend(functor: &FinFunctor, b: usize) -> Result<(Coend, IsoWitness)> {
    let cat = functor.category();
    let ident: Vec<usize> = (0..cat.len()).collect();
    let lan = kan_extension(functor, cat, &ident)?;
    let value = lan.values[b].clone();
    let cowedge: Vec<Matrix> = (0..cat.len())
        .map(|m| match functor.map_between(m, b) {
            Some(f) => f.into_matrix(),
            None => Matrix::zeros(functor.space(b).dim(), 0),
        })
        .collect();
    let comparison = value.induced(&cowedge)?;
    let (space, change) = value
        .quotient()
        .as_l1()
        .ok_or_else(|| Error::NotInverse("coend is not weighted ℓ1".into()))?;
    let forward = LinMap::new(space, functor.space(b).clone(), comparison.mul(&change.inverse()?))?;
    let witness = IsoWitness::from_invertible(forward)?;
    Ok((value, witness))
}
