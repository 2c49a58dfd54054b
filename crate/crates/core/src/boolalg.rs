//! Finite Boolean algebras in atomic (powerset) form.
//!
//! A finite Boolean algebra is the powerset of its atoms, so an element is a
//! bitset over the atom list. Atoms are kept in lexicographic order of their
//! identifiers; that order fixes every bit and basis encoding downstream.
//!
//! On a finite algebra every countable or arbitrary partition is finite, so the
//! finite, countable and complete Grothendieck topologies coincide. Only the
//! finite one is exposed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported atom count (elements are `u64` bitsets).
pub const MAX_ATOMS: usize = 64;

/// An element of a finite Boolean algebra: the set of atoms below it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element(u64);

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({:#b})", self.0)
    }
}

impl Element {
    pub const BOTTOM: Element = Element(0);

    pub fn from_bits(bits: u64) -> Self {
        Element(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn atom(i: usize) -> Self {
        Element(1u64 << i)
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        Element(atoms.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn is_bottom(self) -> bool {
        self.0 == 0
    }

    pub fn meet(self, other: Element) -> Element {
        Element(self.0 & other.0)
    }

    pub fn join(self, other: Element) -> Element {
        Element(self.0 | other.0)
    }

    /// Relative complement `self ∖ other`.
    pub fn minus(self, other: Element) -> Element {
        Element(self.0 & !other.0)
    }

    pub fn is_below(self, other: Element) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Element) -> bool {
        self.0 & other.0 == 0
    }

    pub fn has_atom(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Index of the least atom below `self`.
    pub fn min_atom(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Atom indices below `self`, ascending.
    pub fn atoms(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// All elements below `self` (including bottom and `self`), in increasing
    /// bit order.
    pub fn subelements(self) -> impl Iterator<Item = Element> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Element(cur))
        })
    }
}

/// A finite Boolean algebra presented by its atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolAlg {
    atoms: Arc<[String]>,
}

impl fmt::Debug for BoolAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BoolAlg").field(&self.atoms).finish()
    }
}

impl BoolAlg {
    /// Builds the powerset algebra on the given atom identifiers. Atoms are
    /// sorted; duplicates and empty lists are rejected.
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(atoms: I) -> Result<Self> {
        let mut atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidModel("a Boolean algebra needs at least one atom".into()));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooLarge(format!("{} atoms (max {MAX_ATOMS})", atoms.len())));
        }
        atoms.sort();
        if let Some(w) = atoms.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidModel(format!("duplicate atom `{}`", w[0])));
        }
        Ok(BoolAlg { atoms: atoms.into() })
    }

    /// Powerset algebra on atoms `"0"`, `"1"`, ... (zero-padded so that the
    /// lexicographic order agrees with the numeric one).
    pub fn numbered(n: usize) -> Result<Self> {
        let width = n.saturating_sub(1).to_string().len();
        BoolAlg::new((0..n).map(|i| format!("{i:0width$}")))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn top(&self) -> Element {
        if self.atoms.len() == 64 { Element(u64::MAX) } else { Element((1u64 << self.atoms.len()) - 1) }
    }

    pub fn bottom(&self) -> Element {
        Element::BOTTOM
    }

    pub fn complement(&self, e: Element) -> Element {
        self.top().minus(e)
    }

    pub fn contains(&self, e: Element) -> bool {
        e.is_below(self.top())
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.as_str().cmp(name)).ok()
    }

    pub fn element_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Element> {
        names.iter().try_fold(Element::BOTTOM, |acc, n| {
            let n = n.as_ref();
            self.atom_index(n)
                .map(|i| acc.join(Element::atom(i)))
                .ok_or_else(|| Error::InvalidModel(format!("unknown atom `{n}`")))
        })
    }

    pub fn atom_names(&self, e: Element) -> Vec<&str> {
        e.atoms().map(|i| self.atoms[i].as_str()).collect()
    }

    /// Every element of the algebra, `2^n` of them, in bit order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        self.top().subelements()
    }

    /// Nonzero elements.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Element> {
        self.elements().skip(1)
    }

    /// Rejects enumerations over more than `limit` atoms.
    pub fn ensure_enumerable(&self, limit: usize) -> Result<()> {
        if self.n_atoms() > limit {
            return Err(Error::TooLarge(format!(
                "enumeration over {} atoms exceeds the limit of {limit}",
                self.n_atoms()
            )));
        }
        Ok(())
    }
}

/// Result of [`build_algebra`]: the atomic algebra plus, for every ground
/// point, the index of the atom containing it.
#[derive(Debug, Clone)]
pub struct GeneratedAlgebra {
    pub algebra: BoolAlg,
    pub cell_of: BTreeMap<String, usize>,
}

impl GeneratedAlgebra {
    /// Element of the generated algebra corresponding to a set of ground points.
    /// Fails if the set is not a union of atoms.
    pub fn element_for<S: AsRef<str>>(&self, points: &[S]) -> Result<Element> {
        let mut e = Element::BOTTOM;
        for p in points {
            let p = p.as_ref();
            let cell = *self
                .cell_of
                .get(p)
                .ok_or_else(|| Error::InvalidModel(format!("`{p}` is not a ground point")))?;
            e = e.join(Element::atom(cell));
        }
        let covered: BTreeSet<&str> = points.iter().map(AsRef::as_ref).collect();
        let full: BTreeSet<&str> = self
            .cell_of
            .iter()
            .filter(|(_, &c)| e.has_atom(c))
            .map(|(p, _)| p.as_str())
            .collect();
        if covered != full {
            return Err(Error::InvalidModel("point set is not an element of the generated algebra".into()));
        }
        Ok(e)
    }
}

/// The Boolean algebra of subsets of `ground` generated by `generators`,
/// re-presented atomically: its atoms are the nonempty cells of the common
/// refinement of the generators. An atom's identifier is its points joined
/// by `+`.
pub fn build_algebra<S: AsRef<str>>(ground: &[S], generators: &[Vec<S>]) -> Result<GeneratedAlgebra> {
    let points: BTreeSet<&str> = ground.iter().map(AsRef::as_ref).collect();
    if points.is_empty() {
        return Err(Error::InvalidModel("empty ground set".into()));
    }
    let gens: Vec<BTreeSet<&str>> = generators
        .iter()
        .map(|g| {
            let set: BTreeSet<&str> = g.iter().map(AsRef::as_ref).collect();
            match set.iter().find(|p| !points.contains(*p)) {
                Some(p) => Err(Error::InvalidModel(format!("generator mentions unknown point `{p}`"))),
                None => Ok(set),
            }
        })
        .collect::<Result<_>>()?;
    // cell = membership signature across generators
    let mut cells: BTreeMap<Vec<bool>, Vec<&str>> = BTreeMap::new();
    for p in &points {
        let sig: Vec<bool> = gens.iter().map(|g| g.contains(p)).collect();
        cells.entry(sig).or_default().push(p);
    }
    let names: Vec<String> = cells.values().map(|members| members.join("+")).collect();
    let algebra = BoolAlg::new(names)?;
    let mut cell_of = BTreeMap::new();
    for members in cells.values() {
        let idx = algebra.atom_index(&members.join("+")).expect("atom just inserted");
        for p in members {
            cell_of.insert(p.to_string(), idx);
        }
    }
    Ok(GeneratedAlgebra { algebra, cell_of })
}

/// A finite partition of a nonzero element into pairwise disjoint nonzero
/// blocks, sorted by least atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parent: Element,
    blocks: Vec<Element>,
}

impl Partition {
    pub fn new(parent: Element, mut blocks: Vec<Element>) -> Result<Self> {
        let mut seen = Element::BOTTOM;
        for &b in &blocks {
            if b.is_bottom() {
                return Err(Error::InvalidModel("partition has a zero block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::InvalidModel("partition blocks overlap".into()));
            }
            seen = seen.join(b);
        }
        if seen != parent {
            return Err(Error::InvalidModel("partition blocks do not join to the parent".into()));
        }
        blocks.sort_by_key(|b| b.min_atom());
        Ok(Partition { parent, blocks })
    }

    pub fn parent(&self) -> Element {
        self.parent
    }

    pub fn blocks(&self) -> &[Element] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True when every block of `self` lies under some block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.parent == other.parent && self.blocks.iter().all(|b| other.blocks.iter().any(|c| b.is_below(*c)))
    }

    /// The finest partition: one block per atom.
    pub fn atomic(parent: Element) -> Result<Self> {
        if parent.is_bottom() {
            return Err(Error::EmptyElement);
        }
        Partition::new(parent, parent.atoms().map(Element::atom).collect())
    }
}

/// Enumerates every partition of `e` with at most `max_blocks` blocks, via
/// restricted growth strings over the atoms below `e`.
pub fn partitions_of(algebra: &BoolAlg, e: Element, max_blocks: usize) -> Result<Partitions> {
    if e.is_bottom() {
        return Err(Error::EmptyElement);
    }
    if !algebra.contains(e) {
        return Err(Error::AlgebraMismatch);
    }
    let atoms: Vec<usize> = e.atoms().collect();
    Ok(Partitions { parent: e, growth: Some(vec![0; atoms.len()]), atoms, max_blocks: max_blocks.max(1) })
}

/// Iterator returned by [`partitions_of`].
#[derive(Debug, Clone)]
pub struct Partitions {
    parent: Element,
    atoms: Vec<usize>,
    growth: Option<Vec<usize>>,
    max_blocks: usize,
}

impl Partitions {
    fn advance(&mut self) {
        let Some(g) = self.growth.as_mut() else { return };
        let n = g.len();
        // find the rightmost position that can be incremented
        let mut i = n;
        while i > 1 {
            i -= 1;
            let prefix_max = g[..i].iter().copied().max().unwrap_or(0);
            if g[i] <= prefix_max && g[i] + 1 < self.max_blocks {
                g[i] += 1;
                for v in g.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                return;
            }
        }
        self.growth = None;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let g = self.growth.clone()?;
        self.advance();
        let nblocks = g.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![Element::BOTTOM; nblocks];
        for (k, &b) in g.iter().enumerate() {
            blocks[b] = blocks[b].join(Element::atom(self.atoms[k]));
        }
        Some(Partition { parent: self.parent, blocks })
    }
}

/// Binary partitions `{F, E ∖ F}` of `e`, each listed once (`F` holds the
/// least atom of `e`).
pub fn binary_partitions(e: Element) -> impl Iterator<Item = (Element, Element)> {
    let anchor = e.min_atom().map(Element::atom).unwrap_or_default();
    let rest = e.minus(anchor);
    rest.subelements().filter(move |s| *s != rest).map(move |s| {
        let f = s.join(anchor);
        (f, e.minus(f))
    })
}

/// A ring morphism between finite Boolean algebras, given by the images of
/// source atoms. Images are pairwise disjoint; the morphism is a Boolean
/// algebra morphism (unital) iff they join to the target top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMorphism {
    source: BoolAlg,
    target: BoolAlg,
    images: Vec<Element>,
}

impl BoolMorphism {
    pub fn new(source: BoolAlg, target: BoolAlg, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.n_atoms() {
            return Err(Error::InvalidModel(format!(
                "morphism needs {} atom images, got {}",
                source.n_atoms(),
                images.len()
            )));
        }
        let mut seen = Element::BOTTOM;
        for &im in &images {
            if !target.contains(im) {
                return Err(Error::AlgebraMismatch);
            }
            if !im.is_disjoint(seen) {
                return Err(Error::InvalidModel("images of distinct atoms overlap".into()));
            }
            seen = seen.join(im);
        }
        Ok(BoolMorphism { source, target, images })
    }

    pub fn identity(algebra: &BoolAlg) -> Self {
        let images = (0..algebra.n_atoms()).map(Element::atom).collect();
        BoolMorphism { source: algebra.clone(), target: algebra.clone(), images }
    }

    pub fn source(&self) -> &BoolAlg {
        &self.source
    }

    pub fn target(&self) -> &BoolAlg {
        &self.target
    }

    pub fn atom_images(&self) -> &[Element] {
        &self.images
    }

    pub fn is_unital(&self) -> bool {
        self.apply(self.source.top()) == self.target.top()
    }

    pub fn apply(&self, e: Element) -> Element {
        e.atoms().fold(Element::BOTTOM, |acc, i| acc.join(self.images[i]))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BoolMorphism) -> Result<BoolMorphism> {
        if inner.target != self.source {
            return Err(Error::AlgebraMismatch);
        }
        let images = inner.images.iter().map(|&e| self.apply(e)).collect();
        BoolMorphism::new(inner.source.clone(), self.target.clone(), images)
    }

    /// Exhaustively checks that top, bottom, meets, joins and complements are
    /// preserved (complements only when unital). Intended for small algebras.
    pub fn preserves_operations(&self) -> bool {
        let s = &self.source;
        if !self.apply(s.bottom()).is_bottom() {
            return false;
        }
        let elems: Vec<Element> = s.elements().collect();
        let unital = self.is_unital();
        elems.iter().all(|&e| {
            (!unital || self.apply(s.complement(e)) == self.target.complement(self.apply(e)))
                && elems.iter().all(|&f| {
                    self.apply(e.meet(f)) == self.apply(e).meet(self.apply(f))
                        && self.apply(e.join(f)) == self.apply(e).join(self.apply(f))
                })
        })
    }

    /// All unital morphisms `source -> target`: each target atom is sent to
    /// exactly one source atom's image.
    pub fn enumerate_unital(source: &BoolAlg, target: &BoolAlg) -> Vec<BoolMorphism> {
        let (n, m) = (source.n_atoms(), target.n_atoms());
        let total = n.checked_pow(m as u32).expect("enumeration too large");
        (0..total)
            .map(|mut code| {
                let mut images = vec![Element::BOTTOM; n];
                for t in 0..m {
                    images[code % n] = images[code % n].join(Element::atom(t));
                    code /= n;
                }
                BoolMorphism { source: source.clone(), target: target.clone(), images }
            })
            .collect()
    }
}

/// An ultrafilter of a finite Boolean algebra; each is principal, generated by
/// an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ultrafilter {
    pub atom: usize,
}

impl Ultrafilter {
    pub fn contains(self, e: Element) -> bool {
        e.has_atom(self.atom)
    }
}

/// Whether `members` (a set of elements) is an ultrafilter: a proper filter
/// that contains exactly one of `E`, `∁E` for every `E`.
pub fn is_ultrafilter(algebra: &BoolAlg, members: &BTreeSet<Element>) -> bool {
    if members.contains(&algebra.bottom()) || !members.contains(&algebra.top()) {
        return false;
    }
    for &e in members {
        for f in algebra.elements() {
            if e.is_below(f) && !members.contains(&f) {
                return false;
            }
        }
        for &f in members {
            if !members.contains(&e.meet(f)) {
                return false;
            }
        }
    }
    algebra.elements().all(|e| members.contains(&e) != members.contains(&algebra.complement(e)))
}

/// The Stone space of a finite algebra: its (principal) ultrafilters, with
/// clopens forming the powerset algebra of points.
#[derive(Debug, Clone)]
pub struct StoneSpace {
    algebra: BoolAlg,
    points: Vec<Ultrafilter>,
    clopens: BoolAlg,
}

impl StoneSpace {
    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn points(&self) -> &[Ultrafilter] {
        &self.points
    }

    /// Powerset algebra of the points; point `k` is atom `k`.
    pub fn clopens(&self) -> &BoolAlg {
        &self.clopens
    }

    /// `η(E)`: the clopen set of ultrafilters containing `E`.
    pub fn eta(&self, e: Element) -> Element {
        Element::from_atoms(self.points.iter().enumerate().filter(|(_, u)| u.contains(e)).map(|(k, _)| k))
    }

    /// Inverse of `η` on clopens.
    pub fn eta_inverse(&self, clopen: Element) -> Element {
        Element::from_atoms(clopen.atoms().map(|k| self.points[k].atom))
    }

    pub fn eta_morphism(&self) -> BoolMorphism {
        let images = (0..self.algebra.n_atoms()).map(|i| self.eta(Element::atom(i))).collect();
        BoolMorphism::new(self.algebra.clone(), self.clopens.clone(), images).expect("η is a bijection on atoms")
    }

    /// Exact check that `η` is a Boolean isomorphism onto the clopens and
    /// commutes with complement, meet and join.
    pub fn round_trip_holds(&self) -> bool {
        let a = &self.algebra;
        if self.points.len() != a.n_atoms() {
            return false;
        }
        if self.eta(a.top()) != self.clopens.top() || !self.eta(a.bottom()).is_bottom() {
            return false;
        }
        let elems: Vec<Element> = a.elements().collect();
        let mut hit = BTreeSet::new();
        for &e in &elems {
            let img = self.eta(e);
            if self.eta_inverse(img) != e || !hit.insert(img) {
                return false;
            }
            if self.eta(a.complement(e)) != self.clopens.complement(img) {
                return false;
            }
            for &f in &elems {
                if self.eta(e.meet(f)) != img.meet(self.eta(f)) || self.eta(e.join(f)) != img.join(self.eta(f)) {
                    return false;
                }
            }
        }
        hit.len() == 1usize << self.clopens.n_atoms()
    }
}

/// Points of the Stone space are labelled `uf:<atom>`.
pub fn stone_space(algebra: &BoolAlg) -> StoneSpace {
    let points: Vec<Ultrafilter> = (0..algebra.n_atoms()).map(|atom| Ultrafilter { atom }).collect();
    let clopens = BoolAlg::new(algebra.atoms().iter().map(|a| format!("uf:{a}"))).expect("same cardinality");
    StoneSpace { algebra: algebra.clone(), points, clopens }
}

/// Coproduct `Ω ⊗ Σ` of two finite Boolean algebras together with its
/// injections. Pair atoms are labelled `(a,b)`.
#[derive(Debug, Clone)]
pub struct Coproduct {
    left: BoolAlg,
    right: BoolAlg,
    algebra: BoolAlg,
    pair_atom: Vec<usize>,
    inl: BoolMorphism,
    inr: BoolMorphism,
}

pub fn coproduct(left: &BoolAlg, right: &BoolAlg) -> Result<Coproduct> {
    let (n, m) = (left.n_atoms(), right.n_atoms());
    let label = |i: usize, j: usize| format!("({},{})", left.atoms()[i], right.atoms()[j]);
    let algebra = BoolAlg::new((0..n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| label(i, j)))?;
    let pair_atom: Vec<usize> = (0..n * m)
        .map(|k| algebra.atom_index(&label(k / m, k % m)).expect("pair atom exists"))
        .collect();
    let inl_images = (0..n).map(|i| Element::from_atoms((0..m).map(|j| pair_atom[i * m + j]))).collect();
    let inr_images = (0..m).map(|j| Element::from_atoms((0..n).map(|i| pair_atom[i * m + j]))).collect();
    let inl = BoolMorphism::new(left.clone(), algebra.clone(), inl_images)?;
    let inr = BoolMorphism::new(right.clone(), algebra.clone(), inr_images)?;
    Ok(Coproduct { left: left.clone(), right: right.clone(), algebra, pair_atom, inl, inr })
}

impl Coproduct {
    pub fn left(&self) -> &BoolAlg {
        &self.left
    }

    pub fn right(&self) -> &BoolAlg {
        &self.right
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn inl(&self) -> &BoolMorphism {
        &self.inl
    }

    pub fn inr(&self) -> &BoolMorphism {
        &self.inr
    }

    /// Atom index of the pair `(i, j)` in the coproduct algebra.
    pub fn pair_atom(&self, i: usize, j: usize) -> usize {
        self.pair_atom[i * self.right.n_atoms() + j]
    }

    /// Inverse of [`Coproduct::pair_atom`].
    pub fn split_atom(&self, k: usize) -> (usize, usize) {
        let m = self.right.n_atoms();
        let pos = self.pair_atom.iter().position(|&a| a == k).expect("atom of the coproduct");
        (pos / m, pos % m)
    }

    /// The rectangle `E ⊗ F`.
    pub fn rectangle(&self, e: Element, f: Element) -> Element {
        self.inl.apply(e).meet(self.inr.apply(f))
    }

    /// The unique morphism `m` with `m ∘ inl = φ` and `m ∘ inr = ψ`, given by
    /// `m(a ⊗ b) = φ(a) ∧ ψ(b)`.
    pub fn mediate(&self, phi: &BoolMorphism, psi: &BoolMorphism) -> Result<BoolMorphism> {
        if phi.source != self.left || psi.source != self.right || phi.target != psi.target {
            return Err(Error::AlgebraMismatch);
        }
        if !phi.is_unital() || !psi.is_unital() {
            return Err(Error::InvalidModel("coproduct mediation needs unital morphisms".into()));
        }
        let mut images = vec![Element::BOTTOM; self.algebra.n_atoms()];
        for i in 0..self.left.n_atoms() {
            for j in 0..self.right.n_atoms() {
                images[self.pair_atom(i, j)] = phi.images[i].meet(psi.images[j]);
            }
        }
        BoolMorphism::new(self.algebra.clone(), phi.target.clone(), images)
    }
}

/// A principal ideal `ideal(E) = {G : G ⊆ E}`, a Boolean algebra with unit
/// `E` whose atoms are the atoms below `E` (same identifiers).
#[derive(Debug, Clone)]
pub struct PrincipalIdeal {
    unit: Element,
    algebra: BoolAlg,
    /// `ideal(E) -> Ω`; a ring morphism that is not unital unless `E = ⊤`.
    inclusion: BoolMorphism,
    /// `Ω -> ideal(E)`, `G ↦ G ∩ E`.
    projection: BoolMorphism,
}

pub fn principal_ideal(algebra: &BoolAlg, e: Element) -> Result<PrincipalIdeal> {
    if e.is_bottom() {
        return Err(Error::EmptyElement);
    }
    if !algebra.contains(e) {
        return Err(Error::AlgebraMismatch);
    }
    let below: Vec<usize> = e.atoms().collect();
    let ideal = BoolAlg::new(below.iter().map(|&i| algebra.atoms()[i].clone()))?;
    let inclusion = BoolMorphism::new(ideal.clone(), algebra.clone(), below.iter().map(|&i| Element::atom(i)).collect())?;
    let projection_images = (0..algebra.n_atoms())
        .map(|i| match below.iter().position(|&b| b == i) {
            Some(k) => Element::atom(k),
            None => Element::BOTTOM,
        })
        .collect();
    let projection = BoolMorphism::new(algebra.clone(), ideal.clone(), projection_images)?;
    Ok(PrincipalIdeal { unit: e, algebra: ideal, inclusion, projection })
}

impl PrincipalIdeal {
    pub fn unit(&self) -> Element {
        self.unit
    }

    pub fn algebra(&self) -> &BoolAlg {
        &self.algebra
    }

    pub fn inclusion(&self) -> &BoolMorphism {
        &self.inclusion
    }

    pub fn projection(&self) -> &BoolMorphism {
        &self.projection
    }

    /// `p_{F,E}: ideal(F) -> ideal(E)` for `E = self.unit ⊆ larger.unit`.
    pub fn projection_from(&self, larger: &PrincipalIdeal) -> Result<BoolMorphism> {
        if !self.unit.is_below(larger.unit) {
            return Err(Error::InvalidModel("projection needs E ⊆ F".into()));
        }
        self.projection.compose(&larger.inclusion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> BoolAlg {
        BoolAlg::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn atoms_sorted_and_validated() {
        let a = BoolAlg::new(["c", "a", "b"]).unwrap();
        assert_eq!(a.atoms(), ["a", "b", "c"]);
        assert!(BoolAlg::new(Vec::<String>::new()).is_err());
        assert!(BoolAlg::new(["a", "a"]).is_err());
        assert_eq!(BoolAlg::numbered(11).unwrap().atoms()[2], "02");
    }

    #[test]
    fn generated_algebras() {
        let g = build_algebra(&["1", "2", "3"], &[vec!["1", "2"], vec!["2", "3"]]).unwrap();
        assert_eq!(g.algebra.atoms(), ["1", "2", "3"]);
        let g = build_algebra(&["1", "2"], &[]).unwrap();
        assert_eq!(g.algebra.atoms(), ["1+2"]);
        let g = build_algebra(&["1", "2"], &[vec!["1"]]).unwrap();
        assert_eq!(g.algebra.n_atoms(), 2);
        assert!(build_algebra::<&str>(&[], &[]).is_err());
        let g = build_algebra(&["1", "2", "3"], &[vec!["1", "2"]]).unwrap();
        assert!(g.element_for(&["1"]).is_err());
        assert_eq!(g.element_for(&["1", "2"]).unwrap().count(), 1);
    }

    #[test]
    fn partition_counts() {
        let a = abc();
        assert_eq!(partitions_of(&a, a.top(), 3).unwrap().count(), 5);
        assert_eq!(partitions_of(&a, a.top(), 2).unwrap().count(), 4);
        assert_eq!(partitions_of(&a, a.top(), 1).unwrap().count(), 1);
        assert_eq!(partitions_of(&a, Element::atom(1), 3).unwrap().count(), 1);
        assert_eq!(partitions_of(&a, Element::BOTTOM, 3).unwrap_err(), Error::EmptyElement);
    }

    #[test]
    fn atomic_partition_is_finest() {
        let a = abc();
        let atomic = Partition::atomic(a.top()).unwrap();
        for p in partitions_of(&a, a.top(), 3).unwrap() {
            assert!(atomic.refines(&p));
            assert!(p.refines(&p));
        }
    }

    #[test]
    fn binary_partitions_listed_once() {
        let e = Element::from_atoms([0, 1, 2]);
        let parts: Vec<_> = binary_partitions(e).collect();
        assert_eq!(parts.len(), 3);
        for (f, g) in parts {
            assert!(f.is_disjoint(g) && !f.is_bottom() && !g.is_bottom() && f.join(g) == e);
        }
        assert_eq!(binary_partitions(Element::atom(0)).count(), 0);
    }

    #[test]
    fn stone_space_small() {
        let a = abc();
        let s = stone_space(&a);
        assert_eq!(s.points().len(), 3);
        assert_eq!(s.eta(a.top()), s.clopens().top());
        assert!(s.eta(a.bottom()).is_bottom());
        assert!(s.round_trip_holds());
        let one = BoolAlg::new(["x"]).unwrap();
        assert_eq!(stone_space(&one).points().len(), 1);
    }

    #[test]
    fn coproduct_basics() {
        let l = BoolAlg::new(["a", "b"]).unwrap();
        let r = abc();
        let c = coproduct(&l, &r).unwrap();
        assert_eq!(c.algebra().n_atoms(), 6);
        assert_eq!(c.inl().apply(l.top()), c.algebra().top());
        assert!(c.inl().is_unital() && c.inr().is_unital());
        assert_eq!(c.rectangle(Element::atom(0), Element::atom(2)), Element::atom(c.pair_atom(0, 2)));
        assert_eq!(c.split_atom(c.pair_atom(1, 2)), (1, 2));
    }

    #[test]
    fn ideal_projection_is_intersection() {
        let a = BoolAlg::numbered(4).unwrap();
        let e = Element::from_atoms([1, 3]);
        let ideal = principal_ideal(&a, e).unwrap();
        assert_eq!(ideal.algebra().n_atoms(), 2);
        assert!(!ideal.inclusion().is_unital());
        assert!(ideal.projection().is_unital());
        for g in a.elements() {
            let img = ideal.inclusion().apply(ideal.projection().apply(g));
            assert_eq!(img, g.meet(e));
        }
        let whole = principal_ideal(&a, a.top()).unwrap();
        assert_eq!(whole.algebra(), &a);
        assert_eq!(whole.projection(), &BoolMorphism::identity(&a));
        let p = ideal.projection_from(&whole).unwrap();
        assert_eq!(&p, ideal.projection());
        assert_eq!(principal_ideal(&a, Element::BOTTOM).unwrap_err(), Error::EmptyElement);
    }

    #[test]
    fn morphism_validation() {
        let a = abc();
        let two = BoolAlg::new(["x", "y"]).unwrap();
        assert!(BoolMorphism::new(two.clone(), a.clone(), vec![Element::atom(0), Element::atom(0)]).is_err());
        let m = BoolMorphism::new(two.clone(), a.clone(), vec![Element::atom(0), Element::from_atoms([1, 2])]).unwrap();
        assert!(m.is_unital() && m.preserves_operations());
        assert_eq!(BoolMorphism::enumerate_unital(&a, &two).len(), 9);
    }
}
