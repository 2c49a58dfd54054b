//! Model files: JSON documents describing an algebra and the measures,
//! bundles, cosheaves and sheaves built on it.
//!
//! Validation walks the parsed [`Value`] while tracking the path, and
//! [`locate`] turns the path of the first problem into a line and column.

use std::fmt;
use std::path::Path as FsPath;

use catmeas_core::boolalg::{build_algebra, coproduct, BoolAlg, Coproduct, Element};
use catmeas_core::bundles::{Base, Bundle, FunctorMatrix};
use catmeas_core::finban::{FinBanSpace, FinCategory, FinFunctor, Flavor, LinMap};
use catmeas_core::linalg::Matrix;
use catmeas_core::measures::{MeasureAlgebra, VectorMeasure};
use catmeas_core::rational::{parse_rational, Rational};
use catmeas_core::shcosh::{atomic_cosheaf, characteristic_sheaf, l1_cosheaf, sheaf_from_stalks, PreCosheaf, PreSheaf};
use catmeas_core::simple::{SimpleElement, VectorSimple};
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::expr::{is_identifier, parse_element};
use crate::locate::{locate, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ErrorCode {
    Io,
    Syntax,
    Schema,
    UnresolvedReference,
    NonPositiveWeight,
    InvalidValue,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Io => "E001",
            ErrorCode::Syntax => "E002",
            ErrorCode::Schema => "E003",
            ErrorCode::UnresolvedReference => "E004",
            ErrorCode::NonPositiveWeight => "E005",
            ErrorCode::InvalidValue => "E006",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::Io => "io",
            ErrorCode::Syntax => "syntax",
            ErrorCode::Schema => "schema",
            ErrorCode::UnresolvedReference => "unresolved-reference",
            ErrorCode::NonPositiveWeight => "non-positive-weight",
            ErrorCode::InvalidValue => "invalid-value",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelError {
    pub code: ErrorCode,
    pub message: String,
    /// Dotted path to the offending value, `$` for the document.
    pub path: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "error[{}] {}: {} at {} (line {}, column {})",
            self.code.as_str(),
            self.code.name(),
            self.message,
            self.path,
            self.line,
            self.column
        )
    }
}

impl std::error::Error for ModelError {}

/// An error not yet placed in the text.
#[derive(Debug, Clone)]
struct Raw {
    code: ErrorCode,
    message: String,
    path: Path,
}

type R<T> = Result<T, Raw>;
/// Fiber spaces indexed by element bits, plus maps on pairs.
type Diagram = (Vec<FinBanSpace>, Vec<(Element, Element, Matrix)>);

fn raw(code: ErrorCode, path: &Path, message: impl Into<String>) -> Raw {
    Raw { code, message: message.into(), path: path.clone() }
}

#[derive(Debug, Clone)]
pub struct NamedMeasure {
    pub name: String,
    pub measure: VectorMeasure,
    /// Given as plain rationals rather than vectors.
    pub scalar: bool,
}

impl NamedMeasure {
    /// The measure as a measure algebra, when it is scalar with nonnegative
    /// masses.
    pub fn as_measure_algebra(&self) -> Option<MeasureAlgebra> {
        if !self.scalar {
            return None;
        }
        MeasureAlgebra::from_measure(self.measure.clone()).ok()
    }

    /// Scalar with every atom strictly positive.
    pub fn is_positive(&self) -> bool {
        self.scalar && self.measure.atom_values().iter().all(|v| v[0].is_positive())
    }
}

#[derive(Debug, Clone)]
pub struct ProductModel {
    pub left: MeasureAlgebra,
    pub right: MeasureAlgebra,
    pub coproduct: Coproduct,
    pub function: SimpleElement,
}

#[derive(Debug, Clone)]
pub struct KanModel {
    pub functor: FinFunctor,
    pub target: FinCategory,
    pub along: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub algebra: BoolAlg,
    pub spaces: Vec<(String, FinBanSpace)>,
    pub measures: Vec<NamedMeasure>,
    pub functions: Vec<(String, SimpleElement)>,
    pub vector_functions: Vec<(String, VectorSimple)>,
    pub product: Option<ProductModel>,
    pub bases: Vec<Base>,
    pub bundles: Vec<Bundle>,
    pub functor_matrices: Vec<FunctorMatrix>,
    pub cosheaves: Vec<(String, PreCosheaf)>,
    pub sheaves: Vec<(String, PreSheaf)>,
    pub kan: Option<KanModel>,
}

impl Model {
    pub fn measure(&self, name: &str) -> Option<&NamedMeasure> {
        self.measures.iter().find(|m| m.name == name)
    }
}

pub fn parse_model(path: &FsPath) -> Result<Model, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError {
        code: ErrorCode::Io,
        message: format!("cannot read {}: {e}", path.display()),
        path: "$".into(),
        line: 0,
        column: 0,
    })?;
    parse_model_str(&text)
}

pub fn parse_model_str(text: &str) -> Result<Model, ModelError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ModelError {
        code: ErrorCode::Syntax,
        message: strip_position(&e.to_string()),
        path: "$".into(),
        line: e.line(),
        column: e.column(),
    })?;
    Builder::default().model(&value).map_err(|r| {
        let (line, column) = locate(text, &r.path);
        ModelError { code: r.code, message: r.message, path: r.path.to_string(), line, column }
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

// ---- generic value access ----

fn object<'a>(v: &'a Value, path: &Path, allowed: &[&str]) -> R<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| raw(ErrorCode::Schema, path, "expected an object"))?;
    if !allowed.is_empty() {
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(raw(ErrorCode::Schema, &path.key(k), format!("unknown field `{k}` (expected one of {})", allowed.join(", "))));
        }
    }
    Ok(map)
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, path: &Path) -> R<&'a Value> {
    map.get(key).ok_or_else(|| raw(ErrorCode::Schema, path, format!("missing field `{key}`")))
}

fn string<'a>(v: &'a Value, path: &Path) -> R<&'a str> {
    v.as_str().ok_or_else(|| raw(ErrorCode::Schema, path, "expected a string"))
}

fn array<'a>(v: &'a Value, path: &Path) -> R<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| raw(ErrorCode::Schema, path, "expected an array"))
}

fn rational(v: &Value, path: &Path) -> R<Rational> {
    let s = v.as_str().ok_or_else(|| raw(ErrorCode::Schema, path, "rationals are written as strings like \"1/3\""))?;
    parse_rational(s).map_err(|e| raw(ErrorCode::InvalidValue, path, e.to_string()))
}

fn rationals(v: &Value, path: &Path) -> R<Vec<Rational>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| rational(x, &path.index(i))).collect()
}

fn weight(v: &Value, path: &Path) -> R<Rational> {
    let w = rational(v, path)?;
    if !w.is_positive() {
        return Err(raw(ErrorCode::NonPositiveWeight, path, format!("weight {w} is not positive")));
    }
    Ok(w)
}

fn lib(path: &Path) -> impl Fn(catmeas_core::Error) -> Raw + '_ {
    move |e| raw(ErrorCode::InvalidValue, path, e.to_string())
}

fn matrix(v: &Value, path: &Path, rows: usize, cols: usize) -> R<Matrix> {
    let list = array(v, path)?;
    if list.len() != rows {
        return Err(raw(ErrorCode::InvalidValue, path, format!("expected {rows} rows, found {}", list.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in list.iter().enumerate() {
        let p = path.index(i);
        let r = rationals(row, &p)?;
        if r.len() != cols {
            return Err(raw(ErrorCode::InvalidValue, &p, format!("expected {cols} entries, found {}", r.len())));
        }
        out.push(r);
    }
    Matrix::from_rows(cols, out).map_err(lib(path))
}

fn names(v: &Value, path: &Path) -> R<Vec<String>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| string(x, &path.index(i)).map(str::to_string)).collect()
}

#[derive(Default)]
struct Builder {
    algebra: Option<BoolAlg>,
    spaces: Vec<(String, FinBanSpace)>,
    measures: Vec<NamedMeasure>,
    bases: Vec<Base>,
}

const TOP_FIELDS: &[&str] = &[
    "description",
    "algebra",
    "spaces",
    "measures",
    "functions",
    "vector_functions",
    "product",
    "bases",
    "bundles",
    "functor_matrices",
    "cosheaves",
    "sheaves",
    "kan",
];

impl Builder {
    fn alg(&self) -> &BoolAlg {
        self.algebra.as_ref().expect("algebra is parsed first")
    }

    fn model(mut self, v: &Value) -> R<Model> {
        let root = Path::default();
        let top = object(v, &root, TOP_FIELDS)?;
        if let Some(d) = top.get("description") {
            string(d, &root.key("description"))?;
        }
        self.algebra = Some(self.algebra_of(field(top, "algebra", &root)?, &root.key("algebra"))?);
        let section = |key: &str| top.get(key).map(|v| (v, root.key(key)));

        if let Some((v, p)) = section("spaces") {
            for (name, s) in object(v, &p, &[])? {
                let space = self.space(s, &p.key(name))?;
                self.spaces.push((name.clone(), space));
            }
        }
        if let Some((v, p)) = section("measures") {
            for (name, m) in object(v, &p, &[])? {
                let measure = self.measure(name, m, &p.key(name))?;
                self.measures.push(measure);
            }
        }
        let mut functions = Vec::new();
        if let Some((v, p)) = section("functions") {
            for (name, f) in object(v, &p, &[])? {
                let values = self.atom_scalars(f, &p.key(name))?;
                functions.push((name.clone(), SimpleElement::from_atom_values(self.alg(), values).map_err(lib(&p))?));
            }
        }
        let mut vector_functions = Vec::new();
        if let Some((v, p)) = section("vector_functions") {
            for (name, g) in object(v, &p, &[])? {
                vector_functions.push((name.clone(), self.vector_function(g, &p.key(name))?));
            }
        }
        let product = section("product").map(|(v, p)| self.product(v, &p)).transpose()?;
        if let Some((v, p)) = section("bases") {
            for (name, pts) in object(v, &p, &[])? {
                let q = p.key(name);
                let base = Base::new(name, names(pts, &q)?).map_err(lib(&q))?;
                self.bases.push(base);
            }
        }
        let mut bundles = Vec::new();
        if let Some((v, p)) = section("bundles") {
            for (name, b) in object(v, &p, &[])? {
                bundles.push(self.bundle(name, b, &p.key(name))?);
            }
        }
        let mut functor_matrices = Vec::new();
        if let Some((v, p)) = section("functor_matrices") {
            for (name, t) in object(v, &p, &[])? {
                functor_matrices.push(self.functor_matrix(name, t, &p.key(name))?);
            }
        }
        let mut cosheaves = Vec::new();
        if let Some((v, p)) = section("cosheaves") {
            for (name, c) in object(v, &p, &[])? {
                cosheaves.push((name.clone(), self.cosheaf(c, &p.key(name))?));
            }
        }
        let mut sheaves = Vec::new();
        if let Some((v, p)) = section("sheaves") {
            for (name, s) in object(v, &p, &[])? {
                sheaves.push((name.clone(), self.sheaf(s, &p.key(name))?));
            }
        }
        let kan = section("kan").map(|(v, p)| self.kan(v, &p)).transpose()?;
        Ok(Model {
            algebra: self.algebra.clone().expect("parsed above"),
            spaces: self.spaces,
            measures: self.measures,
            functions,
            vector_functions,
            product,
            bases: self.bases,
            bundles,
            functor_matrices,
            cosheaves,
            sheaves,
            kan,
        })
    }

    fn algebra_of(&self, v: &Value, path: &Path) -> R<BoolAlg> {
        let map = object(v, path, &["atoms", "ground", "generators"])?;
        let alg = match (map.get("atoms"), map.get("ground")) {
            (Some(atoms), None) => {
                if map.contains_key("generators") {
                    return Err(raw(ErrorCode::Schema, &path.key("generators"), "generators need a ground set"));
                }
                BoolAlg::new(names(atoms, &path.key("atoms"))?).map_err(lib(path))?
            }
            (None, Some(ground)) => {
                let ground = names(ground, &path.key("ground"))?;
                let gp = path.key("generators");
                let gens = match map.get("generators") {
                    Some(g) => array(g, &gp)?.iter().enumerate().map(|(i, x)| names(x, &gp.index(i))).collect::<R<Vec<_>>>()?,
                    None => Vec::new(),
                };
                for (i, g) in gens.iter().enumerate() {
                    if let Some(p) = g.iter().find(|p| !ground.contains(p)) {
                        return Err(raw(ErrorCode::UnresolvedReference, &gp.index(i), format!("`{p}` is not a ground point")));
                    }
                }
                build_algebra(&ground, &gens).map_err(lib(path))?.algebra
            }
            _ => return Err(raw(ErrorCode::Schema, path, "give exactly one of `atoms` or `ground`")),
        };
        if let Some(bad) = alg.atoms().iter().find(|a| !is_identifier(a)) {
            return Err(raw(ErrorCode::InvalidValue, path, format!("atom name `{bad}` cannot be used in element expressions")));
        }
        Ok(alg)
    }

    fn element(&self, v: &Value, path: &Path) -> R<Element> {
        let s = string(v, path)?;
        parse_element(self.alg(), s).map_err(|e| {
            let code = if e.message.starts_with("unknown atom") { ErrorCode::UnresolvedReference } else { ErrorCode::InvalidValue };
            raw(code, path, format!("in `{s}`: {e}"))
        })
    }

    fn atom(&self, algebra: &BoolAlg, name: &str, path: &Path) -> R<usize> {
        algebra.atom_index(name).ok_or_else(|| raw(ErrorCode::UnresolvedReference, path, format!("unknown atom `{name}`")))
    }

    /// `"l1:3"`, `"linf:2"`, `"zero"`, a name from `spaces`, or
    /// `{"flavor": "sum" | "sup", "weights": [...]}` / `{"flavor", "dim"}`.
    fn space(&self, v: &Value, path: &Path) -> R<FinBanSpace> {
        if let Some(s) = v.as_str() {
            let dim = |rest: &str| {
                rest.parse::<usize>().map_err(|_| raw(ErrorCode::InvalidValue, path, format!("bad dimension in `{s}`")))
            };
            return if let Some(rest) = s.strip_prefix("l1:") {
                Ok(FinBanSpace::l1(dim(rest)?))
            } else if let Some(rest) = s.strip_prefix("linf:") {
                Ok(FinBanSpace::linf(dim(rest)?))
            } else if s == "zero" {
                Ok(FinBanSpace::zero())
            } else {
                self.spaces
                    .iter()
                    .find(|(n, _)| n == s)
                    .map(|(_, sp)| sp.clone())
                    .ok_or_else(|| raw(ErrorCode::UnresolvedReference, path, format!("no space named `{s}`")))
            };
        }
        let map = object(v, path, &["flavor", "weights", "dim"])?;
        let fp = path.key("flavor");
        let flavor = match string(field(map, "flavor", path)?, &fp)? {
            "sum" => Flavor::Sum,
            "sup" => Flavor::Sup,
            other => return Err(raw(ErrorCode::InvalidValue, &fp, format!("flavor `{other}` is not `sum` or `sup`"))),
        };
        let weights = match (map.get("weights"), map.get("dim")) {
            (Some(w), None) => {
                let wp = path.key("weights");
                array(w, &wp)?.iter().enumerate().map(|(i, x)| weight(x, &wp.index(i))).collect::<R<Vec<_>>>()?
            }
            (None, Some(d)) => {
                let n = d.as_u64().ok_or_else(|| raw(ErrorCode::Schema, &path.key("dim"), "expected a nonnegative integer"))?;
                if n > 4096 {
                    return Err(raw(ErrorCode::InvalidValue, &path.key("dim"), "dimension too large"));
                }
                vec![Rational::from_integer(1.into()); n as usize]
            }
            _ => return Err(raw(ErrorCode::Schema, path, "give exactly one of `weights` or `dim`")),
        };
        let labels = (0..weights.len()).map(|i| format!("e{i}")).collect();
        FinBanSpace::new(labels, weights, flavor).map_err(lib(path))
    }

    /// `{atom: "p/q"}`; atoms left out are zero.
    fn atom_scalars(&self, v: &Value, path: &Path) -> R<Vec<Rational>> {
        self.atom_scalars_on(self.alg(), v, path)
    }

    fn atom_scalars_on(&self, alg: &BoolAlg, v: &Value, path: &Path) -> R<Vec<Rational>> {
        let mut out = vec![Rational::zero(); alg.n_atoms()];
        for (a, x) in object(v, path, &[])? {
            let p = path.key(a);
            out[self.atom(alg, a, &p)?] = rational(x, &p)?;
        }
        Ok(out)
    }

    fn atom_vectors(&self, v: &Value, path: &Path, dim: usize) -> R<Vec<Vec<Rational>>> {
        let mut out = vec![vec![Rational::zero(); dim]; self.alg().n_atoms()];
        for (a, x) in object(v, path, &[])? {
            let p = path.key(a);
            let i = self.atom(self.alg(), a, &p)?;
            let vals = rationals(x, &p)?;
            if vals.len() != dim {
                return Err(raw(ErrorCode::InvalidValue, &p, format!("expected {dim} coordinates, found {}", vals.len())));
            }
            out[i] = vals;
        }
        Ok(out)
    }

    fn measure(&self, name: &str, v: &Value, path: &Path) -> R<NamedMeasure> {
        let map = object(v, path, &["target", "values"])?;
        let vp = path.key("values");
        let values = field(map, "values", path)?;
        match map.get("target") {
            None => {
                let vals = self.atom_scalars(values, &vp)?;
                let measure = VectorMeasure::scalar(self.alg().clone(), vals).map_err(lib(path))?;
                Ok(NamedMeasure { name: name.to_string(), measure, scalar: true })
            }
            Some(t) => {
                let target = self.space(t, &path.key("target"))?;
                let vals = self.atom_vectors(values, &vp, target.dim())?;
                let measure = VectorMeasure::new(self.alg().clone(), target, vals).map_err(lib(path))?;
                Ok(NamedMeasure { name: name.to_string(), measure, scalar: false })
            }
        }
    }

    fn vector_function(&self, v: &Value, path: &Path) -> R<VectorSimple> {
        let map = object(v, path, &["space", "values"])?;
        let space = self.space(field(map, "space", path)?, &path.key("space"))?;
        let vals = self.atom_vectors(field(map, "values", path)?, &path.key("values"), space.dim())?;
        VectorSimple::new(self.alg(), &space, vals).map_err(lib(path))
    }

    fn masses(&self, v: &Value, path: &Path) -> R<MeasureAlgebra> {
        let map = object(v, path, &[])?;
        let alg = BoolAlg::new(map.keys().cloned()).map_err(lib(path))?;
        let vals = self.atom_scalars_on(&alg, v, path)?;
        if let Some((a, _)) = map.iter().zip(&vals).find(|(_, x)| x.is_negative()) {
            return Err(raw(ErrorCode::InvalidValue, &path.key(a.0), "masses must be nonnegative"));
        }
        MeasureAlgebra::new(alg, vals).map_err(lib(path))
    }

    /// `{"left": {atom: mass}, "right": {...}, "function": {l: {r: "p/q"}}}`.
    fn product(&self, v: &Value, path: &Path) -> R<ProductModel> {
        let map = object(v, path, &["left", "right", "function"])?;
        let left = self.masses(field(map, "left", path)?, &path.key("left"))?;
        let right = self.masses(field(map, "right", path)?, &path.key("right"))?;
        let c = coproduct(left.algebra(), right.algebra()).map_err(lib(path))?;
        let fp = path.key("function");
        let mut values = vec![Rational::zero(); c.algebra().n_atoms()];
        for (l, row) in object(field(map, "function", path)?, &fp, &[])? {
            let lp = fp.key(l);
            let i = self.atom(left.algebra(), l, &lp)?;
            for (r, x) in object(row, &lp, &[])? {
                let rp = lp.key(r);
                let j = self.atom(right.algebra(), r, &rp)?;
                values[c.pair_atom(i, j)] = rational(x, &rp)?;
            }
        }
        let function = SimpleElement::from_atom_values(c.algebra(), values).map_err(lib(path))?;
        Ok(ProductModel { left, right, coproduct: c, function })
    }

    fn base(&self, v: &Value, path: &Path) -> R<&Base> {
        let name = string(v, path)?;
        self.bases
            .iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| raw(ErrorCode::UnresolvedReference, path, format!("no base named `{name}`")))
    }

    /// Spaces keyed by point; points left out get the zero space.
    fn fibers_over(&self, base: &Base, v: &Value, path: &Path) -> R<Vec<FinBanSpace>> {
        let mut out = vec![FinBanSpace::zero(); base.len()];
        for (point, s) in object(v, path, &[])? {
            let p = path.key(point);
            let i = base.index(point).map_err(|_| raw(ErrorCode::UnresolvedReference, &p, format!("`{point}` is not a point of {}", base.name())))?;
            out[i] = self.space(s, &p)?;
        }
        Ok(out)
    }

    fn bundle(&self, name: &str, v: &Value, path: &Path) -> R<Bundle> {
        let map = object(v, path, &["base", "fibers"])?;
        let base = self.base(field(map, "base", path)?, &path.key("base"))?;
        let fibers = self.fibers_over(base, field(map, "fibers", path)?, &path.key("fibers"))?;
        Bundle::new(name, base, fibers).map_err(lib(path))
    }

    /// `entries` is keyed by target point, then source point.
    fn functor_matrix(&self, name: &str, v: &Value, path: &Path) -> R<FunctorMatrix> {
        let map = object(v, path, &["source", "target", "entries"])?;
        let src = self.base(field(map, "source", path)?, &path.key("source"))?;
        let tgt = self.base(field(map, "target", path)?, &path.key("target"))?;
        let ep = path.key("entries");
        let mut entries = vec![vec![FinBanSpace::zero(); src.len()]; tgt.len()];
        for (y, row) in object(field(map, "entries", path)?, &ep, &[])? {
            let yp = ep.key(y);
            let j = tgt.index(y).map_err(|_| raw(ErrorCode::UnresolvedReference, &yp, format!("`{y}` is not a point of {}", tgt.name())))?;
            entries[j] = self.fibers_over(src, row, &yp)?;
        }
        FunctorMatrix::new(name, src, tgt, entries).map_err(lib(path))
    }

    /// Fibers keyed by element expressions plus structure maps on pairs.
    fn diagram(&self, map: &Map<String, Value>, path: &Path, maps_key: &str) -> R<Diagram> {
        let alg = self.alg();
        let mut spaces = vec![FinBanSpace::zero(); 1 << alg.n_atoms()];
        let fp = path.key("fibers");
        for (expr, s) in object(field(map, "fibers", path)?, &fp, &[])? {
            let p = fp.key(expr);
            let e = self.element(&Value::String(expr.clone()), &p)?;
            spaces[e.bits() as usize] = self.space(s, &p)?;
        }
        let mp = path.key(maps_key);
        let mut maps = Vec::new();
        if let Some(list) = map.get(maps_key) {
            for (i, m) in array(list, &mp)?.iter().enumerate() {
                let p = mp.index(i);
                let entry = object(m, &p, &["from", "to", "matrix"])?;
                let from = self.element(field(entry, "from", &p)?, &p.key("from"))?;
                let to = self.element(field(entry, "to", &p)?, &p.key("to"))?;
                // extensions run F -> E; restrictions run E -> F
                let (small, big) = if maps_key == "extensions" { (from, to) } else { (to, from) };
                if !small.is_below(big) {
                    return Err(raw(ErrorCode::InvalidValue, &p, "structure maps need the smaller element inside the larger"));
                }
                let (src, tgt) = (&spaces[from.bits() as usize], &spaces[to.bits() as usize]);
                let m = matrix(field(entry, "matrix", &p)?, &p.key("matrix"), tgt.dim(), src.dim())?;
                maps.push((small, big, m));
            }
        }
        Ok((spaces, maps))
    }

    fn cosheaf(&self, v: &Value, path: &Path) -> R<PreCosheaf> {
        let alg = self.alg();
        if let Some(s) = v.as_str() {
            let Some(name) = s.strip_prefix("l1-of:") else {
                return Err(raw(ErrorCode::InvalidValue, path, format!("`{s}` is not `l1-of:<measure>`")));
            };
            let m = self
                .measures
                .iter()
                .find(|m| m.name == name)
                .ok_or_else(|| raw(ErrorCode::UnresolvedReference, path, format!("no measure named `{name}`")))?;
            if !m.is_positive() {
                return Err(raw(ErrorCode::InvalidValue, path, format!("`{name}` is not a scalar measure with positive atoms")));
            }
            let mu = m.as_measure_algebra().expect("positive scalar measure");
            return l1_cosheaf(&mu).map_err(lib(path));
        }
        let map = object(v, path, &["atoms", "fibers", "extensions"])?;
        if let Some(atoms) = map.get("atoms") {
            if map.len() > 1 {
                return Err(raw(ErrorCode::Schema, path, "`atoms` cannot be combined with `fibers`"));
            }
            let ap = path.key("atoms");
            let mut fibers = vec![FinBanSpace::zero(); alg.n_atoms()];
            for (a, s) in object(atoms, &ap, &[])? {
                let p = ap.key(a);
                fibers[self.atom(alg, a, &p)?] = self.space(s, &p)?;
            }
            return atomic_cosheaf(alg, &fibers).map_err(lib(path));
        }
        let (spaces, maps) = self.diagram(map, path, "extensions")?;
        PreCosheaf::new(alg, spaces, maps).map_err(lib(path))
    }

    fn sheaf(&self, v: &Value, path: &Path) -> R<PreSheaf> {
        let alg = self.alg();
        if let Some(s) = v.as_str() {
            let Some(expr) = s.strip_prefix("characteristic:") else {
                return Err(raw(ErrorCode::InvalidValue, path, format!("`{s}` is not `characteristic:<element>`")));
            };
            let e = self.element(&Value::String(expr.to_string()), path)?;
            return characteristic_sheaf(alg, e).map_err(lib(path));
        }
        let map = object(v, path, &["stalks", "fibers", "restrictions"])?;
        if let Some(stalks) = map.get("stalks") {
            if map.len() > 1 {
                return Err(raw(ErrorCode::Schema, path, "`stalks` cannot be combined with `fibers`"));
            }
            let sp = path.key("stalks");
            let mut fibers = vec![FinBanSpace::zero(); alg.n_atoms()];
            for (a, s) in object(stalks, &sp, &[])? {
                let p = sp.key(a);
                fibers[self.atom(alg, a, &p)?] = self.space(s, &p)?;
            }
            return sheaf_from_stalks(alg, &fibers).map_err(lib(path));
        }
        let (spaces, maps) = self.diagram(map, path, "restrictions")?;
        PreSheaf::new(alg, spaces, maps).map_err(lib(path))
    }

    fn category(&self, v: &Value, path: &Path) -> R<FinCategory> {
        let map = object(v, path, &["objects", "arrows"])?;
        let objects = names(field(map, "objects", path)?, &path.key("objects"))?;
        let ap = path.key("arrows");
        let mut arrows = Vec::new();
        if let Some(list) = map.get("arrows") {
            for (i, a) in array(list, &ap)?.iter().enumerate() {
                let p = ap.index(i);
                let pair = names(a, &p)?;
                if pair.len() != 2 {
                    return Err(raw(ErrorCode::Schema, &p, "an arrow is a pair [from, to]"));
                }
                let idx = |n: &str| {
                    objects.iter().position(|o| o == n).ok_or_else(|| raw(ErrorCode::UnresolvedReference, &p, format!("no object named `{n}`")))
                };
                arrows.push((idx(&pair[0])?, idx(&pair[1])?));
            }
        }
        FinCategory::new(objects, arrows).map_err(lib(path))
    }

    /// `{"source": cat, "target": cat, "along": {obj: obj}, "functor":
    /// {"spaces": {obj: space}, "maps": [{"from", "to", "matrix"}]}}` with
    /// one map per generating arrow of the source.
    fn kan(&self, v: &Value, path: &Path) -> R<KanModel> {
        let map = object(v, path, &["source", "target", "along", "functor"])?;
        let source = self.category(field(map, "source", path)?, &path.key("source"))?;
        let target = self.category(field(map, "target", path)?, &path.key("target"))?;
        let ap = path.key("along");
        let along_map = object(field(map, "along", path)?, &ap, &[])?;
        let mut along = Vec::with_capacity(source.len());
        for obj in source.objects() {
            let t = along_map.get(obj).ok_or_else(|| raw(ErrorCode::Schema, &ap, format!("no image for `{obj}`")))?;
            let p = ap.key(obj);
            let name = string(t, &p)?;
            along.push(target.index(name).ok_or_else(|| raw(ErrorCode::UnresolvedReference, &p, format!("no target object `{name}`")))?);
        }
        if let Some(k) = along_map.keys().find(|k| source.index(k).is_none()) {
            return Err(raw(ErrorCode::UnresolvedReference, &ap.key(k), format!("no source object `{k}`")));
        }
        let fp = path.key("functor");
        let f = object(field(map, "functor", path)?, &fp, &["spaces", "maps"])?;
        let sp = fp.key("spaces");
        let mut spaces = vec![FinBanSpace::zero(); source.len()];
        for (obj, s) in object(field(f, "spaces", &fp)?, &sp, &[])? {
            let p = sp.key(obj);
            let i = source.index(obj).ok_or_else(|| raw(ErrorCode::UnresolvedReference, &p, format!("no source object `{obj}`")))?;
            spaces[i] = self.space(s, &p)?;
        }
        let mp = fp.key("maps");
        let mut given: Vec<Option<LinMap>> = vec![None; source.arrows().len()];
        if let Some(list) = f.get("maps") {
            for (i, m) in array(list, &mp)?.iter().enumerate() {
                let p = mp.index(i);
                let entry = object(m, &p, &["from", "to", "matrix"])?;
                let obj = |key: &str| -> R<usize> {
                    let kp = p.key(key);
                    let n = string(field(entry, key, &p)?, &kp)?;
                    source.index(n).ok_or_else(|| raw(ErrorCode::UnresolvedReference, &kp, format!("no source object `{n}`")))
                };
                let (a, b) = (obj("from")?, obj("to")?);
                let k = source
                    .arrows()
                    .iter()
                    .position(|&x| x == (a, b))
                    .ok_or_else(|| raw(ErrorCode::UnresolvedReference, &p, "no generating arrow between these objects"))?;
                let m = matrix(field(entry, "matrix", &p)?, &p.key("matrix"), spaces[b].dim(), spaces[a].dim())?;
                given[k] = Some(LinMap::new(spaces[a].clone(), spaces[b].clone(), m).map_err(lib(&p))?);
            }
        }
        let maps = given
            .into_iter()
            .zip(source.arrows())
            .map(|(m, &(a, b))| match m {
                Some(m) => Ok(m),
                None if spaces[a].dim() * spaces[b].dim() == 0 => Ok(LinMap::zero(&spaces[a], &spaces[b])),
                None => Err(raw(ErrorCode::Schema, &mp, format!("no map for arrow {} -> {}", source.objects()[a], source.objects()[b]))),
            })
            .collect::<R<Vec<_>>>()?;
        let functor = FinFunctor::new(source, spaces, maps).map_err(lib(&fp))?;
        Ok(KanModel { functor, target, along })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use catmeas_core::rational::frac;

    #[test]
    fn minimal_model_parses() {
        let m = parse_model_str(r#"{"algebra": {"atoms": ["a"]}}"#).unwrap();
        assert_eq!(m.algebra.n_atoms(), 1);
        assert!(m.measures.is_empty());
    }

    #[test]
    fn rationals_are_exact() {
        let m = parse_model_str(r#"{"algebra": {"atoms": ["a", "b"]}, "measures": {"mu": {"values": {"a": "1/3", "b": "-2/6"}}}}"#).unwrap();
        let mu = &m.measures[0].measure;
        assert_eq!(mu.atom_value(0)[0], frac(1, 3));
        assert_eq!(mu.atom_value(1)[0], frac(-1, 3));
        assert!(!m.measures[0].is_positive());
    }

    #[test]
    fn generated_algebras_name_atoms_by_cells() {
        let m = parse_model_str(r#"{"algebra": {"ground": ["p", "q", "r"], "generators": [["p", "q"]]}}"#).unwrap();
        assert_eq!(m.algebra.atoms(), &["p+q".to_string(), "r".to_string()]);
    }

    #[test]
    fn error_codes_are_distinct() {
        let cases = [
            ("{\"algebra\": ", ErrorCode::Syntax),
            (r#"{"algebra": {"atoms": ["a"]}, "extra": 1}"#, ErrorCode::Schema),
            (r#"{"algebra": {"atoms": ["a"]}, "cosheaves": {"L": "l1-of:nu"}}"#, ErrorCode::UnresolvedReference),
            (r#"{"algebra": {"atoms": ["a"]}, "spaces": {"B": {"flavor": "sum", "weights": ["0"]}}}"#, ErrorCode::NonPositiveWeight),
            (r#"{"algebra": {"atoms": ["a"]}, "functions": {"f": {"a": "1/0"}}}"#, ErrorCode::InvalidValue),
        ];
        for (text, code) in cases {
            assert_eq!(parse_model_str(text).unwrap_err().code, code, "{text}");
        }
    }

    #[test]
    fn dangling_reference_reports_path_and_position() {
        let text = "{\n  \"algebra\": {\"atoms\": [\"a\", \"b\"]},\n  \"cosheaves\": {\n    \"L\": \"l1-of:missing\"\n  }\n}";
        let err = parse_model_str(text).unwrap_err();
        assert_eq!(err.code, ErrorCode::UnresolvedReference);
        assert_eq!(err.path, "cosheaves.L");
        assert_eq!((err.line, err.column), (4, 10));
        assert!(err.to_string().contains("E004"));
    }

    #[test]
    fn syntax_errors_carry_serde_positions() {
        let err = parse_model_str("{\n  \"algebra\": [1,,]\n}").unwrap_err();
        assert_eq!(err.code, ErrorCode::Syntax);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn cosheaf_from_fibers_and_extensions() {
        let text = r#"{
          "algebra": {"atoms": ["a", "b"]},
          "cosheaves": {"C": {
            "fibers": {"a": "l1:1", "b": "l1:1", "a | b": "l1:2"},
            "extensions": [
              {"from": "a", "to": "top", "matrix": [["1"], ["0"]]},
              {"from": "b", "to": "top", "matrix": [["0"], ["1"]]}
            ]
          }}
        }"#;
        let m = parse_model_str(text).unwrap();
        let c = &m.cosheaves[0].1;
        assert_eq!(c.space(m.algebra.top()).dim(), 2);
    }

    #[test]
    fn bad_matrix_shape_is_located() {
        let text = r#"{"algebra": {"atoms": ["a"]}, "cosheaves": {"C": {"fibers": {"a": "l1:1"}, "extensions": [{"from": "bottom", "to": "a", "matrix": [["1"]]}]}}}"#;
        let err = parse_model_str(text).unwrap_err();
        assert_eq!(err.code, ErrorCode::InvalidValue);
        assert_eq!(err.path, "cosheaves.C.extensions[0].matrix[0]");
    }
}
