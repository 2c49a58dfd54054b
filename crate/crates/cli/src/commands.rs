//! Command dispatch. Every command fills a [`Report`] with results and
//! checks; `verify-all` runs the checks of every command the model supports.

use catmeas_core::boolalg::{partitions_of, stone_space, BoolAlg, Element, Partition};
use catmeas_core::bundles::{apply_compose_witness, associator, canonical_decomposition, FunctorMatrix};
use catmeas_core::finban::{kan_extension, IsoWitness};
use catmeas_core::linalg::Matrix;
use catmeas_core::measures::{lipschitz_norm, Lipschitz};
use catmeas_core::random;
use catmeas_core::rational::Rational;
use catmeas_core::shcosh::{
    bva_cosheaf, constant_universal_map, cosheafify, integrate_simple_morphism, is_cosheaf, is_sheaf, isbell,
    isbell_adjoint, isbell_transposition, spectral_measure, total_value, Cosheaf, Verdict,
};
use catmeas_core::simple::{
    bochner, fubini, integral_map, integrate, l1_tensor_witness, vector_l1_class, vector_l1_space, SimpleElement,
    SimpleMorphism,
};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{format_element, parse_element, ExprError};
use crate::model::Model;
use crate::report::{Check, Node, Report};

pub const COMMANDS: &[&str] = &[
    "stone",
    "partitions",
    "variation",
    "semivariation",
    "lipschitz",
    "integrate",
    "bochner",
    "fubini",
    "check-sheaf",
    "check-cosheaf",
    "spectral",
    "integrate-morphism",
    "cosheafify",
    "bva",
    "kan",
    "isbell",
    "verify-all",
];

/// Random simple-morphism pairs drawn per cosheaf by `integrate-morphism`.
const RANDOM_PAIRS: usize = 16;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: u64,
    pub exhaustive: bool,
    pub element: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("`{command}` does not apply to this model: {reason}")]
    Mismatch { command: String, reason: String },
    #[error("bad --element: {0}")]
    Element(ExprError),
    #[error(transparent)]
    Library(#[from] catmeas_core::Error),
}

type Run<T = ()> = Result<T, RunError>;

struct Ctx<'a> {
    model: &'a Model,
    opts: &'a Options,
    command: &'a str,
}

impl Ctx<'_> {
    fn alg(&self) -> &BoolAlg {
        &self.model.algebra
    }

    fn mismatch(&self, reason: impl Into<String>) -> RunError {
        RunError::Mismatch { command: self.command.to_string(), reason: reason.into() }
    }

    /// `--element`, defaulting to the top element.
    fn element(&self) -> Run<Element> {
        match &self.opts.element {
            Some(s) => parse_element(self.alg(), s).map_err(RunError::Element),
            None => Ok(self.alg().top()),
        }
    }

    fn fmt(&self, e: Element) -> String {
        format_element(self.alg(), e)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed)
    }
}

pub fn run(command: &str, model: &Model, model_label: &str, opts: &Options) -> Run<Report> {
    if !COMMANDS.contains(&command) {
        return Err(RunError::UnknownCommand(command.to_string()));
    }
    let mut report = Report::new(command, model_label, opts.seed, opts.exhaustive, opts.element.as_deref());
    let ctx = Ctx { model, opts, command };
    dispatch(&ctx, command, &mut report)?;
    Ok(report)
}

fn dispatch(ctx: &Ctx, command: &str, r: &mut Report) -> Run {
    match command {
        "stone" => stone(ctx, r),
        "partitions" => partitions(ctx, r),
        "variation" => variation(ctx, r),
        "semivariation" => semivariation(ctx, r),
        "lipschitz" => lipschitz(ctx, r),
        "integrate" => integrate_cmd(ctx, r),
        "bochner" => bochner_cmd(ctx, r),
        "fubini" => fubini_cmd(ctx, r),
        "check-sheaf" => check_sheaf(ctx, r),
        "check-cosheaf" => check_cosheaf(ctx, r),
        "spectral" => spectral(ctx, r),
        "integrate-morphism" => integrate_morphism(ctx, r),
        "cosheafify" => cosheafify_cmd(ctx, r),
        "bva" => bva(ctx, r),
        "kan" => kan(ctx, r),
        "isbell" => isbell_cmd(ctx, r),
        "verify-all" => verify_all(ctx, r),
        other => Err(RunError::UnknownCommand(other.to_string())),
    }
}

fn partition_names(alg: &BoolAlg, p: &Partition) -> Vec<Vec<String>> {
    p.blocks().iter().map(|b| alg.atom_names(*b).into_iter().map(str::to_string).collect()).collect()
}

fn verdict_check(alg: &BoolAlg, name: String, v: &Verdict) -> Check {
    let mut c = Check::new(name, v.holds());
    if let Some(ce) = v.counterexample() {
        c.detail = Some(ce.reason.clone());
        c.partition = Some(partition_names(alg, &ce.partition));
    }
    c
}

fn stone(ctx: &Ctx, r: &mut Report) -> Run {
    let alg = ctx.alg();
    let s = stone_space(alg);
    // each ultrafilter is principal, generated by the one atom it contains
    let points: Vec<String> = s
        .points()
        .iter()
        .map(|u| {
            let a = (0..alg.n_atoms()).find(|&a| u.contains(Element::atom(a))).expect("ultrafilters contain an atom");
            format!("<{}>", alg.atoms()[a])
        })
        .collect();
    r.result("atoms", Node::names(alg.atoms()));
    r.result("ultrafilters", Node::names(&points));
    let e = ctx.element()?;
    let clopen = s.eta(e);
    let names: Vec<&String> = clopen.atoms().map(|i| &points[i]).collect();
    r.result(format!("eta {}", ctx.fmt(e)), Node::names(&names));
    r.check(Check::new("stone: clopens of the Stone space recover the algebra", s.round_trip_holds()));
    r.check(
        Check::new("stone: ultrafilter count equals atom count", points.len() == alg.n_atoms())
            .detail(format!("{} ultrafilters, {} atoms", points.len(), alg.n_atoms())),
    );
    r.check(Check::new(format!("stone: eta is inverted on {}", ctx.fmt(e)), s.eta_inverse(clopen) == e));
    Ok(())
}

/// Bell numbers by the triangle recurrence.
fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for x in &row {
            let v = next.last().expect("nonempty") + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

const PARTITION_ATOM_LIMIT: usize = 8;

fn partitions(ctx: &Ctx, r: &mut Report) -> Run {
    let e = ctx.element()?;
    if e.is_bottom() {
        return Err(ctx.mismatch("the bottom element has no nonempty partitions"));
    }
    if e.count() > PARTITION_ATOM_LIMIT {
        return Err(ctx.mismatch(format!("{} atoms below the element (max {PARTITION_ATOM_LIMIT})", e.count())));
    }
    let all: Vec<Partition> = partitions_of(ctx.alg(), e, usize::MAX)?.collect();
    r.result("element", Node::text(ctx.fmt(e)));
    r.result("count", Node::Int(all.len()));
    r.result(
        "partitions",
        Node::List(all.iter().map(|p| Node::List(partition_names(ctx.alg(), p).iter().map(|b| Node::names(b)).collect())).collect()),
    );
    let expected = bell(e.count());
    r.check(Check::new("partitions: count is the Bell number", all.len() == expected).detail(format!("{} found, {expected} expected", all.len())));
    Ok(())
}

fn need_measures(ctx: &Ctx) -> Run {
    if ctx.model.measures.is_empty() {
        return Err(ctx.mismatch("the model has no measures"));
    }
    Ok(())
}

fn variation(ctx: &Ctx, r: &mut Report) -> Run {
    need_measures(ctx)?;
    let e = ctx.element()?;
    r.result("element", Node::text(ctx.fmt(e)));
    let values = ctx.model.measures.iter().map(|m| (m.name.clone(), Node::Rational(m.measure.variation(e)))).collect();
    r.result("variation", Node::Map(values));
    Ok(())
}

fn semivariation(ctx: &Ctx, r: &mut Report) -> Run {
    need_measures(ctx)?;
    let e = ctx.element()?;
    r.result("element", Node::text(ctx.fmt(e)));
    let mut values = Vec::new();
    for m in &ctx.model.measures {
        let nu = &m.measure;
        let semi = nu.semivariation(e)?;
        let var = nu.variation(e);
        let at = nu.target().norm(&nu.eval(e));
        r.check(Check::new(format!("semivariation {}: norm <= semivariation <= variation", m.name), at <= semi && semi <= var));
        values.push((m.name.clone(), Node::Rational(semi)));
    }
    r.result("semivariation", Node::Map(values));
    Ok(())
}

fn lipschitz(ctx: &Ctx, r: &mut Report) -> Run {
    let mut values = Vec::new();
    for mu_named in &ctx.model.measures {
        let Some(mu) = mu_named.as_measure_algebra() else { continue };
        for nu in ctx.model.measures.iter().filter(|n| n.name != mu_named.name) {
            let node = match lipschitz_norm(&nu.measure, &mu)? {
                Lipschitz::Finite(c) => {
                    // the bound is attained, and holds on every element
                    let ok = ctx.alg().elements().all(|e| nu.measure.target().norm(&nu.measure.eval(e)) <= &c * mu.mass(e));
                    r.check(Check::new(format!("lipschitz {} wrt {}: bound holds on every element", nu.name, mu_named.name), ok));
                    Node::Rational(c)
                }
                _ => Node::text("unbounded"),
            };
            values.push((format!("{} wrt {}", nu.name, mu_named.name), node));
        }
    }
    if values.is_empty() {
        return Err(ctx.mismatch("needs a nonnegative scalar measure and a second measure"));
    }
    r.result("lipschitz", Node::Map(values));
    Ok(())
}

fn integrate_cmd(ctx: &Ctx, r: &mut Report) -> Run {
    need_measures(ctx)?;
    let alg = ctx.alg();
    let e = ctx.element()?;
    for m in &ctx.model.measures {
        let nu = &m.measure;
        let mut entries = vec![(format!("chi{}", ctx.fmt(e)), Node::Vector(integrate(&SimpleElement::chi(alg, e), nu)?))];
        for (name, f) in &ctx.model.functions {
            entries.push((name.clone(), Node::Vector(integrate(f, nu)?)));
        }
        let lift = integral_map(nu);
        let norm = lift.operator_norm()?;
        let semi = nu.semivariation(alg.top())?;
        entries.push(("operator norm".into(), Node::Rational(norm.clone())));
        r.result(m.name.clone(), Node::Map(entries));
        let mut chi_ok = true;
        for g in alg.elements() {
            chi_ok &= integrate(&SimpleElement::chi(alg, g), nu)? == nu.eval(g);
        }
        r.check(Check::new(format!("integrate {}: the integral of chi(E) is the measure of E", m.name), chi_ok));
        r.check(
            Check::new(format!("integrate {}: operator norm equals semivariation of top", m.name), norm == semi)
                .detail(format!("{norm} vs {semi}")),
        );
    }
    Ok(())
}

fn bochner_cmd(ctx: &Ctx, r: &mut Report) -> Run {
    let positive: Vec<_> = ctx.model.measures.iter().filter(|m| m.is_positive()).collect();
    if ctx.model.vector_functions.is_empty() || positive.is_empty() {
        return Err(ctx.mismatch("needs a vector function and a positive scalar measure"));
    }
    for (name, g) in &ctx.model.vector_functions {
        for m in &positive {
            let mu = m.as_measure_algebra().expect("positive scalar");
            let out = bochner(g, &mu)?;
            let w = l1_tensor_witness(&mu, g.space())?;
            let class = vector_l1_class(g, &mu)?;
            let class_norm = vector_l1_space(&mu, g.space())?.norm(&class);
            let by_atoms: Rational = g.values().iter().enumerate().map(|(a, v)| g.space().norm(v) * mu.atom_mass(a)).sum();
            let key = format!("{name} d{}", m.name);
            r.check(Check::new(format!("bochner {key}: L1(mu, B) to L1(mu) (x) B witness is isometric"), w.is_isometric()?));
            r.check(Check::new(format!("bochner {key}: norm is the integral of the pointwise norm"), out.l1_norm == by_atoms && class_norm == by_atoms));
            r.result(
                key,
                Node::Map(vec![
                    ("integral".into(), Node::Vector(out.integral)),
                    ("l1 norm".into(), Node::Rational(out.l1_norm)),
                    ("tensor witness".into(), Node::witness(&w)),
                ]),
            );
        }
    }
    Ok(())
}

fn fubini_cmd(ctx: &Ctx, r: &mut Report) -> Run {
    let p = ctx.model.product.as_ref().ok_or_else(|| ctx.mismatch("the model has no product section"))?;
    let out = fubini(&p.function, &p.coproduct, &p.left, &p.right)?;
    r.result("joint", Node::Rational(out.joint.clone()));
    r.result("left outer", Node::Rational(out.left_outer.clone()));
    r.result("right outer", Node::Rational(out.right_outer.clone()));
    r.check(Check::new("fubini: joint and iterated integrals agree", out.joint == out.left_outer && out.joint == out.right_outer));
    r.check(Check::new("fubini: product L1 witness is isometric", out.witness.is_isometric()?));
    Ok(())
}

fn check_cosheaf(ctx: &Ctx, r: &mut Report) -> Run {
    if ctx.model.cosheaves.is_empty() {
        return Err(ctx.mismatch("the model has no cosheaves"));
    }
    for (name, c) in &ctx.model.cosheaves {
        let v = is_cosheaf(c, ctx.opts.exhaustive)?;
        r.check(verdict_check(ctx.alg(), format!("cosheaf {name}: partition maps are isometric isomorphisms"), &v));
    }
    Ok(())
}

fn check_sheaf(ctx: &Ctx, r: &mut Report) -> Run {
    if ctx.model.sheaves.is_empty() {
        return Err(ctx.mismatch("the model has no sheaves"));
    }
    for (name, s) in &ctx.model.sheaves {
        let v = is_sheaf(s, ctx.opts.exhaustive)?;
        r.check(verdict_check(ctx.alg(), format!("sheaf {name}: partition maps are isometric isomorphisms"), &v));
    }
    Ok(())
}

/// The model's cosheaves that pass the check; the rest are reported as
/// failures under `label`.
fn cosheaves<'m>(ctx: &Ctx<'m>, r: &mut Report, label: &str) -> Run<Vec<(&'m str, Cosheaf)>> {
    if ctx.model.cosheaves.is_empty() {
        return Err(ctx.mismatch("the model has no cosheaves"));
    }
    let mut out = Vec::new();
    for (name, c) in &ctx.model.cosheaves {
        let v = is_cosheaf(c, ctx.opts.exhaustive)?;
        if v.holds() {
            out.push((name.as_str(), Cosheaf::new(c.clone())?));
        } else {
            r.check(verdict_check(ctx.alg(), format!("{label} {name}: input is a cosheaf"), &v));
        }
    }
    Ok(out)
}

/// `max |f|` over the atoms of `e` where the cosheaf is nonzero.
fn sup_on(c: &Cosheaf, f: &SimpleElement, e: Element) -> Rational {
    e.atoms().filter(|&a| c.space(Element::atom(a)).dim() > 0).map(|a| f.value_at(a).abs()).max().unwrap_or_else(Rational::zero)
}

fn spectral(ctx: &Ctx, r: &mut Report) -> Run {
    let alg = ctx.alg();
    for (name, c) in cosheaves(ctx, r, "spectral")? {
        let s = spectral_measure(&c)?;
        let projections = (0..alg.n_atoms()).map(|a| (alg.atoms()[a].clone(), Node::Matrix(s.projection(Element::atom(a)).clone()))).collect();
        let violation = s.law_violation();
        let mut check = Check::new(format!("spectral {name}: idempotent, multiplicative, additive and unital"), violation.is_none());
        check.detail = violation;
        r.check(check);
        for (fname, f) in &ctx.model.functions {
            let norm = s.action(f)?.operator_norm()?;
            let expected = sup_on(&c, f, alg.top());
            r.check(
                Check::new(format!("spectral {name}: action of {fname} has norm sup |{fname}| on the support"), norm == expected)
                    .detail(format!("{norm} vs {expected}")),
            );
        }
        r.result(
            name,
            Node::Map(vec![
                ("carrier dim".into(), Node::Int(s.carrier().dim())),
                ("support".into(), Node::text(ctx.fmt(s.support()))),
                ("projections".into(), Node::Map(projections)),
            ]),
        );
    }
    Ok(())
}

fn integrate_morphism(ctx: &Ctx, r: &mut Report) -> Run {
    let alg = ctx.alg();
    let e = ctx.element()?;
    if e.is_bottom() {
        return Err(ctx.mismatch("the element must be nonzero"));
    }
    let mut rng = ctx.rng();
    for (name, c) in cosheaves(ctx, r, "integrate-morphism")? {
        let id = integrate_simple_morphism(&SimpleMorphism::identity(alg, e), &c)?;
        r.check(Check::new(format!("integrate-morphism {name}: identity integrates to the identity"), id.is_identity()));
        let mut entries = Vec::new();
        for (fname, f) in &ctx.model.functions {
            let m = SimpleMorphism::new(e, e, f.restrict(e))?;
            let map = integrate_simple_morphism(&m, &c)?;
            let norm = map.operator_norm()?;
            let expected = sup_on(&c, f, e);
            r.check(
                Check::new(format!("integrate-morphism {name}: norm of the integral of {fname} is its sup norm on the support"), norm == expected)
                    .detail(format!("{norm} vs {expected}")),
            );
            entries.push((fname.clone(), Node::Map(vec![("matrix".into(), Node::Matrix(map.matrix().clone())), ("norm".into(), Node::Rational(norm))])));
        }
        let mut functorial = true;
        for _ in 0..RANDOM_PAIRS {
            let (a, b, d) = (random::element(&mut rng, alg), random::element(&mut rng, alg), random::element(&mut rng, alg));
            let p = SimpleMorphism::new(a, b, random::simple_on(&mut rng, alg, a.meet(b)))?;
            let q = SimpleMorphism::new(b, d, random::simple_on(&mut rng, alg, b.meet(d)))?;
            let lhs = integrate_simple_morphism(&q.compose(&p)?, &c)?;
            let rhs = integrate_simple_morphism(&q, &c)?.compose(&integrate_simple_morphism(&p, &c)?)?;
            functorial &= lhs == rhs;
        }
        r.check(Check::new(format!("integrate-morphism {name}: integration preserves composition ({RANDOM_PAIRS} random pairs)"), functorial));
        if !entries.is_empty() {
            r.result(name, Node::Map(entries));
        }
    }
    Ok(())
}

fn cosheafify_cmd(ctx: &Ctx, r: &mut Report) -> Run {
    if ctx.model.cosheaves.is_empty() {
        return Err(ctx.mismatch("the model has no cosheaves"));
    }
    let alg = ctx.alg();
    for (name, theta) in &ctx.model.cosheaves {
        let c = cosheafify(theta)?;
        let out = is_cosheaf(&c.cosheaf, ctx.opts.exhaustive)?;
        r.check(verdict_check(alg, format!("cosheafify {name}: the output is a cosheaf"), &out));
        let iso = c.counit_is_isometric_iso(theta)?;
        let input = is_cosheaf(theta, ctx.opts.exhaustive)?.holds();
        r.check(Check::new(format!("cosheafify {name}: the counit is an isometric iso exactly when the input is a cosheaf"), iso == input));
        let mut dims: Vec<(String, Node)> = (0..alg.n_atoms())
            .map(|a| (ctx.fmt(Element::atom(a)), Node::Int(c.cosheaf.space(Element::atom(a)).dim())))
            .collect();
        dims.push((ctx.fmt(alg.top()), Node::Int(c.cosheaf.space(alg.top()).dim())));
        r.result(name.clone(), Node::Map(vec![("fiber dims".into(), Node::Map(dims)), ("counit isometric iso".into(), Node::Bool(iso))]));
    }
    Ok(())
}

fn bva(ctx: &Ctx, r: &mut Report) -> Run {
    let alg = ctx.alg();
    let top = alg.top();
    let eligible: Vec<_> = ctx.model.measures.iter().filter(|m| m.measure.target().is_sum_like()).collect();
    if eligible.is_empty() {
        return Err(ctx.mismatch("needs a measure with an l1-like target"));
    }
    let mut rng = ctx.rng();
    for m in eligible {
        let nu = &m.measure;
        let b = nu.target();
        let cosheaf = bva_cosheaf(alg, b)?;
        r.check(verdict_check(alg, format!("bva {}: bva(-, B) is a cosheaf", m.name), &is_cosheaf(&cosheaf, ctx.opts.exhaustive)?));
        let stacked: Vec<Rational> = nu.atom_values().concat();
        let norm = cosheaf.space(top).norm(&stacked);
        let var = nu.variation(top);
        r.check(Check::new(format!("bva {}: norm in bva(top) is the variation", m.name), norm == var).detail(format!("{norm} vs {var}")));
        r.check(Check::new(format!("bva {}: total value is the measure of top", m.name), total_value(top, b).mul_vec(&stacked) == nu.eval(top)));
        r.result(m.name.clone(), Node::Map(vec![("variation".into(), Node::Rational(var)), ("bva dim".into(), Node::Int(cosheaf.space(top).dim()))]));
        // the triangle through bva for a seeded map out of each model cosheaf
        for (name, theta) in &ctx.model.cosheaves {
            if !is_cosheaf(theta, false)?.holds() {
                continue;
            }
            let theta = Cosheaf::new(theta.clone())?;
            let tau_top = Matrix::from_fn(b.dim(), theta.space(top).dim(), |_, _| random::rational(&mut rng));
            let tau: Vec<Matrix> = alg.elements().map(|e| Ok(tau_top.mul(&theta.precosheaf().extension(e, top)?))).collect::<Run<_>>()?;
            let u = constant_universal_map(&theta, b, &tau)?;
            let commutes = alg.elements().all(|e| total_value(e, b).mul(u.component(e)) == tau[e.bits() as usize]);
            r.check(Check::new(format!("bva {}: triangle through bva commutes for {name}", m.name), commutes));
        }
    }
    Ok(())
}

fn kan(ctx: &Ctx, r: &mut Report) -> Run {
    let k = ctx.model.kan.as_ref().ok_or_else(|| ctx.mismatch("the model has no kan section"))?;
    let lan = kan_extension(&k.functor, &k.target, &k.along)?;
    let objects = k.target.objects();
    r.result("values", Node::Map(objects.iter().enumerate().map(|(a, o)| (o.clone(), Node::Int(lan.value(a).dim()))).collect()));
    let ff = lan.along_fully_faithful();
    r.result("along fully faithful", Node::Bool(ff));
    let n = objects.len();
    let mut functorial = true;
    for a in 0..n {
        for b in (0..n).filter(|&b| k.target.leq(a, b)) {
            for c in (0..n).filter(|&c| k.target.leq(b, c)) {
                functorial &= lan.map_between(a, c)? == lan.map_between(b, c)?.mul(&lan.map_between(a, b)?);
            }
        }
    }
    r.check(Check::new("kan: the extension is a functor", functorial));
    if ff {
        // units fail to be isometric when the functor is not contractive
        let ws = match lan.unit_witnesses() {
            Ok(ws) => ws,
            Err(e) => {
                r.check(Check::new("kan: units along a fully faithful map are isometric isomorphisms", false).detail(e.to_string()));
                return Ok(());
            }
        };
        let src = k.functor.category().objects();
        let mut all = true;
        let mut units = Vec::new();
        for (m, w) in ws.iter().enumerate() {
            all &= w.is_isometric()?;
            units.push((src[m].clone(), Node::witness(w)));
        }
        r.check(Check::new("kan: units along a fully faithful map are isometric isomorphisms", all));
        r.result("units", Node::Map(units));
    }
    Ok(())
}

/// Fiber dimension at every element, keyed by `{a,b}` spelling.
fn fiber_dims(alg: &BoolAlg, dim: impl Fn(Element) -> usize) -> Node {
    Node::Map(alg.elements().map(|e| (format_element(alg, e), Node::Int(dim(e)))).collect())
}

fn isbell_cmd(ctx: &Ctx, r: &mut Report) -> Run {
    if ctx.model.sheaves.is_empty() && ctx.model.cosheaves.is_empty() {
        return Err(ctx.mismatch("the model has no sheaves or cosheaves"));
    }
    for (name, xi) in &ctx.model.sheaves {
        let l = isbell(xi)?;
        r.result(format!("L {name}"), fiber_dims(ctx.alg(), |e| l.diagram.space(e).dim()));
    }
    for (name, mu) in &ctx.model.cosheaves {
        let rr = isbell_adjoint(mu)?;
        r.result(format!("R {name}"), fiber_dims(ctx.alg(), |e| rr.diagram.space(e).dim()));
    }
    for (xname, xi) in &ctx.model.sheaves {
        for (mname, mu) in &ctx.model.cosheaves {
            let (left, right, m) = isbell_transposition(xi, mu)?;
            let invertible = left.dim() == right.dim() && m.rows() == m.cols() && m.rank() == m.rows();
            r.check(Check::new(format!("isbell {xname}, {mname}: transposition is a bijection"), invertible).detail(format!(
                "dims {} and {}",
                left.dim(),
                right.dim()
            )));
        }
    }
    Ok(())
}

fn bundle_checks(ctx: &Ctx, r: &mut Report) -> Run {
    let m = ctx.model;
    if m.bundles.is_empty() && m.functor_matrices.is_empty() {
        return Err(ctx.mismatch("the model has no bundles"));
    }
    for xi in &m.bundles {
        let (_, ws) = canonical_decomposition(xi)?;
        r.check(Check::new(format!("bundle {}: canonical decomposition is isometric", xi.name()), all_isometric(&ws)?));
    }
    for t in &m.functor_matrices {
        let round = FunctorMatrix::from_product_bundle(&t.to_product_bundle(), t.source(), t.target())?;
        r.check(Check::new(format!("matrix {}: product-bundle round trip", t.name()), &round == t));
    }
    let composable = |s: &FunctorMatrix, t: &FunctorMatrix| t.target().name() == s.source().name() && s.name() != t.name();
    for t in &m.functor_matrices {
        for s in m.functor_matrices.iter().filter(|s| composable(s, t)) {
            for xi in m.bundles.iter().filter(|xi| xi.base().name() == t.source().name()) {
                let ws = apply_compose_witness(s, t, xi)?;
                r.check(Check::new(format!("matrices {} {} on {}: S(T xi) = (ST) xi is isometric", s.name(), t.name(), xi.name()), all_isometric(&ws)?));
            }
            for q in m.functor_matrices.iter().filter(|q| composable(q, s) && q.name() != t.name()) {
                let a = associator(q, s, t)?;
                r.check(Check::new(format!("matrices {} {} {}: associator is isometric", q.name(), s.name(), t.name()), a.is_isometric()?));
            }
        }
    }
    Ok(())
}

fn all_isometric(ws: &[IsoWitness]) -> Run<bool> {
    for w in ws {
        if !w.is_isometric()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sections run by `verify-all`, in report order. Sections whose inputs the
/// model lacks are skipped.
const VERIFY_SECTIONS: &[&str] = &[
    "stone",
    "semivariation",
    "lipschitz",
    "integrate",
    "bochner",
    "fubini",
    "check-cosheaf",
    "check-sheaf",
    "spectral",
    "integrate-morphism",
    "cosheafify",
    "bva",
    "bundles",
    "kan",
    "isbell",
];

fn verify_all(ctx: &Ctx, r: &mut Report) -> Run {
    let mut ran = Vec::new();
    for &section in VERIFY_SECTIONS {
        let mut scratch = Report::new(section, "", 0, false, None);
        let sub = Ctx { model: ctx.model, opts: ctx.opts, command: section };
        let outcome = if section == "bundles" { bundle_checks(&sub, &mut scratch) } else { dispatch(&sub, section, &mut scratch) };
        match outcome {
            Ok(()) => {
                ran.push((section.to_string(), Node::Int(scratch.checks.len())));
                r.checks.extend(scratch.checks);
            }
            Err(RunError::Mismatch { .. }) => ran.push((section.to_string(), Node::text("skipped"))),
            Err(e) => return Err(e),
        }
    }
    r.result("sections", Node::Map(ran));
    Ok(())
}
