//! JSON forms of terms, partitions, ideals, spaces, functions and verdicts.
//!
//! Objects are `serde_json::Value`s with sorted keys, so printing the same
//! value twice gives the same bytes. Unknown keys are rejected everywhere.

use idealconv_core::ap::ApVerdict;
use idealconv_core::engine::{IhjVerdict, Verdict};
use idealconv_core::function::{Diagonal, Piece, ValueSpec};
use idealconv_core::{
    Atom, Bijection, Element, Ideal, IdealKind, Node, Partition, PiecewiseFn, Rational, SetTerm, Space, Universe,
};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn object<'a>(v: &'a Value, what: &str, allowed: &[&str]) -> CliResult<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| bad(format!("{what} must be an object, got {v}")))?;
    if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(bad(format!("unknown key `{k}` in {what}")));
    }
    Ok(map)
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, what: &str) -> CliResult<&'a Value> {
    map.get(key).ok_or_else(|| bad(format!("{what} is missing `{key}`")))
}

fn uint(v: &Value, what: &str) -> CliResult<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a non-negative integer, got {v}")))
}

fn string<'a>(v: &'a Value, what: &str) -> CliResult<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string, got {v}")))
}

pub fn universe_from_json(v: &Value) -> CliResult<Universe> {
    match string(v, "universe")? {
        "nat" => Ok(Universe::Nat),
        "natpair" => Ok(Universe::NatPair),
        other => Err(bad(format!("unknown universe `{other}`"))),
    }
}

pub fn universe_to_json(u: Universe) -> Value {
    Value::from(u.name())
}

pub fn element_from_json(v: &Value) -> CliResult<Element> {
    let e = match v {
        Value::Number(_) => Element::Nat(uint(v, "element")?),
        Value::Array(xs) if xs.len() == 2 => Element::Pair(uint(&xs[0], "coordinate")?, uint(&xs[1], "coordinate")?),
        _ => return Err(bad(format!("element must be an integer or a pair, got {v}"))),
    };
    if !e.is_valid() {
        return Err(bad(format!("element {v} has a zero coordinate; indices start at 1")));
    }
    Ok(e)
}

pub fn element_to_json(e: Element) -> Value {
    match e {
        Element::Nat(n) => json!(n),
        Element::Pair(a, b) => json!([a, b]),
    }
}

pub fn bijection_from_json(v: &Value) -> CliResult<Bijection> {
    match string(v, "bijection")? {
        "cantor" => Ok(Bijection::Cantor),
        "shell" => Ok(Bijection::Shell),
        other => Err(bad(format!("unknown bijection `{other}`"))),
    }
}

pub fn partition_from_json(v: &Value) -> CliResult<Partition> {
    if let Some(s) = v.as_str() {
        return match s {
            "columns" => Ok(Partition::Columns),
            "gamma" => Ok(Partition::Gamma),
            other => Err(bad(format!("unknown partition `{other}`"))),
        };
    }
    let map = object(v, "partition", &["residues", "pulled"])?;
    if let Some(m) = map.get("residues") {
        let m = uint(m, "modulus")?;
        if m == 0 {
            return Err(bad("residue modulus must be positive"));
        }
        return Ok(Partition::Residues(m));
    }
    let inner = object(field(map, "pulled", "partition")?, "pulled partition", &["bijection", "partition"])?;
    Ok(Partition::pulled(
        bijection_from_json(field(inner, "bijection", "pulled partition")?)?,
        partition_from_json(field(inner, "partition", "pulled partition")?)?,
    ))
}

pub fn partition_to_json(p: &Partition) -> Value {
    match p {
        Partition::Columns => json!("columns"),
        Partition::Gamma => json!("gamma"),
        Partition::Residues(m) => json!({ "residues": m }),
        Partition::Pulled(b, base) => json!({ "pulled": { "bijection": b.name(), "partition": partition_to_json(base) } }),
    }
}

fn args<'a>(map: &'a Map<String, Value>, n: usize, name: &str) -> CliResult<&'a [Value]> {
    let xs = field(map, "args", "atom")?.as_array().ok_or_else(|| bad(format!("args of `{name}` must be an array")))?;
    if xs.len() != n {
        return Err(bad(format!("atom `{name}` takes {n} argument(s), got {}", xs.len())));
    }
    Ok(xs)
}

fn atom_from_json(map: &Map<String, Value>) -> CliResult<Atom> {
    let name = string(field(map, "atom", "term")?, "atom name")?;
    let atom = match name {
        "empty" => Atom::Empty(universe_from_json(&args(map, 1, name)?[0])?),
        "full" => Atom::Full(universe_from_json(&args(map, 1, name)?[0])?),
        "finite" => {
            let xs = field(map, "args", "atom")?.as_array().ok_or_else(|| bad("args of `finite` must be an array"))?;
            let (u, rest) = xs.split_first().ok_or_else(|| bad("`finite` needs a universe first"))?;
            let u = universe_from_json(u)?;
            let mut elems = rest.iter().map(element_from_json).collect::<CliResult<Vec<_>>>()?;
            elems.sort();
            elems.dedup();
            Atom::Finite(u, elems)
        }
        "tail" => Atom::Tail(uint(&args(map, 1, name)?[0], "tail start")?),
        "upper_quad" => Atom::UpperQuad(uint(&args(map, 1, name)?[0], "quadrant corner")?),
        "row" => Atom::Row(uint(&args(map, 1, name)?[0], "row index")?),
        "col" => Atom::Col(uint(&args(map, 1, name)?[0], "column index")?),
        "block" => {
            let xs = args(map, 2, name)?;
            Atom::Block(partition_from_json(&xs[0])?, uint(&xs[1], "block index")?)
        }
        "pulled" => {
            let xs = args(map, 2, name)?;
            let inner = term_from_json(&xs[1])?;
            let atom = inner.as_atom().ok_or_else(|| bad("`pulled` wraps a single atom"))?.clone();
            Atom::Pulled(bijection_from_json(&xs[0])?, Box::new(atom))
        }
        other => return Err(bad(format!("unknown atom `{other}`"))),
    };
    Ok(atom)
}

pub fn term_from_json(v: &Value) -> CliResult<SetTerm> {
    let map = v.as_object().ok_or_else(|| bad(format!("term must be an object, got {v}")))?;
    if map.contains_key("atom") {
        object(v, "atom", &["atom", "args"])?;
        return Ok(SetTerm::atom(atom_from_json(map)?)?);
    }
    object(v, "term", &["op", "terms"])?;
    let op = string(field(map, "op", "term")?, "op")?;
    let terms = field(map, "terms", "term")?
        .as_array()
        .ok_or_else(|| bad("`terms` must be an array"))?
        .iter()
        .map(term_from_json)
        .collect::<CliResult<Vec<_>>>()?;
    let arity = |n: usize| {
        if terms.len() == n {
            Ok(())
        } else {
            Err(bad(format!("`{op}` takes {n} term(s), got {}", terms.len())))
        }
    };
    let node = match op {
        "compl" => {
            arity(1)?;
            Node::Complement(Box::new(terms[0].clone()))
        }
        "diff" => {
            arity(2)?;
            Node::Difference(Box::new(terms[0].clone()), Box::new(terms[1].clone()))
        }
        "union" | "inter" if terms.is_empty() => return Err(bad(format!("`{op}` needs at least one term"))),
        "union" => Node::Union(terms),
        "inter" => Node::Intersection(terms),
        other => return Err(bad(format!("unknown op `{other}`"))),
    };
    Ok(SetTerm::from_node(node)?)
}

fn atom_to_json(a: &Atom) -> Value {
    let leaf = |name: &str, args: Vec<Value>| json!({ "atom": name, "args": args });
    match a {
        Atom::Empty(u) => leaf("empty", vec![universe_to_json(*u)]),
        Atom::Full(u) => leaf("full", vec![universe_to_json(*u)]),
        Atom::Finite(u, es) => {
            let mut xs = vec![universe_to_json(*u)];
            xs.extend(es.iter().map(|&e| element_to_json(e)));
            leaf("finite", xs)
        }
        Atom::Tail(m) => leaf("tail", vec![json!(m)]),
        Atom::UpperQuad(m) => leaf("upper_quad", vec![json!(m)]),
        Atom::Row(i) => leaf("row", vec![json!(i)]),
        Atom::Col(i) => leaf("col", vec![json!(i)]),
        Atom::Block(p, i) => leaf("block", vec![partition_to_json(p), json!(i)]),
        Atom::Pulled(b, inner) => leaf("pulled", vec![json!(b.name()), atom_to_json(inner)]),
    }
}

pub fn term_to_json(t: &SetTerm) -> Value {
    let node = |op: &str, ts: &[SetTerm]| json!({ "op": op, "terms": ts.iter().map(term_to_json).collect::<Vec<_>>() });
    match t.node() {
        Node::Atom(a) => atom_to_json(a),
        Node::Complement(x) => node("compl", std::slice::from_ref(x)),
        Node::Union(xs) => node("union", xs),
        Node::Intersection(xs) => node("inter", xs),
        Node::Difference(a, b) => node("diff", &[(**a).clone(), (**b).clone()]),
    }
}

/// Rationals are `{"num", "den"}`; plain integers and `"p/q"` strings are
/// accepted on input.
pub fn rational_from_json(v: &Value) -> CliResult<Rational> {
    match v {
        Value::Number(n) => n.as_i64().map(Rational::from_integer).ok_or_else(|| bad(format!("{v} is not an integer"))),
        Value::String(s) => parse_rational(s),
        _ => {
            let map = object(v, "rational", &["num", "den"])?;
            let num = field(map, "num", "rational")?.as_i64().ok_or_else(|| bad("`num` must be an integer"))?;
            let den = field(map, "den", "rational")?.as_i64().ok_or_else(|| bad("`den` must be an integer"))?;
            if den == 0 {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
    }
}

pub fn parse_rational(s: &str) -> CliResult<Rational> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| bad(format!("rational: {e}")))?;
        return rational_from_json(&v);
    }
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| bad(format!("`{s}` is not a rational")));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d == 0 {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(parse(n)?, d))
        }
        None => Ok(Rational::from_integer(parse(s)?)),
    }
}

pub fn rational_to_json(q: Rational) -> Value {
    json!({ "num": q.numer(), "den": q.denom() })
}

fn point_list(v: &Value, what: &str) -> CliResult<Vec<Rational>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))?.iter().map(rational_from_json).collect()
}

pub fn space_from_json(v: &Value) -> CliResult<Space> {
    if v.as_str() == Some("metric_line") {
        return Ok(Space::metric_line());
    }
    let map = object(v, "codomain", &["discrete", "finite"])?;
    if let Some(ps) = map.get("discrete") {
        return Ok(Space::discrete(point_list(ps, "discrete points")?)?);
    }
    let inner = object(field(map, "finite", "codomain")?, "finite codomain", &["points", "opens"])?;
    let points = point_list(field(inner, "points", "finite codomain")?, "points")?;
    let opens = field(inner, "opens", "finite codomain")?
        .as_array()
        .ok_or_else(|| bad("`opens` must be an array of index lists"))?
        .iter()
        .map(|o| {
            let idx = o.as_array().ok_or_else(|| bad("each open set is an array of point indices"))?;
            idx.iter().try_fold(0u64, |acc, i| {
                let i = uint(i, "point index")?;
                if i >= 64 {
                    return Err(bad(format!("point index {i} out of range")));
                }
                Ok(acc | 1 << i)
            })
        })
        .collect::<CliResult<Vec<u64>>>()?;
    Ok(Space::finite_top(points, opens)?)
}

pub fn space_to_json(sp: &Space) -> Value {
    match sp {
        Space::MetricLine => json!("metric_line"),
        Space::Discrete { points } => json!({ "discrete": points.iter().map(|&q| rational_to_json(q)).collect::<Vec<_>>() }),
        Space::FiniteTop { points, opens } => {
            let opens: Vec<Vec<usize>> =
                opens.iter().map(|&o| (0..points.len()).filter(|i| o >> i & 1 == 1).collect()).collect();
            json!({ "finite": { "points": points.iter().map(|&q| rational_to_json(q)).collect::<Vec<_>>(), "opens": opens } })
        }
    }
}

pub fn function_from_json(v: &Value) -> CliResult<PiecewiseFn> {
    let map = object(v, "function", &["universe", "codomain", "pieces", "diagonal", "default"])?;
    let universe = universe_from_json(field(map, "universe", "function")?)?;
    let codomain = match map.get("codomain") {
        Some(c) => space_from_json(c)?,
        None => Space::metric_line(),
    };
    let pieces = match map.get("pieces") {
        None => Vec::new(),
        Some(ps) => ps
            .as_array()
            .ok_or_else(|| bad("`pieces` must be an array"))?
            .iter()
            .map(|p| {
                let pm = object(p, "piece", &["set", "value"])?;
                let set = term_from_json(field(pm, "set", "piece")?)?;
                let vm = object(field(pm, "value", "piece")?, "piece value", &["const", "tails_to"])?;
                let value = match (vm.get("const"), vm.get("tails_to")) {
                    (Some(c), None) => ValueSpec::Const(rational_from_json(c)?),
                    (None, Some(t)) => ValueSpec::TailsTo(rational_from_json(t)?),
                    _ => return Err(bad("piece value needs exactly one of `const` and `tails_to`")),
                };
                Ok(Piece::new(set, value))
            })
            .collect::<CliResult<Vec<_>>>()?,
    };
    let diagonal = match map.get("diagonal") {
        None => None,
        Some(d) => {
            let dm = object(d, "diagonal", &["partition", "target", "scale"])?;
            let scale = match dm.get("scale") {
                Some(s) => rational_from_json(s)?,
                None => Rational::from_integer(1),
            };
            Some(Diagonal::new(
                partition_from_json(field(dm, "partition", "diagonal")?)?,
                rational_from_json(field(dm, "target", "diagonal")?)?,
                scale,
            )?)
        }
    };
    let default = map.get("default").map(rational_from_json).transpose()?;
    Ok(PiecewiseFn::new(universe, codomain, pieces, diagonal, default)?)
}

pub fn function_to_json(f: &PiecewiseFn) -> Value {
    let pieces: Vec<Value> = f
        .pieces()
        .iter()
        .map(|p| {
            let value = match p.value {
                ValueSpec::Const(q) => json!({ "const": rational_to_json(q) }),
                ValueSpec::TailsTo(q) => json!({ "tails_to": rational_to_json(q) }),
            };
            json!({ "set": term_to_json(&p.set), "value": value })
        })
        .collect();
    let mut out = json!({
        "universe": universe_to_json(f.universe()),
        "codomain": space_to_json(f.codomain()),
        "pieces": pieces,
    });
    if let Some(d) = f.diagonal() {
        out["diagonal"] = json!({
            "partition": partition_to_json(d.partition()),
            "target": rational_to_json(d.target()),
            "scale": rational_to_json(d.scale()),
        });
    }
    if let Some(q) = f.default_value() {
        out["default"] = rational_to_json(q);
    }
    out
}

fn params_universe(params: &Map<String, Value>, context: Universe) -> CliResult<Universe> {
    params.get("universe").map(universe_from_json).transpose().map(|u| u.unwrap_or(context))
}

/// Builds a catalog ideal. Names without a fixed universe (`fin`,
/// `improper`) use `context` unless `params.universe` says otherwise.
pub fn ideal_from_parts(name: &str, params: &Map<String, Value>, context: Universe) -> CliResult<Ideal> {
    let allow = |keys: &[&str]| -> CliResult<()> {
        match params.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(bad(format!("unknown parameter `{k}` for ideal `{name}`"))),
            None => Ok(()),
        }
    };
    let sub = |key: &str| -> CliResult<Ideal> { ideal_from_json(field(params, key, name)?, Universe::Nat) };
    let ideal = match name {
        "fin" => {
            allow(&["universe"])?;
            Ideal::fin(params_universe(params, context)?)
        }
        "improper" => {
            allow(&["universe"])?;
            Ideal::improper(params_universe(params, context)?)
        }
        "principal" => {
            allow(&["set"])?;
            Ideal::principal(term_from_json(field(params, "set", "principal ideal")?)?)
        }
        "uni" => {
            allow(&[])?;
            Ideal::partition(Partition::Columns)?
        }
        "prg" | "pringsheim" => {
            allow(&[])?;
            Ideal::pringsheim()
        }
        "mac" | "partition" => {
            allow(&["partition"])?;
            Ideal::partition(partition_from_json(field(params, "partition", "partition ideal")?)?)?
        }
        "uniform_product" | "pointwise_product" => {
            allow(&["base", "columns"])?;
            let cols = field(params, "columns", name)?
                .as_array()
                .ok_or_else(|| bad("`columns` must be an array"))?
                .iter()
                .map(|c| uint(c, "column"))
                .collect::<CliResult<Vec<_>>>()?;
            if name == "uniform_product" {
                Ideal::uniform_product(sub("base")?, cols)?
            } else {
                Ideal::pointwise_product(sub("base")?, cols)?
            }
        }
        "pushforward" => {
            allow(&["base", "bijection"])?;
            let b = bijection_from_json(field(params, "bijection", name)?)?;
            let base = ideal_from_json(field(params, "base", name)?, context.other())?;
            Ideal::pushforward(base, b)
        }
        "trace" => {
            allow(&["base", "set"])?;
            let m = term_from_json(field(params, "set", name)?)?;
            Ideal::trace(ideal_from_json(field(params, "base", name)?, m.universe())?, m)?
        }
        other => return Err(CliError::UnknownIdeal(other.to_string())),
    };
    Ok(ideal)
}

/// `{"ideal": name, "params": {...}}` or a bare catalog name.
pub fn ideal_from_json(v: &Value, context: Universe) -> CliResult<Ideal> {
    if let Some(name) = v.as_str() {
        return ideal_from_parts(name, &Map::new(), context);
    }
    let map = object(v, "ideal", &["ideal", "params"])?;
    let name = string(field(map, "ideal", "ideal descriptor")?, "ideal name")?;
    let empty = Map::new();
    let params = match map.get("params") {
        Some(p) => p.as_object().ok_or_else(|| bad("`params` must be an object"))?,
        None => &empty,
    };
    ideal_from_parts(name, params, context)
}

pub fn ideal_to_json(i: &Ideal) -> Value {
    let (name, params) = match i.kind() {
        IdealKind::Fin(u) => ("fin", json!({ "universe": universe_to_json(*u) })),
        IdealKind::Improper(u) => ("improper", json!({ "universe": universe_to_json(*u) })),
        IdealKind::Principal(t) => ("principal", json!({ "set": term_to_json(t) })),
        IdealKind::Partition(Partition::Columns) => ("uni", json!({})),
        IdealKind::Partition(p) => ("mac", json!({ "partition": partition_to_json(p) })),
        IdealKind::Pringsheim => ("prg", json!({})),
        IdealKind::UniformProduct(b, xs) => ("uniform_product", json!({ "base": ideal_to_json(b), "columns": xs })),
        IdealKind::PointwiseProduct(b, xs) => ("pointwise_product", json!({ "base": ideal_to_json(b), "columns": xs })),
        IdealKind::Pushforward(b, bij) => ("pushforward", json!({ "base": ideal_to_json(b), "bijection": bij.name() })),
        IdealKind::Trace(b, m) => ("trace", json!({ "base": ideal_to_json(b), "set": term_to_json(m) })),
    };
    json!({ "ideal": name, "params": params })
}

pub fn verdict_to_json(v: Verdict, reason: &str) -> Value {
    json!({ "verdict": v.name(), "reason": reason })
}

pub fn ihj_verdict_to_json(v: &IhjVerdict) -> Value {
    let mut out = json!({ "verdict": v.name(), "reason": v.reason() });
    if let Some(w) = v.witness() {
        out["witness"] = term_to_json(&w.m);
    }
    out
}

pub fn ap_verdict_to_json(v: &ApVerdict) -> Value {
    match v {
        ApVerdict::Holds { rule } => json!({ "verdict": "holds", "rule": rule }),
        ApVerdict::Fails { witness } => json!({
            "verdict": "fails",
            "witness": { "partition": partition_to_json(&witness.partition), "argument": witness.argument },
        }),
        ApVerdict::Unknown => json!({ "verdict": "unknown", "reason": "no rule applies" }),
    }
}
