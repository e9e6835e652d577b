//! Versioned JSON structure files.
//!
//! A file is `{"format": 1, "kind": ..., "name": ..., "base": {"dim": p}, "payload": {...}}`.
//! Tensors are `{"dims": [...], "entries": {"i,j,k": "poly"}}` with 1-based
//! indices; only canonical (increasing inside skew slots) nonzero entries are
//! written, and a reader fills the signed permutations. Unknown fields are
//! rejected everywhere.

use serde_json::{json, Map, Value};

use crate::bundle::{Anchor, DorfmanConnection, DullBracket, LieAlgebroid, LinearConnection, TwoRep};
use crate::courant::{DegenerateCourant, DiracData};
use crate::error::{Error, Result};
use crate::exactpoly::Poly;
use crate::lie2::{form2_groups, l3_groups, r_groups, Dorfman2Rep, Lie2Morphism, SplitLie2};
use crate::matched::{LAPair, MatchedPair2Reps};
use crate::poisson::{rb_groups, SelfDual2Rep};
use crate::tensor::{Group, PolyTensor};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracFile {
    pub dorfman: Dorfman2Rep,
    pub selfdual: Option<SelfDual2Rep>,
    pub data: DiracData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFile {
    pub source: SplitLie2,
    pub target: SplitLie2,
    pub morphism: Lie2Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    LieAlgebroid(LieAlgebroid),
    DullBracket(DullBracket),
    Connection(LinearConnection),
    TwoRep(TwoRep),
    Dorfman2Rep(Dorfman2Rep),
    SplitLie2(SplitLie2),
    SelfDual2Rep(SelfDual2Rep),
    Matched2Reps(MatchedPair2Reps),
    LAPair(LAPair),
    Courant(DegenerateCourant),
    Dirac(DiracFile),
    Lie2Morphism(MorphismFile),
    Form2(PolyTensor),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::LieAlgebroid(_) => "liealgebroid",
            Structure::DullBracket(_) => "dullbracket",
            Structure::Connection(_) => "connection",
            Structure::TwoRep(_) => "tworep",
            Structure::Dorfman2Rep(_) => "dorfman2rep",
            Structure::SplitLie2(_) => "splitlie2",
            Structure::SelfDual2Rep(_) => "selfdual2rep",
            Structure::Matched2Reps(_) => "matched2reps",
            Structure::LAPair(_) => "lapair",
            Structure::Courant(_) => "courant",
            Structure::Dirac(_) => "dirac",
            Structure::Lie2Morphism(_) => "lie2morphism",
            Structure::Form2(_) => "form2",
        }
    }
}

pub const KINDS: [&str; 13] = [
    "liealgebroid",
    "dullbracket",
    "connection",
    "tworep",
    "dorfman2rep",
    "splitlie2",
    "selfdual2rep",
    "matched2reps",
    "lapair",
    "courant",
    "dirac",
    "lie2morphism",
    "form2",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFile {
    pub name: Option<String>,
    pub nvars: usize,
    pub structure: Structure,
}

impl StructureFile {
    pub fn new(name: &str, nvars: usize, structure: Structure) -> Self {
        StructureFile { name: Some(name.into()), nvars, structure }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("format".into(), json!(FORMAT_VERSION));
        m.insert("kind".into(), json!(self.structure.kind()));
        if let Some(n) = &self.name {
            m.insert("name".into(), json!(n));
        }
        m.insert("base".into(), json!({ "dim": self.nvars }));
        m.insert("payload".into(), write_structure(&self.structure));
        Value::Object(m)
    }

    /// Pretty JSON with a trailing newline; keys are sorted, so output is deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<StructureFile> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<StructureFile> {
        let top = Obj::new(v, "file", &["format", "kind", "name", "base", "payload"], 0)?;
        let format = top.req("format")?.as_u64().ok_or_else(|| perr("file.format must be an integer"))?;
        if format != FORMAT_VERSION {
            return Err(perr(&format!("unsupported format {format}, expected {FORMAT_VERSION}")));
        }
        let kind = top.req("kind")?.as_str().ok_or_else(|| perr("file.kind must be a string"))?.to_string();
        let name = match top.opt("name") {
            Some(n) => Some(n.as_str().ok_or_else(|| perr("file.name must be a string"))?.to_string()),
            None => None,
        };
        let base = Obj::new(top.req("base")?, "base", &["dim"], 0)?;
        let nvars = base.usize("dim")?;
        let structure = read_structure(&kind, top.req("payload")?, nvars)?;
        Ok(StructureFile { name, nvars, structure })
    }
}

fn perr(msg: &str) -> Error {
    Error::Parse(msg.into())
}

fn write_tensor(t: &PolyTensor) -> Value {
    let mut entries = Map::new();
    for (idx, p) in t.entries() {
        let key: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        entries.insert(key.join(","), json!(p.to_string()));
    }
    json!({ "dims": t.dims(), "entries": entries })
}

/// A JSON object whose keys were checked against an allow-list.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    ctx: String,
    nvars: usize,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, ctx: &str, allowed: &[&str], nvars: usize) -> Result<Obj<'a>> {
        let map = v.as_object().ok_or_else(|| perr(&format!("{ctx} must be an object")))?;
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(perr(&format!("unknown field {ctx}.{k}")));
        }
        Ok(Obj { map, ctx: ctx.into(), nvars })
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn req(&self, key: &str) -> Result<&'a Value> {
        self.map.get(key).ok_or_else(|| perr(&format!("missing field {}.{key}", self.ctx)))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let v = self.req(key)?.as_u64().ok_or_else(|| perr(&format!("{}.{key} must be a natural number", self.ctx)))?;
        usize::try_from(v).map_err(|_| perr("rank too large"))
    }

    fn sub(&self, key: &str, allowed: &[&str]) -> Result<Obj<'a>> {
        Obj::new(self.req(key)?, &format!("{}.{key}", self.ctx), allowed, self.nvars)
    }

    fn tensor(&self, key: &str, groups: Vec<Group>) -> Result<PolyTensor> {
        let ctx = format!("{}.{key}", self.ctx);
        let o = Obj::new(self.req(key)?, &ctx, &["dims", "entries"], self.nvars)?;
        let mut t = PolyTensor::zeros(self.nvars, groups);
        let dims: Vec<usize> = o
            .req("dims")?
            .as_array()
            .ok_or_else(|| perr(&format!("{ctx}.dims must be an array")))?
            .iter()
            .map(|d| d.as_u64().map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| perr(&format!("{ctx}.dims must hold naturals")))?;
        if dims != t.dims() {
            return Err(perr(&format!("{ctx}.dims is {dims:?}, expected {:?}", t.dims())));
        }
        let entries = o.req("entries")?.as_object().ok_or_else(|| perr(&format!("{ctx}.entries must be an object")))?;
        for (k, v) in entries {
            let idx: Vec<usize> = k
                .split(',')
                .map(|s| s.trim().parse::<usize>().ok().and_then(|i| i.checked_sub(1)))
                .collect::<Option<_>>()
                .ok_or_else(|| perr(&format!("{ctx}: bad index {k:?} (1-based, comma separated)")))?;
            let text = v.as_str().ok_or_else(|| perr(&format!("{ctx}[{k}] must be a polynomial string")))?;
            let p = Poly::parse(text, self.nvars)?;
            let bad = |e: Error| perr(&format!("{ctx}[{k}]: {e}"));
            if idx.len() != t.order() || idx.iter().zip(t.dims()).any(|(i, d)| i >= d) {
                return Err(perr(&format!("{ctx}: index {k:?} out of range for dims {:?}", t.dims())));
            }
            if !t.get(&idx).is_zero() && t.get(&idx) != &p {
                return Err(perr(&format!("{ctx}[{k}] contradicts an earlier entry")));
            }
            t.set(&idx, p).map_err(bad)?;
        }
        Ok(t)
    }

    fn matrix(&self, key: &str, rows: usize, cols: usize) -> Result<PolyTensor> {
        self.tensor(key, vec![Group::plain(rows), Group::plain(cols)])
    }
}

fn plain3(r: usize) -> Vec<Group> {
    vec![Group::plain(r); 3]
}

fn conn_groups(ra: usize, rb: usize) -> Vec<Group> {
    vec![Group::plain(ra), Group::plain(rb), Group::plain(rb)]
}

fn write_algebroid(a: &LieAlgebroid) -> Value {
    json!({ "rank": a.rank(), "anchor": write_tensor(&a.anchor.m), "bracket": write_tensor(&a.bracket.c) })
}

fn read_algebroid(o: &Obj) -> Result<LieAlgebroid> {
    let r = o.usize("rank")?;
    Ok(LieAlgebroid { anchor: Anchor { m: o.matrix("anchor", o.nvars, r)? }, bracket: DullBracket { c: o.tensor("bracket", plain3(r))? } })
}

fn write_tworep(t: &TwoRep) -> Value {
    json!({
        "algebroid": write_algebroid(&t.algebroid),
        "rank_b": t.rank_b(),
        "rank_c": t.rank_c(),
        "d": write_tensor(&t.d),
        "nabla_b": write_tensor(&t.nabla_b.gamma),
        "nabla_c": write_tensor(&t.nabla_c.gamma),
        "r": write_tensor(&t.r),
    })
}

fn read_tworep(o: &Obj) -> Result<TwoRep> {
    let a = read_algebroid(&o.sub("algebroid", &["rank", "anchor", "bracket"])?)?;
    let (ra, rb, rc) = (a.rank(), o.usize("rank_b")?, o.usize("rank_c")?);
    Ok(TwoRep {
        d: o.matrix("d", rb, rc)?,
        nabla_b: LinearConnection { gamma: o.tensor("nabla_b", conn_groups(ra, rb))? },
        nabla_c: LinearConnection { gamma: o.tensor("nabla_c", conn_groups(ra, rc))? },
        r: o.tensor("r", vec![Group::skew(ra, 2), Group::plain(rb), Group::plain(rc)])?,
        algebroid: a,
    })
}

const TWOREP_FIELDS: [&str; 7] = ["algebroid", "rank_b", "rank_c", "d", "nabla_b", "nabla_c", "r"];
const DORFMAN_FIELDS: [&str; 7] = ["rank_q", "rank_b", "anchor", "db", "delta", "nabla", "r"];
const SPLIT_FIELDS: [&str; 7] = ["rank_q", "rank_b", "anchor", "l1", "bracket", "nabla", "l3"];
const SELFDUAL_FIELDS: [&str; 7] = ["rank_q", "rank_b", "anchor_b", "bracket_b", "dq", "nabla", "rb"];

fn write_dorfman(d: &Dorfman2Rep) -> Value {
    json!({
        "rank_q": d.rq(),
        "rank_b": d.rb(),
        "anchor": write_tensor(&d.anchor.m),
        "db": write_tensor(&d.db),
        "delta": write_tensor(&d.delta.d),
        "nabla": write_tensor(&d.nabla.gamma),
        "r": write_tensor(&d.r),
    })
}

fn read_dorfman(o: &Obj) -> Result<Dorfman2Rep> {
    let (rq, rb) = (o.usize("rank_q")?, o.usize("rank_b")?);
    Ok(Dorfman2Rep {
        anchor: Anchor { m: o.matrix("anchor", o.nvars, rq)? },
        db: o.matrix("db", rb, rq)?,
        delta: DorfmanConnection { d: o.tensor("delta", plain3(rq))? },
        nabla: LinearConnection { gamma: o.tensor("nabla", conn_groups(rq, rb))? },
        r: o.tensor("r", r_groups(rq, rb))?,
    })
}

fn write_split(s: &SplitLie2) -> Value {
    json!({
        "rank_q": s.rq(),
        "rank_b": s.rb(),
        "anchor": write_tensor(&s.anchor.m),
        "l1": write_tensor(&s.l1),
        "bracket": write_tensor(&s.bracket),
        "nabla": write_tensor(&s.nabla.gamma),
        "l3": write_tensor(&s.l3),
    })
}

fn read_split(o: &Obj) -> Result<SplitLie2> {
    let (rq, rb) = (o.usize("rank_q")?, o.usize("rank_b")?);
    Ok(SplitLie2 {
        anchor: Anchor { m: o.matrix("anchor", o.nvars, rq)? },
        l1: o.matrix("l1", rq, rb)?,
        bracket: o.tensor("bracket", vec![Group::skew(rq, 2), Group::plain(rq)])?,
        nabla: LinearConnection { gamma: o.tensor("nabla", conn_groups(rq, rb))? },
        l3: o.tensor("l3", l3_groups(rq, rb))?,
    })
}

fn write_selfdual(s: &SelfDual2Rep) -> Value {
    json!({
        "rank_q": s.rq(),
        "rank_b": s.sb(),
        "anchor_b": write_tensor(&s.anchor_b.m),
        "bracket_b": write_tensor(&s.bracket_b.c),
        "dq": write_tensor(&s.dq),
        "nabla": write_tensor(&s.nabla.gamma),
        "rb": write_tensor(&s.rb),
    })
}

fn read_selfdual(o: &Obj) -> Result<SelfDual2Rep> {
    let (rq, sb) = (o.usize("rank_q")?, o.usize("rank_b")?);
    Ok(SelfDual2Rep {
        anchor_b: Anchor { m: o.matrix("anchor_b", o.nvars, sb)? },
        bracket_b: DullBracket { c: o.tensor("bracket_b", plain3(sb))? },
        dq: o.matrix("dq", rq, rq)?,
        nabla: LinearConnection { gamma: o.tensor("nabla", conn_groups(sb, rq))? },
        rb: o.tensor("rb", rb_groups(sb, rq))?,
    })
}

fn write_lapair(p: &LAPair) -> Value {
    json!({ "selfdual": write_selfdual(&p.selfdual), "dorfman": write_dorfman(&p.dorfman) })
}

fn read_lapair(o: &Obj) -> Result<LAPair> {
    Ok(LAPair { selfdual: read_selfdual(&o.sub("selfdual", &SELFDUAL_FIELDS)?)?, dorfman: read_dorfman(&o.sub("dorfman", &DORFMAN_FIELDS)?)? })
}

fn write_structure(s: &Structure) -> Value {
    match s {
        Structure::LieAlgebroid(a) => write_algebroid(a),
        Structure::DullBracket(b) => json!({ "rank": b.rank(), "bracket": write_tensor(&b.c) }),
        Structure::Connection(c) => json!({
            "acting_rank": c.acting_rank(),
            "module_rank": c.module_rank(),
            "gamma": write_tensor(&c.gamma),
        }),
        Structure::TwoRep(t) => write_tworep(t),
        Structure::Dorfman2Rep(d) => write_dorfman(d),
        Structure::SplitLie2(s) => write_split(s),
        Structure::SelfDual2Rep(s) => write_selfdual(s),
        Structure::Matched2Reps(m) => json!({ "rep_a": write_tworep(&m.rep_a), "rep_b": write_tworep(&m.rep_b) }),
        Structure::LAPair(p) => write_lapair(p),
        Structure::Courant(c) => json!({
            "rank": c.rank(),
            "anchor": write_tensor(&c.anchor.m),
            "pairing": write_tensor(&c.pairing),
            "bracket": write_tensor(&c.bracket.c),
            "dmap": write_tensor(&c.dmap),
        }),
        Structure::Dirac(d) => {
            let mut m = Map::new();
            m.insert("dorfman".into(), write_dorfman(&d.dorfman));
            if let Some(s) = &d.selfdual {
                m.insert("selfdual".into(), write_selfdual(s));
            }
            m.insert("u".into(), write_tensor(&d.data.u));
            m.insert("bprime".into(), write_tensor(&d.data.bprime));
            Value::Object(m)
        }
        Structure::Lie2Morphism(m) => json!({
            "source": write_split(&m.source),
            "target": write_split(&m.target),
            "mu_q": write_tensor(&m.morphism.mu_q),
            "mu_b": write_tensor(&m.morphism.mu_b),
            "mu12": write_tensor(&m.morphism.mu12),
        }),
        Structure::Form2(phi) => json!({ "rank_q": phi.dims()[0], "rank_b": phi.dims()[2], "phi": write_tensor(phi) }),
    }
}

fn dims_of(o: &Obj, key: &str, ctx: &str) -> Result<Vec<usize>> {
    let t = o.sub(key, &["dims", "entries"])?;
    t.req("dims")?
        .as_array()
        .and_then(|a| a.iter().map(|d| d.as_u64().map(|d| d as usize)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| perr(&format!("{ctx}.{key}.dims must hold naturals")))
}

fn read_structure(kind: &str, v: &Value, nvars: usize) -> Result<Structure> {
    let obj = |allowed: &[&str]| Obj::new(v, "payload", allowed, nvars);
    Ok(match kind {
        "liealgebroid" => Structure::LieAlgebroid(read_algebroid(&obj(&["rank", "anchor", "bracket"])?)?),
        "dullbracket" => {
            let o = obj(&["rank", "bracket"])?;
            Structure::DullBracket(DullBracket { c: o.tensor("bracket", plain3(o.usize("rank")?))? })
        }
        "connection" => {
            let o = obj(&["acting_rank", "module_rank", "gamma"])?;
            Structure::Connection(LinearConnection { gamma: o.tensor("gamma", conn_groups(o.usize("acting_rank")?, o.usize("module_rank")?))? })
        }
        "tworep" => Structure::TwoRep(read_tworep(&obj(&TWOREP_FIELDS)?)?),
        "dorfman2rep" => Structure::Dorfman2Rep(read_dorfman(&obj(&DORFMAN_FIELDS)?)?),
        "splitlie2" => Structure::SplitLie2(read_split(&obj(&SPLIT_FIELDS)?)?),
        "selfdual2rep" => Structure::SelfDual2Rep(read_selfdual(&obj(&SELFDUAL_FIELDS)?)?),
        "matched2reps" => {
            let o = obj(&["rep_a", "rep_b"])?;
            Structure::Matched2Reps(MatchedPair2Reps {
                rep_a: read_tworep(&o.sub("rep_a", &TWOREP_FIELDS)?)?,
                rep_b: read_tworep(&o.sub("rep_b", &TWOREP_FIELDS)?)?,
            })
        }
        "lapair" => Structure::LAPair(read_lapair(&obj(&["selfdual", "dorfman"])?)?),
        "courant" => {
            let o = obj(&["rank", "anchor", "pairing", "bracket", "dmap"])?;
            let n = o.usize("rank")?;
            Structure::Courant(DegenerateCourant {
                anchor: Anchor { m: o.matrix("anchor", nvars, n)? },
                pairing: o.matrix("pairing", n, n)?,
                bracket: DullBracket { c: o.tensor("bracket", plain3(n))? },
                dmap: o.matrix("dmap", nvars, n)?,
            })
        }
        "dirac" => {
            let o = obj(&["dorfman", "selfdual", "u", "bprime"])?;
            let dorfman = read_dorfman(&o.sub("dorfman", &DORFMAN_FIELDS)?)?;
            let selfdual = match o.opt("selfdual") {
                Some(_) => Some(read_selfdual(&o.sub("selfdual", &SELFDUAL_FIELDS)?)?),
                None => None,
            };
            let ku = dims_of(&o, "u", "payload")?.get(1).copied().unwrap_or(0);
            let kb = dims_of(&o, "bprime", "payload")?.get(1).copied().unwrap_or(0);
            let data = DiracData { u: o.matrix("u", dorfman.rq(), ku)?, bprime: o.matrix("bprime", dorfman.rb(), kb)? };
            Structure::Dirac(DiracFile { dorfman, selfdual, data })
        }
        "lie2morphism" => {
            let o = obj(&["source", "target", "mu_q", "mu_b", "mu12"])?;
            let source = read_split(&o.sub("source", &SPLIT_FIELDS)?)?;
            let target = read_split(&o.sub("target", &SPLIT_FIELDS)?)?;
            let morphism = Lie2Morphism {
                mu_q: o.matrix("mu_q", target.rq(), source.rq())?,
                mu_b: o.matrix("mu_b", target.rb(), source.rb())?,
                mu12: o.tensor("mu12", form2_groups(source.rq(), target.rb()))?,
            };
            Structure::Lie2Morphism(MorphismFile { source, target, morphism })
        }
        "form2" => {
            let o = obj(&["rank_q", "rank_b", "phi"])?;
            Structure::Form2(o.tensor("phi", form2_groups(o.usize("rank_q")?, o.usize("rank_b")?))?)
        }
        other => return Err(perr(&format!("unknown kind {other:?}; expected one of {}", KINDS.join(", ")))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_and_kinds_are_rejected() {
        let ok = r#"{"format":1,"kind":"dullbracket","base":{"dim":1},"payload":{"rank":1,"bracket":{"dims":[1,1,1],"entries":{"1,1,1":"x1"}}}}"#;
        let f = StructureFile::from_json(ok).unwrap();
        assert_eq!(StructureFile::from_json(&f.to_json()).unwrap(), f);
        for bad in [
            ok.replace("\"rank\":1,", "\"rank\":1,\"extra\":0,"),
            ok.replace("dullbracket", "bracket"),
            ok.replace("\"format\":1", "\"format\":2"),
            ok.replace("[1,1,1]", "[1,1,2]"),
            ok.replace("\"x1\"", "\"x2\""),
            ok.replace("1,1,1\"", "1,1,0\""),
        ] {
            assert!(matches!(StructureFile::from_json(&bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn skew_entries_fill_permutations() {
        let t = r#"{"format":1,"kind":"form2","base":{"dim":0},"payload":{"rank_q":3,"rank_b":1,"phi":{"dims":[3,3,1],"entries":{"2,1,1":"3/2"}}}}"#;
        let f = StructureFile::from_json(t).unwrap();
        let Structure::Form2(phi) = &f.structure else { panic!() };
        assert_eq!(phi.get(&[0, 1, 0]).to_string(), "-3/2");
        assert!(f.to_json().contains("\"1,2,1\": \"-3/2\""));
    }
}
