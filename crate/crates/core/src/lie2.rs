//! Split Lie 2-algebroids and Dorfman 2-representations: conversion, axiom
//! checks, the homological vector field, change of splitting and morphisms.
//!
//! Frames: `q_i` of `Q`, `τ_i` dual frame of `Q*`, `b_r` of `B`, `β_r` dual
//! frame of `B*`. Component conventions:
//!
//! * `db[r][j]`: `∂_B τ_j = Σ_r db[r][j] b_r`, so `⟨∂_B* β_r, τ_j⟩ = db[r][j]`.
//! * `r[i,j,l,k]`: `R(q_i,q_j) b_l = Σ_k r[i,j,l,k] τ_k`, so
//!   `ω_R(q_i,q_j,q_k)(b_l) = r[i,j,l,k]`.
//! * `l1[k][r]`: `l_1(β_r) = Σ_k l1[k][r] q_k`, and `∂_B* = −l_1`.
//! * `l3[i,j,k,l] = l_3(q_i,q_j,q_k)(b_l)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{
    add, apply_matrix, apply_transpose, cartan, connection_curvature, dorfman_curvature, frame, sub, vf_bracket, Anchor, DorfmanConnection, DullBracket, LinearConnection, Section,
};
use crate::error::{Error, Result};
use crate::exactpoly::Poly;
use crate::graded::{GradedDerivation, GradedFunction, Generators};
use crate::report::{random_poly, CheckReport, Entry, Probe, Slot};
use crate::tensor::{Group, PolyTensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dorfman2Rep {
    pub anchor: Anchor,
    pub db: PolyTensor,
    pub delta: DorfmanConnection,
    pub nabla: LinearConnection,
    pub r: PolyTensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLie2 {
    pub anchor: Anchor,
    pub l1: PolyTensor,
    pub bracket: PolyTensor,
    pub nabla: LinearConnection,
    pub l3: PolyTensor,
}

pub fn r_groups(rq: usize, rb: usize) -> Vec<Group> {
    vec![Group::skew(rq, 2), Group::plain(rb), Group::plain(rq)]
}

pub fn l3_groups(rq: usize, rb: usize) -> Vec<Group> {
    vec![Group::skew(rq, 3), Group::plain(rb)]
}

/// Shape of a 2-form on `Q` with values in `B*`.
pub fn form2_groups(rq: usize, rb: usize) -> Vec<Group> {
    vec![Group::skew(rq, 2), Group::plain(rb)]
}

impl Dorfman2Rep {
    pub fn zero(nvars: usize, rq: usize, rb: usize) -> Self {
        Dorfman2Rep {
            anchor: Anchor::zero(nvars, rq),
            db: PolyTensor::matrix(nvars, rb, rq),
            delta: DorfmanConnection::zero(nvars, rq),
            nabla: LinearConnection::zero(nvars, rq, rb),
            r: PolyTensor::zeros(nvars, r_groups(rq, rb)),
        }
    }

    pub fn nvars(&self) -> usize {
        self.anchor.nvars()
    }
    pub fn rq(&self) -> usize {
        self.anchor.rank()
    }
    pub fn rb(&self) -> usize {
        self.db.dims()[0]
    }

    pub fn validate(&self) -> Result<()> {
        let (nv, rq, rb) = (self.nvars(), self.rq(), self.rb());
        let ok = self.db.dims() == [rb, rq]
            && self.delta.d.dims() == [rq, rq, rq]
            && self.nabla.gamma.dims() == [rq, rb, rb]
            && self.r.groups() == r_groups(rq, rb).as_slice()
            && [self.db.nvars(), self.delta.d.nvars(), self.nabla.gamma.nvars(), self.r.nvars()].iter().all(|&n| n == nv);
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension("Dorfman 2-representation components have inconsistent shapes".into()))
        }
    }

    pub fn bracket(&self) -> DullBracket {
        self.delta.dual_bracket()
    }

    pub fn del(&self, tau: &[Poly]) -> Section {
        apply_matrix(&self.db, tau)
    }

    /// `∂_B*: B* → Q`.
    pub fn del_star(&self, beta: &[Poly]) -> Section {
        apply_transpose(&self.db, beta)
    }

    /// `R(q1,q2)b`.
    pub fn curv(&self, q1: &[Poly], q2: &[Poly], b: &[Poly]) -> Section {
        self.r.contract(&[q1, q2, b])
    }

    /// `ω_R` as a plain tensor `[q][q][q][b]`.
    pub fn omega_tensor(&self) -> PolyTensor {
        let (rq, rb) = (self.rq(), self.rb());
        let mut w = PolyTensor::zeros(self.nvars(), vec![Group::plain(rq), Group::plain(rq), Group::plain(rq), Group::plain(rb)]);
        for i in 0..rq {
            for j in 0..rq {
                for k in 0..rq {
                    for l in 0..rb {
                        w.set(&[i, j, k, l], self.r.get(&[i, j, l, k]).clone()).unwrap();
                    }
                }
            }
        }
        w
    }
}

impl SplitLie2 {
    pub fn zero(nvars: usize, rq: usize, rb: usize) -> Self {
        SplitLie2 {
            anchor: Anchor::zero(nvars, rq),
            l1: PolyTensor::matrix(nvars, rq, rb),
            bracket: PolyTensor::zeros(nvars, vec![Group::skew(rq, 2), Group::plain(rq)]),
            nabla: LinearConnection::zero(nvars, rq, rb),
            l3: PolyTensor::zeros(nvars, l3_groups(rq, rb)),
        }
    }

    pub fn nvars(&self) -> usize {
        self.anchor.nvars()
    }
    pub fn rq(&self) -> usize {
        self.anchor.rank()
    }
    pub fn rb(&self) -> usize {
        self.l1.dims()[1]
    }

    pub fn validate(&self) -> Result<()> {
        let (nv, rq, rb) = (self.nvars(), self.rq(), self.rb());
        let ok = self.l1.dims() == [rq, rb]
            && self.bracket.groups() == [Group::skew(rq, 2), Group::plain(rq)]
            && self.nabla.gamma.dims() == [rq, rb, rb]
            && self.l3.groups() == l3_groups(rq, rb).as_slice()
            && [self.l1.nvars(), self.bracket.nvars(), self.nabla.gamma.nvars(), self.l3.nvars()].iter().all(|&n| n == nv);
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension("split Lie 2-algebroid components have inconsistent shapes".into()))
        }
    }

    pub fn dull(&self) -> DullBracket {
        DullBracket::from_skew(&self.bracket)
    }
}

pub fn dorfman_from_split(s: &SplitLie2) -> Result<Dorfman2Rep> {
    s.validate()?;
    let (nv, rq, rb) = (s.nvars(), s.rq(), s.rb());
    let mut db = PolyTensor::matrix(nv, rb, rq);
    for r in 0..rb {
        for j in 0..rq {
            db.set(&[r, j], -s.l1.get(&[j, r])).unwrap();
        }
    }
    let mut r = PolyTensor::zeros(nv, r_groups(rq, rb));
    for i in 0..rq {
        for j in i + 1..rq {
            for l in 0..rb {
                for k in 0..rq {
                    r.set(&[i, j, l, k], s.l3.get(&[i, j, k, l]).clone()).unwrap();
                }
            }
        }
    }
    Ok(Dorfman2Rep { anchor: s.anchor.clone(), db, delta: s.dull().dual_dorfman(), nabla: s.nabla.clone(), r })
}

/// Inverse of [`dorfman_from_split`]; fails if the dual bracket is not skew or
/// `ω_R` is not a 3-form.
pub fn split_from_dorfman(d: &Dorfman2Rep) -> Result<SplitLie2> {
    d.validate()?;
    let (nv, rq, rb) = (d.nvars(), d.rq(), d.rb());
    let bracket = d.bracket().to_skew()?;
    let mut l1 = PolyTensor::matrix(nv, rq, rb);
    for k in 0..rq {
        for r in 0..rb {
            l1.set(&[k, r], -d.db.get(&[r, k])).unwrap();
        }
    }
    let l3 = PolyTensor::from_fn(nv, l3_groups(rq, rb), |i| d.r.get(&[i[0], i[1], i[3], i[2]]).clone())
        .map_err(|_| Error::Symmetry("ω_R is not antisymmetric in its last two arguments".into()))?;
    Ok(SplitLie2 { anchor: d.anchor.clone(), l1, bracket, nabla: d.nabla.clone(), l3 })
}

pub const ANCHOR_D1: &str = "∂_B∘Δ_q = ∇_q∘∂_B";
pub const ANCHOR_D2: &str = "[q1,q2]_Δ = −[q2,q1]_Δ";
pub const ANCHOR_D3: &str = "∇*_{∂_B*ξ1}ξ2 + ∇*_{∂_B*ξ2}ξ1 = 0";
pub const ANCHOR_D4A: &str = "∂_B∘R(q1,q2) = R_∇(q1,q2)";
pub const ANCHOR_D4B: &str = "R(q1,q2)∘∂_B = R_Δ(q1,q2)";
pub const ANCHOR_D5: &str = "R(q1,q2)*q3 = −R(q1,q3)*q2";
pub const ANCHOR_D6: &str = "d_{∇*}ω_R = 0";
pub const ANCHOR_RHO_D: &str = "ρ_Q∘∂_B* = 0";
pub const ANCHOR_RHO_BR: &str = "ρ_Q[q1,q2]_Δ = [ρ_Q q1, ρ_Q q2]";

/// Cartan differential `d_{∇*}ω` of a `B*`-valued form on `Q`, with the
/// given dull bracket.
fn d_nabla_star(
    anchor: &Anchor,
    nabla_star: &LinearConnection,
    br: &DullBracket,
    form: &dyn Fn(&[Section]) -> Section,
    args: &[Section],
) -> Section {
    cartan(args, form, &|q: &[Poly], v: &[Poly]| nabla_star.apply(anchor, q, v), &|a: &[Poly], b: &[Poly]| br.apply(anchor, a, b))
}

pub fn check_dorfman2rep(d: &Dorfman2Rep, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("Dorfman 2-representation", seed);
    let probe = Probe::new(d.nvars(), seed);
    let (rq, rb) = (d.rq(), d.rb());
    let (q, t, b, xi) = (Slot::Sec(rq, "q"), Slot::Sec(rq, "tau"), Slot::Sec(rb, "b"), Slot::Sec(rb, "beta"));
    let an = &d.anchor;
    let br = d.bracket();
    let ns = d.nabla.dual();
    let w = d.omega_tensor();
    let omega = |v: &[Section]| w.contract(&[&v[0], &v[1], &v[2]]);

    rep.push(probe.check("D1", ANCHOR_D1, &[q, t], |x| {
        sub(&d.del(&d.delta.apply(an, x[0].sec(), x[1].sec())), &d.nabla.apply(an, x[0].sec(), &d.del(x[1].sec())))
    }));
    rep.push(probe.check("D2", ANCHOR_D2, &[q, q], |x| {
        add(&br.apply(an, x[0].sec(), x[1].sec()), &br.apply(an, x[1].sec(), x[0].sec()))
    }));
    rep.push(probe.check("D3", ANCHOR_D3, &[xi, xi], |x| {
        let (x1, x2) = (x[0].sec(), x[1].sec());
        add(&ns.apply(an, &d.del_star(x1), x2), &ns.apply(an, &d.del_star(x2), x1))
    }));
    rep.push(probe.check("D4a", ANCHOR_D4A, &[q, q, b], |x| {
        let (q1, q2, bb) = (x[0].sec(), x[1].sec(), x[2].sec());
        sub(&d.del(&d.curv(q1, q2, bb)), &connection_curvature(&d.nabla, an, &br, q1, q2, bb))
    }));
    rep.push(probe.check("D4b", ANCHOR_D4B, &[q, q, t], |x| {
        let (q1, q2, tau) = (x[0].sec(), x[1].sec(), x[2].sec());
        sub(&d.curv(q1, q2, &d.del(tau)), &dorfman_curvature(&d.delta, an, &br, q1, q2, tau))
    }));
    rep.push(probe.check("D5", ANCHOR_D5, &[q, q, q], |x| {
        let v: Vec<Section> = x.iter().map(|a| a.sec().to_vec()).collect();
        add(&omega(&[v[0].clone(), v[1].clone(), v[2].clone()]), &omega(&[v[0].clone(), v[2].clone(), v[1].clone()]))
    }));
    rep.push(probe.check("D6", ANCHOR_D6, &[q, q, q, q], |x| {
        let v: Vec<Section> = x.iter().map(|a| a.sec().to_vec()).collect();
        d_nabla_star(an, &ns, &br, &omega, &v)
    }));
    rep.push(probe.check("anchor-d", ANCHOR_RHO_D, &[xi], |x| an.vector_field(&d.del_star(x[0].sec()))));
    rep.push(probe.check("anchor-bracket", ANCHOR_RHO_BR, &[q, q], |x| {
        let lhs = an.vector_field(&br.apply(an, x[0].sec(), x[1].sec()));
        sub(&lhs, &vf_bracket(&an.vector_field(x[0].sec()), &an.vector_field(x[1].sec())))
    }));
    rep
}

/// The degree 1 vector field of a Dorfman 2-representation.
pub fn build_homological_field(d: &Dorfman2Rep) -> GradedDerivation {
    let (nv, rq, rb) = (d.nvars(), d.rq(), d.rb());
    let gens = Generators { nvars: nv, rq, rb };
    let mut qf = GradedDerivation::zero(gens, 1);
    let tau = |i: usize| GradedFunction::tau(gens, i);
    for k in 0..nv {
        let row: Vec<Poly> = (0..rq).map(|i| d.anchor.m.get(&[k, i]).clone()).collect();
        qf.on_x[k] = GradedFunction::linear_tau(gens, &row);
    }
    let br = d.bracket();
    for k in 0..rq {
        let mut g = GradedFunction::zero(gens);
        for i in 0..rq {
            for j in i + 1..rq {
                let c = br.c.get(&[i, j, k]);
                if !c.is_zero() {
                    g = g.sub(&tau(i).mul(&tau(j)).mul_poly(c));
                }
            }
        }
        let col: Vec<Poly> = (0..rb).map(|r| d.db.get(&[r, k]).clone()).collect();
        qf.on_tau[k] = g.add(&GradedFunction::linear_b(gens, &col));
    }
    for l in 0..rb {
        let mut g = GradedFunction::zero(gens);
        for i in 0..rq {
            for j in i + 1..rq {
                for k in j + 1..rq {
                    let c = d.r.get(&[i, j, l, k]);
                    if !c.is_zero() {
                        g = g.sub(&tau(i).mul(&tau(j)).mul(&tau(k)).mul_poly(c));
                    }
                }
            }
        }
        for i in 0..rq {
            for j in 0..rb {
                let c = d.nabla.gamma.get(&[i, l, j]);
                if !c.is_zero() {
                    g = g.add(&tau(i).mul(&GradedFunction::b(gens, j)).mul_poly(c));
                }
            }
        }
        qf.on_b[l] = g;
    }
    qf
}

/// Which part of `Q²(generator)` encodes which axiom: (generator kind, τ count, b count, axiom label).
pub const Q2_PARTS: [(&str, u32, u16, &str); 7] = [
    ("x", 2, 0, "anchor-bracket"),
    ("x", 0, 1, "anchor-d"),
    ("tau", 3, 0, "D4b"),
    ("tau", 1, 1, "D1"),
    ("b", 4, 0, "D6"),
    ("b", 2, 1, "D4a"),
    ("b", 0, 2, "D3"),
];

/// Label of the homological entry for a generator kind and part.
pub fn q2_label(kind: &str, ntau: u32, nb: u16) -> String {
    let mut s = format!("Q²({kind}):");
    s.push_str(&"τ".repeat(ntau as usize));
    s.push_str(&"b".repeat(nb as usize));
    s
}

/// `Q(Q(g)) = 0` on every generator, split by the part each axiom controls,
/// plus the two symmetry conditions that `Q` cannot see and a random
/// degree 3 function as a sanity check of the Leibniz extension.
pub fn check_homological(d: &Dorfman2Rep, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("homological vector field", seed);
    let qf = build_homological_field(d);
    let gens = qf.gens;
    rep.push(Entry::verdict("degree", "generator images of Q have degree 1 + generator degree", qf.degrees_consistent(), None, None));
    let gen_list = |kind: &str| -> Vec<(String, GradedFunction)> {
        match kind {
            "x" => (0..gens.nvars).map(|k| (format!("x{}", k + 1), GradedFunction::x(gens, k))).collect(),
            "tau" => (0..gens.rq).map(|i| (format!("tau{}", i + 1), GradedFunction::tau(gens, i))).collect(),
            _ => (0..gens.rb).map(|r| (format!("b{}", r + 1), GradedFunction::b(gens, r))).collect(),
        }
    };
    let mut squares: Vec<(String, String, GradedFunction)> = Vec::new();
    for kind in ["x", "tau", "b"] {
        for (name, g) in gen_list(kind) {
            squares.push((kind.to_string(), name, qf.apply(&qf.apply(&g))));
        }
    }
    for (kind, ntau, nb, axiom) in Q2_PARTS {
        let mut entry = Entry::ok(&q2_label(kind, ntau, nb), &format!("Q²({kind}) part {}τ {}b vanishes ⇔ {axiom}", ntau, nb));
        entry.tuples = 0;
        for (k, name, sq) in &squares {
            if k != kind {
                continue;
            }
            entry.tuples += 1;
            let part = sq.shape(ntau, nb);
            if !part.is_zero() {
                entry.pass = false;
                entry.witness = Some(name.clone());
                entry.residual = Some(part.render());
                break;
            }
        }
        rep.push(entry);
    }
    // whatever is left over would indicate a bookkeeping error
    let leftover = squares.iter().find(|(kind, _, sq)| {
        let covered: GradedFunction = Q2_PARTS
            .iter()
            .filter(|p| p.0 == kind)
            .fold(GradedFunction::zero(gens), |acc, p| acc.add(&sq.shape(p.1, p.2)));
        !sq.sub(&covered).is_zero()
    });
    rep.push(Entry::verdict(
        "Q²:other",
        "Q² has no components outside the listed parts",
        leftover.is_none(),
        leftover.map(|l| l.1.clone()),
        leftover.map(|l| l.2.render()),
    ));

    // symmetric parts that Q cannot represent
    let (rq, rb) = (d.rq(), d.rb());
    let br = d.bracket();
    let mut d2 = Entry::ok("D2", ANCHOR_D2);
    'outer: for i in 0..rq {
        for j in 0..rq {
            for k in 0..rq {
                let s = br.c.get(&[i, j, k]) + br.c.get(&[j, i, k]);
                if !s.is_zero() {
                    d2 = Entry::verdict("D2", ANCHOR_D2, false, Some(format!("(q{},q{})", i + 1, j + 1)), Some(format!("q{}: {s}", k + 1)));
                    break 'outer;
                }
            }
        }
    }
    rep.push(d2);
    let mut d5 = Entry::ok("D5", ANCHOR_D5);
    'outer5: for i in 0..rq {
        for j in 0..rq {
            for k in 0..rq {
                for l in 0..rb {
                    let s = d.r.get(&[i, j, l, k]) + d.r.get(&[i, k, l, j]);
                    if !s.is_zero() {
                        d5 = Entry::verdict("D5", ANCHOR_D5, false, Some(format!("(q{},q{},q{})", i + 1, j + 1, k + 1)), Some(format!("b{}: {s}", l + 1)));
                        break 'outer5;
                    }
                }
            }
        }
    }
    rep.push(d5);

    let f = random_degree3(gens, seed);
    let qqf = qf.apply(&qf.apply(&f));
    rep.push(Entry::verdict(
        "Q²(f)",
        "Q² vanishes on a random degree 3 function",
        qqf.is_zero(),
        (!qqf.is_zero()).then(|| format!("f = {f}")),
        (!qqf.is_zero()).then(|| qqf.render()),
    ));
    rep
}

/// Random function of degree 3: `Σ f_ijk τ_iτ_jτ_k + Σ g_ir τ_i b_r`.
pub fn random_degree3(gens: Generators, seed: u64) -> GradedFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0d3e_5a11);
    let mut f = GradedFunction::zero(gens);
    let tau = |i: usize| GradedFunction::tau(gens, i);
    for i in 0..gens.rq {
        for j in i + 1..gens.rq {
            for k in j + 1..gens.rq {
                f = f.add(&tau(i).mul(&tau(j)).mul(&tau(k)).mul_poly(&random_poly(&mut rng, gens.nvars)));
            }
        }
        for r in 0..gens.rb {
            f = f.add(&tau(i).mul(&GradedFunction::b(gens, r)).mul_poly(&random_poly(&mut rng, gens.nvars)));
        }
    }
    f
}

/// `φ(q1,q2)` as a section of `B*`.
fn form2_eval(phi: &PolyTensor, q1: &[Poly], q2: &[Poly]) -> Section {
    phi.contract(&[q1, q2])
}

/// `⟨φ(q,·), b⟩ ∈ Q*`, component `j` = `φ(q, q_j)(b)`.
pub fn form2_partial(phi: &PolyTensor, q: &[Poly], b: &[Poly]) -> Section {
    let rq = phi.dims()[0];
    let nv = phi.nvars();
    (0..rq).map(|j| phi.contract(&[q, &frame(nv, rq, j), b]).remove(0)).collect()
}

/// Change of Lagrangian splitting by `φ ∈ Γ(Q*∧Q*⊗B*)`:
///
/// * `[q1,q2]₂ = [q1,q2]₁ + ∂_B* φ(q1,q2)`
/// * `∇²_q b = ∇¹_q b − ∂_B ⟨φ(q,·), b⟩`, and `Δ²` is dual to `[·,·]₂`
/// * `ω² = ω¹ − d_{∇²*} φ`, the differential taken with bracket 1.
pub fn change_splitting(d: &Dorfman2Rep, phi: &PolyTensor) -> Result<Dorfman2Rep> {
    d.validate()?;
    let (nv, rq, rb) = (d.nvars(), d.rq(), d.rb());
    if phi.groups() != form2_groups(rq, rb).as_slice() || phi.nvars() != nv {
        return Err(Error::Dimension("φ must be a B*-valued 2-form on Q".into()));
    }
    let br1 = d.bracket();
    let mut br2 = br1.clone();
    for i in 0..rq {
        for j in 0..rq {
            let corr = d.del_star(&form2_eval(phi, &frame(nv, rq, i), &frame(nv, rq, j)));
            for (k, c) in corr.iter().enumerate() {
                if !c.is_zero() {
                    br2.c.set(&[i, j, k], br2.c.get(&[i, j, k]) + c).unwrap();
                }
            }
        }
    }
    let mut nabla2 = d.nabla.clone();
    for i in 0..rq {
        for l in 0..rb {
            let corr = d.del(&form2_partial(phi, &frame(nv, rq, i), &frame(nv, rb, l)));
            for (k, c) in corr.iter().enumerate() {
                if !c.is_zero() {
                    nabla2.gamma.set(&[i, l, k], nabla2.gamma.get(&[i, l, k]) - c).unwrap();
                }
            }
        }
    }
    let ns2 = nabla2.dual();
    let form = |v: &[Section]| form2_eval(phi, &v[0], &v[1]);
    let mut r2 = d.r.clone();
    for i in 0..rq {
        for j in i + 1..rq {
            for k in j + 1..rq {
                let args = [frame(nv, rq, i), frame(nv, rq, j), frame(nv, rq, k)];
                let dphi = d_nabla_star(&d.anchor, &ns2, &br1, &form, &args);
                for (l, c) in dphi.iter().enumerate() {
                    if !c.is_zero() {
                        // ω(q_i,q_j,q_k)(b_l) sits at r[i,j,l,k]; keep the cyclic copies in step
                        for (a, b2, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                            let v = r2.get(&[a, b2, l, cc]) - c;
                            r2.set(&[a, b2, l, cc], v).unwrap();
                        }
                    }
                }
            }
        }
    }
    Ok(Dorfman2Rep { anchor: d.anchor.clone(), db: d.db.clone(), delta: br2.dual_dorfman(), nabla: nabla2, r: r2 })
}

/// Morphism data between split Lie 2-algebroids over the identity.
///
/// `mu_q[k][i]`: `μ_Q(q_i) = Σ_k mu_q[k][i] q'_k`; `mu_b[l][r]`: `μ_B(β_r) = Σ_l mu_b[l][r] β'_l`;
/// `mu12`: `μ_12(q_i,q_j)(b'_l)` on shape `[(rq1,2,anti),(rb2)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lie2Morphism {
    pub mu_q: PolyTensor,
    pub mu_b: PolyTensor,
    pub mu12: PolyTensor,
}

impl Lie2Morphism {
    pub fn identity(nvars: usize, rq: usize, rb: usize) -> Self {
        Lie2Morphism {
            mu_q: crate::bundle::identity_matrix(nvars, rq),
            mu_b: crate::bundle::identity_matrix(nvars, rb),
            mu12: PolyTensor::zeros(nvars, form2_groups(rq, rb)),
        }
    }
}

/// Pullback `μ*` of functions along a morphism, as an algebra map on generators.
fn pullback(m: &Lie2Morphism, g1: Generators, f: &GradedFunction) -> GradedFunction {
    let (rq1, rb1) = (g1.rq, g1.rb);
    let tau_img: Vec<GradedFunction> = (0..f.gens.rq)
        .map(|k| GradedFunction::linear_tau(g1, &(0..rq1).map(|i| m.mu_q.get(&[k, i]).clone()).collect::<Vec<_>>()))
        .collect();
    let b_img: Vec<GradedFunction> = (0..f.gens.rb)
        .map(|l| {
            let mut g = GradedFunction::linear_b(g1, &(0..rb1).map(|r| m.mu_b.get(&[l, r]).clone()).collect::<Vec<_>>());
            for i in 0..rq1 {
                for j in i + 1..rq1 {
                    let c = m.mu12.get(&[i, j, l]);
                    if !c.is_zero() {
                        g = g.add(&GradedFunction::tau(g1, i).mul(&GradedFunction::tau(g1, j)).mul_poly(c));
                    }
                }
            }
            g
        })
        .collect();
    let mut out = GradedFunction::zero(g1);
    for ((mask, exps), c) in f.terms() {
        let mut t = GradedFunction::from_poly(g1, c.clone());
        for (i, img) in tau_img.iter().enumerate() {
            if mask & (1 << i) != 0 {
                t = t.mul(img);
            }
        }
        for (l, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&b_img[l]);
            }
        }
        out = out.add(&t);
    }
    out
}

pub fn check_lie2_morphism(s1: &SplitLie2, s2: &SplitLie2, m: &Lie2Morphism, seed: u64) -> Result<CheckReport> {
    let d1 = dorfman_from_split(s1)?;
    let d2 = dorfman_from_split(s2)?;
    let (nv, rq1, rb1, rq2, rb2) = (d1.nvars(), d1.rq(), d1.rb(), d2.rq(), d2.rb());
    if d2.nvars() != nv
        || m.mu_q.dims() != [rq2, rq1]
        || m.mu_b.dims() != [rb2, rb1]
        || m.mu12.groups() != form2_groups(rq1, rb2).as_slice()
    {
        return Err(Error::Dimension("morphism components do not fit the two structures".into()));
    }
    let mut rep = CheckReport::new("morphism of split Lie 2-algebroids", seed);
    let probe = Probe::new(nv, seed);
    let (a1, a2) = (&d1.anchor, &d2.anchor);
    let (br1, br2) = (d1.bracket(), d2.bracket());
    let (q, xi, b) = (Slot::Sec(rq1, "q"), Slot::Sec(rb1, "beta"), Slot::Sec(rb2, "b'"));
    let muq = |s: &[Poly]| apply_matrix(&m.mu_q, s);
    let mub = |s: &[Poly]| apply_matrix(&m.mu_b, s);
    let mub_star = |s: &[Poly]| apply_transpose(&m.mu_b, s);

    rep.push(probe.check("M-anchor", "ρ_2∘μ_Q = ρ_1", &[q], |x| {
        sub(&a2.vector_field(&muq(x[0].sec())), &a1.vector_field(x[0].sec()))
    }));
    rep.push(probe.check("M-complex", "μ_Q∘∂_1* = ∂_2*∘μ_B", &[xi], |x| {
        sub(&muq(&d1.del_star(x[0].sec())), &d2.del_star(&mub(x[0].sec())))
    }));
    rep.push(probe.check("M-bracket", "μ_Q[q1,q2]_1 = [μ_Q q1, μ_Q q2]_2 − ∂_2* μ_12(q1,q2)", &[q, q], |x| {
        let (q1, q2) = (x[0].sec(), x[1].sec());
        let rhs = sub(&br2.apply(a2, &muq(q1), &muq(q2)), &d2.del_star(&form2_eval(&m.mu12, q1, q2)));
        sub(&muq(&br1.apply(a1, q1, q2)), &rhs)
    }));
    rep.push(probe.check("M-connection", "μ_B*(∇²_{μ_Q q} b) = ∇¹_q(μ_B* b) − ∂_1⟨μ_12(q,·), b⟩", &[q, b], |x| {
        let (qq, bb) = (x[0].sec(), x[1].sec());
        let lhs = mub_star(&d2.nabla.apply(a2, &muq(qq), bb));
        let rhs = sub(&d1.nabla.apply(a1, qq, &mub_star(bb)), &d1.del(&form2_partial(&m.mu12, qq, bb)));
        sub(&lhs, &rhs)
    }));
    let w1 = d1.omega_tensor();
    let w2 = d2.omega_tensor();
    let ns2 = d2.nabla.dual();
    rep.push(probe.check("M-curvature", "μ_Q*ω_2 − μ_B∘ω_1 = −d μ_12", &[q, q, q], |x| {
        let v: Vec<Section> = x.iter().map(|a| a.sec().to_vec()).collect();
        let lhs = sub(
            &w2.contract(&[&muq(&v[0]), &muq(&v[1]), &muq(&v[2])]),
            &mub(&w1.contract(&[&v[0], &v[1], &v[2]])),
        );
        let dmu = cartan(
            &v,
            &|u: &[Section]| form2_eval(&m.mu12, &u[0], &u[1]),
            &|qq: &[Poly], beta: &[Poly]| ns2.apply(a2, &muq(qq), beta),
            &|p: &[Poly], r: &[Poly]| br1.apply(a1, p, r),
        );
        add(&lhs, &dmu)
    }));

    // graded form: μ* intertwines the homological vector fields
    let q1f = build_homological_field(&d1);
    let q2f = build_homological_field(&d2);
    let (g1, g2) = (q1f.gens, q2f.gens);
    let mut graded = Entry::ok("M-graded", "μ*∘Q_2 = Q_1∘μ* on generators");
    graded.tuples = 0;
    let gens2: Vec<(String, GradedFunction)> = (0..nv)
        .map(|k| (format!("x{}", k + 1), GradedFunction::x(g2, k)))
        .chain((0..rq2).map(|i| (format!("tau'{}", i + 1), GradedFunction::tau(g2, i))))
        .chain((0..rb2).map(|r| (format!("b'{}", r + 1), GradedFunction::b(g2, r))))
        .collect();
    for (name, g) in gens2 {
        graded.tuples += 1;
        let lhs = pullback(m, g1, &q2f.apply(&g));
        let rhs = q1f.apply(&pullback(m, g1, &g));
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            graded.pass = false;
            graded.witness = Some(name);
            graded.residual = Some(diff.render());
            break;
        }
    }
    rep.push(graded);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::DullBracket;

    fn so3_string() -> SplitLie2 {
        let mut s = SplitLie2::zero(0, 3, 1);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            s.bracket.set(&[i, j, k], Poly::one(0)).unwrap();
        }
        s.l3.set(&[0, 1, 2, 0], Poly::one(0)).unwrap();
        s
    }

    #[test]
    fn string_structure_passes_both_checks() {
        let d = dorfman_from_split(&so3_string()).unwrap();
        let a = check_dorfman2rep(&d, 7);
        let h = check_homological(&d, 7);
        assert!(a.pass(), "{a}");
        assert!(h.pass(), "{h}");
        assert_eq!(split_from_dorfman(&d).unwrap(), so3_string());
        assert_eq!(d.bracket(), DullBracket::from_skew(&so3_string().bracket));
    }

    #[test]
    fn non_closed_three_form_fails_d6() {
        // aff(1) ⊕ R² with [q1,q2] = q2; d(τ2∧τ3∧τ4) = −τ1∧τ2∧τ3∧τ4
        let mut s = SplitLie2::zero(0, 4, 1);
        s.bracket.set(&[0, 1, 1], Poly::one(0)).unwrap();
        s.l3.set(&[1, 2, 3, 0], Poly::one(0)).unwrap();
        let d = dorfman_from_split(&s).unwrap();
        let a = check_dorfman2rep(&d, 7);
        let h = check_homological(&d, 7);
        assert_eq!(a.failed_labels(), vec!["D6"]);
        assert!(!h.passed("Q²(b):ττττ"));
        assert_eq!(h.entry("Q²(b):ττττ").unwrap().residual.as_deref(), Some("(1)·τ1τ2τ3τ4"));
    }

    #[test]
    fn change_of_splitting_is_a_morphism() {
        let d = dorfman_from_split(&so3_string()).unwrap();
        let mut phi = PolyTensor::zeros(0, form2_groups(3, 1));
        phi.set(&[0, 1, 0], Poly::int(0, 3)).unwrap();
        let d2 = change_splitting(&d, &phi).unwrap();
        assert!(check_dorfman2rep(&d2, 1).pass());
        assert!(check_homological(&d2, 1).pass());
        let back = change_splitting(&d2, &phi.scale(&crate::exactpoly::int(-1))).unwrap();
        assert_eq!(back, d);
        let m = Lie2Morphism { mu12: phi, ..Lie2Morphism::identity(0, 3, 1) };
        let rep = check_lie2_morphism(&so3_string(), &split_from_dorfman(&d2).unwrap(), &m, 1).unwrap();
        assert!(rep.pass(), "{rep}");
    }
}
