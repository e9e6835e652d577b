//! Trivialized bundles over the polynomial base: anchors, linear and Dorfman
//! connections, dull brackets, curvatures, Lie algebroids and
//! 2-representations, all in frame components.
//!
//! A section of a rank `r` bundle is its coefficient vector `Vec<Poly>` of
//! length `r` in the fixed global frame. Dual bundles use the dual frame, so
//! pairings of frame elements are constant and `⟨s, σ⟩ = Σ s_i σ_i`.

use crate::error::{Error, Result};
use crate::exactpoly::Poly;
use crate::report::{CheckReport, Probe, Slot};
use crate::tensor::{Group, PolyTensor};

pub type Section = Vec<Poly>;

pub fn zero_sec(nvars: usize, rank: usize) -> Section {
    vec![Poly::zero(nvars); rank]
}

pub fn frame(nvars: usize, rank: usize, i: usize) -> Section {
    let mut s = zero_sec(nvars, rank);
    s[i] = Poly::one(nvars);
    s
}

pub fn add(a: &[Poly], b: &[Poly]) -> Section {
    assert_eq!(a.len(), b.len(), "adding sections of different rank");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Poly], b: &[Poly]) -> Section {
    assert_eq!(a.len(), b.len(), "subtracting sections of different rank");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Poly]) -> Section {
    a.iter().map(|x| -x).collect()
}

pub fn mul(f: &Poly, a: &[Poly]) -> Section {
    a.iter().map(|x| f * x).collect()
}

pub fn pair(a: &[Poly], b: &[Poly]) -> Poly {
    assert_eq!(a.len(), b.len(), "pairing sections of different rank");
    let nv = a.first().map(Poly::nvars).unwrap_or_else(|| b.first().map(Poly::nvars).unwrap_or(0));
    let mut s = Poly::zero(nv);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

/// Sum of several sections of the same rank.
pub fn sum(nvars: usize, rank: usize, parts: &[Section]) -> Section {
    let mut s = zero_sec(nvars, rank);
    for p in parts {
        for (x, y) in s.iter_mut().zip(p) {
            *x += y;
        }
    }
    s
}

/// Matrix `m` (rows × cols) applied to a section of rank `cols`.
pub fn apply_matrix(m: &PolyTensor, s: &[Poly]) -> Section {
    let (rows, cols) = (m.dims()[0], m.dims()[1]);
    assert_eq!(s.len(), cols, "matrix applied to a section of wrong rank");
    (0..rows)
        .map(|r| {
            let mut acc = Poly::zero(m.nvars());
            for (c, x) in s.iter().enumerate() {
                let e = m.get(&[r, c]);
                if !e.is_zero() && !x.is_zero() {
                    acc += &(e * x);
                }
            }
            acc
        })
        .collect()
}

/// Transpose of `m` applied to a section of rank `rows`.
pub fn apply_transpose(m: &PolyTensor, s: &[Poly]) -> Section {
    let (rows, cols) = (m.dims()[0], m.dims()[1]);
    assert_eq!(s.len(), rows, "transpose applied to a section of wrong rank");
    (0..cols)
        .map(|c| {
            let mut acc = Poly::zero(m.nvars());
            for (r, x) in s.iter().enumerate() {
                let e = m.get(&[r, c]);
                if !e.is_zero() && !x.is_zero() {
                    acc += &(e * x);
                }
            }
            acc
        })
        .collect()
}

pub fn transpose(m: &PolyTensor) -> PolyTensor {
    let (rows, cols) = (m.dims()[0], m.dims()[1]);
    let mut t = PolyTensor::matrix(m.nvars(), cols, rows);
    for r in 0..rows {
        for c in 0..cols {
            t.set(&[c, r], m.get(&[r, c]).clone()).unwrap();
        }
    }
    t
}

pub fn matmul(a: &PolyTensor, b: &PolyTensor) -> PolyTensor {
    let (n, k, m) = (a.dims()[0], a.dims()[1], b.dims()[1]);
    assert_eq!(b.dims()[0], k, "matrix product of incompatible shapes");
    let mut out = PolyTensor::matrix(a.nvars(), n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = Poly::zero(a.nvars());
            for l in 0..k {
                acc += &(a.get(&[i, l]) * b.get(&[l, j]));
            }
            out.set(&[i, j], acc).unwrap();
        }
    }
    out
}

pub fn identity_matrix(nvars: usize, n: usize) -> PolyTensor {
    let mut m = PolyTensor::matrix(nvars, n, n);
    for i in 0..n {
        m.set(&[i, i], Poly::one(nvars)).unwrap();
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSpace {
    pub dim: usize,
    pub names: Vec<String>,
}

impl BaseSpace {
    pub fn new(dim: usize) -> Self {
        let names = match dim {
            1 => vec!["x".to_string()],
            2 => vec!["x".to_string(), "y".to_string()],
            _ => (1..=dim).map(|i| format!("x{i}")).collect(),
        };
        BaseSpace { dim, names }
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::Precondition("coordinate names must be distinct".into()));
        }
        Ok(BaseSpace { dim: names.len(), names })
    }
}

/// Vector field `X` applied to `f`.
pub fn vf_apply(x: &[Poly], f: &Poly) -> Poly {
    let mut acc = Poly::zero(f.nvars());
    for (k, xk) in x.iter().enumerate() {
        if !xk.is_zero() {
            let df = f.d(k);
            if !df.is_zero() {
                acc += &(xk * &df);
            }
        }
    }
    acc
}

/// Lie bracket of vector fields in coordinates.
pub fn vf_bracket(x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    (0..x.len()).map(|k| &vf_apply(x, &y[k]) - &vf_apply(y, &x[k])).collect()
}

/// Anchor of a trivialized bundle: `m[k][i] = ρ(e_i)(x_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub m: PolyTensor,
}

impl Anchor {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        Anchor { m: PolyTensor::matrix(nvars, nvars, rank) }
    }

    pub fn from_matrix(m: PolyTensor) -> Result<Self> {
        if m.order() != 2 || m.dims()[0] != m.nvars() {
            return Err(Error::Dimension("anchor matrix must have one row per base coordinate".into()));
        }
        Ok(Anchor { m })
    }

    pub fn nvars(&self) -> usize {
        self.m.nvars()
    }

    pub fn rank(&self) -> usize {
        self.m.dims()[1]
    }

    /// `ρ(s)` as a vector field.
    pub fn vector_field(&self, s: &[Poly]) -> Vec<Poly> {
        apply_matrix(&self.m, s)
    }

    /// `ρ(s)(f)`.
    pub fn derive(&self, s: &[Poly], f: &Poly) -> Poly {
        vf_apply(&self.vector_field(s), f)
    }

    /// `ρ(s)` applied componentwise to a section of any bundle with a constant frame.
    pub fn derive_sec(&self, s: &[Poly], t: &[Poly]) -> Section {
        let x = self.vector_field(s);
        t.iter().map(|f| vf_apply(&x, f)).collect()
    }

    /// `ρ*df` as a section of the dual bundle.
    pub fn dual_d(&self, f: &Poly) -> Section {
        let df: Vec<Poly> = (0..self.nvars()).map(|k| f.d(k)).collect();
        apply_transpose(&self.m, &df)
    }

    /// Anchor precomposed with a bundle map given by its matrix.
    pub fn compose(&self, map: &PolyTensor) -> Anchor {
        Anchor { m: matmul(&self.m, map) }
    }
}

/// Linear connection of an anchored bundle `A` on `B`:
/// `∇_{a_i} b_j = Σ_k gamma[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConnection {
    pub gamma: PolyTensor,
}

impl LinearConnection {
    pub fn zero(nvars: usize, ra: usize, rb: usize) -> Self {
        LinearConnection { gamma: PolyTensor::zeros(nvars, vec![Group::plain(ra), Group::plain(rb), Group::plain(rb)]) }
    }

    pub fn acting_rank(&self) -> usize {
        self.gamma.dims()[0]
    }

    pub fn module_rank(&self) -> usize {
        self.gamma.dims()[1]
    }

    pub fn apply(&self, anchor: &Anchor, a: &[Poly], b: &[Poly]) -> Section {
        let t = self.gamma.contract(&[a, b]);
        add(&t, &anchor.derive_sec(a, b))
    }

    /// The dual connection on the dual bundle.
    pub fn dual(&self) -> LinearConnection {
        let (ra, rb) = (self.acting_rank(), self.module_rank());
        let mut g = LinearConnection::zero(self.gamma.nvars(), ra, rb);
        for i in 0..ra {
            for j in 0..rb {
                for k in 0..rb {
                    g.gamma.set(&[i, j, k], -self.gamma.get(&[i, k, j])).unwrap();
                }
            }
        }
        g
    }
}

/// Dorfman connection of `Q` on `Q*`: `Δ_{q_i} τ_j = Σ_k d[i][j][k] τ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DorfmanConnection {
    pub d: PolyTensor,
}

impl DorfmanConnection {
    pub fn zero(nvars: usize, r: usize) -> Self {
        DorfmanConnection { d: PolyTensor::zeros(nvars, vec![Group::plain(r); 3]) }
    }

    pub fn rank(&self) -> usize {
        self.d.dims()[0]
    }

    /// `Δ_q τ = Σ q_i τ_j D_ij + ρ(q)(τ) + Σ_i τ_i ρ*d(q_i)`.
    pub fn apply(&self, anchor: &Anchor, q: &[Poly], tau: &[Poly]) -> Section {
        let mut out = add(&self.d.contract(&[q, tau]), &anchor.derive_sec(q, tau));
        for (qi, ti) in q.iter().zip(tau) {
            if !ti.is_zero() {
                let corr = mul(ti, &anchor.dual_d(qi));
                out = add(&out, &corr);
            }
        }
        out
    }

    /// The dual dull bracket: `C_ij^k = −D_ik^j`.
    pub fn dual_bracket(&self) -> DullBracket {
        let r = self.rank();
        let mut c = DullBracket::zero(self.d.nvars(), r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    c.c.set(&[i, j, k], -self.d.get(&[i, k, j])).unwrap();
                }
            }
        }
        c
    }
}

/// Dull bracket in structure functions: `⟦q_i, q_j⟧ = Σ_k c[i][j][k] q_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DullBracket {
    pub c: PolyTensor,
}

impl DullBracket {
    pub fn zero(nvars: usize, r: usize) -> Self {
        DullBracket { c: PolyTensor::zeros(nvars, vec![Group::plain(r); 3]) }
    }

    pub fn rank(&self) -> usize {
        self.c.dims()[0]
    }

    /// From antisymmetric structure constants stored on `[(r,2,anti),(r)]`.
    pub fn from_skew(t: &PolyTensor) -> DullBracket {
        let r = t.dims()[2];
        let mut b = DullBracket::zero(t.nvars(), r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    b.c.set(&[i, j, k], t.get(&[i, j, k]).clone()).unwrap();
                }
            }
        }
        b
    }

    /// Structure constants as an antisymmetric tensor; errors if not skew.
    pub fn to_skew(&self) -> Result<PolyTensor> {
        let r = self.rank();
        PolyTensor::from_fn(self.c.nvars(), vec![Group::skew(r, 2), Group::plain(r)], |i| self.c.get(i).clone())
            .map_err(|_| Error::Symmetry("dull bracket is not skew-symmetric".into()))
    }

    pub fn is_skew(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| (0..r).all(|k| (self.c.get(&[i, j, k]) + self.c.get(&[j, i, k])).is_zero())))
    }

    /// `⟦a,b⟧ = Σ a_i b_j C_ij + ρ(a)(b) − ρ(b)(a)`.
    pub fn apply(&self, anchor: &Anchor, a: &[Poly], b: &[Poly]) -> Section {
        let t = self.c.contract(&[a, b]);
        sub(&add(&t, &anchor.derive_sec(a, b)), &anchor.derive_sec(b, a))
    }

    /// The dual Dorfman connection: `D_ij^k = −C_ik^j`.
    pub fn dual_dorfman(&self) -> DorfmanConnection {
        let r = self.rank();
        let mut d = DorfmanConnection::zero(self.c.nvars(), r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    d.d.set(&[i, j, k], -self.c.get(&[i, k, j])).unwrap();
                }
            }
        }
        d
    }
}

/// Jacobiator in Leibniz form: `⟦⟦a,b⟧,c⟧ + ⟦b,⟦a,c⟧⟧ − ⟦a,⟦b,c⟧⟧`.
pub fn jacobiator(br: &DullBracket, anchor: &Anchor, a: &[Poly], b: &[Poly], c: &[Poly]) -> Section {
    let ab = br.apply(anchor, a, b);
    let ac = br.apply(anchor, a, c);
    let bc = br.apply(anchor, b, c);
    let t1 = br.apply(anchor, &ab, c);
    let t2 = br.apply(anchor, b, &ac);
    let t3 = br.apply(anchor, a, &bc);
    sub(&add(&t1, &t2), &t3)
}

/// `R_∇(a1,a2)b = ∇_{a1}∇_{a2}b − ∇_{a2}∇_{a1}b − ∇_{⟦a1,a2⟧}b`.
pub fn connection_curvature(
    conn: &LinearConnection,
    anchor: &Anchor,
    br: &DullBracket,
    a1: &[Poly],
    a2: &[Poly],
    b: &[Poly],
) -> Section {
    let t1 = conn.apply(anchor, a1, &conn.apply(anchor, a2, b));
    let t2 = conn.apply(anchor, a2, &conn.apply(anchor, a1, b));
    let t3 = conn.apply(anchor, &br.apply(anchor, a1, a2), b);
    sub(&sub(&t1, &t2), &t3)
}

/// `R_Δ(q1,q2)τ`, with the bracket supplied for the `Δ_{⟦q1,q2⟧}` term.
pub fn dorfman_curvature(
    delta: &DorfmanConnection,
    anchor: &Anchor,
    br: &DullBracket,
    q1: &[Poly],
    q2: &[Poly],
    tau: &[Poly],
) -> Section {
    let t1 = delta.apply(anchor, q1, &delta.apply(anchor, q2, tau));
    let t2 = delta.apply(anchor, q2, &delta.apply(anchor, q1, tau));
    let t3 = delta.apply(anchor, &br.apply(anchor, q1, q2), tau);
    sub(&sub(&t1, &t2), &t3)
}

/// Cartan differential of a `k`-form with values in some bundle:
/// `dω(a_0..a_k) = Σ_i (−1)^i act(a_i, ω(..â_i..)) + Σ_{i<j} (−1)^{i+j} ω(⟦a_i,a_j⟧, ..â_i..â_j..)`.
pub fn cartan(
    args: &[Section],
    form: &dyn Fn(&[Section]) -> Section,
    act: &dyn Fn(&[Poly], &[Poly]) -> Section,
    bracket: &dyn Fn(&[Poly], &[Poly]) -> Section,
) -> Section {
    let n = args.len();
    let mut acc: Option<Section> = None;
    let mut push = |v: Section, sign: bool| {
        let v = if sign { v } else { neg(&v) };
        acc = Some(match acc.take() {
            None => v,
            Some(a) => add(&a, &v),
        });
    };
    for i in 0..n {
        let rest: Vec<Section> = args.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, a)| a.clone()).collect();
        let v = act(&args[i], &form(&rest));
        push(v, i % 2 == 0);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut rest = vec![bracket(&args[i], &args[j])];
            rest.extend(args.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, a)| a.clone()));
            push(form(&rest), (i + j) % 2 == 0);
        }
    }
    acc.expect("cartan differential needs at least one argument")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebroid {
    pub anchor: Anchor,
    pub bracket: DullBracket,
}

impl LieAlgebroid {
    pub fn new(anchor: Anchor, bracket: DullBracket) -> Result<Self> {
        if anchor.rank() != bracket.rank() || anchor.nvars() != bracket.c.nvars() {
            return Err(Error::Dimension("anchor and bracket ranks differ".into()));
        }
        if !bracket.is_skew() {
            return Err(Error::Symmetry("Lie algebroid bracket must be skew-symmetric".into()));
        }
        Ok(LieAlgebroid { anchor, bracket })
    }

    /// Zero anchor and zero bracket.
    pub fn abelian(nvars: usize, rank: usize) -> Self {
        LieAlgebroid { anchor: Anchor::zero(nvars, rank), bracket: DullBracket::zero(nvars, rank) }
    }

    /// `TM` with coordinate frame, so the bracket vanishes on frames.
    pub fn tangent(nvars: usize) -> Self {
        LieAlgebroid { anchor: Anchor { m: identity_matrix(nvars, nvars) }, bracket: DullBracket::zero(nvars, nvars) }
    }

    pub fn nvars(&self) -> usize {
        self.anchor.nvars()
    }
    pub fn rank(&self) -> usize {
        self.anchor.rank()
    }

    pub fn br(&self, a: &[Poly], b: &[Poly]) -> Section {
        self.bracket.apply(&self.anchor, a, b)
    }
}

/// Anchor, skew-symmetry and Jacobi entries shared by every algebroid check.
pub fn algebroid_entries(report: &mut CheckReport, probe: &Probe, anchor: &Anchor, br: &DullBracket, sym: &'static str, prefix: &str) {
    let r = anchor.rank();
    let s = Slot::Sec(r, sym);
    report.push(probe.check(&format!("{prefix}skew"), "[a,b] + [b,a] = 0", &[s, s], |x| {
        add(&br.apply(anchor, x[0].sec(), x[1].sec()), &br.apply(anchor, x[1].sec(), x[0].sec()))
    }));
    report.push(probe.check(&format!("{prefix}anchor-bracket"), "ρ[a,b] = [ρa, ρb]", &[s, s], |x| {
        let lhs = anchor.vector_field(&br.apply(anchor, x[0].sec(), x[1].sec()));
        sub(&lhs, &vf_bracket(&anchor.vector_field(x[0].sec()), &anchor.vector_field(x[1].sec())))
    }));
    report.push(probe.check(&format!("{prefix}Jacobi"), "[[a,b],c] + [b,[a,c]] − [a,[b,c]] = 0", &[s, s, s], |x| {
        jacobiator(br, anchor, x[0].sec(), x[1].sec(), x[2].sec())
    }));
}

pub fn check_lie_algebroid(a: &LieAlgebroid, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("Lie algebroid", seed);
    let probe = Probe::new(a.nvars(), seed);
    algebroid_entries(&mut rep, &probe, &a.anchor, &a.bracket, "e", "");
    rep
}

/// Duality between a Dorfman connection and its dull bracket, and the
/// curvature/Jacobiator pairing `⟨τ, Jac(q1,q2,q3)⟩ = ⟨R_Δ(q1,q2)τ, q3⟩`.
pub fn check_dorfman_duality(anchor: &Anchor, delta: &DorfmanConnection, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("Dorfman connection and dual bracket", seed);
    let probe = Probe::new(anchor.nvars(), seed);
    let br = delta.dual_bracket();
    let r = anchor.rank();
    let (q, t) = (Slot::Sec(r, "q"), Slot::Sec(r, "tau"));
    rep.push(probe.check("duality", "⟨[q1,q2],τ⟩ + ⟨q2,Δ_{q1}τ⟩ = ρ(q1)⟨q2,τ⟩", &[q, q, t], |x| {
        let (q1, q2, tau) = (x[0].sec(), x[1].sec(), x[2].sec());
        let lhs = &pair(&br.apply(anchor, q1, q2), tau) + &pair(q2, &delta.apply(anchor, q1, tau));
        vec![&lhs - &anchor.derive(q1, &pair(q2, tau))]
    }));
    rep.push(probe.check("curvature-Jacobiator", "⟨τ, Jac(q1,q2,q3)⟩ = ⟨R_Δ(q1,q2)τ, q3⟩", &[q, q, q, t], |x| {
        let (q1, q2, q3, tau) = (x[0].sec(), x[1].sec(), x[2].sec(), x[3].sec());
        let lhs = pair(tau, &jacobiator(&br, anchor, q1, q2, q3));
        let rhs = pair(&dorfman_curvature(delta, anchor, &br, q1, q2, tau), q3);
        vec![&lhs - &rhs]
    }));
    rep
}

/// A 2-representation of a Lie algebroid `A` on the complex `∂: C → B`.
///
/// `d[l][k]` is the `b_l` component of `∂c_k`; `r[i,j,l,k]` is the `c_k`
/// component of `R(a_i,a_j)b_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRep {
    pub algebroid: LieAlgebroid,
    pub d: PolyTensor,
    pub nabla_b: LinearConnection,
    pub nabla_c: LinearConnection,
    pub r: PolyTensor,
}

impl TwoRep {
    pub fn zero(algebroid: LieAlgebroid, rb: usize, rc: usize) -> Self {
        let (nv, ra) = (algebroid.nvars(), algebroid.rank());
        TwoRep {
            d: PolyTensor::matrix(nv, rb, rc),
            nabla_b: LinearConnection::zero(nv, ra, rb),
            nabla_c: LinearConnection::zero(nv, ra, rc),
            r: PolyTensor::zeros(nv, vec![Group::skew(ra, 2), Group::plain(rb), Group::plain(rc)]),
            algebroid,
        }
    }

    pub fn rank_b(&self) -> usize {
        self.d.dims()[0]
    }
    pub fn rank_c(&self) -> usize {
        self.d.dims()[1]
    }

    pub fn validate(&self) -> Result<()> {
        let (nv, ra, rb, rc) = (self.algebroid.nvars(), self.algebroid.rank(), self.rank_b(), self.rank_c());
        let ok = self.nabla_b.gamma.dims() == [ra, rb, rb]
            && self.nabla_c.gamma.dims() == [ra, rc, rc]
            && self.r.groups() == [Group::skew(ra, 2), Group::plain(rb), Group::plain(rc)]
            && [self.d.nvars(), self.nabla_b.gamma.nvars(), self.nabla_c.gamma.nvars(), self.r.nvars()].iter().all(|&n| n == nv);
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension("2-representation components have inconsistent shapes".into()))
        }
    }

    pub fn del(&self, c: &[Poly]) -> Section {
        apply_matrix(&self.d, c)
    }

    pub fn nab_b(&self, a: &[Poly], b: &[Poly]) -> Section {
        self.nabla_b.apply(&self.algebroid.anchor, a, b)
    }

    pub fn nab_c(&self, a: &[Poly], c: &[Poly]) -> Section {
        self.nabla_c.apply(&self.algebroid.anchor, a, c)
    }

    /// `R(a1,a2)b`.
    pub fn curv(&self, a1: &[Poly], a2: &[Poly], b: &[Poly]) -> Section {
        self.r.contract(&[a1, a2, b])
    }

    /// `R(a1,a2)` as a Hom(B,C) matrix flattened row by row over `b_l`.
    fn curv_matrix(&self, a1: &[Poly], a2: &[Poly]) -> Section {
        let (nv, rb) = (self.algebroid.nvars(), self.rank_b());
        (0..rb).flat_map(|l| self.curv(a1, a2, &frame(nv, rb, l))).collect()
    }

    /// `(∇^Hom_a Φ)(b_l) = ∇^C_a(Φ b_l) − Φ(∇^B_a b_l)` on a flattened Φ.
    fn nab_hom(&self, a: &[Poly], phi: &[Poly]) -> Section {
        let (nv, rb, rc) = (self.algebroid.nvars(), self.rank_b(), self.rank_c());
        let col = |l: usize| phi[l * rc..(l + 1) * rc].to_vec();
        let mut out = Vec::with_capacity(rb * rc);
        for l in 0..rb {
            let nb = self.nab_b(a, &frame(nv, rb, l));
            let mut img = zero_sec(nv, rc);
            for (m, coeff) in nb.iter().enumerate() {
                if !coeff.is_zero() {
                    img = add(&img, &mul(coeff, &col(m)));
                }
            }
            out.extend(sub(&self.nab_c(a, &col(l)), &img));
        }
        out
    }

    /// The dual 2-representation on `∂*: B* → C*`.
    pub fn dualize(&self) -> TwoRep {
        let (nv, ra, rb, rc) = (self.algebroid.nvars(), self.algebroid.rank(), self.rank_b(), self.rank_c());
        let mut r = PolyTensor::zeros(nv, vec![Group::skew(ra, 2), Group::plain(rc), Group::plain(rb)]);
        for i in 0..ra {
            for j in i + 1..ra {
                for k in 0..rc {
                    for l in 0..rb {
                        r.set(&[i, j, k, l], -self.r.get(&[i, j, l, k])).unwrap();
                    }
                }
            }
        }
        TwoRep {
            algebroid: self.algebroid.clone(),
            d: transpose(&self.d),
            nabla_b: self.nabla_c.dual(),
            nabla_c: self.nabla_b.dual(),
            r,
        }
    }
}

pub fn check_two_rep(t: &TwoRep, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("2-representation", seed);
    let a = &t.algebroid;
    let probe = Probe::new(a.nvars(), seed);
    let (ra, rb, rc) = (a.rank(), t.rank_b(), t.rank_c());
    let (sa, sb, sc) = (Slot::Sec(ra, "a"), Slot::Sec(rb, "b"), Slot::Sec(rc, "c"));
    rep.push(probe.check("complex-map", "∂∘∇^C_a = ∇^B_a∘∂", &[sa, sc], |x| {
        sub(&t.del(&t.nab_c(x[0].sec(), x[1].sec())), &t.nab_b(x[0].sec(), &t.del(x[1].sec())))
    }));
    rep.push(probe.check("curvature-C", "R_{∇^C}(a1,a2) = R(a1,a2)∘∂", &[sa, sa, sc], |x| {
        let lhs = connection_curvature(&t.nabla_c, &a.anchor, &a.bracket, x[0].sec(), x[1].sec(), x[2].sec());
        sub(&lhs, &t.curv(x[0].sec(), x[1].sec(), &t.del(x[2].sec())))
    }));
    rep.push(probe.check("curvature-B", "R_{∇^B}(a1,a2) = ∂∘R(a1,a2)", &[sa, sa, sb], |x| {
        let lhs = connection_curvature(&t.nabla_b, &a.anchor, &a.bracket, x[0].sec(), x[1].sec(), x[2].sec());
        sub(&lhs, &t.del(&t.curv(x[0].sec(), x[1].sec(), x[2].sec())))
    }));
    rep.push(probe.check("closed-R", "d_{∇^Hom} R = 0", &[sa, sa, sa], |x| {
        let args: Vec<Section> = x.iter().map(|s| s.sec().to_vec()).collect();
        cartan(&args, &|v: &[Section]| t.curv_matrix(&v[0], &v[1]), &|p: &[Poly], phi: &[Poly]| t.nab_hom(p, phi), &|p: &[Poly], q: &[Poly]| a.br(p, q))
    }));
    rep
}

/// Dualizes a 2-representation after checking it.
pub fn dualize_two_rep(t: &TwoRep, seed: u64) -> Result<TwoRep> {
    t.validate()?;
    let rep = check_two_rep(t, seed);
    if !rep.pass() {
        return Err(Error::Precondition(format!("input is not a 2-representation: {}", rep.failed_labels().join(", "))));
    }
    Ok(t.dualize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    fn so3() -> LieAlgebroid {
        let mut c = DullBracket::zero(0, 3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c.c.set(&[i, j, k], Poly::one(0)).unwrap();
            c.c.set(&[j, i, k], Poly::int(0, -1)).unwrap();
        }
        LieAlgebroid::new(Anchor::zero(0, 3), c).unwrap()
    }

    #[test]
    fn flat_connection_reduces_to_anchor() {
        let nv = 1;
        let a = Anchor { m: identity_matrix(nv, 1) };
        let conn = LinearConnection::zero(nv, 1, 1);
        let x = Poly::var(nv, 0);
        let out = conn.apply(&a, &[Poly::one(nv)], std::slice::from_ref(&x));
        assert_eq!(out, vec![Poly::one(nv)]);
        // module linearity in the first slot
        let b = vec![&x * &x];
        assert_eq!(conn.apply(&a, std::slice::from_ref(&x), &b), mul(&x, &conn.apply(&a, &[Poly::one(nv)], &b)));
    }

    #[test]
    fn dorfman_anomalous_leibniz() {
        let nv = 1;
        let a = Anchor { m: identity_matrix(nv, 1) };
        let mut delta = DorfmanConnection::zero(nv, 1);
        delta.d.set(&[0, 0, 0], Poly::var(nv, 0)).unwrap();
        let x = Poly::var(nv, 0);
        let tau = vec![&x + &Poly::one(nv)];
        let lhs = delta.apply(&a, std::slice::from_ref(&x), &tau);
        let rhs = add(&mul(&x, &delta.apply(&a, &[Poly::one(nv)], &tau)), &mul(&pair(&[Poly::one(nv)], &tau), &a.dual_d(&x)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn so3_is_a_lie_algebra_and_doubling_is_too() {
        let g = so3();
        assert!(check_lie_algebroid(&g, 1).pass());
        let mut h = g.clone();
        h.bracket.c.set(&[0, 1, 2], Poly::int(0, 2)).unwrap();
        h.bracket.c.set(&[1, 0, 2], Poly::int(0, -2)).unwrap();
        assert!(check_lie_algebroid(&h, 1).pass());
    }

    #[test]
    fn dual_bracket_roundtrip() {
        let g = so3();
        assert_eq!(g.bracket.dual_dorfman().dual_bracket(), g.bracket);
        let rep = check_dorfman_duality(&g.anchor, &g.bracket.dual_dorfman(), 5);
        assert!(rep.pass(), "{rep}");
    }

    #[test]
    fn cartan_of_zero_form_is_connection() {
        let g = so3();
        let v = cartan(
            &[vec![Poly::one(0), Poly::zero(0), Poly::zero(0)]],
            &|_| vec![Poly::constant(0, int(3))],
            &|_, w| w.to_vec(),
            &|p, q| g.br(p, q),
        );
        assert_eq!(v, vec![Poly::int(0, 3)]);
    }
}
