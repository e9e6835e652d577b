//! (Degenerate) Courant algebroids: the axiom checker, example generators,
//! the adjoint, standard and semidirect Dorfman 2-representations, the core
//! structure of an LA pair, Dirac conditions and the Manin-pair quotient.

use num_traits::Zero;

use crate::bundle::{
    add, apply_matrix, apply_transpose, connection_curvature, dorfman_curvature, frame, identity_matrix, mul, pair, sub, sum, vf_bracket,
    zero_sec, Anchor, DorfmanConnection, DullBracket, LieAlgebroid, LinearConnection, Section, TwoRep,
};
use crate::error::{Error, Result};
use crate::exactpoly::{Poly, Rational};
use crate::lie2::{r_groups, Dorfman2Rep};
use crate::linalg::{columns_to_matrix, det, invert_q, inverse, left_inverse, nullspace, transpose as qtranspose, complement};
use crate::matched::{check_la_matched_pair, LAPair};
use crate::poisson::SelfDual2Rep;
use crate::report::{CheckReport, Entry, Probe, Slot};
use crate::tensor::PolyTensor;

/// A bundle `E` with anchor, symmetric (possibly degenerate) pairing, bracket
/// structure functions `⟦e_i,e_j⟧ = Σ_k c[i][j][k] e_k` and the map
/// `𝒟f = Σ_k ∂_k f · Σ_i dmap[k][i] e_i`.
///
/// On arbitrary sections the bracket is `⟦fe_1, ge_2⟧` extended by the
/// second-slot Leibniz rule and `⟦fe_1,e_2⟧ = f⟦e_1,e_2⟧ − ρ(e_2)(f)e_1 + ⟨e_1,e_2⟩𝒟f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateCourant {
    pub anchor: Anchor,
    pub pairing: PolyTensor,
    pub bracket: DullBracket,
    pub dmap: PolyTensor,
}

impl DegenerateCourant {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        DegenerateCourant {
            anchor: Anchor::zero(nvars, rank),
            pairing: PolyTensor::matrix(nvars, rank, rank),
            bracket: DullBracket::zero(nvars, rank),
            dmap: PolyTensor::matrix(nvars, nvars, rank),
        }
    }

    pub fn nvars(&self) -> usize {
        self.anchor.nvars()
    }
    pub fn rank(&self) -> usize {
        self.anchor.rank()
    }

    pub fn validate(&self) -> Result<()> {
        let (nv, n) = (self.nvars(), self.rank());
        let ok = self.pairing.dims() == [n, n]
            && self.bracket.c.dims() == [n, n, n]
            && self.dmap.dims() == [nv, n]
            && [self.pairing.nvars(), self.bracket.c.nvars(), self.dmap.nvars()].iter().all(|&k| k == nv);
        if !ok {
            return Err(Error::Dimension("Courant algebroid components have inconsistent shapes".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if self.pairing.get(&[i, j]) != self.pairing.get(&[j, i]) {
                    return Err(Error::Symmetry(format!("pairing is not symmetric at (e{},e{})", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn pair(&self, a: &[Poly], b: &[Poly]) -> Poly {
        pair(a, &apply_matrix(&self.pairing, b))
    }

    pub fn d_map(&self, f: &Poly) -> Section {
        let df: Vec<Poly> = (0..self.nvars()).map(|k| f.d(k)).collect();
        apply_transpose(&self.dmap, &df)
    }

    pub fn br(&self, a: &[Poly], b: &[Poly]) -> Section {
        let n = self.rank();
        let mut out = self.bracket.apply(&self.anchor, a, b);
        for (i, ai) in a.iter().enumerate() {
            if ai.as_constant().is_none() {
                let w = self.pair(&frame(self.nvars(), n, i), b);
                if !w.is_zero() {
                    out = add(&out, &mul(&w, &self.d_map(ai)));
                }
            }
        }
        out
    }

    /// Structure functions from a bracket on frame sections.
    fn bracket_from_frames(nvars: usize, n: usize, f: impl Fn(&[Poly], &[Poly]) -> Section) -> DullBracket {
        let mut b = DullBracket::zero(nvars, n);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in f(&frame(nvars, n, i), &frame(nvars, n, j)).into_iter().enumerate() {
                    b.c.set(&[i, j, k], c).unwrap();
                }
            }
        }
        b
    }

    /// The same structure written in the frame `g_a = Σ_i f[i][a] e_i`; `f`
    /// must be invertible over the polynomial ring.
    pub fn in_frame(&self, f: &PolyTensor) -> Result<DegenerateCourant> {
        let (nv, n) = (self.nvars(), self.rank());
        if f.dims() != [n, n] {
            return Err(Error::Dimension("frame change must be square".into()));
        }
        let finv = inverse(f)?;
        let col = |a: usize| apply_matrix(f, &frame(nv, n, a));
        let bracket = Self::bracket_from_frames(nv, n, |x, y| apply_matrix(&finv, &self.br(&apply_matrix(f, x), &apply_matrix(f, y))));
        let mut pairing = PolyTensor::matrix(nv, n, n);
        for a in 0..n {
            for b in 0..n {
                pairing.set(&[a, b], self.pair(&col(a), &col(b))).unwrap();
            }
        }
        let mut dmap = PolyTensor::matrix(nv, nv, n);
        for k in 0..nv {
            let row: Section = (0..n).map(|i| self.dmap.get(&[k, i]).clone()).collect();
            for (a, c) in apply_matrix(&finv, &row).into_iter().enumerate() {
                dmap.set(&[k, a], c).unwrap();
            }
        }
        Ok(DegenerateCourant { anchor: self.anchor.compose(f), pairing, bracket, dmap })
    }

    /// Whether the pairing matrix has a nonzero constant determinant.
    pub fn is_nondegenerate(&self) -> bool {
        det(&self.pairing).as_constant().map(|c| !c.is_zero()).unwrap_or(false)
    }
}

pub fn check_courant_axioms(c: &DegenerateCourant, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("degenerate Courant algebroid", seed);
    if let Err(e) = c.validate() {
        rep.push(Entry::verdict("shapes", "symmetric pairing, consistent ranks", false, None, Some(e.to_string())));
        return rep;
    }
    let probe = Probe::new(c.nvars(), seed);
    let s = Slot::Sec(c.rank(), "e");
    rep.push(probe.check("CA1", "⟦e1,⟦e2,e3⟧⟧ = ⟦⟦e1,e2⟧,e3⟧ + ⟦e2,⟦e1,e3⟧⟧", &[s, s, s], |x| {
        let (a, b, d) = (x[0].sec(), x[1].sec(), x[2].sec());
        let l = c.br(a, &c.br(b, d));
        sub(&l, &add(&c.br(&c.br(a, b), d), &c.br(b, &c.br(a, d))))
    }));
    rep.push(probe.check("CA2", "ρ(e1)⟨e2,e3⟩ = ⟨⟦e1,e2⟧,e3⟩ + ⟨e2,⟦e1,e3⟧⟩", &[s, s, s], |x| {
        let (a, b, d) = (x[0].sec(), x[1].sec(), x[2].sec());
        let l = c.anchor.derive(a, &c.pair(b, d));
        vec![&(&l - &c.pair(&c.br(a, b), d)) - &c.pair(b, &c.br(a, d))]
    }));
    rep.push(probe.check("CA3", "⟦e1,e2⟧ + ⟦e2,e1⟧ = 𝒟⟨e1,e2⟩", &[s, s], |x| {
        let (a, b) = (x[0].sec(), x[1].sec());
        sub(&add(&c.br(a, b), &c.br(b, a)), &c.d_map(&c.pair(a, b)))
    }));
    rep.push(probe.check("CA4", "ρ⟦e1,e2⟧ = [ρe1, ρe2]", &[s, s], |x| {
        let (a, b) = (x[0].sec(), x[1].sec());
        sub(&c.anchor.vector_field(&c.br(a, b)), &vf_bracket(&c.anchor.vector_field(a), &c.anchor.vector_field(b)))
    }));
    rep.push(probe.check("CA5", "⟦e1,fe2⟧ = f⟦e1,e2⟧ + ρ(e1)(f)e2", &[s, s, Slot::Fun], |x| {
        let (a, b, f) = (x[0].sec(), x[1].sec(), x[2].fun());
        let l = c.br(a, &mul(f, b));
        sub(&l, &add(&mul(f, &c.br(a, b)), &mul(&c.anchor.derive(a, f), b)))
    }));
    rep.push(probe.check("D-compat", "⟨𝒟f, e⟩ = ρ(e)(f)", &[Slot::Fun, s], |x| {
        let (f, e) = (x[0].fun(), x[1].sec());
        vec![&c.pair(&c.d_map(f), e) - &c.anchor.derive(e, f)]
    }));
    rep.push(probe.check("anchor-D", "ρ∘𝒟 = 0", &[Slot::Fun], |x| c.anchor.vector_field(&c.d_map(x[0].fun()))));
    rep
}

/// A Lie algebra with an invariant form, as a Courant algebroid over a point
/// (or trivially over a base, with zero anchor and `𝒟 = 0`).
pub fn quadratic_lie_algebra(bracket: DullBracket, pairing: PolyTensor) -> Result<DegenerateCourant> {
    let (nv, n) = (bracket.c.nvars(), bracket.rank());
    let c = DegenerateCourant { anchor: Anchor::zero(nv, n), pairing, bracket, dmap: PolyTensor::matrix(nv, nv, n) };
    c.validate()?;
    Ok(c)
}

/// `TM⊕T*M` over `R^p` with the Dorfman bracket; frame `∂_1..∂_p, dx_1..dx_p`.
pub fn standard_courant(p: usize) -> DegenerateCourant {
    let mut c = DegenerateCourant::zero(p, 2 * p);
    for k in 0..p {
        c.anchor.m.set(&[k, k], Poly::one(p)).unwrap();
        c.pairing.set(&[k, p + k], Poly::one(p)).unwrap();
        c.pairing.set(&[p + k, k], Poly::one(p)).unwrap();
        c.dmap.set(&[k, p + k], Poly::one(p)).unwrap();
    }
    c
}

fn constant_inverse(m: &PolyTensor) -> Result<PolyTensor> {
    let n = m.dims()[0];
    let mut q = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = m.get(&[i, j]).as_constant().ok_or_else(|| Error::Precondition(format!("pairing entry ({},{}) is not constant", i + 1, j + 1)))?;
        }
    }
    let inv = invert_q(&q, n).map_err(|_| Error::Precondition("pairing is degenerate".into()))?;
    let mut out = PolyTensor::matrix(m.nvars(), n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(&[i, j], Poly::constant(m.nvars(), inv[i][j].clone())).unwrap();
        }
    }
    Ok(out)
}

/// Entry checking that a `TM`-connection on `E` preserves the pairing, on frames.
pub fn metric_entry(c: &DegenerateCourant, nabla: &LinearConnection) -> Entry {
    let (nv, n) = (c.nvars(), c.rank());
    let tangent = LieAlgebroid::tangent(nv);
    for r in 0..nv {
        let x = frame(nv, nv, r);
        for i in 0..n {
            for j in i..n {
                let (ei, ej) = (frame(nv, n, i), frame(nv, n, j));
                let l = &c.pair(&nabla.apply(&tangent.anchor, &x, &ei), &ej) + &c.pair(&ei, &nabla.apply(&tangent.anchor, &x, &ej));
                let res = &l - &c.pairing.get(&[i, j]).d(r);
                if !res.is_zero() {
                    return Entry::verdict(
                        "metric",
                        "∂_X⟨e1,e2⟩ = ⟨∇_X e1,e2⟩ + ⟨e1,∇_X e2⟩",
                        false,
                        Some(format!("(x{},e{},e{})", r + 1, i + 1, j + 1)),
                        Some(res.to_string()),
                    );
                }
            }
        }
    }
    Entry::ok("metric", "∂_X⟨e1,e2⟩ = ⟨∇_X e1,e2⟩ + ⟨e1,∇_X e2⟩")
}

/// The adjoint Dorfman 2-representation `(ρ, Δ, ∇^bas, R^bas)` of a Courant
/// algebroid with constant nondegenerate pairing and a metric `TM`-connection.
/// `Q = E` with `Q*` identified with `E` through the pairing; `B = TM`.
pub fn adjoint_dorfman2rep(c: &DegenerateCourant, nabla: &LinearConnection, seed: u64) -> Result<Dorfman2Rep> {
    let rep = check_courant_axioms(c, seed);
    if !rep.pass() {
        return Err(Error::Precondition(format!("not a Courant algebroid: {}", rep.failed_labels().join(", "))));
    }
    let (nv, n) = (c.nvars(), c.rank());
    if nabla.gamma.dims() != [nv, n, n] || nabla.gamma.nvars() != nv {
        return Err(Error::Dimension("the connection must be a TM-connection on E".into()));
    }
    let metric = metric_entry(c, nabla);
    if !metric.pass {
        return Err(Error::Precondition(format!("connection is not metric at {}", metric.witness.unwrap_or_default())));
    }
    let ginv = constant_inverse(&c.pairing)?;
    let tm = LieAlgebroid::tangent(nv);
    let beta = |v: &[Poly]| apply_matrix(&c.pairing, v);
    let beta_inv = |v: &[Poly]| apply_matrix(&ginv, v);
    let nab = |x: &[Poly], e: &[Poly]| nabla.apply(&tm.anchor, x, e);
    let rho = |e: &[Poly]| c.anchor.vector_field(e);
    let e = |i: usize| frame(nv, n, i);
    let dx = |r: usize| frame(nv, nv, r);

    let mut d = Dorfman2Rep::zero(nv, n, nv);
    d.anchor = c.anchor.clone();
    for j in 0..n {
        for (r, v) in rho(&beta_inv(&e(j))).into_iter().enumerate() {
            d.db.set(&[r, j], v).unwrap();
        }
    }
    let mut delta = DorfmanConnection::zero(nv, n);
    for i in 0..n {
        for j in 0..n {
            let ep = beta_inv(&e(j));
            let v = beta(&add(&c.br(&e(i), &ep), &nab(&rho(&ep), &e(i))));
            for (k, x) in v.into_iter().enumerate() {
                delta.d.set(&[i, j, k], x).unwrap();
            }
        }
    }
    d.delta = delta;
    let nbas = |ev: &[Poly], x: &[Poly]| add(&vf_bracket(&rho(ev), x), &rho(&nab(x, ev)));
    for i in 0..n {
        for r in 0..nv {
            for (k, v) in nbas(&e(i), &dx(r)).into_iter().enumerate() {
                d.nabla.gamma.set(&[i, r, k], v).unwrap();
            }
        }
    }
    // ⟦e,e'⟧_Δ = ⟦e,e'⟧ − β⁻¹ρ*⟨∇_·e, e'⟩
    let br_delta = |a: &[Poly], b: &[Poly]| {
        let theta: Section = (0..nv).map(|r| c.pair(&nab(&dx(r), a), b)).collect();
        sub(&c.br(a, b), &beta_inv(&apply_transpose(&c.anchor.m, &theta)))
    };
    let r_bas = |e1: &[Poly], e2: &[Poly], x: &[Poly]| {
        let theta: Section = (0..nv)
            .map(|r| c.pair(&connection_curvature(nabla, &tm.anchor, &tm.bracket, x, &dx(r), e1), e2))
            .collect();
        let terms = [
            nab(x, &br_delta(e1, e2)).into_iter().map(|p| -p).collect::<Section>(),
            br_delta(&nab(x, e1), e2),
            br_delta(e1, &nab(x, e2)),
            nab(&nbas(e2, x), e1),
            nab(&nbas(e1, x), e2).into_iter().map(|p| -p).collect(),
            beta_inv(&apply_transpose(&c.anchor.m, &theta)).into_iter().map(|p| -p).collect(),
        ];
        sum(nv, n, &terms)
    };
    d.r = PolyTensor::from_fn(nv, r_groups(n, nv), |idx| beta(&r_bas(&e(idx[0]), &e(idx[1]), &dx(idx[2])))[idx[3]].clone())
        .map_err(|e| Error::Precondition(format!("basic curvature is not skew: {e}")))?;
    Ok(d)
}

/// The self-dual partner of the adjoint representation: `TM` acting on
/// `∂_Q = β⁻¹: E* → E` through the metric connection and its curvature.
pub fn tangent_selfdual(c: &DegenerateCourant, nabla: &LinearConnection) -> Result<SelfDual2Rep> {
    let (nv, n) = (c.nvars(), c.rank());
    let ginv = constant_inverse(&c.pairing)?;
    let tm = LieAlgebroid::tangent(nv);
    let mut s = SelfDual2Rep::zero(nv, n, nv);
    s.anchor_b = tm.anchor.clone();
    s.bracket_b = tm.bracket.clone();
    s.dq = ginv;
    s.nabla = nabla.clone();
    s.rb = PolyTensor::from_fn(nv, crate::poisson::rb_groups(nv, n), |idx| {
        let (x, y) = (frame(nv, nv, idx[0]), frame(nv, nv, idx[1]));
        let v = connection_curvature(nabla, &tm.anchor, &tm.bracket, &x, &y, &frame(nv, n, idx[2]));
        c.pair(&v, &frame(nv, n, idx[3]))
    })?;
    Ok(s)
}

/// The standard Dorfman 2-representation of `(TM⊕E*, pr_TM)` on
/// `∂ = pr_E: T*M⊕E → E`. Frame of `Q`: `∂_1..∂_p, ε_1..ε_n`; dual frame
/// `dx_1..dx_p, e_1..e_n`; `B = E`.
pub fn standard_dorfman2rep(e_rank: usize, bracket: &DullBracket) -> Result<Dorfman2Rep> {
    let nv = bracket.c.nvars();
    let (p, n) = (nv, e_rank);
    if bracket.rank() != p + n {
        return Err(Error::Dimension(format!("bracket on TM⊕E* must have rank {}", p + n)));
    }
    if !bracket.is_skew() {
        return Err(Error::Precondition("dull bracket on TM⊕E* is not skew-symmetric".into()));
    }
    for i in 0..p + n {
        for j in 0..p + n {
            for k in 0..p {
                let v = bracket.c.get(&[i, j, k]);
                if !v.is_zero() {
                    return Err(Error::Precondition(format!(
                        "TM-part of ⟦q{},q{}⟧ is not the Lie bracket of vector fields (∂{} component {v})",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
    }
    let mut d = Dorfman2Rep::zero(nv, p + n, n);
    for k in 0..p {
        d.anchor.m.set(&[k, k], Poly::one(nv)).unwrap();
    }
    for a in 0..n {
        d.db.set(&[a, p + a], Poly::one(nv)).unwrap();
    }
    d.delta = bracket.dual_dorfman();
    for i in 0..p + n {
        for a in 0..n {
            for c in 0..n {
                d.nabla.gamma.set(&[i, a, c], d.delta.d.get(&[i, p + a, p + c]).clone()).unwrap();
            }
        }
    }
    let q = |i: usize| frame(nv, p + n, i);
    d.r = PolyTensor::from_fn(nv, r_groups(p + n, n), |idx| {
        dorfman_curvature(&d.delta, &d.anchor, bracket, &q(idx[0]), &q(idx[1]), &q(p + idx[2]))[idx[3]].clone()
    })?;
    Ok(d)
}

/// The Dorfman 2-representation of `A⊕C*` on `∂_B∘pr_C: A*⊕C → B` defined
/// by a 2-representation of `A` on `∂_B: C → B`. Frame of `Q`:
/// `a_1..a_ra, γ_1..γ_rc`; dual frame `α_1..α_ra, c_1..c_rc`.
pub fn semidirect_dorfman2rep(t: &TwoRep, seed: u64) -> Result<Dorfman2Rep> {
    t.validate()?;
    let rep = crate::bundle::check_two_rep(t, seed);
    if !rep.pass() {
        return Err(Error::Precondition(format!("not a 2-representation: {}", rep.failed_labels().join(", "))));
    }
    let a = &t.algebroid;
    let (nv, ra, rb, rc) = (a.nvars(), a.rank(), t.rank_b(), t.rank_c());
    let rq = ra + rc;
    let mut d = Dorfman2Rep::zero(nv, rq, rb);
    for x in 0..nv {
        for i in 0..ra {
            d.anchor.m.set(&[x, i], a.anchor.m.get(&[x, i]).clone()).unwrap();
        }
    }
    for l in 0..rb {
        for k in 0..rc {
            d.db.set(&[l, ra + k], t.d.get(&[l, k]).clone()).unwrap();
        }
    }
    let da = a.bracket.dual_dorfman();
    let gc = &t.nabla_c.gamma;
    for i in 0..ra {
        for j in 0..ra {
            for m in 0..ra {
                d.delta.d.set(&[i, j, m], da.d.get(&[i, j, m]).clone()).unwrap();
            }
        }
        for k in 0..rc {
            for m in 0..rc {
                d.delta.d.set(&[i, ra + k, ra + m], gc.get(&[i, k, m]).clone()).unwrap();
            }
        }
    }
    // Δ_{γ_k} c_{k'} = ⟨∇*_· γ_k, c_{k'}⟩ = −Γ^C[·][k'][k]
    for k in 0..rc {
        for kp in 0..rc {
            for m in 0..ra {
                d.delta.d.set(&[ra + k, ra + kp, m], -gc.get(&[m, kp, k])).unwrap();
            }
        }
    }
    for i in 0..ra {
        for l in 0..rb {
            for m in 0..rb {
                d.nabla.gamma.set(&[i, l, m], t.nabla_b.gamma.get(&[i, l, m]).clone()).unwrap();
            }
        }
    }
    // A*-part ⟨γ2,R(·,a1)b⟩ + ⟨γ1,R(a2,·)b⟩, the sign that makes R(q1,q2)*q3 totally skew
    let zero = Poly::zero(nv);
    d.r = PolyTensor::from_fn(nv, r_groups(rq, rb), |idx| {
        let (i, j, l, k) = (idx[0], idx[1], idx[2], idx[3]);
        match (i < ra, j < ra, k < ra) {
            (true, true, false) => t.r.get(&[i, j, l, k - ra]).clone(),
            (true, false, true) => t.r.get(&[k, i, l, j - ra]).clone(),
            (false, true, true) => t.r.get(&[j, k, l, i - ra]).clone(),
            _ => zero.clone(),
        }
    })?;
    Ok(d)
}

/// The degenerate Courant structure on the core `Q*` of an LA pair, in the
/// frame `τ_1..τ_rq`.
pub fn core_courant(p: &LAPair, seed: u64) -> Result<DegenerateCourant> {
    let rep = check_la_matched_pair(p, seed);
    if !rep.pass() {
        return Err(Error::Precondition(format!("not a matched pair: {}", rep.failed_labels().join(", "))));
    }
    Ok(core_courant_unchecked(p))
}

pub fn core_courant_unchecked(p: &LAPair) -> DegenerateCourant {
    let (s, d) = (&p.selfdual, &p.dorfman);
    let (nv, rq) = (d.nvars(), d.rq());
    let nstar = s.nabla.dual();
    let br = |t1: &[Poly], t2: &[Poly]| {
        sub(&d.delta.apply(&d.anchor, &apply_matrix(&s.dq, t1), t2), &nstar.apply(&s.anchor_b, &d.del(t2), t1))
    };
    DegenerateCourant {
        anchor: d.anchor.compose(&s.dq),
        pairing: s.dq.clone(),
        bracket: DegenerateCourant::bracket_from_frames(nv, rq, br),
        dmap: d.anchor.m.clone(),
    }
}

/// Axioms of the core structure plus `∂_B: Q* → B` preserving anchors and brackets.
pub fn check_core_courant(p: &LAPair, core: &DegenerateCourant, seed: u64) -> CheckReport {
    let mut rep = check_courant_axioms(core, seed);
    rep.title = "core degenerate Courant algebroid".into();
    let (s, d) = (&p.selfdual, &p.dorfman);
    let probe = Probe::new(d.nvars(), seed);
    let st = Slot::Sec(d.rq(), "tau");
    rep.push(probe.check("∂_B-anchor", "ρ_B∂_B = ρ_{Q*}", &[st], |x| {
        sub(&s.anchor_b.vector_field(&d.del(x[0].sec())), &core.anchor.vector_field(x[0].sec()))
    }));
    rep.push(probe.check("∂_B-bracket", "∂_B⟦τ1,τ2⟧ = [∂_Bτ1,∂_Bτ2]", &[st, st], |x| {
        let (t1, t2) = (x[0].sec(), x[1].sec());
        sub(&d.del(&core.br(t1, t2)), &s.bracket_b.apply(&s.anchor_b, &d.del(t1), &d.del(t2)))
    }));
    rep
}

/// Constant inclusion `U ⊆ Q` and `B' ⊆ B`, columns a frame of the subbundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracData {
    pub u: PolyTensor,
    pub bprime: PolyTensor,
}

/// A constant subbundle, its frame and a frame of its annihilator.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub nvars: usize,
    pub n: usize,
    pub basis: Vec<Vec<Rational>>,
    pub ann: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn from_inclusion(m: &PolyTensor, what: &str) -> Result<Subspace> {
        let (n, k) = (m.dims()[0], m.dims()[1]);
        let mut basis = vec![vec![Rational::zero(); n]; k];
        for i in 0..n {
            for a in 0..k {
                basis[a][i] = m.get(&[i, a]).as_constant().ok_or_else(|| Error::Precondition(format!("{what} inclusion has a non-constant entry")))?;
            }
        }
        if crate::linalg::rank(&columns_to_matrix(&basis, n), k) != k {
            return Err(Error::Precondition(format!("{what} inclusion is not of full column rank")));
        }
        Ok(Self::from_basis(m.nvars(), n, basis))
    }

    pub fn from_basis(nvars: usize, n: usize, basis: Vec<Vec<Rational>>) -> Subspace {
        let k = basis.len();
        let at = qtranspose(&columns_to_matrix(&basis, n), k);
        let ann = nullspace(&at, n);
        Subspace { nvars, n, basis, ann }
    }

    /// The annihilator as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        Subspace { nvars: self.nvars, n: self.n, basis: self.ann.clone(), ann: self.basis.clone() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    /// `Σ_a coords_a basis_a`.
    pub fn embed(&self, coords: &[Poly]) -> Section {
        let mut out = zero_sec(self.nvars, self.n);
        for (c, v) in coords.iter().zip(&self.basis) {
            let vs: Section = v.iter().map(|r| Poly::constant(self.nvars, r.clone())).collect();
            out = add(&out, &mul(c, &vs));
        }
        out
    }

    /// Pairings with the annihilator frame: zero iff `v` is a section of the subspace.
    pub fn residual(&self, v: &[Poly]) -> Section {
        self.ann.iter().map(|a| pair(&a.iter().map(|r| Poly::constant(self.nvars, r.clone())).collect::<Section>(), v)).collect()
    }

    /// Coordinates of a section known to lie in the subspace.
    pub fn coords(&self, v: &[Poly]) -> Result<Section> {
        if !self.residual(v).iter().all(Poly::is_zero) {
            return Err(Error::Precondition("section does not lie in the subbundle".into()));
        }
        let l = left_inverse(&self.basis, self.n)?;
        Ok(l.iter().map(|row| row.iter().zip(v).fold(Poly::zero(self.nvars), |acc, (r, p)| &acc + &p.scale(r))).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiracMode {
    VbDirac,
    LaSubalgebroid,
    LaDirac,
}

fn vb_entries(rep: &mut CheckReport, d: &Dorfman2Rep, u: &Subspace, bp: &Subspace, probe: &Probe) {
    let uo = u.annihilator();
    let (su, ssig, sbp) = (Slot::Sec(u.dim(), "u"), Slot::Sec(uo.dim(), "σ"), Slot::Sec(bp.dim(), "b"));
    let br = d.bracket();
    rep.push(probe.check("VB(1)", "∂_B(U°) ⊆ B'", &[ssig], |x| bp.residual(&d.del(&uo.embed(x[0].sec())))));
    rep.push(probe.check("VB(2)", "∇_u b ∈ Γ(B')", &[su, sbp], |x| {
        bp.residual(&d.nabla.apply(&d.anchor, &u.embed(x[0].sec()), &bp.embed(x[1].sec())))
    }));
    rep.push(probe.check("VB(3)", "⟦u1,u2⟧ ∈ Γ(U)", &[su, su], |x| {
        u.residual(&br.apply(&d.anchor, &u.embed(x[0].sec()), &u.embed(x[1].sec())))
    }));
    rep.push(probe.check("VB(4)", "R(u1,u2)B' ⊆ U°", &[su, su, sbp], |x| {
        uo.residual(&d.curv(&u.embed(x[0].sec()), &u.embed(x[1].sec()), &bp.embed(x[2].sec())))
    }));
}

fn sub_entries(rep: &mut CheckReport, s: &SelfDual2Rep, u: &Subspace, bp: &Subspace, probe: &Probe) {
    let uo = u.annihilator();
    let (su, ssig, sbp) = (Slot::Sec(u.dim(), "u"), Slot::Sec(uo.dim(), "σ"), Slot::Sec(bp.dim(), "b"));
    rep.push(probe.check("SUB(1)", "∂_Q(U°) ⊆ U", &[ssig], |x| u.residual(&apply_matrix(&s.dq, &uo.embed(x[0].sec())))));
    rep.push(probe.check("SUB(2)", "∇_b u ∈ Γ(U)", &[sbp, su], |x| {
        u.residual(&s.nabla.apply(&s.anchor_b, &bp.embed(x[0].sec()), &u.embed(x[1].sec())))
    }));
    rep.push(probe.check("SUB(3)", "[b1,b2] ∈ Γ(B')", &[sbp, sbp], |x| {
        bp.residual(&s.bracket_b.apply(&s.anchor_b, &bp.embed(x[0].sec()), &bp.embed(x[1].sec())))
    }));
    rep.push(probe.check("SUB(4)", "R(b1,b2)U ⊆ U°", &[sbp, sbp, su], |x| {
        let (b1, b2) = (bp.embed(x[0].sec()), bp.embed(x[1].sec()));
        uo.residual(&s.rb.contract(&[&b1, &b2, &u.embed(x[2].sec())]))
    }));
}

pub fn check_dirac(d: &Dorfman2Rep, s: Option<&SelfDual2Rep>, data: &DiracData, mode: DiracMode, seed: u64) -> Result<CheckReport> {
    let u = Subspace::from_inclusion(&data.u, "U")?;
    let bp = Subspace::from_inclusion(&data.bprime, "B'")?;
    if u.n != d.rq() || bp.n != d.rb() || data.u.nvars() != d.nvars() || data.bprime.nvars() != d.nvars() {
        return Err(Error::Dimension("Dirac data does not fit the Dorfman 2-representation".into()));
    }
    let probe = Probe::new(d.nvars(), seed);
    let mut rep = CheckReport::new("Dirac conditions", seed);
    match mode {
        DiracMode::VbDirac => vb_entries(&mut rep, d, &u, &bp, &probe),
        DiracMode::LaSubalgebroid | DiracMode::LaDirac => {
            let s = s.ok_or_else(|| Error::Precondition("LA modes need the self-dual 2-representation".into()))?;
            let pair_rep = check_la_matched_pair(&LAPair { selfdual: s.clone(), dorfman: d.clone() }, seed);
            if !pair_rep.pass() {
                return Err(Error::Precondition(format!("not a matched pair: {}", pair_rep.failed_labels().join(", "))));
            }
            if mode == DiracMode::LaDirac {
                vb_entries(&mut rep, d, &u, &bp, &probe);
            }
            sub_entries(&mut rep, s, &u, &bp, &probe);
        }
    }
    Ok(rep)
}

/// The Lie algebroid on `U` of a VB-Dirac structure with support `B`, in the
/// frame given by the columns of the inclusion.
pub fn induced_lie_algebroid_on_u(d: &Dorfman2Rep, data: &DiracData, seed: u64) -> Result<LieAlgebroid> {
    let bp = Subspace::from_inclusion(&data.bprime, "B'")?;
    if !bp.is_full() {
        return Err(Error::Precondition("the induced Lie algebroid needs B' = B".into()));
    }
    let rep = check_dirac(d, None, data, DiracMode::VbDirac, seed)?;
    if !rep.pass() {
        return Err(Error::Precondition(format!("not a VB-Dirac structure: {}", rep.failed_labels().join(", "))));
    }
    let u = Subspace::from_inclusion(&data.u, "U")?;
    let (nv, k) = (d.nvars(), u.dim());
    let br = d.bracket();
    let fu = |a: usize| u.embed(&frame(nv, k, a));
    let mut bracket = DullBracket::zero(nv, k);
    for a in 0..k {
        for b in 0..k {
            for (c, v) in u.coords(&br.apply(&d.anchor, &fu(a), &fu(b)))?.into_iter().enumerate() {
                bracket.c.set(&[a, b, c], v).unwrap();
            }
        }
    }
    let mut anchor = Anchor::zero(nv, k);
    for a in 0..k {
        for (x, v) in d.anchor.vector_field(&fu(a)).into_iter().enumerate() {
            anchor.m.set(&[x, a], v).unwrap();
        }
    }
    LieAlgebroid::new(anchor, bracket)
}

/// `𝔹 = (U⊕Q*)/graph(−∂_Q|_{U°})` realized on `U ⊕ W`, `W` the standard
/// complement of `U°` in `Q*`. Frame of `𝔹`: `(u_a, 0)` then `(0, w_b)`.
#[derive(Clone, Debug)]
pub struct ManinPairResult {
    pub courant: DegenerateCourant,
    /// Frame of `W ⊆ Q*`.
    pub complement: Vec<Vec<Rational>>,
    /// Rank of `U`, i.e. the number of leading frame sections spanning the Dirac structure.
    pub u_rank: usize,
}

pub fn manin_pair(p: &LAPair, data: &DiracData, seed: u64) -> Result<ManinPairResult> {
    let bp = Subspace::from_inclusion(&data.bprime, "B'")?;
    if !bp.is_full() {
        return Err(Error::Precondition("the Manin pair construction needs B' = B".into()));
    }
    let rep = check_dirac(&p.dorfman, Some(&p.selfdual), data, DiracMode::LaDirac, seed)?;
    if !rep.pass() {
        return Err(Error::Precondition(format!("not an LA-Dirac structure: {}", rep.failed_labels().join(", "))));
    }
    let (s, d) = (&p.selfdual, &p.dorfman);
    let (nv, rq) = (d.nvars(), d.rq());
    let u = Subspace::from_inclusion(&data.u, "U")?;
    let uo = u.annihilator();
    let w = complement(&uo.basis, rq);
    let k = u.dim();
    debug_assert_eq!(w.len(), k);
    // coordinates of τ in the basis [W | U°]
    let mut all = w.clone();
    all.extend(uo.basis.iter().cloned());
    let split = invert_q(&columns_to_matrix(&all, rq), rq)?;
    let cst = |v: &[Rational]| -> Section { v.iter().map(|r| Poly::constant(nv, r.clone())).collect() };
    let project = |uu: &[Poly], tau: &[Poly]| -> Result<Section> {
        let coeffs: Section = split.iter().map(|row| row.iter().zip(tau).fold(Poly::zero(nv), |acc, (r, p)| &acc + &p.scale(r))).collect();
        let sigma = uo.embed(&coeffs[k..]);
        let u2 = add(uu, &apply_matrix(&s.dq, &sigma));
        let mut out = u.coords(&u2)?;
        out.extend(coeffs[..k].iter().cloned());
        Ok(out)
    };
    let lift = |v: &[Poly]| -> (Section, Section) {
        let uu = u.embed(&v[..k]);
        let mut tau = zero_sec(nv, rq);
        for (c, wb) in v[k..].iter().zip(&w) {
            tau = add(&tau, &mul(c, &cst(wb)));
        }
        (uu, tau)
    };
    let core = core_courant_unchecked(p);
    let dbr = d.bracket();
    let nq = |b: &[Poly], x: &[Poly]| s.nabla.apply(&s.anchor_b, b, x);
    let bracket_b = |x: &[Poly], y: &[Poly]| -> Result<Section> {
        let ((u1, t1), (u2, t2)) = (lift(x), lift(y));
        let uu = sub(&add(&dbr.apply(&d.anchor, &u1, &u2), &nq(&d.del(&t1), &u2)), &nq(&d.del(&t2), &u1));
        let tt = add(
            &sub(&add(&core.br(&t1, &t2), &d.delta.apply(&d.anchor, &u1, &t2)), &d.delta.apply(&d.anchor, &u2, &t1)),
            &d.anchor.dual_d(&pair(&t1, &u2)),
        );
        project(&uu, &tt)
    };
    let n = 2 * k;
    let mut c = DegenerateCourant::zero(nv, n);
    for a in 0..n {
        for b in 0..n {
            let v = bracket_b(&frame(nv, n, a), &frame(nv, n, b))?;
            for (e, x) in v.into_iter().enumerate() {
                c.bracket.c.set(&[a, b, e], x).unwrap();
            }
            let ((u1, t1), (u2, t2)) = (lift(&frame(nv, n, a)), lift(&frame(nv, n, b)));
            let g = &(&pair(&u1, &t2) + &pair(&u2, &t1)) + &pair(&t1, &apply_matrix(&s.dq, &t2));
            c.pairing.set(&[a, b], g).unwrap();
        }
        let (u1, t1) = lift(&frame(nv, n, a));
        let v = add(&d.anchor.vector_field(&u1), &s.anchor_b.vector_field(&d.del(&t1)));
        for (x, val) in v.into_iter().enumerate() {
            c.anchor.m.set(&[x, a], val).unwrap();
        }
    }
    for x in 0..nv {
        let row: Section = (0..rq).map(|j| d.anchor.m.get(&[x, j]).clone()).collect();
        for (e, val) in project(&zero_sec(nv, rq), &row)?.into_iter().enumerate() {
            c.dmap.set(&[x, e], val).unwrap();
        }
    }
    if !c.is_nondegenerate() {
        return Err(Error::Precondition("the induced pairing on the quotient is degenerate".into()));
    }
    Ok(ManinPairResult { courant: c, complement: w, u_rank: k })
}

/// Courant axioms of `𝔹` plus isotropy and closedness of `U ⊆ 𝔹`.
pub fn check_manin_pair(m: &ManinPairResult, seed: u64) -> CheckReport {
    let c = &m.courant;
    let mut rep = check_courant_axioms(c, seed);
    rep.title = "Manin pair".into();
    let (nv, n, k) = (c.nvars(), c.rank(), m.u_rank);
    rep.push(Entry::verdict("nondegenerate", "det⟨·,·⟩ is a nonzero constant", c.is_nondegenerate(), None, None));
    let u_embed = |v: &[Poly]| -> Section { v.iter().cloned().chain(std::iter::repeat_n(Poly::zero(nv), n - k)).collect() };
    let probe = Probe::new(nv, seed);
    let su = Slot::Sec(k, "u");
    rep.push(probe.check("U-isotropic", "⟨u1,u2⟩ = 0", &[su, su], |x| vec![c.pair(&u_embed(x[0].sec()), &u_embed(x[1].sec()))]));
    rep.push(probe.check("U-closed", "⟦u1,u2⟧ ∈ Γ(U)", &[su, su], |x| c.br(&u_embed(x[0].sec()), &u_embed(x[1].sec()))[k..].to_vec()));
    rep.push(Entry::verdict("U-maximal", "rank U = rank 𝔹 / 2", 2 * k == n, None, None));
    rep
}

/// The identity matrix, handy as a default pairing.
pub fn identity_pairing(nvars: usize, n: usize) -> PolyTensor {
    identity_matrix(nvars, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie2::check_dorfman2rep;
    use crate::matched::check_la_matched_pair;

    fn c(nv: usize, v: i64) -> Poly {
        Poly::int(nv, v)
    }

    fn so3() -> DullBracket {
        let mut br = DullBracket::zero(0, 3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            br.c.set(&[i, j, k], c(0, 1)).unwrap();
            br.c.set(&[j, i, k], c(0, -1)).unwrap();
        }
        br
    }

    fn diag(d: [i64; 3]) -> PolyTensor {
        let mut g = PolyTensor::matrix(0, 3, 3);
        for (k, v) in d.into_iter().enumerate() {
            g.set(&[k, k], c(0, v)).unwrap();
        }
        g
    }

    /// `so(3)` acting on the core with `∂_Q` given by `d`.
    fn so3_pair(d: [i64; 3]) -> LAPair {
        let mut dorfman = Dorfman2Rep::zero(0, 3, 0);
        dorfman.delta = so3().dual_dorfman();
        let mut selfdual = SelfDual2Rep::zero(0, 3, 0);
        selfdual.dq = diag(d);
        LAPair { selfdual, dorfman }
    }

    #[test]
    fn killing_form_is_invariant_and_a_skewed_form_is_not() {
        let good = quadratic_lie_algebra(so3(), diag([1, 1, 1])).unwrap();
        assert!(check_courant_axioms(&good, 1).pass());
        let bad = quadratic_lie_algebra(so3(), diag([1, 1, 2])).unwrap();
        let rep = check_courant_axioms(&bad, 1);
        let ca2 = rep.entry("CA2").unwrap();
        assert!(!ca2.pass);
        assert_eq!(ca2.witness.as_deref(), Some("(e1,e2,e3)"));
        assert!(rep.passed("CA1") && rep.passed("CA3"));
    }

    #[test]
    fn standard_courant_bracket() {
        let e = standard_courant(1);
        assert!(check_courant_axioms(&e, 2).pass(), "{}", check_courant_axioms(&e, 2));
        let x = Poly::var(1, 0);
        // ⟦∂_x, x dx⟧ = dx and ⟦x dx, ∂_x⟧ = −dx + d(x) = 0
        assert_eq!(e.br(&[c(1, 1), c(1, 0)], &[c(1, 0), x.clone()]), vec![c(1, 0), c(1, 1)]);
        assert_eq!(e.br(&[c(1, 0), x.clone()], &[c(1, 1), c(1, 0)]), vec![c(1, 0), c(1, 0)]);
        // ⟦x ∂_x, dx⟧ = L_{x∂}dx = dx
        assert_eq!(e.br(&[x.clone(), c(1, 0)], &[c(1, 0), c(1, 1)]), vec![c(1, 0), c(1, 1)]);
    }

    /// `TM⊕T*M` over `R` with `∇_∂ ∂ = x ∂` and its dual on `T*M`.
    fn curved_connection() -> LinearConnection {
        let mut n = LinearConnection::zero(1, 1, 2);
        n.gamma.set(&[0, 0, 0], Poly::var(1, 0)).unwrap();
        n.gamma.set(&[0, 1, 1], -Poly::var(1, 0)).unwrap();
        n
    }

    #[test]
    fn adjoint_representation_is_a_dorfman_2rep() {
        let e = standard_courant(1);
        for nabla in [LinearConnection::zero(1, 1, 2), curved_connection()] {
            let d = adjoint_dorfman2rep(&e, &nabla, 3).unwrap();
            let rep = check_dorfman2rep(&d, 3);
            assert!(rep.pass(), "{rep}");
        }
        let so = quadratic_lie_algebra(so3(), diag([1, 1, 1])).unwrap();
        let d = adjoint_dorfman2rep(&so, &LinearConnection::zero(0, 0, 3), 3).unwrap();
        assert!(check_dorfman2rep(&d, 3).pass());
        // Δ_{e_i} e_j = ⟦e_i, e_j⟧ over a point
        assert_eq!(d.delta.d.get(&[0, 1, 2]), &c(0, 1));
    }

    #[test]
    fn non_metric_connection_is_rejected() {
        let e = standard_courant(1);
        let mut n = LinearConnection::zero(1, 1, 2);
        n.gamma.set(&[0, 0, 0], c(1, 1)).unwrap();
        assert!(matches!(adjoint_dorfman2rep(&e, &n, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn tangent_double_core_recovers_the_courant_algebroid() {
        for (e, nabla) in [
            (standard_courant(1), curved_connection()),
            (standard_courant(2), LinearConnection::zero(2, 2, 4)),
            (quadratic_lie_algebra(so3(), diag([1, 1, 1])).unwrap(), LinearConnection::zero(0, 0, 3)),
        ] {
            let pair = LAPair { selfdual: tangent_selfdual(&e, &nabla).unwrap(), dorfman: adjoint_dorfman2rep(&e, &nabla, 5).unwrap() };
            let rep = check_la_matched_pair(&pair, 5);
            assert!(rep.pass(), "{rep}");
            let core = core_courant(&pair, 5).unwrap();
            assert!(check_core_courant(&pair, &core, 5).pass());
            let back = core.in_frame(&inverse(&pair.selfdual.dq).unwrap()).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn standard_dorfman_2rep_of_a_twisted_bracket() {
        // Q = TM⊕E* over R, ⟦∂, ε⟧ = x ε
        let mut br = DullBracket::zero(1, 2);
        br.c.set(&[0, 1, 1], Poly::var(1, 0)).unwrap();
        br.c.set(&[1, 0, 1], -Poly::var(1, 0)).unwrap();
        let d = standard_dorfman2rep(1, &br).unwrap();
        assert!(check_dorfman2rep(&d, 6).pass(), "{}", check_dorfman2rep(&d, 6));
        // ∇_∂ e = −x e
        assert_eq!(d.nabla.gamma.get(&[0, 0, 0]), &-Poly::var(1, 0));
        br.c.set(&[1, 0, 0], c(1, 1)).unwrap();
        br.c.set(&[0, 1, 0], c(1, -1)).unwrap();
        assert!(matches!(standard_dorfman2rep(1, &br), Err(Error::Precondition(_))));
    }

    #[test]
    fn semidirect_dorfman_2reps() {
        // weight 1 on ∂ = id: C = B = R
        let mut t = TwoRep::zero(LieAlgebroid::abelian(0, 1), 1, 1);
        t.d.set(&[0, 0], c(0, 1)).unwrap();
        t.nabla_b.gamma.set(&[0, 0, 0], c(0, 1)).unwrap();
        t.nabla_c.gamma.set(&[0, 0, 0], c(0, 1)).unwrap();
        let d = semidirect_dorfman2rep(&t, 7).unwrap();
        assert!(check_dorfman2rep(&d, 7).pass(), "{}", check_dorfman2rep(&d, 7));
        // abelian R² with curvature R(a1,a2)b = c and ∂ = 0
        let mut t = TwoRep::zero(LieAlgebroid::abelian(0, 2), 1, 1);
        t.r.set(&[0, 1, 0, 0], c(0, 1)).unwrap();
        let d = semidirect_dorfman2rep(&t, 7).unwrap();
        assert!(check_dorfman2rep(&d, 7).pass(), "{}", check_dorfman2rep(&d, 7));
        // R(a1,γ)b = ⟨γ, R(a2,a1)b⟩ α_2
        assert_eq!(d.r.get(&[0, 2, 0, 1]), &c(0, -1));
        // adjoint 2-representation of so(3): ∂ = id, both connections ad
        let so = LieAlgebroid::new(Anchor::zero(0, 3), so3()).unwrap();
        let mut t = TwoRep::zero(so, 3, 3);
        t.d = identity_pairing(0, 3);
        t.nabla_b.gamma = so3().c.clone();
        t.nabla_c.gamma = so3().c.clone();
        let d = semidirect_dorfman2rep(&t, 7).unwrap();
        assert!(check_dorfman2rep(&d, 7).pass(), "{}", check_dorfman2rep(&d, 7));
    }

    fn inclusion(n: usize, cols: &[&[i64]]) -> PolyTensor {
        let mut m = PolyTensor::matrix(0, n, cols.len());
        for (a, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(&[i, a], c(0, *v)).unwrap();
            }
        }
        m
    }

    #[test]
    fn dirac_structures_in_so3() {
        let p = so3_pair([0, 0, 0]);
        let line = DiracData { u: inclusion(3, &[&[0, 0, 1]]), bprime: inclusion(0, &[]) };
        let rep = check_dirac(&p.dorfman, Some(&p.selfdual), &line, DiracMode::LaDirac, 8).unwrap();
        assert!(rep.pass(), "{rep}");
        let plane = DiracData { u: inclusion(3, &[&[1, 0, 0], &[0, 1, 0]]), bprime: inclusion(0, &[]) };
        let rep = check_dirac(&p.dorfman, None, &plane, DiracMode::VbDirac, 8).unwrap();
        let e = rep.entry("VB(3)").unwrap();
        assert!(!e.pass);
        assert_eq!(e.witness.as_deref(), Some("(u1,u2)"));
        assert!(matches!(check_dirac(&p.dorfman, None, &line, DiracMode::LaDirac, 8), Err(Error::Precondition(_))));
        let alg = induced_lie_algebroid_on_u(&p.dorfman, &line, 8).unwrap();
        assert_eq!(alg.rank(), 1);
        // a symplectic core forces U° ⊆ ∂_Q⁻¹(U), so the line fails SUB(1)
        let q = so3_pair([1, 1, 1]);
        let rep = check_dirac(&q.dorfman, Some(&q.selfdual), &line, DiracMode::LaSubalgebroid, 8).unwrap();
        assert!(!rep.passed("SUB(1)"));
    }

    #[test]
    fn manin_pairs_from_so3() {
        let p = so3_pair([0, 0, 0]);
        let full = DiracData { u: identity_pairing(0, 3), bprime: inclusion(0, &[]) };
        let m = manin_pair(&p, &full, 9).unwrap();
        assert_eq!(m.courant.rank(), 6);
        let rep = check_manin_pair(&m, 9);
        assert!(rep.pass(), "{rep}");
        // g ⋉ g*: ⟦e1,ε2⟧ = ε3 and ⟨e_i, ε_j⟩ = δ_ij
        assert_eq!(m.courant.br(&frame(0, 6, 0), &frame(0, 6, 4)), frame(0, 6, 5));
        assert_eq!(m.courant.pairing.get(&[1, 4]), &c(0, 1));
        let line = DiracData { u: inclusion(3, &[&[0, 0, 1]]), bprime: inclusion(0, &[]) };
        let m = manin_pair(&p, &line, 9).unwrap();
        assert_eq!(m.courant.rank(), 2);
        assert!(check_manin_pair(&m, 9).pass());
    }

    /// Metric connection on `TM⊕T*M` over R² induced by a torsionful, curved
    /// connection on `TM` and its dual on `T*M`.
    fn r2_connection() -> LinearConnection {
        let x = |k| Poly::var(2, k);
        let mut n = LinearConnection::zero(2, 2, 4);
        for (r, a, b, v) in [(0, 0, 1, x(1)), (1, 1, 0, c(2, 1)), (0, 1, 1, x(0))] {
            n.gamma.set(&[r, a, b], v.clone()).unwrap();
            n.gamma.set(&[r, 2 + b, 2 + a], -v).unwrap();
        }
        n
    }

    fn tangent_double(e: &DegenerateCourant, nabla: &LinearConnection) -> LAPair {
        LAPair { selfdual: tangent_selfdual(e, nabla).unwrap(), dorfman: adjoint_dorfman2rep(e, nabla, 5).unwrap() }
    }

    #[test]
    fn curved_tangent_double_over_r2_is_a_matched_pair() {
        let e = standard_courant(2);
        let n = r2_connection();
        assert!(metric_entry(&e, &n).pass);
        let p = tangent_double(&e, &n);
        let rep = check_la_matched_pair(&p, 5);
        assert!(rep.pass(), "{rep}");
        let core = core_courant(&p, 5).unwrap();
        assert_eq!(core.in_frame(&inverse(&p.selfdual.dq).unwrap()).unwrap(), e);
    }

    #[test]
    fn changing_the_metric_connection_is_a_change_of_splitting() {
        // ∇' − ∇ = φ with φ(q_i,q_j)(∂_r) = −⟨∇'_{∂_r} e_i, e_j⟩
        let e = standard_courant(2);
        let (n1, n2) = (LinearConnection::zero(2, 2, 4), r2_connection());
        let tm = LieAlgebroid::tangent(2);
        let phi = PolyTensor::from_fn(2, crate::lie2::form2_groups(4, 2), |idx| {
            -e.pair(&n2.apply(&tm.anchor, &frame(2, 2, idx[2]), &frame(2, 4, idx[0])), &frame(2, 4, idx[1]))
        })
        .unwrap();
        let changed = crate::matched::change_splitting_la_pair(&tangent_double(&e, &n1), &phi).unwrap();
        let direct = tangent_double(&e, &n2);
        assert_eq!(changed.dorfman, direct.dorfman);
        assert_eq!(changed.selfdual, direct.selfdual);
    }

    #[test]
    fn core_is_independent_of_the_splitting() {
        let x = |k| Poly::var(2, k);
        let e = standard_courant(2);
        let p = tangent_double(&e, &LinearConnection::zero(2, 2, 4));
        let core = core_courant(&p, 5).unwrap();
        let mut phis = Vec::new();
        for entries in [
            vec![([0, 1, 0], c(2, 1))],
            vec![([0, 3, 1], x(0)), ([1, 2, 0], c(2, -2))],
            vec![([2, 3, 0], &x(0) * &x(1)), ([0, 1, 1], x(1)), ([1, 3, 0], c(2, 1))],
        ] {
            let mut phi = PolyTensor::zeros(2, crate::lie2::form2_groups(4, 2));
            for (idx, v) in entries {
                phi.set(&idx, v).unwrap();
            }
            phis.push(phi);
        }
        for phi in phis {
            let q = crate::matched::change_splitting_la_pair(&p, &phi).unwrap();
            assert_ne!(q.dorfman, p.dorfman);
            assert!(check_la_matched_pair(&q, 5).pass());
            assert_eq!(core_courant(&q, 5).unwrap(), core);
        }
    }
}
