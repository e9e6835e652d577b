//! Self-dual 2-representations and the degree −2 Poisson bracket they define
//! on `Q[-1] ⊕ B*[-2]`.
//!
//! Conventions: `dq[k][j]` is the `q_k` component of `∂_Q τ_j`, so
//! `{τ_i, τ_j} = dq[j][i]`; `nabla` is the `B`-connection on `Q`
//! (`∇_{b_a} q_k = Σ_m gamma[a][k][m] q_m`) and its dual acts on `Q*`;
//! `rb[a,b,k,l] = ⟨R(b_a,b_b) q_k, q_l⟩`, and as a function
//! `R(b_a,b_b) = Σ_{k<l} rb[a,b,k,l] τ_k τ_l`.

use crate::bundle::{algebroid_entries, check_two_rep, Anchor, DullBracket, LieAlgebroid, LinearConnection, TwoRep};
use crate::error::{Error, Result};
use crate::exactpoly::Poly;
use crate::graded::{key_degree, GradedDerivation, GradedFunction, Generators};
use crate::linalg::det;
use crate::report::{CheckReport, Entry, Probe};
use crate::tensor::{Group, PolyTensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDual2Rep {
    pub anchor_b: Anchor,
    pub bracket_b: DullBracket,
    pub dq: PolyTensor,
    pub nabla: LinearConnection,
    pub rb: PolyTensor,
}

pub fn rb_groups(sb: usize, rq: usize) -> Vec<Group> {
    vec![Group::skew(sb, 2), Group::plain(rq), Group::plain(rq)]
}

impl SelfDual2Rep {
    pub fn zero(nvars: usize, rq: usize, sb: usize) -> Self {
        SelfDual2Rep {
            anchor_b: Anchor::zero(nvars, sb),
            bracket_b: DullBracket::zero(nvars, sb),
            dq: PolyTensor::matrix(nvars, rq, rq),
            nabla: LinearConnection::zero(nvars, sb, rq),
            rb: PolyTensor::zeros(nvars, rb_groups(sb, rq)),
        }
    }

    pub fn nvars(&self) -> usize {
        self.anchor_b.nvars()
    }
    pub fn rq(&self) -> usize {
        self.dq.dims()[0]
    }
    pub fn sb(&self) -> usize {
        self.anchor_b.rank()
    }

    pub fn generators(&self) -> Generators {
        Generators { nvars: self.nvars(), rq: self.rq(), rb: self.sb() }
    }

    pub fn validate(&self) -> Result<()> {
        let (nv, rq, sb) = (self.nvars(), self.rq(), self.sb());
        let ok = self.bracket_b.c.dims() == [sb, sb, sb]
            && self.dq.dims() == [rq, rq]
            && self.nabla.gamma.dims() == [sb, rq, rq]
            && self.rb.groups() == rb_groups(sb, rq).as_slice()
            && [self.bracket_b.c.nvars(), self.dq.nvars(), self.nabla.gamma.nvars(), self.rb.nvars()].iter().all(|&n| n == nv);
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension("self-dual 2-representation components have inconsistent shapes".into()))
        }
    }

    /// The underlying 2-representation of `B` on `∂_Q: Q* → Q`.
    pub fn as_two_rep(&self) -> TwoRep {
        TwoRep {
            algebroid: LieAlgebroid { anchor: self.anchor_b.clone(), bracket: self.bracket_b.clone() },
            d: self.dq.clone(),
            nabla_b: self.nabla.clone(),
            nabla_c: self.nabla.dual(),
            r: self.rb.clone(),
        }
    }

    /// `R(b_a,b_b)` as a function of degree 2 (only its skew part is visible).
    pub fn r_function(&self, a: usize, b: usize) -> GradedFunction {
        let gens = self.generators();
        let mut g = GradedFunction::zero(gens);
        for k in 0..self.rq() {
            for l in k + 1..self.rq() {
                let c = self.rb.get(&[a, b, k, l]);
                if !c.is_zero() {
                    g = g.add(&GradedFunction::tau(gens, k).mul(&GradedFunction::tau(gens, l)).mul_poly(c));
                }
            }
        }
        g
    }

    /// `{c, ·}` for a base function `c`: degree −2, `b_r ↦ −ρ_B(b_r)(c)`.
    pub fn ad_poly(&self, c: &Poly) -> GradedDerivation {
        let gens = self.generators();
        let mut d = GradedDerivation::zero(gens, -2);
        for r in 0..self.sb() {
            let v = self.anchor_b.derive(&crate::bundle::frame(gens.nvars, self.sb(), r), c);
            d.on_b[r] = GradedFunction::from_poly(gens, -v);
        }
        d
    }

    /// `{τ_i, ·}`: degree −1, `τ_j ↦ ⟨τ_j, ∂_Q τ_i⟩`, `b ↦ −∇*_b τ_i`.
    pub fn ad_tau(&self, i: usize) -> GradedDerivation {
        let gens = self.generators();
        let ns = self.nabla.dual();
        let mut d = GradedDerivation::zero(gens, -1);
        for j in 0..self.rq() {
            d.on_tau[j] = GradedFunction::from_poly(gens, self.dq.get(&[j, i]).clone());
        }
        for r in 0..self.sb() {
            let row: Vec<Poly> = (0..self.rq()).map(|m| -ns.gamma.get(&[r, i, m])).collect();
            d.on_b[r] = GradedFunction::linear_tau(gens, &row);
        }
        d
    }

    /// `{b_r, ·}`: degree 0, `x ↦ ρ_B(b_r)x`, `τ ↦ ∇*_{b_r}τ`, `b_s ↦ [b_r,b_s] − R(b_r,b_s)`.
    pub fn ad_b(&self, r: usize) -> GradedDerivation {
        let gens = self.generators();
        let ns = self.nabla.dual();
        let mut d = GradedDerivation::zero(gens, 0);
        for k in 0..gens.nvars {
            d.on_x[k] = GradedFunction::from_poly(gens, self.anchor_b.m.get(&[k, r]).clone());
        }
        for j in 0..self.rq() {
            let row: Vec<Poly> = (0..self.rq()).map(|m| ns.gamma.get(&[r, j, m]).clone()).collect();
            d.on_tau[j] = GradedFunction::linear_tau(gens, &row);
        }
        for s in 0..self.sb() {
            let col: Vec<Poly> = (0..self.sb()).map(|t| self.bracket_b.c.get(&[r, s, t]).clone()).collect();
            d.on_b[s] = GradedFunction::linear_b(gens, &col).sub(&self.r_function(r, s));
        }
        d
    }
}

/// One factor of a monomial: a base coefficient or a generator.
#[derive(Clone)]
enum Factor {
    Coeff(Poly),
    Tau(usize),
    B(usize),
}

impl Factor {
    fn degree(&self) -> i64 {
        match self {
            Factor::Coeff(_) => 0,
            Factor::Tau(_) => 1,
            Factor::B(_) => 2,
        }
    }
    fn as_function(&self, gens: Generators) -> GradedFunction {
        match self {
            Factor::Coeff(c) => GradedFunction::from_poly(gens, c.clone()),
            Factor::Tau(i) => GradedFunction::tau(gens, *i),
            Factor::B(r) => GradedFunction::b(gens, *r),
        }
    }
}

fn product(gens: Generators, fs: &[Factor]) -> GradedFunction {
    fs.iter().fold(GradedFunction::one(gens), |acc, f| acc.mul(&f.as_function(gens)))
}

/// `{A·B, η} = A{B,η} + (−1)^{|B||η|}{A,η}B` with `η` homogeneous.
fn bracket_factors(s: &SelfDual2Rep, fs: &[Factor], eta: &GradedFunction, deg_eta: i64) -> GradedFunction {
    let gens = s.generators();
    let ad = |f: &Factor| match f {
        Factor::Coeff(c) => s.ad_poly(c),
        Factor::Tau(i) => s.ad_tau(*i),
        Factor::B(r) => s.ad_b(*r),
    };
    match fs {
        [] => GradedFunction::zero(gens),
        [a] => ad(a).apply(eta),
        [a, rest @ ..] => {
            let t1 = a.as_function(gens).mul(&bracket_factors(s, rest, eta, deg_eta));
            let deg_rest: i64 = rest.iter().map(Factor::degree).sum();
            let t2 = ad(a).apply(eta).mul(&product(gens, rest));
            if (deg_rest * deg_eta).rem_euclid(2) == 0 {
                t1.add(&t2)
            } else {
                t1.sub(&t2)
            }
        }
    }
}

/// The degree −2 Poisson bracket of two functions.
pub fn poisson_bracket(s: &SelfDual2Rep, xi: &GradedFunction, eta: &GradedFunction) -> Result<GradedFunction> {
    let gens = s.generators();
    if xi.gens != gens || eta.gens != gens {
        return Err(Error::Dimension("Poisson bracket of functions over other generators".into()));
    }
    let mut out = GradedFunction::zero(gens);
    let mut degrees: Vec<i64> = eta.terms().map(|(k, _)| key_degree(k)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        let part = eta.part(d);
        for ((mask, exps), c) in xi.terms() {
            let mut fs = vec![Factor::Coeff(c.clone())];
            fs.extend((0..gens.rq).filter(|i| mask & (1 << i) != 0).map(Factor::Tau));
            for (r, &e) in exps.iter().enumerate() {
                fs.extend(std::iter::repeat_n(Factor::B(r), e as usize));
            }
            out = out.add(&bracket_factors(s, &fs, &part, d));
        }
    }
    Ok(out)
}

fn generator_list(gens: Generators) -> Vec<(String, GradedFunction, i64)> {
    (0..gens.nvars)
        .map(|k| (format!("x{}", k + 1), GradedFunction::x(gens, k), 0))
        .chain((0..gens.rq).map(|i| (format!("tau{}", i + 1), GradedFunction::tau(gens, i), 1)))
        .chain((0..gens.rb).map(|r| (format!("b{}", r + 1), GradedFunction::b(gens, r), 2)))
        .collect()
}

pub fn check_selfdual2rep(s: &SelfDual2Rep, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("self-dual 2-representation", seed);
    let (rq, sb) = (s.rq(), s.sb());
    let mut sym = Entry::ok("dQ-symmetric", "∂_Q = ∂_Q*");
    'a: for i in 0..rq {
        for j in 0..rq {
            let r = s.dq.get(&[i, j]) - s.dq.get(&[j, i]);
            if !r.is_zero() {
                sym = Entry::verdict("dQ-symmetric", "∂_Q = ∂_Q*", false, Some(format!("(tau{},tau{})", j + 1, i + 1)), Some(r.to_string()));
                break 'a;
            }
        }
    }
    rep.push(sym);
    let mut skew = Entry::ok("R-skew", "R* = −R");
    'b: for a in 0..sb {
        for b in 0..sb {
            for k in 0..rq {
                for l in 0..rq {
                    let r = s.rb.get(&[a, b, k, l]) + s.rb.get(&[a, b, l, k]);
                    if !r.is_zero() {
                        skew = Entry::verdict(
                            "R-skew",
                            "R* = −R",
                            false,
                            Some(format!("(b{},b{},q{},q{})", a + 1, b + 1, k + 1, l + 1)),
                            Some(r.to_string()),
                        );
                        break 'b;
                    }
                }
            }
        }
    }
    rep.push(skew);
    let probe = Probe::new(s.nvars(), seed);
    algebroid_entries(&mut rep, &probe, &s.anchor_b, &s.bracket_b, "b", "B-");
    rep.absorb("", check_two_rep(&s.as_two_rep(), seed));
    rep
}

/// Graded Jacobi on all generator triples, graded skew-symmetry on generator
/// pairs, and whether `R_B` takes values in `Q*∧Q*` (the bracket only sees
/// that part).
pub fn check_graded_jacobi(s: &SelfDual2Rep, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("graded Poisson bracket", seed);
    let gens = s.generators();
    let list = generator_list(gens);
    let br = |a: &GradedFunction, b: &GradedFunction| poisson_bracket(s, a, b).expect("same generators");

    let mut skew = Entry::ok("skew", "{ξ,η} = −(−1)^{|ξ||η|}{η,ξ}");
    skew.tuples = 0;
    'p: for (n1, g1, d1) in &list {
        for (n2, g2, d2) in &list {
            skew.tuples += 1;
            let lhs = br(g1, g2);
            let rhs = br(g2, g1);
            let res = if (d1 * d2) % 2 == 0 { lhs.add(&rhs) } else { lhs.sub(&rhs) };
            if !res.is_zero() {
                skew.pass = false;
                skew.witness = Some(format!("({n1},{n2})"));
                skew.residual = Some(res.render());
                break 'p;
            }
        }
    }
    rep.push(skew);

    let mut jac = Entry::ok("Jacobi", "{ξ1,{ξ2,ξ3}} = {{ξ1,ξ2},ξ3} + (−1)^{|ξ1||ξ2|}{ξ2,{ξ1,ξ3}}");
    jac.tuples = 0;
    'j: for (n1, g1, d1) in &list {
        for (n2, g2, d2) in &list {
            let b12 = br(g1, g2);
            for (n3, g3, _) in &list {
                jac.tuples += 1;
                let lhs = br(g1, &br(g2, g3));
                let t1 = br(&b12, g3);
                let t2 = br(g2, &br(g1, g3));
                let rhs = if (d1 * d2) % 2 == 0 { t1.add(&t2) } else { t1.sub(&t2) };
                let res = lhs.sub(&rhs);
                if !res.is_zero() {
                    jac.pass = false;
                    jac.witness = Some(format!("({n1},{n2},{n3})"));
                    jac.residual = Some(res.render());
                    break 'j;
                }
            }
        }
    }
    rep.push(jac);

    let (rq, sb) = (s.rq(), s.sb());
    let mut repr = Entry::ok("R-values", "R_B takes values in Q*∧Q*");
    'r: for a in 0..sb {
        for b in 0..sb {
            for k in 0..rq {
                for l in k..rq {
                    let r = s.rb.get(&[a, b, k, l]) + s.rb.get(&[a, b, l, k]);
                    if !r.is_zero() {
                        repr = Entry::verdict(
                            "R-values",
                            "R_B takes values in Q*∧Q*",
                            false,
                            Some(format!("(b{},b{},q{},q{})", a + 1, b + 1, k + 1, l + 1)),
                            Some(r.to_string()),
                        );
                        break 'r;
                    }
                }
            }
        }
    }
    rep.push(repr);
    rep
}

/// Symplectic iff `ρ_B: B → TM` and `∂_Q: Q* → Q` are isomorphisms, which
/// over the polynomial ring means square with nonzero constant determinant.
pub fn is_symplectic(s: &SelfDual2Rep) -> bool {
    let nonzero_const = |m: &PolyTensor| det(m).as_constant().map(|c| c != num_traits::Zero::zero()).unwrap_or(false);
    s.sb() == s.nvars() && nonzero_const(&s.anchor_b.m) && nonzero_const(&s.dq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::identity_matrix;

    /// `E = R²` over R¹ with the flat metric connection, `B = TM`.
    fn euclidean() -> SelfDual2Rep {
        let mut s = SelfDual2Rep::zero(1, 2, 1);
        s.anchor_b.m = identity_matrix(1, 1);
        s.dq = identity_matrix(1, 2);
        s
    }

    #[test]
    fn euclidean_example() {
        let s = euclidean();
        assert!(check_selfdual2rep(&s, 3).pass());
        assert!(check_graded_jacobi(&s, 3).pass());
        assert!(is_symplectic(&s));
        let g = s.generators();
        let v = poisson_bracket(&s, &GradedFunction::tau(g, 0), &GradedFunction::tau(g, 1)).unwrap();
        assert!(v.is_zero());
        let v = poisson_bracket(&s, &GradedFunction::tau(g, 0), &GradedFunction::tau(g, 0)).unwrap();
        assert_eq!(v, GradedFunction::one(g));
    }

    #[test]
    fn leibniz_in_second_slot() {
        let mut s = euclidean();
        // a nonzero connection: ∇_{∂x} q1 = q2, ∇_{∂x} q2 = −q1 (metric)
        s.nabla.gamma.set(&[0, 0, 1], Poly::one(1)).unwrap();
        s.nabla.gamma.set(&[0, 1, 0], Poly::int(1, -1)).unwrap();
        let g = s.generators();
        let x = Poly::var(1, 0);
        let lhs = poisson_bracket(&s, &GradedFunction::b(g, 0), &GradedFunction::tau(g, 0).mul_poly(&x)).unwrap();
        let nab = poisson_bracket(&s, &GradedFunction::b(g, 0), &GradedFunction::tau(g, 0)).unwrap();
        let rhs = nab.mul_poly(&x).add(&GradedFunction::tau(g, 0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_symmetric_dq_fails_both() {
        let mut s = euclidean();
        s.dq.set(&[0, 1], Poly::one(1)).unwrap();
        assert!(!check_selfdual2rep(&s, 3).passed("dQ-symmetric"));
        assert!(!check_graded_jacobi(&s, 3).pass());
    }
}
