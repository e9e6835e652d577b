//! Functions on the split [2]-manifold `Q[-1] ⊕ B*[-2]`: polynomials in the
//! base coordinates tensored with the exterior algebra on `τ_1..τ_rq`
//! (degree 1) and the symmetric algebra on `b_1..b_rb` (degree 2).
//!
//! A monomial is keyed by the set of its `τ` generators (a bitmask, read in
//! increasing order) and the exponent vector of its `b` generators.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactpoly::{Poly, Rational};

pub type Key = (u64, Vec<u16>);

/// Generator set of the graded algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generators {
    pub nvars: usize,
    pub rq: usize,
    pub rb: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedFunction {
    pub gens: Generators,
    terms: BTreeMap<Key, Poly>,
}

/// Sign of `τ_A · τ_B` brought to increasing order, or `None` on overlap.
fn tau_sign(a: u64, b: u64) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    // count pairs (i in A, j in B) with i > j
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inv += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(inv.is_multiple_of(2))
}

pub fn key_degree(k: &Key) -> i64 {
    k.0.count_ones() as i64 + 2 * k.1.iter().map(|&e| e as i64).sum::<i64>()
}

impl GradedFunction {
    pub fn zero(gens: Generators) -> Self {
        GradedFunction { gens, terms: BTreeMap::new() }
    }

    pub fn from_poly(gens: Generators, f: Poly) -> Self {
        let mut g = Self::zero(gens);
        g.add_term((0, vec![0; gens.rb]), f);
        g
    }

    pub fn one(gens: Generators) -> Self {
        Self::from_poly(gens, Poly::one(gens.nvars))
    }

    pub fn x(gens: Generators, k: usize) -> Self {
        Self::from_poly(gens, Poly::var(gens.nvars, k))
    }

    pub fn tau(gens: Generators, i: usize) -> Self {
        let mut g = Self::zero(gens);
        g.add_term((1 << i, vec![0; gens.rb]), Poly::one(gens.nvars));
        g
    }

    pub fn b(gens: Generators, r: usize) -> Self {
        let mut e = vec![0; gens.rb];
        e[r] = 1;
        let mut g = Self::zero(gens);
        g.add_term((0, e), Poly::one(gens.nvars));
        g
    }

    /// `Σ_i s_i τ_i` for a section `s` of `Q*`.
    pub fn linear_tau(gens: Generators, s: &[Poly]) -> Self {
        let mut g = Self::zero(gens);
        for (i, c) in s.iter().enumerate() {
            g.add_term((1 << i, vec![0; gens.rb]), c.clone());
        }
        g
    }

    /// `Σ_r s_r b_r` for a section `s` of `B`.
    pub fn linear_b(gens: Generators, s: &[Poly]) -> Self {
        let mut g = Self::zero(gens);
        for (r, c) in s.iter().enumerate() {
            let mut e = vec![0; gens.rb];
            e[r] = 1;
            g.add_term((0, e), c.clone());
        }
        g
    }

    pub fn add_term(&mut self, key: Key, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &Key) -> Poly {
        self.terms.get(key).cloned().unwrap_or_else(|| Poly::zero(self.gens.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous (zero counts as homogeneous of any degree: `None`).
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(key_degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|k| key_degree(k) == d)
    }

    /// Part of degree `d`.
    pub fn part(&self, d: i64) -> Self {
        let mut g = Self::zero(self.gens);
        for (k, c) in &self.terms {
            if key_degree(k) == d {
                g.terms.insert(k.clone(), c.clone());
            }
        }
        g
    }

    /// Sub-sum of the terms with the given `τ` count and `b` count.
    pub fn shape(&self, ntau: u32, nb: u16) -> Self {
        let mut g = Self::zero(self.gens);
        for (k, c) in &self.terms {
            if k.0.count_ones() == ntau && k.1.iter().sum::<u16>() == nb {
                g.terms.insert(k.clone(), c.clone());
            }
        }
        g
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.gens, o.gens, "graded functions over different generators");
        let mut g = self.clone();
        for (k, c) in &o.terms {
            g.add_term(k.clone(), c.clone());
        }
        g
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let mut g = self.clone();
        for c in g.terms.values_mut() {
            *c = -&*c;
        }
        g
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut g = Self::zero(self.gens);
        for (k, c) in &self.terms {
            g.add_term(k.clone(), c.scale(r));
        }
        g
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        let mut g = Self::zero(self.gens);
        for (k, c) in &self.terms {
            g.add_term(k.clone(), c * f);
        }
        g
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.gens, o.gens, "graded functions over different generators");
        let mut g = Self::zero(self.gens);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let Some(pos) = tau_sign(ka.0, kb.0) else { continue };
                let e: Vec<u16> = ka.1.iter().zip(&kb.1).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                g.add_term((ka.0 | kb.0, e), if pos { c } else { -c });
            }
        }
        g
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut m = String::new();
                for i in 0..64 {
                    if k.0 & (1 << i) != 0 {
                        m.push_str(&format!("τ{}", i + 1));
                    }
                }
                for (r, &e) in k.1.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => m.push_str(&format!("b{}", r + 1)),
                        _ => m.push_str(&format!("b{}^{}", r + 1, e)),
                    }
                }
                if m.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})·{m}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for GradedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for GradedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A derivation of degree `degree`, given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDerivation {
    pub gens: Generators,
    pub degree: i64,
    pub on_x: Vec<GradedFunction>,
    pub on_tau: Vec<GradedFunction>,
    pub on_b: Vec<GradedFunction>,
}

impl GradedDerivation {
    pub fn zero(gens: Generators, degree: i64) -> Self {
        let z = GradedFunction::zero(gens);
        GradedDerivation {
            gens,
            degree,
            on_x: vec![z.clone(); gens.nvars],
            on_tau: vec![z.clone(); gens.rq],
            on_b: vec![z; gens.rb],
        }
    }

    /// Whether every generator image has the degree the derivation demands.
    pub fn degrees_consistent(&self) -> bool {
        let d = self.degree;
        self.on_x.iter().all(|g| g.is_homogeneous_of(d))
            && self.on_tau.iter().all(|g| g.is_homogeneous_of(d + 1))
            && self.on_b.iter().all(|g| g.is_homogeneous_of(d + 2))
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees_consistent() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("generator images are not of degree {} + generator degree", self.degree)))
        }
    }

    /// Value on a base function.
    fn on_poly(&self, f: &Poly) -> GradedFunction {
        let mut g = GradedFunction::zero(self.gens);
        for (k, img) in self.on_x.iter().enumerate() {
            let df = f.d(k);
            if !df.is_zero() && !img.is_zero() {
                g = g.add(&img.mul_poly(&df));
            }
        }
        g
    }

    /// Extension to all functions by the graded Leibniz rule.
    pub fn apply(&self, f: &GradedFunction) -> GradedFunction {
        assert_eq!(self.gens, f.gens, "derivation applied over different generators");
        let gens = self.gens;
        let odd = self.degree.rem_euclid(2) == 1;
        let mut out = GradedFunction::zero(gens);
        for ((mask, exps), c) in f.terms() {
            let taus: Vec<usize> = (0..gens.rq).filter(|&i| mask & (1 << i) != 0).collect();
            let tau_mono = GradedFunction { gens, terms: BTreeMap::from([((*mask, vec![0; gens.rb]), Poly::one(gens.nvars))]) };
            let b_mono = GradedFunction { gens, terms: BTreeMap::from([((0, exps.clone()), Poly::one(gens.nvars))]) };
            // φ(c)·τ_I·b^e
            let dc = self.on_poly(c);
            if !dc.is_zero() {
                out = out.add(&dc.mul(&tau_mono).mul(&b_mono));
            }
            // c·τ_{<m}·φ(τ_m)·τ_{>m}·b^e with sign (−1)^{|φ|·m}
            for (m, &i) in taus.iter().enumerate() {
                let img = &self.on_tau[i];
                if img.is_zero() {
                    continue;
                }
                let before: u64 = taus[..m].iter().map(|&t| 1u64 << t).sum();
                let after: u64 = taus[m + 1..].iter().map(|&t| 1u64 << t).sum();
                let left = GradedFunction { gens, terms: BTreeMap::from([((before, vec![0; gens.rb]), c.clone())]) };
                let right = GradedFunction { gens, terms: BTreeMap::from([((after, exps.clone()), Poly::one(gens.nvars))]) };
                let t = left.mul(img).mul(&right);
                out = if odd && m % 2 == 1 { out.sub(&t) } else { out.add(&t) };
            }
            // c·τ_I·Σ_r e_r b^{e−1_r} φ(b_r), sign (−1)^{|φ|·|I|}
            for (r, &e) in exps.iter().enumerate() {
                if e == 0 || self.on_b[r].is_zero() {
                    continue;
                }
                let mut lower = exps.clone();
                lower[r] -= 1;
                let left = GradedFunction { gens, terms: BTreeMap::from([((*mask, lower), c.scale_int(e as i64))]) };
                let t = left.mul(&self.on_b[r]);
                out = if odd && taus.len() % 2 == 1 { out.sub(&t) } else { out.add(&t) };
            }
        }
        out
    }

    /// Composition `φ∘ψ` evaluated on a function.
    pub fn apply_twice(&self, other: &GradedDerivation, f: &GradedFunction) -> GradedFunction {
        self.apply(&other.apply(f))
    }
}

/// `[φ,ψ] = φψ − (−1)^{|φ||ψ|} ψφ`, determined by its generator values.
pub fn graded_commutator(phi: &GradedDerivation, psi: &GradedDerivation) -> Result<GradedDerivation> {
    if phi.gens != psi.gens {
        return Err(Error::Dimension("commutator of derivations over different generators".into()));
    }
    let gens = phi.gens;
    let even = (phi.degree * psi.degree).rem_euclid(2) == 0;
    let val = |g: &GradedFunction| {
        let a = phi.apply(&psi.apply(g));
        let b = psi.apply(&phi.apply(g));
        if even {
            a.sub(&b)
        } else {
            a.add(&b)
        }
    };
    Ok(GradedDerivation {
        gens,
        degree: phi.degree + psi.degree,
        on_x: (0..gens.nvars).map(|k| val(&GradedFunction::x(gens, k))).collect(),
        on_tau: (0..gens.rq).map(|i| val(&GradedFunction::tau(gens, i))).collect(),
        on_b: (0..gens.rb).map(|r| val(&GradedFunction::b(gens, r))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: Generators = Generators { nvars: 1, rq: 3, rb: 1 };

    #[test]
    fn tau_anticommute() {
        let t1 = GradedFunction::tau(G, 0);
        let t2 = GradedFunction::tau(G, 1);
        assert_eq!(t1.mul(&t2), t2.mul(&t1).neg());
        assert!(t1.mul(&t1).is_zero());
        let t3 = GradedFunction::tau(G, 2);
        assert_eq!(t3.mul(&t1).mul(&t2), t1.mul(&t2).mul(&t3));
    }

    #[test]
    fn odd_partial_squares_to_zero() {
        let mut d = GradedDerivation::zero(G, -1);
        d.on_tau[0] = GradedFunction::one(G);
        let c = graded_commutator(&d, &d).unwrap();
        let f = GradedFunction::tau(G, 0).mul(&GradedFunction::tau(G, 1)).mul(&GradedFunction::x(G, 0));
        assert!(c.apply(&f).is_zero());
        assert!(d.apply(&d.apply(&f)).is_zero());
    }

    #[test]
    fn leibniz_sign_on_products() {
        // φ = ∂_{τ2}: φ(τ1τ2) = −τ1
        let mut d = GradedDerivation::zero(G, -1);
        d.on_tau[1] = GradedFunction::one(G);
        let f = GradedFunction::tau(G, 0).mul(&GradedFunction::tau(G, 1));
        assert_eq!(d.apply(&f), GradedFunction::tau(G, 0).neg());
    }
}
