//! Named example structures, deliberately broken variants, and the
//! dispatcher that runs the designated checker for a structure file.

use crate::bundle::{check_lie_algebroid, check_two_rep, identity_matrix, Anchor, DullBracket, LieAlgebroid, LinearConnection, TwoRep};
use crate::courant::{check_courant_axioms, check_dirac, quadratic_lie_algebra, standard_courant, tangent_selfdual, adjoint_dorfman2rep, DegenerateCourant, DiracData, DiracMode};
use crate::error::{Error, Result};
use crate::exactpoly::Poly;
use crate::lie2::{change_splitting, check_dorfman2rep, check_homological, check_lie2_morphism, dorfman_from_split, form2_groups, Dorfman2Rep, SplitLie2};
use crate::matched::{bicrossproduct, check_la_matched_pair, check_matched_two_reps, check_q_preserves_poisson, decompose_bicrossproduct, LAPair, MatchedPair2Reps};
use crate::poisson::{check_graded_jacobi, check_selfdual2rep, SelfDual2Rep};
use crate::report::CheckReport;
use crate::schema::{DiracFile, Structure, StructureFile};
use crate::tensor::PolyTensor;

fn k(nv: usize, v: i64) -> Poly {
    Poly::int(nv, v)
}

/// `so(3)` structure constants `[e_i,e_j] = ε_ijk e_k` over a base of dimension `nv`.
pub fn so3_bracket(nv: usize) -> DullBracket {
    let mut br = DullBracket::zero(nv, 3);
    for (i, j, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        br.c.set(&[i, j, l], k(nv, 1)).unwrap();
        br.c.set(&[j, i, l], k(nv, -1)).unwrap();
    }
    br
}

fn diag(nv: usize, d: &[i64]) -> PolyTensor {
    let mut g = PolyTensor::matrix(nv, d.len(), d.len());
    for (i, v) in d.iter().enumerate() {
        g.set(&[i, i], k(nv, *v)).unwrap();
    }
    g
}

/// `so(3)` with the invariant form `diag(d)`; `d = (1,1,1)` is a multiple of the Killing form.
pub fn so3_quadratic_with(nv: usize, d: [i64; 3]) -> DegenerateCourant {
    quadratic_lie_algebra(so3_bracket(nv), diag(nv, &d)).expect("so(3) data is well shaped")
}

pub fn so3_quadratic() -> DegenerateCourant {
    so3_quadratic_with(0, [1, 1, 1])
}

/// The string Lie 2-algebra: `so(3)` with `B* = R` and `l_3(e1,e2,e3) = 1`.
pub fn so3_string() -> SplitLie2 {
    let mut s = SplitLie2::zero(0, 3, 1);
    for (i, j, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        s.bracket.set(&[i, j, l], k(0, 1)).unwrap();
    }
    s.l3.set(&[0, 1, 2, 0], k(0, 1)).unwrap();
    s
}

/// `TM` over R¹ as a Lie 2-algebroid with `B = 0` (the de Rham differential).
pub fn tm_r1_lie1() -> Dorfman2Rep {
    let mut d = Dorfman2Rep::zero(1, 1, 0);
    d.anchor = Anchor { m: identity_matrix(1, 1) };
    d
}

pub fn standard_courant_r1() -> DegenerateCourant {
    standard_courant(1)
}

/// `Q = R²` over R¹, `B = TM` acting trivially, `∂_Q = id`.
pub fn euclidean_selfdual_r1() -> SelfDual2Rep {
    let mut s = SelfDual2Rep::zero(1, 2, 1);
    s.anchor_b.m = identity_matrix(1, 1);
    s.dq = identity_matrix(1, 2);
    s
}

/// Same as `euclidean_selfdual_r1` with the rotation connection `∇_∂ q1 = x q2`, `∇_∂ q2 = −x q1`.
pub fn rotating_selfdual_r1() -> SelfDual2Rep {
    let mut s = euclidean_selfdual_r1();
    s.nabla.gamma.set(&[0, 0, 1], Poly::var(1, 0)).unwrap();
    s.nabla.gamma.set(&[0, 1, 0], -Poly::var(1, 0)).unwrap();
    s
}

/// Metric connection on `TM⊕T*M` over R¹: `∇_∂ ∂ = f ∂`, `∇_∂ dx = −f dx`.
pub fn standard_r1_connection(f: Poly) -> LinearConnection {
    let mut n = LinearConnection::zero(1, 1, 2);
    n.gamma.set(&[0, 1, 1], -f.clone()).unwrap();
    n.gamma.set(&[0, 0, 0], f).unwrap();
    n
}

/// Skew connection on the trivial `so(3)` bundle over R¹: `∇_∂ e1 = f e2`, `∇_∂ e2 = −f e1`.
pub fn so3_r1_connection(f: Poly) -> LinearConnection {
    let mut n = LinearConnection::zero(1, 1, 3);
    n.gamma.set(&[0, 0, 1], f.clone()).unwrap();
    n.gamma.set(&[0, 1, 0], -f).unwrap();
    n
}

/// The LA pair of the tangent double of `c` split by the metric connection `nabla`.
pub fn tangent_double_pair(c: &DegenerateCourant, nabla: &LinearConnection) -> Result<LAPair> {
    Ok(LAPair { selfdual: tangent_selfdual(c, nabla)?, dorfman: adjoint_dorfman2rep(c, nabla, crate::report::DEFAULT_SEED)? })
}

pub fn tangent_double_pair_r1() -> LAPair {
    tangent_double_pair(&standard_courant(1), &standard_r1_connection(Poly::var(1, 0))).expect("metric connection")
}

/// `A = R a`, `B = R b` over a point, `∇_a b = b`, `C = 0`: the matched pair of `aff(1)`.
pub fn axb_matched() -> MatchedPair2Reps {
    let mut m = MatchedPair2Reps::zero(0, 1, 1, 0);
    m.rep_a.nabla_b.gamma.set(&[0, 0, 0], k(0, 1)).unwrap();
    m
}

/// `C = R` with `∂_A c = a`, `∂_B c = b`, all actions zero.
pub fn line_matched() -> MatchedPair2Reps {
    let mut m = MatchedPair2Reps::zero(0, 1, 1, 1);
    m.rep_a.d.set(&[0, 0], k(0, 1)).unwrap();
    m.rep_b.d.set(&[0, 0], k(0, 1)).unwrap();
    m
}

/// `sl(2) ⊕ R` with `z` acting on `C = R`, as a split Lie 2-algebra.
pub fn sl2r() -> SplitLie2 {
    let mut s = SplitLie2::zero(0, 4, 1);
    let (h, e, f) = (0, 1, 2);
    s.bracket.set(&[h, e, e], k(0, 2)).unwrap();
    s.bracket.set(&[h, f, f], k(0, -2)).unwrap();
    s.bracket.set(&[e, f, h], k(0, 1)).unwrap();
    let mut conn_c = LinearConnection::zero(0, 4, 1);
    conn_c.gamma.set(&[3, 0, 0], k(0, 1)).unwrap();
    s.nabla = conn_c.dual();
    s
}

/// The matched pair `A = span(h,e)`, `B = span(f,z)` read off `sl2r` after a
/// change of splitting, so that both curvatures are nonzero.
pub fn sl2_matched() -> MatchedPair2Reps {
    let base = dorfman_from_split(&sl2r()).expect("split data");
    let mut phi = PolyTensor::zeros(0, form2_groups(4, 1));
    for (i, j) in [(0, 2), (1, 3), (0, 1), (2, 3), (1, 2)] {
        phi.set(&[i, j, 0], k(0, 1)).unwrap();
    }
    let changed = change_splitting(&base, &phi).expect("φ has the right shape");
    let s = crate::lie2::split_from_dorfman(&changed).expect("valid structure");
    decompose_bicrossproduct(&s, 2).expect("A and B stay subalgebras")
}

/// `TM` over R¹ acting on `Id: E → E` for `E = R²` with a flat connection.
pub fn semidirect_flat() -> TwoRep {
    let mut t = TwoRep::zero(LieAlgebroid::tangent(1), 2, 2);
    t.d = identity_matrix(1, 2);
    for n in [&mut t.nabla_b, &mut t.nabla_c] {
        n.gamma.set(&[0, 0, 1], Poly::var(1, 0)).unwrap();
    }
    t
}

/// `so(3)` acting on its core with `∂_Q` given by `d`, `B = 0`.
pub fn so3_pair(d: [i64; 3]) -> LAPair {
    let mut dorfman = Dorfman2Rep::zero(0, 3, 0);
    dorfman.delta = so3_bracket(0).dual_dorfman();
    let mut selfdual = SelfDual2Rep::zero(0, 3, 0);
    selfdual.dq = diag(0, &d);
    LAPair { selfdual, dorfman }
}

pub fn so3_symplectic_pair() -> LAPair {
    so3_pair([1, 1, 1])
}

fn columns(nv: usize, n: usize, cols: &[&[i64]]) -> PolyTensor {
    let mut m = PolyTensor::matrix(nv, n, cols.len());
    for (a, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m.set(&[i, a], k(nv, *v)).unwrap();
        }
    }
    m
}

/// `U ⊆ so(3)` spanned by `cols`, over the pair with `∂_Q = 0`.
pub fn so3_dirac(cols: &[&[i64]]) -> DiracFile {
    let p = so3_pair([0, 0, 0]);
    DiracFile { dorfman: p.dorfman, selfdual: Some(p.selfdual), data: DiracData { u: columns(0, 3, cols), bprime: columns(0, 0, &[]) } }
}

/// Every shipped example, in a fixed order.
pub fn examples() -> Vec<StructureFile> {
    vec![
        StructureFile::new("so3_quadratic", 0, Structure::Courant(so3_quadratic())),
        StructureFile::new("so3_string", 0, Structure::Dorfman2Rep(dorfman_from_split(&so3_string()).expect("split data"))),
        StructureFile::new("tm_r1_lie1", 1, Structure::Dorfman2Rep(tm_r1_lie1())),
        StructureFile::new("standard_courant_r1", 1, Structure::Courant(standard_courant_r1())),
        StructureFile::new("euclidean_selfdual_r1", 1, Structure::SelfDual2Rep(euclidean_selfdual_r1())),
        StructureFile::new("rotating_selfdual_r1", 1, Structure::SelfDual2Rep(rotating_selfdual_r1())),
        StructureFile::new("tangent_double_pair_r1", 1, Structure::LAPair(tangent_double_pair_r1())),
        StructureFile::new("axb_matched", 0, Structure::Matched2Reps(axb_matched())),
        StructureFile::new("line_matched", 0, Structure::Matched2Reps(line_matched())),
        StructureFile::new("sl2_matched", 0, Structure::Matched2Reps(sl2_matched())),
        StructureFile::new("semidirect_flat", 1, Structure::TwoRep(semidirect_flat())),
        StructureFile::new("so3_symplectic_pair", 0, Structure::LAPair(so3_symplectic_pair())),
        StructureFile::new("so3_dirac_line", 0, Structure::Dirac(so3_dirac(&[&[0, 0, 1]]))),
    ]
}

pub fn example(name: &str) -> Option<StructureFile> {
    examples().into_iter().find(|f| f.name.as_deref() == Some(name))
}

pub fn example_names() -> Vec<String> {
    examples().into_iter().filter_map(|f| f.name).collect()
}

/// A counterexample, the axiom its checker must fail, and any entries that
/// restate that axiom in an equivalent form and so fail with it.
#[derive(Clone, Debug)]
pub struct Broken {
    pub file: StructureFile,
    pub label: &'static str,
    pub also: &'static [&'static str],
}

impl Broken {
    /// Failed labels in report order.
    pub fn expected(&self) -> Vec<&'static str> {
        let mut v = vec![self.label];
        v.extend_from_slice(self.also);
        v
    }
}

/// `so(3)` with the extra structure constant `[e1,e2] ∋ e1`, so Jacobi fails.
pub fn so3_bad_jacobi() -> Dorfman2Rep {
    let mut s = SplitLie2::zero(0, 3, 0);
    for (i, j, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        s.bracket.set(&[i, j, l], k(0, 1)).unwrap();
    }
    s.bracket.set(&[0, 1, 0], k(0, 1)).unwrap();
    dorfman_from_split(&s).expect("split data")
}

/// `aff(1) ⊕ R²` with `l_3 = τ2∧τ3∧τ4`, a 3-form that is not closed.
pub fn open_three_form() -> Dorfman2Rep {
    let mut s = SplitLie2::zero(0, 4, 1);
    s.bracket.set(&[0, 1, 1], k(0, 1)).unwrap();
    s.l3.set(&[1, 2, 3, 0], k(0, 1)).unwrap();
    dorfman_from_split(&s).expect("split data")
}

/// Abelian `R³` with `B = R` and a curvature that is skew in its first two
/// arguments only, so `ω_R` is not a 3-form.
pub fn r3_asymmetric_curvature() -> Dorfman2Rep {
    let mut d = Dorfman2Rep::zero(0, 3, 1);
    d.r.set(&[0, 1, 0, 2], k(0, 1)).unwrap();
    d
}

pub fn broken() -> Vec<Broken> {
    let mut asym = euclidean_selfdual_r1();
    asym.dq.set(&[0, 1], k(1, 1)).unwrap();
    let mut nonmetric = euclidean_selfdual_r1();
    nonmetric.nabla.gamma.set(&[0, 0, 0], k(1, 1)).unwrap();
    let mut twisted = sl2_matched();
    twisted.rep_a.nabla_b.gamma.set(&[0, 0, 1], k(0, 5)).unwrap();
    let b = |name: &str, nv: usize, s: Structure, label: &'static str| Broken { file: StructureFile::new(name, nv, s), label, also: &[] };
    vec![
        b("so3_bad_jacobi", 0, Structure::Dorfman2Rep(so3_bad_jacobi()), "D4b"),
        b("open_three_form", 0, Structure::Dorfman2Rep(open_three_form()), "D6"),
        b("r3_asymmetric_curvature", 0, Structure::Dorfman2Rep(r3_asymmetric_curvature()), "D5"),
        b("so3_skewed_form", 0, Structure::Courant(so3_quadratic_with(0, [1, 1, 2])), "CA2"),
        b("euclidean_asymmetric", 1, Structure::SelfDual2Rep(asym), "dQ-symmetric"),
        b("euclidean_nonmetric", 1, Structure::SelfDual2Rep(nonmetric), "complex-map"),
        Broken { also: &["almost-C"], ..b("so3_skewed_pair", 0, Structure::LAPair(so3_pair([1, 1, 2])), "M1") },
        b("sl2_matched_twisted", 0, Structure::Matched2Reps(twisted), "(4)"),
        b("so3_dirac_plane", 0, Structure::Dirac(so3_dirac(&[&[1, 0, 0], &[0, 1, 0]])), "VB(3)"),
    ]
}

/// Checker modes, by kind; the first one is the default.
pub fn modes(kind: &str) -> &'static [&'static str] {
    match kind {
        "dorfman2rep" | "splitlie2" => &["dorfman", "homological"],
        "selfdual2rep" => &["selfdual", "graded-jacobi"],
        "matched2reps" => &["matched", "bicrossproduct"],
        "lapair" => &["la-pair", "q-poisson", "core-courant"],
        "courant" => &["courant"],
        "dirac" => &["la-dirac", "vb-dirac", "la-subalgebroid", "manin-pair"],
        "tworep" => &["tworep"],
        "liealgebroid" => &["liealgebroid"],
        "lie2morphism" => &["morphism"],
        _ => &[],
    }
}

/// The LA pair a Dirac file lives in; the self-dual side is required.
pub fn dirac_pair(d: &DiracFile) -> Result<LAPair> {
    let selfdual = d.selfdual.clone().ok_or_else(|| Error::Precondition("the Dirac file carries no self-dual 2-representation".into()))?;
    Ok(LAPair { selfdual, dorfman: d.dorfman.clone() })
}

/// Runs the checker selected by `mode` (or the kind's default).
pub fn run_check(file: &StructureFile, mode: Option<&str>, seed: u64) -> Result<CheckReport> {
    let kind = file.structure.kind();
    let available = modes(kind);
    let mode = match mode {
        Some(m) if available.contains(&m) => m,
        Some(m) => {
            return Err(Error::Parse(format!("mode {m:?} does not apply to kind {kind}; available: {}", available.join(", "))))
        }
        None => available.first().copied().ok_or_else(|| Error::Parse(format!("no checker for kind {kind}")))?,
    };
    Ok(match (&file.structure, mode) {
        (Structure::Dorfman2Rep(d), "dorfman") => check_dorfman2rep(d, seed),
        (Structure::Dorfman2Rep(d), _) => check_homological(d, seed),
        (Structure::SplitLie2(s), m) => {
            let d = dorfman_from_split(s)?;
            if m == "dorfman" {
                check_dorfman2rep(&d, seed)
            } else {
                check_homological(&d, seed)
            }
        }
        (Structure::SelfDual2Rep(s), "selfdual") => check_selfdual2rep(s, seed),
        (Structure::SelfDual2Rep(s), _) => check_graded_jacobi(s, seed),
        (Structure::Matched2Reps(m), "matched") => check_matched_two_reps(m, seed),
        (Structure::Matched2Reps(m), _) => {
            let s = bicrossproduct(m, seed)?;
            check_homological(&dorfman_from_split(&s)?, seed)
        }
        (Structure::LAPair(p), "la-pair") => check_la_matched_pair(p, seed),
        (Structure::LAPair(p), "q-poisson") => check_q_preserves_poisson(p, seed),
        (Structure::LAPair(p), _) => {
            let core = crate::courant::core_courant(p, seed)?;
            crate::courant::check_core_courant(p, &core, seed)
        }
        (Structure::Courant(c), _) => check_courant_axioms(c, seed),
        (Structure::Dirac(d), "manin-pair") => {
            let p = dirac_pair(d)?;
            crate::courant::check_manin_pair(&crate::courant::manin_pair(&p, &d.data, seed)?, seed)
        }
        (Structure::Dirac(d), m) => {
            let mode = match m {
                "vb-dirac" => DiracMode::VbDirac,
                "la-subalgebroid" => DiracMode::LaSubalgebroid,
                _ => DiracMode::LaDirac,
            };
            check_dirac(&d.dorfman, d.selfdual.as_ref(), &d.data, mode, seed)?
        }
        (Structure::TwoRep(t), _) => check_two_rep(t, seed),
        (Structure::LieAlgebroid(a), _) => check_lie_algebroid(a, seed),
        (Structure::Lie2Morphism(m), _) => check_lie2_morphism(&m.source, &m.target, &m.morphism, seed)?,
        _ => unreachable!("modes() only offers checkers for the kinds above"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::DEFAULT_SEED;

    #[test]
    fn examples_pass_their_default_checker() {
        for f in examples() {
            let rep = run_check(&f, None, DEFAULT_SEED).unwrap();
            assert!(rep.pass(), "{:?}\n{rep}", f.name);
        }
    }

    #[test]
    fn broken_variants_fail_exactly_the_advertised_label() {
        for b in broken() {
            let rep = run_check(&b.file, None, DEFAULT_SEED).unwrap();
            assert_eq!(rep.failed_labels(), b.expected(), "{:?}", b.file.name);
        }
    }

    #[test]
    fn files_round_trip() {
        for f in examples().into_iter().chain(broken().into_iter().map(|b| b.file)) {
            assert_eq!(StructureFile::from_json(&f.to_json()).unwrap(), f, "{:?}", f.name);
        }
    }
}

