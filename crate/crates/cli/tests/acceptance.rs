//! Acceptance criteria, one line each on stderr (written past the test
//! harness capture so they show up in plain `cargo test` output).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use dorfman_core::bundle::{check_lie_algebroid, DullBracket, LinearConnection};
use dorfman_core::corpus::{self, broken, examples};
use dorfman_core::courant::{
    adjoint_dorfman2rep, check_courant_axioms, check_dirac, check_manin_pair, core_courant, induced_lie_algebroid_on_u, manin_pair, semidirect_dorfman2rep,
    standard_courant, standard_dorfman2rep, tangent_selfdual, DegenerateCourant, DiracData, DiracMode,
};
use dorfman_core::exactpoly::Poly;
use dorfman_core::lie2::{check_dorfman2rep, check_homological, dorfman_from_split, form2_groups, Dorfman2Rep};
use dorfman_core::linalg::inverse;
use dorfman_core::matched::{
    bicrossproduct, change_splitting_la_pair, check_la_matched_pair, check_q_preserves_poisson, decompose_bicrossproduct, LAPair,
};
use dorfman_core::poisson::{check_graded_jacobi, check_selfdual2rep, SelfDual2Rep};
use dorfman_core::report::DEFAULT_SEED;
use dorfman_core::schema::Structure;
use dorfman_core::tensor::PolyTensor;

type Verdict = Result<String, String>;

const SEED: u64 = DEFAULT_SEED;

fn c(nv: usize, v: i64) -> Poly {
    Poly::int(nv, v)
}

fn x(nv: usize, k: usize) -> Poly {
    Poly::var(nv, k)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Metric connection on `TM⊕T*M` over R² from a torsionful, curved connection on `TM`.
fn r2_connection() -> LinearConnection {
    let mut n = LinearConnection::zero(2, 2, 4);
    for (r, a, b, v) in [(0, 0, 1, x(2, 1)), (1, 1, 0, c(2, 1)), (0, 1, 1, x(2, 0))] {
        n.gamma.set(&[r, a, b], v.clone()).unwrap();
        n.gamma.set(&[r, 2 + b, 2 + a], -v).unwrap();
    }
    n
}

fn tangent_double(e: &DegenerateCourant, nabla: &LinearConnection) -> LAPair {
    corpus::tangent_double_pair(e, nabla).expect("metric connection")
}

fn file_structure(name: &str) -> Structure {
    corpus::example(name).expect("shipped example").structure
}

fn broken_structure(name: &str) -> Structure {
    broken().into_iter().find(|b| b.file.name.as_deref() == Some(name)).expect("shipped counterexample").file.structure
}

fn as_dorfman(s: Structure) -> Dorfman2Rep {
    match s {
        Structure::Dorfman2Rep(d) => d,
        _ => panic!("not a Dorfman 2-representation"),
    }
}

fn as_selfdual(s: Structure) -> SelfDual2Rep {
    match s {
        Structure::SelfDual2Rep(d) => d,
        _ => panic!("not a self-dual 2-representation"),
    }
}

fn as_pair(s: Structure) -> LAPair {
    match s {
        Structure::LAPair(p) => p,
        _ => panic!("not an LA pair"),
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut twisted = DullBracket::zero(1, 2);
    twisted.c.set(&[0, 1, 1], x(1, 0)).unwrap();
    twisted.c.set(&[1, 0, 1], -x(1, 0)).unwrap();
    let mut passing: Vec<(&str, Dorfman2Rep)> = vec![
        ("so3_string", as_dorfman(file_structure("so3_string"))),
        ("tm_r1_lie1", as_dorfman(file_structure("tm_r1_lie1"))),
        ("standard(twisted R¹)", standard_dorfman2rep(1, &twisted).map_err(|e| e.to_string())?),
        ("adjoint(so3)", adjoint_dorfman2rep(&corpus::so3_quadratic(), &LinearConnection::zero(0, 0, 3), SEED).map_err(|e| e.to_string())?),
        (
            "adjoint(standard R¹, curved)",
            adjoint_dorfman2rep(&standard_courant(1), &corpus::standard_r1_connection(x(1, 0)), SEED).map_err(|e| e.to_string())?,
        ),
        ("semidirect_flat", semidirect_dorfman2rep(&corpus::semidirect_flat(), SEED).map_err(|e| e.to_string())?),
    ];
    for name in ["axb_matched", "line_matched", "sl2_matched"] {
        let Structure::Matched2Reps(m) = file_structure(name) else { unreachable!() };
        let s = bicrossproduct(&m, SEED).map_err(|e| e.to_string())?;
        passing.push((name, dorfman_from_split(&s).map_err(|e| e.to_string())?));
    }
    let failing: Vec<(&str, Dorfman2Rep)> = ["so3_bad_jacobi", "open_three_form", "r3_asymmetric_curvature"]
        .into_iter()
        .map(|n| (n, as_dorfman(broken_structure(n))))
        .collect();
    for (name, d) in &passing {
        let (a, b) = (check_dorfman2rep(d, SEED).pass(), check_homological(d, SEED).pass());
        ensure(a && b, || format!("{name}: dorfman {a}, homological {b}"))?;
    }
    for (name, d) in &failing {
        let (a, b) = (check_dorfman2rep(d, SEED).pass(), check_homological(d, SEED).pass());
        ensure(!a && !b, || format!("{name}: dorfman {a}, homological {b}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:.2?}"))?;
    Ok(format!("{} pass/pass, {} fail/fail in {elapsed:.2?}", passing.len(), failing.len()))
}

fn criterion_2() -> Verdict {
    let mut cases: Vec<(String, SelfDual2Rep, bool)> = ["euclidean_selfdual_r1", "rotating_selfdual_r1"]
        .into_iter()
        .map(|n| (n.to_string(), as_selfdual(file_structure(n)), true))
        .collect();
    let tangent = [
        ("tangent(standard R¹, curved)", standard_courant(1), corpus::standard_r1_connection(x(1, 0))),
        ("tangent(standard R²)", standard_courant(2), r2_connection()),
        ("tangent(so3 over R¹)", corpus::so3_quadratic_with(1, [1, 1, 1]), corpus::so3_r1_connection(x(1, 0))),
    ];
    for (name, e, n) in tangent {
        cases.push((name.into(), tangent_selfdual(&e, &n).map_err(|e| e.to_string())?, true));
    }
    for n in ["euclidean_asymmetric", "euclidean_nonmetric"] {
        cases.push((n.into(), as_selfdual(broken_structure(n)), false));
    }
    for (name, s, expected) in &cases {
        let (a, b) = (check_selfdual2rep(s, SEED).pass(), check_graded_jacobi(s, SEED).pass());
        ensure(a == *expected && b == *expected, || format!("{name}: selfdual {a}, graded-jacobi {b}, expected {expected}"))?;
    }
    Ok(format!("{} structures agree ({} broken)", cases.len(), cases.iter().filter(|c| !c.2).count()))
}

fn criterion_3() -> Verdict {
    let mut bent = as_pair(file_structure("tangent_double_pair_r1"));
    bent.selfdual.nabla.gamma.set(&[0, 0, 1], x(1, 0) + x(1, 0)).unwrap();
    let cases = [
        ("so3_symplectic_pair", as_pair(file_structure("so3_symplectic_pair")), true),
        ("tangent_double_pair_r1", as_pair(file_structure("tangent_double_pair_r1")), true),
        ("tangent double over R²", tangent_double(&standard_courant(2), &r2_connection()), true),
        ("so3_skewed_pair", as_pair(broken_structure("so3_skewed_pair")), false),
        ("tangent double with a bent ∇", bent, false),
    ];
    for (name, p, expected) in &cases {
        let (a, b) = (check_la_matched_pair(p, SEED).pass(), check_q_preserves_poisson(p, SEED).pass());
        ensure(a == *expected && b == *expected, || format!("{name}: la-pair {a}, q-poisson {b}, expected {expected}"))?;
    }
    Ok(format!("{} pairs agree (2 broken)", cases.len()))
}

fn criterion_4() -> Verdict {
    let mut n = 0;
    for f in examples() {
        let Structure::Matched2Reps(m) = &f.structure else { continue };
        let name = f.name.as_deref().unwrap_or("-");
        let s = bicrossproduct(m, SEED).map_err(|e| format!("{name}: {e}"))?;
        let d = dorfman_from_split(&s).map_err(|e| format!("{name}: {e}"))?;
        ensure(check_homological(&d, SEED).pass(), || format!("{name}: bicrossproduct fails check_homological"))?;
        let back = decompose_bicrossproduct(&s, m.rep_a.algebroid.rank()).map_err(|e| format!("{name}: {e}"))?;
        ensure(&back == m, || format!("{name}: decompose ∘ bicrossproduct is not the identity"))?;
        if d.rb() == 0 {
            ensure(s.l3.entries().next().is_none(), || format!("{name}: C = 0 but l_3 ≠ 0"))?;
        }
        n += 1;
    }
    let Structure::Matched2Reps(axb) = file_structure("axb_matched") else { unreachable!() };
    let s = bicrossproduct(&axb, SEED).map_err(|e| e.to_string())?;
    ensure(s.l3.entries().next().is_none(), || "axb_matched: l_3 ≠ 0".into())?;
    ensure(n >= 3, || format!("only {n} matched pairs in the corpus"))?;
    Ok(format!("{n} matched pairs round-trip, C = 0 gives l_3 = 0"))
}

/// Three nonzero 2-forms `Q∧Q → B*` of degree ≤ 2 for the given shape;
/// entries at coinciding indices add up.
fn phis(nv: usize, rq: usize, rb: usize) -> Vec<PolyTensor> {
    let v = |k: usize| if nv == 0 { c(0, 1) } else { x(nv, k % nv) };
    let choices = [
        vec![([0, 1, 0], c(nv, 1))],
        vec![([0, rq - 1, rb - 1], v(0)), ([0, 1, 0], c(nv, -2))],
        vec![([rq - 2, rq - 1, 0], &v(0) * &v(1)), ([0, 1, rb - 1], v(1)), ([0, rq - 1, 0], c(nv, 3))],
    ];
    choices
        .into_iter()
        .map(|entries| {
            let mut phi = PolyTensor::zeros(nv, form2_groups(rq, rb));
            for (idx, p) in entries {
                let sum = phi.get(&idx) + &p;
                phi.set(&idx, sum).unwrap();
            }
            phi
        })
        .collect()
}

fn criterion_5() -> Verdict {
    let mut pairs: Vec<(String, LAPair)> = Vec::new();
    for f in examples() {
        match f.structure {
            Structure::LAPair(p) => pairs.push((f.name.unwrap_or_default(), p)),
            Structure::Dirac(d) => pairs.push((format!("{} (pair)", f.name.unwrap_or_default()), corpus::dirac_pair(&d).unwrap())),
            _ => {}
        }
    }
    pairs.push(("tangent double over R²".into(), tangent_double(&standard_courant(2), &r2_connection())));
    let mut varied = 0;
    let mut vacuous = Vec::new();
    for (name, p) in &pairs {
        let core = core_courant(p, SEED).map_err(|e| format!("{name}: {e}"))?;
        ensure(check_courant_axioms(&core, SEED).pass(), || format!("{name}: core fails check_courant_axioms"))?;
        let (rq, rb) = (p.dorfman.rq(), p.dorfman.rb());
        if rb == 0 || rq < 2 {
            // Q*∧Q*⊗B* = 0: the only splitting is the given one
            vacuous.push(name.clone());
            continue;
        }
        for phi in phis(p.dorfman.nvars(), rq, rb) {
            let q = change_splitting_la_pair(p, &phi).map_err(|e| format!("{name}: {e}"))?;
            ensure(q != *p, || format!("{name}: φ did not change the splitting"))?;
            let other = core_courant(&q, SEED).map_err(|e| format!("{name}: {e}"))?;
            ensure(other == core, || format!("{name}: core depends on the splitting"))?;
        }
        varied += 1;
    }
    Ok(format!(
        "{} pairs pass; {varied} pairs invariant under 3 nonzero φ each; no nonzero φ exists for {}",
        pairs.len(),
        vacuous.join(", ")
    ))
}

fn criterion_6() -> Verdict {
    let families: [(&str, DegenerateCourant, Vec<LinearConnection>); 3] = [
        ("so(3) over a point", corpus::so3_quadratic(), vec![LinearConnection::zero(0, 0, 3)]),
        (
            "so(3) over R¹",
            corpus::so3_quadratic_with(1, [1, 1, 1]),
            vec![corpus::so3_r1_connection(c(1, 0)), corpus::so3_r1_connection(x(1, 0)), corpus::so3_r1_connection(&x(1, 0) * &x(1, 0) + c(1, 1))],
        ),
        (
            "standard over R¹",
            standard_courant(1),
            vec![corpus::standard_r1_connection(c(1, 0)), corpus::standard_r1_connection(x(1, 0)), corpus::standard_r1_connection(&x(1, 0) * &x(1, 0) - c(1, 2))],
        ),
    ];
    let mut total = 0;
    for (name, e, conns) in &families {
        for (i, n) in conns.iter().enumerate() {
            let p = tangent_double(e, n);
            let core = core_courant(&p, SEED).map_err(|err| format!("{name} ∇{i}: {err}"))?;
            let back = core.in_frame(&inverse(&p.selfdual.dq).map_err(|err| err.to_string())?).map_err(|err| err.to_string())?;
            ensure(back.bracket == e.bracket, || format!("{name} ∇{i}: bracket differs"))?;
            ensure(back.pairing == e.pairing, || format!("{name} ∇{i}: pairing differs"))?;
            ensure(back.anchor == e.anchor, || format!("{name} ∇{i}: anchor differs"))?;
            ensure(back == *e, || format!("{name} ∇{i}: 𝒟 differs"))?;
            total += 1;
        }
    }
    Ok(format!("{total} (algebroid, connection) pairs recovered exactly"))
}

fn so3_data(cols: &[&[i64]]) -> DiracData {
    corpus::so3_dirac(cols).data
}

fn criterion_7() -> Verdict {
    let p = corpus::dirac_pair(&corpus::so3_dirac(&[&[0, 0, 1]])).unwrap();
    let inputs = [("span(e3)", so3_data(&[&[0, 0, 1]])), ("so(3)", so3_data(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), ("span(e1+e2)", so3_data(&[&[1, 1, 0]]))];
    let mut ranks = Vec::new();
    for (name, data) in &inputs {
        let dirac = check_dirac(&p.dorfman, Some(&p.selfdual), data, DiracMode::LaDirac, SEED).map_err(|e| e.to_string())?;
        ensure(dirac.pass(), || format!("{name}: not LA-Dirac\n{dirac}"))?;
        let m = manin_pair(&p, data, SEED).map_err(|e| format!("{name}: {e}"))?;
        ensure(check_courant_axioms(&m.courant, SEED).pass(), || format!("{name}: Courant axioms fail"))?;
        ensure(m.courant.is_nondegenerate(), || format!("{name}: degenerate pairing"))?;
        let rep = check_manin_pair(&m, SEED);
        ensure(rep.passed("U-isotropic") && rep.passed("U-closed"), || format!("{name}: {rep}"))?;
        ranks.push(m.courant.rank().to_string());
    }
    Ok(format!("{} LA-Dirac inputs give Manin pairs of rank {}", inputs.len(), ranks.join(", ")))
}

fn criterion_8() -> Verdict {
    let p = corpus::dirac_pair(&corpus::so3_dirac(&[&[0, 0, 1]])).unwrap();
    let line = so3_data(&[&[0, 0, 1]]);
    let rep = check_dirac(&p.dorfman, Some(&p.selfdual), &line, DiracMode::LaDirac, SEED).map_err(|e| e.to_string())?;
    ensure(rep.pass(), || format!("span(e3) is not Dirac\n{rep}"))?;
    let plane = so3_data(&[&[1, 0, 0], &[0, 1, 0]]);
    let rep = check_dirac(&p.dorfman, Some(&p.selfdual), &plane, DiracMode::VbDirac, SEED).map_err(|e| e.to_string())?;
    ensure(!rep.pass(), || "span(e1,e2) passes".into())?;
    // every subspace spanned by frame vectors and sums of two of them
    let vectors: [&[i64]; 6] = [&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1], &[1, 0, 1]];
    let mut induced = 0;
    let mut rejected = 0;
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            let cols: Vec<&[i64]> = if i == j { vec![vectors[i]] } else { vec![vectors[i], vectors[j]] };
            let data = so3_data(&cols);
            match induced_lie_algebroid_on_u(&p.dorfman, &data, SEED) {
                Ok(alg) => {
                    let rep = check_lie_algebroid(&alg, SEED);
                    ensure(rep.pass(), || format!("induced algebroid on {cols:?} fails\n{rep}"))?;
                    induced += 1;
                }
                Err(_) => rejected += 1,
            }
        }
    }
    ensure(induced >= 6, || format!("only {induced} induced algebroids"))?;
    Ok(format!("span(e3) Dirac, span(e1,e2) not; {induced} induced algebroids pass, {rejected} inputs rejected by the precondition"))
}

fn run(bin: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(bin).args(args).env_remove("DORFMAN_FORMAT").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_9() -> Verdict {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_dorfman"));
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-corpus");
    let _ = std::fs::remove_dir_all(&dir);
    let (code, _) = run(&bin, &["corpus", dir.to_str().unwrap()]);
    ensure(code == 0, || format!("corpus exited {code}"))?;
    let mut n_ex = 0;
    for f in examples() {
        let name = f.name.clone().unwrap();
        let path = dir.join("examples").join(format!("{name}.json"));
        let (code, printed) = run(&bin, &["example", &name]);
        ensure(code == 0 && printed == std::fs::read(&path).unwrap(), || format!("example {name} differs from the corpus file"))?;
        let p = path.to_str().unwrap();
        let (code, first) = run(&bin, &["check", "--format", "json", p]);
        ensure(code == 0, || format!("check {name} exited {code}"))?;
        let (_, second) = run(&bin, &["check", "--format", "json", p]);
        ensure(first == second, || format!("{name}: report not byte-stable"))?;
        n_ex += 1;
    }
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("broken/advertised.json")).unwrap()).unwrap();
    let mut n_br = 0;
    for (name, adv) in manifest.as_object().unwrap() {
        let p = dir.join("broken").join(format!("{name}.json"));
        let (code, first) = run(&bin, &["check", "--format", "json", p.to_str().unwrap()]);
        ensure(code == 1, || format!("broken {name} exited {code}"))?;
        let (_, second) = run(&bin, &["check", "--format", "json", p.to_str().unwrap()]);
        ensure(first == second, || format!("{name}: report not byte-stable"))?;
        let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
        let failed: Vec<&str> = doc["entries"].as_array().unwrap().iter().filter(|e| e["pass"] == false).map(|e| e["label"].as_str().unwrap()).collect();
        let mut expected = vec![adv["label"].as_str().unwrap()];
        expected.extend(adv["also"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()));
        ensure(failed == expected, || format!("broken {name}: failed {failed:?}, advertised {expected:?}"))?;
        n_br += 1;
    }
    ensure(n_br == broken().len(), || "manifest does not list every counterexample".into())?;
    let (code, text) = run(&bin, &["check", dir.join("broken/so3_bad_jacobi.json").to_str().unwrap()]);
    let text = String::from_utf8(text).unwrap();
    ensure(code == 1 && text.contains("witness (q1,q2,tau2)"), || format!("so3_bad_jacobi report lacks its witness:\n{text}"))?;
    Ok(format!("{n_ex} examples exit 0, {n_br} counterexamples fail as advertised, reports byte-stable"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("[Q,Q]=0 equivalence", criterion_1),
        ("Poisson biconditional", criterion_2),
        ("matched-pair biconditional", criterion_3),
        ("bicrossproduct", criterion_4),
        ("core Courant", criterion_5),
        ("Courant-bracket recovery", criterion_6),
        ("Manin pair", criterion_7),
        ("Dirac criteria", criterion_8),
        ("CLI determinism and corpus health", criterion_9),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let verdict = f();
        let line = match &verdict {
            Ok(detail) => format!("criterion {}: PASS  {title}: {detail}", i + 1),
            Err(why) => format!("criterion {}: FAIL  {title}: {why}", i + 1),
        };
        writeln!(err, "{line}").unwrap();
        if verdict.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

