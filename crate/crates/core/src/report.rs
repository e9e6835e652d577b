//! Check reports and the probing harness that evaluates an identity on all
//! frame tuples and on a few seeded random polynomial sections.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactpoly::{int, rat, Poly, Rational};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_2a1b;

/// Number of random tuples evaluated per identity, after the frame tuples.
pub const RANDOM_TUPLES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub label: String,
    /// The identity being checked, in words and symbols.
    pub anchor: String,
    pub pass: bool,
    /// First failing tuple, if any.
    pub witness: Option<String>,
    /// Rendering of the nonzero residual at the witness.
    pub residual: Option<String>,
    /// Number of tuples evaluated.
    pub tuples: usize,
}

impl Entry {
    pub fn verdict(label: &str, anchor: &str, pass: bool, witness: Option<String>, residual: Option<String>) -> Entry {
        Entry { label: label.into(), anchor: anchor.into(), pass, witness, residual, tuples: 1 }
    }

    pub fn ok(label: &str, anchor: &str) -> Entry {
        Self::verdict(label, anchor, true, None, None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub seed: u64,
    pub entries: Vec<Entry>,
}

impl CheckReport {
    pub fn new(title: &str, seed: u64) -> Self {
        CheckReport { title: title.into(), seed, entries: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn entry(&self, label: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.label == label)
    }

    /// Whether the entry exists and passed.
    pub fn passed(&self, label: &str) -> bool {
        self.entry(label).map(|e| e.pass).unwrap_or(false)
    }

    pub fn failed_labels(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| !e.pass).map(|e| e.label.as_str()).collect()
    }

    /// Appends the entries of `other` with labels prefixed by `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut e in other.entries {
            e.label = format!("{prefix}{}", e.label);
            self.entries.push(e);
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (seed {})", self.title, self.seed)?;
        for e in &self.entries {
            write!(f, "  [{}] {:<28} {}", if e.pass { "pass" } else { "FAIL" }, e.label, e.anchor)?;
            if let Some(w) = &e.witness {
                write!(f, "\n         witness {w}")?;
            }
            if let Some(r) = &e.residual {
                write!(f, "\n         residual {r}")?;
            }
            writeln!(f)?;
        }
        write!(f, "  overall: {}", if self.pass() { "pass" } else { "FAIL" })
    }
}

/// One argument slot of an identity.
#[derive(Clone, Copy, Debug)]
pub enum Slot {
    /// A section of a bundle of the given rank; `sym` names its frame in witnesses.
    Sec(usize, &'static str),
    /// A base function.
    Fun,
}

#[derive(Clone, Debug)]
pub enum Arg {
    Sec(Vec<Poly>),
    Fun(Poly),
}

impl Arg {
    pub fn sec(&self) -> &[Poly] {
        match self {
            Arg::Sec(s) => s,
            Arg::Fun(_) => panic!("expected a section argument"),
        }
    }
    pub fn fun(&self) -> &Poly {
        match self {
            Arg::Fun(f) => f,
            Arg::Sec(_) => panic!("expected a function argument"),
        }
    }
}

pub fn render_vec(v: &[Poly]) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Random polynomial of total degree ≤ 2 with small coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize) -> Poly {
    let mut exps: Vec<Vec<u32>> = vec![vec![0; nvars]];
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = 1;
        exps.push(e);
        for j in i..nvars {
            let mut e = vec![0; nvars];
            e[i] += 1;
            e[j] += 1;
            exps.push(e);
        }
    }
    let terms = exps.into_iter().map(|e| {
        let c: Rational = match rng.gen_range(0..7) {
            0 => rat(1, 2),
            k => int(k as i64 - 3),
        };
        (e, c)
    });
    Poly::from_terms(nvars, terms).expect("well-formed exponents")
}

pub fn random_section(rng: &mut ChaCha8Rng, nvars: usize, rank: usize) -> Vec<Poly> {
    (0..rank).map(|_| random_poly(rng, nvars)).collect()
}

fn label_hash(s: &str) -> u64 {
    // FNV-1a, only used to decorrelate the random streams of different entries.
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Evaluates identities on frame tuples and seeded random tuples.
#[derive(Clone, Debug)]
pub struct Probe {
    pub nvars: usize,
    pub seed: u64,
    pub random_tuples: usize,
}

impl Probe {
    pub fn new(nvars: usize, seed: u64) -> Self {
        Probe { nvars, seed, random_tuples: RANDOM_TUPLES }
    }

    /// Frame arguments of a slot with their witness names.
    fn frames(&self, slot: Slot) -> Vec<(Arg, String)> {
        let nv = self.nvars;
        match slot {
            Slot::Sec(rank, sym) => (0..rank)
                .map(|i| {
                    let mut s = vec![Poly::zero(nv); rank];
                    s[i] = Poly::one(nv);
                    (Arg::Sec(s), format!("{sym}{}", i + 1))
                })
                .collect(),
            Slot::Fun => {
                let mut v = vec![(Arg::Fun(Poly::one(nv)), "1".to_string())];
                for k in 0..nv {
                    v.push((Arg::Fun(Poly::var(nv, k)), format!("x{}", k + 1)));
                }
                v
            }
        }
    }

    /// Checks that `residual` vanishes on every tuple. Frame tuples come first,
    /// then the random ones; the first nonzero residual becomes the witness.
    pub fn check<F>(&self, label: &str, anchor: &str, slots: &[Slot], residual: F) -> Entry
    where
        F: Fn(&[Arg]) -> Vec<Poly>,
    {
        let mut tuples = 0;
        let frames: Vec<Vec<(Arg, String)>> = slots.iter().map(|&s| self.frames(s)).collect();
        let empty = frames.iter().any(|f| f.is_empty());
        if !empty {
            let mut idx = vec![0usize; slots.len()];
            loop {
                let args: Vec<Arg> = idx.iter().zip(&frames).map(|(&i, f)| f[i].0.clone()).collect();
                tuples += 1;
                let r = residual(&args);
                if r.iter().any(|p| !p.is_zero()) {
                    let names: Vec<&str> = idx.iter().zip(&frames).map(|(&i, f)| f[i].1.as_str()).collect();
                    return Entry {
                        label: label.into(),
                        anchor: anchor.into(),
                        pass: false,
                        witness: Some(format!("({})", names.join(","))),
                        residual: Some(render_vec(&r)),
                        tuples,
                    };
                }
                // odometer
                let mut k = slots.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < frames[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || slots.is_empty() {
                    break;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ label_hash(label));
        for t in 0..self.random_tuples {
            let args: Vec<Arg> = slots
                .iter()
                .map(|&s| match s {
                    Slot::Sec(rank, _) => Arg::Sec(random_section(&mut rng, self.nvars, rank)),
                    Slot::Fun => Arg::Fun(random_poly(&mut rng, self.nvars)),
                })
                .collect();
            if empty && slots.iter().any(|s| matches!(s, Slot::Sec(0, _))) {
                break;
            }
            tuples += 1;
            let r = residual(&args);
            if r.iter().any(|p| !p.is_zero()) {
                return Entry {
                    label: label.into(),
                    anchor: anchor.into(),
                    pass: false,
                    witness: Some(format!("random tuple #{} (seed {})", t + 1, self.seed)),
                    residual: Some(render_vec(&r)),
                    tuples,
                };
            }
        }
        Entry { label: label.into(), anchor: anchor.into(), pass: true, witness: None, residual: None, tuples }
    }
}

/// True if every polynomial is zero.
pub fn all_zero(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

/// Zero rational helper used by callers comparing constants.
pub fn is_zero_rat(r: &Rational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_reports_first_frame_witness() {
        let p = Probe::new(1, 1);
        let e = p.check("t", "a", &[Slot::Sec(2, "q"), Slot::Sec(2, "q")], |a| {
            // nonzero only on (q2,q1)
            vec![&a[0].sec()[1] * &a[1].sec()[0]]
        });
        assert!(!e.pass);
        assert_eq!(e.witness.as_deref(), Some("(q2,q1)"));
    }

    #[test]
    fn probe_passes_identities() {
        let p = Probe::new(2, 3);
        let e = p.check("comm", "fg = gf", &[Slot::Fun, Slot::Fun], |a| vec![&(a[0].fun() * a[1].fun()) - &(a[1].fun() * a[0].fun())]);
        assert!(e.pass);
        assert_eq!(e.tuples, 9 + RANDOM_TUPLES);
    }

    #[test]
    fn rank_zero_slots_are_vacuous() {
        let p = Probe::new(1, 3);
        let e = p.check("z", "", &[Slot::Sec(0, "q")], |_| vec![Poly::one(1)]);
        assert!(e.pass);
    }
}
