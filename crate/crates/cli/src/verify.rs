//! Self-checks behind `lozenge verify`.

use clap::ValueEnum;
use lozenge::lattice::{closed_weight, generate_region, minimum_weight, Bounds};
use lozenge::modular::{count_form_residues_with_cap, legendre, primes_up_to, special_class, theoretical_density};
use lozenge::reduction::{negative_census, Germ};
use lozenge::triple::verify_identities;
use lozenge::{Error, Triple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Identities,
    Densities,
    ClosedForm,
    Census,
    All,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub scope: Scope,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub scope: Scope,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} [{:?}] {}", c.scope, c.name));
            if let Some(d) = &c.detail {
                s.push_str(&format!(": {d}"));
            }
            s.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        s
    }
}

struct Collector {
    scope: Scope,
    checks: Vec<Check>,
}

impl Collector {
    fn record(&mut self, name: impl Into<String>, outcome: Result<(), String>) {
        self.checks.push(Check {
            scope: self.scope,
            name: name.into(),
            passed: outcome.is_ok(),
            detail: outcome.err(),
        });
    }
}

fn random_triple(r: &mut ChaCha8Rng, bound: i64) -> Triple {
    Triple::new(r.gen_range(-bound..=bound), r.gen_range(-bound..=bound), r.gen_range(-bound..=bound))
}

fn identities(c: &mut Collector, rng: &mut ChaCha8Rng, samples: usize) {
    let pool: Vec<Triple> = (0..samples).map(|_| random_triple(rng, 1_000_000)).collect();
    for check in verify_identities(&pool).checks {
        let detail = check.example.map(|e| e.to_string()).unwrap_or_else(|| "failed".into());
        c.record(check.name, if check.passed { Ok(()) } else { Err(detail) });
    }
}

fn densities(c: &mut Collector, pmax: u64, cap: u64) -> Result<(), Error> {
    if pmax > cap {
        return Err(Error::resource(format!("pmax {pmax} exceeds the sweep cap {cap}")));
    }
    let primes = primes_up_to(pmax);
    for germ in [Germ::G000, Germ::G011] {
        let mut tables = Ok(());
        let mut special = Ok(());
        let mut balance = Ok(());
        for &p in &primes {
            let counted = count_form_residues_with_cap(germ, p, cap)?;
            let theory = theoretical_density(germ, p)?;
            if tables.is_ok() && counted.densities() != theory.densities() {
                tables = Err(format!("p={p}: counted {:?}, closed form {:?}", counted.counts, theory.counts));
            }
            if p < 5 {
                continue;
            }
            let l = special_class(germ, p).expect("defined for p >= 5") as usize;
            let want = if p % 6 == 1 { 2 * p - 1 } else { 1 };
            if special.is_ok() && counted.counts[l] != want {
                special = Err(format!("p={p}: class {l} has {} solutions, want {want}", counted.counts[l]));
            }
            let mut seen: [Option<u64>; 2] = [None, None];
            for l in 0..p {
                let a = match germ {
                    Germ::G000 => 3 * l as i64 + 1,
                    _ => l as i64,
                };
                let s = legendre(a, p)?;
                if s == 0 {
                    continue;
                }
                let slot = &mut seen[usize::from(s == 1)];
                let n = counted.counts[l as usize];
                if slot.is_some_and(|m| m != n) && balance.is_ok() {
                    balance = Err(format!("p={p}: unequal counts within one symbol class"));
                }
                slot.get_or_insert(n);
            }
            if seen[0] != seen[1] && balance.is_ok() {
                balance = Err(format!("p={p}: residues {:?}, non-residues {:?}", seen[1], seen[0]));
            }
        }
        c.record(format!("{germ} counts equal closed form for p <= {pmax}"), tables);
        c.record(format!("{germ} special class count is 1 or 2p-1"), special);
        c.record(format!("{germ} residue and non-residue counts agree"), balance);
    }
    Ok(())
}

fn closed_form(c: &mut Collector, rng: &mut ChaCha8Rng) -> Result<(), Error> {
    let bounds = Bounds::square(40);
    let mut growth = Ok(());
    let mut lozenges = Ok(());
    let mut minima = Ok(());
    for _ in 0..100 {
        let base = random_triple(rng, 50);
        let grid = generate_region(base, bounds)?;
        for (v, w) in grid.iter() {
            let expect = closed_weight(&base, v.m, v.n)?;
            if w != expect && growth.is_ok() {
                growth = Err(format!("base {base} node ({}, {}): grown {w}, closed form {expect}", v.m, v.n));
            }
        }
        if let Some(l) = grid.lozenge_violations().first() {
            if lozenges.is_ok() {
                lozenges = Err(format!("base {base}: {l:?}"));
            }
        }
        let min = minimum_weight(&base)?.min;
        let scan = Bounds::square(80).nodes().map(|v| closed_weight(&base, v.m, v.n)).collect::<Result<Vec<_>, _>>()?;
        let brute = scan.into_iter().min().expect("nonempty box");
        if min != brute && minima.is_ok() {
            minima = Err(format!("base {base}: minimum {min}, box scan {brute}"));
        }
    }
    c.record("region growth equals closed form on 100 random bases", growth);
    c.record("every lozenge satisfies the diagonal rule", lozenges);
    c.record("minimum weight equals box scan", minima);
    Ok(())
}

fn census(c: &mut Collector) -> Result<(), Error> {
    let r = negative_census(100)?;
    let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(msg) };
    c.record("c=100 minimum is -3300", check(r.min_weight == -3300, format!("got {}", r.min_weight)));
    c.record("c=100 has 11946 negative weights", check(r.negative_count == 11946, format!("got {}", r.negative_count)));
    c.record("c=100 ratio is 0.98793", check((r.ratio - 0.98793).abs() <= 1e-5, format!("got {}", r.ratio)));
    for cc in [50, 200, 300] {
        let r = negative_census(cc)?;
        c.record(
            format!("c={cc} ratio within [0.9, 1.1]"),
            check((0.9..=1.1).contains(&r.ratio), format!("got {}", r.ratio)),
        );
    }
    Ok(())
}

pub fn run(scope: Scope, pmax: u64, seed: u64, samples: usize, cap: u64) -> Result<Report, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let wanted = |s: Scope| scope == Scope::All || scope == s;
    if wanted(Scope::Identities) {
        let mut c = Collector { scope: Scope::Identities, checks: Vec::new() };
        identities(&mut c, &mut rng, samples);
        checks.extend(c.checks);
    }
    if wanted(Scope::Densities) {
        let mut c = Collector { scope: Scope::Densities, checks: Vec::new() };
        densities(&mut c, pmax, cap)?;
        checks.extend(c.checks);
    }
    if wanted(Scope::ClosedForm) {
        let mut c = Collector { scope: Scope::ClosedForm, checks: Vec::new() };
        closed_form(&mut c, &mut rng)?;
        checks.extend(c.checks);
    }
    if wanted(Scope::Census) {
        let mut c = Collector { scope: Scope::Census, checks: Vec::new() };
        census(&mut c)?;
        checks.extend(c.checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { scope, seed, passed, checks })
}
