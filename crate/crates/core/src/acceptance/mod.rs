//! The acceptance criteria as library code, shared by the `selftest`
//! subcommand and the `acceptance` test target.
//!
//! Each criterion compares engine output with an independent oracle from
//! [`oracles`] and pins a wall-clock limit. Report lines carry no timings so
//! that the rendered suite is byte-identical across runs.

pub mod oracles;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::fujita::{simplex_grid, sweep, verify_theorem, FujitaReport};
use crate::geometry::{brunn_minkowski_margin, contains, Margin, Polytope};
use crate::models::{fixtures, random_model, toric_fiber_oracle, RandomModelSpec};
use crate::okounkov::{lattice_index, okounkov_body, volume_counting, volume_geometric, LatticeIndex};
use crate::rational::{int, qvec, rat, QVector, Rat};
use crate::semigroup::{degrees_up_to, GradedSemigroup, MultiDegree, RationalDirection, Source};

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    /// Every exact check held.
    pub checks_passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.checks_passed && self.elapsed <= self.limit
    }

    /// One deterministic line: id, verdict, title, pinned limit, detail.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let timing = if self.checks_passed && !self.passed() { " over time limit;" } else { "" };
        format!(
            "{} {} {} [limit {}s]:{} {}",
            self.id,
            verdict,
            self.title,
            self.limit.as_secs(),
            timing,
            self.detail
        )
    }
}

/// Accumulates named checks for one criterion.
struct Checks {
    ok: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn result(&mut self, r: Result<()>) {
        if let Err(e) = r {
            self.ok = false;
            self.notes.push(format!("error: {e}"));
        }
    }
}

fn run(id: &'static str, title: &'static str, limit_secs: u64, body: impl FnOnce(&mut Checks)) -> Criterion {
    let start = Instant::now();
    let mut c = Checks::new();
    body(&mut c);
    let elapsed = start.elapsed();
    let detail = if c.notes.is_empty() { "ok".to_string() } else { c.notes.join("; ") };
    Criterion { id, title, checks_passed: c.ok, detail, elapsed, limit: Duration::from_secs(limit_secs) }
}

fn dir(c: &[(i64, i64)]) -> RationalDirection {
    RationalDirection::new(qvec(c)).expect("valid direction")
}

fn generators(s: &GradedSemigroup) -> &[crate::semigroup::GradedPoint] {
    match s.source() {
        Source::Generators(g) => g,
        Source::Toric(_) => &[],
    }
}

/// Fiber volumes of E1 match brute-force enumeration.
pub fn a1() -> Criterion {
    run("A1", "E1 fiber volumes", 1, |c| {
        let e1 = fixtures::e1();
        let bfs = oracles::bfs_semigroup(generators(&e1), 40);
        let mut same = true;
        for m in degrees_up_to(2, 40) {
            let engine: Vec<Vec<u32>> = e1.piece(&m).map(|p| p.into_owned()).unwrap_or_default();
            let oracle: Vec<Vec<u32>> = bfs.get(m.entries()).map(|s| s.iter().cloned().collect()).unwrap_or_default();
            same &= engine == oracle;
        }
        c.check(same, "pieces agree with breadth-first enumeration to degree 40");
        let max40 = bfs[&vec![40, 0]].iter().map(|v| v[0]).max().unwrap_or(0);
        let ext = rat(max40 as i64, 40);
        c.check((&ext - rat(7, 2)).abs() <= rat(1, 10), format!("max v/k at k=40 is {ext}"));
        for (a, want) in [
            (dir(&[(1, 1), (0, 1)]), rat(7, 2)),
            (dir(&[(0, 1), (1, 1)]), int(3)),
            (dir(&[(1, 2), (1, 2)]), rat(13, 4)),
        ] {
            match volume_geometric(&e1, &a) {
                Ok(v) => c.check(v == want, format!("vol({a}) = {v}, expected {want}")),
                Err(e) => c.result(Err(e)),
            }
        }
    })
}

/// Truncation ratios of E1 along `(1,0)`.
pub fn a2() -> Criterion {
    run("A2", "E1 truncation ratios at (1,0)", 5, |c| {
        let e1 = fixtures::e1();
        let bfs = oracles::bfs_semigroup(generators(&e1), 40);
        let a = dir(&[(1, 1), (0, 1)]);
        let ps: Vec<u32> = (1..=8).collect();
        let report = match sweep(&e1, &ps, std::slice::from_ref(&a)) {
            Ok(r) => r,
            Err(e) => return c.result(Err(e)),
        };
        for (row, &p) in report.rows.iter().zip(&ps) {
            let expected = match p {
                1 => rat(4, 7),
                3 | 5 | 7 => rat(7 * p as i64 - 3, 7 * p as i64),
                _ => int(1),
            };
            // only degree-(p,0) points reach the fiber over (1,0)
            let top = bfs[&vec![p, 0]].iter().map(|v| v[0]).max().unwrap_or(0);
            let oracle = rat(top as i64, p as i64) / rat(7, 2);
            let got = row.ratio().cloned();
            c.check(got.as_ref() == Some(&expected), format!("p={p}: ratio {got:?}, expected {expected}"));
            c.check(oracle == expected, format!("p={p}: enumeration gives {oracle}"));
        }
        let grid = simplex_grid(2, 4);
        let mut dirs = grid.vertices();
        dirs.extend(grid.centroids());
        match sweep(&e1, &ps, &dirs) {
            Ok(r) => {
                let all = r.rows.iter().all(|row| row.ratio().is_some_and(|q| !q.is_negative() && *q <= int(1)));
                c.check(all, "every sampled ratio lies in [0,1]");
                c.note(format!("{} rows in [0,1]", r.rows.len()));
            }
            Err(e) => c.result(Err(e)),
        }
    })
}

fn directions_with_denominators(max_den: i64) -> Vec<RationalDirection> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        for i in 0..=q {
            out.push(dir(&[(i, q), (q - i, q)]));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// E2 fibers agree with the toric oracle.
pub fn a3() -> Criterion {
    run("A3", "E2 toric oracle agreement", 5, |c| {
        let e2 = fixtures::e2();
        let polys = fixtures::e2_polytopes();
        let square = polys[0].polytope().vertices().to_vec();
        let tri = polys[1].polytope().vertices().to_vec();
        let sum: Vec<QVector> = square
            .iter()
            .flat_map(|p| tri.iter().map(move |q| vec![&p[0] + &q[0], &p[1] + &q[1]]))
            .collect();
        let (v1, v2, v12) = (oracles::shoelace_area(&square), oracles::shoelace_area(&tri), oracles::shoelace_area(&sum));
        let dirs = directions_with_denominators(6);
        let mut agree = 0;
        for a in &dirs {
            let (body, oracle) = match (okounkov_body(&e2, a), toric_fiber_oracle(&polys, a)) {
                (Ok(b), Ok(o)) => (b, o),
                (Err(e), _) | (_, Err(e)) => return c.result(Err(e)),
            };
            c.check(body == oracle, format!("body at {a} differs from the Minkowski sum"));
            let two_area = int(2) * oracles::shoelace_area(body.vertices());
            let mixed = oracles::mixed_volume_2d(&v1, &v2, &v12, &a.coords()[0], &a.coords()[1]);
            c.check(two_area == mixed, format!("area at {a}: {two_area} vs mixed volumes {mixed}"));
            agree += 1;
        }
        c.note(format!("{agree} directions with denominators <= 6"));
        for (a, want) in [(dir(&[(1, 2), (1, 2)]), rat(7, 4)), (dir(&[(1, 3), (2, 3)]), rat(14, 9))] {
            match volume_geometric(&e2, &a) {
                Ok(v) => c.check(v == want, format!("vol({a}) = {v}, expected {want}")),
                Err(e) => c.result(Err(e)),
            }
        }
    })
}

/// Counting estimates approach the geometric volume.
pub fn a4() -> Criterion {
    run("A4", "counting convergence", 10, |c| {
        let e2 = fixtures::e2_with_bound(60);
        let half = dir(&[(1, 2), (1, 2)]);
        c.check(
            matches!(lattice_index(&e2, &half), Ok(LatticeIndex::Index(ref i)) if *i == BigInt::from(1)),
            "E2 lattice index along (1/2,1/2) is 1",
        );
        let m = MultiDegree::new(vec![30, 30]);
        let polys = fixtures::e2_polytopes();
        let oracle_poly = match toric_fiber_oracle(&polys, &RationalDirection::new(m.to_rat()).expect("nonzero")) {
            Ok(p) => p,
            Err(e) => return c.result(Err(e)),
        };
        let pick = oracles::pick_count(oracle_poly.vertices());
        match e2.hilbert(&m) {
            Ok(n) => c.check(BigInt::from(n) == pick, format!("#Γ_(30,30) = {n}, Pick gives {pick}")),
            Err(e) => c.result(Err(e)),
        }
        match volume_counting(&e2, &half, 60) {
            Ok(seq) => {
                let est = seq.iter().find(|(k, _)| *k == 60).map(|x| x.1.clone()).unwrap_or_else(Rat::zero);
                let rel = (&est - rat(7, 4)).abs() / rat(7, 4);
                c.check(rel <= rat(1, 20), format!("E2 k=60 estimate {est}"));
                c.note(format!("E2 k=60 estimate {} (relative error {})", est, crate::rational::decimal_string(&rel, 4)));
            }
            Err(e) => c.result(Err(e)),
        }
        let e1 = fixtures::e1();
        let a = dir(&[(1, 1), (0, 1)]);
        c.check(
            matches!(lattice_index(&e1, &a), Ok(LatticeIndex::Index(ref i)) if *i == BigInt::from(1)),
            "E1 lattice index along (1,0) is 1",
        );
        match volume_counting(&e1, &a, 40) {
            Ok(seq) => {
                let est = seq.last().map(|x| x.1.clone()).unwrap_or_else(Rat::zero);
                let rel = (&est - rat(7, 2)).abs() / rat(7, 2);
                c.check(rel <= rat(15, 100), format!("E1 k=40 estimate {est}"));
                c.note(format!("E1 k=40 estimate {est}"));
            }
            Err(e) => c.result(Err(e)),
        }
    })
}

fn random_polygon(rng: &mut SplitMix64) -> Polytope {
    loop {
        let n = rng.random_range(3..=6);
        let pts: Vec<QVector> = (0..n)
            .map(|_| vec![int(rng.random_range(0..=8)), int(rng.random_range(0..=8))])
            .collect();
        let p = Polytope::hull(&pts, 2).expect("nonempty point set");
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Brunn–Minkowski is never violated and homothety is detected.
pub fn a5() -> Criterion {
    run("A5", "Brunn-Minkowski suite", 30, |c| {
        let mut rng = SplitMix64::seed_from_u64(0x5eed_0005);
        let (mut strict, mut equal) = (0, 0);
        for i in 0..100 {
            let p = random_polygon(&mut rng);
            let q = random_polygon(&mut rng);
            match brunn_minkowski_margin(&p, &q) {
                Ok(Margin::Violation) => c.check(false, format!("pair {i} violates the inequality")),
                Ok(Margin::Indeterminate) => c.check(false, format!("pair {i} indeterminate")),
                Ok(Margin::Equal) => equal += 1,
                Ok(Margin::StrictlyGreater) => strict += 1,
                Err(e) => c.result(Err(e)),
            }
            let k = int(rng.random_range(1..=3));
            let shift = vec![int(rng.random_range(0..=4)), int(rng.random_range(0..=4))];
            let homothetic = p.scale(&k).translate(&shift).expect("same dimension");
            match brunn_minkowski_margin(&p, &homothetic) {
                Ok(m) => c.check(m == Margin::Equal, format!("pair {i}: homothetic copy gives {m:?}")),
                Err(e) => c.result(Err(e)),
            }
        }
        c.note(format!("random pairs: {strict} strict, {equal} equal; 100 homothetic pairs checked"));
    })
}

fn summarize(label: &str, r: &Result<FujitaReport>) -> String {
    match r {
        Ok(rep) => format!(
            "{label}: verdict {}, p0 {}, vertex p* {}, N {}, eps' {}",
            if rep.passed() { "pass" } else { "fail" },
            rep.p0.map_or("none".into(), |p| p.to_string()),
            rep.vertex_p0.map_or("none".into(), |p| p.to_string()),
            rep.resolution.map_or("-".into(), |n| n.to_string()),
            rep.epsilon_prime.as_ref().map_or("-".into(), |e| e.to_string()),
        ),
        Err(e) => format!("{label}: {e}"),
    }
}

/// The full verification pipeline on both fixtures.
pub fn a6() -> Criterion {
    run("A6", "theorem-level verification", 60, |c| {
        let e1 = verify_theorem(&fixtures::e1(), &rat(1, 5), 8, &(1..=8).collect::<Vec<_>>());
        c.note(summarize("E1", &e1));
        match &e1 {
            Ok(rep) => {
                c.check(rep.passed(), format!("E1 verdict ({})", rep.failures.join(", ")));
                c.check(rep.p0.is_some_and(|p| p <= 3), "E1 p0 <= 3");
                c.check(rep.minkowski.iter().all(|m| m.containment), "E1 containments");
            }
            Err(_) => c.check(false, "E1 verification completes"),
        }
        let e2 = verify_theorem(&fixtures::e2(), &rat(1, 10), 4, &(1..=4).collect::<Vec<_>>());
        c.note(summarize("E2", &e2));
        match &e2 {
            Ok(rep) => {
                c.check(rep.passed(), format!("E2 verdict ({})", rep.failures.join(", ")));
                c.check(rep.p0 == Some(1), "E2 p0 = 1");
                c.check(rep.minkowski.iter().all(|m| m.containment), "E2 containments");
            }
            Err(_) => c.check(false, "E2 verification completes"),
        }
    })
}

fn invariant_models() -> Vec<(String, GradedSemigroup)> {
    let mut out = vec![("E1".to_string(), fixtures::e1()), ("E2".to_string(), fixtures::e2())];
    for seed in 0..20u64 {
        let spec = RandomModelSpec { d: 1 + (seed % 2) as usize, r: 2, n_gens: 5, v_max: 7, m_max: 2, seed, bound: 12 };
        out.push((format!("random seed {seed}"), random_model(&spec).expect("valid random model")));
    }
    out
}

fn check_invariants(c: &mut Checks, name: &str, s: &GradedSemigroup) -> Result<()> {
    let grid = simplex_grid(s.r(), 2);
    let mut dirs = grid.vertices();
    dirs.extend(grid.centroids());
    let truncs: Vec<GradedSemigroup> = (1..=3).map(|p| s.truncate(p)).collect::<Result<_>>()?;
    let d = s.d() as i32;
    for a in &dirs {
        let body = okounkov_body(s, a)?;
        let base = volume_geometric(s, a)?;
        for l in 1..=3i64 {
            let scaled = volume_geometric(s, &a.scaled(&int(l))?)?;
            c.check(scaled == &base * int(l.pow(d as u32)), format!("{name}: homogeneity at {a}, λ={l}"));
        }
        for (t, p) in truncs.iter().zip(1..) {
            let tb = match okounkov_body(t, a) {
                Ok(b) => b,
                Err(crate::Error::EmptyCone) => Polytope::empty(s.d()),
                Err(e) => return Err(e),
            };
            c.check(contains(&body, &tb)?, format!("{name}: Δ_a ⊇ Δ^({p})_a at {a}"));
        }
    }
    for (t, p) in truncs.iter().zip(1u64..) {
        for m in degrees_up_to(s.r(), s.bound()) {
            if m.total() % p != 0 {
                c.check(t.hilbert(&m)? == 0, format!("{name}: Γ^({p})_{m} is empty"));
            }
        }
    }
    c.check(s.is_superadditive_up_to(8)?, format!("{name}: superadditive to degree 8"));
    Ok(())
}

/// Homogeneity, truncation containment, divisibility and superadditivity.
pub fn a7() -> Criterion {
    run("A7", "homogeneity and truncation invariants", 60, |c| {
        let models = invariant_models();
        for (name, s) in &models {
            let r = check_invariants(c, name, s);
            c.result(r);
        }
        c.note(format!("{} models", models.len()));
    })
}

/// The fixed sweep used by the determinism checks.
pub fn determinism_sweep() -> Result<String> {
    let dirs = vec![dir(&[(1, 1), (0, 1)]), dir(&[(0, 1), (1, 1)]), dir(&[(1, 2), (1, 2)])];
    sweep(&fixtures::e1(), &(1..=8).collect::<Vec<_>>(), &dirs)?.to_csv()
}

fn determinism_payload() -> String {
    let mut out = determinism_sweep().unwrap_or_else(|e| format!("error: {e}"));
    match verify_theorem(&fixtures::e1(), &rat(1, 5), 8, &(1..=8).collect::<Vec<_>>()) {
        Ok(rep) => out.push_str(&rep.to_json()),
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
        }
    }
    out
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_n: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

/// In-process determinism: a fixed sweep and a full verification report
/// rendered twice on one worker thread and twice on four.
pub fn a8_in_process() -> Criterion {
    run("A8", "determinism across thread counts", 60, |c| {
        let outs: Vec<String> = [1, 4, 1, 4].iter().map(|&n| with_threads(n, determinism_payload)).collect();
        c.check(outs.iter().all(|o| *o == outs[0]), "outputs byte-identical for 1 and 4 threads");
        c.check(!outs[0].contains("error:"), "payload computed without errors");
        c.note(format!("{} bytes compared across 4 runs", outs[0].len()));
    })
}

/// A1 through A7 in order.
pub fn run_library_criteria() -> Vec<Criterion> {
    vec![a1(), a2(), a3(), a4(), a5(), a6(), a7()]
}

/// The whole suite as run by `selftest`.
pub fn run_all() -> Vec<Criterion> {
    let mut out = run_library_criteria();
    out.push(a8_in_process());
    out
}

/// Deterministic rendering of a suite run.
pub fn render(results: &[Criterion]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&r.line());
        s.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", results.len());
    s
}
