//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints its own PASS/FAIL line; the process fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use orbifold_hkr::circle;
use orbifold_hkr::exact::Field;
use orbifold_hkr::geometry::{all_sectors, derived_fixed_hilbert, shifted_tangent_hilbert};
use orbifold_hkr::group::{MatrixGroup, DEFAULT_CAP};
use orbifold_hkr::hkr::{self, brute_force_invariants, Mode, OracleMode};
use orbifold_hkr::wps::{hh_vector, inertia_components, WeightedStack};
use orbifold_hkr::{Matrix, Rational};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect()).unwrap()
}

fn sweep() -> Vec<(&'static str, MatrixGroup)> {
    let g = |gens| MatrixGroup::generate(gens, DEFAULT_CAP).unwrap();
    vec![
        ("C2 sign on A1", g(vec![qm(&[&[-1]])])),
        ("C2 = +-I on A2", g(vec![qm(&[&[-1, 0], &[0, -1]])])),
        ("C4 rotation on A2", g(vec![qm(&[&[0, -1], &[1, 0]])])),
        (
            "S3 permutations on A3",
            g(vec![qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]), qm(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])]),
        ),
    ]
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took < limit {
        Ok(format!("{detail} in {took:.2?}"))
    } else {
        Err(format!("{detail}, but took {took:.2?} (limit {limit:?})"))
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Football / teardrop: HH concentrated in degree 0 with dimension p + q.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    for (p, q) in [(1u64, 1u64), (1, 7), (2, 3), (3, 5), (4, 7)] {
        let hh = hh_vector(&WeightedStack::new(vec![p, q]).map_err(|e| e.to_string())?);
        let expected = BTreeMap::from([(0i64, p + q)]);
        check(hh == expected, || format!("P({p},{q}): got {hh:?}, expected {expected:?}"))?;
    }
    within(Duration::from_secs(1), start, "5 coprime pairs, HH_0 = p + q, HH_i = 0 otherwise".into())
}

/// Weighted counting identity on seeded random weight vectors.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for trial in 0..50 {
        let len = rng.gen_range(1..=5);
        let weights: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=9)).collect();
        let stack = WeightedStack::new(weights.clone()).map_err(|e| e.to_string())?;
        let hh = hh_vector(&stack);
        let sum: u64 = weights.iter().sum();
        check(hh == BTreeMap::from([(0, sum)]), || {
            format!("trial {trial} {weights:?}: HH {hh:?}, expected HH_0 = {sum}")
        })?;
        // |∪ μ_{a_i}| as the set of reduced fractions j/a in [0, 1)
        let roots: BTreeSet<(u64, u64)> =
            weights.iter().flat_map(|&a| (0..a).map(move |j| (j / j.gcd(&a), a / j.gcd(&a)))).collect();
        let comps = inertia_components(&stack).len();
        check(comps == roots.len(), || {
            format!("trial {trial} {weights:?}: {comps} components, |union| = {}", roots.len())
        })?;
    }
    within(Duration::from_secs(5), start, "50 seeded weight vectors".into())
}

fn oracle_sweep(mode: Mode) -> Result<usize, String> {
    let mut cells = 0;
    for (name, g) in sweep() {
        let report = hkr::full_report(&g, 6, mode).map_err(|e| format!("{name}: {e}"))?;
        let verdict = hkr::oracle_check(&report, 6).map_err(|e| format!("{name}: {e}"))?;
        check(verdict.checked && verdict.agreement, || format!("{name}: {:?}", verdict.first_disagreement))?;
        cells += verdict.cells;
    }
    Ok(cells)
}

/// Molien against brute-force invariants, homology.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cells = oracle_sweep(Mode::Homology)?;
    within(Duration::from_secs(60), start, format!("{cells} cells agree over 4 groups, d <= 6"))
}

/// Twisted Molien against twisted brute force, cohomology.
fn criterion_4() -> Outcome {
    let cells = oracle_sweep(Mode::Cohomology)?;
    Ok(format!("{cells} cells agree over 4 groups, d <= 6"))
}

/// Koszul homology of the derived fixed locus against the shifted tangent bundle.
fn criterion_5() -> Outcome {
    let mut elements = 0;
    for (name, g) in sweep() {
        let sectors = all_sectors(&g).map_err(|e| e.to_string())?;
        for s in &sectors {
            let expected = shifted_tangent_hilbert(s, 6);
            for &x in &s.class.members {
                let got = derived_fixed_hilbert(g.element(x), 6);
                check(got == expected, || format!("{name}, element {x}: {:?} vs {:?}", got.rows, expected.rows))?;
                elements += 1;
            }
        }
    }
    Ok(format!("{elements} elements, all bidegrees d <= 6"))
}

/// Partitions of `d` into parts of size at most 3.
fn partitions_at_most_3(d: usize) -> u64 {
    let mut ways = vec![0u64; d + 1];
    ways[0] = 1;
    for part in 1..=3 {
        for k in part..=d {
            ways[k] += ways[k - part];
        }
    }
    ways[d]
}

/// Invariant ring of S3 on A3 from the untwisted sector.
fn criterion_6() -> Outcome {
    let (_, g) = sweep().pop().unwrap();
    let sectors = all_sectors(&g).map_err(|e| e.to_string())?;
    let untwisted = sectors.iter().find(|s| s.fixed_dim() == 3).ok_or("no untwisted sector")?;
    let series = hkr::sector_hh_series(untwisted, 5).map_err(|e| e.to_string())?;
    let molien: Vec<Rational> = (0..=5).map(|d| series.coeff(0, d)).collect();
    let expected = [1, 1, 2, 3, 4, 5];
    for d in 0..=5 {
        let oracle = brute_force_invariants(untwisted, 0, d, OracleMode::Forms).map_err(|e| e.to_string())?;
        check(molien[d] == Rational::from_int(expected[d]), || format!("weight {d}: Molien {}", molien[d]))?;
        check(oracle == expected[d] as u64, || format!("weight {d}: oracle {oracle}"))?;
        check(partitions_at_most_3(d) == expected[d] as u64, || format!("weight {d}: partition count"))?;
    }
    Ok("1,1,2,3,4,5 from Molien, oracle and partition count".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    for r in 2..=12usize {
        let g: Vec<String> =
            circle::gamma_homology(r).map_err(|e| e.to_string())?.iter().map(ToString::to_string).collect();
        let expected = ["Z".to_string(), format!("Z/{r}"), "0".to_string()];
        check(g == expected, || format!("Gamma_{r}: {g:?}"))?;
        let c = circle::cover_homology(r).map_err(|e| e.to_string())?;
        check(
            c[0].to_string() == "Z" && c[1].to_string() == "0" && c[2].free_rank == r - 1 && c[2].torsion.is_empty(),
            || format!("cover r = {r}: {c:?}"),
        )?;
    }
    // RP^2: H_1 = Z/2, H_2 = 0
    check(circle::gamma_homology(2).unwrap()[1].to_string() == "Z/2", || "r = 2 is not RP^2".into())?;
    within(Duration::from_secs(1), start, "2 <= r <= 12".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    for n in 2..=12usize {
        let e = |e: circle::CircleError| e.to_string();
        let (c, g) = (circle::fiber_dimension(n, true).map_err(e)?, circle::fiber_dimension(n, false).map_err(e)?);
        check((c, g) == (n, n), || format!("n = {n}: fiber lengths {c}, {g}"))?;
        let l = circle::central_complex(n).map_err(e)?;
        check((l.h0, l.h1) == (1, 1) && l.trivial_action(), || format!("n = {n}: central complex {l:?}"))?;
        let h = circle::generic_fiber_homology(n).map_err(e)?;
        check(h == (1, 1), || format!("n = {n}: generic fiber {h:?}"))?;
    }
    within(Duration::from_secs(2), start, "2 <= n <= 12".into())
}

/// Every golden job, run twice through the binary, gives byte-identical JSON.
fn criterion_9() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut jobs: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".job.json"))
        .collect();
    jobs.sort();
    check(!jobs.is_empty(), || "no golden jobs".into())?;
    let run = |job: &Path| -> Result<Vec<u8>, String> {
        let text = std::fs::read_to_string(job).map_err(|e| e.to_string())?;
        let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let command = doc["command"].as_str().ok_or("golden job without command")?;
        let out = Command::new(env!("CARGO_BIN_EXE_orbifold-hkr"))
            .args([command, "--spec"])
            .arg(job)
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.success(), || format!("{} exited with {}", job.display(), out.status))?;
        Ok(out.stdout)
    };
    for job in &jobs {
        let (a, b) = (run(job)?, run(job)?);
        check(a == b, || format!("{} differs between runs", job.display()))?;
    }
    Ok(format!("{} golden jobs", jobs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("football and teardrop HH", criterion_1),
        ("weighted counting identity", criterion_2),
        ("oracle agreement, homology", criterion_3),
        ("oracle agreement, twisted cohomology", criterion_4),
        ("derived fixed locus vs shifted tangent", criterion_5),
        ("S3 invariant ring", criterion_6),
        ("Gamma_r and its cover", criterion_7),
        ("filtered circle fibers", criterion_8),
        ("golden determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
