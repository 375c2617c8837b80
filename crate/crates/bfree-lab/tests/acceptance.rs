//! End-to-end acceptance suite: ten criteria, one PASS/FAIL line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines as they complete.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use bfree_lab::cf::ContinuedFraction;
use bfree_lab::dimension::critical_exponent;
use bfree_lab::exact::{parse_rational, Rational};
use bfree_lab::liouville::{KChoice, PrimePairConstruction, Status};
use bfree_lab::plane::Hyperplane;
use bfree_lab::qfree::{counting_exponent_fit, ExponentValue, FreeSetSpec, TailRule};

type Outcome = Result<String, String>;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn criterion(&mut self, id: u32, name: &str, f: impl FnOnce() -> Outcome) {
        let clock = Instant::now();
        let result = f();
        let secs = clock.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:02} {name:<24} PASS ({secs:6.2} s)  {detail}"),
            Err(why) => {
                println!("criterion {id:02} {name:<24} FAIL ({secs:6.2} s)  {why}");
                self.failures.push(format!("{id:02} {name}: {why}"));
            }
        }
    }
}

fn expect(ok: bool, why: impl Fn() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn canonical_run(extensions: u64) -> Result<PrimePairConstruction, String> {
    PrimePairConstruction::init(2, 3, 1)
        .and_then(|c| c.extend_minimal(extensions))
        .map_err(|e| e.to_string())
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };

    gate.criterion(1, "construction-replay", || {
        let clock = Instant::now();
        let c = canonical_run(4)?;
        for (s, want) in [1u64, 3, 4, 27, 1_048_576].iter().enumerate() {
            expect(c.q(s as u64) == &BigUint::from(*want), || {
                format!("q_{s} != {want}")
            })?;
        }
        let q5_power = BigUint::from(3u32).pow(262_147);
        expect(c.q(5) == &q5_power, || "q_5 is not 3^262147".into())?;
        let digits = c.q(5).to_string().len();
        let predicted = (262_147f64 * 3f64.log10()).floor() as usize + 1;
        expect(digits == predicted && digits == 125_076, || {
            format!("q_5 has {digits} digits, predicted {predicted}")
        })?;
        let a5_expected =
            (q5_power - BigUint::from(27u32)) / BigUint::from(2u32).pow(20);
        let quotients = c.quotients();
        for (t, want) in [(1u64, 3u64), (2, 1), (3, 6), (4, 38_836)] {
            expect(quotients[t as usize] == BigUint::from(want), || {
                format!("a_{t} != {want}")
            })?;
        }
        expect(quotients[5] == a5_expected, || {
            "a_5 != (3^262147 - 27)/2^20".into()
        })?;
        let report = c.verify();
        expect(report.all_pass, || {
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|ch| !ch.pass)
                .map(|ch| ch.name)
                .collect();
            format!("verify checks failed: {failed:?}")
        })?;
        let secs = clock.elapsed().as_secs_f64();
        expect(secs < 10.0, || format!("took {secs:.2} s, budget 10 s"))?;
        Ok(format!(
            "q replayed, q_5 = 3^262147 ({digits} digits), {} checks",
            report.checks.len()
        ))
    });

    gate.criterion(2, "growth-budget-stop", || {
        let c = canonical_run(4)?;
        let next = c.extend(KChoice::Minimal).map_err(|e| e.to_string())?;
        match next.status() {
            Status::GrowthExceeded { step, alpha_digits } => Ok(format!(
                "step {step} refused, next exponent ~{alpha_digits} digits"
            )),
            Status::Active => Err("step 6 did not trip the digit budget".into()),
        }
    });

    gate.criterion(3, "wstar-evidence", || {
        let c = canonical_run(4)?;
        let tau = parse_rational("5/2").unwrap();
        let ev = c.wstar_evidence(&tau).map_err(|e| e.to_string())?;
        expect(ev.hit_indices() == vec![2, 3, 4], || {
            format!("hits at {:?}, want [2, 3, 4]", ev.hit_indices())
        })?;
        expect(ev.miss_indices() == vec![1], || {
            format!("misses at {:?}, want [1]", ev.miss_indices())
        })?;
        let outside: Vec<u64> = ev
            .outside_q
            .iter()
            .filter(|(_, out)| *out)
            .map(|(s, _)| *s)
            .collect();
        expect(outside == vec![1, 2, 3, 4, 5], || {
            format!("outside-Q(6) flags wrong: {:?}", ev.outside_q)
        })?;
        expect(ev.legendre_cutoff == 5, || {
            format!("cutoff {} != 5", ev.legendre_cutoff)
        })?;
        Ok("hits {2,3,4}, miss {1}, all q_s outside Q(6), cutoff 5".into())
    });

    gate.criterion(4, "legendre-completeness", || {
        let mut rng = ChaCha20Rng::seed_from_u64(40);
        let mut total_hits = 0usize;
        for trial in 0..200 {
            let den = rng.gen_range(2u64..=10_000);
            let num = rng.gen_range(1..den);
            let x = Rational::new(num.into(), den.into());
            let cf = ContinuedFraction::from_rational(&x);
            let convergents: HashSet<(String, String)> = cf
                .convergents()
                .iter()
                .map(|(p, q)| (p.to_string(), q.to_string()))
                .collect();
            let mut brute: HashSet<(String, String)> = HashSet::new();
            for q in 1u64..=200 {
                let p = (&x * Rational::from_integer(q.into())).round();
                let frac = &p / Rational::from_integer(q.into());
                let d = (&x - &frac).abs();
                let bound = Rational::new(1.into(), (2 * q * q).into());
                if d < bound {
                    let key = (frac.numer().to_string(), frac.denom().to_string());
                    expect(convergents.contains(&key), || {
                        format!(
                            "trial {trial}: {}/{} approximates {x} but is no convergent",
                            key.0, key.1
                        )
                    })?;
                    brute.insert(key);
                    total_hits += 1;
                }
            }
            let filter: HashSet<(String, String)> = cf
                .legendre_filter(200)
                .iter()
                .map(|e| (e.p.to_string(), e.q.to_string()))
                .collect();
            expect(filter == brute, || {
                format!("trial {trial}: filter disagrees with brute force on {x}")
            })?;
        }
        Ok(format!("200 targets, {total_hits} candidate fractions, 0 counterexamples"))
    });

    gate.criterion(5, "transfer-property", || {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let tau = parse_rational("3").unwrap();
        let mut checked = 0u64;
        for trial in 0..100 {
            let n = if rng.gen_bool(0.5) { 2 } else { 3 };
            let mut a: Vec<i64> = (0..n).map(|_| rng.gen_range(-10i64..=10)).collect();
            if a[n - 1] == 0 {
                a[n - 1] = if rng.gen_bool(0.5) { 1 } else { -1 };
            }
            let u = rng.gen_range(-5i64..=5);
            let v = rng.gen_range(1i64..=5);
            let h = Hyperplane::from_i64(&a, u, v).map_err(|e| e.to_string())?;
            let mut x = h.sample_tail(1_000 + trial, 30);
            let tail = h.lift(&x).map_err(|e| e.to_string())?;
            x.push(tail);
            let report = h
                .transfer_property_test(&x, &tau, 500)
                .map_err(|e| e.to_string())?;
            expect(report.violations.is_empty(), || {
                format!(
                    "plane {a:?} = {u}/{v}: {} violations past threshold {}",
                    report.violations.len(),
                    report.threshold
                )
            })?;
            checked += report.hits_checked;
        }
        Ok(format!("100 planes, {checked} approximations checked, 0 violations"))
    });

    gate.criterion(6, "free-property", || {
        let clock = Instant::now();
        for literal in ["kfree:2", "kfree:3", "coprime:6", "coprime:30", "bfree:4,9,25"] {
            let spec = FreeSetSpec::parse(literal).map_err(|e| e.to_string())?;
            let report = spec.verify_free_property(100_000).map_err(|e| e.to_string())?;
            expect(report.is_free(), || {
                format!("{literal}: {} violations", report.violations.len())
            })?;
        }
        let secs = clock.elapsed().as_secs_f64();
        expect(secs < 30.0, || format!("took {secs:.2} s, budget 30 s"))?;
        Ok(format!("5 specs clean up to 10^5 in {secs:.2} s"))
    });

    gate.criterion(7, "convergence-exponent", || {
        let one = Rational::from_integer(1.into());
        let zero = Rational::from_integer(0.into());
        for literal in ["kfree:2", "kfree:3", "coprime:2", "coprime:6", "coprime:30"] {
            let spec = FreeSetSpec::parse(literal).map_err(|e| e.to_string())?;
            let got = spec.convergence_exponent();
            expect(got.value == ExponentValue::Exact(one.clone()), || {
                format!("{literal}: expected exactly 1, got {:?}", got.value)
            })?;
        }
        let finite = FreeSetSpec::table(vec![1, 2, 4], 4, TailRule::Empty)
            .map_err(|e| e.to_string())?;
        expect(
            finite.convergence_exponent().value == ExponentValue::Exact(zero),
            || "finite table: expected exactly 0".into(),
        )?;
        let squares = |n: u64| {
            let r = (n as f64).sqrt().round() as u64;
            (r.saturating_sub(1)..=r + 1).any(|k| k * k == n)
        };
        let grid: Vec<u64> = (1..=6).map(|e| 10u64.pow(e)).collect();
        let fit = counting_exponent_fit(&squares, &grid).map_err(|e| e.to_string())?;
        match fit.value {
            ExponentValue::Fitted { slope, .. } => {
                expect((slope - 0.5).abs() <= 0.02, || {
                    format!("squares fit {slope:.4}, want 0.50 +/- 0.02")
                })?;
                Ok(format!("exact values verified; squares fit {slope:.4}"))
            }
            other => Err(format!("squares fit returned {other:?}")),
        }
    });

    gate.criterion(8, "dimension-abscissa", || {
        let tau = parse_rational("3").unwrap();
        let powers: Vec<u64> = (0..=20).map(|e| 1u64 << e).collect();
        let table = FreeSetSpec::table(powers, 1 << 20, TailRule::PowersOf(2))
            .map_err(|e| e.to_string())?;
        let cases = [
            (FreeSetSpec::parse("bfree:").unwrap(), 1u32, 2.0 / 3.0, "all integers"),
            (table, 1, 1.0 / 3.0, "powers of 2"),
            (FreeSetSpec::parse("kfree:2").unwrap(), 2, 1.0, "squarefree"),
        ];
        let mut shown = Vec::new();
        for (spec, n, want, label) in cases {
            let clock = Instant::now();
            let report =
                critical_exponent(&spec, n, &tau, 1 << 20, 0.05).map_err(|e| e.to_string())?;
            let secs = clock.elapsed().as_secs_f64();
            expect((report.s_star - want).abs() <= 0.05, || {
                format!("{label}: s* = {:.4}, want {want:.4} +/- 0.05", report.s_star)
            })?;
            expect(secs < 60.0, || format!("{label}: took {secs:.2} s, budget 60 s"))?;
            shown.push(format!("{label} {:.3}", report.s_star));
        }
        Ok(shown.join(", "))
    });

    gate.criterion(9, "sandwich-inequalities", || {
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        for trial in 0..20u64 {
            let n = rng.gen_range(2usize..=4);
            let mut a: Vec<i64> = (0..n).map(|_| rng.gen_range(-9i64..=9)).collect();
            if a[n - 1] == 0 {
                a[n - 1] = 3;
            }
            let h = Hyperplane::from_i64(&a, rng.gen_range(-4i64..=4), rng.gen_range(1i64..=4))
                .map_err(|e| e.to_string())?;
            for pair in 0..10_000u64 {
                let y1 = h.sample_tail(trial * 40_000 + 2 * pair, 50);
                let y2 = h.sample_tail(trial * 40_000 + 2 * pair + 1, 50);
                let ok = h.bilipschitz_holds(&y1, &y2).map_err(|e| e.to_string())?;
                expect(ok, || format!("plane {a:?}: pair {pair} breaks the sandwich"))?;
            }
        }
        for literal in ["kfree:2", "kfree:3", "coprime:6", "coprime:30", "bfree:4,9,25"] {
            let spec = FreeSetSpec::parse(literal).map_err(|e| e.to_string())?;
            for nu_text in ["1/2", "1"] {
                let nu = parse_rational(nu_text).unwrap();
                for p_bound in [50u64, 200, 1000] {
                    let r = spec
                        .euler_product_partial(&nu, p_bound, 30)
                        .map_err(|e| e.to_string())?;
                    expect(r.left_le_middle, || {
                        format!("{literal} nu={nu_text} P={p_bound}: left inequality fails")
                    })?;
                }
            }
        }
        Ok("20 planes x 10^4 pairs exact; Euler left inequality on 30 grids".into())
    });

    gate.criterion(10, "cli-determinism", || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let table_path = dir.path().join("pow2.json");
        let members: Vec<u64> = (0..=20).map(|e| 1u64 << e).collect();
        std::fs::write(
            &table_path,
            format!(
                "{{\"members\": {members:?}, \"n_max\": {}, \"tail\": {{\"kind\": \"powers_of\", \"base\": 2}}}}",
                1u64 << 20
            ),
        )
        .map_err(|e| e.to_string())?;
        let table_literal = format!("table:@{}", table_path.display());
        let build = vec![
            "liouville", "build", "--p0", "2", "--p1", "3", "--alpha1", "1", "--steps", "5",
            "--k", "minimal",
        ];
        let evidence = vec![
            "liouville", "evidence", "--p0", "2", "--p1", "3", "--alpha1", "1", "--steps", "5",
            "--k", "minimal", "--tau", "5/2",
        ];
        let dim_ints = vec![
            "dim", "critical", "--spec", "bfree:", "--n", "1", "--tau", "3",
            "--qmax", "1048576",
        ];
        let dim_pow2 = vec![
            "dim", "critical", "--spec", table_literal.as_str(), "--n", "1", "--tau", "3",
            "--qmax", "1048576",
        ];
        let dim_kfree = vec![
            "dim", "critical", "--spec", "kfree:2", "--n", "2", "--tau", "3",
            "--qmax", "1048576",
        ];
        for (label, args) in [
            ("build", &build),
            ("evidence", &evidence),
            ("dim-ints", &dim_ints),
            ("dim-pow2", &dim_pow2),
            ("dim-kfree", &dim_kfree),
        ] {
            let first = cli(args);
            let second = cli(args);
            expect(first.0 == 0 && second.0 == 0, || {
                format!("{label}: exit codes {} and {}", first.0, second.0)
            })?;
            expect(!first.1.is_empty(), || format!("{label}: empty output"))?;
            expect(first.1 == second.1, || {
                format!("{label}: repeated runs differ")
            })?;
        }
        Ok("5 invocations byte-identical across repeated runs".into())
    });

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_bfree-lab"))
        .args(args)
        .output()
        .expect("running the CLI binary");
    (out.status.code().unwrap_or(-1), out.stdout)
}
