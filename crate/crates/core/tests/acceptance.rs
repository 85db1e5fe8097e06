//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coin_weighing::bounds::{bounds_for, ceil_log};
use coin_weighing::certificate::{check_certificate, find_multipliers};
use coin_weighing::generators::{
    decompose_triangular, generate_binary, generate_helper, generate_particular_coin,
    generate_refined, triangular, triangular_decompositions, BinaryPlan,
};
use coin_weighing::model::{is_consistent, Assignment};
use coin_weighing::search::{compute_omni, compute_omni_with_progress, SearchBudget};
use coin_weighing::verifier::{count_consistent, identifies_all, identifies_coin};
use coin_weighing::{parse_scheme, serialize_scheme, Scheme};
use common::{arbitrary_scheme, covers_by_prefix, naive_consistent, observed_scheme};
use num_rational::BigRational;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> Scheme {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_scheme(&bytes).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn sequence_start() -> Check {
    let start = Instant::now();
    let mut values = Vec::new();
    for n in 1..=6 {
        values.push(
            compute_omni(n, &SearchBudget::default())
                .map_err(|e| e.to_string())?
                .a_of_n,
        );
    }
    let elapsed = start.elapsed();
    ensure!(values == [0, 1, 2, 2, 2, 2], "got {values:?}");
    ensure!(elapsed <= Duration::from_secs(60), "took {}", secs(elapsed));
    Ok(format!("a(1..6) = {values:?} in {}", secs(elapsed)))
}

fn seven_coins() -> Check {
    let run = |jobs: usize| {
        let mut levels = Vec::new();
        let start = Instant::now();
        let budget = SearchBudget {
            jobs,
            ..SearchBudget::default()
        };
        let outcome = compute_omni_with_progress(7, &budget, |l| levels.push(l.clone()));
        (outcome, levels, start.elapsed())
    };
    let (outcome, levels, serial) = run(1);
    let outcome = outcome.map_err(|e| e.to_string())?;
    ensure!(outcome.a_of_n == 3, "a(7) = {}", outcome.a_of_n);
    let two = levels
        .iter()
        .find(|l| l.k == 2)
        .ok_or("level 2 was not scanned")?;
    ensure!(!two.found, "a 2-weighing design was reported");
    ensure!(
        outcome.witness.len() == 3,
        "witness has {} weighings",
        outcome.witness.len()
    );
    ensure!(
        identifies_all(&outcome.witness).map_err(|e| e.to_string())?,
        "witness fails verification"
    );
    ensure!(
        serial <= Duration::from_secs(15 * 60),
        "took {}",
        secs(serial)
    );

    let cores = std::thread::available_parallelism()
        .map(|c| c.get())
        .unwrap_or(1);
    let mut timings = vec![format!("jobs=1 {}", secs(serial))];
    for jobs in [2, 4, 8] {
        let (other, _, t) = run(jobs);
        let other = other.map_err(|e| e.to_string())?;
        ensure!(
            other.a_of_n == outcome.a_of_n && other.witness == outcome.witness,
            "jobs={jobs} gave a different result"
        );
        timings.push(format!("jobs={jobs} {}", secs(t)));
    }
    Ok(format!(
        "{} designs at k=2 ruled out; witness {:?}; {}; {cores} core(s) available, speedup not assessable below 2",
        two.designs_examined,
        outcome.witness.weighings().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        timings.join(", ")
    ))
}

fn fixtures_verify() -> Check {
    let mut notes = Vec::new();
    for (name, cap) in [("n6.scheme", 1), ("n6-alt.scheme", 1), ("n15.scheme", 300)] {
        let s = fixture(name);
        let start = Instant::now();
        let ok = identifies_all(&s).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure!(ok, "{name} does not identify all coins");
        ensure!(t <= Duration::from_secs(cap), "{name} took {}", secs(t));
        notes.push(format!("{name} {}", secs(t)));
    }
    Ok(notes.join(", "))
}

fn nineteen_certificate() -> Check {
    let s = fixture("n19.scheme");
    let lambda: Vec<BigRational> = [12, 7, 3]
        .iter()
        .map(|&x: &i64| BigRational::from_integer(x.into()))
        .collect();
    let check = check_certificate(&s, &lambda).map_err(|e| e.to_string())?;
    ensure!(check.is_accepted(), "(12,7,3) rejected");
    let expected: Vec<BigRational> = [
        22, 19, 16, 15, 12, 10, 9, 8, 7, 5, 4, 3, 2, 0, -3, -5, -7, -9, -12,
    ]
    .iter()
    .map(|&x: &i64| BigRational::from_integer(x.into()))
    .collect();
    ensure!(
        check.certificate().coefficients == expected,
        "coefficients differ"
    );
    let found = find_multipliers(&s)
        .map_err(|e| e.to_string())?
        .ok_or("no multipliers found")?;
    let found_q: Vec<BigRational> = found
        .iter()
        .cloned()
        .map(BigRational::from_integer)
        .collect();
    ensure!(
        check_certificate(&s, &found_q)
            .map_err(|e| e.to_string())?
            .is_accepted(),
        "found multipliers rejected"
    );
    Ok(format!(
        "coefficients match; search found ({})",
        found
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ))
}

fn upper_bounds() -> Check {
    let start = Instant::now();
    for n in 2..=100_000u32 {
        let log2 = ceil_log(2, n as u64) as usize;
        let plan = BinaryPlan::build(n).map_err(|e| e.to_string())?;
        ensure!(
            plan.len() <= 2 * log2,
            "binary n={n}: {} > {}",
            plan.len(),
            2 * log2
        );
        let (helper, _) = generate_helper(n).map_err(|e| e.to_string())?;
        ensure!(
            helper.len() == log2,
            "helper n={n}: {} != {log2}",
            helper.len()
        );
    }
    let sweep = start.elapsed();
    for n in (2..=100_000u32)
        .step_by(4999)
        .chain([65_536, 65_537, 100_000])
    {
        let s = generate_binary(n).map_err(|e| e.to_string())?;
        ensure!(
            s.len() == BinaryPlan::build(n).unwrap().len(),
            "plan and scheme differ at n={n}"
        );
        ensure!(
            is_consistent(&Assignment::identity(n), &s),
            "binary n={n} not consistent"
        );
    }
    for n in 2..=14 {
        for (kind, s) in [
            ("binary", generate_binary(n)),
            ("refined", generate_refined(n)),
        ] {
            let s = s.map_err(|e| e.to_string())?;
            ensure!(
                identifies_all(&s).map_err(|e| e.to_string())?,
                "{kind} n={n} fails"
            );
        }
    }
    Ok(format!(
        "lengths hold for 2..=100000 ({}); binary and refined identify all for n <= 14",
        secs(sweep)
    ))
}

fn particular_coin() -> Check {
    for n in 1..=14 {
        for t in 1..=n {
            let s = generate_particular_coin(n, t).map_err(|e| format!("n={n} t={t}: {e}"))?;
            ensure!(s.len() <= 7, "n={n} t={t} uses {}", s.len());
            ensure!(
                identifies_coin(&s, t).map_err(|e| e.to_string())?.pinned,
                "n={n} t={t} not pinned"
            );
        }
    }
    let start = Instant::now();
    let mut longest = 0;
    for n in 1..=1000 {
        let identity = Assignment::identity(n);
        for t in 1..=n {
            let s = generate_particular_coin(n, t).map_err(|e| format!("n={n} t={t}: {e}"))?;
            ensure!(s.len() <= 7, "n={n} t={t} uses {}", s.len());
            ensure!(
                is_consistent(&identity, &s),
                "n={n} t={t} misreports an outcome"
            );
            longest = longest.max(s.len());
        }
    }
    Ok(format!(
        "pinned for n <= 14; legal with at most {longest} weighings for n <= 1000 ({})",
        secs(start.elapsed())
    ))
}

fn gauss() -> Check {
    let start = Instant::now();
    for m in 0..=1_000_000u64 {
        // the lazy sequence is the list in order, so a first element means non-empty
        ensure!(
            triangular_decompositions(m).next().is_some(),
            "m={m} has no decomposition"
        );
    }
    let t = start.elapsed();
    ensure!(t <= Duration::from_secs(60), "took {}", secs(t));
    for m in (0..=1_000_000u64).step_by(9973).chain(0..=2000) {
        let all = decompose_triangular(m);
        ensure!(
            all.first() == triangular_decompositions(m).next().as_ref(),
            "m={m}: lazy and full lists differ"
        );
        ensure!(
            all.iter()
                .all(|p| triangular(p.a) + triangular(p.b) + triangular(p.c) == m),
            "m={m}: bad triple"
        );
    }
    Ok(format!(
        "0..=1000000 in {}; full lists cross-checked on a sample",
        secs(t)
    ))
}

fn thresholds() -> Check {
    let cl = |n: u64| bounds_for(n).conditional_lower;
    ensure!(
        cl(24) == 3 && cl(25) == 4,
        "3->4 crossing: cl(24)={} cl(25)={}",
        cl(24),
        cl(25)
    );
    ensure!(
        cl(72) == 4 && cl(73) == 5,
        "4->5 crossing: cl(72)={} cl(73)={}",
        cl(72),
        cl(73)
    );
    for n in 2..=200 {
        ensure!(cl(n) <= cl(n + 1), "not monotone at {n}");
    }
    let r = bounds_for(58).refined_upper;
    ensure!(r == 12, "refined_upper(58) = {r}");
    Ok("3->4 at 25, 4->5 at 73, refined_upper(58) = 12".into())
}

fn property_suites() -> Check {
    let run = |cases: u32,
               name: &str,
               f: &dyn Fn(&mut TestRunner) -> Result<(), String>|
     -> Result<(), String> {
        let mut runner = TestRunner::new(Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        });
        f(&mut runner).map_err(|e| format!("{name}: {e}"))
    };
    let fail = |msg: String| TestCaseError::fail(msg);

    run(256, "pigeonhole", &|r| {
        r.run(&observed_scheme(2..=10, 0..=2), |s| {
            if s.len() >= ceil_log(3, s.n() as u64) as usize {
                return Ok(());
            }
            if identifies_all(&s).unwrap() {
                return Err(fail(format!("{s:?} identifies all")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    run(256, "pan swap", &|r| {
        r.run(&arbitrary_scheme(2..=8, 1..=3), |s| {
            let a = count_consistent(&s, u64::MAX).unwrap().consistent_count;
            let b = count_consistent(&s.swapped(), u64::MAX)
                .unwrap()
                .consistent_count;
            if a != b {
                return Err(fail(format!("{a} vs {b}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    run(64, "naive oracle", &|r| {
        r.run(&arbitrary_scheme(1..=8, 0..=3), |s| {
            let naive = naive_consistent(&s).len() as u64;
            let fast = count_consistent(&s, u64::MAX).unwrap().consistent_count;
            if naive != fast {
                return Err(fail(format!("naive {naive}, verifier {fast}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    run(256, "round trip", &|r| {
        r.run(&arbitrary_scheme(1..=30, 0..=8), |s| {
            if parse_scheme(&serialize_scheme(&s)).unwrap() != s {
                return Err(fail("round trip changed the scheme".into()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    for n in 2..=100_000u32 {
        let (_, set) = generate_helper(n).map_err(|e| e.to_string())?;
        ensure!(
            covers_by_prefix(&set.coins, n),
            "helper coins of {n} miss some amount"
        );
    }
    Ok(
        "pigeonhole, pan swap, naive oracle (n <= 8), round trip, helper coverage (n <= 100000)"
            .into(),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("1 sequence a(1..6)", sequence_start),
        ("2 a(7) = 3", seven_coins),
        ("3 fixtures verify", fixtures_verify),
        ("4 n=19 certificate", nineteen_certificate),
        ("5 upper bounds", upper_bounds),
        ("6 particular coin", particular_coin),
        ("7 three triangular numbers", gauss),
        ("8 bound thresholds", thresholds),
        ("9 property suites", property_suites),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (name, check) in criteria {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
