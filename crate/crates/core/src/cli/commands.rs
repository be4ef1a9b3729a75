use std::io::Write;

use num_rational::BigRational;
use num_traits::One;

use super::output::{Cell, Envelope};
use super::{
    CliError, CountsArgs, ExpectArgs, Settings, SimulateArgs, VerifyArgs, EXIT_CHECK_FAILED,
    EXIT_OK,
};
use crate::counts::{ratio_diagnostic, CountTable, RunSpec};
use crate::distribution::{tail_mass_from, truncated_expectation_from};
use crate::genfunc::{
    eval_y, eval_y_prime, eval_y_prime_quotient_rule, expectation, expectation_closed_form,
    series_tail,
};
use crate::oracle::{enumerate_counts, enumerate_truncated_expectation, simulate as run_sim, SimConfig};
use crate::rational::{half, parse_exact, to_f64};

/// Upper bound on the automatic series truncation.
pub(crate) const AUTO_TRUNCATION_LIMIT: usize = 4096;

/// Largest `n` checked by exhaustive enumeration in `verify`.
pub(crate) const VERIFY_EXHAUSTIVE_N: u32 = 18;

/// Values in the widely reproduced table of expectations for k = 1..=5.
const REFERENCE_TABLE: [u64; 5] = [2, 2, 14, 30, 62];

type CmdResult = Result<u8, CliError>;

fn auto_truncation(spec: RunSpec) -> usize {
    1usize
        .checked_shl(spec.k())
        .and_then(|p| p.checked_mul(64))
        .map_or(AUTO_TRUNCATION_LIMIT, |n| n.min(AUTO_TRUNCATION_LIMIT))
}

pub(super) fn counts(args: CountsArgs, settings: Settings, out: &mut dyn Write) -> CmdResult {
    let spec = RunSpec::new(args.k)?;
    let table = CountTable::build_with_cap(spec, args.n_max, settings.table_cap)?;
    let mut env = Envelope::new("counts", vec!["n", "count"]);
    env.param("k", args.k)
        .param("n_max", args.n_max)
        .param("table_cap", settings.table_cap);
    for (n, g) in table.values().iter().enumerate() {
        env.push(vec![Cell::Int(n as u64), Cell::exact(g)]);
    }
    env.write(args.format, out)?;
    Ok(EXIT_OK)
}

pub(super) fn expect(args: ExpectArgs, settings: Settings, out: &mut dyn Write) -> CmdResult {
    if args.k_min > args.k_max {
        return Err(CliError::Usage(format!(
            "empty range: --k-min {} exceeds --k-max {}",
            args.k_min, args.k_max
        )));
    }
    let specs = (args.k_min..=args.k_max)
        .map(RunSpec::new)
        .collect::<crate::Result<Vec<_>>>()?;
    if args.n_max == Some(0) {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }

    let mut env = Envelope::new(
        "expect",
        vec![
            "k",
            "closed_form",
            "half_y_prime",
            "exact_agree",
            "n_max",
            "truncated_series",
            "truncated_gap",
            "truncated_series_approx",
            "truncated_gap_approx",
            "mc_mean_approx",
            "mc_three_sigma_approx",
            "reference_table",
            "note",
        ],
    );
    env.param("k_min", args.k_min).param("k_max", args.k_max).param(
        "n_max",
        args.n_max.map_or_else(
            || format!("auto:min(64*2^k,{AUTO_TRUNCATION_LIMIT})"),
            |n| n.to_string(),
        ),
    );
    env.param("simulate", args.simulate);
    if args.simulate {
        env.param("trials", args.trials).param("seed", args.seed);
    }
    env.param("table_cap", settings.table_cap);

    let mut all_agree = true;
    for spec in specs {
        let closed = expectation_closed_form(spec);
        let from_derivative = expectation(spec);
        let quotient = eval_y_prime_quotient_rule(spec, &half())? * half();
        let agree = closed == from_derivative && closed == quotient;
        all_agree &= agree;

        let n_max = args.n_max.unwrap_or_else(|| auto_truncation(spec));
        let table = CountTable::build_with_cap(spec, n_max, settings.table_cap)?;
        let truncated = truncated_expectation_from(&table, n_max)?;
        let gap = &closed - &truncated;

        let (mc_mean, mc_band) = if args.simulate {
            let report = run_sim(&SimConfig::fair(spec, args.trials, args.seed))?;
            (report.sample_mean, report.three_sigma_band())
        } else {
            (None, None)
        };

        let reference = REFERENCE_TABLE.get(spec.k() as usize - 1).copied();
        let note = match reference {
            Some(r) if BigRational::from_integer(r.into()) != closed => format!(
                "reference table prints {r}; closed form and derivative both give {closed}"
            ),
            _ => String::new(),
        };
        env.push(vec![
            Cell::Int(u64::from(spec.k())),
            Cell::exact(&closed),
            Cell::exact(&from_derivative),
            Cell::Bool(agree),
            Cell::Int(n_max as u64),
            Cell::exact(&truncated),
            Cell::exact(&gap),
            Cell::Approx(Some(to_f64(&truncated))),
            Cell::Approx(Some(to_f64(&gap))),
            Cell::Approx(mc_mean),
            Cell::Approx(mc_band),
            reference.map_or(Cell::Text(String::new()), |r| Cell::Text(r.to_string())),
            Cell::Text(note),
        ]);
    }
    env.write(args.format, out)?;
    Ok(if all_agree { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub(super) fn simulate(args: SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let spec = RunSpec::new(args.k)?;
    let p = parse_exact(&args.p)?;
    let mut config = SimConfig::fair(spec, args.trials, args.seed).with_success_prob(p);
    if let Some(cap) = args.max_steps {
        config = config.with_max_steps(cap);
    }
    let report = run_sim(&config)?;

    let mut env = Envelope::new(
        "simulate",
        vec![
            "k",
            "success_prob",
            "trials",
            "completed_trials",
            "truncated_trials",
            "sample_mean",
            "sample_variance",
            "three_sigma_band",
            "reference_mean",
            "within_three_sigma",
            "max_steps_per_trial",
            "seed",
            "rng_algorithm",
        ],
    );
    env.param("k", args.k)
        .param("p", &args.p)
        .param("trials", args.trials)
        .param("seed", args.seed)
        .param("max_steps", config.max_steps_per_trial);

    let (reference, within) = if config.is_fair() {
        let e = expectation_closed_form(spec);
        let within = report.within_three_sigma(to_f64(&e));
        (Cell::exact(e), Cell::Bool(within))
    } else {
        (Cell::Text(String::new()), Cell::Text(String::new()))
    };
    env.push(vec![
        Cell::Int(u64::from(report.k)),
        Cell::exact(&report.success_prob),
        Cell::Int(report.trials),
        Cell::Int(report.completed_trials),
        Cell::Int(report.truncated_trials),
        Cell::Approx(report.sample_mean),
        Cell::Approx(report.sample_variance),
        Cell::Approx(report.three_sigma_band()),
        reference,
        within,
        Cell::Int(report.max_steps_per_trial),
        Cell::Int(report.seed),
        Cell::Text(report.rng_algorithm.to_string()),
    ]);
    env.write(args.format, out)?;
    Ok(EXIT_OK)
}

struct Check {
    name: String,
    k: u32,
    failure: Option<String>,
}

fn verify_k(spec: RunSpec, cap: usize) -> Result<Vec<Check>, CliError> {
    let k = spec.k();
    let tail_n = 64 * k as usize;
    let table = CountTable::build_with_cap(spec, tail_n.max(VERIFY_EXHAUSTIVE_N as usize), cap)?;
    let mut checks = Vec::new();
    let mut push = |name: String, failure: Option<String>| {
        checks.push(Check { name, k, failure });
    };

    let mismatch = (0..=VERIFY_EXHAUSTIVE_N).find_map(|n| {
        let exhaustive = enumerate_counts(spec, n).ok()?;
        let recurrence = &table.values()[n as usize];
        (exhaustive != *recurrence)
            .then(|| format!("n={n}: recurrence {recurrence}, exhaustive {exhaustive}"))
    });
    push(
        format!("g(n,k) recurrence = exhaustive count for n<={VERIFY_EXHAUSTIVE_N}"),
        mismatch,
    );

    let n = VERIFY_EXHAUSTIVE_N;
    let exhaustive = enumerate_truncated_expectation(spec, n)?;
    let recurrence = truncated_expectation_from(&table, n as usize)?;
    push(
        format!("truncated E recurrence = exhaustive at n={n}"),
        (exhaustive != recurrence)
            .then(|| format!("difference {}", &recurrence - &exhaustive)),
    );

    let tail = tail_mass_from(&table, tail_n)?;
    let boundary = series_tail(&table, &half(), tail_n)?;
    push(
        format!("1 - cdf(n) = boundary-term tail at n={tail_n}"),
        (tail != boundary).then(|| format!("difference {}", &tail - &boundary)),
    );

    let ratios = ratio_diagnostic(spec, tail_n)?;
    push(
        format!("g(i+1,k)/(2g(i,k)) < 1 for {}<=i<{tail_n}", ratios.strict_from()),
        (!ratios.strict_tail_holds()).then(|| "a ratio reached 1".to_string()),
    );

    let y = eval_y(spec, &half())?;
    push(
        "y(1/2)=1".to_string(),
        (!y.is_one()).then(|| format!("y(1/2) = {y}")),
    );

    let simplified = eval_y_prime(spec, &half())?;
    let quotient = eval_y_prime_quotient_rule(spec, &half())?;
    push(
        "y'(1/2) simplified form = quotient rule".to_string(),
        (simplified != quotient).then(|| format!("difference {}", &simplified - &quotient)),
    );

    let e = expectation(spec);
    let closed = expectation_closed_form(spec);
    push(
        "y'(1/2)/2 = 2(2^k-1)".to_string(),
        (e != closed).then(|| format!("{e} != {closed}")),
    );
    Ok(checks)
}

pub(super) fn verify(args: VerifyArgs, settings: Settings, out: &mut dyn Write) -> CmdResult {
    let last = RunSpec::new(args.k_max)?;
    let mut env = Envelope::new("verify", vec!["check", "k", "status", "detail"]);
    env.param("k_max", args.k_max)
        .param("exhaustive_n", VERIFY_EXHAUSTIVE_N)
        .param("tail_n", "64*k")
        .param("table_cap", settings.table_cap);
    let mut all_pass = true;
    for k in 1..=last.k() {
        let spec = RunSpec::new(u64::from(k))?;
        for check in verify_k(spec, settings.table_cap)? {
            all_pass &= check.failure.is_none();
            env.push(vec![
                Cell::Text(check.name),
                Cell::Int(u64::from(check.k)),
                Cell::Text(if check.failure.is_none() { "PASS" } else { "FAIL" }.into()),
                Cell::Text(check.failure.unwrap_or_default()),
            ]);
        }
    }
    env.write(args.format, out)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
