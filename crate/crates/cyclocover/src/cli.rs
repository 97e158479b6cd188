//! The `cyclocover` command line: decide single instances, emit
//! classification tables, run the structural verification suite, and run
//! brute-force oracle sweeps.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 resource
//! bound exceeded. Output is deterministic for a fixed invocation (including
//! `--seed`), so JSON and CSV renderings can serve as golden files.

use std::collections::BTreeMap;

use clap::{Parser, Subcommand, ValueEnum};

use crate::criterion::{h_zero_coprime_with, h_zero_with, CriterionConfig, DecisionRecord};
use crate::cyclotomic::{p_part_split, prime_power_split, PPartSplit};
use crate::error::Error;
use crate::finite_field::{BaseField, Field, FieldElement, DEFAULT_FIELD_ORDER_BOUND};
use crate::group_algebra::{
    psi, truncated_algebras_bounded, verify_psi_iso, GroupAlgebra, TruncatedAlgebra,
    TruncatedPoly, DEFAULT_GRAM_DIM_BOUND,
};
use crate::oracle::{exact_h_bruteforce, exists_covering_hyperplane, OracleBudget};
use crate::report::{
    csv_field, to_json, CheckDto, DecideReport, OracleReport, RecordDto, TableReport, TableRow,
    VerifyReport, SCHEMA,
};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "cyclocover", version, about = "Decides whether the only cyclically covering subspace of F_q^n is the full space")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Overrides the resource budgets (field-order bound for the criterion,
    /// work limits for the oracle) with a single value.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for parallel sweeps; defaults to all cores. Ignored
    /// when built without the `parallel` feature.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for the randomized verification checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether h_q(n) = 0.
    Decide {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
    },
    /// Decide h_q(n) = 0 for every n = 1..=n_max.
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long = "n-max")]
        n_max: u64,
    },
    /// Run the structural verification suite at (q, n).
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
    },
    /// Brute-force covering sweep, cross-checked against the criterion.
    Oracle {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        /// Additionally search for covering subspaces up to this codimension.
        #[arg(long = "max-codim")]
        max_codim: Option<u32>,
    },
}

/// Entry point for the binary: parse real argv, print to stdout/stderr.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let (code, stdout, stderr) = run(cli);
    print!("{stdout}");
    eprint!("{stderr}");
    code
}

/// Programmatic entry point used by the tests: `args` excludes the binary
/// name. Returns (exit code, stdout payload).
pub fn execute(args: &[&str]) -> (i32, String) {
    let argv = std::iter::once("cyclocover").chain(args.iter().copied());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return (e.exit_code(), e.render().to_string());
        }
    };
    let (code, stdout, _stderr) = run(cli);
    (code, stdout)
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) if j > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .expect("thread pool construction")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T>(_jobs: Option<usize>, f: impl FnOnce() -> T) -> T {
    f()
}

fn run(cli: Cli) -> (i32, String, String) {
    let ctx = Ctx {
        format: cli.format,
        budget: cli.budget,
        seed: cli.seed,
    };
    let outcome = with_jobs(cli.jobs, || match cli.command {
        Command::Decide { q, n } => cmd_decide(q, n, &ctx),
        Command::Table { q, n_max } => cmd_table(q, n_max, &ctx),
        Command::Verify { q, n } => cmd_verify(q, n, &ctx),
        Command::Oracle { q, n, max_codim } => cmd_oracle(q, n, max_codim, &ctx),
    });
    match outcome {
        Ok((stdout, code)) => (code, stdout, String::new()),
        Err(e) => {
            let code = match e {
                Error::ResourceExceeded { .. } => 3,
                _ => 2,
            };
            (code, String::new(), format!("error: {e}\n"))
        }
    }
}

struct Ctx {
    format: OutputFormat,
    budget: Option<u64>,
    seed: u64,
}

impl Ctx {
    fn criterion_config(&self) -> CriterionConfig {
        match self.budget {
            Some(b) => CriterionConfig { field_order_bound: b },
            None => CriterionConfig::default(),
        }
    }

    fn oracle_budget(&self) -> OracleBudget {
        match self.budget {
            Some(b) => OracleBudget::uniform(b),
            None => OracleBudget::default(),
        }
    }

    fn field_order_bound(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_FIELD_ORDER_BOUND)
    }
}

type CmdResult = crate::Result<(String, i32)>;

// ---------------------------------------------------------------------------
// decide
// ---------------------------------------------------------------------------

fn cmd_decide(q: u64, n: u64, ctx: &Ctx) -> CmdResult {
    let record = h_zero_with(q, n, &ctx.criterion_config())?;
    let out = match ctx.format {
        OutputFormat::Json => to_json(&DecideReport {
            schema: SCHEMA,
            command: "decide",
            record: RecordDto::from(&record),
        }),
        OutputFormat::Csv => {
            let mut s = String::from("n,p_power_k,m,h_zero,failing_coset_rep,error\n");
            s.push_str(&record_csv_row(&record));
            s
        }
        OutputFormat::Text => render_decide_text(&record),
    };
    Ok((out, 0))
}

fn record_csv_row(r: &DecisionRecord) -> String {
    format!(
        "{},{},{},{},{},\n",
        r.n,
        r.split.k,
        r.split.m,
        r.verdict,
        r.failing_coset_rep().map(|x| x.to_string()).unwrap_or_default()
    )
}

fn render_decide_text(r: &DecisionRecord) -> String {
    let mut s = format!(
        "h_{}({}) = 0? {}\n",
        r.q,
        r.n,
        if r.verdict { "yes" } else { "no" }
    );
    s.push_str(&format!(
        "split: n = {}^{} * {}\n",
        r.split.p, r.split.k, r.split.m
    ));
    for v in &r.coset_verdicts {
        let status = if v.passes { "pass" } else { "FAIL" };
        let extra = if let Some(w) = &v.witness {
            format!(" witness={:?}", w.coeffs())
        } else if let Some((c, i)) = &v.counterexample {
            format!(" zero-trace at ({:?}, i={})", c.coeffs(), i)
        } else {
            String::new()
        };
        s.push_str(&format!(
            "coset rep {} (size {}, subgroup order {}, field order {}): {}{}\n",
            v.coset.representative,
            v.coset.size,
            v.coset.subgroup_order,
            v.field.order(),
            status,
            extra
        ));
    }
    s
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

fn cmd_table(q: u64, n_max: u64, ctx: &Ctx) -> CmdResult {
    let (p, _) = prime_power_split(q)?;
    let config = ctx.criterion_config();

    let splits: Vec<PPartSplit> =
        (1..=n_max).map(|n| p_part_split(n, p).expect("p prime, n positive")).collect();
    // verdicts only depend on the coprime part; compute each m once
    let mut ms: Vec<u64> = splits.iter().map(|s| s.m).collect();
    ms.sort_unstable();
    ms.dedup();
    let results = crate::par::map_ordered(ms.clone(), |m| h_zero_coprime_with(q, m, &config));
    let by_m: BTreeMap<u64, crate::Result<DecisionRecord>> =
        ms.into_iter().zip(results).collect();

    let rows: Vec<TableRow> = splits
        .into_iter()
        .map(|split| match &by_m[&split.m] {
            Ok(rec) => {
                let mut r = rec.clone();
                r.n = split.n;
                r.split = split;
                TableRow::Record(RecordDto::from(&r))
            }
            Err(e) => TableRow::Error { q, n: split.n, error: e.to_string() },
        })
        .collect();

    let out = match ctx.format {
        OutputFormat::Json => to_json(&TableReport {
            schema: SCHEMA,
            command: "table",
            q,
            n_max,
            rows,
        }),
        OutputFormat::Csv => {
            let mut s = String::from("n,p_power_k,m,h_zero,failing_coset_rep,error\n");
            for row in &rows {
                match row {
                    TableRow::Record(r) => s.push_str(&format!(
                        "{},{},{},{},{},\n",
                        r.n,
                        r.split.k,
                        r.split.m,
                        r.h_zero,
                        r.failing_coset_rep.map(|x| x.to_string()).unwrap_or_default()
                    )),
                    TableRow::Error { n, error, .. } => {
                        s.push_str(&format!("{n},,,,,{}\n", csv_field(error)))
                    }
                }
            }
            s
        }
        OutputFormat::Text => {
            let mut s = format!("h_{q}(n) = 0 for n = 1..={n_max}\n");
            for row in &rows {
                match row {
                    TableRow::Record(r) => s.push_str(&format!(
                        "n={}: {} (k={}, m={}{})\n",
                        r.n,
                        if r.h_zero { "yes" } else { "no" },
                        r.split.k,
                        r.split.m,
                        r.failing_coset_rep
                            .map(|x| format!(", failing coset {x}"))
                            .unwrap_or_default()
                    )),
                    TableRow::Error { n, error, .. } => {
                        s.push_str(&format!("n={n}: error ({error})\n"))
                    }
                }
            }
            s
        }
    };
    Ok((out, 0))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn sample_element(field: &Field, rng: &mut SplitMix64) -> FieldElement {
    let q = field.base().q();
    let d = field.ext_degree() as usize;
    let mut rank = rng.below(field.order());
    let mut coeffs = vec![0u64; d];
    for slot in coeffs.iter_mut() {
        *slot = rank % q;
        rank /= q;
    }
    field.element(coeffs).expect("sampled coefficients are in range")
}

fn sample_nonzero_poly(alg: &TruncatedAlgebra, rng: &mut SplitMix64) -> TruncatedPoly {
    loop {
        let coeffs: Vec<FieldElement> =
            (0..alg.pk).map(|_| sample_element(alg.field(), rng)).collect();
        if coeffs.iter().any(|c| !c.is_zero()) {
            return alg.element(coeffs).expect("sampled coefficients are in range");
        }
    }
}

fn cmd_verify(q: u64, n: u64, ctx: &Ctx) -> CmdResult {
    let (p, _) = prime_power_split(q)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let split = p_part_split(n, p)?;
    let field = BaseField::from_order(q)?;
    let mut rng = SplitMix64::new(ctx.seed);
    let mut checks: Vec<CheckDto> = Vec::new();

    let psi_report = verify_psi_iso(q, n)?;
    checks.push(CheckDto {
        name: "psi_homomorphism".into(),
        passed: psi_report.homomorphism_ok,
        detail: format!("all {} basis pairs multiplicative", (n as u128) * (n as u128)),
    });
    checks.push(CheckDto {
        name: "psi_bijective".into(),
        passed: psi_report.bijective,
        detail: format!("matrix rank {n} of {n}"),
    });
    // the defining image of the generator survives the round trip
    let ga = GroupAlgebra::new(field.clone(), n)?;
    let img = psi(&ga, &split, &ga.basis(1))?;
    let pk = split.p.pow(split.k);
    let expected_g = {
        let mut v = vec![0u64; (split.m * pk) as usize];
        v[(1 % split.m) as usize * pk as usize] = 1;
        if pk > 1 {
            v[(1 % split.m) as usize * pk as usize + 1] = 1;
        }
        v
    };
    checks.push(CheckDto {
        name: "psi_generator_image".into(),
        passed: img.coeffs == expected_g,
        detail: "generator maps to h(1+u)".into(),
    });

    let algebras = truncated_algebras_bounded(&field, &split, ctx.field_order_bound())?;

    // idempotent relations inside F_q[x]/(x^m − 1)
    let gam = GroupAlgebra::new(field.clone(), split.m)?;
    let es: Vec<_> = algebras
        .iter()
        .map(|a| gam.element(a.component.idempotent.clone()).expect("idempotent has length m"))
        .collect();
    let mut orthogonal = true;
    let mut idempotent = true;
    let mut sum = gam.zero();
    for (s, e_s) in es.iter().enumerate() {
        sum = gam.add(&sum, e_s);
        if &gam.mul(e_s, e_s) != e_s {
            idempotent = false;
        }
        for (t, e_t) in es.iter().enumerate() {
            if s != t && gam.mul(e_s, e_t) != gam.zero() {
                orthogonal = false;
            }
        }
    }
    checks.push(CheckDto {
        name: "idempotents_orthogonal".into(),
        passed: orthogonal,
        detail: format!("{} components", es.len()),
    });
    checks.push(CheckDto {
        name: "idempotents_idempotent".into(),
        passed: idempotent,
        detail: "e_t * e_t = e_t".into(),
    });
    checks.push(CheckDto {
        name: "idempotents_sum_to_one".into(),
        passed: sum == gam.one(),
        detail: "sum over all components".into(),
    });
    checks.push(CheckDto {
        name: "factor_degrees_match_cosets".into(),
        passed: algebras
            .iter()
            .all(|a| (a.component.min_poly.len() - 1) as u64 == a.component.coset.size),
        detail: "deg f_t = coset size".into(),
    });

    for (t, alg) in algebras.iter().enumerate() {
        let rep = alg.component.coset.representative;
        let dim = alg.dim();
        if dim <= DEFAULT_GRAM_DIM_BOUND {
            let rank = alg.gram_rank()?;
            checks.push(CheckDto {
                name: format!("gram_rank[t={t}]"),
                passed: rank as u64 == dim,
                detail: format!("coset rep {rep}: rank {rank} of {dim}"),
            });
        } else {
            checks.push(CheckDto {
                name: format!("gram_rank[t={t}]"),
                passed: true,
                detail: format!("skipped: dimension {dim} exceeds {DEFAULT_GRAM_DIM_BOUND}"),
            });
        }

        let trials = 1000;
        let top = alg.u_power(alg.pk - 1);
        let mut inverse_ok = true;
        for _ in 0..trials {
            let c = sample_nonzero_poly(alg, &mut rng);
            let v = alg.universal_inverse(&c)?;
            if alg.mul(&c, &v) != top {
                inverse_ok = false;
                break;
            }
        }
        checks.push(CheckDto {
            name: format!("universal_inverse_identity[t={t}]"),
            passed: inverse_ok,
            detail: format!("{trials} random nonzero elements"),
        });

        let mut shift_ok = true;
        for i in 0..n {
            let got = alg.shift_multiply(&top, i);
            let want = alg.scale(&top, &alg.component.theta.pow(i));
            if got != want {
                shift_ok = false;
                break;
            }
        }
        checks.push(CheckDto {
            name: format!("shift_scales_top_coefficient[t={t}]"),
            passed: shift_ok,
            detail: format!("all shifts i < {n}"),
        });

        let mut restr_ok = true;
        'outer: for _ in 0..20 {
            let b = sample_nonzero_poly(alg, &mut rng);
            let beta0 = b.coeffs[0].clone();
            for i in 0..n {
                let lhs = alg.res_tr(&alg.mul(&top, &alg.shift_multiply(&b, i)));
                let rhs = alg.component.theta.pow(i).mul(&beta0)?.trace_to_base();
                if lhs != rhs {
                    restr_ok = false;
                    break 'outer;
                }
            }
        }
        checks.push(CheckDto {
            name: format!("residue_trace_matches_field_trace[t={t}]"),
            passed: restr_ok,
            detail: format!("20 random elements, all shifts i < {n}"),
        });
    }

    let all_passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        schema: SCHEMA,
        command: "verify",
        q,
        n,
        split,
        checks,
        all_passed,
    };
    let out = match ctx.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{},{}\n",
                    csv_field(&c.name),
                    c.passed,
                    csv_field(&c.detail)
                ));
            }
            s
        }
        OutputFormat::Text => {
            let mut s = format!("structural checks for q={q}, n={n}\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{} {} — {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            s.push_str(if report.all_passed { "all checks passed\n" } else { "FAILURES present\n" });
            s
        }
    };
    Ok((out, if all_passed { 0 } else { 1 }))
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

fn cmd_oracle(q: u64, n: u64, max_codim: Option<u32>, ctx: &Ctx) -> CmdResult {
    let budget = ctx.oracle_budget();
    let witness = exists_covering_hyperplane(q, n, &budget)?;
    let exact = match max_codim {
        Some(c) => Some(exact_h_bruteforce(q, n, c, &budget)?),
        None => None,
    };
    let criterion_h_zero = h_zero_with(q, n, &ctx.criterion_config()).ok().map(|r| r.verdict);
    let h_zero_oracle = witness.is_none();
    let agrees = criterion_h_zero.map(|c| c == h_zero_oracle);

    let report = OracleReport {
        schema: SCHEMA,
        command: "oracle",
        q,
        n,
        covering_hyperplane: witness.as_ref().map(|w| w.coords().to_vec()),
        h_zero_oracle,
        max_codim,
        exact_h: exact.as_ref().map(|e| e.h),
        exact_h_witness: exact
            .as_ref()
            .and_then(|e| e.witness.as_ref())
            .map(|w| w.rows().to_vec()),
        criterion_h_zero,
        agrees_with_criterion: agrees,
    };

    let out = match ctx.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let mut s =
                String::from("q,n,h_zero_oracle,covering_hyperplane,exact_h,agrees_with_criterion\n");
            s.push_str(&format!(
                "{q},{n},{},{},{},{}\n",
                report.h_zero_oracle,
                report
                    .covering_hyperplane
                    .as_ref()
                    .map(|w| w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default(),
                report.exact_h.map(|h| h.to_string()).unwrap_or_default(),
                report
                    .agrees_with_criterion
                    .map(|a| a.to_string())
                    .unwrap_or_default()
            ));
            s
        }
        OutputFormat::Text => {
            let mut s = format!("oracle sweep for q={q}, n={n}\n");
            match &report.covering_hyperplane {
                Some(w) => s.push_str(&format!("covering hyperplane found: dual {w:?}\n")),
                None => s.push_str("no covering hyperplane (h_q(n) = 0)\n"),
            }
            if let Some(h) = report.exact_h {
                s.push_str(&format!("exact h up to codim {}: {h}\n", max_codim.unwrap_or(0)));
            }
            match report.agrees_with_criterion {
                Some(true) => s.push_str("agrees with criterion: true\n"),
                Some(false) => s.push_str("agrees with criterion: FALSE\n"),
                None => s.push_str("criterion unavailable for comparison\n"),
            }
            s
        }
    };
    Ok((out, 0))
}
