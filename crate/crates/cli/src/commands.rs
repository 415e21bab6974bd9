use maxcorr::closed_form::{
    bernoulli_min_table, binomial_hazard, r_binomial, r_continuous, r_geometric, r_marshall_olkin,
    r_ml, r_poisson, upper_bound,
};
use maxcorr::family::verify;
use maxcorr::montecarlo::{mc_replicates, summarize};
use maxcorr::oracle::svd_maxcorr;
use maxcorr::{Error, Family, MCConfig, OverlapScheme};
use serde_json::{json, Value};

use crate::args::{
    Command, DiscreteFamily, FormulaArgs, FormulaFamily, JointArgs, McArgs, Params, SweepArgs,
    SweepKind, VerifyArgs,
};
use crate::format::{csv_field, key_values, round_sig, sig, Format};
use crate::grid::{parse_counts, parse_list};
use crate::{Cli, CliError, Output};

// Allowed decrease between neighbouring grid points of r_ml.
const MONOTONE_SLACK: f64 = 1e-12;

struct Ctx {
    format: Option<Format>,
    digits: usize,
}

impl Ctx {
    fn num(&self, x: f64) -> String {
        sig(x, self.digits)
    }

    fn jnum(&self, x: f64) -> Value {
        json!(round_sig(x, self.digits))
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

/// Executes one parsed command line.
pub fn run(cli: Cli) -> Result<Output, CliError> {
    let ctx = Ctx {
        format: cli.format,
        digits: cli.precision as usize,
    };
    match cli.command {
        Command::Formula(a) => formula(&ctx, a),
        Command::Verify(a) => verify_cmd(&ctx, a),
        Command::Sweep(a) => sweep(&ctx, a),
        Command::Mc(a) => mc(&ctx, a),
        Command::Joint(a) => joint(&ctx, a),
    }
}

fn ok(body: String) -> Result<Output, CliError> {
    Ok(Output { body, ok: true })
}

fn json_body(v: Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn scheme_of(params: &Params) -> Result<OverlapScheme, CliError> {
    let s = params
        .scheme
        .as_deref()
        .ok_or_else(|| usage("--scheme n,m,l is required"))?;
    Ok(s.parse()?)
}

/// Rejects parameter flags that do not apply to `what`.
fn only(params: &Params, allowed: &[&str], what: &str) -> Result<(), CliError> {
    let given = [
        ("p", params.p.is_some()),
        ("lambda", params.lambda.is_some()),
        ("d", params.d.is_some()),
        ("rates", params.rates.is_some()),
    ];
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            return Err(usage(format!("--{flag} does not apply to {what}")));
        }
    }
    Ok(())
}

fn single_p(params: &Params, what: &str) -> Result<f64, CliError> {
    let raw = params.p.as_deref().ok_or_else(|| usage(format!("{what} needs --p")))?;
    match parse_list("p", raw)?.as_slice() {
        [p] => Ok(*p),
        _ => Err(usage(format!("{what} takes a single --p value"))),
    }
}

fn discrete_family(kind: DiscreteFamily, params: &Params, n: usize) -> Result<Family, CliError> {
    let per_variable = |name: &str| -> Result<Vec<f64>, CliError> {
        only(params, &["p"], name)?;
        let raw = params.p.as_deref().ok_or_else(|| usage(format!("{name} needs --p")))?;
        let ps = parse_list("p", raw)?;
        Ok(if ps.len() == 1 { vec![ps[0]; n] } else { ps })
    };
    Ok(match kind {
        DiscreteFamily::Bernoulli => Family::Bernoulli {
            ps: per_variable("bernoulli")?,
        },
        DiscreteFamily::Geometric => Family::Geometric {
            ps: per_variable("geometric")?,
        },
        DiscreteFamily::Binomial => {
            only(params, &["p", "d"], "binomial")?;
            let trials = params.d.ok_or_else(|| usage("binomial needs --d"))?;
            Family::Binomial {
                trials,
                p: single_p(params, "binomial")?,
            }
        }
        DiscreteFamily::Poisson => {
            only(params, &["lambda"], "poisson")?;
            Family::Poisson {
                rate: params.lambda.ok_or_else(|| usage("poisson needs --lambda"))?,
            }
        }
    })
}

fn rates_of(params: &Params) -> Result<[f64; 3], CliError> {
    let raw = params.rates.as_deref().ok_or_else(|| usage("--rates l1,l2,l3 is required"))?;
    match parse_list("rates", raw)?.as_slice() {
        [a, b, c] => Ok([*a, *b, *c]),
        other => Err(usage(format!("--rates needs 3 values, got {}", other.len()))),
    }
}

/// The Marshall-Olkin pair is the (3,2,1) scheme; any other `--scheme` is an error.
fn mo_scheme(params: &Params) -> Result<OverlapScheme, CliError> {
    let s = OverlapScheme::new(3, 2, 1)?;
    if let Some(given) = &params.scheme {
        if given.parse::<OverlapScheme>()? != s {
            return Err(usage("marshall-olkin is defined on scheme 3,2,1"));
        }
    }
    Ok(s)
}

fn formula(ctx: &Ctx, a: FormulaArgs) -> Result<Output, CliError> {
    let p = &a.params;
    let (name, scheme, result) = match a.family {
        FormulaFamily::Continuous => {
            only(p, &[], "continuous")?;
            let s = scheme_of(p)?;
            ("continuous", s, r_continuous(&s))
        }
        FormulaFamily::MarshallOlkin => {
            only(p, &["rates"], "marshall-olkin")?;
            let s = mo_scheme(p)?;
            let [l1, l2, l3] = rates_of(p)?;
            let value = r_marshall_olkin(l1, l2, l3)?;
            let r = maxcorr::MaxCorrResult {
                value,
                method: maxcorr::Method::ClosedForm,
                error_budget: 0.0,
            };
            ("marshall-olkin", s, r)
        }
        other => {
            let kind = match other {
                FormulaFamily::Bernoulli => DiscreteFamily::Bernoulli,
                FormulaFamily::Geometric => DiscreteFamily::Geometric,
                FormulaFamily::Binomial => DiscreteFamily::Binomial,
                _ => DiscreteFamily::Poisson,
            };
            let s = scheme_of(p)?;
            let family = discrete_family(kind, p, s.n())?;
            (family.name(), s, family.closed_form(&s)?)
        }
    };
    let bound = upper_bound(&scheme);
    let body = match ctx.format_or(Format::Text) {
        Format::Text => key_values(&[
            ("family", name.to_string()),
            ("scheme", scheme.to_string()),
            ("value", ctx.num(result.value)),
            ("upper_bound", ctx.num(bound)),
        ]),
        Format::Json => json_body(json!({
            "family": name,
            "scheme": scheme.to_string(),
            "value": ctx.jnum(result.value),
            "method": result.method.to_string(),
            "error_budget": result.error_budget,
            "upper_bound": ctx.jnum(bound),
        })),
        Format::Csv => format!(
            "family,scheme,value,upper_bound\n{name},{},{},{}\n",
            csv_field(&scheme.to_string()),
            ctx.num(result.value),
            ctx.num(bound)
        ),
    };
    ok(body)
}

fn verify_cmd(ctx: &Ctx, a: VerifyArgs) -> Result<Output, CliError> {
    let s = scheme_of(&a.params)?;
    let family = discrete_family(a.family, &a.params, s.n())?;
    let v = match verify(&family, &s, a.tail_eps, a.tol, a.max_iter) {
        Ok(v) => v,
        Err(Error::NoConvergence { last, iterations }) => {
            return Ok(Output {
                body: format!(
                    "ace did not converge after {iterations} iterations (last value {}, delta {})\n",
                    ctx.num(last.value),
                    ctx.num(last.error_budget)
                ),
                ok: false,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let passed = v.passed();
    let fns = |f: &[(i64, f64)]| -> Vec<Value> { f.iter().map(|(x, y)| json!([x, ctx.jnum(*y)])).collect() };
    let body = match ctx.format_or(Format::Text) {
        Format::Text => {
            let mut out = key_values(&[
                ("family", family.name().to_string()),
                ("scheme", s.to_string()),
                ("table", format!("{}x{}", v.table_shape.0, v.table_shape.1)),
                ("truncated_mass", ctx.num(v.truncated_mass)),
                ("closed_form", ctx.num(v.closed_form)),
                ("svd", ctx.num(v.svd)),
                ("ace", ctx.num(v.ace)),
                ("max_diff", ctx.num(v.max_diff)),
                ("tolerance", ctx.num(v.tolerance())),
                ("upper_bound", ctx.num(v.upper_bound)),
                ("status", if passed { "pass" } else { "FAIL" }.to_string()),
            ]);
            if a.dump_functions {
                for (label, f) in [("phi(u)", &v.spectral.left_fn), ("psi(v)", &v.spectral.right_fn)] {
                    out.push_str(&format!("{label}:\n"));
                    for (x, y) in f {
                        out.push_str(&format!("  {x} {}\n", ctx.num(*y)));
                    }
                }
            }
            out
        }
        Format::Json => {
            let mut obj = json!({
                "family": family.name(),
                "scheme": s.to_string(),
                "table_shape": [v.table_shape.0, v.table_shape.1],
                "truncated_mass": v.truncated_mass,
                "closed_form": ctx.jnum(v.closed_form),
                "svd": ctx.jnum(v.svd),
                "ace": ctx.jnum(v.ace),
                "max_diff": ctx.jnum(v.max_diff),
                "tolerance": v.tolerance(),
                "upper_bound": ctx.jnum(v.upper_bound),
                "passed": passed,
            });
            if a.dump_functions {
                obj["left_fn"] = Value::Array(fns(&v.spectral.left_fn));
                obj["right_fn"] = Value::Array(fns(&v.spectral.right_fn));
            }
            json_body(obj)
        }
        Format::Csv => {
            let mut out = format!(
                "closed_form,svd,ace,max_diff,tolerance,truncated_mass,passed\n{},{},{},{},{},{},{passed}\n",
                ctx.num(v.closed_form),
                ctx.num(v.svd),
                ctx.num(v.ace),
                ctx.num(v.max_diff),
                ctx.num(v.tolerance()),
                ctx.num(v.truncated_mass),
            );
            if a.dump_functions {
                out.push_str("side,point,score\n");
                for (side, f) in [("left", &v.spectral.left_fn), ("right", &v.spectral.right_fn)] {
                    for (x, y) in f {
                        out.push_str(&format!("{side},{x},{}\n", ctx.num(*y)));
                    }
                }
            }
            out
        }
    };
    Ok(Output { body, ok: passed })
}

struct SweepRow {
    param: f64,
    closed_form: f64,
    oracle: Option<f64>,
}

impl SweepRow {
    fn abs_diff(&self) -> Option<f64> {
        self.oracle.map(|o| (self.closed_form - o).abs())
    }
}

fn sweep(ctx: &Ctx, a: SweepArgs) -> Result<Output, CliError> {
    let p = &a.params;
    let mut summary: Option<(&str, bool)> = None;
    let mut scheme = None;
    let rows: Vec<SweepRow> = match a.kind {
        SweepKind::RmlMonotone => {
            only(p, &[], "rml_monotone")?;
            let s = scheme_of(p)?;
            scheme = Some(s);
            if a.grid < 2 {
                return Err(usage("--grid must be at least 2"));
            }
            let mut rows = Vec::with_capacity(a.grid);
            for i in 1..=a.grid {
                let x = i as f64 / (a.grid + 1) as f64;
                let table = bernoulli_min_table(&vec![x; s.n()], &s)?.to_joint();
                rows.push(SweepRow {
                    param: x,
                    closed_form: r_ml(x, &s)?,
                    oracle: Some(svd_maxcorr(&table)?.value),
                });
            }
            let monotone = rows
                .windows(2)
                .all(|w| w[1].closed_form >= w[0].closed_form - MONOTONE_SLACK);
            summary = Some(("monotone", monotone));
            rows
        }
        SweepKind::PoissonLimit => {
            only(p, &["lambda"], "poisson_limit")?;
            let s = scheme_of(p)?;
            scheme = Some(s);
            let lambda = p.lambda.ok_or_else(|| usage("poisson_limit needs --lambda"))?;
            let limit = r_poisson(lambda, &s)?.value;
            parse_counts("k", &a.k)?
                .into_iter()
                .map(|k| {
                    if (k as f64) <= lambda {
                        return Err(usage(format!("--k values must exceed lambda = {lambda}, got {k}")));
                    }
                    Ok(SweepRow {
                        param: k as f64,
                        closed_form: r_binomial(k, lambda / k as f64, &s)?.value,
                        oracle: Some(limit),
                    })
                })
                .collect::<Result<_, CliError>>()?
        }
        SweepKind::MoLimit => {
            only(p, &["rates"], "mo_limit")?;
            let s = mo_scheme(p)?;
            scheme = Some(s);
            let rates = rates_of(p)?;
            let limit = r_marshall_olkin(rates[0], rates[1], rates[2])?;
            parse_list("h", &a.h)?
                .into_iter()
                .map(|h| {
                    if h.is_nan() || h <= 0.0 {
                        return Err(usage(format!("--h values must be positive, got {h}")));
                    }
                    let ps: Vec<f64> = rates.iter().map(|l| -(-l * h).exp_m1()).collect();
                    Ok(SweepRow {
                        param: h,
                        closed_form: r_geometric(&ps, &s)?.value,
                        oracle: Some(limit),
                    })
                })
                .collect::<Result<_, CliError>>()?
        }
        SweepKind::Hazard => {
            only(p, &["d", "p"], "hazard")?;
            let d = p.d.ok_or_else(|| usage("hazard needs --d"))?;
            let prob = single_p(p, "hazard")?;
            let rows = (1..=d + 1)
                .map(|k| {
                    Ok(SweepRow {
                        param: k as f64,
                        closed_form: binomial_hazard(d, prob, k)?,
                        oracle: None,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let non_increasing = rows.windows(2).all(|w| w[1].closed_form <= w[0].closed_form);
            summary = Some(("non_increasing", non_increasing));
            rows
        }
    };

    let opt = |x: Option<f64>| x.map(|v| ctx.num(v)).unwrap_or_default();
    let body = match ctx.format_or(Format::Csv) {
        Format::Csv | Format::Text => {
            let sep = if ctx.format_or(Format::Csv) == Format::Csv { "," } else { "\t" };
            let mut out = ["param", "closed_form", "oracle", "abs_diff"].join(sep);
            out.push('\n');
            for r in &rows {
                let cells = [ctx.num(r.param), ctx.num(r.closed_form), opt(r.oracle), opt(r.abs_diff())];
                out.push_str(&cells.join(sep));
                out.push('\n');
            }
            if let Some((key, flag)) = summary {
                out.push_str(&format!("{key}={flag}\n"));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "param": r.param,
                        "closed_form": ctx.jnum(r.closed_form),
                        "oracle": r.oracle.map(|o| ctx.jnum(o)),
                        "abs_diff": r.abs_diff().map(|d| ctx.jnum(d)),
                    })
                })
                .collect();
            let mut obj = json!({ "kind": sweep_name(a.kind), "rows": rows });
            if let Some(s) = scheme {
                obj["scheme"] = json!(s.to_string());
            }
            if let Some((key, flag)) = summary {
                obj[key] = json!(flag);
            }
            json_body(obj)
        }
    };
    Ok(Output {
        body,
        ok: summary.is_none_or(|(_, flag)| flag),
    })
}

fn sweep_name(kind: SweepKind) -> &'static str {
    match kind {
        SweepKind::RmlMonotone => "rml_monotone",
        SweepKind::PoissonLimit => "poisson_limit",
        SweepKind::MoLimit => "mo_limit",
        SweepKind::Hazard => "hazard",
    }
}

fn mc(ctx: &Ctx, a: McArgs) -> Result<Output, CliError> {
    let s = scheme_of(&a.params)?;
    let family = discrete_family(a.family, &a.params, s.n())?;
    let cfg = MCConfig::new(a.n, a.seed, a.replicates)?;
    let closed = family.closed_form(&s)?.value;
    let reps = mc_replicates(&family.marginals(&s)?, &s, &cfg)?;
    let summary = summarize(&reps);
    let (mean, se) = (summary.value, summary.error_budget);
    let body = match ctx.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("replicate,n_samples,estimate,closed_form,abs_error\n");
            for r in &reps {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.replicate,
                    r.n_samples,
                    ctx.num(r.estimate),
                    ctx.num(closed),
                    ctx.num((r.estimate - closed).abs())
                ));
            }
            out.push_str(&format!(
                "# mean {} se {} closed_form {} abs_error {}\n",
                ctx.num(mean),
                ctx.num(se),
                ctx.num(closed),
                ctx.num((mean - closed).abs())
            ));
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &reps {
                out.push_str(&format!("replicate {}: {}\n", r.replicate, ctx.num(r.estimate)));
            }
            out.push_str(&key_values(&[
                ("mean", format!("{} +- {}", ctx.num(mean), ctx.num(se))),
                ("closed_form", ctx.num(closed)),
                ("abs_error", ctx.num((mean - closed).abs())),
            ]));
            out
        }
        Format::Json => json_body(json!({
            "family": family.name(),
            "scheme": s.to_string(),
            "seed": a.seed,
            "n_samples": a.n,
            "replicates": reps.iter().map(|r| json!({
                "replicate": r.replicate,
                "n_samples": r.n_samples,
                "estimate": ctx.jnum(r.estimate),
                "abs_error": ctx.jnum((r.estimate - closed).abs()),
            })).collect::<Vec<_>>(),
            "mean": ctx.jnum(mean),
            "se": ctx.jnum(se),
            "closed_form": ctx.jnum(closed),
            "abs_error": ctx.jnum((mean - closed).abs()),
        })),
    };
    ok(body)
}

fn joint(ctx: &Ctx, a: JointArgs) -> Result<Output, CliError> {
    let s = scheme_of(&a.params)?;
    let family = discrete_family(a.family, &a.params, s.n())?;
    let table = family.min_joint(&s, a.tail_eps)?;
    let body = match ctx.format_or(Format::Csv) {
        Format::Json => json_body(serde_json::to_value(&table).expect("joint tables serialize")),
        Format::Csv | Format::Text => {
            let mut out = table.to_csv_with(|x| ctx.num(x));
            out.push_str(&format!("# truncated_mass {}\n", ctx.num(table.truncated_mass())));
            out
        }
    };
    ok(body)
}
