use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use lowlying::averages::{self, IdentityKind};
use lowlying::density::{bsd_decomposition, predict_catalog, DensityModel};
use lowlying::hecke::{tau_oracle, trace_from_moments, trace_hecke_selberg};
use lowlying::lfunc::{self, find_zeros, LSeries, ZeroList};
use lowlying::ratios::{ComplexShift, EulerProduct};
use lowlying::{arith, primes, Complex64, Family, TestFunction, TraceTable, WashingtonCurve};

use crate::{
    plot, BsdArgs, Command, EmpiricalArgs, EulerProductArgs, Failure, Format, Outcome, PredictDensityArgs, TracesArgs,
    VerifyAveragesArgs, ZerosArgs,
};

/// Relative size of the two-balance functional-equation residual that
/// confirms a conductor.
const FE_TOLERANCE: f64 = 1e-8;
const MAX_BRUTE_PRIME: u64 = 1000;

fn num(x: f64) -> String {
    // + 0.0 folds −0 into 0
    format!("{:.16e}", x + 0.0)
}

fn cfg(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(cfg(msg()))
    }
}

fn check_family(f: u32) -> Result<Family, Failure> {
    Ok(Family::from_index(f)?)
}

fn check_euler(cutoff: u64, order: usize) -> Result<(), Failure> {
    check((5..=200_000).contains(&cutoff), || format!("--prime-cutoff must lie in [5, 200000], got {cutoff}"))?;
    check((1..=40).contains(&order), || format!("--order must lie in [1, 40], got {order}"))
}

fn check_x(x: f64) -> Result<(), Failure> {
    check(x.is_finite() && x >= 1e4, || format!("--X must be a finite number ≥ 1e4, got {x}"))
}

fn check_test_function(name: &str, support: f64) -> Result<TestFunction, Failure> {
    Ok(TestFunction::by_name(name, support)?)
}

pub fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parse = |p: &str| p.parse::<f64>().map_err(|_| cfg(format!("bad number '{p}' in '{s}'")));
    let z = match parts.as_slice() {
        [re] => Complex64::new(parse(re)?, 0.0),
        [re, im] => Complex64::new(parse(re)?, parse(im)?),
        _ => return Err(cfg(format!("expected re or re,im, got '{s}'"))),
    };
    check(z.re.is_finite() && z.im.is_finite(), || format!("non-finite shift '{s}'"))?;
    Ok(z)
}

pub fn parse_range(s: &str) -> Result<Vec<i64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let parse = |p: &str| p.trim().parse::<i64>().map_err(|_| cfg(format!("bad integer '{p}' in --t-range '{s}'")));
    let (a, b, step) = match parts.as_slice() {
        [a, b] => (parse(a)?, parse(b)?, 1),
        [a, b, c] => (parse(a)?, parse(b)?, parse(c)?),
        _ => return Err(cfg(format!("--t-range must be a:b or a:b:step, got '{s}'"))),
    };
    check(step > 0, || format!("--t-range step must be positive, got {step}"))?;
    check(a <= b, || format!("--t-range is empty: {a} > {b}"))?;
    check((b - a) / step < 10_000, || "--t-range has more than 10000 entries".into())?;
    Ok((a..=b).step_by(step as usize).collect())
}

fn tau_grid(a: &PredictDensityArgs) -> Vec<f64> {
    if a.tau_steps == 1 {
        return vec![a.tau_min];
    }
    let h = (a.tau_max - a.tau_min) / (a.tau_steps - 1) as f64;
    (0..a.tau_steps).map(|k| a.tau_min + h * k as f64).collect()
}

/// Range checks that must pass before any computation starts.
pub fn validate(cmd: &Command) -> Result<(), Failure> {
    match cmd {
        Command::VerifyAverages(a) => {
            check_family(a.family)?;
            let lo = if a.family == 1 { 5 } else { 3 };
            check((lo..=MAX_BRUTE_PRIME).contains(&a.pmax), || format!("--pmax must lie in [{lo}, {MAX_BRUTE_PRIME}], got {}", a.pmax))?;
            check(a.m1_max <= 20, || format!("--m1-max must be at most 20, got {}", a.m1_max))
        }
        Command::Traces(a) => {
            check(a.weight_min >= 4 && a.weight_min % 2 == 0, || format!("--weight-min must be even and ≥ 4, got {}", a.weight_min))?;
            check(a.weight_max <= 22 && a.weight_max >= a.weight_min, || {
                format!("--weight-max must lie in [--weight-min, 22], got {}", a.weight_max)
            })?;
            check((2..=MAX_BRUTE_PRIME).contains(&a.pmax), || format!("--pmax must lie in [2, {MAX_BRUTE_PRIME}], got {}", a.pmax))
        }
        Command::EulerProduct(a) => {
            check_family(a.family)?;
            check_euler(a.prime_cutoff, a.order)?;
            ComplexShift::new(parse_complex(&a.alpha)?, parse_complex(&a.gamma)?)?;
            Ok(())
        }
        Command::PredictDensity(a) => {
            check_family(a.family)?;
            check_x(a.x)?;
            check_euler(a.prime_cutoff, a.order)?;
            check_test_function(&a.test_function, a.support)?;
            check(a.tau_min.is_finite() && a.tau_min >= 0.0, || format!("--tau-min must be ≥ 0, got {}", a.tau_min))?;
            check(a.tau_max.is_finite() && a.tau_max >= a.tau_min, || "--tau-max must be finite and ≥ --tau-min".into())?;
            check((1..=100_000).contains(&a.tau_steps), || format!("--tau-steps must lie in [1, 100000], got {}", a.tau_steps))
        }
        Command::Zeros(a) => {
            check(a.height > 0.0 && a.height <= lfunc::MAX_HEIGHT, || {
                format!("--height must lie in (0, {}], got {}", lfunc::MAX_HEIGHT, a.height)
            })?;
            check(arith::washington_conductor(a.t_param).value as f64 <= lfunc::MAX_CONDUCTOR, || {
                format!("conductor of t = {} exceeds {:e}", a.t_param, lfunc::MAX_CONDUCTOR)
            })
        }
        Command::Empirical(a) => {
            parse_range(&a.t_range)?;
            check_test_function(&a.test_function, a.support)?;
            check_euler(a.prime_cutoff, a.order)?;
            if let Some(x) = a.x {
                check(x.is_finite() && x > 4.0 * std::f64::consts::PI.powi(2), || format!("--X must exceed 4π², got {x}"))?;
            }
            Ok(())
        }
        Command::Bsd(a) => {
            check(!a.t.is_empty(), || "--t needs at least one value".into())?;
            check((1000..=100_000_000).contains(&a.xmax), || format!("--xmax must lie in [1000, 1e8], got {}", a.xmax))
        }
    }
}

pub fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::VerifyAverages(a) => verify_averages(a),
        Command::Traces(a) => traces(a),
        Command::EulerProduct(a) => euler_product(a),
        Command::PredictDensity(a) => predict_density(a),
        Command::Zeros(a) => zeros(a),
        Command::Empirical(a) => empirical(a),
        Command::Bsd(a) => bsd(a),
    }
}

fn finish(body: String, failures: usize, what: &str) -> Outcome {
    let failed = (failures > 0).then(|| format!("{failures} {what}"));
    Outcome { body, failed }
}

fn verify_averages(a: &VerifyAveragesArgs) -> Result<Outcome, Failure> {
    let mut out = String::from("family,m1,m2,p,closed,brute,equal\n");
    let mut bad = 0;
    if a.family == 1 {
        let ps: Vec<u64> = primes::sieve(a.pmax).into_iter().filter(|&p| p >= 5).collect();
        let table = TraceTable::build(a.m1_max as u32 + 4, a.pmax);
        let rows: Vec<Vec<(usize, usize, u64, String, String, bool)>> = ps
            .par_iter()
            .map(|&p| {
                averages::q_star_bruteforce_grid(a.m1_max, p)?
                    .into_iter()
                    .map(|b| {
                        let c = averages::q_star_closed(b.m1, b.m2, p, &table)?;
                        Ok((b.m1, b.m2, p, c.value.to_string(), b.value.to_string(), c.value == b.value))
                    })
                    .collect::<lowlying::Result<Vec<_>>>()
            })
            .collect::<lowlying::Result<_>>()?;
        for (m1, m2, p, c, b, eq) in rows.into_iter().flatten() {
            bad += usize::from(!eq);
            writeln!(out, "1,{m1},{m2},{p},\"{c}\",\"{b}\",{eq}").unwrap();
        }
    } else {
        // the three Washington identities; the diagonal is a bound, not an equality
        let ps: Vec<u64> = primes::sieve(a.pmax).into_iter().filter(|&p| p >= 3).collect();
        let kinds = [(IdentityKind::First, 1, 0), (IdentityKind::Diagonal, 1, 1), (IdentityKind::SecondMoment, 0, 2)];
        let rows: Vec<Vec<_>> = ps
            .par_iter()
            .map(|&p| kinds.iter().map(|&(k, m1, m2)| Ok((m1, m2, averages::q_t_identity_check(p, k)?))).collect::<lowlying::Result<Vec<_>>>())
            .collect::<lowlying::Result<_>>()?;
        for (m1, m2, r) in rows.into_iter().flatten() {
            bad += usize::from(!r.pass);
            let closed = match &r.expected {
                Some(e) => e.to_string(),
                None => format!("|p(Q+1)| <= {}", averages::C_DIAG),
            };
            writeln!(out, "2,{m1},{m2},{},\"{closed}\",\"{}\",{}", r.p, r.computed, r.pass).unwrap();
        }
    }
    Ok(finish(out, bad, "closed forms disagree with brute force"))
}

fn traces(a: &TracesArgs) -> Result<Outcome, Failure> {
    let tau = tau_oracle(a.pmax as usize)?;
    let ps = primes::sieve(a.pmax);
    let jobs: Vec<(u32, u64)> = (a.weight_min..=a.weight_max).step_by(2).flat_map(|j| ps.iter().map(move |&p| (j, p))).collect();
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|&(j, p)| {
            let es = trace_hecke_selberg(j, p)?;
            let delta = (j == 12).then(|| tau[p as usize]);
            let moments = if p >= 5 { Some(trace_from_moments(j, p)?.exact) } else { None };
            let agree = delta.is_none_or(|d| es == num_rational::BigRational::from_integer(d.into()))
                && moments.as_ref().is_none_or(|m| *m == es);
            Ok(format!(
                "{j},{p},{es},{},{},{agree}",
                delta.map(|d| d.to_string()).unwrap_or_default(),
                moments.map(|m| m.to_string()).unwrap_or_default()
            ))
        })
        .collect::<lowlying::Result<_>>()?;
    let bad = rows.iter().filter(|r| r.ends_with("false")).count();
    let mut out = String::from("j,p,eichler_selberg,delta,moments,agree\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(finish(out, bad, "trace oracles disagree"))
}

fn euler_product(a: &EulerProductArgs) -> Result<Outcome, Failure> {
    let family = check_family(a.family)?;
    let s = ComplexShift::new(parse_complex(&a.alpha)?, parse_complex(&a.gamma)?)?;
    let v = EulerProduct::new(family, a.prime_cutoff, a.order)?.value(&s)?;
    let body = json!({
        "family": a.family,
        "alpha": [s.alpha.re, s.alpha.im],
        "gamma": [s.gamma.re, s.gamma.im],
        "value_re": v.value.re,
        "value_im": v.value.im,
        "tail_bound": v.tail_bound,
        "P": v.prime_cutoff,
        "M": v.series_order,
    });
    Ok(Outcome { body: format!("{body:#}\n"), failed: None })
}

fn predict_density(a: &PredictDensityArgs) -> Result<Outcome, Failure> {
    let family = check_family(a.family)?;
    let tf = check_test_function(&a.test_function, a.support)?;
    let model = DensityModel::new(family, a.prime_cutoff, a.order)?;
    let curve = model.scaled_density(a.x, &tau_grid(a))?;
    if let Some(path) = &a.plot {
        let script = plot::density_script(&curve, None);
        std::fs::write(path, script).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    let body = match a.format {
        Format::Csv => {
            let mut out = String::from("tau,smooth,taylor,catalog,delta_mass\n");
            for (i, tau) in curve.tau_grid.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    num(*tau),
                    num(curve.smooth_values[i]),
                    num(curve.taylor_values[i].re),
                    num(curve.catalog[i]),
                    num(curve.delta_mass)
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = curve
                .tau_grid
                .iter()
                .enumerate()
                .map(|(i, tau)| {
                    json!({
                        "tau": tau,
                        "smooth": curve.smooth_values[i],
                        "smooth_imag": curve.smooth_complex[i].im,
                        "taylor": curve.taylor_values[i].re,
                        "taylor_imag": curve.taylor_values[i].im,
                        "catalog": curve.catalog[i],
                    })
                })
                .collect();
            let t = curve.taylor;
            let body = json!({
                "family": a.family,
                "X": a.x,
                "L": curve.l,
                "P": a.prime_cutoff,
                "M": a.order,
                "delta_mass": curve.delta_mass,
                "taylor": {
                    "constant": t.c0_const,
                    "over_L": [t.c_over_l.re, t.c_over_l.im],
                    "over_L_oscillating": [t.c_over_l_osc.re, t.c_over_l_osc.im],
                    "over_L2": [t.c_over_l2.re, t.c_over_l2.im],
                },
                "test_function": { "name": tf.name, "support": tf.support_bound },
                "prediction": model.predict_one_level(a.x, &tf)?,
                "catalog_prediction": predict_catalog(model.catalog_type(), &tf)?,
                "rows": rows,
            });
            format!("{body:#}\n")
        }
    };
    Ok(Outcome { body, failed: None })
}

/// Worst residual of the functional equation over a few points, comparing
/// balance parameters 1 and 1.3.
fn fe_check(ls: &LSeries, height: f64) -> lowlying::Result<f64> {
    let h = height.min(10.0);
    let probes = [(0.5, 0.0), (0.5, 0.25 * h), (0.7, 0.5 * h), (0.3, 0.75 * h), (0.5, h)];
    let mut worst = 0.0f64;
    for (re, im) in probes {
        let (abs, rel) = ls.fe_residual(Complex64::new(re, im), 1.0, 1.3)?;
        worst = worst.max(abs).max(rel);
    }
    Ok(worst)
}

fn zero_json(z: &ZeroList, ls: &LSeries, fe: f64) -> Value {
    json!({
        "t": z.t,
        "conductor": z.conductor.to_string(),
        "conductor_proven": ls.conductor.exact,
        "root_number": ls.root_number,
        "fe_residual": fe,
        "height": z.height,
        "central_multiplicity": z.central_multiplicity,
        "central_derivatives": z.central_derivatives,
        "count": z.ordinates.len(),
        "count_estimate": z.count_estimate,
        "ordinates": z.ordinates,
        "scaled": z.scaled,
        "max_imag_residual": z.max_imag_residual,
        "warnings": z.warnings,
    })
}

fn zeros(a: &ZerosArgs) -> Result<Outcome, Failure> {
    let ls = LSeries::for_height(WashingtonCurve::new(a.t_param), a.height, a.candidate)?;
    let fe = fe_check(&ls, a.height)?;
    let z = find_zeros(&ls, a.height)?;
    let body = format!("{:#}\n", zero_json(&z, &ls, fe));
    let failed = (fe >= FE_TOLERANCE).then(|| format!("functional equation residual {fe:e} for t = {} rejects the conductor", a.t_param));
    Ok(Outcome { body, failed })
}

fn warn(msg: String) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{}", json!({ "warning": msg }));
}

fn empirical(a: &EmpiricalArgs) -> Result<Outcome, Failure> {
    let tf = check_test_function(&a.test_function, a.support)?;
    let mut chosen = Vec::new();
    for t in parse_range(&a.t_range)? {
        let c = arith::washington_conductor(t);
        if c.value as f64 > lfunc::MAX_CONDUCTOR {
            warn(format!("t = {t}: conductor {} beyond range, skipped", c.value));
        } else if c.exact || (a.candidates && c.squarefree == primes::Squarefree::Yes) {
            chosen.push((t, c));
        } else {
            warn(format!("t = {t}: conductor not guaranteed, skipped"));
        }
    }
    if chosen.is_empty() {
        return Err(cfg("no curve in --t-range is usable"));
    }
    let x = a.x.unwrap_or_else(|| chosen.iter().map(|(_, c)| c.value as f64).sum::<f64>() / chosen.len() as f64);
    let height = lfunc::required_height(&tf, x)?;
    check(height <= lfunc::MAX_HEIGHT, || format!("X = {x:e} needs zeros up to {height:.2}, beyond {}", lfunc::MAX_HEIGHT))?;

    let lists: Vec<Option<ZeroList>> = chosen
        .par_iter()
        .map(|&(t, c)| {
            let ls = LSeries::for_height(WashingtonCurve::new(t), height, !c.exact)?;
            if !c.exact {
                let fe = fe_check(&ls, height)?;
                if fe >= FE_TOLERANCE {
                    warn(format!("t = {t}: functional equation residual {fe:.1e}, conductor rejected"));
                    return Ok(None);
                }
            }
            let z = find_zeros(&ls, height)?;
            for w in &z.warnings {
                warn(format!("t = {t}: {w}"));
            }
            Ok(Some(z))
        })
        .collect::<lowlying::Result<_>>()?;
    let lists: Vec<ZeroList> = lists.into_iter().flatten().collect();
    if lists.is_empty() {
        return Err(Failure::Assertion("every candidate conductor was rejected".into()));
    }
    let e = lfunc::empirical_one_level(&lists, &tf, x)?;
    let mut out = String::from("t,conductor,central,off_central,contribution\n");
    for c in &e.curves {
        writeln!(out, "{},{},{},{},{}", c.t, c.conductor, num(c.central), num(c.off_central), num(c.total())).unwrap();
    }
    writeln!(out, "mean,,{},{},{}", num(e.mean_central), num(e.mean_off_central), num(e.mean())).unwrap();
    if a.predict {
        if x >= 1e4 {
            let model = DensityModel::new(Family::Washington, a.prime_cutoff, a.order)?;
            writeln!(out, "predicted,,,,{}", num(model.predict_one_level(x, &tf)?)).unwrap();
        } else {
            warn(format!("X = {x:e} is below 1e4, ratios prediction omitted"));
        }
        let limit = predict_catalog(lowlying::SymmetryType::DeltaPlusSOeven, &tf)?;
        writeln!(out, "limit,,,,{}", num(limit)).unwrap();
    }
    Ok(Outcome { body: out, failed: None })
}

fn bsd(a: &BsdArgs) -> Result<Outcome, Failure> {
    let results: Vec<_> = a
        .t
        .par_iter()
        .map(|&t| bsd_decomposition(WashingtonCurve::new(t), a.xmax))
        .collect::<lowlying::Result<_>>()?;
    let mut out = String::from("t,slope_full,slope_shifted,gap,identity_residual,skipped\n");
    let mut bad = 0;
    for r in &results {
        bad += usize::from(!(r.identity_residual <= 1e-9));
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.t,
            num(r.slope_full),
            num(r.slope_shifted),
            num(r.slope_full - r.slope_shifted),
            num(r.identity_residual),
            r.skipped.len()
        )
        .unwrap();
    }
    Ok(finish(out, bad, "three-factor identity residuals above 1e-9"))
}
