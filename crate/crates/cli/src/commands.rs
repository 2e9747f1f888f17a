//! One function per subcommand. Each returns an [`Outcome`]: a text table
//! for the terminal, a flat table for CSV, a JSON document and a gate.

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use quatnev::nevanlinna::{
    characteristic_algebra_suite, counting_arbiter, mpb_defect, nevanlinna_profile, verify_fmt,
    verify_jensen, CheckKind, FmtForm, JensenReport, KernelConvention, NevanlinnaProfile,
};
use quatnev::{selftest, Gl2H, Quaternion};

use crate::spec::{Command, ExperimentSpec};

/// Residuals are accepted within this many standard errors.
pub const SIGMA_GATE: f64 = 3.0;
/// Floor added to sigma gates so exact (zero-variance) runs still pass.
pub const ABS_FLOOR: f64 = 1e-12;
pub const DEFAULT_MAX_SLOPE: f64 = 0.01;

pub struct Outcome {
    pub text: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    /// `Err(reason)` when the run's gate failed.
    pub gate: std::result::Result<(), String>,
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

fn gate(ok: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

pub fn run(cmd: Command, spec: &ExperimentSpec) -> Result<Outcome> {
    spec.validate(cmd)?;
    match cmd {
        Command::VerifyJensen => jensen(spec),
        Command::Profile => profile(spec),
        Command::FmtCheck => fmt_check(spec),
        Command::MpbCheck => mpb_check(spec),
        Command::Arbiter => arbiter(spec),
        Command::AlgebraSuite => algebra(spec),
        Command::Selftest => self_test(),
    }
}

fn convention_name(k: KernelConvention) -> &'static str {
    match k {
        KernelConvention::CorrectedFactor1 => "corrected_factor1",
        KernelConvention::PerottiFactor2 => "perotti_factor2",
    }
}

fn jensen(spec: &ExperimentSpec) -> Result<Outcome> {
    let cmd = Command::VerifyJensen;
    let f = spec.function(cmd)?;
    let r = spec.radius();
    let cfg = &spec.integrator;
    let selected = spec.kernel();
    let reports: Vec<JensenReport> = [KernelConvention::CorrectedFactor1, KernelConvention::PerottiFactor2]
        .into_iter()
        .map(|k| verify_jensen(&f, r, cfg, k))
        .collect::<quatnev::Result<_>>()?;
    let chosen = reports
        .iter()
        .find(|j| j.kernel_convention == selected)
        .expect("both conventions computed");

    let b = &reports[0];
    let mut text = format!("Jensen formula, f = {}, r = {r}\n", describe(&f));
    text += &format!("  log|f(0)| (+ m log r)        {:>16.12}\n", b.lhs);
    text += &format!(
        "  mean log|f|                  {:>16.12}  +- {:.2e}\n",
        b.boundary_f.value, b.boundary_f.std_error
    );
    text += &format!(
        "  mean log|f o S_f|            {:>16.12}  +- {:.2e}\n",
        b.boundary_fsf.value, b.boundary_fsf.std_error
    );
    text += &format!(
        "  boundary term                {:>16.12}  +- {:.2e}\n",
        b.boundary_term.value,
        b.sigma()
    );
    text += &format!("  harmonic term                {:>16.12}\n", b.harmonic);
    for j in &reports {
        let rhs = j.boundary_term.value + j.harmonic - j.divisor_sum;
        let mark = if j.kernel_convention == selected { "*" } else { " " };
        text += &format!(
            "{mark} {:<18} J-sum {:>14.12}  RHS {:>14.12}  RHS-LHS {:>+.3e} ({:+.2} sigma)\n",
            convention_name(j.kernel_convention),
            j.divisor_sum,
            rhs,
            j.residual,
            j.residual / j.sigma().max(f64::MIN_POSITIVE)
        );
    }

    let rows = reports
        .iter()
        .map(|j| {
            vec![
                convention_name(j.kernel_convention).to_string(),
                num(j.radius),
                num(j.lhs),
                num(j.boundary_f.value),
                num(j.boundary_f.std_error),
                num(j.boundary_fsf.value),
                num(j.boundary_fsf.std_error),
                num(j.boundary_term.value),
                num(j.sigma()),
                num(j.harmonic),
                num(j.divisor_sum),
                num(j.boundary_term.value + j.harmonic - j.divisor_sum),
                num(j.residual),
            ]
        })
        .collect();
    let ok = chosen.residual.abs() <= SIGMA_GATE * chosen.sigma() + ABS_FLOOR;
    Ok(Outcome {
        text,
        header: header(&[
            "convention", "r", "lhs", "mean_log_f", "mean_log_f_se", "mean_log_fsf", "mean_log_fsf_se",
            "boundary", "boundary_se", "harmonic", "j_sum", "rhs", "residual",
        ]),
        rows,
        json: json!({ "function": f, "selected": selected, "reports": reports }),
        gate: gate(ok, || {
            format!(
                "{} residual {:.3e} exceeds {SIGMA_GATE} sigma ({:.3e})",
                convention_name(selected),
                chosen.residual,
                chosen.sigma()
            )
        }),
    })
}

fn describe(f: &quatnev::Rational) -> String {
    serde_json::to_string(f).unwrap_or_default()
}

fn profile(spec: &ExperimentSpec) -> Result<Outcome> {
    let cmd = Command::Profile;
    let f = spec.function(cmd)?;
    let a = spec.target(cmd);
    let radii = spec.grid(cmd, &f, a)?;
    let p = nevanlinna_profile(&f, a, &radii, &spec.integrator)?;
    let mut text = format!("Nevanlinna profile, a = {a}\n");
    text += &format!(
        "{:>10} {:>4} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}\n",
        "r", "n", "N", "m", "H", "T", "T(f,r)", "fmt3"
    );
    for w in &p.rows {
        text += &format!(
            "{:>10.4} {:>4} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.3e}\n",
            w.r, w.n, w.big_n, w.m, w.h, w.t, w.t_inf, w.fmt3
        );
    }
    let rows = p
        .rows
        .iter()
        .map(|w| {
            vec![
                num(w.r),
                w.n.to_string(),
                num(w.big_n),
                num(w.m),
                num(w.m_se),
                num(w.h),
                num(w.t),
                num(w.t_se),
                num(w.angular),
                num(w.t_inf),
                num(w.t_inf_se),
                num(w.fmt3),
                num(w.fmt3_se),
            ]
        })
        .collect();
    Ok(Outcome {
        text,
        header: header(&NevanlinnaProfile::CSV_HEADER),
        rows,
        json: serde_json::to_value(&p)?,
        gate: Ok(()),
    })
}

fn fmt_check(spec: &ExperimentSpec) -> Result<Outcome> {
    let cmd = Command::FmtCheck;
    let f = spec.function(cmd)?;
    let a = spec.target(cmd);
    let form = spec.form.unwrap_or(FmtForm::Three);
    let radii = spec.grid(cmd, &f, a)?;
    let t = verify_fmt(&f, a, &radii, &spec.integrator, form)?;
    let max_slope = spec.max_slope.unwrap_or(DEFAULT_MAX_SLOPE);
    let max_spread = spec.max_spread.unwrap_or(f64::INFINITY);
    let mut text = format!("FMT form {}, a = {a}\n", u8::from(form));
    text += &format!("{:>10} {:>14} {:>14} {:>14} {:>10}\n", "r", "lhs", "rhs", "residual", "se");
    for w in &t.rows {
        text += &format!(
            "{:>10.4} {:>14.8} {:>14.8} {:>+14.6e} {:>10.2e}\n",
            w.r, w.lhs, w.rhs, w.residual, w.std_error
        );
    }
    text += &format!("slope vs log r {:+.4e} (max {max_slope}), spread {:.4e}\n", t.slope, t.spread);
    if let (Some(k), Some(c)) = (t.envelope_coefficient, t.envelope_constant) {
        text += &format!("envelope fit coefficient {k:.4e}, constant {c:.4e}\n");
    }
    let rows = t
        .rows
        .iter()
        .map(|w| {
            vec![
                num(w.r),
                num(w.lhs),
                num(w.rhs),
                num(w.residual),
                num(w.std_error),
                w.envelope.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let ok = t.bounded(max_slope, max_spread);
    Ok(Outcome {
        text,
        header: header(&["r", "lhs", "rhs", "residual", "se", "envelope"]),
        rows,
        gate: gate(ok, || {
            format!("slope {:.4e} / spread {:.4e} outside limits ({max_slope}, {max_spread})", t.slope, t.spread)
        }),
        json: serde_json::to_value(&t)?,
    })
}

fn mpb_check(spec: &ExperimentSpec) -> Result<Outcome> {
    let cmd = Command::MpbCheck;
    let f = spec.function(cmd)?;
    let a = spec.target(cmd);
    let aq = a.finite().ok_or_else(|| anyhow!("mpb-check needs a finite target a"))?;
    let radii = spec.grid(cmd, &f, a)?;
    let mut text = format!("Mean proximity balance, a = {a}\n{:>10} {:>14} {:>10}\n", "r", "defect", "se");
    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut worst: Option<(f64, f64)> = None;
    for &r in &radii {
        let d = mpb_defect(&f, aq, r, &spec.integrator)?;
        text += &format!("{:>10.4} {:>+14.6e} {:>10.2e}\n", r, d.value, d.std_error);
        rows.push(vec![num(r), num(d.value), num(d.std_error)]);
        out.push(json!({ "r": r, "defect": d }));
        if d.value.abs() > SIGMA_GATE * d.std_error + ABS_FLOOR {
            worst.get_or_insert((r, d.value));
        }
    }
    Ok(Outcome {
        text,
        header: header(&["r", "defect", "se"]),
        rows,
        json: json!({ "function": f, "target": a, "rows": out }),
        gate: match worst {
            None => Ok(()),
            Some((r, v)) => Err(format!("defect {v:.3e} at r = {r} is not zero within {SIGMA_GATE} sigma")),
        },
    })
}

fn arbiter(spec: &ExperimentSpec) -> Result<Outcome> {
    let cmd = Command::Arbiter;
    let f = spec.function(cmd)?;
    let r = spec.radius();
    let rep = counting_arbiter(&f, r, &spec.integrator)?;
    let mut text = format!(
        "Counting arbiter, sphere {} + {} S, r = {r}\n  total order {}, chain count {}, sigma {:.2e}\n",
        rep.sphere.re, rep.sphere.im, rep.total_order, rep.chain_count, rep.sigma
    );
    for (c, res) in &rep.candidates {
        text += &format!("  c = {c}: residual {res:+.6e}\n");
    }
    text += &format!("  best c = {}\n", rep.best);
    let best_res = rep
        .candidates
        .iter()
        .find(|(c, _)| *c == rep.best)
        .map(|x| x.1)
        .unwrap_or(f64::NAN);
    let rows = rep
        .candidates
        .iter()
        .map(|(c, res)| {
            vec![
                num(rep.radius),
                num(rep.sphere.re),
                num(rep.sphere.im),
                rep.total_order.to_string(),
                rep.chain_count.to_string(),
                c.to_string(),
                num(*res),
                num(rep.sigma),
                (*c == rep.best).to_string(),
            ]
        })
        .collect();
    let ok = best_res.abs() <= SIGMA_GATE * rep.sigma + ABS_FLOOR;
    Ok(Outcome {
        text,
        header: header(&["r", "sphere_re", "sphere_im", "total_order", "chain_count", "c", "residual", "se", "best"]),
        rows,
        json: serde_json::to_value(&rep)?,
        gate: gate(ok, || format!("no candidate closes the formula: best residual {best_res:.3e}")),
    })
}

fn algebra(spec: &ExperimentSpec) -> Result<Outcome> {
    let cmd = Command::AlgebraSuite;
    let f = spec.function(cmd)?;
    let g = spec.second_function()?;
    let a = spec.target(cmd);
    let t = spec.transform.unwrap_or_else(|| {
        Gl2H::new(Quaternion::ONE, Quaternion::J, Quaternion::I * 0.5, Quaternion::real(2.0))
    });
    if t.dieudonne() == 0.0 {
        bail!("transform is singular");
    }
    let radii = spec.grid(cmd, &f, a)?;
    let rep = characteristic_algebra_suite(&f, &g, a, &t, &radii, &spec.integrator)?;
    let mut text = format!("Characteristic algebra, a = {a}, radii {radii:?}\n");
    let mut rows = Vec::new();
    for c in &rep.checks {
        let status = match c.pass {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "info",
        };
        let worst = c.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        text += &format!(
            "  [{status:>4}] {:<66} max|v| {:.3e} slope {:+.3e}\n",
            c.name, worst, c.slope
        );
        for ((r, v), s) in c.radii.iter().zip(&c.values).zip(&c.sigmas) {
            rows.push(vec![
                c.name.clone(),
                kind_name(c.kind).to_string(),
                num(*r),
                num(*v),
                num(*s),
                num(c.tolerance),
                c.pass.map(|p| p.to_string()).unwrap_or_default(),
            ]);
        }
    }
    let failed: Vec<&str> = rep
        .checks
        .iter()
        .filter(|c| c.pass == Some(false))
        .map(|c| c.name.as_str())
        .collect();
    Ok(Outcome {
        text,
        header: header(&["check", "kind", "r", "value", "se", "tolerance", "pass"]),
        rows,
        json: serde_json::to_value(&rep)?,
        gate: gate(failed.is_empty(), || format!("failed: {}", failed.join("; "))),
    })
}

fn kind_name(k: CheckKind) -> &'static str {
    match k {
        CheckKind::Equality => "equality",
        CheckKind::Inequality => "inequality",
        CheckKind::Bounded => "bounded",
    }
}

fn self_test() -> Result<Outcome> {
    let rep = selftest::run()?;
    let mut text = format!("Self-test (tolerance {:.0e})\n", rep.tolerance);
    for c in &rep.checks {
        text += &format!("  [{}] {:<44} {:.3e}\n", if c.pass { " ok " } else { "FAIL" }, c.name, c.residual);
    }
    let rows = rep
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), num(c.residual), c.pass.to_string()])
        .collect();
    let failed = rep.checks.iter().filter(|c| !c.pass).count();
    Ok(Outcome {
        text,
        header: header(&["check", "residual", "pass"]),
        rows,
        json: serde_json::to_value(&rep)?,
        gate: gate(failed == 0, || format!("{failed} self-checks failed")),
    })
}

