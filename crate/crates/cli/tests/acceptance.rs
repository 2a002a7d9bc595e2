//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use idcm::verify::{
    ball_oracle, concentration_checks, contravariance_body, contravariance_measure, homogeneity,
    intersection_limit_body, p_to_one_measure, p_to_zero_measure, round_trip, route_agreement,
    sandwich_sweep, total_mass_solid_check, variational_formula, CheckReport, Context,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_reports(reports: &[CheckReport]) -> Outcome {
    let mut detail: Vec<String> = Vec::new();
    let mut pass = true;
    for r in reports {
        pass &= r.pass;
        if !r.pass {
            detail.push(r.to_string());
        }
    }
    let spent: Duration = reports.iter().map(|r| r.runtime).sum();
    let observed = if reports.len() > 4 {
        format!("{} checks", reports.len())
    } else {
        reports.iter().map(|r| format!("{}={:.3e}", r.name, r.observed)).collect::<Vec<_>>().join(", ")
    };
    if detail.is_empty() {
        detail.push(format!("{observed} [{spent:.2?}]"));
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn c1(ctx: &Context) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for dim in [2, 3] {
        for p in [-2.0, -0.5, 0.3, 0.7] {
            let t = Instant::now();
            let r = ball_oracle(ctx, dim, p);
            let spent = t.elapsed();
            slowest = slowest.max(spent);
            worst = worst.max(r.observed);
            if !r.pass || spent >= Duration::from_secs(1) {
                pass = false;
                detail.push(format!("{r} wall {spent:.2?}"));
            }
        }
    }
    if detail.is_empty() {
        detail.push(format!("max relative {worst:.3e}, slowest {slowest:.2?}"));
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn c3(ctx: &Context) -> Outcome {
    let t = Instant::now();
    let r = sandwich_sweep(ctx);
    let spent = t.elapsed();
    let mut o = from_reports(&[r]);
    if spent >= Duration::from_secs(120) {
        o.pass = false;
        o.detail.push_str(&format!("; wall {spent:.2?} over 2 min"));
    }
    o
}

fn c9(ctx: &Context) -> Outcome {
    let t = Instant::now();
    let r = round_trip(ctx);
    let spent = t.elapsed();
    match r {
        Ok(r) => {
            let pass = r.all_converged
                && r.max_gradient < 1e-6
                && r.max_iterations <= 500
                && r.max_residual <= 0.02
                && spent < Duration::from_secs(600);
            Outcome {
                pass,
                detail: format!(
                    "converged {}, max gradient {:.3e}, iterations {}, residual {:.3e}, wall {spent:.2?}",
                    r.all_converged, r.max_gradient, r.max_iterations, r.max_residual
                ),
            }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn c11() -> Outcome {
    let mut reports = Vec::new();
    for i in 0..2 {
        let dir = tempfile::tempdir().expect("temp dir");
        let status = Command::new(env!("CARGO_BIN_EXE_idcm"))
            .current_dir(dir.path())
            .args(["verify", "--suite", "all", "--seed", "0", "--grid", "720"])
            .output()
            .expect("run idcm");
        match std::fs::read(dir.path().join("report.csv")) {
            Ok(bytes) => reports.push(bytes),
            Err(e) => {
                return Outcome {
                    pass: false,
                    detail: format!("run {i} exited {:?} without a report: {e}", status.status.code()),
                }
            }
        }
    }
    let same = reports[0] == reports[1];
    Outcome {
        pass: same,
        detail: format!("{} bytes, identical: {same}", reports[0].len()),
    }
}

fn main() -> ExitCode {
    let ctx = Context::single(0, 720);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("ball oracle", Box::new(move || c1(&ctx))),
        ("homogeneity", Box::new(move || from_reports(&[homogeneity(&ctx)]))),
        ("sandwich margins", Box::new(move || c3(&ctx))),
        (
            "affine contra-variance",
            Box::new(move || from_reports(&[contravariance_body(&ctx), contravariance_measure(&ctx)])),
        ),
        ("variational formula", Box::new(move || from_reports(&[variational_formula(&ctx)]))),
        (
            "p -> 1 limits",
            Box::new(move || from_reports(&[intersection_limit_body(&ctx), p_to_one_measure(&ctx)])),
        ),
        ("p -> 0 limit", Box::new(move || from_reports(&[p_to_zero_measure(&ctx)]))),
        ("subspace concentration", Box::new(move || from_reports(&concentration_checks(&ctx)))),
        ("solver round trip", Box::new(move || c9(&ctx))),
        (
            "two-route agreement",
            Box::new(move || from_reports(&[route_agreement(&ctx), total_mass_solid_check(&ctx)])),
        ),
        ("determinism", Box::new(c11)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
