use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use idcm::body::Body;
use idcm::error::{Error, Result};
use idcm::geom::Vec3;
use idcm::io::{
    check_resolution, fmt_f64, node_table, read_json, trace_table, write_json, BodyJson, Document, FunctionJson,
    MeasureJson, RunConfig, Table,
};
use idcm::lp::{
    i0_body, intersection_body, iterated_lp_body, lp_intersection_body, normalize_volume_two, sandwich_check,
    SandwichConstants,
};
use idcm::measure::{
    cone_volume_measure, intersection_limit_measure, ip_measure, ip_measure_via_transform, subspace_concentration,
    ConcentrationBound, MeasureOptions,
};
use idcm::solver::{solve, SolverOptions, SolverStatus};
use idcm::sphere::default_resolution;
use idcm::transform::{p_cosine_transform, radon_transform};
use idcm::verify::{report_csv, run_suite, summary, Context, Suite};
use idcm::{DiscreteSphericalMeasure, LpParams, SphericalGrid, SymmetricPolytope};
use log::info;

use crate::{
    BoundArg, BodyInput, Command, ConcentrationArgs, IpBodyArgs, IpMeasureArgs, LimitsArgs, Route, SandwichArgs,
    SolveArgs, TransformArgs, VerifyArgs,
};

/// 3 for anything wrong with a file, 2 for everything else.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Missing(_) | Error::Malformed { .. } | Error::Io(_) | Error::Json(_) => 3,
        _ => 2,
    }
}

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::IpBody(a) => ip_body(a),
        Command::IpMeasure(a) => ip_measure_cmd(a),
        Command::Transform(a) => transform(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Concentration(a) => concentration(a),
        Command::Sandwich(a) => sandwich(a),
        Command::Limits(a) => limits(a),
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn malformed(path: &Path) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Missing(_) | Error::Malformed { .. } | Error::Io(_) => e,
        other => Error::Malformed { path: display(path), message: other.to_string() },
    }
}

fn read_body(path: &Path) -> Result<Body> {
    let doc: Document<BodyJson> = read_json(path)?;
    doc.data.into_body().map_err(malformed(path))
}

fn read_measure(path: &Path) -> Result<DiscreteSphericalMeasure> {
    let doc: Document<MeasureJson> = read_json(path)?;
    doc.data.into_measure().map_err(malformed(path))
}

fn read_function(path: &Path) -> Result<idcm::EvenSphericalFunction> {
    let doc: Document<FunctionJson> = read_json(path)?;
    doc.data.into_function().map_err(malformed(path))
}

fn sphere(dim: usize, res: Option<usize>) -> Result<(usize, Arc<SphericalGrid>)> {
    let r = res.unwrap_or_else(|| default_resolution(dim));
    check_resolution(dim, r)?;
    Ok((r, SphericalGrid::shared(dim, r)?))
}

fn polytope(body: Body, path: &Path) -> Result<SymmetricPolytope> {
    match body {
        Body::Polytope(p) => Ok(p),
        Body::Star(_) => Err(Error::Invalid(format!(
            "{}: this command needs a polytope body ({{\"kind\": \"polytope\", ...}})",
            display(path)
        ))),
    }
}

fn config(name: &str, dim: usize, p: Option<f64>, grid: Option<usize>, input: &Path) -> RunConfig {
    let mut c = RunConfig::new(name);
    c.dim = Some(dim);
    c.p = p;
    c.grid = grid;
    c.input = Some(display(input));
    c
}

fn load(args: &BodyInput) -> Result<(Body, usize, Arc<SphericalGrid>)> {
    let body = read_body(&args.input)?;
    let (r, g) = sphere(body.dim(), args.grid)?;
    Ok((body, r, g))
}

fn ip_body(a: IpBodyArgs) -> Result<ExitCode> {
    let (body, r, g) = load(&a.body)?;
    let params = LpParams::new(body.dim(), a.p)?;
    let star = if a.iterate == 2 {
        iterated_lp_body(&body, params, &g)?
    } else {
        lp_intersection_body(&body, params, &g)?
    };
    let out = a.out.unwrap_or_else(|| PathBuf::from("radial.csv"));
    let mut cfg = config("ip-body", body.dim(), Some(a.p), Some(r), &a.body.input).flag("iterate", a.iterate);
    cfg.output = Some(display(&out));
    node_table(&g, star.values(), "rho").write(&out, Some(&cfg))?;
    println!("volume {}", fmt_f64(star.volume()));
    println!("wrote {}", display(&out));
    Ok(ExitCode::SUCCESS)
}

fn ip_measure_cmd(a: IpMeasureArgs) -> Result<ExitCode> {
    let (body, r, g) = load(&a.body)?;
    let poly = polytope(body, &a.body.input)?;
    let params = LpParams::new(poly.dim(), a.p)?;
    let opts = MeasureOptions::new(g);
    let mu = match a.route {
        Route::Direct => ip_measure(&poly, params, &opts)?,
        Route::Transform => ip_measure_via_transform(&poly, params, &opts)?,
        Route::Both => {
            let t = ip_measure_via_transform(&poly, params, &opts)?;
            let d = ip_measure(&poly, params, &opts)?;
            let c = d.compare(&t);
            let mass = (d.total() - t.total()).abs() / t.total();
            println!(
                "route difference: max atom relative {}, total mass relative {}",
                fmt_f64(c.max_relative),
                fmt_f64(mass)
            );
            t
        }
    };
    let out = a.out.unwrap_or_else(|| PathBuf::from("measure.json"));
    let route = format!("{:?}", a.route).to_lowercase();
    let mut cfg = config("ip-measure", poly.dim(), Some(a.p), Some(r), &a.body.input).flag("route", route);
    cfg.output = Some(display(&out));
    write_json(&out, &Document::new(Some(cfg), MeasureJson::from(&mu)))?;
    println!("total mass {}", fmt_f64(mu.total()));
    println!("wrote {}", display(&out));
    Ok(ExitCode::SUCCESS)
}

fn transform(a: TransformArgs) -> Result<ExitCode> {
    let f = read_function(&a.input)?;
    let res = match a.p {
        Some(p) => p_cosine_transform(&f, p)?,
        None => radon_transform(&f),
    };
    let g = f.grid();
    let out = a.out.unwrap_or_else(|| PathBuf::from("transform.csv"));
    let mut cfg = config("transform", g.dim(), None, Some(g.resolution()), &a.input);
    cfg = match a.p {
        Some(p) => cfg.flag("kernel_exponent", fmt_f64(p)),
        None => cfg.flag("radon", true),
    };
    cfg.output = Some(display(&out));
    node_table(g, &res.values, "value").write(&out, Some(&cfg))?;
    println!("max |value| {}", fmt_f64(res.max_abs()));
    println!("wrote {}", display(&out));
    Ok(ExitCode::SUCCESS)
}

fn solve_cmd(a: SolveArgs) -> Result<ExitCode> {
    let mu = read_measure(&a.measure)?;
    let params = LpParams::new(mu.dim(), a.p)?;
    let (r, g) = sphere(mu.dim(), a.grid)?;
    let mut opts = SolverOptions::new(g);
    opts.grad_tol = a.grad_tol;
    opts.max_iter = a.max_iter;
    let sol = solve(&mu, params, &opts)?;
    let out = a.out.unwrap_or_else(|| PathBuf::from("body.json"));
    let trace = a.trace.unwrap_or_else(|| PathBuf::from("trace.csv"));
    let mut cfg = config("solve", mu.dim(), Some(a.p), Some(r), &a.measure);
    cfg.tolerances.insert("grad_tol".into(), a.grad_tol);
    cfg = cfg.flag("max_iter", a.max_iter);
    cfg.output = Some(display(&out));
    write_json(&out, &Document::new(Some(cfg.clone()), BodyJson::from(&sol.scaled_body)))?;
    cfg.output = Some(display(&trace));
    trace_table(&sol.state.trace).write(&trace, Some(&cfg))?;
    let grad = sol.state.gradient.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    println!("status {}", format!("{:?}", sol.status).to_lowercase());
    println!("iterations {}", sol.state.iteration);
    println!("max gradient {}", fmt_f64(grad));
    println!("c {}", fmt_f64(sol.c));
    println!("residual {}", fmt_f64(sol.residual));
    println!("wrote {} and {}", display(&out), display(&trace));
    Ok(if sol.status == SolverStatus::Converged {
        ExitCode::SUCCESS
    } else {
        eprintln!("solver did not converge: {:?}", sol.status);
        ExitCode::from(1)
    })
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let suite: Suite = a.suite.parse()?;
    check_resolution(2, a.grid)?;
    let ctx = if a.no_convergence { Context::single(a.seed, a.grid) } else { Context::new(a.seed, a.grid) };
    info!("running suite {suite} at grid {}", a.grid);
    let reports = run_suite(suite, &ctx);
    let out = a.out.unwrap_or_else(|| PathBuf::from("report.csv"));
    let mut cfg = RunConfig::new("verify");
    cfg.grid = Some(a.grid);
    cfg.seed = Some(a.seed);
    cfg.output = Some(display(&out));
    cfg = cfg.flag("suite", suite).flag("convergence", !a.no_convergence);
    std::fs::write(&out, report_csv(&reports, Some(&cfg))?)?;
    print!("{}", summary(&reports));
    println!("wrote {}", display(&out));
    Ok(if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// `e1,e3` selects coordinate axes; `1,1,0;0,0,1` gives basis rows.
pub fn parse_subspace(dim: usize, s: &str) -> Result<Vec<Vec3>> {
    let bad = || Error::InvalidSubspace(format!("cannot parse {s:?}; use e.g. \"e1,e3\" or \"1,1,0;0,0,1\""));
    let s = s.trim();
    if s.starts_with('e') {
        return s
            .split(',')
            .map(|t| {
                let i: usize = t.trim().strip_prefix('e').and_then(|d| d.parse().ok()).ok_or_else(bad)?;
                if i == 0 || i > dim {
                    return Err(Error::InvalidSubspace(format!("axis e{i} does not exist in dimension {dim}")));
                }
                let mut v = Vec3::zeros();
                v[i - 1] = 1.0;
                Ok(v)
            })
            .collect();
    }
    s.split(';')
        .map(|row| {
            let xs: Vec<f64> = row.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            idcm::geom::vec_from_slice(dim, &xs)
        })
        .collect()
}

fn concentration(a: ConcentrationArgs) -> Result<ExitCode> {
    let (mu, cfg) = match (&a.measure, &a.input) {
        (Some(m), _) => {
            let mu = read_measure(m)?;
            if let Some(p) = a.p {
                LpParams::new(mu.dim(), p)?;
            }
            let c = config("concentration", mu.dim(), a.p, None, m);
            (mu, c)
        }
        (None, Some(path)) => {
            let body = read_body(path)?;
            let poly = polytope(body, path)?;
            let p = a.p.ok_or_else(|| Error::Invalid("--in needs --p".into()))?;
            let params = LpParams::new(poly.dim(), p)?;
            let (r, g) = sphere(poly.dim(), a.grid)?;
            let mu = ip_measure_via_transform(&poly, params, &MeasureOptions::new(g))?;
            (mu, config("concentration", poly.dim(), Some(p), Some(r), path))
        }
        (None, None) => return Err(Error::Invalid("give --measure or --in".into())),
    };
    let bound = match a.bound {
        BoundArg::Input => ConcentrationBound::Input,
        BoundArg::Ip => ConcentrationBound::Ip,
    };
    let basis = parse_subspace(mu.dim(), &a.subspace)?;
    let c = subspace_concentration(&mu, &basis, a.angular_tol, bound, cfg.p)?;
    println!("ratio {}", fmt_f64(c.ratio));
    println!("bound {}", fmt_f64(c.bound));
    println!("strict {}", c.strict);
    Ok(if c.strict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sandwich(a: SandwichArgs) -> Result<ExitCode> {
    let (body, _, g) = load(&a.body)?;
    let params = LpParams::new(body.dim(), a.p)?;
    let k = SandwichConstants::new(params);
    let m = sandwich_check(&body, params, &g)?;
    println!("lower constant {}", fmt_f64(k.lower));
    println!("upper constant {}", fmt_f64(k.upper));
    println!("lower margin {}", fmt_f64(m.lower));
    println!("upper margin {}", fmt_f64(m.upper));
    let ok = m.lower >= -a.tol && m.upper >= -a.tol;
    println!("{}", if ok { "holds" } else { "violated" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

const P_TOWARD_ONE: [f64; 3] = [0.9, 0.99, 0.999];
const P_TOWARD_ZERO: [f64; 4] = [-0.1, -0.01, 0.01, 0.1];

fn limits(a: LimitsArgs) -> Result<ExitCode> {
    let (body, r, g) = load(&a.body)?;
    let dim = body.dim();
    let mut t = Table::new(&["limit", "p", "body_gap", "measure_gap"]);
    let opts = MeasureOptions::new(g.clone());

    let ik = intersection_body(&body, &g)?;
    let ii = ik.samples().interpolant();
    let limit_mu = match &body {
        Body::Polytope(poly) => Some(intersection_limit_measure(poly, opts.facet_order)?),
        Body::Star(_) => None,
    };
    for p in P_TOWARD_ONE {
        let params = LpParams::new(dim, p)?;
        let ip = lp_intersection_body(&body, params, &g)?;
        let body_gap = ip.radial_distance(|u| ii.eval(u).max(0.0)) / ik.max_radial();
        let measure_gap = match (&body, &limit_mu) {
            (Body::Polytope(poly), Some(l)) => ip_measure_via_transform(poly, params, &opts)?.compare(l).max_relative,
            _ => f64::NAN,
        };
        t.push(vec!["p_to_one".into(), fmt_f64(p), fmt_f64(body_gap), fmt_f64(measure_gap)]);
    }

    let k2 = normalize_volume_two(&body)?;
    let i0 = i0_body(&k2, &g)?;
    let cv = match &k2 {
        Body::Polytope(poly) => Some(cone_volume_measure(poly)?),
        Body::Star(_) => None,
    };
    let n = dim as f64;
    for p in P_TOWARD_ZERO {
        let params = LpParams::new(dim, p)?;
        let ip = lp_intersection_body(&k2, params, &g)?;
        let body_gap =
            ip.values().iter().zip(i0.values()).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max);
        let measure_gap = match (&k2, &cv) {
            (Body::Polytope(poly), Some(cv)) => {
                let ev = opts.evaluate(poly, params)?;
                let w: Vec<f64> = ev.atoms.iter().map(|x| 2.0 * p.abs() * x / (n * n * ev.volume)).collect();
                DiscreteSphericalMeasure::on_facets(poly, w)?.compare(cv).max_relative
            }
            _ => f64::NAN,
        };
        t.push(vec!["p_to_zero".into(), fmt_f64(p), fmt_f64(body_gap), fmt_f64(measure_gap)]);
    }

    let mut cfg = config("limits", dim, None, Some(r), &a.body.input);
    if let Some(out) = &a.out {
        cfg.output = Some(display(out));
        t.write(out, Some(&cfg))?;
    }
    print!("{}", t.to_csv(None)?);
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_forms() {
        let e = parse_subspace(3, "e1,e3").unwrap();
        assert_eq!(e, vec![Vec3::x(), Vec3::z()]);
        let r = parse_subspace(3, "1,1,0; 0,0,1").unwrap();
        assert_eq!(r[0], Vec3::new(1.0, 1.0, 0.0));
        assert!(parse_subspace(2, "e3").is_err());
        assert!(parse_subspace(3, "x").is_err());
    }

    #[test]
    fn file_errors_map_to_three() {
        assert_eq!(exit_code(&Error::Missing("a".into())), 3);
        assert_eq!(exit_code(&Error::Malformed { path: "a".into(), message: "b".into() }), 3);
        assert_eq!(exit_code(&Error::InvalidP(0.0)), 2);
    }
}
