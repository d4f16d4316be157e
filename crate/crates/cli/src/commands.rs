use std::collections::BTreeMap;

use idxf_core::bergman::{basis_element, kernel_closed, kernel_diagonal};
use idxf_core::oscillator::{energy_level_tuned, Eigenbasis};
use idxf_core::quadrature::QuadratureSpec;
use idxf_core::report::VerificationReport;
use idxf_core::transform::{
    transform_apply_coeffs, transform_apply_sampled, CoherentState, CoherentStateLabel, EigenExpansion, SampledFunction,
    TransformResult,
};
use idxf_core::verify::{run_suite, VerifyConfig};
use idxf_core::{Complex64, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, What};
use crate::error::CliError;
use crate::output::{emit, errata, json, metadata, Cell, Table, VERSION};
use crate::parse;

/// Relative slack allowed when checking samples against their envelope.
const SAMPLE_SLACK: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct VerifyDocument<'a> {
    tool: &'static str,
    version: &'static str,
    suite: String,
    gamma: f64,
    mode: &'static str,
    tol: f64,
    seed: u64,
    quadrature: QuadratureSpec,
    errata: BTreeMap<&'static str, &'static str>,
    pass: bool,
    checks: &'a [VerificationReport],
}

pub fn run_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let mut vc = VerifyConfig::new(cfg.gamma, cfg.tol).map_err(|e| CliError::Config(e.to_string()))?;
    vc.seed = cfg.seed;
    if cfg.suite.needs_oscillator() {
        cfg.gamma.require_oscillator().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let reports = run_suite(cfg.suite, &vc).map_err(CliError::from_check)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let doc = VerifyDocument {
        tool: "idxf",
        version: VERSION,
        suite: cfg.suite.to_string(),
        gamma: cfg.gamma.gamma,
        mode: cfg.mode_name(),
        tol: cfg.tol,
        seed: cfg.seed,
        quadrature: vc.quadrature,
        errata: errata().into_iter().collect(),
        pass: failed == 0,
        checks: &reports,
    };
    emit(cfg.out.as_deref(), &json(&doc)?)?;
    for r in &reports {
        eprintln!(
            "{} {} max_error={:.3e} tol={:.1e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            r.max_abs_error,
            r.tolerance
        );
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Config(format!("{flag} is required here")))
}

enum TransformInput {
    Coefficients(Vec<Complex64>),
    Sampled(parse::Samples),
}

fn transform_input(cfg: &RunConfig) -> Result<TransformInput, CliError> {
    let text = match (&cfg.input, &cfg.coeffs) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either --input or --coeffs, not both".into())),
        (None, None) => return Err(CliError::Config("transform needs --input or --coeffs".into())),
        (None, Some(c)) => return Ok(TransformInput::Coefficients(parse::coefficients(c)?)),
        (Some(p), None) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
    };
    if parse::is_sampled(&text) {
        Ok(TransformInput::Sampled(parse::samples(&text)?))
    } else {
        Ok(TransformInput::Coefficients(parse::coefficients(&text)?))
    }
}

fn sampled_function(s: parse::Samples) -> Result<SampledFunction, CliError> {
    for (x, v) in s.xs.iter().zip(&s.values) {
        let bound = s.envelope.bound(*x);
        if v.norm() > bound * (1.0 + SAMPLE_SLACK) {
            return Err(CliError::from_input(Error::Envelope { x: *x, value: v.norm(), bound }));
        }
    }
    SampledFunction::tabulated(s.xs, s.values, s.envelope).map_err(CliError::from_input)
}

pub fn run_transform(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = parse::grid(require(&cfg.grid, "--grid")?)?;
    cfg.gamma.require_oscillator().map_err(CliError::from_input)?;
    let (result, path): (TransformResult, &str) = match transform_input(cfg)? {
        TransformInput::Coefficients(c) => {
            let e = EigenExpansion::new(cfg.gamma, c).map_err(CliError::from_input)?;
            (transform_apply_coeffs(&e, &grid, cfg.convention).map_err(CliError::from_input)?, "coefficients")
        }
        TransformInput::Sampled(s) => {
            let phi = sampled_function(s)?;
            let spec = QuadratureSpec::default().with_tol(cfg.tol);
            let r = transform_apply_sampled(&phi, &grid, &cfg.gamma, &spec, cfg.convention).map_err(CliError::from_input)?;
            (r, "quadrature")
        }
    };
    let mut meta = metadata(cfg, "transform");
    meta.push(("input".into(), result.input.clone()));
    meta.push(("path".into(), path.into()));
    let mut t = Table::new(meta, vec!["z_re", "z_im", "F_re", "F_im"]);
    for (z, f) in &result.values {
        t.rows.push(vec![Cell::Num(z.re), Cell::Num(z.im), Cell::Num(f.re), Cell::Num(f.im)]);
    }
    emit(cfg.out.as_deref(), &t.render())
}

pub fn run_eval(cfg: &RunConfig) -> Result<(), CliError> {
    let what = cfg.what.ok_or_else(|| CliError::Config("eval needs --what".into()))?;
    let gp = cfg.gamma;
    let degrees = || parse::degrees(cfg.n.as_deref().unwrap_or("0"));
    let grid = || parse::grid(require(&cfg.grid, "--grid")?);
    let xs = || parse::abscissae(require(&cfg.x, "--x")?);
    let num = |v: f64| Cell::Num(v);
    let mut meta = metadata(cfg, "eval");
    meta.push(("what".into(), what.name().into()));

    let (columns, rows): (Vec<&'static str>, Vec<Vec<Cell>>) = match what {
        What::Basis => {
            let (ns, zs) = (degrees()?, grid()?);
            let rows = ns
                .iter()
                .flat_map(|&n| zs.iter().map(move |&z| (n, z)))
                .map(|(n, z)| {
                    let v = basis_element(n, &gp, z);
                    vec![Cell::Int(n), num(z.re), num(z.im), num(v.re), num(v.im)]
                })
                .collect();
            (vec!["n", "z_re", "z_im", "re", "im"], rows)
        }
        What::Kernel => {
            let zs = grid()?;
            let pairs: Vec<(Complex64, Complex64)> = zs.iter().flat_map(|&z| zs.iter().map(move |&w| (z, w))).collect();
            let rows = pairs
                .par_iter()
                .map(|&(z, w)| {
                    let v = kernel_closed(z, w, &gp)?;
                    Ok(vec![num(z.re), num(z.im), num(w.re), num(w.im), num(v.re), num(v.im)])
                })
                .collect::<Result<Vec<_>, Error>>()
                .map_err(CliError::from_input)?;
            (vec!["z_re", "z_im", "w_re", "w_im", "re", "im"], rows)
        }
        What::KernelDiagonal => {
            let rows = grid()?
                .iter()
                .map(|&z| Ok(vec![num(z.re), num(z.im), num(kernel_diagonal(z, &gp)?)]))
                .collect::<Result<Vec<_>, Error>>()
                .map_err(CliError::from_input)?;
            (vec!["z_re", "z_im", "value"], rows)
        }
        What::Eigenfunction => {
            let (ns, xs) = (degrees()?, xs()?);
            let n_max = ns.iter().copied().max().unwrap_or(0);
            let basis = Eigenbasis::new(&gp, n_max).map_err(CliError::from_input)?;
            let values = xs
                .par_iter()
                .map(|&x| {
                    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
                    basis.eval_into(x, &mut out)?;
                    Ok(out)
                })
                .collect::<Result<Vec<_>, Error>>()
                .map_err(CliError::from_input)?;
            let mut rows = Vec::new();
            for &n in &ns {
                for (x, v) in xs.iter().zip(&values) {
                    rows.push(vec![Cell::Int(n), num(*x), num(v[n].re), num(v[n].im)]);
                }
            }
            (vec!["n", "x", "re", "im"], rows)
        }
        What::CoherentState => {
            let (zs, xs) = (grid()?, xs()?);
            let states = zs
                .iter()
                .map(|&z| CoherentState::new(CoherentStateLabel::new(z, gp)?))
                .collect::<Result<Vec<_>, Error>>()
                .map_err(CliError::from_input)?;
            let cells: Vec<(usize, f64)> = (0..zs.len()).flat_map(|i| xs.iter().map(move |&x| (i, x))).collect();
            let rows = cells
                .par_iter()
                .map(|&(i, x)| {
                    let v = states[i].eval(x)?;
                    Ok(vec![num(zs[i].re), num(zs[i].im), num(x), num(v.re), num(v.im)])
                })
                .collect::<Result<Vec<_>, Error>>()
                .map_err(CliError::from_input)?;
            (vec!["z_re", "z_im", "x", "re", "im"], rows)
        }
        What::Energy => {
            gp.require_oscillator().map_err(CliError::from_input)?;
            meta.push(("units".into(), "hbar*omega".into()));
            let rows = degrees()?.iter().map(|&n| vec![Cell::Int(n), num(energy_level_tuned(n, &gp))]).collect();
            (vec!["n", "energy"], rows)
        }
    };
    let mut t = Table::new(meta, columns);
    t.rows = rows;
    emit(cfg.out.as_deref(), &t.render())
}
