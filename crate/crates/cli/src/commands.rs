use amk_core::oracle::{
    direct_conditionals_quadrature, grid_argmin, helstrom_fock, mc_receiver, FockState, McReceiver,
};
use amk_core::{
    a_e, b_e, beta_opt_as_printed, beta_opt_full, c_e, evolve_single_mode, find_crossovers,
    he_noisy, he_with_threshold, helstrom_pe, heterodyne_variance, homodyne_optimal_threshold,
    homodyne_variance, ke_noisy, qe_ideal, re_noisy, regime_table, sigma_minus_sq,
    survival_fraction, survival_fraction_as_printed, ChannelBudget, ComparisonParams,
    DecisionThreshold, NoiseParams, Receiver, ReceiverPair,
};
use rayon::prelude::*;

use crate::args::{
    Auto, ChannelArgs, PairChoice, PeArgs, Quantity, ReceiverChoice, Scale, SweepArgs, Target,
    ThresholdArgs, Variable, VerifyArgs,
};
use crate::table::{Cell, Report};
use crate::CliError;

/// A rendered report plus whether every verification in it passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self { report, passed: true }
    }
}

impl ChannelArgs {
    pub fn params(&self) -> Result<ComparisonParams, CliError> {
        Ok(ComparisonParams::new(
            self.eta_ken.unwrap_or(self.eta),
            self.eta_hom.unwrap_or(self.eta),
            self.eta_het.unwrap_or(self.eta),
            self.gamma_t,
            self.m,
            self.transmissivity,
        )?)
    }
}

fn describe(report: &mut Report, p: &ComparisonParams) {
    report.meta_num("eta_ken", p.eta_ken);
    report.meta_num("eta_hom", p.eta_hom);
    report.meta_num("eta_het", p.eta_het);
    report.meta_num("gamma_t", p.gamma_t);
    report.meta_num("m", p.m_thermal);
    report.meta_num("transmissivity", p.transmissivity);
}

fn resolve_beta(beta: Auto, n: f64, noise: &NoiseParams) -> Result<f64, CliError> {
    match beta {
        Auto::Value(b) => Ok(b),
        Auto::Auto if n == 0.0 => Ok(0.0),
        Auto::Auto => Ok(beta_opt_full(n, noise)?),
    }
}

pub fn pe(args: &PeArgs) -> Result<Outcome, CliError> {
    let params = args.channel.params()?;
    let n = args.n;
    let mut report = Report::new(
        "pe",
        &["receiver", "n", "pe", "alpha_prime", "m_prime", "variance", "beta", "lambda"],
    );
    describe(&mut report, &params);
    report.meta("beta", args.beta.to_string());
    report.meta("lambda_threshold", args.lambda_threshold.to_string());

    let receivers: &[ReceiverChoice] = match args.receiver {
        ReceiverChoice::All => &[
            ReceiverChoice::Direct,
            ReceiverChoice::Homodyne,
            ReceiverChoice::Heterodyne,
            ReceiverChoice::Helstrom,
        ],
        ref one => std::slice::from_ref(one),
    };
    for &receiver in receivers {
        let nan = f64::NAN;
        let row: Vec<Cell> = match receiver {
            ReceiverChoice::Direct => {
                let noise = params.noise(Receiver::Direct)?;
                let state = evolve_single_mode((2.0 * n).sqrt(), &noise);
                let p = ke_noisy(n, &params.direct_config()?, &noise)?;
                vec!["direct".into(), n.into(), p.into(), state.amplitude.into(), state.thermal_mean.into(), nan.into(), nan.into(), nan.into()]
            }
            ReceiverChoice::Homodyne => {
                let noise = params.noise(Receiver::Homodyne)?;
                let state = evolve_single_mode((2.0 * n).sqrt(), &noise);
                let (p, lambda) = match args.lambda_threshold {
                    Auto::Auto => (he_noisy(n, &noise)?, homodyne_optimal_threshold(n, &noise)?.value()),
                    Auto::Value(v) => (he_with_threshold(n, &noise, DecisionThreshold::new(v)?)?, v),
                };
                let var = homodyne_variance(&state, noise.eta());
                vec!["homodyne".into(), n.into(), p.into(), state.amplitude.into(), state.thermal_mean.into(), var.into(), nan.into(), lambda.into()]
            }
            ReceiverChoice::Heterodyne => {
                let noise = params.noise(Receiver::Heterodyne)?;
                let beta = resolve_beta(args.beta, n, &noise)?;
                let p = re_noisy(n, beta, &noise)?;
                let var = heterodyne_variance(n, beta, &noise)?.value();
                let alpha = (2.0 * n * (1.0 - beta)).sqrt() * (-0.5 * noise.gamma_t()).exp();
                vec!["heterodyne".into(), n.into(), p.into(), alpha.into(), noise.added_thermal().into(), var.into(), beta.into(), (0.5 * alpha).into()]
            }
            ReceiverChoice::Helstrom => {
                let p = helstrom_pe(n)?;
                vec!["helstrom".into(), n.into(), p.into(), (2.0 * n).sqrt().into(), 0.0.into(), nan.into(), nan.into(), nan.into()]
            }
            ReceiverChoice::All => unreachable!("expanded above"),
        };
        report.push(row);
    }
    Ok(report.into())
}

struct Point {
    n: f64,
    beta: Auto,
    params: ComparisonParams,
}

fn grid(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let (a, b, k) = (args.start, args.stop, args.points);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(CliError::Invalid(format!("sweep needs start < stop (got {a}, {b})")));
    }
    if k < 2 {
        return Err(CliError::Invalid(format!("sweep needs points >= 2 (got {k})")));
    }
    if args.scale == Scale::Log && a <= 0.0 {
        return Err(CliError::Invalid(format!("log scale needs start > 0 (got {a})")));
    }
    let last = (k - 1) as f64;
    let mut xs: Vec<f64> = (0..k)
        .map(|i| {
            let t = i as f64 / last;
            match args.scale {
                Scale::Linear => a + t * (b - a),
                Scale::Log => (a.ln() + t * (b.ln() - a.ln())).exp(),
            }
        })
        .collect();
    xs[0] = a;
    xs[k - 1] = b;
    Ok(xs)
}

fn point(args: &SweepArgs, x: f64) -> Result<Point, CliError> {
    let mut ch = args.channel.clone();
    let mut n = args.n;
    let mut beta = args.beta;
    match args.variable {
        Variable::N => n = x,
        Variable::Eta => {
            ch.eta = x;
            ch.eta_ken = None;
            ch.eta_hom = None;
            ch.eta_het = None;
        }
        Variable::GammaT => ch.gamma_t = x,
        Variable::M => ch.m = x,
        Variable::Beta => beta = Auto::Value(x),
    }
    Ok(Point {
        n,
        beta,
        params: ch.params()?,
    })
}

fn quantity(q: Quantity, pt: &Point, n_max: f64) -> Result<f64, CliError> {
    let n = pt.n;
    let p = &pt.params;
    let het = p.noise(Receiver::Heterodyne)?;
    let beta = || resolve_beta(pt.beta, n, &het);
    Ok(match q {
        Quantity::Ke => ke_noisy(n, &p.direct_config()?, &p.noise(Receiver::Direct)?)?,
        Quantity::He => he_noisy(n, &p.noise(Receiver::Homodyne)?)?,
        Quantity::Re => re_noisy(n, beta()?, &het)?,
        Quantity::Pe => helstrom_pe(n)?,
        Quantity::Qe => qe_ideal(n, beta()?)?,
        Quantity::BetaOpt if n == 0.0 => f64::NAN,
        Quantity::BetaOpt => beta_opt_full(n, &het)?,
        Quantity::BetaS => survival_fraction(n, &het)?.unwrap_or(f64::NAN),
        Quantity::AE => a_e(n, p)?,
        Quantity::BE => b_e(n, p)?,
        Quantity::CE => c_e(n, &het)?,
        Quantity::NTh => {
            let common = ComparisonParams::new(het.eta(), het.eta(), het.eta(), het.gamma_t(), het.m_thermal(), 1.0)?;
            find_crossovers(ReceiverPair::HetVsHom, &common, n_max)?
                .thresholds
                .first()
                .map_or(f64::NAN, |t| t.energy)
        }
        Quantity::SigmaMinusSq => sigma_minus_sq(beta()? * n, &het),
    })
}

pub fn sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let xs = grid(args)?;
    let mut columns = vec![args.variable.column()];
    columns.extend(args.quantities.iter().map(Quantity::column));
    let mut report = Report::new("sweep", &columns);
    describe(&mut report, &args.channel.params()?);
    report.meta("variable", args.variable.column());
    report.meta_num("start", args.start);
    report.meta_num("stop", args.stop);
    report.meta("points", args.points as u64);
    report.meta("scale", if args.scale == Scale::Log { "log" } else { "linear" });
    report.meta_num("n", args.n);
    report.meta("beta", args.beta.to_string());
    report.meta_num("n_max", args.n_max);

    let rows = xs
        .par_iter()
        .map(|&x| {
            let pt = point(args, x)?;
            let mut row = vec![Cell::Num(x)];
            for &q in &args.quantities {
                row.push(Cell::Num(quantity(q, &pt, args.n_max)?));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    for row in rows {
        report.push(row);
    }
    Ok(report.into())
}

pub fn threshold(args: &ThresholdArgs) -> Result<Outcome, CliError> {
    let params = args.channel.params()?;
    let mut report = Report::new(
        "threshold",
        &["pair", "from", "to", "best", "edge_certified", "edge_boundary_uncertain"],
    );
    describe(&mut report, &params);
    report.meta_num("n_max", args.n_max);

    let pair = match args.pair {
        PairChoice::All => {
            let table = regime_table(&params, args.n_max)?;
            report.meta("pair", "all");
            report.meta("crossovers", table.regimes.len() as u64 - 1);
            for (i, r) in table.regimes.iter().enumerate() {
                let last = i + 1 == table.regimes.len();
                report.push(vec!["all".into(), r.from.into(), r.to.into(), r.best.label().into(), (!last).into(), false.into()]);
            }
            if table.regimes.len() == 1 {
                report.notes.push(format!("no crossover below N = {}", args.n_max));
            }
            return Ok(report.into());
        }
        PairChoice::HomVsDirect => ReceiverPair::HomVsDirect,
        PairChoice::HetVsDirect => ReceiverPair::HetVsDirect,
        PairChoice::HetVsHom => ReceiverPair::HetVsHom,
    };
    let found = find_crossovers(pair, &params, args.n_max)?;
    report.meta("pair", pair.to_string());
    report.meta("crossovers", found.thresholds.len() as u64);
    for (i, r) in found.regimes.iter().enumerate() {
        let edge = found.thresholds.get(i);
        report.push(vec![
            pair.to_string().into(),
            r.from.into(),
            r.to.into(),
            r.best.label().into(),
            edge.is_some_and(|t| t.certified).into(),
            edge.is_some_and(|t| t.boundary_uncertain).into(),
        ]);
    }
    if found.thresholds.is_empty() {
        report.notes.push(format!("no crossover below N = {}", args.n_max));
    }
    for t in found.thresholds.iter().filter(|t| !t.certified) {
        report.notes.push(format!("threshold at N = {:.6} is not sign-certified", t.energy));
    }
    Ok(report.into())
}

const FOCK_TOL: f64 = 1e-8;
const QUADRATURE_TOL: f64 = 1e-6;
const ARGMIN_TOL: f64 = 1e-4;
const SEPARABILITY_TOL: f64 = 1e-9;
const MC_SIGMAS: f64 = 3.0;

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let params = args.channel.params()?;
    let n = args.n;
    let mut report = Report::new(
        "verify",
        &["target", "n", "closed_form", "oracle", "discrepancy", "tolerance", "unit", "pass"],
    );
    describe(&mut report, &params);
    report.meta("seed", args.seed);
    report.meta("shots", args.shots);
    report.meta("dim", args.dim as u64);
    report.meta("as_printed", args.as_printed);

    let (name, closed, oracle, discrepancy, tol, unit) = match args.target {
        Target::Helstrom => {
            let closed = helstrom_pe(n)?;
            let out = helstrom_fock(
                &FockState::vacuum(args.dim)?,
                &FockState::coherent((2.0 * n).sqrt(), args.dim)?,
            )?;
            if out.truncation_deficit > 1e-6 {
                report.notes.push(format!("truncation at dim {} loses {:.2e}", args.dim, out.truncation_deficit));
            }
            ("helstrom", closed, out.error_probability, (closed - out.error_probability).abs(), FOCK_TOL, "abs")
        }
        Target::Direct => {
            let cfg = params.direct_config()?;
            let noise = params.noise(Receiver::Direct)?;
            let closed = ke_noisy(n, &cfg, &noise)?;
            let quad = direct_conditionals_quadrature(n, &cfg, &noise)?.average();
            ("direct", closed, quad, (closed - quad).abs(), QUADRATURE_TOL, "abs")
        }
        Target::BetaOpt => {
            let noise = params.noise(Receiver::Heterodyne)?;
            let closed = if args.as_printed {
                beta_opt_as_printed(n, &noise)?
            } else {
                beta_opt_full(n, &noise)?
            };
            let numeric = grid_argmin(|b| re_noisy(n, b, &noise).unwrap_or(f64::NAN), 0.0, 0.999, 1e-10)?;
            if numeric.degenerate {
                report.notes.push("argmin is degenerate".into());
            }
            ("beta-opt", closed, numeric.x, (closed - numeric.x).abs(), ARGMIN_TOL, "abs")
        }
        Target::Homodyne | Target::Heterodyne | Target::DirectMc => {
            let (name, closed, setup) = match args.target {
                Target::Homodyne => {
                    let noise = params.noise(Receiver::Homodyne)?;
                    let (closed, threshold) = match args.lambda_threshold {
                        Auto::Auto => (he_noisy(n, &noise)?, None),
                        Auto::Value(v) => {
                            let t = DecisionThreshold::new(v)?;
                            (he_with_threshold(n, &noise, t)?, Some(t))
                        }
                    };
                    ("homodyne", closed, McReceiver::Homodyne { n, noise, threshold })
                }
                Target::Heterodyne => {
                    let noise = params.noise(Receiver::Heterodyne)?;
                    let beta = resolve_beta(args.beta, n, &noise)?;
                    ChannelBudget::new(n, beta)?;
                    ("heterodyne", re_noisy(n, beta, &noise)?, McReceiver::Heterodyne { n, beta, noise })
                }
                _ => {
                    let noise = params.noise(Receiver::Direct)?;
                    let config = params.direct_config()?;
                    ("direct-mc", ke_noisy(n, &config, &noise)?, McReceiver::Direct { n, config, noise })
                }
            };
            let est = mc_receiver(&setup, args.shots, args.seed)?;
            let z = if est.std_err > 0.0 {
                est.z_score(closed).abs()
            } else if est.mean == closed {
                0.0
            } else {
                f64::INFINITY
            };
            report.notes.push(format!("standard error {:.3e} over {} shots", est.std_err, est.shots));
            (name, closed, est.mean, z, MC_SIGMAS, "sigma")
        }
        Target::Separability => {
            let noise = params.noise(Receiver::Heterodyne)?;
            let beta = if args.as_printed {
                survival_fraction_as_printed(n, &noise)?
            } else {
                survival_fraction(n, &noise)?.ok_or_else(|| {
                    CliError::Invalid(format!("no survival fraction in [0, 1) at N = {n} for these noise parameters"))
                })?
            };
            let sigma = sigma_minus_sq(beta * n, &noise);
            report.notes.push(format!("beta_s = {beta:.9e}"));
            ("separability", 0.25, sigma, (sigma - 0.25).abs(), SEPARABILITY_TOL, "abs")
        }
    };
    let passed = discrepancy <= tol;
    report.push(vec![
        name.into(),
        n.into(),
        closed.into(),
        oracle.into(),
        discrepancy.into(),
        tol.into(),
        unit.into(),
        passed.into(),
    ]);
    Ok(Outcome { report, passed })
}
