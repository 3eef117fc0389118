use std::path::Path;

use log::info;
use serde::Serialize;

use dualshadow::cfun::{self, CfunInput};
use dualshadow::diagonal::{self, AnySeq, OperatorSeq, SequenceInput};
use dualshadow::hilbert::{self, TupleInput};
use dualshadow::space::TargetSpace;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::{float, header, read_json, OutDir};

/// Wrapper written around every report.
#[derive(Serialize)]
pub struct Envelope<'a, R> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    /// The identities and inequalities whose finite instances the report measures.
    pub checks: &'static [&'static str],
    pub report: R,
}

impl<'a, R> Envelope<'a, R> {
    pub fn new(config: &'a RunConfig, checks: &'static [&'static str], report: R) -> Self {
        Envelope { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), config, checks, report }
    }
}

const SEQUENCE_CHECKS: &[&str] = &[
    "operator norm of the diagonal operator equals the dual-shadow norm",
    "dual-pair identity beta(phi(a)) = phi(sum beta_i a_i)",
    "uniform tail criterion for total boundedness of the dual shadow",
    "c0 decay of the terms",
];

const RADIUS_CHECKS: &[&str] = &[
    "numerical radius sandwich ||T||/2 <= omega <= ||T||",
    "radius duality omega = sup w(T beta) over the unit l^q ball",
    "tuple norm equals the dual-shadow norm in the matrix space",
    "uniform tails of the sampled joint numerical range",
];

const CFUN_CHECKS: &[&str] = &[
    "uniform tails of F(grid) in l^p",
    "neighborhood bound ||F(s) - F(s0)||^p <= (1 + 2^(p+1)) eps^p",
    "equicontinuity of the components for p = inf",
];

fn input_path(config: &RunConfig) -> Result<&Path, CliError> {
    config
        .input
        .as_deref()
        .map(Path::new)
        .ok_or_else(|| CliError::Invalid(format!("{} needs --input", config.command)))
}

pub fn analyze_sequence(config: &RunConfig) -> Result<(), CliError> {
    let input: SequenceInput = read_json(input_path(config)?)?;
    match input.build(config.p)? {
        AnySeq::Cn(a) => sequence_report(&a, config),
        AnySeq::Grid(a) => sequence_report(&a, config),
        AnySeq::Mat(a) => sequence_report(&a, config),
    }
}

fn sequence_report<S: TargetSpace>(a: &OperatorSeq<S>, config: &RunConfig) -> Result<(), CliError> {
    let out = OutDir::create(&config.out)?;
    let r = diagonal::classify(a, &config.epsilons, &config.search())?;
    let decay = diagonal::c0_decay_check(a, &config.epsilons);

    #[derive(Serialize)]
    struct SequenceReport<'a> {
        membership: &'a diagonal::MembershipReport,
        decay: &'a diagonal::DecayReport,
    }
    out.json("membership.json", &Envelope::new(config, SEQUENCE_CHECKS, SequenceReport { membership: &r, decay: &decay }))?;
    let rows: Vec<Vec<String>> = r.shadow_tail_profile.iter().map(|t| vec![t.m.to_string(), float(t.sup_tail)]).collect();
    out.csv("tails.csv", &header(&["m", "sup_tail"]), &rows)?;
    let rows: Vec<Vec<String>> = r.strong_partial_norms.iter().map(|p| vec![p.n.to_string(), float(p.value)]).collect();
    out.csv("partial_norms.csv", &header(&["n", "strong_norm"]), &rows)?;
    info!("wrote membership.json, tails.csv, partial_norms.csv to {}", config.out.display());
    println!(
        "triple_norm={} operator_norm={} in_lp={} in_lpb={} in_lpc={}",
        float(r.triple_norm),
        float(r.operator_norm),
        r.in_lp,
        r.in_lpb,
        r.in_lpc
    );
    for c in &r.certificates {
        println!("eps={} m={} sup_tail={}", c.epsilon, c.cutoff_m, float(c.sup_tail));
    }
    Ok(())
}

pub fn numrange(config: &RunConfig) -> Result<(), CliError> {
    let input: TupleInput = read_json(input_path(config)?)?;
    let t = input.build(config.p)?;
    let out = OutDir::create(&config.out)?;
    let opts = config.search();
    let samples = config.budgets.samples;
    let r = hilbert::analyze(&t, &opts, samples, &config.epsilons)?;
    out.json("radius.json", &Envelope::new(config, RADIUS_CHECKS, &r))?;

    let range = hilbert::numerical_range_sample(&t, samples, opts.seed);
    let rows: Vec<Vec<String>> = range
        .rows()
        .into_iter()
        .map(|row| row.into_iter().enumerate().map(|(k, v)| if k == 0 { format!("{v}") } else { float(v) }).collect())
        .collect();
    out.csv("range.csv", &range.header(), &rows)?;
    let rows: Vec<Vec<String>> = r
        .tails
        .iter()
        .flat_map(|tails| {
            tails.range_tails.iter().zip(&tails.pair_tails).map(|(a, b)| vec![a.m.to_string(), float(a.sup_tail), float(b.sup_tail)])
        })
        .collect();
    out.csv("tails.csv", &header(&["m", "range_sup_tail", "pair_sup_tail"]), &rows)?;
    info!("wrote radius.json, range.csv, tails.csv to {}", config.out.display());
    println!(
        "omega={} tuple_norm={} sandwich_holds={} duality_gap={} sup_swap_gap={}",
        float(r.omega.value),
        float(r.tuple_norm.value),
        r.sandwich.holds,
        float(r.duality.gap),
        float(r.sup_swap_gap)
    );
    for (i, s) in r.single_radii.iter().enumerate() {
        println!("w(T_{})={} norm={}", i + 1, float(s.value), float(s.norm));
    }
    Ok(())
}

pub fn cfun(config: &RunConfig) -> Result<(), CliError> {
    let input: CfunInput = read_json(input_path(config)?)?;
    let f = input.build(config.p)?;
    let out = OutDir::create(&config.out)?;
    let r = cfun::analyze(&f, &config.epsilons)?;
    out.json("cfun.json", &Envelope::new(config, CFUN_CHECKS, &r))?;
    let rows: Vec<Vec<String>> = r.modulus.iter().map(|m| vec![float(m.delta), float(m.omega)]).collect();
    out.csv("modulus.csv", &header(&["delta", "omega"]), &rows)?;
    let rows: Vec<Vec<String>> = r.tail_profile.iter().map(|t| vec![t.m.to_string(), float(t.sup_tail)]).collect();
    out.csv("tails.csv", &header(&["m", "sup_tail"]), &rows)?;
    let rows: Vec<Vec<String>> = r
        .continuity_checks
        .iter()
        .map(|c| {
            vec![
                float(c.epsilon),
                c.base_point.clone(),
                c.cutoff_m.to_string(),
                float(c.measured_max),
                float(c.bound),
                c.holds.to_string(),
            ]
        })
        .collect();
    out.csv("continuity.csv", &header(&["epsilon", "base_point", "cutoff_m", "measured_max", "bound", "holds"]), &rows)?;
    info!("wrote cfun.json, modulus.csv, tails.csv, continuity.csv to {}", config.out.display());
    println!(
        "type={} finest_delta={} bounds_hold={}",
        serde_json::to_value(r.compactness_type).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
        float(r.finest_delta),
        r.all_bounds_hold
    );

    let uncertified: Vec<String> = r
        .certificates
        .iter()
        .filter(|c| !c.below_horizon(f.len()))
        .map(|c| c.epsilon.to_string())
        .collect();
    if !uncertified.is_empty() {
        return Err(CliError::NoCertificate(format!(
            "no cutoff below N = {} for eps = {} (reports were still written)",
            f.len(),
            uncertified.join(", ")
        )));
    }
    if !r.all_bounds_hold {
        return Err(CliError::Verify(vec!["neighborhood bound".into()]));
    }
    Ok(())
}
