//! Simulator runs. For each scenario label `L` the run writes
//! `sim-L-consumers.csv` and `sim-L-nodes.csv` to the artifact directory
//! (column layout in `ndnsim::metrics`).
//!
//! Every scenario of one invocation uses the same network seed, so the
//! scenarios differ only in what is fetched and how it is authenticated.

use std::io::Write;

use chrono::NaiveDate;
use ndnsim::workload::{build, ScenarioKind, Workload, WorkloadError, WorkloadSpec};
use ndnsim::{run_fetch, testbed, FetchResult, SimConfig, SimError, StartMode, Topology};

use crate::args::SimArgs;
use crate::commands::{read, say, write, Ctx};
use crate::config::SimSection;
use crate::error::CliError;
use crate::seed::sub_seed;

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub scenario: ScenarioKind,
    pub consumers: usize,
    pub segments: usize,
    pub mean_transfer_s: Option<f64>,
    pub mean_goodput: Option<f64>,
    pub mean_interests: f64,
    pub producer_data_out: u64,
    pub drops: u64,
    /// Consumers whose fetched bytes open to the original plaintext.
    pub opened: usize,
}

impl From<WorkloadError> for CliError {
    fn from(e: WorkloadError) -> Self {
        match e {
            WorkloadError::Scheme(s) => s.into(),
            WorkloadError::Revocation(r) => r.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub fn parse_kinds(s: &str) -> Result<Vec<ScenarioKind>, CliError> {
    if s == "all" {
        return Ok(ScenarioKind::ALL.to_vec());
    }
    s.split(',')
        .map(|part| {
            ScenarioKind::ALL
                .into_iter()
                .find(|k| k.label() == part.trim())
                .ok_or_else(|| CliError::Input(format!("unknown scenario {part:?}; use i, ii, iii or all")))
        })
        .collect()
}

pub fn sim_config(section: &SimSection) -> Result<SimConfig, CliError> {
    let start = match section.start.as_str() {
        "concurrent" => StartMode::Concurrent,
        "staggered" => StartMode::Staggered {
            interval_us: section.stagger_ms * 1000,
        },
        other => return Err(CliError::Input(format!("unknown start mode {other:?}"))),
    };
    if !(0.0..1.0).contains(&section.loss_rate) {
        return Err(CliError::Input(format!("loss rate {} outside [0, 1)", section.loss_rate)));
    }
    Ok(SimConfig {
        window: section.window,
        cs_capacity: section.cs_capacity,
        loss_rate: section.loss_rate,
        start,
        ..SimConfig::default()
    })
}

pub fn workload_spec(section: &SimSection, prefix: &str, freshness_secs: u64) -> Result<WorkloadSpec, CliError> {
    let publish_date = section
        .publish_date
        .parse::<NaiveDate>()
        .map_err(|e| CliError::Input(format!("publish_date {:?}: {e}", section.publish_date)))?;
    Ok(WorkloadSpec {
        consumers: section.consumers,
        file_bytes: section.file_bytes,
        segment_size: section.segment_size,
        prefix: prefix.to_string(),
        publish_date,
        freshness_secs,
        ..WorkloadSpec::default()
    })
}

pub fn load_topology(section: &SimSection) -> Result<Topology, CliError> {
    match &section.topology {
        None => Ok(testbed()),
        Some(path) => {
            let bytes = read(path)?;
            let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
            Topology::parse(&text).map_err(|e| CliError::Sim(SimError::from(e)))
        }
    }
}

/// Builds and runs one scenario, then checks what every consumer received.
pub fn run_scenario(
    kind: ScenarioKind,
    topology: &Topology,
    spec: &WorkloadSpec,
    config: &SimConfig,
    seed: u64,
) -> Result<(Workload, FetchResult, Summary), CliError> {
    let workload = build(kind, spec, sub_seed(seed, "sim/workload"))?;
    let result = run_fetch(topology, &workload.scenario, config, sub_seed(seed, "sim/network"))?;
    let m = &result.metrics;
    let opened = (0..spec.consumers)
        .filter(|&c| workload.open(&result, c).is_ok_and(|p| p == workload.plaintext))
        .count();
    let summary = Summary {
        scenario: kind,
        consumers: spec.consumers,
        segments: m.total_segments,
        mean_transfer_s: m.mean_transfer_time_s(),
        mean_goodput: m.mean_goodput(),
        mean_interests: m.mean_interests_per_consumer(),
        producer_data_out: m.producer_data_out(),
        drops: m.nodes.iter().map(|n| n.dropped()).sum(),
        opened,
    };
    Ok((workload, result, summary))
}

fn fmt_opt(v: Option<f64>, scale: f64, unit: &str) -> String {
    v.map(|x| format!("{:.4} {unit}", x * scale)).unwrap_or_else(|| "incomplete".into())
}

pub fn cmd_sim(ctx: &Ctx, a: SimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut section = ctx.config.sim.clone();
    if let Some(v) = a.scenario {
        section.scenario = v;
    }
    if let Some(v) = a.topology {
        section.topology = Some(v);
    }
    if let Some(v) = a.consumers {
        section.consumers = v;
    }
    if let Some(v) = a.file_bytes {
        section.file_bytes = v;
    }
    if let Some(v) = a.start {
        section.start = v;
    }
    if let Some(v) = a.stagger_ms {
        section.stagger_ms = v;
    }
    if let Some(v) = a.loss_rate {
        section.loss_rate = v;
    }
    if let Some(v) = a.cs_capacity {
        section.cs_capacity = v;
    }
    let kinds = parse_kinds(&section.scenario)?;
    let config = sim_config(&section)?;
    let spec = workload_spec(&section, &ctx.config.prefix, ctx.config.freshness_secs)?;
    let topology = load_topology(&section)?;

    for kind in kinds {
        let (_, result, s) = run_scenario(kind, &topology, &spec, &config, ctx.seed)?;
        let label = kind.label();
        let mut consumers = Vec::new();
        let mut nodes = Vec::new();
        let csv_err = |e: csv::Error| CliError::Input(e.to_string());
        result.metrics.write_consumer_csv(&mut consumers).map_err(csv_err)?;
        result.metrics.write_node_csv(&mut nodes).map_err(csv_err)?;
        write(&ctx.config.artifact(format!("sim-{label}-consumers.csv")), &consumers)?;
        write(&ctx.config.artifact(format!("sim-{label}-nodes.csv")), &nodes)?;

        say(
            out,
            &format!(
                "scenario {label:<3} consumers {} segments {}  transfer {}  goodput {}  interests/consumer {:.1}  producer data {}  drops {}  opened {}/{}",
                s.consumers,
                s.segments,
                fmt_opt(s.mean_transfer_s, 1.0, "s"),
                fmt_opt(s.mean_goodput, 8e-6, "Mbit/s"),
                s.mean_interests,
                s.producer_data_out,
                s.drops,
                s.opened,
                s.consumers,
            ),
        )?;
        for n in &result.metrics.nodes {
            say(
                out,
                &format!(
                    "  {:<10} in {:>6} fwd {:>6} data_out {:>6} cs_hits {:>6} aggregated {:>5}",
                    n.id, n.interests_in, n.interests_forwarded, n.data_out, n.cs_hits, n.aggregated
                ),
            )?;
        }
    }
    Ok(())
}
