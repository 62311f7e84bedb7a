//! Command-line front end: load mechanisms, run verdicts, emit reports.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed (witness printed),
//! 2 invalid input or precondition.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use osp_core::interchange::{load_mechanism, rat_string, save_mechanism};
use osp_core::ironing::minimize_witness;
use osp_core::model::{evaluate_profile, validate_mechanism, Rat};
use osp_core::osp_graph::{build_osp_graph, check_2cmon, check_cmon, CycleWitness, OspGraph};
use osp_core::scheduling::{
    approximation_ratio, build_m4, check_m4_preconditions, optimal_makespan,
};
use osp_core::three_way::{classify_three_way, order_transform, Violation};
use osp_core::Mechanism;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "osp", about = "Verdicts and transforms for implementation trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct CommonFlags {
    /// Restrict to one agent, by the id used in the mechanism file.
    #[arg(long)]
    agent: Option<String>,
    /// Refuse profile boxes larger than this.
    #[arg(long, default_value_t = 1_000_000)]
    max_profiles: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Per-agent 2-cycle and full cycle-monotonicity verdicts.
    Check {
        file: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
        /// Shrink negative-cycle witnesses before reporting.
        #[arg(long)]
        minimize: bool,
    },
    /// Rewrite interleaved queries into ordered chains.
    Order {
        file: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Three-way greedy classification (requires ordered queries).
    Classify {
        file: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Find, minimize and print one negative cycle.
    Witness {
        file: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
        #[arg(long)]
        minimize: bool,
    },
    /// Build the scheduling mechanism and verify it end to end.
    M4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Four ascending comma-separated values.
        #[arg(long, value_delimiter = ',')]
        domain: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Brute-force optimal makespan for given machine types.
    Optimal {
        /// Comma-separated per-machine types.
        #[arg(long, value_delimiter = ',')]
        types: Vec<String>,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_rat_arg(s: &str) -> Result<Rat> {
    osp_core::interchange::parse_rat(&Value::String(s.trim().to_string()))
        .map_err(|e| anyhow!("bad rational '{s}': {e}"))
}

fn load(file: &Path, max_profiles: usize) -> Result<Mechanism> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("cannot read {}", file.display()))?;
    let m = load_mechanism(&text)?;
    validate_mechanism(&m)?;
    if m.profile_count() > max_profiles {
        return Err(anyhow!(
            "profile box has {} profiles, above --max-profiles {}",
            m.profile_count(),
            max_profiles
        ));
    }
    Ok(m)
}

fn agent_indices(m: &Mechanism, filter: &Option<String>) -> Result<Vec<usize>> {
    match filter {
        None => Ok((0..m.n_agents()).collect()),
        Some(id) => m
            .agents
            .iter()
            .position(|a| a == id)
            .map(|i| vec![i])
            .ok_or_else(|| anyhow!("unknown agent '{id}'; file declares {:?}", m.agents)),
    }
}

fn emit(flags: &CommonFlags, text: &str) -> Result<()> {
    match &flags.out {
        Some(p) => std::fs::write(p, text)
            .with_context(|| format!("cannot write {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

struct AgentVerdict {
    agent: String,
    two_cmon: bool,
    cmon: bool,
    witness: Option<CycleWitness>,
    graph: OspGraph,
}

fn check_agents(m: &Mechanism, agents: &[usize], minimize: bool) -> Result<Vec<AgentVerdict>> {
    let mut out = Vec::new();
    for &i in agents {
        let g = build_osp_graph(m, i)?;
        let two = check_2cmon(&g);
        let (ok, witness) = check_cmon(&g);
        let witness = match (witness, minimize) {
            (Some(w), true) => Some(minimize_witness(&g, &w)),
            (w, _) => w,
        };
        out.push(AgentVerdict {
            agent: m.agents[i].clone(),
            two_cmon: two.ok,
            cmon: ok,
            witness,
            graph: g,
        });
    }
    Ok(out)
}

fn render_check(m: &Mechanism, verdicts: &[AgentVerdict], format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Value> = verdicts
                .iter()
                .map(|v| {
                    json!({
                        "agent": v.agent,
                        "two_cycle_monotone": v.two_cmon,
                        "cycle_monotone": v.cmon,
                        "witness": v.witness.as_ref().map(|w| w.to_json(&v.graph, m)),
                    })
                })
                .collect();
            let all = verdicts.iter().all(|v| v.cmon);
            format!(
                "{}\n",
                json!({"agents": rows, "obviously_strategyproof": all})
            )
        }
        Format::Csv => {
            let mut s = String::from("agent,two_cycle_monotone,cycle_monotone,witness_weight\n");
            for v in verdicts {
                let w = v
                    .witness
                    .as_ref()
                    .map(|w| rat_string(&w.weight))
                    .unwrap_or_default();
                s.push_str(&format!("{},{},{},{}\n", v.agent, v.two_cmon, v.cmon, w));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for v in verdicts {
                s.push_str(&format!(
                    "agent {}: 2-cycle monotone: {}, cycle monotone: {}\n",
                    v.agent,
                    if v.two_cmon { "yes" } else { "no" },
                    if v.cmon { "yes" } else { "no" }
                ));
                if let Some(w) = &v.witness {
                    s.push_str(&format!(
                        "  negative cycle of weight {} through {} profiles: {}\n",
                        rat_string(&w.weight),
                        w.len(),
                        w.to_json(&v.graph, m)["profiles"]
                    ));
                }
            }
            let all = verdicts.iter().all(|v| v.cmon);
            s.push_str(if all {
                "verdict: obviously strategyproof\n"
            } else {
                "verdict: not obviously strategyproof\n"
            });
            s
        }
    }
}

fn cmd_check(file: &Path, flags: &CommonFlags, minimize: bool) -> Result<u8> {
    let m = load(file, flags.max_profiles)?;
    let agents = agent_indices(&m, &flags.agent)?;
    let verdicts = check_agents(&m, &agents, minimize)?;
    emit(flags, &render_check(&m, &verdicts, flags.format))?;
    Ok(if verdicts.iter().all(|v| v.cmon) { 0 } else { 1 })
}

fn cmd_order(file: &Path, flags: &CommonFlags) -> Result<u8> {
    let m = load(file, flags.max_profiles)?;
    let (out, plans) = order_transform(&m)?;
    for v in 0..m.profile_count() {
        let p = m.index_to_profile(v);
        let a = evaluate_profile(&m, &p)?.1;
        let b = evaluate_profile(&out, &p)?.1;
        if a != b {
            eprintln!("transform changed the allocation on a profile; refusing to write");
            return Ok(1);
        }
    }
    let dest = flags
        .out
        .clone()
        .ok_or_else(|| anyhow!("order needs --out for the transformed mechanism"))?;
    let text = format!("{:#}\n", save_mechanism(&out));
    std::fs::write(&dest, text)
        .with_context(|| format!("cannot write {}", dest.display()))?;
    println!(
        "transformed {} interleaved quer{}; wrote {}",
        plans.len(),
        if plans.len() == 1 { "y" } else { "ies" },
        dest.display()
    );
    Ok(0)
}

fn cmd_classify(file: &Path, flags: &CommonFlags) -> Result<u8> {
    let m = load(file, flags.max_profiles)?;
    let report = classify_three_way(&m)?;
    let mut s = String::new();
    match &report.violation {
        Some(Violation::NonOrderedQuery { node, pair }) => {
            s.push_str(&format!(
                "not three-way greedy (non-ordered query at node {}, types {} vs {}); \
                 run `order` first\n",
                m.node_ids[*node],
                rat_string(&pair.0),
                rat_string(&pair.1)
            ));
        }
        Some(Violation::Pivot { report: r, class }) => {
            s.push_str(&format!(
                "not three-way greedy: {:?} pivot at node {} for agent {} \
                 (b1={}, b2={}, y={}, x={}, Delta={}, Lambda={}, delta={}{})\n",
                class.verdict,
                m.node_ids[r.node],
                m.agents[r.agent],
                rat_string(&r.b1),
                rat_string(&r.b2),
                rat_string(&r.y),
                rat_string(&r.x),
                rat_string(&r.gap_up()),
                rat_string(&r.gap_down()),
                rat_string(&r.inversion()),
                match &class.minimum {
                    Some(w) => format!(", tour minimum {}", rat_string(w)),
                    None => String::new(),
                }
            ));
        }
        None => {
            s.push_str(&format!(
                "three-way greedy: {} ordered queries, {} pivot pairs all extreme\n",
                report.ordered_nodes.len(),
                report.examined_pivots
            ));
        }
    }
    if flags.format == Format::Json {
        s = format!(
            "{}\n",
            json!({
                "three_way_greedy": report.three_way,
                "ordered_queries": report.ordered_nodes.len(),
                "examined_pivots": report.examined_pivots,
                "detail": s.trim_end(),
            })
        );
    }
    emit(flags, &s)?;
    Ok(if report.three_way { 0 } else { 1 })
}

fn cmd_witness(file: &Path, flags: &CommonFlags, minimize: bool) -> Result<u8> {
    let m = load(file, flags.max_profiles)?;
    let agents = agent_indices(&m, &flags.agent)?;
    let verdicts = check_agents(&m, &agents, minimize)?;
    for v in &verdicts {
        if let Some(w) = &v.witness {
            emit(flags, &format!("{}\n", w.to_json(&v.graph, &m)))?;
            return Ok(1);
        }
    }
    emit(flags, "no negative cycle\n")?;
    Ok(0)
}

fn cmd_m4(n: usize, m_jobs: usize, domain: &[String], flags: &CommonFlags) -> Result<u8> {
    let domain: Vec<Rat> =
        domain.iter().map(|s| parse_rat_arg(s)).collect::<Result<_>>()?;
    check_m4_preconditions(n, m_jobs, &domain).map_err(|e| anyhow!("{e}"))?;
    let mech = build_m4(n, m_jobs, &domain)?;
    let agents: Vec<usize> = (0..n).collect();
    let verdicts = check_agents(&mech, &agents, false)?;
    let osp = verdicts.iter().all(|v| v.cmon);
    let ratios = approximation_ratio(&mech, m_jobs)?;

    let mut csv = String::from("profile,mechanism_makespan,optimal_makespan,ratio\n");
    for row in &ratios.rows {
        let profile: Vec<String> = row.profile.iter().map(rat_string).collect();
        csv.push_str(&format!(
            "{},{},{},{}\n",
            profile.join(" "),
            rat_string(&row.mech_makespan),
            rat_string(&row.opt_makespan),
            rat_string(&row.ratio)
        ));
    }
    let summary = json!({
        "n": n,
        "m": m_jobs,
        "domain": domain.iter().map(rat_string).collect::<Vec<_>>(),
        "obviously_strategyproof": osp,
        "worst_ratio": rat_string(&ratios.worst_ratio),
        "worst_profile": ratios.worst_profile.iter().map(rat_string).collect::<Vec<_>>(),
        "profiles": ratios.rows.len(),
    });

    if let Some(dir) = &flags.out {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))?;
        std::fs::write(dir.join("mechanism.json"), format!("{:#}\n", save_mechanism(&mech)))?;
        std::fs::write(dir.join("ratios.csv"), &csv)?;
        std::fs::write(dir.join("summary.json"), format!("{summary:#}\n"))?;
        println!("wrote mechanism.json, ratios.csv, summary.json under {}", dir.display());
    }
    match flags.format {
        Format::Json => println!("{summary}"),
        Format::Csv => print!("{csv}"),
        Format::Text => println!(
            "{} agents, {} jobs: {}, worst ratio {}",
            n,
            m_jobs,
            if osp { "obviously strategyproof" } else { "NOT obviously strategyproof" },
            rat_string(&ratios.worst_ratio)
        ),
    }
    Ok(if osp { 0 } else { 1 })
}

fn cmd_optimal(types: &[String], m_jobs: usize, flags: &CommonFlags) -> Result<u8> {
    let b: Vec<Rat> = types.iter().map(|s| parse_rat_arg(s)).collect::<Result<_>>()?;
    if b.is_empty() {
        return Err(anyhow!("--types must list at least one machine"));
    }
    let (opt, loads) = optimal_makespan(&b, m_jobs).map_err(|e| anyhow!("{e}"))?;
    let line = match flags.format {
        Format::Json => format!(
            "{}\n",
            json!({"optimal_makespan": rat_string(&opt), "loads": loads})
        ),
        _ => format!(
            "optimal makespan {} with loads {:?}\n",
            rat_string(&opt),
            loads
        ),
    };
    emit(flags, &line)?;
    Ok(0)
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check { file, flags, minimize } => cmd_check(&file, &flags, minimize),
        Command::Order { file, flags } => cmd_order(&file, &flags),
        Command::Classify { file, flags } => cmd_classify(&file, &flags),
        Command::Witness { file, flags, minimize } => cmd_witness(&file, &flags, minimize),
        Command::M4 { n, m, domain, flags } => cmd_m4(n, m, &domain, &flags),
        Command::Optimal { types, m, flags } => cmd_optimal(&types, m, &flags),
    }
}
