//! Command-line surface: distinguishability checks, monitor planning and
//! execution, sampling, exact verdict measures, Monte-Carlo evaluation,
//! and the runtime-verification operations on classified chains.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use hmcdist::distinguish::{equivalent, profile_constant, refined_constant};
use hmcdist::exact::{format_rat, rat_to_f64};
use hmcdist::forward::parse_word;
use hmcdist::model::{parse_model, sample_run, ClassifiedHmc, Dist, Hmc, Model};
use hmcdist::monitors::{
    expected_alarm_bound, plan_multi, plan_two_sided, run_m1, run_m2, run_m2prime, run_multi,
    AlarmOutcome, Decision,
};
use hmcdist_cli::{estimate_error, exact_verdict_measure, MonitorKind, REPORT_SCHEMA};
use serde::Deserialize;
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "hmcdist", about = "Distinguishability and monitoring of hidden Markov chains")]
struct Cli {
    /// Emit a single machine-readable JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two chains assign equal probability to every word.
    CheckEquiv { model1: PathBuf, model2: PathBuf },
    /// Decide distinguishability and report the profile constant and test set.
    CheckDisting { model1: PathBuf, model2: PathBuf },
    /// Compute the refined (support-pair) constant.
    RefineC {
        model1: PathBuf,
        model2: PathBuf,
        /// Cap on the number of enumerated support pairs × words.
        #[arg(long, default_value_t = 1 << 20)]
        guard: usize,
    },
    /// Derive a phase budget from an error target.
    Plan {
        /// Two models (or more, for the multi-way planner).
        #[arg(required = true, num_args = 2..)]
        models: Vec<PathBuf>,
        /// Two-sided / multi-way error target.
        #[arg(long, conflicts_with = "low")]
        eps: Option<f64>,
        /// One-sided alarm threshold.
        #[arg(long)]
        low: Option<f64>,
    },
    /// Run a monitor over an observation stream.
    Monitor {
        #[arg(long)]
        mode: String,
        /// Whitespace-separated observation symbols; "-" reads stdin.
        #[arg(long)]
        stream: String,
        #[arg(required = true, num_args = 2..)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        low: f64,
        /// One-sided horizon in phases (default: until the stream ends).
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Sample an observation stream from a model.
    Simulate {
        model: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte-Carlo evaluation of a monitor's error rate (JSON config).
    Evaluate { config: PathBuf },
    /// Split a classified chain into its bad- and good-conditioned chains.
    Condition { chmc: PathBuf },
    /// Decide whether a classified chain is monitorable.
    Monitorability { chmc: PathBuf },
    /// Exact verdict measures of the two-sided monitor by enumeration.
    ExactMeasure {
        model1: PathBuf,
        model2: PathBuf,
        #[arg(long)]
        phases: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    });
}

fn load_hmc(path: &Path) -> Result<Hmc> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let model = parse_model(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(model.underlying().clone())
}

fn load_chmc(path: &Path) -> Result<ClassifiedHmc> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    match parse_model(&text).with_context(|| format!("parsing {}", path.display()))? {
        Model::Classified(c) => Ok(c),
        Model::Hmc(_) => bail!("{} is not a classified chain", path.display()),
    }
}

fn load_pair(p1: &Path, p2: &Path) -> Result<(Hmc, Hmc)> {
    let h1 = load_hmc(p1)?;
    let h2 = load_hmc(p2)?;
    if !h1.same_alphabet(&h2) {
        bail!("models have different alphabets");
    }
    Ok((h1, h2))
}

fn read_stream(h: &Hmc, source: &str) -> Result<Vec<usize>> {
    let text = if source == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?
    };
    parse_word(h, &text).ok_or_else(|| anyhow!("stream contains symbols outside the alphabet"))
}

fn emit(json_mode: bool, value: serde_json::Value, text: &str) {
    if json_mode {
        let mut obj = value;
        obj["schema"] = json!(REPORT_SCHEMA);
        println!("{}", serde_json::to_string_pretty(&obj).expect("serializable"));
    } else {
        println!("{text}");
    }
}

#[derive(Deserialize)]
struct EvalConfig {
    monitor: String,
    models: Vec<PathBuf>,
    #[serde(default)]
    eps: Option<f64>,
    #[serde(default)]
    low: Option<f64>,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default)]
    seed: u64,
}

fn default_trials() -> usize {
    2000
}

fn run(cli: Cli) -> Result<i32> {
    let json = cli.json;
    match cli.command {
        Command::CheckEquiv { model1, model2 } => {
            let (h1, h2) = load_pair(&model1, &model2)?;
            let psi1 = Dist::delta(h1.init(), h1.num_states());
            let psi2 = Dist::delta(h2.init(), h2.num_states());
            let eq = equivalent(&h1, &h2, &psi1, &psi2);
            emit(
                json,
                json!({ "equivalent": eq }),
                if eq { "EQUIVALENT" } else { "NOT EQUIVALENT" },
            );
            Ok(if eq { 0 } else { 1 })
        }
        Command::CheckDisting { model1, model2 } => {
            let (h1, h2) = load_pair(&model1, &model2)?;
            let report = profile_constant(&h1, &h2);
            let words: Vec<String> = (0..report.test_set.len())
                .map(|k| report.test_set.render_word(&h1, k))
                .collect();
            let c = format_rat(&report.c);
            let text = if report.distinguishable {
                format!("DISTINGUISHABLE c={c} TEST=[{}]", words.join(","))
            } else {
                "NOT DISTINGUISHABLE".to_string()
            };
            emit(
                json,
                json!({
                    "distinguishable": report.distinguishable,
                    "c": c,
                    "test_set": words,
                }),
                &text,
            );
            Ok(if report.distinguishable { 0 } else { 1 })
        }
        Command::RefineC { model1, model2, guard } => {
            let (h1, h2) = load_pair(&model1, &model2)?;
            let refined = refined_constant(&h1, &h2, guard)?;
            let positive = !refined.numer().eq(&0.into());
            let text = format!("REFINED-C {}", format_rat(&refined));
            emit(json, json!({ "refined_c": format_rat(&refined) }), &text);
            Ok(if positive { 0 } else { 1 })
        }
        Command::Plan { models, eps, low } => {
            let loaded: Vec<Hmc> = models.iter().map(|p| load_hmc(p)).collect::<Result<_>>()?;
            let report = profile_constant(&loaded[0], &loaded[1]);
            if !report.distinguishable {
                emit(json, json!({ "distinguishable": false }), "NOT DISTINGUISHABLE");
                return Ok(1);
            }
            let m = loaded[0].num_states() + loaded[1].num_states();
            match (eps, low) {
                (Some(eps), None) => {
                    let plan = if loaded.len() > 2 {
                        let mut c = report.c.clone();
                        for i in 0..loaded.len() {
                            for j in i + 1..loaded.len() {
                                if (i, j) != (0, 1) {
                                    c = c.min(profile_constant(&loaded[i], &loaded[j]).c);
                                }
                            }
                        }
                        plan_multi(&c, eps, loaded.len(), m)?
                    } else {
                        plan_two_sided(&report.c, eps, m)?
                    };
                    emit(
                        json,
                        json!({
                            "phases": plan.n_phases,
                            "phase_len": plan.phase_len,
                            "total_observations": plan.total_observations(),
                            "c": format_rat(&plan.c),
                        }),
                        &format!("PLAN {}", hmcdist_cli::display_plan(&plan)),
                    );
                    Ok(0)
                }
                (None, Some(low)) => {
                    let bound = expected_alarm_bound(&report.c, low, m)?;
                    emit(
                        json,
                        json!({
                            "low": low,
                            "phase_len": m,
                            "expected_alarm_bound": bound,
                            "c": format_rat(&report.c),
                        }),
                        &format!(
                            "PLAN one-sided low={low} m={m} expected-alarm-bound={bound:.1} obs"
                        ),
                    );
                    Ok(0)
                }
                _ => bail!("pass exactly one of --eps or --low"),
            }
        }
        Command::Monitor { mode, stream, models, eps, low, horizon } => {
            let kind = MonitorKind::parse(&mode)?;
            let loaded: Vec<Hmc> = models.iter().map(|p| load_hmc(p)).collect::<Result<_>>()?;
            if kind != MonitorKind::Multi && loaded.len() != 2 {
                bail!("{mode} monitoring takes exactly two models");
            }
            let symbols = read_stream(&loaded[0], &stream)?;
            let m = loaded[0].num_states() + loaded[1].num_states();
            let report = profile_constant(&loaded[0], &loaded[1]);
            let (text, value) = match kind {
                MonitorKind::TwoSided | MonitorKind::Walk => {
                    if !report.distinguishable {
                        bail!("models are not distinguishable; no plan exists");
                    }
                    let plan = plan_two_sided(&report.c, eps, m)?;
                    let v = match kind {
                        MonitorKind::TwoSided => {
                            run_m2(&loaded[0], &loaded[1], symbols.iter().copied(), &plan)?
                        }
                        _ => run_m2prime(
                            &loaded[0],
                            &loaded[1],
                            &report,
                            symbols.iter().copied(),
                            &plan,
                        )?,
                    };
                    (
                        format!("DECISION {} AFTER {} OBS", v.decision.code(), v.observations),
                        json!({ "decision": v.decision.code(), "observations": v.observations }),
                    )
                }
                MonitorKind::OneSided => {
                    let out =
                        run_m1(&loaded[0], &loaded[1], symbols.iter().copied(), low, horizon)?;
                    match out {
                        AlarmOutcome::Alarm(n) => (
                            format!("ALARM AFTER {n} OBS"),
                            json!({ "alarm": true, "observations": n }),
                        ),
                        AlarmOutcome::NoAlarm(n) => (
                            format!("NO-ALARM AFTER {n} OBS"),
                            json!({ "alarm": false, "observations": n }),
                        ),
                        AlarmOutcome::Impossible(n) => (
                            format!("IMPOSSIBLE AFTER {n} OBS"),
                            json!({ "alarm": false, "impossible": true, "observations": n }),
                        ),
                    }
                }
                MonitorKind::Multi => {
                    let mut c = report.c.clone();
                    for i in 0..loaded.len() {
                        for j in i + 1..loaded.len() {
                            if (i, j) != (0, 1) {
                                let r = profile_constant(&loaded[i], &loaded[j]);
                                c = c.min(r.c);
                            }
                        }
                    }
                    let plan = plan_multi(&c, eps, loaded.len(), m)?;
                    let v = run_multi(&loaded, symbols.iter().copied(), &plan)?;
                    (
                        format!("DECISION {} AFTER {} OBS", v.decision.code(), v.observations),
                        json!({ "decision": v.decision.code(), "observations": v.observations }),
                    )
                }
            };
            emit(json, value, &text);
            Ok(0)
        }
        Command::Simulate { model, len, seed } => {
            let h = load_hmc(&model)?;
            let run = sample_run(&h, len, seed);
            let rendered = run.render(&h);
            emit(
                json,
                json!({ "seed": seed, "length": len, "observations": rendered }),
                &rendered,
            );
            Ok(0)
        }
        Command::Evaluate { config } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let cfg: EvalConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", config.display()))?;
            let kind = MonitorKind::parse(&cfg.monitor)?;
            let loaded: Vec<Hmc> =
                cfg.models.iter().map(|p| load_hmc(p)).collect::<Result<_>>()?;
            let target = match kind {
                MonitorKind::OneSided => cfg.low.ok_or_else(|| anyhow!("config needs \"low\""))?,
                _ => cfg.eps.ok_or_else(|| anyhow!("config needs \"eps\""))?,
            };
            let report = estimate_error(kind, &loaded, target, cfg.trials, cfg.seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                println!(
                    "EVALUATE {} trials={} seed={} bound={:.6} slack={:.6}",
                    report.monitor, report.trials_per_source, report.seed, report.bound,
                    report.slack
                );
                for s in &report.sources {
                    println!(
                        "  source {}: errors {}/{} rate={:.4} mean-obs={:.1}",
                        s.source, s.errors, s.trials, s.error_rate, s.mean_observations
                    );
                }
                if let (Some(r), Some(b)) = (report.mean_response, report.response_bound) {
                    println!("  mean-response {r:.1} obs (bound {b:.1})");
                }
                println!("  {}", if report.pass { "PASS" } else { "FAIL" });
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Condition { chmc } => {
            let c = load_chmc(&chmc)?;
            let (h_bad, h_good) = hmcdist::rv::condition(&c);
            emit(
                json,
                json!({ "bad": h_bad.to_text(), "good": h_good.to_text() }),
                &format!("# conditioned on bad\n{}\n# conditioned on good\n{}",
                    h_bad.to_text(), h_good.to_text()),
            );
            Ok(0)
        }
        Command::Monitorability { chmc } => {
            let c = load_chmc(&chmc)?;
            let (monitorable, report) = hmcdist::rv::decide_monitorable(&c);
            let cval = format_rat(&report.c);
            let text = if monitorable {
                format!("MONITORABLE c={cval}")
            } else {
                "NOT MONITORABLE".to_string()
            };
            emit(json, json!({ "monitorable": monitorable, "c": cval }), &text);
            Ok(if monitorable { 0 } else { 1 })
        }
        Command::ExactMeasure { model1, model2, phases } => {
            let (h1, h2) = load_pair(&model1, &model2)?;
            let vm = exact_verdict_measure(&h1, &h2, phases)?;
            let mut lines = vec![format!(
                "EXACT-MEASURE phases={} word-len={}",
                vm.n_phases, vm.word_len
            )];
            let mut obj = serde_json::Map::new();
            for (name, verdict) in [
                ("output1", Decision::Output1),
                ("output2", Decision::Output2),
                ("output3", Decision::Output3),
            ] {
                for source in [1usize, 2] {
                    let p = vm.measure(source, verdict);
                    lines.push(format!(
                        "  P{source}({name}) = {} ≈ {:.6}",
                        format_rat(&p),
                        rat_to_f64(&p)
                    ));
                    obj.insert(format!("p{source}_{name}"), json!(format_rat(&p)));
                }
            }
            emit(json, serde_json::Value::Object(obj), &lines.join("\n"));
            Ok(0)
        }
    }
}
