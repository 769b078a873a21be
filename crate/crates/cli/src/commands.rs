use std::io::Write;
use std::path::Path;

use aesthia_core::datasets::{load_manifest, read_results, results_table, results_to_csv};
use aesthia_core::geometry::{physical_complexity, LayeredForm};
use aesthia_core::imaging::load_image;
use aesthia_core::measures::{measure_selected, Measure, MeasureVector};
use aesthia_core::ranking::{duration_stats, filter_by_rd, read_event_log, replay_onto, write_event_log, RankingTable};
use aesthia_core::simulate::simulate as simulate_survey;
use aesthia_core::stats::{correlation_matrix, Method, MissingPolicy};
use aesthia_service::ServiceConfig;
use anyhow::{anyhow, Context};
use rayon::prelude::*;

use crate::{CorrelateArgs, MeasureArgs, Partial, PhysicalArgs, RankArgs, ServeArgs, SimulateArgs};

pub enum Failure {
    Usage(String),
    Run(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(e.into())
    }
}

pub type Outcome = Result<Option<Partial>, Failure>;

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

pub fn measure(args: MeasureArgs) -> Outcome {
    let cfg = args.flags.config();
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let which = args.measures.clone().unwrap_or_else(|| Measure::ALL.to_vec());
    let manifest = load_manifest(&args.manifest)?;
    if manifest.is_empty() {
        return Err(Failure::Run(anyhow!("manifest {} lists no images", args.manifest.display())));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.threads.unwrap_or(0)).build()?;
    let total = manifest.len();
    let done = std::sync::atomic::AtomicUsize::new(0);

    // One result per manifest entry, in manifest order.
    let results: Vec<Result<(MeasureVector, Vec<String>), String>> = pool.install(|| {
        manifest
            .entries
            .par_iter()
            .map(|entry| {
                let r = load_image(&entry.path).map_err(|e| e.to_string()).map(|img| {
                    let report = measure_selected(&img, &cfg, &which);
                    let failures = report.failures.iter().map(|f| format!("{}: {}", f.measure, f.error)).collect();
                    (report.values, failures)
                });
                let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                eprintln!("[{k}/{total}] {}", entry.id);
                r
            })
            .collect()
    });

    let empty = MeasureVector::default();
    let mut problems = Vec::new();
    let rows = manifest.entries.iter().zip(&results).map(|(entry, r)| {
        let values = match r {
            Ok((v, failures)) => {
                problems.extend(failures.iter().map(|f| format!("{}: {f}", entry.id)));
                v
            }
            Err(e) => {
                problems.push(format!("{}: {e}", entry.id));
                &empty
            }
        };
        (entry.id.as_str(), values, entry.score)
    });
    let table = results_table(&which, rows.collect::<Vec<_>>())?;
    emit(Some(&args.out), &results_to_csv(&table))?;
    eprintln!("wrote {} rows to {}", table.len(), args.out.display());
    if problems.is_empty() {
        Ok(None)
    } else {
        for p in &problems {
            eprintln!("failed {p}");
        }
        Ok(Some(Partial(format!("{} measurement(s) failed", problems.len()))))
    }
}

pub fn correlate(args: CorrelateArgs) -> Outcome {
    let mut table = read_results(&args.results)?;
    let score_idx = table
        .column_index(&args.score)
        .ok_or_else(|| Failure::Run(anyhow!("score column '{}' not found in {}", args.score, args.results.display())))?;
    if let Some(min) = args.min_score {
        table.retain_rows(|_, values| values[score_idx].is_some_and(|s| s >= min));
    }
    if table.len() < 3 {
        return Err(Failure::Run(anyhow!("correlation needs n >= 3 rows, got {}", table.len())));
    }

    let mut columns = Vec::new();
    let mut excluded = Vec::new();
    for name in table.columns() {
        let values: Vec<f64> = table.column(name).unwrap_or_default().into_iter().flatten().collect();
        let constant = values.windows(2).all(|w| w[0] == w[1]);
        if constant {
            excluded.push(name.clone());
        } else {
            columns.push(name.as_str());
        }
    }
    for name in &excluded {
        eprintln!("warning: column {name} is constant or empty; excluded");
    }
    if excluded.contains(&args.score) {
        return Err(Failure::Run(anyhow!("score column '{}' is constant", args.score)));
    }

    let method = if args.spearman { Method::Spearman } else { Method::Pearson };
    let missing = if args.complete_rows { MissingPolicy::CompleteRows } else { MissingPolicy::Pairwise };
    let matrix = correlation_matrix(&table, &columns, Some(&args.score), method, missing)?;
    let report = if args.markdown { matrix.to_markdown() } else { matrix.to_text() };
    emit(None, &report)?;
    if let Some(path) = &args.csv {
        emit(Some(path), &matrix.to_csv())?;
    }
    Ok(None)
}

fn seed_table(specs: &[String]) -> Result<RankingTable, Failure> {
    let mut table = RankingTable::new();
    for spec in specs {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--manifest expects NAME=PATH, got '{spec}'")))?;
        let manifest = load_manifest(path)?;
        for e in &manifest.entries {
            table.insert_image(name, &e.id);
        }
    }
    Ok(table)
}

pub fn rank(args: RankArgs) -> Outcome {
    if let Some(m) = args.max_rd {
        if !(m.is_finite() && m > 0.0) {
            return Err(Failure::Usage(format!("--max-rd must be positive, got {m}")));
        }
    }
    let seeded = seed_table(&args.manifests)?;
    let log = read_event_log(&args.log)?;
    let replay = replay_onto(seeded, &log.events);
    let filtered = match args.max_rd {
        Some(m) => filter_by_rd(&replay.table, m),
        None => filter_by_rd(&replay.table, f64::INFINITY),
    };
    emit(args.out.as_deref(), &filtered.table.to_csv())?;

    // Keep stdout clean for the CSV when no output file is given.
    let mut summary = format!("retained {}\n", filtered.summary());
    summary.push_str(&format!("applied {} of {} events\n", log.events.len() - replay.rejected.len(), log.events.len()));
    if let Some(d) = duration_stats(&log.events) {
        summary.push_str(&format!(
            "decision time: median {:.0} ms, mean {:.0} ms, sd {:.0} ms over {} ({} over 5 min discarded)\n",
            d.median_ms, d.mean_ms, d.sd_ms, d.count, d.discarded
        ));
    }
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    let skipped = log.malformed + replay.rejected.len();
    if skipped > 0 {
        eprintln!("warning: {} malformed line(s), {} rejected event(s)", log.malformed, replay.rejected.len());
    }
    Ok(None)
}

pub fn simulate(args: SimulateArgs) -> Outcome {
    let survey = simulate_survey(args.events, args.items, args.seed).map_err(|e| Failure::Usage(e.to_string()))?;
    emit(args.out.as_deref(), &write_event_log(&survey.events))?;
    if let Some(path) = &args.truth {
        let mut csv = String::from("image_id,aesthetic,complexity\n");
        for (id, s) in survey.items.iter().zip(&survey.log_strength) {
            csv.push_str(&format!("{id},{},{}\n", s[0], s[1]));
        }
        emit(Some(path), &csv)?;
    }
    Ok(None)
}

pub fn physical(args: PhysicalArgs) -> Outcome {
    let mut files: Vec<_> = std::fs::read_dir(&args.forms)
        .with_context(|| format!("reading {}", args.forms.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        log::warn!("no .json forms in {}", args.forms.display());
        eprintln!("warning: no .json forms in {}", args.forms.display());
    }
    let mut csv = String::from("id,Sc\n");
    let mut failed = 0;
    for path in &files {
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let score = std::fs::read_to_string(path)
            .map_err(anyhow::Error::from)
            .and_then(|text| Ok(LayeredForm::from_json(&text)?))
            .and_then(|form| Ok(physical_complexity(&form)?));
        match score {
            Ok(sc) => csv.push_str(&format!("{id},{}\n", aesthia_core::datasets::format_significant(sc, 9))),
            Err(e) => {
                eprintln!("failed {}: {e}", path.display());
                failed += 1;
            }
        }
    }
    emit(args.out.as_deref(), &csv)?;
    Ok((failed > 0).then(|| Partial(format!("{failed} form(s) failed"))))
}

pub fn serve(args: ServeArgs) -> Outcome {
    let mut cfg = ServiceConfig::load(&args.config).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(p) = args.port {
        cfg.port = p;
    }
    if let Some(s) = args.seed {
        cfg.seed = Some(s);
    }
    if args.static_dir.is_some() {
        cfg.static_dir = args.static_dir;
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(aesthia_service::serve(cfg))?;
    Ok(None)
}
