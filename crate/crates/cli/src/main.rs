//! Command-line pipeline: extract -> featurize -> split -> train ->
//! evaluate -> importances -> analyze -> predict. Every stage reads and
//! writes plain TSV (plus JSON for models and reports) so each intermediate
//! artifact can be inspected and diffed.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use notional_core::analysis::{self, BinVariable};
use notional_core::conll::GenreMap;
use notional_core::ensemble::{
    evaluate, fit, grid_search, importances, predict, stratified_split, Dataset, EvalReport,
    Forest, GridSpec,
};
use notional_core::extract::{parse_pairs_tsv, Label};
use notional_core::features::FeatureTable;
use notional_core::lexicon::{ExclusionList, LexiconSet};
use notional_core::pipeline;
use notional_core::syntax::HeadRuleTable;

#[derive(Parser)]
#[command(name = "notional", version, about = "Notional agreement pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Output directory for pipeline artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Random seed recorded in artifact headers and used wherever sampling
    /// happens.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Lexicon directory overriding the bundled defaults
    /// (falls back to $NOTIONAL_LEXICON_DIR).
    #[arg(long)]
    lexicons: Option<PathBuf>,
    /// Suppress the timestamped header line in TSV outputs.
    #[arg(long)]
    no_header_meta: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Extract antecedent-anaphor pairs from a corpus directory.
    Extract {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        corpus: PathBuf,
        /// Genre map file (prefix<TAB>genre), bundled defaults otherwise.
        #[arg(long)]
        genre_map: Option<PathBuf>,
        /// Exclusion list (doc_id<TAB>sentence:start-end).
        #[arg(long)]
        exclusions: Option<PathBuf>,
    },
    /// Compute feature vectors for extracted pairs.
    Featurize {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        genre_map: Option<PathBuf>,
        /// Pairs file (defaults to <out>/pairs.tsv).
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Stratified train/test split of a features file.
    Split {
        #[command(flatten)]
        common: CommonOpts,
        /// Features file (defaults to <out>/features.tsv).
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long, default_value_t = 0.10)]
        test_frac: f64,
    },
    /// Grid search, cross-validate, and fit the final model.
    Train {
        #[command(flatten)]
        common: CommonOpts,
        /// Training features (defaults to <out>/train.tsv).
        #[arg(long)]
        features: Option<PathBuf>,
        /// Grid specification JSON; the built-in grid otherwise.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        folds: usize,
    },
    /// Evaluate a model on held-out features.
    Evaluate {
        #[command(flatten)]
        common: CommonOpts,
        /// Model file (defaults to <out>/model.json).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Test features (defaults to <out>/test.tsv).
        #[arg(long)]
        test: Option<PathBuf>,
        /// Full-corpus features for the corpus-level majority baseline.
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Gini importances of a fitted model.
    Importances {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Report encoded one-hot columns instead of grouped features.
        #[arg(long)]
        encoded: bool,
    },
    /// Predict labels for a features file.
    Predict {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Descriptive tables and plot data.
    Analyze {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long, value_enum)]
        table: AnalyzeTable,
        /// Bins for the distance/position profiles.
        #[arg(long, default_value_t = 10)]
        bins: usize,
        /// Minimum row total for the POS table.
        #[arg(long, default_value_t = 25)]
        min_rows: u64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out_file: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AnalyzeTable {
    Genre,
    Pos,
    Entity,
    Deprel,
    Distance,
    Position,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Extract {
            common,
            corpus,
            genre_map,
            exclusions,
        } => cmd_extract(
            &common,
            &corpus,
            genre_map.as_deref(),
            exclusions.as_deref(),
        ),
        Command::Featurize {
            common,
            corpus,
            genre_map,
            pairs,
        } => cmd_featurize(&common, &corpus, genre_map.as_deref(), pairs.as_deref()),
        Command::Split {
            common,
            features,
            test_frac,
        } => cmd_split(&common, features.as_deref(), test_frac),
        Command::Train {
            common,
            features,
            grid,
            folds,
        } => cmd_train(&common, features.as_deref(), grid.as_deref(), folds),
        Command::Evaluate {
            common,
            model,
            test,
            features,
        } => cmd_evaluate(
            &common,
            model.as_deref(),
            test.as_deref(),
            features.as_deref(),
        ),
        Command::Importances {
            common,
            model,
            encoded,
        } => cmd_importances(&common, model.as_deref(), encoded),
        Command::Predict {
            common,
            model,
            features,
        } => cmd_predict(&common, model.as_deref(), features.as_deref()),
        Command::Analyze {
            common,
            features,
            table,
            bins,
            min_rows,
            out_file,
        } => cmd_analyze(
            &common,
            features.as_deref(),
            table,
            bins,
            min_rows,
            out_file.as_deref(),
        ),
    }
}

fn header_meta(common: &CommonOpts) -> String {
    if common.no_header_meta {
        String::new()
    } else {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!(
            "# notional {} seed={} generated={now}\n",
            env!("CARGO_PKG_VERSION"),
            common.seed
        )
    }
}

fn write_artifact(common: &CommonOpts, name: &Path, body: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&common.out)
        .with_context(|| format!("creating {}", common.out.display()))?;
    let path = common.out.join(name);
    let mut text = header_meta(common);
    text.push_str(body);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn lexicon_dir(common: &CommonOpts) -> Option<PathBuf> {
    common
        .lexicons
        .clone()
        .or_else(|| std::env::var_os("NOTIONAL_LEXICON_DIR").map(PathBuf::from))
}

fn load_lexicons(common: &CommonOpts) -> Result<LexiconSet> {
    Ok(match lexicon_dir(common) {
        Some(d) => LexiconSet::from_dir(&d)?,
        None => LexiconSet::default_set(),
    })
}

/// Head rules from `head_rules.tsv` in the lexicon directory when present,
/// bundled defaults otherwise.
fn load_head_rules(common: &CommonOpts) -> Result<HeadRuleTable> {
    if let Some(dir) = lexicon_dir(common) {
        let p = dir.join("head_rules.tsv");
        if p.is_file() {
            return HeadRuleTable::parse(&read_to_string(&p)?).map_err(Into::into);
        }
    }
    Ok(HeadRuleTable::default_table())
}

fn load_genre_map(path: Option<&Path>) -> Result<GenreMap> {
    Ok(match path {
        Some(p) => GenreMap::parse(&std::fs::read_to_string(p)?)?,
        None => GenreMap::default_map(),
    })
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_extract(
    common: &CommonOpts,
    corpus: &Path,
    genre_map: Option<&Path>,
    exclusions: Option<&Path>,
) -> Result<()> {
    if !corpus.is_dir() {
        bail!("corpus directory {} is not readable", corpus.display());
    }
    let mut lex = load_lexicons(common)?;
    if let Some(p) = exclusions {
        lex.exclusions = ExclusionList::parse(&read_to_string(p)?)?;
    }
    let map = load_genre_map(genre_map)?;
    let rules = load_head_rules(common)?;
    let docs = pipeline::load_annotated_corpus(corpus, &map, &rules)?;
    let pairs = pipeline::extract_all(&docs, &lex)?;
    if pairs.is_empty() {
        eprintln!("warning: no pairs extracted");
    }
    let path = write_artifact(common, Path::new("pairs.tsv"), &pipeline::pairs_tsv(&pairs))?;
    let notional = pairs.iter().filter(|p| p.label == Label::Notional).count();
    let rate = if pairs.is_empty() {
        0.0
    } else {
        100.0 * notional as f64 / pairs.len() as f64
    };
    println!(
        "extracted {} pairs ({notional} notional, {rate:.1}%) from {} documents -> {}",
        pairs.len(),
        docs.len(),
        path.display()
    );
    Ok(())
}

fn cmd_featurize(
    common: &CommonOpts,
    corpus: &Path,
    genre_map: Option<&Path>,
    pairs: Option<&Path>,
) -> Result<()> {
    let lex = load_lexicons(common)?;
    let map = load_genre_map(genre_map)?;
    let rules = load_head_rules(common)?;
    let docs = pipeline::load_annotated_corpus(corpus, &map, &rules)?;
    let pairs_path = pairs
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("pairs.tsv"));
    let records = parse_pairs_tsv(&read_to_string(&pairs_path)?, &pairs_path.to_string_lossy())?;
    let rows = pipeline::featurize_all(&records, &docs, &lex, &rules)?;
    let path = write_artifact(
        common,
        Path::new("features.tsv"),
        &pipeline::features_tsv(&rows),
    )?;
    println!("featurized {} pairs -> {}", rows.len(), path.display());
    Ok(())
}

fn cmd_split(common: &CommonOpts, features: Option<&Path>, test_frac: f64) -> Result<()> {
    let features_path = features
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("features.tsv"));
    let text = read_to_string(&features_path)?;
    let table = FeatureTable::parse(&text, &features_path.to_string_lossy())?;
    let genre_col = table.column("genre")?;
    let keys: Vec<(String, Label)> = table
        .rows
        .iter()
        .zip(&table.labels)
        .map(|(r, l)| (r[genre_col].clone(), *l))
        .collect();
    let (train, test) = stratified_split(&keys, test_frac, common.seed);
    let emit = |indices: &[usize]| {
        let mut out = table.feature_names.join("\t");
        out.push_str("\tlabel\n");
        for &i in indices {
            out.push_str(&table.rows[i].join("\t"));
            out.push('\t');
            out.push_str(table.labels[i].as_str());
            out.push('\n');
        }
        out
    };
    let train_path = write_artifact(common, Path::new("train.tsv"), &emit(&train))?;
    let test_path = write_artifact(common, Path::new("test.tsv"), &emit(&test))?;
    println!(
        "split {} rows -> {} train ({}), {} test ({})",
        table.rows.len(),
        train.len(),
        train_path.display(),
        test.len(),
        test_path.display()
    );
    Ok(())
}

fn fmt_depth(d: Option<usize>) -> String {
    d.map(|v| v.to_string())
        .unwrap_or_else(|| "unlimited".into())
}

fn cmd_train(
    common: &CommonOpts,
    features: Option<&Path>,
    grid: Option<&Path>,
    folds: usize,
) -> Result<()> {
    let features_path = features
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("train.tsv"));
    let table = FeatureTable::parse(
        &read_to_string(&features_path)?,
        &features_path.to_string_lossy(),
    )?;
    let data = Dataset::from_table(&table)?;
    let spec: GridSpec = match grid {
        Some(p) => serde_json::from_str(&read_to_string(p)?)
            .with_context(|| format!("parsing grid {}", p.display()))?,
        None => GridSpec::default(),
    };
    let (best, cells) = grid_search(&data, &spec, folds, common.seed)?;
    let mut cv = String::from("n_trees\tmax_depth\tk_rule\t");
    cv.push_str(
        &(1..=folds)
            .map(|i| format!("fold_{i}"))
            .collect::<Vec<_>>()
            .join("\t"),
    );
    cv.push_str("\tmean_accuracy\n");
    for cell in &cells {
        cv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            cell.params.n_trees,
            fmt_depth(cell.params.max_depth),
            cell.params.k_rule.as_str(),
            cell.fold_accuracies
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join("\t"),
            cell.mean_accuracy
        ));
    }
    let cv_path = write_artifact(common, Path::new("cv_table.tsv"), &cv)?;
    let forest = fit(&data, &best, common.seed)?;
    std::fs::create_dir_all(&common.out)?;
    let model_path = common.out.join("model.json");
    std::fs::write(&model_path, forest.to_json()?)?;
    println!(
        "best: {} trees, depth {}, k {} -> {} (cv table {})",
        best.n_trees,
        fmt_depth(best.max_depth),
        best.k_rule.as_str(),
        model_path.display(),
        cv_path.display()
    );
    Ok(())
}

fn load_model(common: &CommonOpts, model: Option<&Path>) -> Result<Forest> {
    let model_path = model
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("model.json"));
    Forest::from_json(&read_to_string(&model_path)?).map_err(Into::into)
}

fn eval_text(report: &EvalReport) -> String {
    let mut s = String::new();
    let total: u64 = report.confusion.iter().flatten().sum();
    let diag = report.confusion[0][0] + report.confusion[1][1];
    s.push_str(&format!(
        "accuracy           {:.4}  ({diag}/{total})\n",
        report.accuracy
    ));
    s.push_str(&format!(
        "majority baseline  {:.4}  (evaluated set)\n",
        report.majority_baseline
    ));
    if let Some(b) = report.corpus_baseline {
        s.push_str(&format!("corpus baseline    {b:.4}  (full extraction)\n"));
    }
    s.push_str("confusion (rows actual, cols predicted; strict, notional):\n");
    for (name, row) in ["strict", "notional"].iter().zip(report.confusion.iter()) {
        s.push_str(&format!("  {name:<9} {:>6} {:>6}\n", row[0], row[1]));
    }
    s.push_str(&format!(
        "precision  strict {:.4}  notional {:.4}\n",
        report.precision[0], report.precision[1]
    ));
    s.push_str(&format!(
        "recall     strict {:.4}  notional {:.4}\n",
        report.recall[0], report.recall[1]
    ));
    s
}

fn cmd_evaluate(
    common: &CommonOpts,
    model: Option<&Path>,
    test: Option<&Path>,
    features: Option<&Path>,
) -> Result<()> {
    let forest = load_model(common, model)?;
    let test_path = test
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("test.tsv"));
    let table = FeatureTable::parse(&read_to_string(&test_path)?, &test_path.to_string_lossy())?;
    let data = Dataset::from_table_with_encoding(&table, forest.encoding.clone())?;
    let mut report = evaluate(&forest, &data)?;
    if let Some(full) = features {
        let full_table = FeatureTable::parse(&read_to_string(full)?, &full.to_string_lossy())?;
        let strict = full_table
            .labels
            .iter()
            .filter(|l| **l == Label::Strict)
            .count() as u64;
        let notional = full_table.labels.len() as u64 - strict;
        report = report.with_corpus_baseline(strict.max(notional), strict + notional);
    }
    std::fs::create_dir_all(&common.out)?;
    let json_path = common.out.join("eval.json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&report)?)?;
    print!("{}", eval_text(&report));
    println!("report -> {}", json_path.display());
    Ok(())
}

fn cmd_importances(common: &CommonOpts, model: Option<&Path>, encoded: bool) -> Result<()> {
    let forest = load_model(common, model)?;
    let report = importances(&forest);
    if report.no_splits {
        eprintln!("warning: forest contains no splits; importances are all zero");
    }
    let entries = if encoded {
        &report.encoded
    } else {
        &report.grouped
    };
    let mut out = String::from("feature\tmean_importance\tstd\n");
    for e in entries {
        out.push_str(&format!("{}\t{}\t{}\n", e.name, e.mean, e.std));
    }
    let path = write_artifact(common, Path::new("importances.tsv"), &out)?;
    println!("importances -> {}", path.display());
    Ok(())
}

fn cmd_predict(common: &CommonOpts, model: Option<&Path>, features: Option<&Path>) -> Result<()> {
    let forest = load_model(common, model)?;
    let features_path = features
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("features.tsv"));
    let table = FeatureTable::parse(
        &read_to_string(&features_path)?,
        &features_path.to_string_lossy(),
    )?;
    let data = Dataset::from_table_with_encoding(&table, forest.encoding.clone())?;
    let mut out = String::from("row\tactual\tpredicted\tp_notional\n");
    for (i, row) in data.rows.iter().enumerate() {
        let (label, p) = predict(&forest, row)?;
        out.push_str(&format!("{i}\t{}\t{label}\t{p}\n", data.labels[i]));
    }
    let path = write_artifact(common, Path::new("predictions.tsv"), &out)?;
    println!("predicted {} rows -> {}", data.rows.len(), path.display());
    Ok(())
}

fn cmd_analyze(
    common: &CommonOpts,
    features: Option<&Path>,
    table: AnalyzeTable,
    bins: usize,
    min_rows: u64,
    out_file: Option<&Path>,
) -> Result<()> {
    let features_path = features
        .map(Path::to_path_buf)
        .unwrap_or_else(|| common.out.join("features.tsv"));
    let ftable = FeatureTable::parse(
        &read_to_string(&features_path)?,
        &features_path.to_string_lossy(),
    )?;
    let body = match table {
        AnalyzeTable::Genre => contingency_tsv(&analysis::genre_table(&ftable)?),
        AnalyzeTable::Pos => contingency_tsv(
            &analysis::contingency(&ftable, "n_parent_pos")?
                .filter_rare(min_rows)
                .sorted_by_rate(),
        ),
        AnalyzeTable::Entity => residual_tsv(&analysis::residuals(&analysis::contingency(
            &ftable, "t_entity",
        )?)?),
        AnalyzeTable::Deprel => {
            let mut out = String::from("slot\tcategory\tlabel\tobserved\texpected\tresidual\n");
            for (slot, feature) in [("anaphor", "n_func"), ("antecedent", "t_func")] {
                let r = analysis::residuals(&analysis::contingency(&ftable, feature)?)?;
                for c in &r.cells {
                    out.push_str(&format!(
                        "{slot}\t{}\t{}\t{}\t{:.4}\t{:.4}\n",
                        c.category, c.label, c.observed, c.expected, c.residual
                    ));
                }
            }
            out
        }
        AnalyzeTable::Distance => profile_tsv(&analysis::bin_profile(
            &ftable,
            BinVariable::LogDistance,
            bins,
        )?),
        AnalyzeTable::Position => profile_tsv(&analysis::bin_profile(
            &ftable,
            BinVariable::AnaphorPositionPct,
            bins,
        )?),
    };
    match out_file {
        Some(p) => {
            std::fs::write(p, body)?;
            println!("table -> {}", p.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn contingency_tsv(t: &analysis::ContingencyTable) -> String {
    let mut out = String::from("category\tnotional\tstrict\tpct_notional\n");
    for r in &t.rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.2}\n",
            r.category,
            r.notional,
            r.strict,
            r.pct_notional()
        ));
    }
    out
}

fn residual_tsv(t: &analysis::ResidualTable) -> String {
    let mut out = String::from("category\tlabel\tobserved\texpected\tresidual\n");
    for c in &t.cells {
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.4}\t{:.4}\n",
            c.category, c.label, c.observed, c.expected, c.residual
        ));
    }
    out.push_str(&format!("# chi_square\t{:.4}\n", t.chi_square));
    out
}

fn profile_tsv(p: &analysis::BinProfile) -> String {
    let mut out = format!("# variable {}\n", p.variable);
    out.push_str("bin\tlow\thigh\tcount\tnotional_fraction\tmass_width\n");
    for (i, b) in p.bins.iter().enumerate() {
        out.push_str(&format!(
            "{i}\t{:.6}\t{:.6}\t{}\t{:.6}\t{:.6}\n",
            b.low, b.high, b.count, b.notional_fraction, b.mass_width
        ));
    }
    out
}
