use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flashext::assembly::{self, nu2_factorial};
use flashext::charts::{self, RenderSpec};
use flashext::emod::{self, BgKind, EModule, Variant};
use flashext::ext_classical::{closed_form_classical, compare_charts, ext_flashes};
use flashext::ext_equivariant::{closed_form_k_gt_m_read, ext_m2_m2, rho_bockstein_e0, TriChart, TriangleReading};
use flashext::les_engine::{check_chart, cross_derivation, induct_ext, CollapseReport};
use flashext::margolis::margolis_homology;
use flashext::steenrod::{self, QuotientBasisSpec};
use flashext::{Degree, Window};

/// Ext over E(1) for lightning flash modules, classical and C2-equivariant.
#[derive(Parser)]
#[command(name = "flashext", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct WindowArgs {
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    stem_min: i32,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    stem_max: i32,
    #[arg(long, default_value_t = 8)]
    f_max: i32,
    #[arg(long, default_value_t = -16, allow_hyphen_values = true)]
    weight_min: i32,
    #[arg(long, default_value_t = 16, allow_hyphen_values = true)]
    weight_max: i32,
}

impl WindowArgs {
    fn window(&self) -> Result<Window> {
        let w = Window {
            stem_min: self.stem_min,
            stem_max: self.stem_max,
            filtration_max: self.f_max,
            weight_min: self.weight_min,
            weight_max: self.weight_max,
        };
        if !w.is_nonempty() {
            bail!(Usage(format!("empty window {w:?}")));
        }
        Ok(w)
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output file; relative paths resolve against FLASHEXT_OUT_DIR when it is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "FLASHEXT_OUT_DIR", hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

impl OutArgs {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            None => match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            },
            Some(p) => {
                let path = match &self.out_dir {
                    Some(d) if p.is_relative() => d.join(p),
                    _ => p.clone(),
                };
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
                }
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartFormat {
    Tsv,
    Svg,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Stated,
    DegreeForced,
}

impl From<Reading> for TriangleReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Stated => TriangleReading::Stated,
            Reading::DegreeForced => TriangleReading::DegreeForced,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleKind {
    Flash,
    Free,
    Bg,
    Mod2Bg,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Classical,
    Equivariant,
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long, value_enum, default_value = "flash")]
    kind: ModuleKind,
    /// Index of the lightning flash, or the weight cutoff for Brown–Gitler modules.
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, value_enum, default_value = "equivariant")]
    variant: VariantArg,
    /// Read the module from JSON instead of building it.
    #[arg(long, conflicts_with_all = ["kind", "k"])]
    input: Option<PathBuf>,
}

impl ModuleArgs {
    fn build(&self) -> Result<EModule> {
        if let Some(p) = &self.input {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            return Ok(EModule::from_json(&text)?);
        }
        let v = match self.variant {
            VariantArg::Classical => Variant::Classical,
            VariantArg::Equivariant => Variant::Equivariant,
        };
        Ok(match self.kind {
            ModuleKind::Flash => emod::lightning_flash(self.k as usize, v),
            ModuleKind::Free => emod::free_module(1, v, Degree::ZERO),
            ModuleKind::Bg => emod::bg_homology_module(BgKind::Integral, self.k, v),
            ModuleKind::Mod2Bg => emod::bg_homology_module(BgKind::Mod2, self.k, v),
        })
    }
}

#[derive(Args)]
struct ChartArgs {
    #[arg(long, value_enum, default_value = "tsv")]
    chart: ChartFormat,
    /// Draw a single panel instead of Part A and Part B.
    #[arg(long)]
    no_split: bool,
    #[arg(long)]
    show_weights: bool,
}

impl ChartArgs {
    fn render(&self, c: &TriChart) -> String {
        match self.chart {
            ChartFormat::Tsv => charts::emit_tsv(c),
            ChartFormat::Json => charts::emit_json(c),
            ChartFormat::Svg => {
                let mut spec = RenderSpec::new(c.window);
                spec.split_parts = !self.no_split;
                spec.show_weights = self.show_weights;
                charts::emit_svg(c, &spec)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the monomial basis of A//E(n)_* up to a weight.
    Basis {
        #[arg(long, allow_hyphen_values = true)]
        height: i32,
        #[arg(long)]
        max_weight: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a module and print it as JSON (or round-trip one given with --input).
    Module {
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Margolis homology of a module for Q0 and Q1.
    Margolis {
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Split off free summands and identify the reduced part with a lightning flash.
    Split {
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classical Ext(L(k), L(m)) from a minimal resolution.
    ExtClassical {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Compare with the closed form and exit 1 on disagreement.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The closed form of the equivariant Ext(L(k), L(m)).
    ExtEq {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "stated")]
        reading: Reading,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ext over E(0) of M2 by the rho-Bockstein spectral sequence.
    BocksteinE0 {
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Equivariant Ext(L(k), L(m)) by induction on k through long exact sequences.
    Induct {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cross-derive every chart against the closed forms and run the collapse checks.
    Verify {
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[arg(long, value_enum, default_value = "stated")]
        reading: Reading,
        #[arg(long, default_value_t = -16, allow_hyphen_values = true)]
        stem_min: i32,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        stem_max: i32,
        #[arg(long, default_value_t = 10)]
        f_max: i32,
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        weight_min: i32,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        weight_max: i32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Summand decomposition of ku ∧ ku-type cooperations in Brown–Gitler weight 2k.
    Cooperations {
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The Adams E1-page in stems up to the window, grouped by Adams covers.
    E1Page {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: E1Format,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Re-render a chart saved as TSV or JSON.
    Chart {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ext(M2, M2) over E(0) or E(1).
    M2 {
        #[arg(long, default_value_t = 1)]
        height: usize,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum E1Format {
    Json,
    Tsv,
}

/// Bad input reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn series_text(s: &emod::PoincareSeries) -> String {
    let parts: Vec<String> = s.iter().map(|(d, n)| format!("{n}·{d}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Basis { height, max_weight, out } => {
            if height < -1 {
                bail!(Usage("height must be at least -1".into()));
            }
            let mut text = String::new();
            for m in steenrod::enumerate_basis(QuotientBasisSpec::new(height), max_weight) {
                writeln!(text, "{m}\t{}\t{}", steenrod::degree(&m), steenrod::weight(&m))?;
            }
            out.write(&text)?;
        }
        Command::Module { module, out } => {
            let m = module.build()?;
            let json = m.to_json();
            if module.input.is_some() && EModule::from_json(&json)? != m {
                eprintln!("module does not survive a JSON round trip");
                return Ok(Status::Failed);
            }
            out.write(&format!("{json}\n"))?;
        }
        Command::Margolis { module, out } => {
            let m = module.build()?;
            let mut text = String::new();
            for i in 0..2 {
                let h = margolis_homology(&m, i);
                writeln!(text, "Q{i}\t{}", h.total())?;
                for (d, reps) in &h.representative_names {
                    writeln!(text, "  {d}\t{}", reps.join(", "))?;
                }
            }
            out.write(&text)?;
        }
        Command::Split { module, out } => {
            let m = module.build()?;
            let s = emod::split_free_summands(&m)?;
            let mut text = String::new();
            writeln!(text, "rank\t{}", m.rank())?;
            writeln!(text, "reduced\t{}", s.reduced.rank())?;
            writeln!(text, "free tops\t{}", series_text(&s.free_part))?;
            match assembly::flash_split(&m) {
                Ok(f) => writeln!(text, "reduced part\tL({})", f.index)?,
                Err(e) => writeln!(text, "reduced part\tnot a lightning flash ({e})")?,
            }
            if let (ModuleKind::Bg, None) = (module.kind, &module.input) {
                writeln!(text, "nu2(k!)\t{}", nu2_factorial(module.k))?;
            }
            out.write(&text)?;
        }
        Command::ExtClassical { k, m, check, window, out } => {
            let w = window.window()?;
            let c = ext_flashes(k, m, w.stem_min, w.stem_max, w.filtration_max as usize)?;
            out.write(&charts::emit_bigraded_tsv(&c))?;
            if check {
                let closed = closed_form_classical(k, m, w.stem_min, w.stem_max, w.filtration_max);
                if let Err(e) = compare_charts(&c, &closed) {
                    eprintln!("closed form disagrees: {e}");
                    return Ok(Status::Failed);
                }
            }
        }
        Command::ExtEq { k, m, reading, window, chart, out } => {
            let w = window.window()?;
            let c = if k > m {
                closed_form_k_gt_m_read(k, m, &w, reading.into())
            } else {
                flashext::ext_equivariant::closed_form_equivariant(k, m, &w)
            };
            out.write(&chart.render(&c))?;
        }
        Command::BocksteinE0 { window, chart, out } => {
            let c = rho_bockstein_e0(&window.window()?)?;
            out.write(&chart.render(&c))?;
        }
        Command::Induct { k, m, window, chart, out } => {
            let c = induct_ext(k, m, &window.window()?)?;
            out.write(&chart.render(&c))?;
        }
        Command::M2 { height, window, chart, out } => {
            let c = ext_m2_m2(height, &window.window()?).map_err(|e| Usage(e.to_string()))?;
            out.write(&chart.render(&c))?;
        }
        Command::Verify {
            k_max,
            m_max,
            reading,
            stem_min,
            stem_max,
            f_max,
            weight_min,
            weight_max,
            out,
        } => {
            let w = WindowArgs {
                stem_min,
                stem_max,
                f_max,
                weight_min,
                weight_max,
            }
            .window()?;
            let checks = cross_derivation(k_max, m_max, &w)?;
            let mut report = CollapseReport::default();
            let mut text = String::new();
            let mut ok = true;
            for c in &checks {
                let closed = match (reading, &c.forced_reading) {
                    (Reading::DegreeForced, Some(f)) => f.clone(),
                    _ => c.closed_form.clone(),
                };
                let pass = closed.is_none() && c.underlying.is_none();
                ok &= pass;
                let verdict = if pass { "PASS" } else { "FAIL" };
                let detail = [closed.map(|e| format!("closed form: {e}")), c.underlying.clone().map(|e| format!("underlying: {e}"))]
                    .into_iter()
                    .flatten()
                    .collect::<Vec<_>>()
                    .join("; ");
                writeln!(text, "{verdict}\tcross-derivation\t({},{})\t{} classes\t{detail}", c.k, c.m, c.classes)?;
                check_chart(&c.chart, c.k, c.m, &mut report);
            }
            for e in &report.entries {
                ok &= e.pass;
                let loc = e.location.map(|(s, f, w)| format!("({s},{f},{w})")).unwrap_or_default();
                writeln!(
                    text,
                    "{}\t{}\t({},{})\t{loc}\texpected {}\tfound {}",
                    if e.pass { "PASS" } else { "FAIL" },
                    e.assertion,
                    e.chart.0,
                    e.chart.1,
                    e.expected,
                    e.found
                )?;
            }
            out.write(&text)?;
            if !ok {
                return Ok(Status::Failed);
            }
        }
        Command::Cooperations { k, out } => {
            let d = assembly::cooperations(k)?;
            out.write(&format!("{}\n", serde_json::to_string_pretty(&d)?))?;
        }
        Command::E1Page { n_max, format, window, out } => {
            let p = assembly::e1_page(n_max, &window.window()?)?;
            match format {
                E1Format::Json => out.write(&format!("{}\n", p.to_json()))?,
                E1Format::Tsv => out.write(&p.stem_summary_tsv())?,
            }
            if p.totals_by_covers() != p.totals_by_cooperations()? {
                eprintln!("cover and cooperation totals disagree");
                return Ok(Status::Failed);
            }
        }
        Command::Chart { input, chart, out } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let c = if text.trim_start().starts_with('{') {
                charts::parse_json(&text)?
            } else {
                charts::parse_tsv(&text)?
            };
            out.write(&chart.render(&c))?;
        }
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
