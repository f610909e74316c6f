use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pairaug::degrade::DegradeSpec;
use pairaug::metrics::ChannelMode;
use pairaug::pipeline::{self, RunConfig};

#[derive(Parser)]
#[command(name = "pairaug", version, about = "Paired-image augmentation and synthesis for low-level vision")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degrade a directory of clean PNGs into an input/target dataset.
    Synth {
        #[arg(long)]
        hr_dir: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// sr, gaussian or jpeg
        #[arg(long, default_value = "sr")]
        task: String,
        #[arg(long, default_value_t = 4)]
        scale: usize,
        #[arg(long, default_value_t = 30.0)]
        sigma: f64,
        #[arg(long, default_value_t = 10)]
        quality: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extract augmented training patches with a replayable manifest.
    Augment {
        /// Config file with `key = value` lines; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        input_dir: Option<PathBuf>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        task: Option<String>,
        #[arg(long)]
        scale: Option<usize>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        quality: Option<u8>,
        #[arg(long)]
        patch_size: Option<usize>,
        /// default, small-model, restoration or realsr
        #[arg(long)]
        policy: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples_per_image: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        /// Replay the manifest afterwards and check every stored patch.
        #[arg(long)]
        verify: bool,
    },
    /// PSNR/SSIM between same-named PNGs of two directories.
    Eval {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// y or rgb
        #[arg(long, default_value = "y")]
        mode: String,
        /// Also write the report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Render an HR | LR | augmented | residual panel for one pair.
    Demo {
        #[arg(long)]
        lr: PathBuf,
        #[arg(long)]
        hr: PathBuf,
        /// Pool method name or `none`
        #[arg(long, default_value = "cutblur")]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn degrade_spec(task: &str, scale: usize, sigma: f64, quality: u8) -> pairaug::Result<DegradeSpec> {
    match task {
        "sr" => Ok(DegradeSpec::Sr { scale }),
        "gaussian" => Ok(DegradeSpec::Gaussian { sigma }),
        "jpeg" => Ok(DegradeSpec::Jpeg { quality }),
        other => Err(pairaug::Error::Config(format!("unknown task `{other}`"))),
    }
}

fn read_config(path: Option<&Path>) -> pairaug::Result<BTreeMap<String, String>> {
    match path {
        None => Ok(BTreeMap::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| pairaug::Error::Config(format!("{}: {e}", p.display())))?;
            pipeline::parse_kv(&text)
        }
    }
}

fn run(cli: Cli) -> pairaug::Result<()> {
    match cli.command {
        Command::Synth {
            hr_dir,
            out_dir,
            task,
            scale,
            sigma,
            quality,
            seed,
        } => {
            let spec = degrade_spec(&task, scale, sigma, quality)?;
            let summary = pipeline::cmd_synth(&hr_dir, &out_dir, spec, seed)?;
            println!(
                "synthesized {} pairs ({spec}), skipped {}",
                summary.written.len(),
                summary.skipped.len()
            );
        }
        Command::Augment {
            config,
            input_dir,
            output_dir,
            task,
            scale,
            sigma,
            quality,
            patch_size,
            policy,
            p,
            seed,
            samples_per_image,
            workers,
            verify,
        } => {
            let mut kv = read_config(config.as_deref())?;
            let overrides = [
                ("input_dir", input_dir.map(|v| v.display().to_string())),
                ("output_dir", output_dir.map(|v| v.display().to_string())),
                ("task", task),
                ("scale", scale.map(|v| v.to_string())),
                ("sigma", sigma.map(|v| v.to_string())),
                ("quality", quality.map(|v| v.to_string())),
                ("patch_size", patch_size.map(|v| v.to_string())),
                ("policy", policy),
                ("p", p.map(|v| v.to_string())),
                ("seed", seed.map(|v| v.to_string())),
                ("samples_per_image", samples_per_image.map(|v| v.to_string())),
                ("workers", workers.map(|v| v.to_string())),
            ];
            for (key, value) in overrides {
                if let Some(value) = value {
                    kv.insert(key.to_string(), value);
                }
            }
            let cfg = RunConfig::from_kv(&kv)?;
            let summary = pipeline::cmd_augment(&cfg)?;
            println!("wrote {} samples", summary.samples);
            for (method, count) in &summary.methods {
                println!("  {method:<12} {count}");
            }
            if verify {
                let check = pipeline::verify_run(&cfg)?;
                if !check.mismatched.is_empty() {
                    return Err(pairaug::Error::InvalidImage(format!(
                        "replay mismatch at indices {:?}",
                        check.mismatched
                    )));
                }
                println!("replayed {} entries, all identical", check.checked);
            }
        }
        Command::Eval { a, b, mode, json } => {
            let mode: ChannelMode = mode.parse()?;
            let report = pipeline::cmd_eval(&a, &b, mode)?;
            print!("{}", report.to_text());
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report)?;
                std::fs::write(&path, text)
                    .map_err(|e| pairaug::Error::Config(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Demo {
            lr,
            hr,
            method,
            seed,
            out,
        } => {
            let panel = pipeline::cmd_demo(&lr, &hr, &method, seed, &out)?;
            println!("wrote {}x{} panel to {}", panel.width(), panel.height(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
