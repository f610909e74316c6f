use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{file_name, list_pngs};
use crate::error::{Error, Result};
use crate::metrics::{ChannelMode, MetricReport, evaluate, psnr_value};
use crate::tensor::Image;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalEntry {
    pub name: String,
    #[serde(flatten)]
    pub report: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub channel_mode: ChannelMode,
    pub images: Vec<EvalEntry>,
    #[serde(with = "psnr_value")]
    pub mean_psnr_db: f64,
    pub mean_ssim: f64,
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let width = self.images.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!("{:<width$}  {:>10}  {:>8}\n", "name", "psnr_db", "ssim");
        for e in &self.images {
            let _ = writeln!(
                out,
                "{:<width$}  {:>10.4}  {:>8.5}",
                e.name, e.report.psnr_db, e.report.ssim
            );
        }
        let _ = writeln!(
            out,
            "{:<width$}  {:>10.4}  {:>8.5}  ({} images, {})",
            "mean",
            self.mean_psnr_db,
            self.mean_ssim,
            self.images.len(),
            self.channel_mode
        );
        out
    }
}

/// Compares same-named PNGs of two directories.
pub fn cmd_eval(dir_a: &Path, dir_b: &Path, mode: ChannelMode) -> Result<EvalReport> {
    let a = list_pngs(dir_a)?;
    let b = list_pngs(dir_b)?;
    let names_a: Vec<String> = a.iter().map(|p| file_name(p)).collect();
    let names_b: Vec<String> = b.iter().map(|p| file_name(p)).collect();
    if names_a != names_b {
        let mut odd: Vec<String> = names_a.iter().filter(|n| !names_b.contains(n)).cloned().collect();
        odd.extend(names_b.iter().filter(|n| !names_a.contains(n)).cloned());
        odd.sort();
        return Err(Error::NameMismatch(odd));
    }
    if a.is_empty() {
        return Err(Error::EmptyDataset(dir_a.display().to_string()));
    }
    let images: Vec<EvalEntry> = a
        .par_iter()
        .zip(&b)
        .zip(&names_a)
        .map(|((pa, pb), name)| {
            let report = evaluate(&Image::load_png(pa)?, &Image::load_png(pb)?, mode)
                .map_err(|e| Error::DimensionMismatch(format!("{name}: {e}")))?;
            Ok(EvalEntry {
                name: name.clone(),
                report,
            })
        })
        .collect::<Result<_>>()?;
    let n = images.len() as f64;
    Ok(EvalReport {
        channel_mode: mode,
        mean_psnr_db: images.iter().map(|e| e.report.psnr_db).sum::<f64>() / n,
        mean_ssim: images.iter().map(|e| e.report.ssim).sum::<f64>() / n,
        images,
    })
}
