use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::degrade::DegradeSpec;
use crate::error::{Error, Result};
use crate::moa::{Method, MoaPolicy, Preset};

/// Settings of one augmentation run.
///
/// The text form is one `key = value` per line; `#` starts a comment. Keys:
/// `input_dir`, `output_dir`, `task` (`sr`, `gaussian`, `jpeg`), `scale`,
/// `sigma`, `quality`, `patch_size`, `policy` (a preset name), `p`,
/// `weights.<method>`, `alpha.<method>` (comma separated), `seed`,
/// `samples_per_image`, `workers`. The preset is applied first; `p`,
/// `weights.*` and `alpha.*` override it regardless of line order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: DegradeSpec,
    /// Patch side on the LR grid.
    pub patch_size: usize,
    pub policy: MoaPolicy,
    pub seed: u64,
    pub input_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub samples_per_image: usize,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            task: DegradeSpec::Sr { scale: 4 },
            patch_size: 48,
            policy: MoaPolicy::default(),
            seed: 0,
            input_dir: None,
            output_dir: None,
            samples_per_image: 1,
            workers: 1,
        }
    }
}

/// Splits config text into key/value pairs, rejecting malformed lines and
/// repeated keys.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", n + 1)));
        }
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&parse_kv(text)?)
    }

    pub fn from_kv(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let get = |k: &str| map.get(k).map(String::as_str);

        if let Some(name) = get("policy") {
            cfg.policy = MoaPolicy::preset(name.parse::<Preset>()?);
        }
        let scale = get("scale").map(|v| parse_num("scale", v)).transpose()?;
        let sigma = get("sigma").map(|v| parse_num("sigma", v)).transpose()?;
        let quality = get("quality").map(|v| parse_num("quality", v)).transpose()?;
        cfg.task = match get("task").unwrap_or("sr") {
            "sr" => DegradeSpec::Sr {
                scale: scale.unwrap_or(4),
            },
            "gaussian" => DegradeSpec::Gaussian {
                sigma: sigma.unwrap_or(30.0),
            },
            "jpeg" => DegradeSpec::Jpeg {
                quality: quality.unwrap_or(10),
            },
            other => return Err(Error::Config(format!("unknown task `{other}`"))),
        };

        for (key, value) in map {
            match key.as_str() {
                "policy" | "task" | "scale" | "sigma" | "quality" => {}
                "input_dir" => cfg.input_dir = Some(PathBuf::from(value)),
                "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
                "patch_size" => cfg.patch_size = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "samples_per_image" => cfg.samples_per_image = parse_num(key, value)?,
                "workers" => cfg.workers = parse_num(key, value)?,
                "p" => cfg.policy.p = parse_num(key, value)?,
                _ => {
                    if let Some(name) = key.strip_prefix("weights.") {
                        let weight = parse_num(key, value)?;
                        policy_entry(&mut cfg.policy, name)?.weight = weight;
                    } else if let Some(name) = key.strip_prefix("alpha.") {
                        let alpha = value
                            .split(',')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(|s| parse_num(key, s))
                            .collect::<Result<Vec<f64>>>()?;
                        policy_entry(&mut cfg.policy, name)?.alpha = alpha;
                    } else {
                        return Err(Error::Config(format!("unknown key `{key}`")));
                    }
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.task.validate()?;
        self.policy.validate()?;
        if self.patch_size == 0 {
            return Err(Error::Config("patch_size must be positive".into()));
        }
        if self.samples_per_image == 0 {
            return Err(Error::Config("samples_per_image must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        Ok(())
    }

    /// Canonical text form; the policy is always written out inline.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(dir) = &self.input_dir {
            let _ = writeln!(out, "input_dir = {}", dir.display());
        }
        if let Some(dir) = &self.output_dir {
            let _ = writeln!(out, "output_dir = {}", dir.display());
        }
        match self.task {
            DegradeSpec::Sr { scale } => {
                let _ = writeln!(out, "task = sr\nscale = {scale}");
            }
            DegradeSpec::Gaussian { sigma } => {
                let _ = writeln!(out, "task = gaussian\nsigma = {sigma}");
            }
            DegradeSpec::Jpeg { quality } => {
                let _ = writeln!(out, "task = jpeg\nquality = {quality}");
            }
        }
        let _ = writeln!(out, "patch_size = {}", self.patch_size);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "samples_per_image = {}", self.samples_per_image);
        let _ = writeln!(out, "workers = {}", self.workers);
        let _ = writeln!(out, "p = {}", self.policy.p);
        for method in Method::ALL {
            let (weight, alpha) = match self.policy.entry(method) {
                Some(e) => (e.weight, e.alpha.clone()),
                None => (0.0, method.default_alpha()),
            };
            let _ = writeln!(out, "weights.{method} = {weight}");
            if !alpha.is_empty() {
                let list: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
                let _ = writeln!(out, "alpha.{method} = {}", list.join(", "));
            }
        }
        out
    }

    /// Input and output directories, or a config error naming the missing one.
    pub fn dirs(&self) -> Result<(PathBuf, PathBuf)> {
        let input = self
            .input_dir
            .clone()
            .ok_or_else(|| Error::Config("input_dir is not set".into()))?;
        let output = self
            .output_dir
            .clone()
            .ok_or_else(|| Error::Config("output_dir is not set".into()))?;
        Ok((input, output))
    }
}

fn policy_entry<'a>(policy: &'a mut MoaPolicy, name: &str) -> Result<&'a mut crate::moa::PolicyEntry> {
    let method: Method = name.parse()?;
    if policy.entry(method).is_none() {
        policy.entries.push(crate::moa::PolicyEntry::new(method, 0.0));
    }
    Ok(policy
        .entries
        .iter_mut()
        .find(|e| e.method == method)
        .expect("entry inserted above"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_and_presets() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let cfg = RunConfig::parse("policy = realsr\n# comment\n").unwrap();
        assert_eq!(cfg.policy, MoaPolicy::preset(Preset::Realsr));
        let cfg = RunConfig::parse("p = 0.5\npolicy = small-model").unwrap();
        assert_eq!(cfg.policy.p, 0.5);
    }

    #[test]
    fn overrides_and_errors() {
        let cfg = RunConfig::parse(
            "task = gaussian\nsigma = 70\nweights.cutblur = 3\nalpha.cutmixup = 0.5, 2.0\nworkers = 4",
        )
        .unwrap();
        assert_eq!(cfg.task, DegradeSpec::Gaussian { sigma: 70.0 });
        assert_eq!(cfg.policy.entry(Method::Cutblur).unwrap().weight, 3.0);
        assert_eq!(cfg.policy.entry(Method::Cutmixup).unwrap().alpha, vec![0.5, 2.0]);
        assert_eq!(cfg.workers, 4);

        for bad in [
            "bogus = 1",
            "seed = 1\nseed = 2",
            "patch_size = -3",
            "task = inpaint",
            "policy = aggressive",
            "weights.sharpen = 1",
            "alpha.mixup = 0.1, 0.2",
            "p = 2",
            "scale = 7",
            "just words",
        ] {
            assert!(RunConfig::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn text_round_trip_examples() {
        for text in ["", "policy = realsr\ntask = jpeg\nquality = 30", "input_dir = a/b\noutput_dir = c"] {
            let cfg = RunConfig::parse(text).unwrap();
            assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
        }
    }

    proptest! {
        #[test]
        fn parse_serialize_parse_is_identity(
            task in 0u8..3, scale in 2usize..5, sigma in 0.5f64..255.0, quality in 1u8..=100,
            patch in 1usize..200, seed in any::<u64>(), spi in 1usize..50, workers in 1usize..16,
            p in 0.0f64..=1.0, weights in proptest::collection::vec(0.0f64..10.0, 7),
            cut in 0.01f64..=1.0, mix in 0.1f64..5.0, blend in 0.0f64..0.99, ratio in 0.0f64..=1.0,
        ) {
            let mut text = match task {
                0 => format!("task = sr\nscale = {scale}\n"),
                1 => format!("task = gaussian\nsigma = {sigma}\n"),
                _ => format!("task = jpeg\nquality = {quality}\n"),
            };
            text += &format!(
                "patch_size = {patch}\nseed = {seed}\nsamples_per_image = {spi}\nworkers = {workers}\np = {p}\n"
            );
            for (m, w) in Method::ALL.iter().zip(&weights) {
                text += &format!("weights.{m} = {w}\n");
            }
            text += &format!(
                "alpha.cutmix = {cut}\nalpha.cutblur = {cut}\nalpha.mixup = {mix}\n\
                 alpha.cutmixup = {cut},{mix}\nalpha.blend = {blend}\nalpha.cutout = {ratio}\n"
            );
            if let Ok(first) = RunConfig::parse(&text) {
                let second = RunConfig::parse(&first.to_text()).unwrap();
                prop_assert_eq!(&second, &first);
                prop_assert_eq!(second.to_text(), first.to_text());
            }
        }
    }
}
