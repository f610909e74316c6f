//! Mixture of Augmentations: with probability `p` pick exactly one method
//! from the pool (weighted) and apply it; otherwise pass the pair through.
//!
//! Randomness is consumed in a fixed order: the apply draw, the method draw
//! (only when applying), then the method's own draws. A two-sample method
//! pulls its partner from the provider before its own draws.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::augment::{self, AugmentedSample};
use crate::error::{Error, Result};
use crate::tensor::{AlignedPair, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cutout,
    Cutmix,
    Mixup,
    Cutmixup,
    RgbPermute,
    Blend,
    Cutblur,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Cutout,
        Method::Cutmix,
        Method::Mixup,
        Method::Cutmixup,
        Method::RgbPermute,
        Method::Blend,
        Method::Cutblur,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cutout => "cutout",
            Method::Cutmix => "cutmix",
            Method::Mixup => "mixup",
            Method::Cutmixup => "cutmixup",
            Method::RgbPermute => "rgb_permute",
            Method::Blend => "blend",
            Method::Cutblur => "cutblur",
        }
    }

    pub fn needs_partner(self) -> bool {
        matches!(self, Method::Cutmix | Method::Mixup | Method::Cutmixup)
    }

    /// Default hyper-parameters; CutMixup carries `[α1, α2]`.
    pub fn default_alpha(self) -> Vec<f64> {
        match self {
            Method::Cutout => vec![augment::DEFAULT_CUTOUT_RATIO],
            Method::Cutmix => vec![augment::DEFAULT_CUTMIX_ALPHA],
            Method::Mixup => vec![augment::DEFAULT_MIXUP_ALPHA],
            Method::Cutmixup => vec![augment::DEFAULT_CUTMIX_ALPHA, augment::DEFAULT_MIXUP_ALPHA],
            Method::RgbPermute => vec![],
            Method::Blend => vec![augment::DEFAULT_BLEND_ALPHA],
            Method::Cutblur => vec![augment::DEFAULT_CUTBLUR_ALPHA],
        }
    }

    fn check_alpha(self, alpha: &[f64]) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidPolicy(format!("{}: {msg} {alpha:?}", self.name())));
        if alpha.len() != self.default_alpha().len() {
            return bad("wrong number of hyper-parameters");
        }
        let ok = match self {
            Method::Cutout => (0.0..=1.0).contains(&alpha[0]),
            Method::Cutmix | Method::Cutblur => alpha[0] > 0.0 && alpha[0] <= 1.0,
            Method::Mixup => alpha[0] > 0.0 && alpha[0].is_finite(),
            Method::Cutmixup => {
                alpha[0] > 0.0 && alpha[0] <= 1.0 && alpha[1] > 0.0 && alpha[1].is_finite()
            }
            Method::RgbPermute => true,
            Method::Blend => (0.0..1.0).contains(&alpha[0]),
        };
        if ok { Ok(()) } else { bad("hyper-parameter out of range") }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyEntry {
    pub method: Method,
    pub weight: f64,
    pub alpha: Vec<f64>,
}

impl PolicyEntry {
    pub fn new(method: Method, weight: f64) -> Self {
        Self {
            method,
            weight,
            alpha: method.default_alpha(),
        }
    }
}

/// Named policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `p = 1`, all seven methods equally likely.
    Default,
    /// `p = 0.2`, for small SR models.
    SmallModel,
    /// `p = 0.6`, for denoising and JPEG artifact removal.
    Restoration,
    /// `p = 1`, CutBlur 40% and every other method 10%.
    Realsr,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Default, Preset::SmallModel, Preset::Restoration, Preset::Realsr];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Default => "default",
            Preset::SmallModel => "small-model",
            Preset::Restoration => "restoration",
            Preset::Realsr => "realsr",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy preset `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoaPolicy {
    pub p: f64,
    pub entries: Vec<PolicyEntry>,
}

impl MoaPolicy {
    pub fn preset(preset: Preset) -> Self {
        let even = |p| MoaPolicy {
            p,
            entries: Method::ALL.iter().map(|&m| PolicyEntry::new(m, 1.0)).collect(),
        };
        match preset {
            Preset::Default => even(1.0),
            Preset::SmallModel => even(0.2),
            Preset::Restoration => even(0.6),
            Preset::Realsr => MoaPolicy {
                p: 1.0,
                entries: Method::ALL
                    .iter()
                    .map(|&m| PolicyEntry::new(m, if m == Method::Cutblur { 4.0 } else { 1.0 }))
                    .collect(),
            },
        }
    }

    /// Policy that applies `method` with probability `p`.
    pub fn single(method: Method, p: f64) -> Self {
        MoaPolicy {
            p,
            entries: vec![PolicyEntry::new(method, 1.0)],
        }
    }

    pub fn entry(&self, method: Method) -> Option<&PolicyEntry> {
        self.entries.iter().find(|e| e.method == method)
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// Probability that one dispatch picks `method`.
    pub fn expected_frequency(&self, method: Method) -> f64 {
        let total = self.total_weight();
        match self.entry(method) {
            Some(e) if total > 0.0 => self.p * e.weight / total,
            _ => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidPolicy(format!("p = {} outside [0, 1]", self.p)));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if !(e.weight >= 0.0 && e.weight.is_finite()) {
                return Err(Error::InvalidPolicy(format!("{}: weight {}", e.method, e.weight)));
            }
            if self.entries[..i].iter().any(|o| o.method == e.method) {
                return Err(Error::InvalidPolicy(format!("{} listed twice", e.method)));
            }
            e.method.check_alpha(&e.alpha)?;
        }
        if self.p > 0.0 && self.total_weight() <= 0.0 {
            return Err(Error::InvalidPolicy("no method with positive weight".into()));
        }
        Ok(())
    }
}

impl Default for MoaPolicy {
    fn default() -> Self {
        MoaPolicy::preset(Preset::Default)
    }
}

/// `None` with probability `1 − p`, otherwise a method with probability
/// proportional to its weight.
pub fn select_method(policy: &MoaPolicy, rng: &mut Rng) -> Result<Option<Method>> {
    policy.validate()?;
    if !rng.bernoulli(policy.p) {
        return Ok(None);
    }
    let total = policy.total_weight();
    let target = rng.uniform() * total;
    let mut acc = 0.0;
    let mut last = None;
    for e in policy.entries.iter().filter(|e| e.weight > 0.0) {
        acc += e.weight;
        last = Some(e.method);
        if target < acc {
            return Ok(last);
        }
    }
    // rounding left `target` at the very top of the range
    Ok(last)
}

/// Applies one method with explicit hyper-parameters. Only two-sample
/// methods invoke `partner`, exactly once.
pub fn apply_method<F>(
    method: Method,
    alpha: &[f64],
    pair: &AlignedPair,
    mut partner: F,
    rng: &mut Rng,
) -> Result<AugmentedSample>
where
    F: FnMut() -> Result<AlignedPair>,
{
    method.check_alpha(alpha)?;
    let mut fetch = || -> Result<AlignedPair> {
        let other = partner()?;
        pair.ensure_same_shape(&other)?;
        Ok(other)
    };
    match method {
        Method::Cutout => augment::cutout(pair, alpha[0], rng),
        Method::Cutmix => augment::cutmix(pair, &fetch()?, alpha[0], rng),
        Method::Mixup => augment::mixup(pair, &fetch()?, alpha[0], rng),
        Method::Cutmixup => augment::cutmixup(pair, &fetch()?, alpha[0], alpha[1], rng),
        Method::RgbPermute => augment::rgb_permute(pair, rng),
        Method::Blend => augment::blend(pair, alpha[0], rng),
        Method::Cutblur => Ok(augment::cutblur(pair, alpha[0], rng)),
    }
}

/// One MoA dispatch.
pub fn apply_moa<F>(pair: &AlignedPair, partner: F, policy: &MoaPolicy, rng: &mut Rng) -> Result<AugmentedSample>
where
    F: FnMut() -> Result<AlignedPair>,
{
    match select_method(policy, rng)? {
        None => Ok(AugmentedSample::passthrough(pair)),
        Some(method) => {
            let entry = policy.entry(method).expect("selected from the policy");
            apply_method(method, &entry.alpha, pair, partner, rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::AugRecord;
    use crate::tensor::Image;
    use std::collections::HashMap;

    fn random_pair(seed: u64) -> AlignedPair {
        let mut rng = Rng::new(seed);
        let input = Image::from_fn(12, 12, 3, |_, _, _| rng.uniform());
        let target = Image::from_fn(12, 12, 3, |_, _, _| rng.uniform());
        AlignedPair::new(input, target, 1, "p").unwrap()
    }

    fn frequencies(policy: &MoaPolicy, n: usize, seed: u64) -> HashMap<Option<Method>, f64> {
        let mut rng = Rng::new(seed);
        let mut counts = HashMap::new();
        for _ in 0..n {
            *counts.entry(select_method(policy, &mut rng).unwrap()).or_insert(0usize) += 1;
        }
        counts.into_iter().map(|(k, v)| (k, v as f64 / n as f64)).collect()
    }

    #[test]
    fn zero_probability_never_applies() {
        let policy = MoaPolicy { p: 0.0, ..MoaPolicy::default() };
        let f = frequencies(&policy, 10_000, 1);
        assert_eq!(f.get(&None), Some(&1.0));
    }

    #[test]
    fn preset_frequencies() {
        let n = 100_000;
        let f = frequencies(&MoaPolicy::preset(Preset::Default), n, 2);
        for m in Method::ALL {
            assert!((f[&Some(m)] - 1.0 / 7.0).abs() < 0.01, "{m}: {}", f[&Some(m)]);
        }
        let f = frequencies(&MoaPolicy::preset(Preset::Realsr), n, 3);
        for m in Method::ALL {
            let want = if m == Method::Cutblur { 0.4 } else { 0.1 };
            assert!((f[&Some(m)] - want).abs() < 0.01, "{m}: {}", f[&Some(m)]);
        }
    }

    #[test]
    fn frequencies_within_binomial_bounds() {
        let n = 100_000;
        for preset in Preset::ALL {
            let policy = MoaPolicy::preset(preset);
            let f = frequencies(&policy, n, 4);
            for m in Method::ALL {
                let q = policy.expected_frequency(m);
                let sigma = (q * (1.0 - q) / n as f64).sqrt();
                let got = f.get(&Some(m)).copied().unwrap_or(0.0);
                assert!((got - q).abs() <= 3.0 * sigma, "{} {m}: {got} vs {q}", preset.name());
            }
        }
    }

    #[test]
    fn preset_probabilities() {
        assert_eq!(MoaPolicy::preset(Preset::Default).p, 1.0);
        assert_eq!(MoaPolicy::preset(Preset::SmallModel).p, 0.2);
        assert_eq!(MoaPolicy::preset(Preset::Restoration).p, 0.6);
        let realsr = MoaPolicy::preset(Preset::Realsr);
        assert!((realsr.expected_frequency(Method::Cutblur) - 0.4).abs() < 1e-12);
        assert!((realsr.expected_frequency(Method::Blend) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn invalid_policies() {
        let mut policy = MoaPolicy::default();
        policy.entries.iter_mut().for_each(|e| e.weight = 0.0);
        assert!(matches!(select_method(&policy, &mut Rng::new(1)), Err(Error::InvalidPolicy(_))));
        let policy = MoaPolicy { p: 1.5, ..MoaPolicy::default() };
        assert!(policy.validate().is_err());
        let mut policy = MoaPolicy::default();
        policy.entries[0].alpha = vec![];
        assert!(policy.validate().is_err());
        let mut policy = MoaPolicy::default();
        policy.entries.push(PolicyEntry::new(Method::Blend, 1.0));
        assert!(policy.validate().is_err());
    }

    #[test]
    fn passthrough_when_not_applied() {
        let pair = random_pair(1);
        let policy = MoaPolicy { p: 0.0, ..MoaPolicy::default() };
        let s = apply_moa(&pair, || panic!("no partner needed"), &policy, &mut Rng::new(3)).unwrap();
        assert_eq!(s.record, AugRecord::None);
        assert_eq!((&s.input, &s.target), (&pair.input, &pair.target));
    }

    #[test]
    fn dispatch_is_transparent() {
        let pair = random_pair(2);
        let partner = random_pair(3);
        for m in Method::ALL {
            let policy = MoaPolicy::single(m, 1.0);
            let mut rng = Rng::new(17);
            let via_moa = apply_moa(&pair, || Ok(partner.clone()), &policy, &mut rng).unwrap();

            let mut rng = Rng::new(17);
            rng.uniform(); // apply draw
            rng.uniform(); // method draw
            let alpha = m.default_alpha();
            let direct = match m {
                Method::Cutblur => augment::cutblur(&pair, alpha[0], &mut rng),
                Method::Cutout => augment::cutout(&pair, alpha[0], &mut rng).unwrap(),
                Method::Cutmix => augment::cutmix(&pair, &partner, alpha[0], &mut rng).unwrap(),
                Method::Mixup => augment::mixup(&pair, &partner, alpha[0], &mut rng).unwrap(),
                Method::Cutmixup => {
                    augment::cutmixup(&pair, &partner, alpha[0], alpha[1], &mut rng).unwrap()
                }
                Method::RgbPermute => augment::rgb_permute(&pair, &mut rng).unwrap(),
                Method::Blend => augment::blend(&pair, alpha[0], &mut rng).unwrap(),
            };
            assert_eq!(via_moa, direct, "{m}");
        }
    }

    #[test]
    fn partner_pulled_only_by_two_sample_methods() {
        let pair = random_pair(4);
        let partner = random_pair(5);
        let policy = MoaPolicy::default();
        let mut rng = Rng::new(6);
        let (mut pulls, mut two_sample) = (0, 0);
        for _ in 0..10_000 {
            let mut calls = 0;
            let s = apply_moa(
                &pair,
                || {
                    calls += 1;
                    Ok(partner.clone())
                },
                &policy,
                &mut rng,
            )
            .unwrap();
            assert_eq!(calls, usize::from(s.record.needs_partner()));
            pulls += calls;
            two_sample += usize::from(s.record.needs_partner());
        }
        assert_eq!(pulls, two_sample);
        assert!(two_sample > 0);
    }

    #[test]
    fn partner_shape_is_checked() {
        let pair = random_pair(7);
        let small = AlignedPair::new(Image::zeros(4, 4, 3), Image::zeros(4, 4, 3), 1, "s").unwrap();
        let policy = MoaPolicy::single(Method::Mixup, 1.0);
        let err = apply_moa(&pair, || Ok(small.clone()), &policy, &mut Rng::new(1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("cutblurr".parse::<Method>().is_err());
    }
}
