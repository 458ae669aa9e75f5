//! Seedable synthetic order flow with controllable window structure.
//!
//! Each window draws a trade count from the activity schedule. Background
//! trades come in sweeps: one aggressor filled against a few distinct
//! counterparties, all picked with Zipf-like activity weights. On top of that
//! background a window may be
//!
//! * *dominated*: a share `f` of its trades buy into one designated trader from
//!   distinct sellers, each such trade pushing the log price up by `drift`;
//! * hit by a *motif burst*: a run of parallel arcs between two traders, with
//!   alternating price jumps, replacing part of the background.
//!
//! Days are generated independently from per-day streams of the same seed and
//! concatenated in day order, so output is a pure function of the config.

use std::collections::HashSet;
use std::f64::consts::TAU;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Side, Transaction, WindowSpec};
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrivalModel {
    /// Count per window ~ Poisson(rate × window length × multiplier).
    Poisson,
    /// Count per window = round(rate × window length × multiplier).
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DominanceSchedule {
    /// Chance that a window has a dominating buyer.
    pub probability: f64,
    /// Share of the window's trades absorbed, drawn uniformly in this range.
    pub intensity_min: f64,
    pub intensity_max: f64,
    /// Log-price push per dominated trade.
    pub drift: f64,
}

impl Default for DominanceSchedule {
    fn default() -> Self {
        DominanceSchedule { probability: 0.0, intensity_min: 0.5, intensity_max: 1.0, drift: 0.0002 }
    }
}

/// Rate multiplier `exp(amplitude · sin(2π·window/period + phase) + jitter·Z)`
/// with a random phase per day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ActivitySchedule {
    pub amplitude: f64,
    pub period_windows: f64,
    pub jitter: f64,
}

impl Default for ActivitySchedule {
    fn default() -> Self {
        ActivitySchedule { amplitude: 0.0, period_windows: 48.0, jitter: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotifConfig {
    /// Chance that a window carries a two-node multiple-arc burst.
    pub rate: f64,
    pub arcs_min: u32,
    pub arcs_max: u32,
    /// Log-price jump per burst trade, alternating in sign.
    pub jump: f64,
    /// Burst endpoints are drawn from the this many most active traders.
    pub hub_pool: usize,
}

impl Default for MotifConfig {
    fn default() -> Self {
        MotifConfig { rate: 0.0, arcs_min: 5, arcs_max: 15, jump: 0.004, hub_pool: 20 }
    }
}

/// Trade size in lots = ⌈`mean_lots` · S · G⌉ where S is a per-window scale
/// with P(S ≥ x) = x^(−tail_exponent) capped at `max_scale`, and G is a
/// per-trade Gamma(`shape`) factor with unit mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SizeDistribution {
    pub lot: u64,
    pub mean_lots: f64,
    pub tail_exponent: f64,
    pub max_scale: f64,
    pub shape: f64,
}

impl Default for SizeDistribution {
    fn default() -> Self {
        SizeDistribution { lot: 100, mean_lots: 10.0, tail_exponent: 3.0, max_scale: 10.0, shape: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub days: u32,
    /// First trading day; weekends are skipped.
    pub start_date: NaiveDate,
    pub window: WindowSpec,
    pub trader_pool_size: usize,
    /// Zipf exponent of trader activity weights; 0 is uniform.
    pub trader_activity_exponent: f64,
    /// Trades per minute before activity modulation.
    pub base_rate: f64,
    /// Mean number of fills per background order. Each order is one
    /// aggressor trading against distinct counterparties; 1 gives plain pairs.
    pub sweep_mean: f64,
    pub arrivals: ArrivalModel,
    pub price_start: f64,
    pub price_decimals: u32,
    /// Per-trade standard deviation of log-price noise.
    pub noise_sigma: f64,
    pub dominance: DominanceSchedule,
    pub activity: ActivitySchedule,
    pub motifs: MotifConfig,
    pub sizes: SizeDistribution,
    /// Chance that a background trade is a self-trade.
    pub wash_rate: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 0,
            days: 25,
            start_date: NaiveDate::from_ymd_opt(2024, 1, 2).expect("valid date"),
            window: WindowSpec::default(),
            trader_pool_size: 200,
            trader_activity_exponent: 0.8,
            base_rate: 10.0,
            sweep_mean: 4.0,
            arrivals: ArrivalModel::Poisson,
            price_start: 4.0,
            price_decimals: 4,
            noise_sigma: 0.0004,
            dominance: DominanceSchedule::default(),
            activity: ActivitySchedule::default(),
            motifs: MotifConfig::default(),
            sizes: SizeDistribution::default(),
            wash_rate: 0.0,
        }
    }
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidScenario(what.into()))
    }
}

fn is_prob(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        check(self.days >= 1, "days must be at least 1")?;
        check(self.trader_pool_size >= 2, "trader pool needs at least 2 traders")?;
        check(self.trader_activity_exponent.is_finite() && self.trader_activity_exponent >= 0.0, "activity exponent must be >= 0")?;
        check(self.base_rate.is_finite() && self.base_rate > 0.0, "base rate must be positive")?;
        check(self.price_start.is_finite() && self.price_start > 0.0, "start price must be positive")?;
        check(self.price_decimals <= 8, "at most 8 price decimals")?;
        check(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0, "noise sigma must be >= 0")?;
        let d = &self.dominance;
        check(is_prob(d.probability), "dominance probability outside [0, 1]")?;
        check(
            is_prob(d.intensity_min) && is_prob(d.intensity_max) && d.intensity_min <= d.intensity_max,
            "dominance intensities must satisfy 0 <= min <= max <= 1",
        )?;
        check(d.drift.is_finite(), "dominance drift must be finite")?;
        let a = &self.activity;
        check(a.amplitude.is_finite() && a.amplitude >= 0.0, "activity amplitude must be >= 0")?;
        check(a.period_windows.is_finite() && a.period_windows > 0.0, "activity period must be positive")?;
        check(a.jitter.is_finite() && a.jitter >= 0.0, "activity jitter must be >= 0")?;
        let m = &self.motifs;
        check(is_prob(m.rate), "motif rate outside [0, 1]")?;
        check(m.arcs_min >= 1 && m.arcs_min <= m.arcs_max, "motif arcs must satisfy 1 <= min <= max")?;
        check(m.jump.is_finite() && m.jump >= 0.0, "motif jump must be >= 0")?;
        check(m.hub_pool >= 2 && m.hub_pool <= self.trader_pool_size, "motif hub pool must be in [2, pool size]")?;
        let s = &self.sizes;
        check(s.lot >= 1, "lot must be positive")?;
        check(s.mean_lots.is_finite() && s.mean_lots > 0.0, "mean lots must be positive")?;
        check(s.tail_exponent.is_finite() && s.tail_exponent > 0.0, "size tail exponent must be positive")?;
        check(s.max_scale.is_finite() && s.max_scale >= 1.0, "max size scale must be >= 1")?;
        check(s.shape.is_finite() && s.shape > 0.0, "size shape must be positive")?;
        check(self.sweep_mean.is_finite() && self.sweep_mean >= 1.0, "sweep mean must be >= 1")?;
        check(is_prob(self.wash_rate), "wash rate outside [0, 1]")?;
        Ok(())
    }

    /// Trading days covered, weekends skipped.
    pub fn trading_days(&self) -> Vec<NaiveDate> {
        let mut days = Vec::with_capacity(self.days as usize);
        let mut d = self.start_date;
        while days.len() < self.days as usize {
            if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
                days.push(d);
            }
            d = d.succ_opt().expect("date in range");
        }
        days
    }
}

/// What the generator injected into one window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPlan {
    pub date: NaiveDate,
    pub index: usize,
    pub rate_multiplier: f64,
    pub trades: usize,
    /// Dominating buyer and the share of trades it absorbs.
    pub dominance: Option<(String, f64)>,
    /// Burst endpoints (seller, buyer) and arc count.
    pub burst: Option<(String, String, u32)>,
}

#[derive(Debug, Clone, Default)]
pub struct Generated {
    /// Ordered by `(timestamp, txn_id)`.
    pub transactions: Vec<Transaction>,
    pub plans: Vec<WindowPlan>,
}

pub fn generate(config: &ScenarioConfig) -> Result<Vec<Transaction>> {
    generate_with_plan(config).map(|g| g.transactions)
}

pub fn generate_with_plan(config: &ScenarioConfig) -> Result<Generated> {
    config.validate()?;
    let weights: Vec<f64> = (0..config.trader_pool_size)
        .map(|i| (i as f64 + 1.0).powf(-config.trader_activity_exponent))
        .collect();
    let picker = WeightedIndex::new(&weights).map_err(|e| Error::InvalidScenario(e.to_string()))?;
    let ids: Vec<String> = (0..config.trader_pool_size).map(|i| format!("TR{i:05}")).collect();

    let days = config.trading_days();
    let mut per_day: Vec<DayOutput> = days
        .par_iter()
        .enumerate()
        .map(|(d, &date)| generate_day(config, d as u64, date, &picker, &ids))
        .collect();

    // chain the per-day relative log-price paths
    let scale = 10f64.powi(config.price_decimals as i32);
    let mut level = config.price_start.ln();
    let mut out = Generated::default();
    for day in &mut per_day {
        for (txn, rel) in day.transactions.iter_mut().zip(&day.log_moves) {
            let ticks = ((level + rel).exp() * scale).round().max(1.0);
            txn.price = ticks / scale;
        }
        level += day.log_moves.last().copied().unwrap_or(0.0);
    }
    for day in per_day {
        out.transactions.extend(day.transactions);
        out.plans.extend(day.plans);
    }
    Ok(out)
}

struct DayOutput {
    transactions: Vec<Transaction>,
    /// Cumulative log-price move since the day's open, per transaction.
    log_moves: Vec<f64>,
    plans: Vec<WindowPlan>,
}

#[derive(Clone, Copy)]
enum Role {
    Background,
    Dominated,
    Burst,
}

fn draw_scale(rng: &mut ChaCha8Rng, sizes: &SizeDistribution) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    u.powf(-1.0 / sizes.tail_exponent).min(sizes.max_scale)
}

/// Background order currently being filled.
struct Sweep {
    aggressor: usize,
    buying: bool,
    remaining: usize,
    seen: Vec<usize>,
}

impl Sweep {
    fn start(rng: &mut ChaCha8Rng, picker: &WeightedIndex<f64>, mean: f64) -> Sweep {
        let fills = if mean > 1.0 {
            // 1 + geometric with mean `mean - 1`
            let p = 1.0 / mean;
            let u: f64 = 1.0 - rng.random::<f64>();
            1 + (u.ln() / (1.0 - p).ln()).floor() as usize
        } else {
            1
        };
        let aggressor = picker.sample(rng);
        Sweep { aggressor, buying: rng.random::<bool>(), remaining: fills, seen: vec![aggressor] }
    }

    fn counterparty(&mut self, rng: &mut ChaCha8Rng, picker: &WeightedIndex<f64>, pool: usize) -> usize {
        self.remaining -= 1;
        if self.seen.len() >= pool {
            self.seen.truncate(1);
        }
        loop {
            let c = picker.sample(rng);
            if !self.seen.contains(&c) {
                self.seen.push(c);
                return c;
            }
        }
    }
}

fn generate_day(
    config: &ScenarioConfig,
    day: u64,
    date: NaiveDate,
    picker: &WeightedIndex<f64>,
    ids: &[String],
) -> DayOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(day + 1);

    let spec = &config.window;
    let window_ms = spec.window_ms();
    let window_minutes = window_ms as f64 / 60_000.0;
    let pool = ids.len();
    let phase = rng.random::<f64>() * TAU;
    let date_tag = date.format("%Y%m%d").to_string();

    let mut out = DayOutput { transactions: Vec::new(), log_moves: Vec::new(), plans: Vec::new() };
    let mut log_price = 0.0;
    let mut seq = 0u64;

    for index in 0..spec.windows_per_day() {
        let act = &config.activity;
        let mut exponent = act.amplitude * (TAU * index as f64 / act.period_windows + phase).sin();
        if act.jitter > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            exponent += act.jitter * z;
        }
        let multiplier = exponent.exp();
        let lambda = config.base_rate * window_minutes * multiplier;
        let background = match config.arrivals {
            ArrivalModel::Fixed => lambda.round() as usize,
            ArrivalModel::Poisson => Poisson::new(lambda).map_or(0, |p| p.sample(&mut rng) as usize),
        };

        let dominance = (rng.random::<f64>() < config.dominance.probability).then(|| {
            let d = &config.dominance;
            let share = if d.intensity_max > d.intensity_min {
                rng.random_range(d.intensity_min..=d.intensity_max)
            } else {
                d.intensity_min
            };
            (rng.random_range(0..pool), share)
        });
        let burst = (rng.random::<f64>() < config.motifs.rate).then(|| {
            let m = &config.motifs;
            let a = rng.random_range(0..m.hub_pool);
            let mut b = rng.random_range(0..m.hub_pool - 1);
            if b >= a {
                b += 1;
            }
            (a, b, rng.random_range(m.arcs_min..=m.arcs_max))
        });

        // burst arcs take the place of background trades
        let background = background.saturating_sub(burst.map_or(0, |(_, _, arcs)| arcs as usize));
        let mut roles: Vec<Role> = (0..background)
            .map(|_| match dominance {
                Some((_, share)) if rng.random::<f64>() < share => Role::Dominated,
                _ => Role::Background,
            })
            .collect();
        if let Some((_, _, arcs)) = burst {
            roles.extend(std::iter::repeat_n(Role::Burst, arcs as usize));
            // interleave the burst with the background
            for i in (1..roles.len()).rev() {
                let j = rng.random_range(0..=i);
                roles.swap(i, j);
            }
        }

        let start = spec.window_start(date, index).millis();
        let mut times: Vec<i64> = (0..roles.len()).map(|_| start + rng.random_range(0..window_ms)).collect();
        times.sort_unstable();

        let scale = draw_scale(&mut rng, &config.sizes);
        let gamma = Gamma::new(config.sizes.shape, config.sizes.mean_lots * scale / config.sizes.shape)
            .expect("validated size parameters");
        let mut sweep: Option<Sweep> = None;
        let mut used_sellers: HashSet<usize> = HashSet::new();
        let mut burst_sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        for (role, ts) in roles.iter().zip(times) {
            let (seller, buyer, step) = match *role {
                Role::Background => {
                    let mut current = match sweep.take() {
                        Some(s) if s.remaining > 0 => s,
                        _ => Sweep::start(&mut rng, picker, config.sweep_mean),
                    };
                    let aggressor = current.aggressor;
                    let other = if config.wash_rate > 0.0 && rng.random::<f64>() < config.wash_rate {
                        current.remaining -= 1;
                        aggressor
                    } else {
                        current.counterparty(&mut rng, picker, pool)
                    };
                    let pair = if current.buying { (other, aggressor, 0.0) } else { (aggressor, other, 0.0) };
                    sweep = Some(current);
                    pair
                }
                Role::Dominated => {
                    let (core, _) = dominance.expect("dominated role implies dominance");
                    let seller = if used_sellers.len() + 1 < pool {
                        loop {
                            let s = rng.random_range(0..pool);
                            if s != core && used_sellers.insert(s) {
                                break s;
                            }
                        }
                    } else {
                        loop {
                            let s = rng.random_range(0..pool);
                            if s != core {
                                break s;
                            }
                        }
                    };
                    (seller, core, config.dominance.drift)
                }
                Role::Burst => {
                    let (a, b, _) = burst.expect("burst role implies burst");
                    burst_sign = -burst_sign;
                    (a, b, -burst_sign * config.motifs.jump)
                }
            };
            let noise: f64 = StandardNormal.sample(&mut rng);
            let step = step + config.noise_sigma * noise;
            log_price += step;
            let lots = gamma.sample(&mut rng).ceil().max(1.0) as u64;
            out.transactions.push(Transaction {
                txn_id: format!("{date_tag}-{seq:06}"),
                buyer_id: ids[buyer].clone(),
                seller_id: ids[seller].clone(),
                timestamp: Timestamp(ts),
                price: 0.0,
                size: lots * config.sizes.lot,
                side: Some(if step >= 0.0 { Side::Buy } else { Side::Sell }),
            });
            out.log_moves.push(log_price);
            seq += 1;
        }

        out.plans.push(WindowPlan {
            date,
            index,
            rate_multiplier: multiplier,
            trades: roles.len(),
            dominance: dominance.map(|(core, share)| (ids[core].clone(), share)),
            burst: burst.map(|(a, b, arcs)| (ids[a].clone(), ids[b].clone(), arcs)),
        });
    }
    out
}

/// Stable preset names.
pub const PRESET_NAMES: [&str; 4] = ["baseline", "dominating-buyer", "activity-waves", "motif-bursts"];

pub fn scenario_presets() -> Vec<(&'static str, ScenarioConfig)> {
    PRESET_NAMES.iter().map(|&name| (name, preset(name).expect("known preset"))).collect()
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let base = ScenarioConfig::default();
    let config = match name {
        // constant activity, no injected structure
        "baseline" => ScenarioConfig { arrivals: ArrivalModel::Fixed, ..base },
        "dominating-buyer" => ScenarioConfig {
            arrivals: ArrivalModel::Fixed,
            dominance: DominanceSchedule { probability: 0.3, intensity_min: 0.2, intensity_max: 1.0, drift: 0.0002 },
            ..base
        },
        "activity-waves" => ScenarioConfig {
            arrivals: ArrivalModel::Poisson,
            activity: ActivitySchedule { amplitude: 0.8, period_windows: 24.0, jitter: 0.3 },
            ..base
        },
        "motif-bursts" => ScenarioConfig {
            arrivals: ArrivalModel::Fixed,
            motifs: MotifConfig { rate: 0.3, arcs_min: 10, arcs_max: 30, jump: 0.004, hub_pool: 20 },
            ..base
        },
        other => return Err(Error::UnknownPreset(other.into())),
    };
    Ok(config)
}
