//! Experiment configuration and per-trial random geometry.
//!
//! Every trial owns an independent ChaCha8 stream whose seed is a fixed
//! function of `(master_seed, trial_index)`, see [`trial_seed`]. Within a
//! trial the draws happen in this order:
//!
//! 1. channel index `k`, uniform over `11..=26`
//! 2. relay positions, `x` then `y`, for each of the [`RELAY_COUNT`] relays
//! 3. interferer count, uniform over `interferer_count_range`
//! 4. interferer positions, `x` then `y`, for each interferer
//! 5. fading gains: terminal pairs in the order of [`TERMINAL_PAIRS`], then
//!    for each interferer one gain towards every receiver in [`RECEIVERS`]
//!
//! Both relays are always drawn so that a trial's channels do not depend on
//! which strategies are being evaluated.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::propagation::draw_fading;

pub const MIN_CHANNEL_INDEX: i64 = 11;
pub const MAX_CHANNEL_INDEX: i64 = 26;

/// Number of relays drawn per trial.
pub const RELAY_COUNT: usize = 2;

/// Random stream used for a single trial.
pub type TrialRng = ChaCha8Rng;

/// A node of the network. In the two-way experiments end node A is
/// [`Node::Source`] and end node B is [`Node::Destination`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Source,
    Destination,
    Relay(u8),
    Interferer(u8),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Source => f.write_str("S"),
            Node::Destination => f.write_str("D"),
            Node::Relay(i) => write!(f, "R{}", i + 1),
            Node::Interferer(i) => write!(f, "I{}", i + 1),
        }
    }
}

/// Reciprocal terminal pairs that receive a fading draw, in draw order.
pub const TERMINAL_PAIRS: [(Node, Node); 5] = [
    (Node::Source, Node::Destination),
    (Node::Source, Node::Relay(0)),
    (Node::Relay(0), Node::Destination),
    (Node::Source, Node::Relay(1)),
    (Node::Relay(1), Node::Destination),
];

/// Every node that can receive a signal.
pub const RECEIVERS: [Node; 4] = [
    Node::Source,
    Node::Destination,
    Node::Relay(0),
    Node::Relay(1),
];

/// How per-link fading gains are produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FadingModel {
    /// Flat Rayleigh fading, unit mean-square gain.
    #[default]
    Rayleigh,
    /// Every gain is exactly 1; useful for link-budget calibration.
    Unit,
}

impl FadingModel {
    pub fn name(self) -> &'static str {
        match self {
            FadingModel::Rayleigh => "rayleigh",
            FadingModel::Unit => "none",
        }
    }
}

impl fmt::Display for FadingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FadingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rayleigh" => Ok(FadingModel::Rayleigh),
            "none" | "unit" => Ok(FadingModel::Unit),
            other => Err(Error::Config(format!(
                "unknown fading model `{other}` (expected rayleigh or none)"
            ))),
        }
    }
}

/// Physical-layer and geometric parameters of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub tx_power_dbm: f64,
    pub interferer_power_dbm: f64,
    /// Gain of a single antenna; every link counts it at both ends.
    pub antenna_gain_db: f64,
    pub noise_power_dbm: f64,
    pub bandwidth_hz: f64,
    pub path_loss_coeff_db_per_decade: f64,
    /// End-to-end distance `L` between source and destination.
    pub distance_m: f64,
    pub direct_blocked: bool,
    /// Inclusive bounds on the number of interferers drawn per trial.
    pub interferer_count_range: (u32, u32),
    pub fading: FadingModel,
    pub master_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            tx_power_dbm: 0.0,
            interferer_power_dbm: 3.0,
            antenna_gain_db: 2.5,
            noise_power_dbm: -110.0,
            bandwidth_hz: 2e6,
            path_loss_coeff_db_per_decade: 28.0,
            distance_m: 70.0,
            direct_blocked: false,
            interferer_count_range: (1, 3),
            fading: FadingModel::Rayleigh,
            master_seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("tx_power_dbm", self.tx_power_dbm),
            ("interferer_power_dbm", self.interferer_power_dbm),
            ("antenna_gain_db", self.antenna_gain_db),
            ("noise_power_dbm", self.noise_power_dbm),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::Domain {
                    name,
                    expected: "finite",
                    value,
                });
            }
        }
        let positive = [
            ("distance_m", self.distance_m),
            ("bandwidth_hz", self.bandwidth_hz),
            (
                "path_loss_coeff_db_per_decade",
                self.path_loss_coeff_db_per_decade,
            ),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Domain {
                    name,
                    expected: "finite and > 0",
                    value,
                });
            }
        }
        let (lo, hi) = self.interferer_count_range;
        if lo > hi {
            return Err(Error::Config(format!(
                "interferer_count_range min ({lo}) exceeds max ({hi})"
            )));
        }
        if hi > u32::from(u8::MAX) {
            return Err(Error::Config(format!(
                "interferer_count_range max ({hi}) exceeds {}",
                u8::MAX
            )));
        }
        Ok(())
    }

    /// Copy of this configuration at another end-to-end distance.
    pub fn at_distance(&self, distance_m: f64) -> Self {
        Self {
            distance_m,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interferer {
    pub position: Position,
    pub power_dbm: f64,
}

/// One Monte Carlo draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSample {
    pub channel_index: u8,
    pub carrier_freq_mhz: f64,
    pub source_pos: Position,
    pub destination_pos: Position,
    pub relay_positions: Vec<Position>,
    pub interferers: Vec<Interferer>,
    /// Directed `(tx, rx)` fading gains. Terminal pairs are reciprocal.
    pub fading: BTreeMap<(Node, Node), Complex64>,
}

impl ScenarioSample {
    /// Position of `node`, if the sample contains it.
    pub fn position(&self, node: Node) -> Option<Position> {
        match node {
            Node::Source => Some(self.source_pos),
            Node::Destination => Some(self.destination_pos),
            Node::Relay(i) => self.relay_positions.get(usize::from(i)).copied(),
            Node::Interferer(i) => self
                .interferers
                .get(usize::from(i))
                .map(|interferer| interferer.position),
        }
    }

    pub fn fading_gain(&self, tx: Node, rx: Node) -> Option<Complex64> {
        self.fading.get(&(tx, rx)).copied()
    }
}

/// Carrier frequency in MHz of ZigBee channel `k`.
pub fn channel_frequency(k: i64) -> Result<f64> {
    if !(MIN_CHANNEL_INDEX..=MAX_CHANNEL_INDEX).contains(&k) {
        return Err(Error::ChannelIndex(k));
    }
    Ok(2405.0 + 5.0 * (k - MIN_CHANNEL_INDEX) as f64)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream for trial `trial_index`:
/// `splitmix64(master_seed ^ splitmix64(trial_index))`.
///
/// This mapping is part of the output contract; changing it changes every
/// CSV the tool produces.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(trial_index))
}

pub fn trial_rng(master_seed: u64, trial_index: u64) -> TrialRng {
    TrialRng::seed_from_u64(trial_seed(master_seed, trial_index))
}

fn uniform_in_box<R: Rng + ?Sized>(rng: &mut R, length: f64) -> Position {
    let x = rng.random_range(0.0..=length);
    let y = rng.random_range(-length / 2.0..=length / 2.0);
    Position::new(x, y)
}

/// Draws one trial's geometry, carrier and fading from `rng`.
///
/// `config` is assumed to be validated.
pub fn sample_positions<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> ScenarioSample {
    let length = config.distance_m;
    let k = rng.random_range(MIN_CHANNEL_INDEX..=MAX_CHANNEL_INDEX);
    let carrier_freq_mhz = channel_frequency(k).expect("index drawn from the valid range");

    let relay_positions: Vec<Position> = (0..RELAY_COUNT)
        .map(|_| uniform_in_box(rng, length))
        .collect();

    let (lo, hi) = config.interferer_count_range;
    let count = rng.random_range(lo..=hi);
    let interferers: Vec<Interferer> = (0..count)
        .map(|_| Interferer {
            position: uniform_in_box(rng, length),
            power_dbm: config.interferer_power_dbm,
        })
        .collect();

    let gain = |rng: &mut R| match config.fading {
        FadingModel::Rayleigh => draw_fading(rng),
        FadingModel::Unit => Complex64::new(1.0, 0.0),
    };

    let mut fading = BTreeMap::new();
    for (a, b) in TERMINAL_PAIRS {
        let h = gain(rng);
        fading.insert((a, b), h);
        fading.insert((b, a), h);
    }
    for i in 0..count {
        let tx = Node::Interferer(i as u8);
        for rx in RECEIVERS {
            fading.insert((tx, rx), gain(rng));
        }
    }

    ScenarioSample {
        channel_index: k as u8,
        carrier_freq_mhz,
        source_pos: Position::new(0.0, 0.0),
        destination_pos: Position::new(length, 0.0),
        relay_positions,
        interferers,
        fading,
    }
}

/// The sample of trial `trial_index` under `config`.
pub fn sample_trial(config: &ScenarioConfig, trial_index: u64) -> ScenarioSample {
    let mut rng = trial_rng(config.master_seed, trial_index);
    sample_positions(config, &mut rng)
}
