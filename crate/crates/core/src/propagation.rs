//! Link budgets: ITU indoor path loss, Rayleigh fading and SINR.
//!
//! Interference from co-channel users is treated as extra Gaussian noise at
//! every receiver. Each interferer reaches each receiver through its own
//! path loss and independent fading gain.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scenario::{Node, ScenarioConfig, ScenarioSample, RECEIVERS, TERMINAL_PAIRS};

/// Distances below this are clamped before evaluating the path loss.
pub const MIN_DISTANCE_M: f64 = 1.0;

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// ITU indoor path loss with no floor-penetration term:
/// `20 log10(f_MHz) + N log10(d_m) - 28`.
pub fn path_loss_db(freq_mhz: f64, distance_m: f64, coeff_db_per_decade: f64) -> Result<f64> {
    if !(freq_mhz.is_finite() && freq_mhz > 0.0) {
        return Err(Error::Domain {
            name: "freq_mhz",
            expected: "finite and > 0",
            value: freq_mhz,
        });
    }
    if !(coeff_db_per_decade.is_finite() && coeff_db_per_decade > 0.0) {
        return Err(Error::Domain {
            name: "path_loss_coeff_db_per_decade",
            expected: "finite and > 0",
            value: coeff_db_per_decade,
        });
    }
    let d = distance_m.max(MIN_DISTANCE_M);
    Ok(20.0 * freq_mhz.log10() + coeff_db_per_decade * d.log10() - 28.0)
}

/// Circularly-symmetric complex Gaussian gain with `E|h|^2 = 1`.
pub fn draw_fading<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Power budget of a single transmitter-receiver path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub path_loss_db: f64,
    pub antenna_gain_total_db: f64,
    pub fading_gain: Complex64,
}

impl LinkBudget {
    /// Received power before fading.
    pub fn mean_rx_power_dbm(&self) -> f64 {
        self.tx_power_dbm + self.antenna_gain_total_db - self.path_loss_db
    }

    pub fn rx_power_dbm(&self) -> f64 {
        self.mean_rx_power_dbm() + 20.0 * self.fading_gain.norm().log10()
    }

    pub fn rx_power_mw(&self) -> f64 {
        dbm_to_mw(self.mean_rx_power_dbm()) * self.fading_gain.norm_sqr()
    }
}

/// A directed link between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub tx: Node,
    pub rx: Node,
}

impl Link {
    pub const fn new(tx: Node, rx: Node) -> Self {
        Self { tx, rx }
    }

    /// Whether this is the source-destination link in either direction.
    pub fn is_direct(&self) -> bool {
        matches!(
            (self.tx, self.rx),
            (Node::Source, Node::Destination) | (Node::Destination, Node::Source)
        )
    }
}

/// Linear power components seen at the receiver of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPower {
    pub signal_mw: f64,
    pub interference_mw: f64,
    pub noise_mw: f64,
}

impl LinkPower {
    pub fn sinr(&self) -> f64 {
        self.signal_mw / (self.interference_mw + self.noise_mw)
    }
}

fn budget(
    tx: Node,
    rx: Node,
    power_dbm: f64,
    sample: &ScenarioSample,
    config: &ScenarioConfig,
) -> LinkBudget {
    let tx_pos = sample
        .position(tx)
        .unwrap_or_else(|| panic!("sample has no position for {tx}"));
    let rx_pos = sample
        .position(rx)
        .unwrap_or_else(|| panic!("sample has no position for {rx}"));
    let fading_gain = sample
        .fading_gain(tx, rx)
        .unwrap_or_else(|| panic!("sample has no fading gain for {tx}->{rx}"));
    let path_loss_db = path_loss_db(
        sample.carrier_freq_mhz,
        tx_pos.distance_to(&rx_pos),
        config.path_loss_coeff_db_per_decade,
    )
    .expect("validated carrier and coefficient");
    LinkBudget {
        tx_power_dbm: power_dbm,
        path_loss_db,
        antenna_gain_total_db: 2.0 * config.antenna_gain_db,
        fading_gain,
    }
}

/// Budget of the wanted signal on `tx -> rx`.
///
/// Panics if the sample lacks either node or the fading gain of the link.
pub fn link_budget(
    tx: Node,
    rx: Node,
    sample: &ScenarioSample,
    config: &ScenarioConfig,
) -> LinkBudget {
    budget(tx, rx, config.tx_power_dbm, sample, config)
}

/// Aggregate interference power at `rx` from every interferer in the sample.
pub fn interference_mw(rx: Node, sample: &ScenarioSample, config: &ScenarioConfig) -> f64 {
    sample
        .interferers
        .iter()
        .enumerate()
        .map(|(i, interferer)| {
            budget(
                Node::Interferer(i as u8),
                rx,
                interferer.power_dbm,
                sample,
                config,
            )
            .rx_power_mw()
        })
        .sum()
}

fn power_with_interference(
    tx: Node,
    rx: Node,
    interference_mw: f64,
    sample: &ScenarioSample,
    config: &ScenarioConfig,
) -> LinkPower {
    assert_ne!(tx, rx, "link endpoints must differ");
    let link = Link::new(tx, rx);
    let signal_mw = if config.direct_blocked && link.is_direct() {
        0.0
    } else {
        link_budget(tx, rx, sample, config).rx_power_mw()
    };
    LinkPower {
        signal_mw,
        interference_mw,
        noise_mw: dbm_to_mw(config.noise_power_dbm),
    }
}

pub fn link_power(
    tx: Node,
    rx: Node,
    sample: &ScenarioSample,
    config: &ScenarioConfig,
) -> LinkPower {
    let interference = interference_mw(rx, sample, config);
    power_with_interference(tx, rx, interference, sample, config)
}

/// Linear SINR of `tx -> rx`. A blocked direct link has SINR 0.
pub fn link_sinr(tx: Node, rx: Node, sample: &ScenarioSample, config: &ScenarioConfig) -> f64 {
    link_power(tx, rx, sample, config).sinr()
}

/// Power components of every directed terminal link in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSet {
    links: BTreeMap<Link, LinkPower>,
}

impl LinkSet {
    /// Evaluates both directions of every pair in [`TERMINAL_PAIRS`].
    pub fn compute(sample: &ScenarioSample, config: &ScenarioConfig) -> Self {
        let interference: BTreeMap<Node, f64> = RECEIVERS
            .iter()
            .map(|&rx| (rx, interference_mw(rx, sample, config)))
            .collect();
        let mut links = BTreeMap::new();
        for (a, b) in TERMINAL_PAIRS {
            for (tx, rx) in [(a, b), (b, a)] {
                let power = power_with_interference(tx, rx, interference[&rx], sample, config);
                links.insert(Link::new(tx, rx), power);
            }
        }
        Self { links }
    }

    /// Builds a link set from explicit SINRs, with unit noise and no
    /// interference on every link.
    pub fn from_sinrs<I>(sinrs: I) -> Self
    where
        I: IntoIterator<Item = (Link, f64)>,
    {
        let links = sinrs
            .into_iter()
            .map(|(link, sinr)| {
                let power = LinkPower {
                    signal_mw: sinr,
                    interference_mw: 0.0,
                    noise_mw: 1.0,
                };
                (link, power)
            })
            .collect();
        Self { links }
    }

    pub fn get(&self, tx: Node, rx: Node) -> Option<&LinkPower> {
        self.links.get(&Link::new(tx, rx))
    }

    /// SINR of `tx -> rx`; panics if the link was not computed.
    pub fn sinr(&self, tx: Node, rx: Node) -> f64 {
        self.get(tx, rx)
            .unwrap_or_else(|| panic!("link set has no entry for {tx}->{rx}"))
            .sinr()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Link, &LinkPower)> {
        self.links.iter()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}
