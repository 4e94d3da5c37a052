//! Spectral-efficiency models of the transmission strategies.
//!
//! All rates are in bits/s/Hz. Relays are half-duplex, so a one-way relayed
//! message occupies two slots and carries a factor of 1/2. Two-way relaying
//! completes an exchange in two slots; the unidirectional exchange
//! baselines need four.
//!
//! SNR arguments are linear and already include interference, i.e. they are
//! the SINRs produced by [`crate::propagation::LinkSet`].

use std::fmt;
use std::str::FromStr;

use crate::error::{check_snr, Error, Result};
use crate::propagation::LinkSet;
use crate::scenario::Node;

const S: Node = Node::Source;
const D: Node = Node::Destination;
const R1: Node = Node::Relay(0);
const R2: Node = Node::Relay(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyKind {
    Direct,
    AfSingle,
    DfSingle,
    AfBeamform2,
    DfBeamform2,
    TwoWayAf,
    TwoWayDf,
    DirectExchange,
    UniAfExchange,
    UniDfExchange,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 10] = [
        StrategyKind::Direct,
        StrategyKind::AfSingle,
        StrategyKind::DfSingle,
        StrategyKind::AfBeamform2,
        StrategyKind::DfBeamform2,
        StrategyKind::TwoWayAf,
        StrategyKind::TwoWayDf,
        StrategyKind::DirectExchange,
        StrategyKind::UniAfExchange,
        StrategyKind::UniDfExchange,
    ];

    /// Name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Direct => "direct",
            StrategyKind::AfSingle => "af_single",
            StrategyKind::DfSingle => "df_single",
            StrategyKind::AfBeamform2 => "af_beamform2",
            StrategyKind::DfBeamform2 => "df_beamform2",
            StrategyKind::TwoWayAf => "twoway_af",
            StrategyKind::TwoWayDf => "twoway_df",
            StrategyKind::DirectExchange => "direct_exchange",
            StrategyKind::UniAfExchange => "uni_af_exchange",
            StrategyKind::UniDfExchange => "uni_df_exchange",
        }
    }

    /// Number of relays the strategy uses.
    pub fn relays_used(self) -> usize {
        match self {
            StrategyKind::Direct | StrategyKind::DirectExchange => 0,
            StrategyKind::AfBeamform2 | StrategyKind::DfBeamform2 => 2,
            _ => 1,
        }
    }

    /// Whether the strategy exchanges messages in both directions.
    pub fn is_exchange(self) -> bool {
        matches!(
            self,
            StrategyKind::TwoWayAf
                | StrategyKind::TwoWayDf
                | StrategyKind::DirectExchange
                | StrategyKind::UniAfExchange
                | StrategyKind::UniDfExchange
        )
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|kind| kind.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub strategy: StrategyKind,
    pub spectral_efficiency: f64,
    /// `(A->B, B->A)` rates of exchange strategies.
    pub per_direction: Option<(f64, f64)>,
}

impl RateResult {
    fn one_way(strategy: StrategyKind, rate: f64) -> Self {
        Self {
            strategy,
            spectral_efficiency: rate,
            per_direction: None,
        }
    }

    fn exchange(strategy: StrategyKind, forward: f64, reverse: f64) -> Self {
        Self {
            strategy,
            spectral_efficiency: forward + reverse,
            per_direction: Some((forward, reverse)),
        }
    }
}

fn capacity(snr: f64) -> f64 {
    (1.0 + snr).log2()
}

pub fn rate_direct(snr_sd: f64) -> Result<f64> {
    Ok(capacity(check_snr("snr_sd", snr_sd)?))
}

/// End-to-end SNR of a variable-gain amplify-and-forward hop,
/// `g1 g2 / (g1 + g2 + 1)`.
pub fn af_equivalent_snr(g1: f64, g2: f64) -> f64 {
    g1 * g2 / (g1 + g2 + 1.0)
}

/// Full-slot capacity of the AF relay path combined with the direct path.
fn af_combined_capacity(snr_sd: f64, snr_sr: f64, snr_rd: f64) -> f64 {
    capacity(snr_sd + af_equivalent_snr(snr_sr, snr_rd))
}

/// Full-slot capacity of DF: the relay must decode, the destination
/// combines the direct and relayed copies.
fn df_combined_capacity(snr_sd: f64, snr_sr: f64, snr_rd: f64) -> f64 {
    capacity(snr_sr).min(capacity(snr_sd + snr_rd))
}

pub fn rate_af_single(snr_sd: f64, snr_sr: f64, snr_rd: f64) -> Result<f64> {
    check_snr("snr_sd", snr_sd)?;
    check_snr("snr_sr", snr_sr)?;
    check_snr("snr_rd", snr_rd)?;
    Ok(0.5 * af_combined_capacity(snr_sd, snr_sr, snr_rd))
}

pub fn rate_df_single(snr_sd: f64, snr_sr: f64, snr_rd: f64) -> Result<f64> {
    check_snr("snr_sd", snr_sd)?;
    check_snr("snr_sr", snr_sr)?;
    check_snr("snr_rd", snr_rd)?;
    Ok(0.5 * df_combined_capacity(snr_sd, snr_sr, snr_rd))
}

/// Two AF relays co-phased at the destination: per-path equivalent SNRs
/// add in amplitude.
pub fn rate_af_beamform2(
    snr_sd: f64,
    snr_sr1: f64,
    snr_r1d: f64,
    snr_sr2: f64,
    snr_r2d: f64,
) -> Result<f64> {
    check_snr("snr_sd", snr_sd)?;
    let g1 = af_equivalent_snr(
        check_snr("snr_sr1", snr_sr1)?,
        check_snr("snr_r1d", snr_r1d)?,
    );
    let g2 = af_equivalent_snr(
        check_snr("snr_sr2", snr_sr2)?,
        check_snr("snr_r2d", snr_r2d)?,
    );
    let coherent = (g1.sqrt() + g2.sqrt()).powi(2);
    Ok(0.5 * capacity(snr_sd + coherent))
}

/// Two DF relays transmitting co-phased; both have to decode the source.
pub fn rate_df_beamform2(
    snr_sd: f64,
    snr_sr1: f64,
    snr_r1d: f64,
    snr_sr2: f64,
    snr_r2d: f64,
) -> Result<f64> {
    check_snr("snr_sd", snr_sd)?;
    check_snr("snr_sr1", snr_sr1)?;
    check_snr("snr_r1d", snr_r1d)?;
    check_snr("snr_sr2", snr_sr2)?;
    check_snr("snr_r2d", snr_r2d)?;
    let coherent = (snr_r1d.sqrt() + snr_r2d.sqrt()).powi(2);
    let rate = capacity(snr_sr1)
        .min(capacity(snr_sr2))
        .min(capacity(snr_sd + coherent));
    Ok(0.5 * rate)
}

/// Link SNRs of a two-way exchange between end nodes A and B through one
/// relay. Uplinks are received at the relay, downlinks at the end nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWayLinks {
    pub uplink_a: f64,
    pub uplink_b: f64,
    pub downlink_a: f64,
    pub downlink_b: f64,
}

impl TwoWayLinks {
    /// Reciprocal links: each end node sees the same SNR in both directions.
    pub fn reciprocal(g_a: f64, g_b: f64) -> Self {
        Self {
            uplink_a: g_a,
            uplink_b: g_b,
            downlink_a: g_a,
            downlink_b: g_b,
        }
    }

    /// Two-way links of the source, destination and first relay in `links`.
    pub fn from_link_set(links: &LinkSet) -> Self {
        Self {
            uplink_a: links.sinr(S, R1),
            uplink_b: links.sinr(D, R1),
            downlink_a: links.sinr(R1, S),
            downlink_b: links.sinr(R1, D),
        }
    }

    fn validate(&self) -> Result<()> {
        check_snr("uplink_a", self.uplink_a)?;
        check_snr("uplink_b", self.uplink_b)?;
        check_snr("downlink_a", self.downlink_a)?;
        check_snr("downlink_b", self.downlink_b)?;
        Ok(())
    }

    /// SNRs at A and B after the relay's power-normalized retransmission of
    /// the superposition and self-signal subtraction.
    ///
    /// With relay gain normalizing `u_a + u_b + 1`, the residual at A is the
    /// signal from B (`d_a u_b`) against forwarded relay noise plus local
    /// noise (`d_a + u_a + u_b + 1`).
    pub fn af_snrs(&self) -> (f64, f64) {
        let total = self.uplink_a + self.uplink_b + 1.0;
        let at_a = self.downlink_a * self.uplink_b / (self.downlink_a + total);
        let at_b = self.downlink_b * self.uplink_a / (self.downlink_b + total);
        (at_a, at_b)
    }

    /// Per-stream rates of the relay's multiple-access slot under successive
    /// decoding, strongest stream first (A on ties). Returns `(R_A, R_B)`.
    pub fn sic_rates(&self) -> (f64, f64) {
        let (ua, ub) = (self.uplink_a, self.uplink_b);
        if ua >= ub {
            (capacity(ua / (1.0 + ub)), capacity(ub))
        } else {
            (capacity(ua), capacity(ub / (1.0 + ua)))
        }
    }
}

/// Reciprocal-channel two-way AF SNRs `(snr_at_A, snr_at_B)`:
/// `g_a g_b / (2 g_a + g_b + 1)` and `g_a g_b / (g_a + 2 g_b + 1)`.
pub fn twoway_af_snrs(g_a: f64, g_b: f64) -> (f64, f64) {
    TwoWayLinks::reciprocal(g_a, g_b).af_snrs()
}

pub fn rate_twoway_af(g_a: f64, g_b: f64) -> Result<RateResult> {
    rate_twoway_af_links(&TwoWayLinks::reciprocal(g_a, g_b))
}

pub fn rate_twoway_af_links(links: &TwoWayLinks) -> Result<RateResult> {
    links.validate()?;
    let (at_a, at_b) = links.af_snrs();
    Ok(RateResult::exchange(
        StrategyKind::TwoWayAf,
        0.5 * capacity(at_b),
        0.5 * capacity(at_a),
    ))
}

pub fn rate_twoway_df(g_a: f64, g_b: f64) -> Result<RateResult> {
    rate_twoway_df_links(&TwoWayLinks::reciprocal(g_a, g_b))
}

/// Two-way DF: successive decoding at the relay, then a network-coded
/// broadcast that each end node decodes over its own downlink.
pub fn rate_twoway_df_links(links: &TwoWayLinks) -> Result<RateResult> {
    links.validate()?;
    let (mac_a, mac_b) = links.sic_rates();
    let a_to_b = 0.5 * mac_a.min(capacity(links.downlink_b));
    let b_to_a = 0.5 * mac_b.min(capacity(links.downlink_a));
    Ok(RateResult::exchange(StrategyKind::TwoWayDf, a_to_b, b_to_a))
}

/// Four-slot (or two-slot for direct) exchange baselines.
pub fn rate_exchange_baseline(kind: StrategyKind, links: &LinkSet) -> Result<RateResult> {
    let sd = check_snr("snr_sd", links.sinr(S, D))?;
    let ds = check_snr("snr_ds", links.sinr(D, S))?;
    match kind {
        StrategyKind::DirectExchange => Ok(RateResult::exchange(
            kind,
            0.5 * capacity(sd),
            0.5 * capacity(ds),
        )),
        StrategyKind::UniAfExchange | StrategyKind::UniDfExchange => {
            let sr = check_snr("snr_sr", links.sinr(S, R1))?;
            let rd = check_snr("snr_rd", links.sinr(R1, D))?;
            let dr = check_snr("snr_dr", links.sinr(D, R1))?;
            let rs = check_snr("snr_rs", links.sinr(R1, S))?;
            let combined = if kind == StrategyKind::UniAfExchange {
                af_combined_capacity
            } else {
                df_combined_capacity
            };
            Ok(RateResult::exchange(
                kind,
                0.25 * combined(sd, sr, rd),
                0.25 * combined(ds, dr, rs),
            ))
        }
        other => Err(Error::NotExchangeBaseline(other.name())),
    }
}

/// Evaluates `kind` on one trial's links.
pub fn evaluate(kind: StrategyKind, links: &LinkSet) -> Result<RateResult> {
    let one_way = |rate: Result<f64>| rate.map(|r| RateResult::one_way(kind, r));
    match kind {
        StrategyKind::Direct => one_way(rate_direct(links.sinr(S, D))),
        StrategyKind::AfSingle => one_way(rate_af_single(
            links.sinr(S, D),
            links.sinr(S, R1),
            links.sinr(R1, D),
        )),
        StrategyKind::DfSingle => one_way(rate_df_single(
            links.sinr(S, D),
            links.sinr(S, R1),
            links.sinr(R1, D),
        )),
        StrategyKind::AfBeamform2 => one_way(rate_af_beamform2(
            links.sinr(S, D),
            links.sinr(S, R1),
            links.sinr(R1, D),
            links.sinr(S, R2),
            links.sinr(R2, D),
        )),
        StrategyKind::DfBeamform2 => one_way(rate_df_beamform2(
            links.sinr(S, D),
            links.sinr(S, R1),
            links.sinr(R1, D),
            links.sinr(S, R2),
            links.sinr(R2, D),
        )),
        StrategyKind::TwoWayAf => rate_twoway_af_links(&TwoWayLinks::from_link_set(links)),
        StrategyKind::TwoWayDf => rate_twoway_df_links(&TwoWayLinks::from_link_set(links)),
        StrategyKind::DirectExchange
        | StrategyKind::UniAfExchange
        | StrategyKind::UniDfExchange => rate_exchange_baseline(kind, links),
    }
}
