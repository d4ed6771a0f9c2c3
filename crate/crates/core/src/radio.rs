//! Radio-side traffic and compute model.
//!
//! Fronthaul datarates for the 7.2 and 7.3 intra-PHY splits, Ethernet burst
//! framing over the PON, and the RU/DU/CU processing effort of one cell.
//! Rates are [`BitsPerSecond`]; processing effort is [`GopsPerTti`]. The two
//! never mix without an explicit conversion.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bits per byte. The burst model converts between the two only here.
pub const BITS_PER_BYTE: f64 = 8.0;

/// A datarate in bits per second.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitsPerSecond(pub f64);

impl BitsPerSecond {
    pub fn gbps(self) -> f64 {
        self.0 / 1e9
    }

    pub fn from_gbps(gbps: f64) -> Self {
        Self(gbps * 1e9)
    }
}

impl fmt::Display for BitsPerSecond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} Gbps", self.gbps())
    }
}

/// Processing effort in giga-operations per transmission time interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GopsPerTti(pub f64);

impl GopsPerTti {
    /// Giga-operations per second when one TTI lasts `tti_s` seconds.
    pub fn to_gops(self, tti_s: f64) -> f64 {
        self.0 / tti_s
    }

    pub fn from_gops(gops: f64, tti_s: f64) -> Self {
        Self(gops * tti_s)
    }
}

impl fmt::Display for GopsPerTti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} GOPS/TTI", self.0)
    }
}

macro_rules! scalar_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                Self(self.0 + rhs.0)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                Self(self.0 - rhs.0)
            }
        }
        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, rhs: f64) -> $t {
                Self(self.0 * rhs)
            }
        }
    };
}

scalar_ops!(BitsPerSecond);
scalar_ops!(GopsPerTti);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitVariant {
    #[serde(rename = "7.2")]
    Split7_2,
    #[serde(rename = "7.3")]
    Split7_3,
}

impl SplitVariant {
    /// Share of the total RU/DU/CU effort executed on the RU itself.
    pub fn default_ru_fraction(self) -> f64 {
        match self {
            SplitVariant::Split7_2 => 0.40,
            SplitVariant::Split7_3 => 0.50,
        }
    }
}

impl fmt::Display for SplitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitVariant::Split7_2 => f.write_str("7.2"),
            SplitVariant::Split7_3 => f.write_str("7.3"),
        }
    }
}

/// A functional split together with the fraction of processing kept at the RU.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitOption {
    pub variant: SplitVariant,
    pub ru_processing_fraction: f64,
}

impl SplitOption {
    pub fn new(variant: SplitVariant) -> Self {
        Self {
            variant,
            ru_processing_fraction: variant.default_ru_fraction(),
        }
    }

    pub fn split_7_2() -> Self {
        Self::new(SplitVariant::Split7_2)
    }

    pub fn split_7_3() -> Self {
        Self::new(SplitVariant::Split7_3)
    }

    pub fn with_ru_fraction(mut self, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::Config(format!(
                "RU processing fraction must lie in (0, 1), got {fraction}"
            )));
        }
        self.ru_processing_fraction = fraction;
        Ok(self)
    }

    /// Fronthaul rate of this split for `cfg`.
    pub fn datarate(&self, cfg: &RadioConfig) -> Result<BitsPerSecond> {
        match self.variant {
            SplitVariant::Split7_2 => datarate_split72(cfg),
            SplitVariant::Split7_3 => datarate_split73(cfg),
        }
    }
}

/// Cell radio configuration. Field names carry their units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub antenna_ports: u32,
    pub spatial_layers: u32,
    pub resource_blocks: u32,
    pub subcarriers_per_rb: u32,
    pub symbols_per_subframe: u32,
    pub subframe_duration_s: f64,
    /// Maximum RB utilisation in `[0, 1]`.
    pub rb_utilization: f64,
    pub quantizer_bits: u32,
    /// Fronthaul transport overhead factor (>= 1).
    pub fronthaul_overhead: f64,
    /// Resource overhead removed by split 7.3, in `[0, 1)`.
    pub resource_overhead: f64,
    /// Constellation size, e.g. 16 for 16-QAM.
    pub modulation_order: u32,
    pub mimo_antennas: u32,
    pub modulation_bits: u32,
    pub coding_rate: f64,
}

impl RadioConfig {
    /// Parameter set that reproduces the reference cell: 2x2 MIMO, 2 layers,
    /// 50 MHz at 15 kHz sub-carrier spacing, MCS 16 and a 0.5 ms TTI.
    ///
    /// The quantizer width, utilisation, transport overhead and 7.3 resource
    /// overhead are not published for that cell; the values below are chosen
    /// so that split 7.2 gives 2.298 Gbps, split 7.3 gives 0.431 Gbps and the
    /// processing effort is 585.7 GOPS/TTI. 50 MHz is counted as 250 RBs
    /// (2.5x the 100 RBs of a 20 MHz carrier).
    pub fn calibrated() -> Self {
        Self {
            antenna_ports: 2,
            spatial_layers: 2,
            resource_blocks: 250,
            subcarriers_per_rb: 12,
            symbols_per_subframe: 14,
            subframe_duration_s: 0.5e-3,
            rb_utilization: 0.75,
            quantizer_bits: 8,
            fronthaul_overhead: 1.14,
            resource_overhead: 0.906_25,
            modulation_order: 16,
            mimo_antennas: 2,
            modulation_bits: 4,
            // 658/1024, the MCS 16 code rate of the 64-QAM table
            coding_rate: 0.6426,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("antenna_ports", self.antenna_ports),
            ("spatial_layers", self.spatial_layers),
            ("resource_blocks", self.resource_blocks),
            ("subcarriers_per_rb", self.subcarriers_per_rb),
            ("symbols_per_subframe", self.symbols_per_subframe),
            ("quantizer_bits", self.quantizer_bits),
            ("modulation_order", self.modulation_order),
            ("mimo_antennas", self.mimo_antennas),
            ("modulation_bits", self.modulation_bits),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be at least 1")));
        }
        if !self.modulation_order.is_power_of_two() {
            return Err(Error::Config(format!(
                "modulation order {} is not a power of two",
                self.modulation_order
            )));
        }
        check_subframe(self.subframe_duration_s)?;
        if !(0.0..=1.0).contains(&self.rb_utilization) {
            return Err(Error::Config("rb_utilization must lie in [0, 1]".into()));
        }
        if !(self.fronthaul_overhead >= 1.0) {
            return Err(Error::Config("fronthaul_overhead must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.resource_overhead) {
            return Err(Error::Config("resource_overhead must lie in [0, 1)".into()));
        }
        if !(self.coding_rate > 0.0 && self.coding_rate <= 1.0) {
            return Err(Error::Config("coding_rate must lie in (0, 1]".into()));
        }
        Ok(())
    }

    /// Resource elements per second across one antenna port or layer.
    fn resource_elements_per_s(&self) -> f64 {
        self.resource_blocks as f64
            * self.subcarriers_per_rb as f64
            * self.symbols_per_subframe as f64
            / self.subframe_duration_s
    }
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self::calibrated()
    }
}

fn check_subframe(t_sf: f64) -> Result<()> {
    if t_sf > 0.0 && t_sf.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "subframe duration must be positive and finite, got {t_sf}"
        )))
    }
}

/// Split 7.2 fronthaul rate: I/Q samples per antenna port.
pub fn datarate_split72(cfg: &RadioConfig) -> Result<BitsPerSecond> {
    check_subframe(cfg.subframe_duration_s)?;
    Ok(BitsPerSecond(
        cfg.antenna_ports as f64
            * cfg.resource_elements_per_s()
            * cfg.rb_utilization
            * cfg.quantizer_bits as f64
            * 2.0
            * cfg.fronthaul_overhead,
    ))
}

/// Split 7.3 fronthaul rate: per-layer symbols after precoding, layer mapping
/// and modulation move into the RU.
pub fn datarate_split73(cfg: &RadioConfig) -> Result<BitsPerSecond> {
    check_subframe(cfg.subframe_duration_s)?;
    if cfg.modulation_order < 2 {
        return Err(Error::Domain(format!(
            "modulation order must be >= 2, got {}",
            cfg.modulation_order
        )));
    }
    Ok(BitsPerSecond(
        cfg.spatial_layers as f64
            * cfg.resource_elements_per_s()
            * cfg.rb_utilization
            * (1.0 - cfg.resource_overhead)
            * cfg.quantizer_bits as f64
            * (cfg.modulation_order as f64).log2()
            * cfg.fronthaul_overhead,
    ))
}

/// Ethernet bursting of x-haul traffic over the PON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstModel {
    pub burst_interval_s: f64,
    pub payload_bytes: u32,
    pub frame_bytes: u32,
    pub tti_s: f64,
}

impl Default for BurstModel {
    fn default() -> Self {
        Self {
            burst_interval_s: 31.25e-6,
            payload_bytes: 1500,
            frame_bytes: 1542,
            tti_s: 0.5e-3,
        }
    }
}

impl BurstModel {
    pub fn validate(&self) -> Result<()> {
        if self.frame_bytes < self.payload_bytes {
            return Err(Error::Config("frame size is smaller than its payload".into()));
        }
        if self.payload_bytes == 0 {
            return Err(Error::Config("payload size must be positive".into()));
        }
        if !(self.burst_interval_s > 0.0 && self.burst_interval_s <= self.tti_s) {
            return Err(Error::Config(format!(
                "burst interval {} s must lie in (0, TTI = {} s]",
                self.burst_interval_s, self.tti_s
            )));
        }
        Ok(())
    }
}

/// Frames needed to carry one burst interval of traffic at `rate`.
///
/// Payload bytes are converted to bits once, here. Quotients within 1e-9
/// (relative) of an integer are snapped before the ceiling so that exact
/// products such as 2.304 Gbps x 0.5 ms do not gain a spurious frame from
/// rounding.
pub fn frames_per_burst(rate: BitsPerSecond, bm: &BurstModel) -> u64 {
    if rate.0 <= 0.0 {
        return 0;
    }
    let payload_bits = bm.payload_bytes as f64 * BITS_PER_BYTE;
    let frames = rate.0 * bm.burst_interval_s / payload_bits;
    let nearest = frames.round();
    if nearest > 0.0 && (frames - nearest).abs() <= 1e-9 * nearest {
        nearest as u64
    } else {
        frames.ceil() as u64
    }
}

/// Line rate actually consumed by `frames` full Ethernet frames per burst.
pub fn effective_throughput(frames: u64, bm: &BurstModel) -> BitsPerSecond {
    BitsPerSecond(frames as f64 * bm.frame_bytes as f64 * BITS_PER_BYTE / bm.burst_interval_s)
}

/// Total RU + DU + CU processing effort of one cell.
pub fn total_processing_gops(cfg: &RadioConfig) -> GopsPerTti {
    let n_ant = cfg.mimo_antennas as f64;
    let per_rb_group = 3.0 * n_ant
        + n_ant * n_ant
        + cfg.modulation_bits as f64 * cfg.coding_rate * cfg.spatial_layers as f64 / 3.0;
    GopsPerTti(per_rb_group * cfg.resource_blocks as f64 / 5.0)
}

/// Splits the total effort between the RU and the DU/CU pool.
///
/// The DU/CU part is computed as the remainder so the two always add back to
/// the total.
pub fn split_processing(cfg: &RadioConfig, split: &SplitOption) -> (GopsPerTti, GopsPerTti) {
    split_effort(total_processing_gops(cfg), split)
}

pub fn split_effort(total: GopsPerTti, split: &SplitOption) -> (GopsPerTti, GopsPerTti) {
    let ru = total * split.ru_processing_fraction;
    (ru, total - ru)
}
