//! Scaling RU demands to a network load.

use crate::error::{Error, Result};
use crate::radio::{split_effort, total_processing_gops, GopsPerTti};
use crate::scenario::Scenario;

/// Aggregate uplink plus downlink demand of all RUs, in bit/s.
pub fn aggregate_demand_bps(sc: &Scenario) -> f64 {
    sc.rus.iter().map(|r| r.demand_ul_bps + r.demand_dl_bps).sum()
}

/// Demand of the whole area at `load_fraction` of the peak density.
pub fn target_demand_bps(sc: &Scenario, load_fraction: f64) -> f64 {
    load_fraction * sc.demand.peak_load_bps_per_km2 * sc.area.km2()
}

/// Regenerates every RU's throughput and processing demand so that the
/// area carries `load_fraction` of its peak load.
///
/// Each RU's full-load demand comes from the radio profile under its own
/// uplink and downlink split, weighted by `demand_weight`. One common factor
/// then scales all RUs so the uplink plus downlink total meets the target.
/// Processing effort scales by the same factor and is divided between the
/// RU and the DU/CU by each direction's split.
pub fn apply_load(sc: &Scenario, load_fraction: f64) -> Result<Scenario> {
    if !(load_fraction > 0.0 && load_fraction <= 1.0) {
        return Err(Error::Config(format!(
            "load fraction {load_fraction} must lie in (0, 1]"
        )));
    }
    let radio = &sc.demand.radio;
    radio.validate()?;
    let effort = total_processing_gops(radio);

    let mut full = Vec::with_capacity(sc.n_rus());
    for ru in &sc.rus {
        if !(ru.demand_weight > 0.0 && ru.demand_weight.is_finite()) {
            return Err(Error::Config(format!("RU {} needs a positive demand weight", ru.id)));
        }
        let ul = ru.uplink_split.datarate(radio)?.0;
        let dl = ru.downlink_split.datarate(radio)?.0;
        full.push((ul, dl));
    }
    let weighted: f64 = sc
        .rus
        .iter()
        .zip(&full)
        .map(|(ru, (ul, dl))| ru.demand_weight * (ul + dl))
        .sum();

    let mut out = sc.clone();
    out.load_fraction = load_fraction;
    if weighted == 0.0 {
        return Ok(out);
    }
    let scale = target_demand_bps(sc, load_fraction) / weighted;
    for (ru, (ul, dl)) in out.rus.iter_mut().zip(full) {
        let s = ru.demand_weight * scale;
        ru.demand_ul_bps = ul * s;
        ru.demand_dl_bps = dl * s;
        let (ru_ul, ducu_ul) = split_effort(GopsPerTti(effort.0 * s), &ru.uplink_split);
        let (ru_dl, ducu_dl) = split_effort(GopsPerTti(effort.0 * s), &ru.downlink_split);
        ru.ru_ul_gops_per_tti = ru_ul.0;
        ru.ducu_ul_gops_per_tti = ducu_ul.0;
        ru.ru_dl_gops_per_tti = ru_dl.0;
        ru.ducu_dl_gops_per_tti = ducu_dl.0;
        if ru.ru_ul_gops_per_tti > ru.ru_capacity_ul_gops_per_tti
            || ru.ru_dl_gops_per_tti > ru.ru_capacity_dl_gops_per_tti
        {
            return Err(Error::Config(format!(
                "RU {} cannot process its own share at load {load_fraction}",
                ru.id
            )));
        }
    }
    Ok(out)
}
