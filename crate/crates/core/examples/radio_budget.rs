//! Fronthaul datarates, burst framing and processing effort of one cell.

use xhaul_fair::radio::{
    datarate_split72, datarate_split73, effective_throughput, frames_per_burst, split_processing,
    total_processing_gops, BurstModel, RadioConfig, SplitOption,
};

fn main() -> xhaul_fair::Result<()> {
    let radio = RadioConfig::calibrated();
    let ul = datarate_split72(&radio)?;
    let dl = datarate_split73(&radio)?;
    println!("2x2 MIMO, 50 MHz, 16-QAM");
    println!("  uplink   (split 7.2): {:.3} Gbps", ul.gbps());
    println!("  downlink (split 7.3): {:.3} Gbps", dl.gbps());

    let bm = BurstModel::default();
    for (name, rate) in [("uplink", ul), ("downlink", dl)] {
        let frames = frames_per_burst(rate, &bm);
        let line = effective_throughput(frames, &bm);
        println!(
            "  {name}: {frames} frames per {:.2} us burst, {:.3} Gbps on the fibre",
            bm.burst_interval_s * 1e6,
            line.gbps()
        );
    }

    let total = total_processing_gops(&radio);
    println!("processing effort: {:.1} GOPS/TTI", total.0);
    for split in [SplitOption::split_7_2(), SplitOption::split_7_3()] {
        let (ru, ducu) = split_processing(&radio, &split);
        println!(
            "  split {}: RU {:.1}, DU/CU {:.1} GOPS/TTI",
            split.variant, ru.0, ducu.0
        );
    }
    Ok(())
}
