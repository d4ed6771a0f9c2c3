//! Shares, latencies and costs of a hand-built three-RU instance.

use xhaul_fair::alloc::{
    check_feasible, cost_vector, downlink_latency, gops_shares, processing_latency_ok,
    throughput_shares, uplink_latency,
};
use xhaul_fair::harness::{simple_cloud, simple_ru, ScenarioBuilder};
use xhaul_fair::topology::{Area, Point2D};
use xhaul_fair::{Assignment, Site};

fn main() -> xhaul_fair::Result<()> {
    let sc = ScenarioBuilder::new(Area::square(2.0))
        .ru(simple_ru("big", 1, Point2D::new(0.5, 0.5), (2e9, 0.4e9), (300.0, 250.0)))
        .ru(simple_ru("small", 2, Point2D::new(0.6, 0.4), (0.5e9, 0.1e9), (75.0, 60.0)))
        .ru(simple_ru("far", 2, Point2D::new(1.5, 1.5), (1e9, 0.2e9), (150.0, 120.0)))
        .edge(simple_cloud("edge-a", Some(1), Point2D::new(0.5, 0.5), 25e9, 2000.0))
        .ocloud(simple_cloud("ocloud", None, Point2D::new(2.0, 2.0), 100e9, 5000.0))
        .build()?;

    // big and small share the edge, far goes north-south
    let a = Assignment::from_sites(&sc, &[Some(Site::Edge(0)), Some(Site::Edge(0)), Some(Site::OCloud(0))]);
    let tput = throughput_shares(&a, &sc);
    let gops = gops_shares(&a, &sc);
    let costs = cost_vector(&a, &sc);
    for (r, ru) in sc.rus.iter().enumerate() {
        let site = a.site_of(r).expect("assigned");
        println!(
            "{:<6} -> {:<7} {:6.2} Gbps {:7.1} GOPS/TTI  cost {:8.2} {}",
            ru.id,
            sc.cloud(site).id,
            tput.get(r, site) / 1e9,
            gops.get(r, site),
            costs[r],
            sc.cost.currency
        );
        let p = processing_latency_ok(r, &a, &sc);
        println!(
            "       UL {:6.1} us, DL {:6.1} us, processing {:.3}/{:.3} TTI",
            uplink_latency(r, &a, &sc)? * 1e6,
            downlink_latency(r, &a, &sc)? * 1e6,
            p.uplink_load.max(p.downlink_load),
            p.budget
        );
    }
    for site in sc.sites() {
        println!(
            "{:<7} leased {:6.2} of {:6.2} Gbps uplink+downlink",
            sc.cloud(site).id,
            tput.column_total(site) / 1e9,
            (sc.cloud(site).link_ul_bps + sc.cloud(site).link_dl_bps) / 1e9
        );
    }
    println!("feasible: {}", check_feasible(&a, &sc).feasible);
    Ok(())
}
