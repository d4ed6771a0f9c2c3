//! Level-1 splitter placement and virtual-PON reachability for a generated
//! deployment, with and without multi-branch East-West routing.

use xhaul_fair::harness::build_paper_scenario;
use xhaul_fair::topology::compute_reachability;

fn main() -> xhaul_fair::Result<()> {
    let sc = build_paper_scenario(7)?;
    let tree = &sc.topology.tree;
    for (i, s) in tree.level1.iter().enumerate() {
        println!(
            "splitter {i} at ({:.2}, {:.2}) km feeds {} RUs",
            s.position.x_km,
            s.position.y_km,
            s.members.len()
        );
    }
    println!("level-2 splitter at ({:.2}, {:.2}) km", tree.level2.x_km, tree.level2.y_km);

    let rus: Vec<_> = sc.rus.iter().map(|r| r.position).collect();
    let edges: Vec<_> = sc.edges.iter().map(|c| c.position).collect();
    let oclouds: Vec<_> = sc.oclouds.iter().map(|c| c.position).collect();
    for multi in [false, true] {
        let reach = compute_reachability(tree, &rus, &edges, &oclouds, multi)?;
        let pairs: usize = reach.z_edge.iter().map(|row| row.iter().filter(|z| **z).count()).sum();
        println!(
            "multi-branch {multi}: {pairs} of {} RU/edge pairs reachable",
            rus.len() * edges.len()
        );
    }

    let r = 0;
    println!("fibre distances of {}:", sc.rus[r].id);
    for site in sc.sites() {
        println!(
            "  {:<10} {:5.2} km{}",
            sc.cloud(site).id,
            sc.distance_km(r, site),
            if sc.reachable(r, site) { "" } else { "  (unreachable)" }
        );
    }
    Ok(())
}
