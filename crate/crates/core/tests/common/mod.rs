#![allow(dead_code)]

pub mod double_entry;

use xhaul_fair::harness::{simple_cloud, simple_ru, ScenarioBuilder};
use xhaul_fair::topology::{Area, Point2D};
use xhaul_fair::Scenario;

pub fn pt(x: f64, y: f64) -> Point2D {
    Point2D::new(x, y)
}

/// Two identical RUs at equal distance from two identical O-Clouds.
pub fn symmetric_pair(link_bps: f64, compute: f64) -> Scenario {
    ScenarioBuilder::new(Area::square(2.0))
        .ru(simple_ru("a", 1, pt(1.0, 0.9), (2e9, 0.4e9), (300.0, 300.0)))
        .ru(simple_ru("b", 2, pt(1.0, 1.1), (2e9, 0.4e9), (300.0, 300.0)))
        .ocloud(simple_cloud("left", None, pt(0.0, 1.0), link_bps, compute))
        .ocloud(simple_cloud("right", None, pt(2.0, 1.0), link_bps, compute))
        .build()
        .unwrap()
}
