//! PON layout: level-1 splitters placed by k-means over the RU positions, a
//! level-2 splitter at the area centre, and central offices hosting OLTs.
//!
//! Fibre lengths follow the splitter tree rather than straight lines between
//! endpoints. An RU reaches an Edge-OLT on its own level-1 splitter directly,
//! and one on another branch through the level-2 splitter when multi-branch
//! virtual PONs are enabled. Every RU reaches every central office.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const KMEANS_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x_km: f64,
    pub y_km: f64,
}

impl Point2D {
    pub const fn new(x_km: f64, y_km: f64) -> Self {
        Self { x_km, y_km }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x_km - other.x_km).hypot(self.y_km - other.y_km)
    }

    fn distance_sq(&self, other: &Point2D) -> f64 {
        let dx = self.x_km - other.x_km;
        let dy = self.y_km - other.y_km;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.x_km.is_finite() && self.y_km.is_finite()
    }
}

/// Rectangular deployment area anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width_km: f64,
    pub height_km: f64,
}

impl Area {
    pub fn square(side_km: f64) -> Self {
        Self {
            width_km: side_km,
            height_km: side_km,
        }
    }

    pub fn center(&self) -> Point2D {
        Point2D::new(self.width_km / 2.0, self.height_km / 2.0)
    }

    pub fn km2(&self) -> f64 {
        self.width_km * self.height_km
    }

    pub fn contains(&self, p: &Point2D) -> bool {
        p.is_finite()
            && (0.0..=self.width_km).contains(&p.x_km)
            && (0.0..=self.height_km).contains(&p.y_km)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level1Splitter {
    pub position: Point2D,
    /// Indices of the RUs fed by this splitter.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitterTree {
    pub level1: Vec<Level1Splitter>,
    pub level2: Point2D,
    #[serde(default)]
    pub central_offices: Vec<Point2D>,
}

impl SplitterTree {
    pub fn with_central_offices(mut self, cos: Vec<Point2D>) -> Self {
        self.central_offices = cos;
        self
    }

    /// Level-1 splitter of each RU, or an error if an RU is fed by zero or
    /// several splitters.
    pub fn ru_splitters(&self, n_rus: usize) -> Result<Vec<usize>> {
        let mut owner = vec![None; n_rus];
        for (s, l1) in self.level1.iter().enumerate() {
            for &r in &l1.members {
                let slot = owner.get_mut(r).ok_or_else(|| {
                    Error::Topology(format!("splitter {s} lists unknown RU {r}"))
                })?;
                if slot.replace(s).is_some() {
                    return Err(Error::Topology(format!("RU {r} belongs to two splitters")));
                }
            }
        }
        owner
            .into_iter()
            .enumerate()
            .map(|(r, s)| s.ok_or_else(|| Error::Topology(format!("RU {r} has no splitter"))))
            .collect()
    }

    /// Index of the level-1 splitter closest to `p` (lowest index on ties).
    pub fn nearest_level1(&self, p: &Point2D) -> Option<usize> {
        nearest(p, self.level1.iter().map(|s| &s.position))
    }

    pub fn nearest_central_office(&self, p: &Point2D) -> Option<usize> {
        nearest(p, self.central_offices.iter())
    }

    /// Sum of squared distances from each RU to its splitter.
    pub fn within_cluster_ss(&self, ru_positions: &[Point2D]) -> f64 {
        self.level1
            .iter()
            .flat_map(|s| s.members.iter().map(move |&r| ru_positions[r].distance_sq(&s.position)))
            .sum()
    }
}

fn nearest<'a>(p: &Point2D, candidates: impl Iterator<Item = &'a Point2D>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.enumerate() {
        let d = p.distance_sq(c);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Places `k` level-1 splitters with seeded k-means over the RU positions.
///
/// Initial centroids are `k` distinct RU positions drawn with the seed. Each
/// splitter ends at the centroid of its members; a cluster that empties keeps
/// its previous position. The level-2 splitter sits at the area centre.
pub fn place_splitters(
    ru_positions: &[Point2D],
    k: usize,
    seed: u64,
    area: &Area,
) -> Result<SplitterTree> {
    if k == 0 {
        return Err(Error::Config("at least one level-1 splitter is required".into()));
    }
    if k > ru_positions.len() {
        return Err(Error::Config(format!(
            "{k} splitters requested for {} RUs",
            ru_positions.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Point2D> = index::sample(&mut rng, ru_positions.len(), k)
        .into_iter()
        .map(|i| ru_positions[i])
        .collect();

    let mut labels = vec![usize::MAX; ru_positions.len()];
    for _ in 0..KMEANS_MAX_ITERATIONS {
        let mut changed = false;
        for (p, label) in ru_positions.iter().zip(labels.iter_mut()) {
            let c = nearest(p, centroids.iter()).expect("k >= 1");
            if *label != c {
                *label = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        centroids = recentre(ru_positions, &labels, &centroids);
    }

    let mut level1: Vec<Level1Splitter> = centroids
        .into_iter()
        .map(|position| Level1Splitter {
            position,
            members: Vec::new(),
        })
        .collect();
    for (r, &c) in labels.iter().enumerate() {
        level1[c].members.push(r);
    }

    Ok(SplitterTree {
        level1,
        level2: area.center(),
        central_offices: Vec::new(),
    })
}

fn recentre(points: &[Point2D], labels: &[usize], previous: &[Point2D]) -> Vec<Point2D> {
    let mut sums = vec![(0.0, 0.0, 0usize); previous.len()];
    for (p, &c) in points.iter().zip(labels) {
        sums[c].0 += p.x_km;
        sums[c].1 += p.y_km;
        sums[c].2 += 1;
    }
    sums.iter()
        .zip(previous)
        .map(|(&(sx, sy, n), prev)| {
            if n == 0 {
                *prev
            } else {
                Point2D::new(sx / n as f64, sy / n as f64)
            }
        })
        .collect()
}

/// Where an endpoint hangs off the splitter tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    Level1(usize),
    CentralOffice(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub position: Point2D,
    pub attachment: Attachment,
}

impl Endpoint {
    pub fn on_splitter(position: Point2D, splitter: usize) -> Self {
        Self {
            position,
            attachment: Attachment::Level1(splitter),
        }
    }

    pub fn at_office(position: Point2D, office: usize) -> Self {
        Self {
            position,
            attachment: Attachment::CentralOffice(office),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Reflected at the shared level-1 splitter.
    EastWestL1,
    /// Up through both level-1 splitters and the level-2 splitter.
    EastWestL1L2,
    /// Up the tree to an OLT at a central office.
    NorthSouth,
}

/// Fibre length in km between two endpoints along `route`.
pub fn fiber_distance(a: &Endpoint, b: &Endpoint, tree: &SplitterTree, route: Route) -> Result<f64> {
    let l1 = |i: usize| {
        tree.level1
            .get(i)
            .map(|s| s.position)
            .ok_or_else(|| Error::Topology(format!("unknown level-1 splitter {i}")))
    };
    let Attachment::Level1(sa) = a.attachment else {
        return Err(Error::Topology("route must start at a splitter-fed endpoint".into()));
    };
    let pa = l1(sa)?;
    match (route, b.attachment) {
        (Route::EastWestL1, Attachment::Level1(sb)) => {
            if sa != sb {
                return Err(Error::Topology(format!(
                    "endpoints sit on splitters {sa} and {sb}; no shared level-1 splitter"
                )));
            }
            Ok(a.position.distance(&pa) + pa.distance(&b.position))
        }
        (Route::EastWestL1L2, Attachment::Level1(sb)) => {
            let pb = l1(sb)?;
            Ok(a.position.distance(&pa)
                + pa.distance(&tree.level2)
                + tree.level2.distance(&pb)
                + pb.distance(&b.position))
        }
        (Route::NorthSouth, Attachment::CentralOffice(c)) => {
            let co = tree
                .central_offices
                .get(c)
                .ok_or_else(|| Error::Topology(format!("unknown central office {c}")))?;
            Ok(a.position.distance(&pa) + pa.distance(&tree.level2) + tree.level2.distance(co))
        }
        (route, att) => Err(Error::Topology(format!(
            "route {route:?} cannot end at {att:?}"
        ))),
    }
}

/// Virtual-PON reachability flags and fibre distances.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Reachability {
    /// `z_edge[r][e]`
    pub z_edge: Vec<Vec<bool>>,
    pub z_ocloud: Vec<Vec<bool>>,
    /// Km along the shortest admissible route.
    pub d_edge: Vec<Vec<f64>>,
    pub d_ocloud: Vec<Vec<f64>>,
}

/// Builds reachability for RUs, Edge-OLTs (attached to their nearest level-1
/// splitter) and O-Clouds (attached to their nearest central office).
///
/// Unreachable edge pairs still carry their two-level route length in
/// `d_edge`; only `z_edge` marks them unusable.
pub fn compute_reachability(
    tree: &SplitterTree,
    ru_positions: &[Point2D],
    edge_positions: &[Point2D],
    ocloud_positions: &[Point2D],
    multi_branch: bool,
) -> Result<Reachability> {
    let ru_split = tree.ru_splitters(ru_positions.len())?;
    let edges: Vec<Endpoint> = edge_positions
        .iter()
        .map(|p| {
            tree.nearest_level1(p)
                .map(|s| Endpoint::on_splitter(*p, s))
                .ok_or_else(|| Error::Topology("tree has no level-1 splitter".into()))
        })
        .collect::<Result<_>>()?;
    let oclouds: Vec<Endpoint> = ocloud_positions
        .iter()
        .map(|p| {
            tree.nearest_central_office(p)
                .map(|c| Endpoint::at_office(*p, c))
                .ok_or_else(|| Error::Topology("tree has no central office".into()))
        })
        .collect::<Result<_>>()?;

    let mut reach = Reachability::default();
    for (r, pos) in ru_positions.iter().enumerate() {
        let ru = Endpoint::on_splitter(*pos, ru_split[r]);
        let mut z_row = Vec::with_capacity(edges.len());
        let mut d_row = Vec::with_capacity(edges.len());
        for edge in &edges {
            let same_branch = edge.attachment == ru.attachment;
            let (route, ok) = if same_branch {
                (Route::EastWestL1, true)
            } else {
                (Route::EastWestL1L2, multi_branch)
            };
            d_row.push(fiber_distance(&ru, edge, tree, route)?);
            z_row.push(ok);
        }
        reach.z_edge.push(z_row);
        reach.d_edge.push(d_row);

        let mut d_row = Vec::with_capacity(oclouds.len());
        for oc in &oclouds {
            d_row.push(fiber_distance(&ru, oc, tree, Route::NorthSouth)?);
        }
        reach.z_ocloud.push(vec![true; oclouds.len()]);
        reach.d_ocloud.push(d_row);
    }
    Ok(reach)
}
