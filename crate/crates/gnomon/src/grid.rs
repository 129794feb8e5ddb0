//! Gnomonic cubed-sphere lattices (equidistant, equiangular, equi-edge) on
//! primary and offset staggerings, with per-point cell metrics
//! (Δx, Δy, χ, α, sin α, ΔA) and panel summaries.

use crate::sphere::{arc_distance, interior_angle, quad_area, CartPoint, SphereError};
use ndarray::Array2;
use thiserror::Error;

pub const NUM_PANELS: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("Ne must be at least 2, got {0}")]
    BadNe(usize),
    #[error("index ({i}, {j}) out of range for panel {panel}")]
    IndexOutOfRange { panel: usize, i: usize, j: usize },
    #[error("panel id must be 0..6, got {0}")]
    BadPanel(usize),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error("unknown mapping {0:?}; expected equidistant, equiangular or equi-edge")]
    UnknownMapping(String),
    #[error("unknown staggering {0:?}; expected primary or offset")]
    UnknownStaggering(String),
}

/// The three gnomonic cubed-sphere mappings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MappingKind {
    Equidistant,
    Equiangular,
    EquiEdge,
}

impl MappingKind {
    pub const ALL: [MappingKind; 3] = [
        MappingKind::Equidistant,
        MappingKind::Equiangular,
        MappingKind::EquiEdge,
    ];

    /// Largest reference angle θ_max of the mapping.
    pub fn theta_max(self) -> f64 {
        match self {
            MappingKind::Equidistant => 1.0,
            MappingKind::Equiangular => std::f64::consts::FRAC_PI_4,
            MappingKind::EquiEdge => (1.0 / 3f64.sqrt()).asin(),
        }
    }

    /// Mapping rule β(θ); β(θ_max) = 1 for all three kinds.
    pub fn beta(self, theta: f64) -> f64 {
        match self {
            MappingKind::Equidistant => theta,
            MappingKind::Equiangular => theta.tan(),
            MappingKind::EquiEdge => 2f64.sqrt() * theta.tan(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MappingKind::Equidistant => "equidistant",
            MappingKind::Equiangular => "equiangular",
            MappingKind::EquiEdge => "equi-edge",
        }
    }

    pub fn parse(s: &str) -> Result<Self, GridError> {
        match s.to_ascii_lowercase().as_str() {
            "equidistant" => Ok(MappingKind::Equidistant),
            "equiangular" => Ok(MappingKind::Equiangular),
            "equi-edge" | "equiedge" => Ok(MappingKind::EquiEdge),
            _ => Err(GridError::UnknownMapping(s.to_string())),
        }
    }
}

/// Grid staggering: `Primary` points are cell centres (Ne×Ne per panel),
/// `Offset` points are the primary grid's vertices ((Ne+1)×(Ne+1) per panel).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Staggering {
    Primary,
    Offset,
}

impl Staggering {
    pub fn name(self) -> &'static str {
        match self {
            Staggering::Primary => "primary",
            Staggering::Offset => "offset",
        }
    }

    pub fn parse(s: &str) -> Result<Self, GridError> {
        match s.to_ascii_lowercase().as_str() {
            "primary" => Ok(Staggering::Primary),
            "offset" => Ok(Staggering::Offset),
            _ => Err(GridError::UnknownStaggering(s.to_string())),
        }
    }

    /// Lattice side length for a panel of Ne cells.
    pub fn side(self, ne: usize) -> usize {
        match self {
            Staggering::Primary => ne,
            Staggering::Offset => ne + 1,
        }
    }
}

/// Mapping, resolution and sphere radius defining one cubed-sphere grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub mapping: MappingKind,
    pub ne: usize,
    pub r: f64,
}

impl GridSpec {
    pub fn new(mapping: MappingKind, ne: usize, r: f64) -> Result<Self, GridError> {
        if ne < 2 {
            return Err(GridError::BadNe(ne));
        }
        Ok(Self { mapping, ne, r })
    }

    pub fn delta_theta(&self) -> f64 {
        2.0 * self.mapping.theta_max() / self.ne as f64
    }
}

/// Reference angles of the staggering's lattice: cell-centre midpoints for
/// `Primary`, vertices (with exact ±θ_max endpoints) for `Offset`.
pub fn reference_angles(spec: &GridSpec, stagger: Staggering) -> Vec<f64> {
    let tm = spec.mapping.theta_max();
    let dth = spec.delta_theta();
    match stagger {
        Staggering::Primary => (0..spec.ne)
            .map(|i| -tm + (i as f64 + 0.5) * dth)
            .collect(),
        Staggering::Offset => {
            let mut v: Vec<f64> = (0..=spec.ne).map(|i| -tm + i as f64 * dth).collect();
            v[0] = -tm;
            *v.last_mut().unwrap() = tm;
            v
        }
    }
}

/// Isometry carrying panel 0 onto panel `p`.
fn panel_rotation(p: usize, v: CartPoint) -> CartPoint {
    match p {
        0 => v,
        1 => CartPoint::new(-v.y, v.x, v.z),
        2 => CartPoint::new(-v.x, -v.y, v.z),
        3 => CartPoint::new(v.y, -v.x, v.z),
        4 => CartPoint::new(-v.z, v.y, v.x),
        5 => CartPoint::new(v.z, v.y, -v.x),
        _ => unreachable!("panel id out of range"),
    }
}

/// Gnomonic projection of panel-local reference angles onto the sphere.
pub fn panel_point(spec: &GridSpec, panel: usize, theta_x: f64, theta_y: f64) -> CartPoint {
    debug_assert!(panel < NUM_PANELS);
    let a = spec.r / 3f64.sqrt();
    let xi = a * spec.mapping.beta(theta_x);
    let eta = a * spec.mapping.beta(theta_y);
    let p = panel_rotation(panel, CartPoint::new(a, xi, eta));
    p.to_radius(spec.r).expect("projection of nonzero vector")
}

/// The six-panel cubed-sphere lattice: primary vertices and cell centres for
/// every panel, plus exact cross-panel adjacency for boundary neighbours.
#[derive(Debug, Clone)]
pub struct PanelGrid {
    pub spec: GridSpec,
    verts: Vec<Array2<CartPoint>>,
    centers: Vec<Array2<CartPoint>>,
}

impl PanelGrid {
    pub fn build(spec: GridSpec) -> Self {
        let tv = reference_angles(&spec, Staggering::Offset);
        let tc = reference_angles(&spec, Staggering::Primary);
        let nv = spec.ne + 1;
        let nc = spec.ne;
        let mut verts = Vec::with_capacity(NUM_PANELS);
        let mut centers = Vec::with_capacity(NUM_PANELS);
        for p in 0..NUM_PANELS {
            verts.push(Array2::from_shape_fn((nv, nv), |(i, j)| {
                panel_point(&spec, p, tv[i], tv[j])
            }));
            centers.push(Array2::from_shape_fn((nc, nc), |(i, j)| {
                panel_point(&spec, p, tc[i], tc[j])
            }));
        }
        Self { spec, verts, centers }
    }

    pub fn ne(&self) -> usize {
        self.spec.ne
    }

    /// Primary-grid vertex (= offset cell centre) at lattice index (i, j).
    pub fn vertex(&self, panel: usize, i: usize, j: usize) -> CartPoint {
        self.verts[panel][(i, j)]
    }

    /// Primary cell centre at lattice index (i, j).
    pub fn center(&self, panel: usize, i: usize, j: usize) -> CartPoint {
        self.centers[panel][(i, j)]
    }

    /// Primary cell centre at a possibly out-of-range index, resolved exactly
    /// across panel edges by adjacency (no interpolation). At most one index
    /// may be out of range, by one cell.
    pub fn ghost_center(&self, panel: usize, ci: isize, cj: isize) -> CartPoint {
        let ne = self.spec.ne as isize;
        let in_x = (0..ne).contains(&ci);
        let in_y = (0..ne).contains(&cj);
        if in_x && in_y {
            return self.centers[panel][(ci as usize, cj as usize)];
        }
        assert!(
            in_x || in_y,
            "ghost centres are defined one cell beyond a single edge"
        );
        let tc = reference_angles(&self.spec, Staggering::Primary);
        // Resolve in panel-0 coordinates, then carry to `panel` by its isometry.
        let g0 = if ci == -1 {
            panel_point(&self.spec, 3, tc[(ne - 1) as usize], tc[cj as usize])
        } else if ci == ne {
            panel_point(&self.spec, 1, tc[0], tc[cj as usize])
        } else if cj == -1 {
            panel_point(&self.spec, 5, tc[ci as usize], tc[(ne - 1) as usize])
        } else if cj == ne {
            panel_point(&self.spec, 4, tc[ci as usize], tc[0])
        } else {
            panic!("ghost centres are defined one cell beyond an edge");
        };
        panel_rotation(panel, g0)
    }
}

/// Per-point cell metrics: the raw material of the stability formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMetrics {
    pub dx: f64,
    pub dy: f64,
    pub alpha: f64,
    pub darea: f64,
}

impl CellMetrics {
    /// Cell aspect ratio χ = Δy/Δx.
    pub fn chi(&self) -> f64 {
        self.dy / self.dx
    }

    pub fn sin_alpha(&self) -> f64 {
        self.alpha.sin()
    }

    pub fn cos_alpha(&self) -> f64 {
        self.alpha.cos()
    }
}

/// Second-order spacing estimate at offset point (i, j) along one axis:
/// centred mean of the two neighbouring arcs in the interior, inward
/// extrapolation (3·arc(v,n1) − arc(n1,n2))/2 on panel edges.
fn offset_spacing(grid: &PanelGrid, panel: usize, i: usize, j: usize, x_axis: bool) -> f64 {
    let ne = grid.spec.ne;
    let r = grid.spec.r;
    let at = |ii: usize, jj: usize| grid.vertex(panel, ii, jj);
    let v = at(i, j);
    let idx = if x_axis { i } else { j };
    let shift = |d: isize| -> CartPoint {
        if x_axis {
            at((i as isize + d) as usize, j)
        } else {
            at(i, (j as isize + d) as usize)
        }
    };
    if idx > 0 && idx < ne {
        0.5 * (arc_distance(v, shift(-1), r) + arc_distance(v, shift(1), r))
    } else {
        let s: isize = if idx == 0 { 1 } else { -1 };
        let n1 = shift(s);
        let n2 = shift(2 * s);
        (3.0 * arc_distance(v, n1, r) - arc_distance(n1, n2, r)) / 2.0
    }
}

/// Coordinate crossing angle at offset point (i, j): mean of opposite-quadrant
/// coordinate angles in the interior, one-sided (supplement-corrected) on
/// edges, and the in-panel wedge angle (= 2π/3) at panel corners.
fn offset_alpha(grid: &PanelGrid, panel: usize, i: usize, j: usize) -> Result<f64, SphereError> {
    let ne = grid.spec.ne;
    let at = |ii: usize, jj: usize| grid.vertex(panel, ii, jj);
    let v = at(i, j);
    let x_edge = i == 0 || i == ne;
    let y_edge = j == 0 || j == ne;
    if x_edge && y_edge {
        let e = at(if i == 0 { 1 } else { ne - 1 }, j);
        let n = at(i, if j == 0 { 1 } else { ne - 1 });
        return interior_angle(e, v, n);
    }
    if x_edge || y_edge {
        let e = if i < ne { at(i + 1, j) } else { at(i - 1, j) };
        let n = if j < ne { at(i, j + 1) } else { at(i, j - 1) };
        let a = interior_angle(e, v, n)?;
        return Ok(if (i == ne) != (j == ne) {
            std::f64::consts::PI - a
        } else {
            a
        });
    }
    let a1 = interior_angle(at(i + 1, j), v, at(i, j + 1))?;
    let a2 = interior_angle(at(i - 1, j), v, at(i, j - 1))?;
    Ok(0.5 * (a1 + a2))
}

/// Metrics of the primary cell (i, j): opposite-edge-mean Δx/Δy, spherical
/// excess ΔA, and the mean coordinate crossing angle α (interior angles of a
/// coordinate quad alternate between α and π−α around the cell).
fn primary_metrics(
    grid: &PanelGrid,
    panel: usize,
    i: usize,
    j: usize,
) -> Result<CellMetrics, SphereError> {
    let r = grid.spec.r;
    let sw = grid.vertex(panel, i, j);
    let se = grid.vertex(panel, i + 1, j);
    let nev = grid.vertex(panel, i + 1, j + 1);
    let nw = grid.vertex(panel, i, j + 1);
    let dx = 0.5 * (arc_distance(sw, se, r) + arc_distance(nw, nev, r));
    let dy = 0.5 * (arc_distance(sw, nw, r) + arc_distance(se, nev, r));
    let darea = quad_area(sw, se, nev, nw, r)?;
    let a_sw = interior_angle(nw, sw, se)?;
    let a_se = interior_angle(sw, se, nev)?;
    let a_ne = interior_angle(se, nev, nw)?;
    let a_nw = interior_angle(nev, nw, sw)?;
    let pi = std::f64::consts::PI;
    let alpha = (a_sw + (pi - a_se) + a_ne + (pi - a_nw)) / 4.0;
    Ok(CellMetrics { dx, dy, alpha, darea })
}

fn offset_metrics(
    grid: &PanelGrid,
    panel: usize,
    i: usize,
    j: usize,
) -> Result<CellMetrics, SphereError> {
    let dx = offset_spacing(grid, panel, i, j, true);
    let dy = offset_spacing(grid, panel, i, j, false);
    let alpha = offset_alpha(grid, panel, i, j)?;
    // First-order cell area of the offset cell around the point.
    let darea = dx * dy * alpha.sin();
    Ok(CellMetrics { dx, dy, alpha, darea })
}

/// Metrics of the cell centred at lattice point (i, j) of the staggering.
pub fn cell_metrics_at(
    grid: &PanelGrid,
    stagger: Staggering,
    panel: usize,
    i: usize,
    j: usize,
) -> Result<CellMetrics, GridError> {
    if panel >= NUM_PANELS {
        return Err(GridError::BadPanel(panel));
    }
    let n = stagger.side(grid.spec.ne);
    if i >= n || j >= n {
        return Err(GridError::IndexOutOfRange { panel, i, j });
    }
    Ok(match stagger {
        Staggering::Primary => primary_metrics(grid, panel, i, j)?,
        Staggering::Offset => offset_metrics(grid, panel, i, j)?,
    })
}

/// Cell metrics for every lattice point of every panel, in deterministic
/// (panel, row-major) order.
#[derive(Debug, Clone)]
pub struct MetricField {
    pub stagger: Staggering,
    pub panels: Vec<Array2<CellMetrics>>,
}

impl MetricField {
    pub fn get(&self, panel: usize, i: usize, j: usize) -> &CellMetrics {
        &self.panels[panel][(i, j)]
    }

    /// Deterministic iteration: panel ascending, then row-major (i, j).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, &CellMetrics)> {
        self.panels.iter().enumerate().flat_map(|(p, arr)| {
            let n = arr.nrows();
            arr.indexed_iter().map(move |((i, j), m)| {
                debug_assert!(i < n && j < n);
                (p, i, j, m)
            })
        })
    }

    /// Minimum cell area over all panels, with its first (deterministic)
    /// location.
    pub fn min_area(&self) -> (f64, (usize, usize, usize)) {
        let mut best = (f64::INFINITY, (0, 0, 0));
        for (p, i, j, m) in self.iter() {
            if m.darea < best.0 {
                best = (m.darea, (p, i, j));
            }
        }
        best
    }

    pub fn max_area(&self) -> (f64, (usize, usize, usize)) {
        let mut best = (f64::NEG_INFINITY, (0, 0, 0));
        for (p, i, j, m) in self.iter() {
            if m.darea > best.0 {
                best = (m.darea, (p, i, j));
            }
        }
        best
    }
}

pub fn metric_field(grid: &PanelGrid, stagger: Staggering) -> Result<MetricField, GridError> {
    let n = stagger.side(grid.spec.ne);
    let mut panels = Vec::with_capacity(NUM_PANELS);
    for p in 0..NUM_PANELS {
        let mut arr = Array2::from_elem(
            (n, n),
            CellMetrics { dx: 0.0, dy: 0.0, alpha: 0.0, darea: 0.0 },
        );
        for i in 0..n {
            for j in 0..n {
                arr[(i, j)] = cell_metrics_at(grid, stagger, p, i, j)?;
            }
        }
        panels.push(arr);
    }
    Ok(MetricField { stagger, panels })
}

/// Qualitative position of a lattice point within its panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelLocation {
    Corner,
    MidEdge,
    Edge,
    Interior,
}

impl PanelLocation {
    pub fn name(self) -> &'static str {
        match self {
            PanelLocation::Corner => "corner",
            PanelLocation::MidEdge => "mid-edge",
            PanelLocation::Edge => "edge",
            PanelLocation::Interior => "interior",
        }
    }

    /// Classify index (i, j) on a side-`n` lattice (n = Ne for primary cells,
    /// Ne+1 for offset points).
    pub fn classify(n: usize, i: usize, j: usize) -> Self {
        let lo = 0;
        let hi = n - 1;
        let on = |k: usize| k == lo || k == hi;
        let mid = |k: usize| k == (n - 1) / 2 || k == n / 2;
        match (on(i), on(j)) {
            (true, true) => PanelLocation::Corner,
            (true, false) if mid(j) => PanelLocation::MidEdge,
            (false, true) if mid(i) => PanelLocation::MidEdge,
            (true, _) | (_, true) => PanelLocation::Edge,
            _ => PanelLocation::Interior,
        }
    }
}

/// Panel summary of the grid's metric extremes and edge samples (the paper's
/// per-mapping table block).
#[derive(Debug, Clone)]
pub struct GridSummary {
    pub max_area: f64,
    pub min_area: f64,
    pub max_area_loc: (usize, usize, usize),
    pub min_area_loc: (usize, usize, usize),
    pub min_area_position: PanelLocation,
    pub area_ratio: f64,
    /// χ at the two inequivalent panel mid-edge offset points.
    pub chi_mid_edge: [f64; 2],
    pub sin_alpha_mid_edge: f64,
    pub chi_corner: f64,
    pub sin_alpha_corner: f64,
}

pub fn grid_summary(grid: &PanelGrid) -> Result<GridSummary, GridError> {
    let ne = grid.spec.ne;
    let primary = metric_field(grid, Staggering::Primary)?;
    let (min_area, min_loc) = primary.min_area();
    let (max_area, max_loc) = primary.max_area();
    let mid = ne / 2;
    let m_bottom = cell_metrics_at(grid, Staggering::Offset, 0, mid, 0)?;
    let m_left = cell_metrics_at(grid, Staggering::Offset, 0, 0, mid)?;
    let m_corner = cell_metrics_at(grid, Staggering::Offset, 0, 0, 0)?;
    Ok(GridSummary {
        max_area,
        min_area,
        max_area_loc: max_loc,
        min_area_loc: min_loc,
        min_area_position: PanelLocation::classify(ne, min_loc.1, min_loc.2),
        area_ratio: max_area / min_area,
        chi_mid_edge: [m_bottom.chi(), m_left.chi()],
        sin_alpha_mid_edge: m_bottom.sin_alpha(),
        chi_corner: m_corner.chi(),
        sin_alpha_corner: m_corner.sin_alpha(),
    })
}
