//! Cross-section geometry: parametric shapes, constant-element boundary
//! meshes and interior collocation grids.
//!
//! All shapes are placed with the twist center at the origin. Curved
//! boundaries (circle, ellipse) are discretized as inscribed polygons; the
//! geometric error this introduces is part of the overall discretization
//! error and shrinks as the element count grows.

use nalgebra::{Point2, Vector2};

use crate::error::{Result, TorsionError};

/// A cross-section shape with the twist center / centroid at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionShape {
    /// Axis-aligned rectangle of width `b` (x) and height `h` (y).
    Rectangle { b: f64, h: f64 },
    /// Equilateral triangle of side `b`, one side horizontal at the bottom.
    EquilateralTriangle { b: f64 },
    Circle { radius: f64 },
    /// Ellipse with semi-axes `a` (x) and `b` (y).
    Ellipse { a: f64, b: f64 },
    /// Simple, counterclockwise polygon given by its vertices.
    Polygon { vertices: Vec<Point2<f64>> },
}

impl SectionShape {
    pub fn rectangle(b: f64, h: f64) -> Self {
        SectionShape::Rectangle { b, h }
    }

    pub fn equilateral_triangle(b: f64) -> Self {
        SectionShape::EquilateralTriangle { b }
    }

    pub fn circle(radius: f64) -> Self {
        SectionShape::Circle { radius }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        SectionShape::Ellipse { a, b }
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Self {
        SectionShape::Polygon {
            vertices: vertices.into_iter().map(|v| Point2::new(v[0], v[1])).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SectionShape::Rectangle { b, h } => {
                if *b <= 0.0 || *h <= 0.0 {
                    return Err(TorsionError::InvalidShape(format!(
                        "rectangle sides must be positive, got {b} x {h}"
                    )));
                }
            }
            SectionShape::EquilateralTriangle { b } => {
                if *b <= 0.0 {
                    return Err(TorsionError::InvalidShape(format!(
                        "triangle side must be positive, got {b}"
                    )));
                }
            }
            SectionShape::Circle { radius } => {
                if *radius <= 0.0 {
                    return Err(TorsionError::InvalidShape(format!(
                        "circle radius must be positive, got {radius}"
                    )));
                }
            }
            SectionShape::Ellipse { a, b } => {
                if *a <= 0.0 || *b <= 0.0 {
                    return Err(TorsionError::InvalidShape(format!(
                        "ellipse semi-axes must be positive, got {a}, {b}"
                    )));
                }
            }
            SectionShape::Polygon { vertices } => validate_polygon(vertices)?,
        }
        Ok(())
    }

    /// Exact area of the section.
    pub fn area(&self) -> f64 {
        match self {
            SectionShape::Rectangle { b, h } => b * h,
            SectionShape::EquilateralTriangle { b } => 3.0f64.sqrt() / 4.0 * b * b,
            SectionShape::Circle { radius } => std::f64::consts::PI * radius * radius,
            SectionShape::Ellipse { a, b } => std::f64::consts::PI * a * b,
            SectionShape::Polygon { vertices } => polygon_signed_area(vertices),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            SectionShape::Rectangle { b, h } => 2.0 * (b + h),
            SectionShape::EquilateralTriangle { b } => 3.0 * b,
            SectionShape::Circle { radius } => 2.0 * std::f64::consts::PI * radius,
            SectionShape::Ellipse { .. } => {
                // Adaptive-free arclength accumulation; exact enough for
                // element sizing, which is its only use.
                let pts = self.sample_curve(4096);
                let mut p = 0.0;
                for i in 0..pts.len() {
                    let j = (i + 1) % pts.len();
                    p += (pts[j] - pts[i]).norm();
                }
                p
            }
            SectionShape::Polygon { vertices } => {
                let mut p = 0.0;
                for i in 0..vertices.len() {
                    let j = (i + 1) % vertices.len();
                    p += (vertices[j] - vertices[i]).norm();
                }
                p
            }
        }
    }

    /// Axis-aligned bounding box as (min, max) corners.
    pub fn bounding_box(&self) -> (Point2<f64>, Point2<f64>) {
        match self {
            SectionShape::Rectangle { b, h } => {
                (Point2::new(-b / 2.0, -h / 2.0), Point2::new(b / 2.0, h / 2.0))
            }
            SectionShape::EquilateralTriangle { b } => {
                let rho = b / (2.0 * 3.0f64.sqrt());
                (Point2::new(-b / 2.0, -rho), Point2::new(b / 2.0, 2.0 * rho))
            }
            SectionShape::Circle { radius } => {
                (Point2::new(-radius, -radius), Point2::new(*radius, *radius))
            }
            SectionShape::Ellipse { a, b } => (Point2::new(-a, -b), Point2::new(*a, *b)),
            SectionShape::Polygon { vertices } => {
                let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    lo.x = lo.x.min(v.x);
                    lo.y = lo.y.min(v.y);
                    hi.x = hi.x.max(v.x);
                    hi.y = hi.y.max(v.y);
                }
                (lo, hi)
            }
        }
    }

    /// Extent of the section in y, used as the default grading height.
    pub fn y_extent(&self) -> (f64, f64) {
        let (lo, hi) = self.bounding_box();
        (lo.y, hi.y)
    }

    pub fn centroid(&self) -> Point2<f64> {
        match self {
            SectionShape::Polygon { vertices } => polygon_centroid(vertices),
            SectionShape::EquilateralTriangle { .. } => Point2::origin(),
            _ => Point2::origin(),
        }
    }

    /// Strict interior test; points on the boundary are not interior.
    pub fn contains(&self, p: &Point2<f64>) -> bool {
        match self {
            SectionShape::Circle { radius } => p.x * p.x + p.y * p.y < radius * radius,
            SectionShape::Ellipse { a, b } => {
                let u = p.x / a;
                let v = p.y / b;
                u * u + v * v < 1.0
            }
            _ => {
                let vertices = self.outline_vertices();
                if point_segment_distance_min(&vertices, p) == 0.0 {
                    return false;
                }
                point_in_polygon(&vertices, p)
            }
        }
    }

    /// Unsigned distance from `p` to the section boundary.
    pub fn distance_to_boundary(&self, p: &Point2<f64>) -> f64 {
        match self {
            SectionShape::Circle { radius } => (radius - p.coords.norm()).abs(),
            SectionShape::Ellipse { a, b } => ellipse_boundary_distance(*a, *b, p),
            _ => point_segment_distance_min(&self.outline_vertices(), p),
        }
    }

    /// Vertex outline for shapes with polygonal boundaries.
    fn outline_vertices(&self) -> Vec<Point2<f64>> {
        match self {
            SectionShape::Rectangle { b, h } => vec![
                Point2::new(-b / 2.0, -h / 2.0),
                Point2::new(b / 2.0, -h / 2.0),
                Point2::new(b / 2.0, h / 2.0),
                Point2::new(-b / 2.0, h / 2.0),
            ],
            SectionShape::EquilateralTriangle { b } => {
                let rho = b / (2.0 * 3.0f64.sqrt());
                vec![
                    Point2::new(-b / 2.0, -rho),
                    Point2::new(b / 2.0, -rho),
                    Point2::new(0.0, 2.0 * rho),
                ]
            }
            SectionShape::Polygon { vertices } => vertices.clone(),
            _ => unreachable!("curved shapes have no vertex outline"),
        }
    }

    fn is_polygonal(&self) -> bool {
        !matches!(
            self,
            SectionShape::Circle { .. } | SectionShape::Ellipse { .. }
        )
    }

    /// Points on the curved boundary at uniform parameter steps.
    fn sample_curve(&self, n: usize) -> Vec<Point2<f64>> {
        match self {
            SectionShape::Circle { radius } => (0..n)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    Point2::new(radius * t.cos(), radius * t.sin())
                })
                .collect(),
            SectionShape::Ellipse { a, b } => (0..n)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    Point2::new(a * t.cos(), b * t.sin())
                })
                .collect(),
            _ => unreachable!("sample_curve is for curved shapes"),
        }
    }
}

fn validate_polygon(vertices: &[Point2<f64>]) -> Result<()> {
    if vertices.len() < 3 {
        return Err(TorsionError::InvalidShape(format!(
            "polygon needs at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let n = vertices.len();
    let scale = {
        let (lo, hi) = {
            let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
            let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
            for v in vertices {
                lo.x = lo.x.min(v.x);
                lo.y = lo.y.min(v.y);
                hi.x = hi.x.max(v.x);
                hi.y = hi.y.max(v.y);
            }
            (lo, hi)
        };
        (hi - lo).norm()
    };
    for i in 0..n {
        let j = (i + 1) % n;
        let len = (vertices[j] - vertices[i]).norm();
        if len <= 1e-14 * scale {
            return Err(TorsionError::DegenerateEdge {
                index: i,
                x0: vertices[i].x,
                y0: vertices[i].y,
                x1: vertices[j].x,
                y1: vertices[j].y,
            });
        }
    }
    if polygon_signed_area(vertices) <= 0.0 {
        return Err(TorsionError::InvalidShape(
            "polygon must be counterclockwise-oriented with positive area".into(),
        ));
    }
    // Simplicity: no two non-adjacent edges may intersect.
    for i in 0..n {
        let (a1, a2) = (vertices[i], vertices[(i + 1) % n]);
        for j in i + 1..n {
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (b1, b2) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(&a1, &a2, &b1, &b2) {
                return Err(TorsionError::InvalidShape(format!(
                    "polygon is self-intersecting: edges {i} and {j} cross"
                )));
            }
        }
    }
    Ok(())
}

fn polygon_signed_area(vertices: &[Point2<f64>]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        s += vertices[i].x * vertices[j].y - vertices[j].x * vertices[i].y;
    }
    s / 2.0
}

fn polygon_centroid(vertices: &[Point2<f64>]) -> Point2<f64> {
    let n = vertices.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut area = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let w = vertices[i].x * vertices[j].y - vertices[j].x * vertices[i].y;
        area += w;
        cx += (vertices[i].x + vertices[j].x) * w;
        cy += (vertices[i].y + vertices[j].y) * w;
    }
    area /= 2.0;
    Point2::new(cx / (6.0 * area), cy / (6.0 * area))
}

fn point_in_polygon(vertices: &[Point2<f64>], p: &Point2<f64>) -> bool {
    // Crossing-number test with the half-open edge rule.
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

fn point_segment_distance(a: &Point2<f64>, b: &Point2<f64>, p: &Point2<f64>) -> f64 {
    let ab = b - a;
    let ap = p - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return ap.norm();
    }
    let t = (ap.dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn point_segment_distance_min(vertices: &[Point2<f64>], p: &Point2<f64>) -> f64 {
    let n = vertices.len();
    let mut d = f64::INFINITY;
    for i in 0..n {
        let j = (i + 1) % n;
        d = d.min(point_segment_distance(&vertices[i], &vertices[j], p));
    }
    d
}

fn segments_intersect(
    a1: &Point2<f64>,
    a2: &Point2<f64>,
    b1: &Point2<f64>,
    b2: &Point2<f64>,
) -> bool {
    let cross = |o: &Point2<f64>, u: &Point2<f64>, v: &Point2<f64>| {
        (u.x - o.x) * (v.y - o.y) - (u.y - o.y) * (v.x - o.x)
    };
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Nearest-distance from a point to an ellipse boundary, by bisection on the
/// stationarity condition of the squared distance in the first quadrant.
fn ellipse_boundary_distance(a: f64, b: f64, p: &Point2<f64>) -> f64 {
    let px = p.x.abs();
    let py = p.y.abs();
    if px == 0.0 && py == 0.0 {
        return a.min(b);
    }
    let g = |t: f64| (b * b - a * a) * t.sin() * t.cos() + px * a * t.sin() - py * b * t.cos();
    let mut lo = 0.0f64;
    let mut hi = std::f64::consts::FRAC_PI_2;
    // g(0) = -py*b <= 0, g(pi/2) = px*a >= 0 when a >= b; the sign pattern
    // can flip for b > a, so fall back to a dense scan if needed.
    if g(lo) * g(hi) > 0.0 {
        let mut best = f64::INFINITY;
        for i in 0..=2048 {
            let t = std::f64::consts::FRAC_PI_2 * i as f64 / 2048.0;
            let q = Point2::new(a * t.cos(), b * t.sin());
            best = best.min((q - Point2::new(px, py)).norm());
        }
        return best;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(lo) * g(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let q = Point2::new(a * t.cos(), b * t.sin());
    (q - Point2::new(px, py)).norm()
}

/// One straight constant element of the boundary mesh.
#[derive(Debug, Clone)]
pub struct Element {
    pub start: Point2<f64>,
    pub end: Point2<f64>,
    pub midpoint: Point2<f64>,
    pub length: f64,
    /// Outward unit normal.
    pub normal: Vector2<f64>,
    /// Index of the smooth boundary run this element belongs to. Elements on
    /// the same run may be differenced tangentially across their midpoints.
    pub edge: usize,
}

/// Constant-element discretization of the section boundary, counterclockwise.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    pub elements: Vec<Element>,
    /// Total mesh perimeter (sum of element lengths).
    pub perimeter: f64,
    pub mean_element_length: f64,
    /// True when the whole boundary is one smooth closed curve, so tangential
    /// differencing may wrap around.
    pub smooth_closed: bool,
    pub edge_count: usize,
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Closed-surface identity: sum of length-weighted normals.
    pub fn normal_closure(&self) -> Vector2<f64> {
        self.elements
            .iter()
            .fold(Vector2::zeros(), |acc, e| acc + e.normal * e.length)
    }

    /// Area recovered from boundary circulation, 1/2 sum (x n_x + y n_y) ds.
    pub fn circulation_area(&self) -> f64 {
        0.5 * self
            .elements
            .iter()
            .map(|e| (e.midpoint.x * e.normal.x + e.midpoint.y * e.normal.y) * e.length)
            .sum::<f64>()
    }
}

fn build_elements(nodes: &[Point2<f64>], edge_of: &[usize], smooth_closed: bool) -> BoundaryMesh {
    let n = nodes.len();
    let mut elements = Vec::with_capacity(n);
    let mut perimeter = 0.0;
    let mut edge_count = 0;
    for i in 0..n {
        let a = nodes[i];
        let b = nodes[(i + 1) % n];
        let d = b - a;
        let length = d.norm();
        perimeter += length;
        // CCW traversal keeps the interior on the left, so the outward
        // normal is the tangent rotated -90 degrees.
        let normal = Vector2::new(d.y / length, -d.x / length);
        edge_count = edge_count.max(edge_of[i] + 1);
        elements.push(Element {
            start: a,
            end: b,
            midpoint: Point2::from((a.coords + b.coords) / 2.0),
            length,
            normal,
            edge: edge_of[i],
        });
    }
    BoundaryMesh {
        mean_element_length: perimeter / n as f64,
        elements,
        perimeter,
        smooth_closed,
        edge_count,
    }
}

/// Discretize the boundary into `n` straight constant elements.
///
/// Polygon corners always coincide with element endpoints so that every
/// midpoint node sits on smooth boundary.
pub fn discretize_boundary(shape: &SectionShape, n: usize) -> Result<BoundaryMesh> {
    shape.validate()?;
    if n < 8 {
        return Err(TorsionError::InvalidShape(format!(
            "at least 8 boundary elements are required, got {n}"
        )));
    }
    if shape.is_polygonal() {
        let vertices = match shape {
            SectionShape::Polygon { vertices } => vertices.clone(),
            _ => shape_outline(shape),
        };
        let k = vertices.len();
        let lengths: Vec<f64> = (0..k)
            .map(|i| (vertices[(i + 1) % k] - vertices[i]).norm())
            .collect();
        let total: f64 = lengths.iter().sum();
        // Elements per edge, proportional to edge length, then adjusted to
        // sum exactly to n.
        let mut counts: Vec<usize> = lengths
            .iter()
            .map(|l| ((n as f64 * l / total).round() as usize).max(1))
            .collect();
        loop {
            let sum: usize = counts.iter().sum();
            if sum == n {
                break;
            }
            if sum < n {
                // add to the edge with the currently longest subsegments
                let i = (0..k)
                    .max_by(|&i, &j| {
                        (lengths[i] / counts[i] as f64)
                            .partial_cmp(&(lengths[j] / counts[j] as f64))
                            .unwrap()
                    })
                    .unwrap();
                counts[i] += 1;
            } else {
                let i = (0..k)
                    .filter(|&i| counts[i] > 1)
                    .min_by(|&i, &j| {
                        (lengths[i] / counts[i] as f64)
                            .partial_cmp(&(lengths[j] / counts[j] as f64))
                            .unwrap()
                    })
                    .ok_or_else(|| {
                        TorsionError::InvalidShape(format!(
                            "cannot distribute {n} elements over {k} edges"
                        ))
                    })?;
                counts[i] -= 1;
            }
        }
        let mut nodes = Vec::with_capacity(n);
        let mut edge_of = Vec::with_capacity(n);
        for i in 0..k {
            let a = vertices[i];
            let b = vertices[(i + 1) % k];
            for s in 0..counts[i] {
                let t = s as f64 / counts[i] as f64;
                nodes.push(Point2::from(a.coords + (b.coords - a.coords) * t));
                edge_of.push(i);
            }
        }
        Ok(build_elements(&nodes, &edge_of, false))
    } else {
        // Curved boundary: nodes at equal arclength, via a dense parameter
        // march, then inscribed straight chords.
        let dense = shape.sample_curve(256 * n);
        let m = dense.len();
        let mut cum = Vec::with_capacity(m + 1);
        cum.push(0.0);
        for i in 0..m {
            let j = (i + 1) % m;
            cum.push(cum[i] + (dense[j] - dense[i]).norm());
        }
        let total = cum[m];
        let mut nodes = Vec::with_capacity(n);
        let mut idx = 0usize;
        for s in 0..n {
            let target = total * s as f64 / n as f64;
            while idx + 1 < m && cum[idx + 1] < target {
                idx += 1;
            }
            // linear interpolation inside the dense segment
            let seg = cum[idx + 1] - cum[idx];
            let t = if seg > 0.0 { (target - cum[idx]) / seg } else { 0.0 };
            let a = dense[idx];
            let b = dense[(idx + 1) % m];
            nodes.push(Point2::from(a.coords + (b.coords - a.coords) * t));
        }
        let edge_of = vec![0usize; n];
        Ok(build_elements(&nodes, &edge_of, true))
    }
}

fn shape_outline(shape: &SectionShape) -> Vec<Point2<f64>> {
    match shape {
        SectionShape::Rectangle { .. }
        | SectionShape::EquilateralTriangle { .. }
        | SectionShape::Polygon { .. } => shape.outline_vertices(),
        _ => unreachable!(),
    }
}

/// Interior collocation points on a uniform Cartesian grid clipped to the
/// inset-shrunk section.
#[derive(Debug, Clone)]
pub struct CollocationSet {
    pub points: Vec<Point2<f64>>,
    /// Grid cell size (sx, sy).
    pub spacing: (f64, f64),
    pub inset: f64,
    pub min_clearance: f64,
}

impl CollocationSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.points[i] - self.points[j]).norm()
    }
}

/// Generate `m_target` (within +-10%) collocation points on a symmetric
/// cell-center grid, keeping points whose boundary clearance is at least
/// `inset`. Deterministic for fixed inputs.
pub fn generate_collocation(
    shape: &SectionShape,
    m_target: usize,
    inset: f64,
) -> Result<CollocationSet> {
    shape.validate()?;
    if m_target < 1 {
        return Err(TorsionError::InvalidShape(
            "m_target must be at least 1".into(),
        ));
    }
    if inset <= 0.0 {
        return Err(TorsionError::InvalidShape(
            "collocation inset must be positive".into(),
        ));
    }
    let (lo, hi) = shape.bounding_box();
    let w = hi.x - lo.x;
    let h = hi.y - lo.y;
    let s0 = (shape.area() / m_target as f64).sqrt();
    let nx0 = ((w / s0).round() as i64).max(1);
    let ny0 = ((h / s0).round() as i64).max(1);

    let build = |nx: usize, ny: usize| -> CollocationSet {
        let sx = w / nx as f64;
        let sy = h / ny as f64;
        let mut points = Vec::new();
        let mut min_clear = f64::INFINITY;
        for iy in 0..ny {
            let y = lo.y + (iy as f64 + 0.5) * sy;
            for ix in 0..nx {
                let x = lo.x + (ix as f64 + 0.5) * sx;
                let p = Point2::new(x, y);
                if !shape.contains(&p) {
                    continue;
                }
                let d = shape.distance_to_boundary(&p);
                if d >= inset {
                    min_clear = min_clear.min(d);
                    points.push(p);
                }
            }
        }
        CollocationSet {
            points,
            spacing: (sx, sy),
            inset,
            min_clearance: min_clear,
        }
    };

    // Scan grid dimensions around the equal-area estimate and keep the count
    // closest to the target; ties resolve to the smaller grid, so the result
    // is deterministic.
    let mut best: Option<CollocationSet> = None;
    let mut best_err = usize::MAX;
    for dnx in -2..=2i64 {
        for dny in -2..=2i64 {
            let nx = (nx0 + dnx).max(1) as usize;
            let ny = (ny0 + dny).max(1) as usize;
            let set = build(nx, ny);
            let err = set.len().abs_diff(m_target);
            if err < best_err {
                best_err = err;
                best = Some(set);
            }
        }
    }
    let best = best.expect("grid scan is never empty");
    if best.is_empty() {
        return Err(TorsionError::InsetTooLarge { inset });
    }
    let lo_n = (0.9 * m_target as f64).floor() as usize;
    let hi_n = (1.1 * m_target as f64).ceil() as usize;
    if best.len() >= lo_n.max(1) && best.len() <= hi_n {
        Ok(best)
    } else {
        Err(TorsionError::CollocationCount {
            target: m_target,
            achieved: best.len(),
        })
    }
}

/// Strict interior predicate exposed as a free function.
pub fn point_in_domain(shape: &SectionShape, p: &Point2<f64>) -> bool {
    shape.contains(p)
}

/// Triangles fanning out from the centroid over the boundary elements, for
/// domain quadrature on star-shaped sections. Returns `None` when the section
/// is not star-shaped with respect to its centroid.
pub fn fan_triangles(shape: &SectionShape, mesh: &BoundaryMesh) -> Option<Vec<[Point2<f64>; 3]>> {
    let c = shape.centroid();
    let mut tris = Vec::with_capacity(mesh.len());
    for e in &mesh.elements {
        let u = e.start - c;
        let v = e.end - c;
        let cross = u.x * v.y - u.y * v.x;
        if cross <= 0.0 {
            return None;
        }
        tris.push([c, e.start, e.end]);
    }
    Some(tris)
}
