//! Sibson natural-neighbour weights by exact polygon clipping.
//!
//! Voronoi cells are built as intersections of half-planes inside a square
//! window ten times the sensors' extent. Inserting the query point `p0`
//! gives it a new cell; the part of that cell that used to belong to
//! sensor `i` is the new cell further clipped by `i`'s own bisectors.

use crate::error::{Error, Result};
use crate::geometry::{extent, Point};

type Polygon = Vec<Point>;

/// Shoelace area (positive for counter-clockwise vertex order).
fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// Keeps the part of `poly` at least as close to `site` as to `other`.
fn clip_to_bisector(poly: &[Point], site: Point, other: Point) -> Polygon {
    let (nx, ny) = (other.x - site.x, other.y - site.y);
    let (mx, my) = (0.5 * (site.x + other.x), 0.5 * (site.y + other.y));
    // <= 0 inside
    let side = |p: Point| (p.x - mx) * nx + (p.y - my) * ny;

    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (fc, fn_) = (side(cur), side(next));
        if fc <= 0.0 {
            out.push(cur);
        }
        if (fc < 0.0 && fn_ > 0.0) || (fc > 0.0 && fn_ < 0.0) {
            let t = fc / (fc - fn_);
            out.push(Point::new(cur.x + t * (next.x - cur.x), cur.y + t * (next.y - cur.y)));
        }
    }
    out
}

fn window(sites: &[Point]) -> Polygon {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in sites {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let half = 5.0 * extent(sites);
    vec![
        Point::new(cx - half, cy - half),
        Point::new(cx + half, cy - half),
        Point::new(cx + half, cy + half),
        Point::new(cx - half, cy + half),
    ]
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull in counter-clockwise order (Andrew's monotone chain).
pub(crate) fn convex_hull(points: &[Point]) -> Polygon {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Whether `p` lies strictly inside the convex hull of `sites`.
pub fn strictly_inside_hull(sites: &[Point], p: Point) -> bool {
    let hull = convex_hull(sites);
    if hull.len() < 3 {
        return false;
    }
    let scale = extent(sites);
    let tol = 1e-12 * scale * scale;
    (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], p) > tol)
}

/// Sibson weights of `p0` with respect to `sites`. `p0` must be strictly
/// inside the sites' convex hull.
pub fn sibson_weights(sites: &[Point], p0: Point) -> Result<Vec<f64>> {
    if !strictly_inside_hull(sites, p0) {
        return Err(Error::OutOfHull { x: p0.x, y: p0.y });
    }
    let mut cell = window(sites);
    for &s in sites {
        cell = clip_to_bisector(&cell, p0, s);
    }
    let stolen: Vec<f64> = sites
        .iter()
        .enumerate()
        .map(|(i, &si)| {
            let mut piece = cell.clone();
            for (j, &sj) in sites.iter().enumerate() {
                if j != i && !piece.is_empty() {
                    piece = clip_to_bisector(&piece, si, sj);
                }
            }
            signed_area(&piece).abs()
        })
        .collect();
    let total: f64 = stolen.iter().sum();
    if !(total > 0.0) {
        return Err(Error::OutOfHull { x: p0.x, y: p0.y });
    }
    Ok(stolen.into_iter().map(|a| a / total).collect())
}
