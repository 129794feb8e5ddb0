//! Spherical primitives: points, great-circle distances, interior angles and
//! spherical-excess areas on a sphere of radius `r`.

use thiserror::Error;

/// Default Earth radius in metres.
pub const EARTH_RADIUS_M: f64 = 6_371_220.0;

#[derive(Debug, Error, PartialEq)]
pub enum SphereError {
    #[error("zero vector has no spherical coordinates")]
    ZeroVector,
    #[error("degenerate edge: endpoints are parallel or antiparallel")]
    DegenerateEdge,
}

/// A point in 3-D Cartesian coordinates, normally on the sphere surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// Rescale onto the sphere of radius `r`.
    pub fn to_radius(self, r: f64) -> Result<Self, SphereError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(SphereError::ZeroVector);
        }
        Ok(self.scale(r / n))
    }
}

/// Longitude/latitude in radians: λ ∈ (−π, π], φ ∈ [−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

/// Clamp to [−1, 1] before arccos/arcsin, absorbing roundoff.
pub(crate) fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Convert a Cartesian point to longitude/latitude.
pub fn cart_to_lonlat(p: CartPoint) -> Result<LonLat, SphereError> {
    let n = p.norm();
    if n == 0.0 {
        return Err(SphereError::ZeroVector);
    }
    let mut lon = p.y.atan2(p.x);
    if lon <= -std::f64::consts::PI {
        lon = std::f64::consts::PI;
    }
    let lat = clamp_unit(p.z / n).asin();
    Ok(LonLat { lon, lat })
}

/// Unit direction of a lon/lat coordinate pair.
pub fn lonlat_to_unit(c: LonLat) -> CartPoint {
    let (sl, cl) = c.lon.sin_cos();
    let (sp, cp) = c.lat.sin_cos();
    CartPoint::new(cp * cl, cp * sl, sp)
}

/// Great-circle distance between two lon/lat points on a sphere of radius `r`.
pub fn great_circle_distance(a: LonLat, b: LonLat, r: f64) -> f64 {
    arc_distance(lonlat_to_unit(a), lonlat_to_unit(b), r)
}

/// Great-circle distance between two Cartesian points (any positive norms),
/// measured on the sphere of radius `r`.
pub fn arc_distance(a: CartPoint, b: CartPoint, r: f64) -> f64 {
    let d = a.dot(b) / (a.norm() * b.norm());
    r * clamp_unit(d).acos()
}

/// Unit normal of the great-circle edge from `p_a` to `p_b` (along p_a × p_b).
pub fn edge_unit_normal(p_a: CartPoint, p_b: CartPoint) -> Result<CartPoint, SphereError> {
    let c = p_a.cross(p_b);
    let n = c.norm();
    // Relative threshold: the cross norm of unit directions is sin of the
    // separation; treat anything at roundoff scale as degenerate.
    if n <= 1e-14 * p_a.norm() * p_b.norm() {
        return Err(SphereError::DegenerateEdge);
    }
    Ok(c.scale(1.0 / n))
}

/// Interior angle at vertex `p_b` of the spherical wedge a–b–c, in [0, π].
pub fn interior_angle(
    p_a: CartPoint,
    p_b: CartPoint,
    p_c: CartPoint,
) -> Result<f64, SphereError> {
    let e_ba = edge_unit_normal(p_b, p_a)?;
    let e_bc = edge_unit_normal(p_b, p_c)?;
    Ok(clamp_unit(e_ba.dot(e_bc)).acos())
}

/// Spherical triangle area by Girard's theorem.
pub fn triangle_area(
    p1: CartPoint,
    p2: CartPoint,
    p3: CartPoint,
    r: f64,
) -> Result<f64, SphereError> {
    let a = interior_angle(p3, p1, p2)?;
    let b = interior_angle(p1, p2, p3)?;
    let c = interior_angle(p2, p3, p1)?;
    Ok(r * r * (a + b + c - std::f64::consts::PI))
}

/// Area of the spherical quadrilateral p1–p2–p3–p4 (cyclic order, convex) by
/// the spherical-excess formula. Cyclic ordering is the caller's
/// responsibility.
pub fn quad_area(
    p1: CartPoint,
    p2: CartPoint,
    p3: CartPoint,
    p4: CartPoint,
    r: f64,
) -> Result<f64, SphereError> {
    let a412 = interior_angle(p4, p1, p2)?;
    let a123 = interior_angle(p1, p2, p3)?;
    let a234 = interior_angle(p2, p3, p4)?;
    let a341 = interior_angle(p3, p4, p1)?;
    Ok(r * r * (a412 + a123 + a234 + a341 - 2.0 * std::f64::consts::PI))
}
