//! Planar fluxons, particle paths, and the AB phase in two gauges.
//!
//! Coordinates are dimensionless; only the flux fraction `alpha = Φ/Φ₀` is
//! physical. Sign convention: a hole (charge sign +1) going once
//! counter-clockwise around a fluxon with positive `alpha` collects `+2πα`,
//! so an electron crossing a singular cut counter-clockwise picks up
//! `e^{−2πiα}`.
//!
//! Degenerate geometry (a path through a fluxon, a vertex sitting on a cut
//! ray) is rejected rather than perturbed.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::ModeKind;

/// Relative tolerance for "point lies on a line".
const COLLINEAR_TOLERANCE: f64 = 1e-12;
/// Absolute tolerance for coincident points.
const COINCIDENT_TOLERANCE: f64 = 1e-12;
/// Maximum allowed distance of a summed closed-path angle from a multiple of 2π.
const WINDING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a path needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("consecutive path points at index {0} coincide")]
    RepeatedPoint(usize),
    #[error("non-finite coordinate in path or fluxon")]
    NonFinite,
    #[error("singular trajectory: segment {segment} passes through fluxon {fluxon}")]
    SingularTrajectory { segment: usize, fluxon: usize },
    #[error("degenerate crossing: path point {0} lies on a cut ray")]
    DegenerateCrossing(usize),
    #[error("winding number needs a closed path")]
    OpenPath,
    #[error("point lies on the path (segment {0})")]
    PointOnPath(usize),
    #[error("cut direction {0} is not a unit vector")]
    NonUnitDirection(usize),
    #[error("gauge has {directions} cut directions for {fluxons} fluxons")]
    GaugeFluxonMismatch { directions: usize, fluxons: usize },
    #[error("summed angle {0} is not a multiple of 2π")]
    NonIntegerWinding(f64),
    #[error("paths do not join: end of first is not start of second")]
    Disjoint,
}

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at `angle` radians from the +x axis.
    pub fn from_angle(angle: f64) -> Self {
        Vec2::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Point flux tube of strength `alpha` flux quanta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fluxon {
    pub position: Vec2,
    pub alpha: f64,
}

impl Fluxon {
    pub fn new(position: Vec2, alpha: f64) -> Self {
        Fluxon { position, alpha }
    }

    pub fn at_origin(alpha: f64) -> Self {
        Fluxon::new(Vec2::new(0.0, 0.0), alpha)
    }
}

/// How the vector potential of each fluxon is realized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeChoice {
    /// Potential concentrated on a ray leaving each fluxon; one unit
    /// direction per fluxon.
    SingularCut { directions: Vec<Vec2> },
    /// Azimuthal potential: phase proportional to the subtended angle.
    SubtendedAngle,
}

impl GaugeChoice {
    pub fn singular_cut(directions: Vec<Vec2>) -> Result<Self> {
        for (i, d) in directions.iter().enumerate() {
            if !d.is_finite() || (d.norm() - 1.0).abs() > 1e-9 {
                return Err(GeometryError::NonUnitDirection(i));
            }
        }
        Ok(GaugeChoice::SingularCut { directions })
    }

    /// Every fluxon cut along the same angle.
    pub fn cut_at_angle(angle: f64, fluxons: usize) -> Self {
        GaugeChoice::SingularCut { directions: vec![Vec2::from_angle(angle); fluxons] }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GaugeChoice::SingularCut { .. } => "cut",
            GaugeChoice::SubtendedAngle => "angle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChargeSign {
    /// −1
    Electron,
    /// +1 (hole or positron)
    Hole,
}

impl ChargeSign {
    pub fn value(self) -> f64 {
        match self {
            ChargeSign::Electron => -1.0,
            ChargeSign::Hole => 1.0,
        }
    }

    pub fn for_kind(kind: ModeKind) -> Option<Self> {
        match kind {
            ModeKind::Electron => Some(ChargeSign::Electron),
            ModeKind::Hole => Some(ChargeSign::Hole),
            _ => None,
        }
    }
}

/// Polyline trajectory of a charged particle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticlePath {
    charge: ChargeSign,
    points: Vec<Vec2>,
}

impl ParticlePath {
    pub fn new(charge: ChargeSign, points: Vec<Vec2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if let Some(i) = points.windows(2).position(|w| w[0].distance(w[1]) <= COINCIDENT_TOLERANCE) {
            return Err(GeometryError::RepeatedPoint(i));
        }
        Ok(ParticlePath { charge, points })
    }

    /// Circular arc around `center` from `start` to `end` (radians, signed
    /// sweep), sampled with `segments` chords.
    pub fn arc(charge: ChargeSign, center: Vec2, radius: f64, start: f64, end: f64, segments: usize) -> Result<Self> {
        let n = segments.max(1);
        let points = (0..=n)
            .map(|i| {
                let t = start + (end - start) * i as f64 / n as f64;
                center + Vec2::from_angle(t) * radius
            })
            .collect();
        ParticlePath::new(charge, points)
    }

    pub fn charge(&self) -> ChargeSign {
        self.charge
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn start(&self) -> Vec2 {
        self.points[0]
    }

    pub fn end(&self) -> Vec2 {
        self.points[self.points.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.start().distance(self.end()) <= COINCIDENT_TOLERANCE
    }

    pub fn reversed(&self) -> ParticlePath {
        let mut points = self.points.clone();
        points.reverse();
        ParticlePath { charge: self.charge, points }
    }

    /// Joins `next` onto the end of `self`; the charge of `self` is kept.
    pub fn concat(&self, next: &ParticlePath) -> Result<ParticlePath> {
        if self.end().distance(next.start()) > COINCIDENT_TOLERANCE {
            return Err(GeometryError::Disjoint);
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&next.points[1..]);
        ParticlePath::new(self.charge, points)
    }

    /// The path closed by a straight chord from its end back to its start.
    pub fn closed_by_chord(&self) -> ParticlePath {
        if self.is_closed() {
            return self.clone();
        }
        let mut points = self.points.clone();
        points.push(self.start());
        ParticlePath { charge: self.charge, points }
    }

    fn segments(&self) -> impl Iterator<Item = (usize, Vec2, Vec2)> + '_ {
        self.points.windows(2).enumerate().map(|(i, w)| (i, w[0], w[1]))
    }
}

/// Signed angle subtended at `c` by the segment `p → q`, in (−π, π].
fn segment_angle(p: Vec2, q: Vec2, c: Vec2) -> Option<f64> {
    let (a, b) = (p - c, q - c);
    if on_segment(a, b) {
        return None;
    }
    Some(a.cross(b).atan2(a.dot(b)))
}

/// Whether the origin lies on the segment between `a` and `b` (relative
/// coordinates).
fn on_segment(a: Vec2, b: Vec2) -> bool {
    let (na, nb) = (a.norm(), b.norm());
    if na <= COINCIDENT_TOLERANCE || nb <= COINCIDENT_TOLERANCE {
        return true;
    }
    a.cross(b).abs() <= COLLINEAR_TOLERANCE * na * nb && a.dot(b) <= 0.0
}

/// Total signed angle swept around `point` along the path.
pub fn subtended_angle(path: &ParticlePath, point: Vec2) -> Result<f64> {
    path.segments().try_fold(0.0, |acc, (i, p, q)| {
        segment_angle(p, q, point).map(|a| acc + a).ok_or(GeometryError::PointOnPath(i))
    })
}

/// Winding number of a closed path around `point`.
pub fn winding_number(path: &ParticlePath, point: Vec2) -> Result<i64> {
    if !path.is_closed() {
        return Err(GeometryError::OpenPath);
    }
    let turns = subtended_angle(path, point)? / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= WINDING_TOLERANCE {
        return Err(GeometryError::NonIntegerWinding(turns * TAU));
    }
    Ok(rounded as i64)
}

/// Number of complete loops the path makes around `point`.
///
/// Equals [`winding_number`] for closed paths; for open paths it is the
/// swept angle truncated toward zero to whole turns, which is what "the
/// particle encircles the flux" means when no closing curve is given.
pub fn completed_loops(path: &ParticlePath, point: Vec2) -> Result<i64> {
    if path.is_closed() {
        return winding_number(path, point);
    }
    let turns = subtended_angle(path, point)? / TAU;
    Ok(turns.trunc() as i64)
}

/// Signed number of transversal crossings of the cut ray leaving `fluxon`
/// along `direction`. Crossing counter-clockwise (fluxon on the particle's
/// left) counts +1.
pub fn cut_crossings(path: &ParticlePath, fluxon: &Fluxon, direction: Vec2) -> Result<i64> {
    let f = fluxon.position;
    let side = |v: Vec2| direction.cross(v - f);
    for (i, &v) in path.points.iter().enumerate() {
        let rel = v - f;
        if side(v).abs() <= COLLINEAR_TOLERANCE * rel.norm().max(COINCIDENT_TOLERANCE) && rel.dot(direction) >= 0.0 {
            return Err(GeometryError::DegenerateCrossing(i));
        }
    }
    let mut count = 0;
    for (i, p, q) in path.segments() {
        let (sp, sq) = (side(p), side(q));
        if sp * sq >= 0.0 {
            continue;
        }
        let u = sp / (sp - sq);
        let hit = (p - f) + (q - p) * u;
        let t = hit.dot(direction);
        if t.abs() <= COINCIDENT_TOLERANCE {
            return Err(GeometryError::SingularTrajectory { segment: i, fluxon: 0 });
        }
        if t > 0.0 {
            count += if sp < 0.0 { 1 } else { -1 };
        }
    }
    Ok(count)
}

/// AB phase collected along `path`: Σ charge·2πα·w over fluxons, where `w`
/// is the signed cut-crossing count or the subtended angle over 2π.
///
/// Closed paths give the same value in both gauges. Open paths differ by an
/// endpoint-dependent amount; that difference is gauge freedom.
pub fn ab_phase(path: &ParticlePath, fluxons: &[Fluxon], gauge: &GaugeChoice) -> Result<f64> {
    if let GaugeChoice::SingularCut { directions } = gauge {
        if directions.len() != fluxons.len() {
            return Err(GeometryError::GaugeFluxonMismatch { directions: directions.len(), fluxons: fluxons.len() });
        }
    }
    let q = path.charge.value();
    let mut phase = 0.0;
    for (k, fluxon) in fluxons.iter().enumerate() {
        if !fluxon.position.is_finite() || !fluxon.alpha.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let swept = subtended_angle(path, fluxon.position)
            .map_err(|_| singular_segment(path, fluxon.position, k))?;
        let w = match gauge {
            GaugeChoice::SubtendedAngle if path.is_closed() => winding_number(path, fluxon.position)? as f64,
            GaugeChoice::SubtendedAngle => swept / TAU,
            GaugeChoice::SingularCut { directions } => cut_crossings(path, fluxon, directions[k])
                .map_err(|e| match e {
                    GeometryError::SingularTrajectory { segment, .. } => {
                        GeometryError::SingularTrajectory { segment, fluxon: k }
                    }
                    other => other,
                })? as f64,
        };
        phase += q * TAU * fluxon.alpha * w;
    }
    Ok(phase)
}

fn singular_segment(path: &ParticlePath, c: Vec2, fluxon: usize) -> GeometryError {
    let segment = path.segments().position(|(_, p, q)| on_segment(p - c, q - c)).unwrap_or(0);
    GeometryError::SingularTrajectory { segment, fluxon }
}
