//! Newton polygons of rational polynomials with respect to a prime:
//! the lower convex hull of the coefficient valuation points, the root
//! valuation profile it encodes, and the polygon-level checks used by
//! the verification suites.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belyi::{certify, CertifyFailure};
use crate::exactnum::{Prime, Rational};
use crate::polyring::{coeff_valuations, divides, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("a nonzero constant term is not allowed here")]
    NonzeroConstantTerm,
    #[error("degree {degree} is not below p = {p}")]
    DegreeNotBelowPrime { degree: usize, p: u64 },
    #[error("not a Belyi polynomial: {0}")]
    NotBelyi(CertifyFailure),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The points (i, nu_p(a_i)) over the nonzero coefficients a_i,
/// in index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffPoints {
    points: Vec<(i64, i64)>,
}

impl CoeffPoints {
    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }
}

/// One lower-boundary segment: slope and horizontal length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Rational,
    pub length: i64,
}

/// Lower boundary of the convex hull of the coefficient points.
/// Vertices are the extreme points only, left to right; slopes of the
/// induced segments are strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    vertices: Vec<(i64, i64)>,
    segments: Vec<Segment>,
}

impl NewtonPolygon {
    fn from_vertices(vertices: Vec<(i64, i64)>) -> Self {
        let segments = vertices
            .windows(2)
            .map(|w| Segment {
                slope: slope(w[0], w[1]),
                length: w[1].0 - w[0].0,
            })
            .collect();
        NewtonPolygon { vertices, segments }
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn leftmost(&self) -> (i64, i64) {
        self.vertices[0]
    }

    fn rightmost(&self) -> (i64, i64) {
        *self.vertices.last().expect("nonempty hull")
    }

    /// Exact point-in-chain test: pt lies on one of the segments (or is
    /// a vertex).
    fn contains_point(&self, pt: (i64, i64)) -> bool {
        if self.vertices.len() == 1 {
            return self.vertices[0] == pt;
        }
        self.vertices.windows(2).any(|w| {
            w[0].0 <= pt.0 && pt.0 <= w[1].0 && cross(w[0], w[1], pt) == 0
        })
    }

    /// True when every point of `self` lies on `other`. Works segment-free:
    /// two x-monotone chains agree on an interval iff they agree at every
    /// vertex of either chain inside it.
    fn contained_in(&self, other: &NewtonPolygon) -> bool {
        let (lo, hi) = (self.leftmost().0, self.rightmost().0);
        if lo < other.leftmost().0 || hi > other.rightmost().0 {
            return false;
        }
        self.vertices.iter().all(|&v| other.contains_point(v))
            && other
                .vertices
                .iter()
                .filter(|v| lo <= v.0 && v.0 <= hi)
                .all(|&v| self.contains_point(v))
    }
}

fn slope(a: (i64, i64), b: (i64, i64)) -> Rational {
    Rational::of(b.1 - a.1, b.0 - a.0)
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Monotone-chain lower hull over points with strictly increasing x.
/// Collinear middle points are absorbed, so only extreme points remain.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Coefficient valuation points of a nonzero polynomial.
pub fn coeff_points(f: &Poly, p: Prime) -> Result<CoeffPoints, NewtonError> {
    if f.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    let points = coeff_valuations(f, p)
        .into_iter()
        .filter_map(|(i, v)| v.finite().map(|v| (i as i64, v)))
        .collect();
    Ok(CoeffPoints { points })
}

pub fn newton_polygon(f: &Poly, p: Prime) -> Result<NewtonPolygon, NewtonError> {
    let pts = coeff_points(f, p)?;
    Ok(NewtonPolygon::from_vertices(lower_hull(pts.points())))
}

/// One profile entry: d roots of the given valuation, read off a segment
/// of slope -valuation and horizontal length d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub valuation: Rational,
    pub multiplicity: usize,
}

/// Root valuation data encoded by the polygon: the multiplicity of the
/// root 0 (x-coordinate of the leftmost vertex) plus one entry per
/// segment. Entries are sorted by decreasing valuation (slopes increase
/// left to right) and multiplicities sum to deg f - zero_multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationProfile {
    pub zero_multiplicity: usize,
    pub entries: Vec<ProfileEntry>,
}

pub fn valuation_profile(f: &Poly, p: Prime) -> Result<ValuationProfile, NewtonError> {
    let polygon = newton_polygon(f, p)?;
    Ok(ValuationProfile {
        zero_multiplicity: polygon.leftmost().0 as usize,
        entries: polygon
            .segments()
            .iter()
            .map(|s| ProfileEntry {
                valuation: -&s.slope,
                multiplicity: s.length as usize,
            })
            .collect(),
    })
}

pub fn is_single_segment(polygon: &NewtonPolygon) -> bool {
    polygon.vertices.len() <= 2
}

/// For f with f(0) = 0 and deg f < p: the polygons of f and x f' agree.
/// (Differentiation scales a_i by i, a unit mod p in this range.)
pub fn check_shift_lemma(f: &Poly, p: Prime) -> Result<bool, NewtonError> {
    let degree = f.degree().ok_or(NewtonError::ZeroPolynomial)?;
    if !f.coeff(0).is_zero() {
        return Err(NewtonError::NonzeroConstantTerm);
    }
    if degree as u64 >= p.get() {
        return Err(NewtonError::DegreeNotBelowPrime { degree, p: p.get() });
    }
    let shifted = &Poly::x() * &f.derivative();
    Ok(newton_polygon(f, p)? == newton_polygon(&shifted, p)?)
}

/// How New_p(f - 1) relates to New_p(f) for f with f(0) = 0: the f - 1
/// polygon should be the chain from the origin to some vertex v_j of
/// New_p(f) followed by the part of New_p(f) right of v_j, with the new
/// initial slope s_0 fitting strictly above s_j and at most s_{j+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusOneReport {
    /// Index of the junction vertex in New_p(f), when one exists.
    pub j: Option<usize>,
    pub junction: Option<(i64, i64)>,
    pub shape_ok: bool,
    pub slope_order_ok: bool,
    /// The polygon of f - 1 itself.
    pub minus_one: NewtonPolygon,
    pub single_segment: bool,
}

pub fn minus_one_relation(f: &Poly, p: Prime) -> Result<MinusOneReport, NewtonError> {
    if f.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    if !f.coeff(0).is_zero() {
        return Err(NewtonError::NonzeroConstantTerm);
    }
    let nf = newton_polygon(f, p)?;
    let ng = newton_polygon(&(f - &Poly::one()), p)?;
    // Leftmost point of the intersection; by the statement being checked
    // it must be a vertex of New_p(f).
    let j = nf.vertices().iter().position(|&v| ng.contains_point(v));
    let (shape_ok, slope_order_ok) = match j {
        None => (false, false),
        Some(j) => {
            let vj = nf.vertices()[j];
            let mut expected = vec![(0, 0)];
            expected.extend_from_slice(&nf.vertices()[j..]);
            // Re-hull to absorb a collinear junction (the s_0 = s_{j+1} case).
            let expected = NewtonPolygon::from_vertices(lower_hull(&expected));
            let s0 = slope((0, 0), vj);
            let left_ok = j == 0 || nf.segments()[j - 1].slope < s0;
            let right_ok = j == nf.segments().len() || s0 <= nf.segments()[j].slope;
            (expected == ng, left_ok && right_ok)
        }
    };
    let single_segment = is_single_segment(&ng);
    Ok(MinusOneReport {
        j,
        junction: j.map(|j| nf.vertices()[j]),
        shape_ok,
        slope_order_ok,
        minus_one: ng,
        single_segment,
    })
}

/// For a certified Belyi polynomial with B(0) = 0: does New_p(B) lie on
/// New_p(B - 1) pointwise? Certification runs internally, so a non-Belyi
/// input is rejected rather than silently measured.
pub fn check_containment(b: &Poly, p: Prime) -> Result<bool, NewtonError> {
    certify(b).map_err(NewtonError::NotBelyi)?;
    if !b.coeff(0).is_zero() {
        return Err(NewtonError::NonzeroConstantTerm);
    }
    let nb = newton_polygon(b, p)?;
    let ng = newton_polygon(&(b - &Poly::one()), p)?;
    Ok(nb.contained_in(&ng))
}

/// Whether f' divides f^2, for nonzero f with f(0) = 0. Over a field of
/// characteristic zero this holds exactly for the monomials.
pub fn divides_square(f: &Poly) -> Result<bool, NewtonError> {
    if f.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    if !f.coeff(0).is_zero() {
        return Err(NewtonError::NonzeroConstantTerm);
    }
    // f(0) = 0 and f nonzero force deg f >= 1, so f' != 0.
    Ok(divides(&f.derivative(), &(f * f))?)
}
