//! Order and way-below oracles for the supported continuous posets.
//!
//! The way-below relation x ≪ y is decided in closed form per variant:
//! strict componentwise inequality on ℝⁿ, the boundary-aware rule on the
//! non-negative orthant (each coordinate strictly increases or the source
//! coordinate is zero), membership of y − x in the open cone for cone orders,
//! and plain ≤ on finite posets, where every element is compact.

use crate::linalg::RatMatrix;
use crate::rat::{rat, rat_int, Rat};
use crate::{Error, Result};
use num::{BigInt, Signed, Zero};

/// Point of a poset: a vector of exact rationals. Finite-poset elements are
/// one-dimensional points holding the element index.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Point(pub Vec<Rat>);

impl Point {
    pub fn from_i64(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    /// Index of a finite-poset element; the single coordinate must be a
    /// non-negative integer below `count`.
    fn finite_index(&self, count: usize) -> Result<usize> {
        if self.0.len() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.0.len() });
        }
        let c = &self.0[0];
        if !c.is_integer() || c.is_negative() {
            return Err(Error::Parse(format!("finite poset element must be an index, got {c}")));
        }
        let idx: usize = c
            .to_integer()
            .try_into()
            .map_err(|_| Error::FiniteElementOutOfRange(usize::MAX))?;
        if idx >= count {
            return Err(Error::FiniteElementOutOfRange(idx));
        }
        Ok(idx)
    }

    pub fn add_scaled(&self, v: &Point, eps: &Rat) -> Point {
        Point(self.0.iter().zip(&v.0).map(|(a, b)| a + eps * b).collect())
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = rat(1, 2);
        Point(self.0.iter().zip(&other.0).map(|(a, b)| (a + b) * &half).collect())
    }
}

/// One of the supported continuous posets.
#[derive(Clone, PartialEq, Debug)]
pub enum PosetSpec {
    /// ℝⁿ with the componentwise order.
    RnStandard(usize),
    /// ℝⁿ ordered by a closed convex proper cone γ = {x : Ax ≥ 0}; `facets`
    /// holds the facet normals A (m×n).
    RnCone { dim: usize, facets: RatMatrix },
    /// The non-negative orthant ℝⁿ_{≥0} as a sub-poset of ℝⁿ.
    RnNonNeg(usize),
    /// Finite poset given by its strict Hasse relation; reachability is the
    /// reflexive-transitive closure, precomputed at construction.
    FinitePoset { count: usize, hasse: Vec<(usize, usize)>, reach: Vec<Vec<bool>> },
    /// Product poset with flattened coordinates.
    Product(Vec<PosetSpec>),
}

impl PosetSpec {
    pub fn finite(count: usize, hasse: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &hasse {
            if a >= count || b >= count {
                return Err(Error::FiniteElementOutOfRange(a.max(b)));
            }
        }
        let mut reach = vec![vec![false; count]; count];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &hasse {
            reach[a][b] = true;
        }
        // Floyd-Warshall
        for k in 0..count {
            for i in 0..count {
                if reach[i][k] {
                    for j in 0..count {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        // acyclic iff no two distinct mutually reachable elements
        for i in 0..count {
            for j in 0..count {
                if i != j && reach[i][j] && reach[j][i] {
                    return Err(Error::CyclicHasse);
                }
            }
        }
        Ok(PosetSpec::FinitePoset { count, hasse, reach })
    }

    pub fn cone(facets: RatMatrix) -> Result<Self> {
        let dim = facets.cols();
        let report = validate_cone(&facets);
        if !report.is_valid() {
            return Err(Error::Precondition(report.describe()));
        }
        Ok(PosetSpec::RnCone { dim, facets })
    }

    /// Ambient coordinate dimension (finite posets use one coordinate).
    pub fn dim(&self) -> usize {
        match self {
            PosetSpec::RnStandard(n) | PosetSpec::RnNonNeg(n) => *n,
            PosetSpec::RnCone { dim, .. } => *dim,
            PosetSpec::FinitePoset { .. } => 1,
            PosetSpec::Product(fs) => fs.iter().map(|f| f.dim()).sum(),
        }
    }

    fn check_dims(&self, pts: &[&Point]) -> Result<()> {
        let n = self.dim();
        for p in pts {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
            }
        }
        Ok(())
    }

    fn check_orthant(&self, pts: &[&Point]) -> Result<()> {
        if matches!(self, PosetSpec::RnNonNeg(_)) {
            for p in pts {
                if p.0.iter().any(|c| c.is_negative()) {
                    return Err(Error::NegativeCoordinate);
                }
            }
        }
        Ok(())
    }

    /// The partial order x ≤ y.
    pub fn le(&self, x: &Point, y: &Point) -> Result<bool> {
        self.check_dims(&[x, y])?;
        self.check_orthant(&[x, y])?;
        Ok(match self {
            PosetSpec::RnStandard(_) | PosetSpec::RnNonNeg(_) => {
                x.0.iter().zip(&y.0).all(|(a, b)| a <= b)
            }
            PosetSpec::RnCone { facets, .. } => {
                let d = diff(y, x);
                facet_values(facets, &d).iter().all(|v| !v.is_negative())
            }
            PosetSpec::FinitePoset { count, reach, .. } => {
                let i = x.finite_index(*count)?;
                let j = y.finite_index(*count)?;
                reach[i][j]
            }
            PosetSpec::Product(fs) => {
                let mut ok = true;
                for (f, (xs, ys)) in split_factors(fs, x, y) {
                    ok &= f.le(&xs, &ys)?;
                    if !ok {
                        break;
                    }
                }
                ok
            }
        })
    }

    /// The way-below relation x ≪ y.
    pub fn way_below(&self, x: &Point, y: &Point) -> Result<bool> {
        self.check_dims(&[x, y])?;
        self.check_orthant(&[x, y])?;
        Ok(match self {
            PosetSpec::RnStandard(_) => x.0.iter().zip(&y.0).all(|(a, b)| a < b),
            PosetSpec::RnNonNeg(_) => x.0.iter().zip(&y.0).all(|(a, b)| a < b || a.is_zero()),
            PosetSpec::RnCone { facets, .. } => {
                let d = diff(y, x);
                facet_values(facets, &d).iter().all(|v| v.is_positive())
            }
            PosetSpec::FinitePoset { .. } => self.le(x, y)?,
            PosetSpec::Product(fs) => {
                let mut ok = true;
                for (f, (xs, ys)) in split_factors(fs, x, y) {
                    ok &= f.way_below(&xs, &ys)?;
                    if !ok {
                        break;
                    }
                }
                ok
            }
        })
    }

    /// Interpolation: given x ≪ z, returns y with x ≪ y ≪ z.
    pub fn interpolate(&self, x: &Point, z: &Point) -> Result<Point> {
        if !self.way_below(x, z)? {
            return Err(Error::Precondition(format!(
                "interpolate requires x way below z, got x={x:?}, z={z:?}"
            )));
        }
        Ok(match self {
            PosetSpec::RnStandard(_) | PosetSpec::RnCone { .. } | PosetSpec::RnNonNeg(_) => {
                x.midpoint(z)
            }
            PosetSpec::FinitePoset { .. } => x.clone(),
            PosetSpec::Product(fs) => {
                let mut coords = Vec::with_capacity(x.dim());
                for (f, (xs, zs)) in split_factors(fs, x, z) {
                    coords.extend(f.interpolate(&xs, &zs)?.0);
                }
                Point(coords)
            }
        })
    }

    /// Componentwise maximum; lattice variants only.
    pub fn join(&self, x: &Point, y: &Point) -> Result<Point> {
        self.check_dims(&[x, y])?;
        self.check_orthant(&[x, y])?;
        match self {
            PosetSpec::RnStandard(_) | PosetSpec::RnNonNeg(_) => {
                Ok(Point(x.0.iter().zip(&y.0).map(|(a, b)| a.max(b).clone()).collect()))
            }
            _ => Err(Error::UnsupportedPoset { op: "join" }),
        }
    }

    /// Componentwise minimum; lattice variants only.
    pub fn meet(&self, x: &Point, y: &Point) -> Result<Point> {
        self.check_dims(&[x, y])?;
        self.check_orthant(&[x, y])?;
        match self {
            PosetSpec::RnStandard(_) | PosetSpec::RnNonNeg(_) => {
                Ok(Point(x.0.iter().zip(&y.0).map(|(a, b)| a.min(b).clone()).collect()))
            }
            _ => Err(Error::UnsupportedPoset { op: "meet" }),
        }
    }

    /// x is compact iff x ≪ x.
    pub fn is_compact(&self, x: &Point) -> Result<bool> {
        self.way_below(x, x)
    }
}

fn diff(y: &Point, x: &Point) -> Vec<Rat> {
    y.0.iter().zip(&x.0).map(|(a, b)| a - b).collect()
}

fn facet_values(facets: &RatMatrix, d: &[Rat]) -> Vec<Rat> {
    (0..facets.rows())
        .map(|i| (0..facets.cols()).map(|j| facets.get(i, j) * &d[j]).sum())
        .collect()
}

fn split_factors<'a>(
    fs: &'a [PosetSpec],
    x: &Point,
    y: &Point,
) -> Vec<(&'a PosetSpec, (Point, Point))> {
    let mut out = Vec::with_capacity(fs.len());
    let mut off = 0;
    for f in fs {
        let d = f.dim();
        out.push((
            f,
            (
                Point(x.0[off..off + d].to_vec()),
                Point(y.0[off..off + d].to_vec()),
            ),
        ));
        off += d;
    }
    out
}

/// Outcome of checking that a facet matrix defines a closed convex proper
/// cone with non-empty interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeReport {
    /// rank(A) = n, so the cone contains no line.
    pub rank_ok: bool,
    /// Ax ≥ 1 is feasible, so the cone has interior points.
    pub interior_ok: bool,
    pub rank: usize,
    pub dim: usize,
}

impl ConeReport {
    pub fn is_valid(&self) -> bool {
        self.rank_ok && self.interior_ok
    }

    pub fn describe(&self) -> String {
        if self.is_valid() {
            "valid cone".to_string()
        } else if !self.rank_ok {
            format!("facet matrix has rank {} < {}; cone is not proper", self.rank, self.dim)
        } else {
            "Ax >= 1 is infeasible; cone has empty interior".to_string()
        }
    }
}

/// Validates a facet matrix: properness via rank, interior via exact
/// Fourier–Motzkin feasibility of Ax ≥ 1.
pub fn validate_cone(facets: &RatMatrix) -> ConeReport {
    let n = facets.cols();
    let rank = facets.rank();
    let rank_ok = rank == n;
    let system: Vec<(Vec<Rat>, Rat)> = (0..facets.rows())
        .map(|i| ((0..n).map(|j| facets.get(i, j).clone()).collect(), rat_int(1)))
        .collect();
    let interior_ok = fourier_motzkin_feasible(system, n);
    ConeReport { rank_ok, interior_ok, rank, dim: n }
}

/// Decides feasibility of a system of inequalities a·x ≥ b by eliminating
/// variables one at a time.
pub fn fourier_motzkin_feasible(mut system: Vec<(Vec<Rat>, Rat)>, nvars: usize) -> bool {
    for var in (0..nvars).rev() {
        let mut pos = Vec::new(); // a_var > 0: x_var >= (b - rest)/a
        let mut neg = Vec::new(); // a_var < 0: x_var <= (b - rest)/a
        let mut rest = Vec::new();
        for (a, b) in system {
            match a[var].cmp(&Rat::zero()) {
                std::cmp::Ordering::Greater => pos.push((a, b)),
                std::cmp::Ordering::Less => neg.push((a, b)),
                std::cmp::Ordering::Equal => rest.push((a, b)),
            }
        }
        // lower bound (from pos) must not exceed upper bound (from neg):
        // combine each pair into a constraint without x_var
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // ap[var] > 0, an[var] < 0; scale to cancel
                let cp = ap[var].clone();
                let cn = -an[var].clone();
                let mut a = vec![Rat::zero(); nvars];
                for j in 0..nvars {
                    if j != var {
                        a[j] = &cn * &ap[j] + &cp * &an[j];
                    }
                }
                let b = &cn * bp + &cp * bn;
                rest.push((a, b));
            }
        }
        system = rest;
    }
    // all variables eliminated: constraints are 0 >= b
    system.iter().all(|(_, b)| !b.is_positive())
}

pub fn orthant_facets(n: usize) -> RatMatrix {
    RatMatrix::identity(n)
}

#[allow(unused)]
fn bigint(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coords: &[i64]) -> Point {
        Point::from_i64(coords)
    }

    #[test]
    fn le_standard_cone_finite() {
        let rn = PosetSpec::RnStandard(2);
        assert!(rn.le(&p(&[0, 0]), &p(&[1, 1])).unwrap());
        let cone = PosetSpec::cone(orthant_facets(2)).unwrap();
        assert!(!cone.le(&p(&[0, 0]), &p(&[1, -1])).unwrap());
        let chain = PosetSpec::finite(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(chain.le(&p(&[0]), &p(&[2])).unwrap());
        assert!(!chain.le(&p(&[2]), &p(&[0])).unwrap());
    }

    #[test]
    fn way_below_rules() {
        let rn = PosetSpec::RnStandard(2);
        assert!(!rn.way_below(&p(&[0, 0]), &p(&[0, 1])).unwrap());
        assert!(rn.way_below(&p(&[0, 0]), &p(&[1, 1])).unwrap());
        let orthant = PosetSpec::RnNonNeg(2);
        assert!(orthant.way_below(&p(&[1, 0]), &p(&[2, 0])).unwrap());
        assert!(!rn.way_below(&p(&[1, 0]), &p(&[2, 0])).unwrap());
        let chain = PosetSpec::finite(2, vec![(0, 1)]).unwrap();
        assert!(chain.way_below(&p(&[0]), &p(&[0])).unwrap());
    }

    #[test]
    fn orthant_rejects_negative_points() {
        let orthant = PosetSpec::RnNonNeg(2);
        assert!(matches!(
            orthant.le(&p(&[-1, 0]), &p(&[0, 0])),
            Err(Error::NegativeCoordinate)
        ));
    }

    #[test]
    fn interpolate_midpoints_and_compact() {
        let rn = PosetSpec::RnStandard(2);
        assert_eq!(rn.interpolate(&p(&[0, 0]), &p(&[2, 2])).unwrap(), p(&[1, 1]));
        let cone = PosetSpec::cone(orthant_facets(2)).unwrap();
        assert_eq!(cone.interpolate(&p(&[0, 0]), &p(&[4, 2])).unwrap(), p(&[2, 1]));
        let chain = PosetSpec::finite(2, vec![(0, 1)]).unwrap();
        assert_eq!(chain.interpolate(&p(&[0]), &p(&[1])).unwrap(), p(&[0]));
        // precondition violation is an error, not a panic
        assert!(rn.interpolate(&p(&[0, 0]), &p(&[0, 1])).is_err());
    }

    #[test]
    fn join_meet() {
        let rn = PosetSpec::RnStandard(2);
        assert_eq!(rn.join(&p(&[1, 0]), &p(&[0, 2])).unwrap(), p(&[1, 2]));
        assert_eq!(rn.meet(&p(&[1, 0]), &p(&[0, 2])).unwrap(), p(&[0, 0]));
        assert_eq!(rn.join(&p(&[1, 1]), &p(&[1, 1])).unwrap(), p(&[1, 1]));
        let chain = PosetSpec::finite(2, vec![(0, 1)]).unwrap();
        assert!(chain.join(&p(&[0]), &p(&[1])).is_err());
    }

    #[test]
    fn compactness() {
        let r1 = PosetSpec::RnStandard(1);
        assert!(!r1.is_compact(&p(&[0])).unwrap());
        let chain = PosetSpec::finite(2, vec![(0, 1)]).unwrap();
        assert!(chain.is_compact(&p(&[1])).unwrap());
        let orthant = PosetSpec::RnNonNeg(2);
        assert!(orthant.is_compact(&p(&[0, 0])).unwrap());
        assert!(!orthant.is_compact(&p(&[1, 0])).unwrap());
    }

    #[test]
    fn cone_validation() {
        assert!(validate_cone(&orthant_facets(2)).is_valid());
        let low_rank = RatMatrix::from_i64_rows(&[&[1, 0]]);
        let r = validate_cone(&low_rank);
        assert!(!r.is_valid() && !r.rank_ok);
        let empty_interior = RatMatrix::from_i64_rows(&[&[1, 0], &[-1, 0], &[0, 1]]);
        let r = validate_cone(&empty_interior);
        assert!(!r.is_valid() && r.rank_ok && !r.interior_ok);
    }

    #[test]
    fn finite_poset_cycle_rejected() {
        assert!(matches!(
            PosetSpec::finite(2, vec![(0, 1), (1, 0)]),
            Err(Error::CyclicHasse)
        ));
    }

    #[test]
    fn product_flattens() {
        let prod = PosetSpec::Product(vec![
            PosetSpec::RnStandard(1),
            PosetSpec::finite(2, vec![(0, 1)]).unwrap(),
        ]);
        assert_eq!(prod.dim(), 2);
        // way-below: strict in the real factor, plain le in the finite one
        assert!(prod.way_below(&p(&[0, 0]), &p(&[1, 0])).unwrap());
        assert!(!prod.way_below(&p(&[0, 0]), &p(&[0, 1])).unwrap());
    }
}
