//! Persistence modules over finite posets.
//!
//! Over a finite poset every element is compact (x ≪ x), so the way-below
//! relation coincides with ≤, the limits and colimits defining the
//! replacements are attained at the point itself, and every module is both
//! upper and lower semi-continuous. Only the validation and the trivial
//! replacement identities are provided; the interesting calculus lives on
//! ℝⁿ in [`crate::functors`].

use crate::linalg::RatMatrix;
use crate::poset::PosetSpec;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct FinModule {
    pub poset: PosetSpec,
    pub dims: Vec<usize>,
    /// `maps[i][j]` for every comparable pair i ≤ j; `None` elsewhere.
    pub maps: Vec<Vec<Option<RatMatrix>>>,
}

impl FinModule {
    pub fn new(poset: PosetSpec, dims: Vec<usize>, maps: Vec<Vec<Option<RatMatrix>>>) -> Result<Self> {
        let m = FinModule { poset, dims, maps };
        m.validate()?;
        Ok(m)
    }

    fn reach(&self) -> Result<&Vec<Vec<bool>>> {
        match &self.poset {
            PosetSpec::FinitePoset { reach, .. } => Ok(reach),
            _ => Err(Error::UnsupportedPoset { op: "FinModule requires a finite poset" }),
        }
    }

    /// Checks identities on the diagonal, shapes, and full composition
    /// closure M(j ≤ k) ∘ M(i ≤ j) = M(i ≤ k).
    pub fn validate(&self) -> Result<()> {
        let reach = self.reach()?.clone();
        let n = reach.len();
        if self.dims.len() != n || self.maps.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.dims.len() });
        }
        for i in 0..n {
            for j in 0..n {
                match (&self.maps[i][j], reach[i][j]) {
                    (Some(m), true) => {
                        if m.rows() != self.dims[j] || m.cols() != self.dims[i] {
                            return Err(Error::DimensionMismatch { expected: self.dims[j], got: m.rows() });
                        }
                    }
                    (None, false) => {}
                    _ => return Err(Error::Precondition("map present/absent mismatch".into())),
                }
            }
            if let Some(id) = &self.maps[i][i] {
                if *id != RatMatrix::identity(self.dims[i]) {
                    return Err(Error::Precondition("diagonal map is not the identity".into()));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !reach[i][j] {
                    continue;
                }
                for k in 0..n {
                    if !reach[j][k] {
                        continue;
                    }
                    let composite = self.maps[j][k].as_ref().unwrap().mul(self.maps[i][j].as_ref().unwrap());
                    if &composite != self.maps[i][k].as_ref().unwrap() {
                        return Err(Error::NonCommuting { cell: format!("{i}≤{j}≤{k}"), axis_a: 0, axis_b: 0 });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, i: usize, j: usize) -> Result<&RatMatrix> {
        self.maps
            .get(i)
            .and_then(|row| row.get(j))
            .and_then(|m| m.as_ref())
            .ok_or(Error::Precondition(format!("{i} ≰ {j}")))
    }

    /// ⎺M = M over a finite poset (every element is compact).
    pub fn overline(&self) -> FinModule {
        self.clone()
    }

    /// M̲ = M over a finite poset.
    pub fn underline(&self) -> FinModule {
        self.clone()
    }

    pub fn is_upper_semicontinuous(&self) -> bool {
        true
    }

    pub fn is_lower_semicontinuous(&self) -> bool {
        true
    }

    /// Over a finite poset x ≪ x, so only the zero module is ephemeral.
    pub fn is_ephemeral(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Indicator of the principal up-set of an element.
    pub fn up_indicator(poset: &PosetSpec, gen: usize) -> Result<FinModule> {
        let reach = match poset {
            PosetSpec::FinitePoset { reach, .. } => reach.clone(),
            _ => return Err(Error::UnsupportedPoset { op: "up_indicator" }),
        };
        let n = reach.len();
        if gen >= n {
            return Err(Error::FiniteElementOutOfRange(gen));
        }
        let dims: Vec<usize> = (0..n).map(|i| usize::from(reach[gen][i])).collect();
        let mut maps = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] {
                    maps[i][j] = Some(if dims[i] == 1 && dims[j] == 1 {
                        RatMatrix::identity(1)
                    } else {
                        RatMatrix::zero(dims[j], dims[i])
                    });
                }
            }
        }
        FinModule::new(poset.clone(), dims, maps)
    }

    pub fn direct_sum(&self, other: &FinModule) -> Result<FinModule> {
        if self.poset != other.poset {
            return Err(Error::Precondition("summands over different posets".into()));
        }
        let n = self.dims.len();
        let dims: Vec<usize> = (0..n).map(|i| self.dims[i] + other.dims[i]).collect();
        let mut maps = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (&self.maps[i][j], &other.maps[i][j]) {
                    maps[i][j] = Some(RatMatrix::from_fn(dims[j], dims[i], |r, c| {
                        if r < a.rows() && c < a.cols() {
                            a.get(r, c).clone()
                        } else if r >= a.rows() && c >= a.cols() {
                            b.get(r - a.rows(), c - a.cols()).clone()
                        } else {
                            crate::rat::rat_int(0)
                        }
                    }));
                }
            }
        }
        FinModule::new(self.poset.clone(), dims, maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> PosetSpec {
        // 0 < 1, 0 < 2, 1 < 3, 2 < 3
        PosetSpec::finite(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn indicator_and_sum_validate() {
        let p = diamond();
        let a = FinModule::up_indicator(&p, 1).unwrap();
        assert_eq!(a.dims, vec![0, 1, 0, 1]);
        let b = FinModule::up_indicator(&p, 0).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.dims, vec![1, 2, 1, 2]);
        assert!(s.is_upper_semicontinuous() && s.is_lower_semicontinuous());
        assert_eq!(s.overline(), s);
        assert_eq!(s.underline(), s);
        assert!(!s.is_ephemeral());
    }

    #[test]
    fn broken_composition_rejected() {
        let p = diamond();
        let mut m = FinModule::up_indicator(&p, 0).unwrap();
        m.maps[0][3] = Some(RatMatrix::zero(1, 1));
        assert!(m.validate().is_err());
    }
}
