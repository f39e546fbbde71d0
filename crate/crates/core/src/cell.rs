//! Constructible persistence modules over the rational-grid stratification
//! of ℝⁿ.
//!
//! A [`CellComplex`] records finitely many rational breakpoints per axis.
//! Each axis is cut into `2k+1` strata, alternating open intervals and
//! breakpoints, indexed left to right:
//!
//! ```text
//! 0: (−∞,r_1)   1: {r_1}   2: (r_1,r_2)   …   2k−1: {r_k}   2k: (r_k,∞)
//! ```
//!
//! so even indices are open intervals and odd indices are points. A cell is
//! a product of one stratum per axis, written as its index vector. A
//! [`CellModule`] assigns a finite-dimensional space to every cell and an
//! exact step matrix towards each axis successor; the commuting-square
//! invariant makes evaluation along monotone staircases path-independent.

use crate::linalg::RatMatrix;
use crate::poset::{Point, PosetSpec};
use crate::rat::{rat_int, Rat};
use crate::region::{ConvexRegion, DownSetRegion, Region, UpSetRegion};
use crate::{Error, Result};
use std::collections::BTreeSet;

#[derive(Clone, PartialEq, Debug)]
pub struct CellComplex {
    pub dim: usize,
    /// Strictly increasing breakpoints, one list per axis.
    pub breakpoints: Vec<Vec<Rat>>,
}

impl CellComplex {
    pub fn new(dim: usize, mut breakpoints: Vec<Vec<Rat>>) -> Result<Self> {
        if breakpoints.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: breakpoints.len() });
        }
        for axis in breakpoints.iter_mut() {
            axis.sort();
            axis.dedup();
        }
        Ok(CellComplex { dim, breakpoints })
    }

    /// Number of strata on an axis: 2k+1.
    pub fn strata(&self, axis: usize) -> usize {
        2 * self.breakpoints[axis].len() + 1
    }

    pub fn cell_count(&self) -> usize {
        (0..self.dim).map(|a| self.strata(a)).product::<usize>().max(1)
    }

    /// Mixed-radix linearization of a cell index vector.
    pub fn lin(&self, cell: &[usize]) -> usize {
        let mut idx = 0;
        for a in 0..self.dim {
            idx = idx * self.strata(a) + cell[a];
        }
        idx
    }

    pub fn cells(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let radices: Vec<usize> = (0..self.dim).map(|a| self.strata(a)).collect();
        CellIter { radices, next: Some(vec![0; self.dim]) }
    }

    /// Index of the stratum containing a coordinate on one axis.
    pub fn stratum_of(&self, axis: usize, x: &Rat) -> usize {
        let bps = &self.breakpoints[axis];
        for (j, b) in bps.iter().enumerate() {
            if x < b {
                return 2 * j;
            }
            if x == b {
                return 2 * j + 1;
            }
        }
        2 * bps.len()
    }

    pub fn cell_of_point(&self, p: &Point) -> Result<Vec<usize>> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        Ok((0..self.dim).map(|a| self.stratum_of(a, &p.0[a])).collect())
    }

    /// A point inside the stratum: the breakpoint itself for odd indices, a
    /// midpoint (or unit offset past the range) for intervals.
    pub fn stratum_representative(&self, axis: usize, s: usize) -> Rat {
        let bps = &self.breakpoints[axis];
        let k = bps.len();
        if s % 2 == 1 {
            return bps[(s - 1) / 2].clone();
        }
        let j = s / 2;
        if k == 0 {
            rat_int(0)
        } else if j == 0 {
            &bps[0] - rat_int(1)
        } else if j == k {
            &bps[k - 1] + rat_int(1)
        } else {
            (&bps[j - 1] + &bps[j]) / rat_int(2)
        }
    }

    pub fn representative(&self, cell: &[usize]) -> Point {
        Point((0..self.dim).map(|a| self.stratum_representative(a, cell[a])).collect())
    }

    /// Complex on the union of this axis data and extra breakpoints.
    pub fn with_breakpoints(&self, extra: &[Vec<Rat>]) -> Result<CellComplex> {
        if extra.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: extra.len() });
        }
        let merged = (0..self.dim)
            .map(|a| {
                let mut v = self.breakpoints[a].clone();
                v.extend(extra[a].iter().cloned());
                v
            })
            .collect();
        CellComplex::new(self.dim, merged)
    }

    pub fn union(&self, other: &CellComplex) -> Result<CellComplex> {
        self.with_breakpoints(&other.breakpoints)
    }
}

struct CellIter {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for CellIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        for a in (0..self.radices.len()).rev() {
            nxt[a] += 1;
            if nxt[a] < self.radices[a] {
                self.next = Some(nxt);
                return Some(cur);
            }
            nxt[a] = 0;
        }
        // zero-dimensional complexes have exactly one (empty) cell
        if !self.radices.is_empty() {
            self.next = None;
        }
        Some(cur)
    }
}

/// Odd strata relabeled one step down (towards smaller coordinates); even
/// strata fixed. The cell of points just below a breakpoint configuration.
pub fn down_stratum(s: usize) -> usize {
    if s % 2 == 1 { s - 1 } else { s }
}

/// Odd strata relabeled one step up; even strata fixed.
pub fn up_stratum(s: usize) -> usize {
    if s % 2 == 1 { s + 1 } else { s }
}

pub fn down_cell(cell: &[usize]) -> Vec<usize> {
    cell.iter().map(|&s| down_stratum(s)).collect()
}

pub fn up_cell(cell: &[usize]) -> Vec<usize> {
    cell.iter().map(|&s| up_stratum(s)).collect()
}

#[derive(Clone, PartialEq, Debug)]
pub struct CellModule {
    pub complex: CellComplex,
    /// Space dimension per cell, indexed by [`CellComplex::lin`].
    pub dims: Vec<usize>,
    /// `steps[lin(C)][axis]` maps the space at C to the space at the axis
    /// successor; `None` on the last stratum of the axis.
    pub steps: Vec<Vec<Option<RatMatrix>>>,
}

impl CellModule {
    pub fn new(
        complex: CellComplex,
        dims: Vec<usize>,
        steps: Vec<Vec<Option<RatMatrix>>>,
    ) -> Result<Self> {
        let m = CellModule { complex, dims, steps };
        m.validate()?;
        Ok(m)
    }

    pub fn zero(complex: CellComplex) -> Self {
        let n = complex.cell_count();
        let dim = complex.dim;
        let mut steps = Vec::with_capacity(n);
        for cell in complex.cells() {
            steps.push(
                (0..dim)
                    .map(|a| {
                        if cell[a] + 1 < complex.strata(a) {
                            Some(RatMatrix::zero(0, 0))
                        } else {
                            None
                        }
                    })
                    .collect(),
            );
        }
        CellModule { complex, dims: vec![0; n], steps }
    }

    pub fn dim_at_cell(&self, cell: &[usize]) -> usize {
        self.dims[self.complex.lin(cell)]
    }

    pub fn dim_at(&self, p: &Point) -> Result<usize> {
        Ok(self.dim_at_cell(&self.complex.cell_of_point(p)?))
    }

    pub fn step(&self, cell: &[usize], axis: usize) -> Option<&RatMatrix> {
        self.steps[self.complex.lin(cell)][axis].as_ref()
    }

    pub fn succ(&self, cell: &[usize], axis: usize) -> Option<Vec<usize>> {
        if cell[axis] + 1 < self.complex.strata(axis) {
            let mut c = cell.to_vec();
            c[axis] += 1;
            Some(c)
        } else {
            None
        }
    }

    /// Checks matrix shapes and exact commutation of every step square.
    pub fn validate(&self) -> Result<()> {
        let cx = &self.complex;
        if self.dims.len() != cx.cell_count() || self.steps.len() != cx.cell_count() {
            return Err(Error::DimensionMismatch { expected: cx.cell_count(), got: self.dims.len() });
        }
        for cell in cx.cells() {
            let li = cx.lin(&cell);
            for a in 0..cx.dim {
                match (&self.steps[li][a], self.succ(&cell, a)) {
                    (Some(m), Some(s)) => {
                        let ds = self.dims[cx.lin(&s)];
                        if m.rows() != ds || m.cols() != self.dims[li] {
                            return Err(Error::DimensionMismatch { expected: ds, got: m.rows() });
                        }
                    }
                    (None, None) => {}
                    _ => return Err(Error::Precondition("step present/absent mismatch".into())),
                }
            }
            for a in 0..cx.dim {
                for b in a + 1..cx.dim {
                    let (sa, sb) = match (self.succ(&cell, a), self.succ(&cell, b)) {
                        (Some(sa), Some(sb)) => (sa, sb),
                        _ => continue,
                    };
                    let via_a = self.step(&sa, b).unwrap().mul(self.step(&cell, a).unwrap());
                    let via_b = self.step(&sb, a).unwrap().mul(self.step(&cell, b).unwrap());
                    if via_a != via_b {
                        return Err(Error::NonCommuting { cell: format!("{cell:?}"), axis_a: a, axis_b: b });
                    }
                }
            }
        }
        Ok(())
    }

    /// Indicator module of a region: dimension 1 inside, 0 outside, identity
    /// steps where both cells lie inside.
    pub fn indicator(region: &Region) -> Result<Self> {
        check_rn(region.poset())?;
        let outer = region.clone();
        let inner_gens: Vec<Point> = Vec::new();
        Self::indicator_impl(region.poset().dim(), &outer, None, &inner_gens)
    }

    pub fn indicator_convex(region: &ConvexRegion) -> Result<Self> {
        check_rn(region.poset())?;
        Self::indicator_impl(region.poset().dim(), &region.outer, Some(&region.inner), &[])
    }

    fn indicator_impl(
        n: usize,
        outer: &Region,
        inner: Option<&Region>,
        _unused: &[Point],
    ) -> Result<Self> {
        let mut bps: Vec<BTreeSet<Rat>> = vec![BTreeSet::new(); n];
        let mut add_gens = |gens: &[Point]| {
            for g in gens {
                for (a, c) in g.0.iter().enumerate() {
                    bps[a].insert(c.clone());
                }
            }
        };
        add_gens(outer.gens());
        if let Some(inn) = inner {
            add_gens(inn.gens());
        }
        let complex = CellComplex::new(n, bps.into_iter().map(|s| s.into_iter().collect()).collect())?;
        let member = |cell: &[usize]| -> Result<bool> {
            let p = complex.representative(cell);
            Ok(outer.contains(&p)?
                && match inner {
                    Some(inn) => !inn.contains(&p)?,
                    None => true,
                })
        };
        let total = complex.cell_count();
        let mut dims = vec![0usize; total];
        let mut inside = vec![false; total];
        for cell in complex.cells() {
            let li = complex.lin(&cell);
            inside[li] = member(&cell)?;
            dims[li] = if inside[li] { 1 } else { 0 };
        }
        let mut steps = vec![vec![None; n]; total];
        for cell in complex.cells() {
            let li = complex.lin(&cell);
            for a in 0..n {
                if cell[a] + 1 >= complex.strata(a) {
                    continue;
                }
                let mut s = cell.clone();
                s[a] += 1;
                let ls = complex.lin(&s);
                steps[li][a] = Some(if inside[li] && inside[ls] {
                    RatMatrix::identity(1)
                } else {
                    RatMatrix::zero(dims[ls], dims[li])
                });
            }
        }
        CellModule::new(complex, dims, steps)
    }

    /// Composite of step matrices from one cell to a componentwise-larger
    /// cell; path-independent by the commutation invariant.
    pub fn eval_cells(&self, from: &[usize], to: &[usize]) -> Result<RatMatrix> {
        let cx = &self.complex;
        if from.iter().zip(to).any(|(a, b)| a > b) {
            return Err(Error::Precondition("cells not componentwise ordered".into()));
        }
        let mut cur = from.to_vec();
        let mut acc = RatMatrix::identity(self.dims[cx.lin(from)]);
        for a in 0..cx.dim {
            while cur[a] < to[a] {
                let step = self.step(&cur, a).expect("successor exists below target").clone();
                acc = step.mul(&acc);
                cur[a] += 1;
            }
        }
        Ok(acc)
    }

    /// The internal morphism M(p ≤ q) as an exact matrix.
    pub fn eval_map(&self, p: &Point, q: &Point) -> Result<RatMatrix> {
        let poset = PosetSpec::RnStandard(self.complex.dim);
        if !poset.le(p, q)? {
            return Err(Error::Precondition("eval_map requires p ≤ q".into()));
        }
        self.eval_cells(&self.complex.cell_of_point(p)?, &self.complex.cell_of_point(q)?)
    }

    /// Same module on a finer complex; eval_map is unchanged on all points.
    pub fn refine(&self, extra: &[Vec<Rat>]) -> Result<CellModule> {
        let complex = self.complex.with_breakpoints(extra)?;
        self.transfer(complex)
    }

    pub fn on_complex(&self, target: &CellComplex) -> Result<CellModule> {
        self.transfer(self.complex.union(target)?)
    }

    fn transfer(&self, complex: CellComplex) -> Result<CellModule> {
        let n = complex.dim;
        let total = complex.cell_count();
        let mut dims = vec![0usize; total];
        let mut old_of = vec![Vec::new(); total];
        for cell in complex.cells() {
            let li = complex.lin(&cell);
            let rep = complex.representative(&cell);
            let old = self.complex.cell_of_point(&rep)?;
            dims[li] = self.dims[self.complex.lin(&old)];
            old_of[li] = old;
        }
        let mut steps = vec![vec![None; n]; total];
        for cell in complex.cells() {
            let li = complex.lin(&cell);
            for a in 0..n {
                if cell[a] + 1 >= complex.strata(a) {
                    continue;
                }
                let mut s = cell.clone();
                s[a] += 1;
                let ls = complex.lin(&s);
                steps[li][a] = Some(self.eval_cells(&old_of[li], &old_of[ls])?);
            }
        }
        CellModule::new(complex, dims, steps)
    }

    /// Refines both modules onto the union of their breakpoints.
    pub fn common_refinement(&self, other: &CellModule) -> Result<(CellModule, CellModule)> {
        if self.complex.dim != other.complex.dim {
            return Err(Error::DimensionMismatch { expected: self.complex.dim, got: other.complex.dim });
        }
        let cx = self.complex.union(&other.complex)?;
        Ok((self.transfer(cx.clone())?, other.transfer(cx)?))
    }

    pub fn direct_sum(&self, other: &CellModule) -> Result<CellModule> {
        let (a, b) = self.common_refinement(other)?;
        let cx = a.complex.clone();
        let n = cx.dim;
        let total = cx.cell_count();
        let mut dims = vec![0usize; total];
        for i in 0..total {
            dims[i] = a.dims[i] + b.dims[i];
        }
        let mut steps = vec![vec![None; n]; total];
        for cell in cx.cells() {
            let li = cx.lin(&cell);
            for ax in 0..n {
                let (sa, sb) = match (&a.steps[li][ax], &b.steps[li][ax]) {
                    (Some(sa), Some(sb)) => (sa, sb),
                    _ => continue,
                };
                let rows = sa.rows() + sb.rows();
                let cols = sa.cols() + sb.cols();
                steps[li][ax] = Some(RatMatrix::from_fn(rows, cols, |i, j| {
                    if i < sa.rows() && j < sa.cols() {
                        sa.get(i, j).clone()
                    } else if i >= sa.rows() && j >= sa.cols() {
                        sb.get(i - sa.rows(), j - sa.cols()).clone()
                    } else {
                        rat_int(0)
                    }
                }));
            }
        }
        CellModule::new(cx, dims, steps)
    }

    /// The translated module (T*M)_p = M_{p + εv}: breakpoints move by −εv.
    pub fn shift(&self, v: &Point, eps: &Rat) -> Result<CellModule> {
        let n = self.complex.dim;
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        if v.0.iter().any(|c| c < &rat_int(0)) || eps < &rat_int(0) {
            return Err(Error::Precondition("shift requires v ≥ 0 and ε ≥ 0".into()));
        }
        let bps = (0..n)
            .map(|a| self.complex.breakpoints[a].iter().map(|b| b - eps * &v.0[a]).collect())
            .collect();
        let complex = CellComplex::new(n, bps)?;
        Ok(CellModule { complex, dims: self.dims.clone(), steps: self.steps.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

fn check_rn(poset: &PosetSpec) -> Result<usize> {
    match poset {
        PosetSpec::RnStandard(n) => Ok(*n),
        _ => Err(Error::UnsupportedPoset { op: "cell modules require the standard order on ℝⁿ" }),
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct CellMorphism {
    pub source: CellModule,
    pub target: CellModule,
    /// One matrix per cell of the (shared) complex.
    pub mats: Vec<RatMatrix>,
}

impl CellMorphism {
    pub fn new(source: CellModule, target: CellModule, mats: Vec<RatMatrix>) -> Result<Self> {
        let f = CellMorphism { source, target, mats };
        f.validate()?;
        Ok(f)
    }

    /// Shape and exact naturality check on every cell and axis.
    pub fn validate(&self) -> Result<()> {
        if self.source.complex != self.target.complex {
            return Err(Error::Precondition("morphism endpoints live on different complexes".into()));
        }
        let cx = &self.source.complex;
        if self.mats.len() != cx.cell_count() {
            return Err(Error::DimensionMismatch { expected: cx.cell_count(), got: self.mats.len() });
        }
        for cell in cx.cells() {
            let li = cx.lin(&cell);
            let m = &self.mats[li];
            if m.rows() != self.target.dims[li] || m.cols() != self.source.dims[li] {
                return Err(Error::DimensionMismatch { expected: self.target.dims[li], got: m.rows() });
            }
            for a in 0..cx.dim {
                let s = match self.source.succ(&cell, a) {
                    Some(s) => s,
                    None => continue,
                };
                let ls = cx.lin(&s);
                let lhs = self.target.step(&cell, a).unwrap().mul(m);
                let rhs = self.mats[ls].mul(self.source.step(&cell, a).unwrap());
                if lhs != rhs {
                    return Err(Error::NonCommuting { cell: format!("{cell:?}"), axis_a: a, axis_b: a });
                }
            }
        }
        Ok(())
    }

    pub fn mat_at_cell(&self, cell: &[usize]) -> &RatMatrix {
        &self.mats[self.source.complex.lin(cell)]
    }

    /// The same morphism on a finer complex.
    pub fn on_complex(&self, target: &CellComplex) -> Result<CellMorphism> {
        let cx = self.source.complex.union(target)?;
        let source = self.source.on_complex(&cx)?;
        let tgt = self.target.on_complex(&cx)?;
        let mats = cx
            .cells()
            .map(|c| {
                let rep = cx.representative(&c);
                let old = self.source.complex.cell_of_point(&rep)?;
                Ok(self.mats[self.source.complex.lin(&old)].clone())
            })
            .collect::<Result<_>>()?;
        CellMorphism::new(source, tgt, mats)
    }

    /// Applies the translation to both endpoints; matrices are unchanged.
    pub fn shift(&self, v: &Point, eps: &Rat) -> Result<CellMorphism> {
        CellMorphism::new(self.source.shift(v, eps)?, self.target.shift(v, eps)?, self.mats.clone())
    }

    pub fn compose(&self, then: &CellMorphism) -> Result<CellMorphism> {
        if then.source.dims != self.target.dims || then.source.complex != self.target.complex {
            return Err(Error::Precondition("composition endpoints do not match".into()));
        }
        let mats = self
            .mats
            .iter()
            .zip(&then.mats)
            .map(|(f, g)| g.mul(f))
            .collect();
        CellMorphism::new(self.source.clone(), then.target.clone(), mats)
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// Cell-wise isomorphism test: square and full rank everywhere.
    pub fn is_isomorphism(&self) -> bool {
        self.mats
            .iter()
            .all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }
}

/// Dimensions and step matrices on the integer points of a box [a,b] ⊂ ℤⁿ.
/// Feeds [`from_grid_encoding`].
#[derive(Clone, Debug)]
pub struct GridModule {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// One dimension per integer point, row-major over the box.
    pub dims: Vec<usize>,
    /// `steps[point][axis]`: map towards the next grid point; `None` at the
    /// upper face.
    pub steps: Vec<Vec<Option<RatMatrix>>>,
}

impl GridModule {
    fn side(&self, a: usize) -> usize {
        (self.hi[a] - self.lo[a] + 1) as usize
    }

    fn lin(&self, pt: &[i64]) -> usize {
        let mut idx = 0;
        for a in 0..self.lo.len() {
            idx = idx * self.side(a) + (pt[a] - self.lo[a]) as usize;
        }
        idx
    }

    fn validate(&self) -> Result<()> {
        let n = self.lo.len();
        if self.hi.len() != n || self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return Err(Error::Precondition("bad grid box".into()));
        }
        let mut pts = vec![self.lo.clone()];
        let mut all = Vec::new();
        while let Some(p) = pts.pop() {
            all.push(p.clone());
            // enumerate by incrementing trailing coordinates
            for a in (0..n).rev() {
                if p[a] < self.hi[a] && p[a + 1..] == self.lo[a + 1..] {
                    let mut q = p.clone();
                    q[a] += 1;
                    pts.push(q);
                }
            }
        }
        for p in &all {
            let lp = self.lin(p);
            for a in 0..n {
                for b in a + 1..n {
                    if p[a] >= self.hi[a] || p[b] >= self.hi[b] {
                        continue;
                    }
                    let mut pa = p.clone();
                    pa[a] += 1;
                    let mut pb = p.clone();
                    pb[b] += 1;
                    let via_a = self.steps[self.lin(&pa)][b]
                        .as_ref()
                        .unwrap()
                        .mul(self.steps[lp][a].as_ref().unwrap());
                    let via_b = self.steps[self.lin(&pb)][a]
                        .as_ref()
                        .unwrap()
                        .mul(self.steps[lp][b].as_ref().unwrap());
                    if via_a != via_b {
                        return Err(Error::NonCommuting { cell: format!("{p:?}"), axis_a: a, axis_b: b });
                    }
                }
            }
        }
        Ok(())
    }

    /// π_i(x) = max(a_i, min(⌈x_i⌉, b_i)) on one axis.
    fn project(&self, a: usize, x: &Rat) -> i64 {
        let ceil: i64 = x.ceil().to_integer().try_into().unwrap_or(i64::MAX);
        ceil.clamp(self.lo[a], self.hi[a])
    }
}

/// Pullback π*N along the convex projection onto the integer box: value on a
/// cell is N at the π-image of any interior point. The breakpoints are the
/// integers of the box, and the result is lower semi-continuous.
pub fn from_grid_encoding(grid: &GridModule) -> Result<CellModule> {
    grid.validate()?;
    let n = grid.lo.len();
    let bps: Vec<Vec<Rat>> = (0..n)
        .map(|a| (grid.lo[a]..=grid.hi[a]).map(rat_int).collect())
        .collect();
    let complex = CellComplex::new(n, bps)?;
    let total = complex.cell_count();
    let mut dims = vec![0usize; total];
    let mut image = vec![Vec::new(); total];
    for cell in complex.cells() {
        let li = complex.lin(&cell);
        let rep = complex.representative(&cell);
        let pt: Vec<i64> = (0..n).map(|a| grid.project(a, &rep.0[a])).collect();
        dims[li] = grid.dims[grid.lin(&pt)];
        image[li] = pt;
    }
    let mut steps = vec![vec![None; n]; total];
    for cell in complex.cells() {
        let li = complex.lin(&cell);
        for a in 0..n {
            if cell[a] + 1 >= complex.strata(a) {
                continue;
            }
            let mut s = cell.clone();
            s[a] += 1;
            let ls = complex.lin(&s);
            steps[li][a] = Some(if image[li] == image[ls] {
                RatMatrix::identity(dims[li])
            } else {
                // π-images differ by one step along axis a
                grid.steps[grid.lin(&image[li])][a].as_ref().unwrap().clone()
            });
        }
    }
    CellModule::new(complex, dims, steps)
}

/// Sections of M over a finitely generated up-set: the equalizer
/// ker(∏_i M_{g_i} ⇉ ∏_{i<j} M_{g_i∨g_j}). Open-flavor regions take stalks
/// on the cell just above each generator (the limit over ⇑g is attained
/// there because that cell is co-initial in ⇑g).
pub struct SectionsResult {
    pub dim: usize,
    /// Kernel basis as columns, in ⊕_i M_{g_i} coordinates.
    pub basis: RatMatrix,
    pub stalk_dims: Vec<usize>,
}

pub fn sections(m: &CellModule, u: &UpSetRegion) -> Result<SectionsResult> {
    check_rn(&u.poset)?;
    if u.gens.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let open = u.flavor == crate::region::Flavor::Open;
    let poset = u.poset.clone();
    let joins: Vec<Point> = pairwise(&u.gens, |a, b| poset.join(a, b))?;
    let m = refine_with_points(m, u.gens.iter().chain(&joins))?;
    let stalk_cell = |p: &Point| -> Result<Vec<usize>> {
        let c = m.complex.cell_of_point(p)?;
        Ok(if open { up_cell(&c) } else { c })
    };
    let cells: Vec<Vec<usize>> = u.gens.iter().map(|g| stalk_cell(g)).collect::<Result<_>>()?;
    let stalk_dims: Vec<usize> = cells.iter().map(|c| m.dim_at_cell(c)).collect();
    let total: usize = stalk_dims.iter().sum();
    let offsets: Vec<usize> = stalk_dims
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    // difference map into ⊕_{i<j} M at the join cells
    let mut rows: Vec<RatMatrix> = Vec::new();
    let mut jidx = 0;
    for i in 0..u.gens.len() {
        for j in i + 1..u.gens.len() {
            let jc = stalk_cell(&joins[jidx])?;
            jidx += 1;
            let ai = m.eval_cells(&cells[i], &jc)?;
            let aj = m.eval_cells(&cells[j], &jc)?;
            let r = ai.rows();
            let mut block = RatMatrix::zero(r, total);
            for c in 0..ai.cols() {
                for rr in 0..r {
                    block.set(rr, offsets[i] + c, ai.get(rr, c).clone());
                }
            }
            for c in 0..aj.cols() {
                for rr in 0..r {
                    block.set(rr, offsets[j] + c, -aj.get(rr, c).clone());
                }
            }
            rows.push(block);
        }
    }
    let system = stack_rows(rows, total);
    let basis = system.kernel_basis();
    Ok(SectionsResult { dim: basis.cols(), basis, stalk_dims })
}

/// Cosections of M over a finitely generated down-set: the coequalizer dual,
/// computed as coker(⊕_{i<j} M_{g_i∧g_j} → ⊕_i M_{g_i}).
pub fn cosections(m: &CellModule, d: &DownSetRegion) -> Result<usize> {
    check_rn(&d.poset)?;
    if d.gens.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let open = d.flavor == crate::region::Flavor::Open;
    let poset = d.poset.clone();
    let meets: Vec<Point> = pairwise(&d.gens, |a, b| poset.meet(a, b))?;
    let m = refine_with_points(m, d.gens.iter().chain(&meets))?;
    let stalk_cell = |p: &Point| -> Result<Vec<usize>> {
        let c = m.complex.cell_of_point(p)?;
        Ok(if open { down_cell(&c) } else { c })
    };
    let cells: Vec<Vec<usize>> = d.gens.iter().map(|g| stalk_cell(g)).collect::<Result<_>>()?;
    let stalk_dims: Vec<usize> = cells.iter().map(|c| m.dim_at_cell(c)).collect();
    let total: usize = stalk_dims.iter().sum();
    let offsets: Vec<usize> = stalk_dims
        .iter()
        .scan(0, |acc, dd| {
            let o = *acc;
            *acc += dd;
            Some(o)
        })
        .collect();
    let mut cols: Vec<RatMatrix> = Vec::new();
    let mut midx = 0;
    for i in 0..d.gens.len() {
        for j in i + 1..d.gens.len() {
            let mc = stalk_cell(&meets[midx])?;
            midx += 1;
            let bi = m.eval_cells(&mc, &cells[i])?;
            let bj = m.eval_cells(&mc, &cells[j])?;
            let w = bi.cols();
            let mut block = RatMatrix::zero(total, w);
            for c in 0..w {
                for rr in 0..bi.rows() {
                    block.set(offsets[i] + rr, c, bi.get(rr, c).clone());
                }
                for rr in 0..bj.rows() {
                    block.set(offsets[j] + rr, c, -bj.get(rr, c).clone());
                }
            }
            cols.push(block);
        }
    }
    let mut system = RatMatrix::zero(total, 0);
    for b in cols {
        system = system.hstack(&b);
    }
    Ok(total - system.rank())
}

fn pairwise(
    gens: &[Point],
    mut op: impl FnMut(&Point, &Point) -> Result<Point>,
) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            out.push(op(&gens[i], &gens[j])?);
        }
    }
    Ok(out)
}

fn refine_with_points<'a>(
    m: &CellModule,
    pts: impl Iterator<Item = &'a Point>,
) -> Result<CellModule> {
    let n = m.complex.dim;
    let mut extra: Vec<Vec<Rat>> = vec![Vec::new(); n];
    for p in pts {
        for (a, c) in p.0.iter().enumerate() {
            extra[a].push(c.clone());
        }
    }
    m.refine(&extra)
}

fn stack_rows(rows: Vec<RatMatrix>, cols: usize) -> RatMatrix {
    let mut acc = RatMatrix::zero(0, cols);
    for r in rows {
        acc = acc.vstack(&r);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::region::Flavor;
    use rand::{Rng, SeedableRng};

    fn p(c: &[i64]) -> Point {
        Point::from_i64(c)
    }

    fn rn2() -> PosetSpec {
        PosetSpec::RnStandard(2)
    }

    fn down_region(flavor: Flavor, gens: &[&[i64]]) -> Region {
        Region::Down(
            DownSetRegion::new(flavor, gens.iter().map(|g| p(g)).collect(), rn2()).unwrap(),
        )
    }

    fn up_region(flavor: Flavor, gens: &[&[i64]]) -> Region {
        Region::Up(UpSetRegion::new(flavor, gens.iter().map(|g| p(g)).collect(), rn2()).unwrap())
    }

    #[test]
    fn indicator_matches_contains() {
        let r = down_region(Flavor::Closed, &[&[1, 1]]);
        let m = CellModule::indicator(&r).unwrap();
        assert_eq!(m.dim_at(&p(&[1, 1])).unwrap(), 1);
        assert_eq!(m.dim_at(&Point(vec![rat(3, 2), rat_int(0)])).unwrap(), 0);
        let open_up = up_region(Flavor::Open, &[&[0, 0]]);
        let mo = CellModule::indicator(&open_up).unwrap();
        assert_eq!(mo.dim_at(&p(&[0, 0])).unwrap(), 0);
        // boundary indicator
        let b = DownSetRegion::new(Flavor::Closed, vec![p(&[1, 1])], rn2())
            .unwrap()
            .boundary()
            .unwrap();
        let mb = CellModule::indicator_convex(&b).unwrap();
        assert_eq!(mb.dim_at(&p(&[1, 0])).unwrap(), 1);
        assert_eq!(mb.dim_at(&p(&[0, 0])).unwrap(), 0);
    }

    #[test]
    fn eval_map_examples() {
        let m = CellModule::indicator(&down_region(Flavor::Closed, &[&[1, 1]])).unwrap();
        let id = m.eval_map(&p(&[0, 0]), &p(&[1, 1])).unwrap();
        assert_eq!(id, RatMatrix::identity(1));
        let z = m.eval_map(&p(&[0, 0]), &p(&[2, 0])).unwrap();
        assert_eq!(z.rows(), 0);
        assert_eq!(z.cols(), 1);
        assert!(m.eval_map(&p(&[1, 0]), &p(&[0, 0])).is_err());
        // identity within a cell
        let w = m
            .eval_map(&Point(vec![rat(1, 4), rat(1, 4)]), &Point(vec![rat(1, 2), rat(1, 3)]))
            .unwrap();
        assert_eq!(w, RatMatrix::identity(1));
    }

    #[test]
    fn path_independence_random() {
        // random two-generator staircase; eval along extreme paths agrees
        let m = CellModule::indicator(&up_region(Flavor::Closed, &[&[0, 2], &[2, 0]])).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = rat(rng.gen_range(-6..6), rng.gen_range(1..3));
            let b = rat(rng.gen_range(-6..6), rng.gen_range(1..3));
            let da = rat(rng.gen_range(0..8), 1);
            let db = rat(rng.gen_range(0..8), 1);
            let pp = Point(vec![a.clone(), b.clone()]);
            let qq = Point(vec![a + da, b + db]);
            let cf = m.complex.cell_of_point(&pp).unwrap();
            let ct = m.complex.cell_of_point(&qq).unwrap();
            // axis-0-first composition (eval_cells) vs axis-1-first
            let first = m.eval_cells(&cf, &ct).unwrap();
            let mid = vec![cf[0], ct[1]];
            let second = m.eval_cells(&mid, &ct).unwrap().mul(&m.eval_cells(&cf, &mid).unwrap());
            assert_eq!(first, second);
        }
    }

    #[test]
    fn refine_and_shift_preserve_eval() {
        let m = CellModule::indicator(&down_region(Flavor::Closed, &[&[1, 1]])).unwrap();
        let r = m.refine(&[vec![rat_int(5)], vec![rat(1, 2)]]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = rat(rng.gen_range(-4..4), rng.gen_range(1..4));
            let y = rat(rng.gen_range(-4..4), rng.gen_range(1..4));
            let d0 = rat(rng.gen_range(0..6), 1);
            let d1 = rat(rng.gen_range(0..6), 1);
            let pp = Point(vec![x.clone(), y.clone()]);
            let qq = Point(vec![x + d0, y + d1]);
            assert_eq!(m.eval_map(&pp, &qq).unwrap(), r.eval_map(&pp, &qq).unwrap());
        }
        // shift(k[↑(0,0)], v=(1,1), ε=1) = k[↑(−1,−1)]
        let up = CellModule::indicator(&up_region(Flavor::Closed, &[&[0, 0]])).unwrap();
        let s = up.shift(&p(&[1, 1]), &rat_int(1)).unwrap();
        assert_eq!(s.dim_at(&p(&[-1, -1])).unwrap(), 1);
        assert_eq!(s.dim_at(&p(&[-2, 0])).unwrap(), 0);
        let expect = CellModule::indicator(&up_region(Flavor::Closed, &[&[-1, -1]])).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn direct_sum_dims_add() {
        let a = CellModule::indicator(&down_region(Flavor::Closed, &[&[1, 1]])).unwrap();
        let b = CellModule::indicator(&up_region(Flavor::Closed, &[&[0, 0]])).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.dim_at(&p(&[0, 0])).unwrap(), 2);
        assert_eq!(s.dim_at(&p(&[2, 2])).unwrap(), 1);
        assert_eq!(s.dim_at(&p(&[-1, 3])).unwrap(), 0);
        s.validate().unwrap();
    }

    #[test]
    fn grid_encoding_pullback() {
        // n=1, box [0,2], N = (k --id--> k --0--> 0) gives k[(−∞,1]]
        let grid = GridModule {
            lo: vec![0],
            hi: vec![2],
            dims: vec![1, 1, 0],
            steps: vec![
                vec![Some(RatMatrix::identity(1))],
                vec![Some(RatMatrix::zero(0, 1))],
                vec![None],
            ],
        };
        let m = from_grid_encoding(&grid).unwrap();
        let expect = CellModule::indicator(&Region::Down(
            DownSetRegion::new(Flavor::Closed, vec![Point::from_i64(&[1])], PosetSpec::RnStandard(1))
                .unwrap(),
        ))
        .unwrap();
        let (a, b) = m.common_refinement(&expect).unwrap();
        assert_eq!(a, b);
        // constant N = k everywhere pulls back to the constant module
        let konst = GridModule {
            lo: vec![0],
            hi: vec![1],
            dims: vec![1, 1],
            steps: vec![vec![Some(RatMatrix::identity(1))], vec![None]],
        };
        let mk = from_grid_encoding(&konst).unwrap();
        assert!(mk.dims.iter().all(|&d| d == 1));
    }

    #[test]
    fn sections_examples() {
        let m = CellModule::indicator(&down_region(Flavor::Closed, &[&[3, 3]])).unwrap();
        let u = UpSetRegion::new(
            Flavor::Closed,
            vec![p(&[2, 0]), p(&[0, 2])],
            rn2(),
        )
        .unwrap();
        assert_eq!(sections(&m, &u).unwrap().dim, 1);
        let m1 = CellModule::indicator(&down_region(Flavor::Closed, &[&[1, 1]])).unwrap();
        let principal = UpSetRegion::new(Flavor::Closed, vec![p(&[0, 0])], rn2()).unwrap();
        assert_eq!(sections(&m1, &principal).unwrap().dim, 1);
        let outside = UpSetRegion::new(Flavor::Closed, vec![p(&[2, 2])], rn2()).unwrap();
        assert_eq!(sections(&m1, &outside).unwrap().dim, 0);
        let empty = UpSetRegion::new(Flavor::Closed, vec![], rn2()).unwrap();
        assert!(matches!(sections(&m1, &empty), Err(Error::EmptyRegion)));
    }

    #[test]
    fn sections_principal_is_stalk() {
        let m = CellModule::indicator(&up_region(Flavor::Closed, &[&[0, 2], &[2, 0]])).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let x = p(&[rng.gen_range(-3..5), rng.gen_range(-3..5)]);
            let u = UpSetRegion::new(Flavor::Closed, vec![x.clone()], rn2()).unwrap();
            assert_eq!(sections(&m, &u).unwrap().dim, m.dim_at(&x).unwrap());
        }
    }

    #[test]
    fn cosections_examples() {
        let m = CellModule::indicator(&up_region(Flavor::Closed, &[&[0, 0]])).unwrap();
        let d1 = DownSetRegion::new(Flavor::Closed, vec![p(&[1, 1])], rn2()).unwrap();
        assert_eq!(cosections(&m, &d1).unwrap(), 1);
        let d2 = DownSetRegion::new(Flavor::Closed, vec![p(&[-1, -1])], rn2()).unwrap();
        assert_eq!(cosections(&m, &d2).unwrap(), 0);
        let md = CellModule::indicator(&down_region(Flavor::Closed, &[&[1, 1]])).unwrap();
        assert_eq!(cosections(&md, &d1).unwrap(), 1);
    }

    #[test]
    fn morphism_naturality_enforced() {
        let big = CellModule::indicator(&down_region(Flavor::Closed, &[&[2, 2]])).unwrap();
        let small = CellModule::indicator(&down_region(Flavor::Closed, &[&[1, 1]])).unwrap();
        let (big, small) = big.common_refinement(&small).unwrap();
        // restriction onto the smaller down-set: identity where both live
        let mats: Vec<RatMatrix> = (0..big.complex.cell_count())
            .map(|i| RatMatrix::scalar(small.dims[i], big.dims[i], rat_int(1)))
            .collect();
        let f = CellMorphism::new(big.clone(), small.clone(), mats).unwrap();
        assert!(!f.is_zero());
        // the reverse direction is not natural: identities k[↓(1,1)] → k[↓(2,2)]
        // break on the square leaving the smaller support
        let mats_bad: Vec<RatMatrix> = (0..big.complex.cell_count())
            .map(|i| RatMatrix::scalar(big.dims[i], small.dims[i], rat_int(1)))
            .collect();
        assert!(CellMorphism::new(small, big, mats_bad).is_err());
    }
}
