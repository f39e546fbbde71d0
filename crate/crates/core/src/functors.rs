//! The replacement and socle/radical calculus on cell modules.
//!
//! The lower replacement ⎺M (colimit over points way below) and upper
//! replacement M̲ (limit over points way above) are computed by relabeling
//! strata: on each axis a breakpoint stratum reads its value from the open
//! interval below (⎺) or above (M̲), while intervals are untouched. Because
//! cells are finite and transition maps inside a cell are identities, the
//! colimit/limit over the way-below/way-above set of a point is attained on
//! that neighboring cell.
//!
//! Everything else is exact linear algebra on the two canonical morphisms
//! ⎺M → M and M → M̲: the socle is the kernel of the second, the radical the
//! image of the first, the top its cokernel, and the two degree-one derived
//! functors are the leftover kernel and cokernel of the same morphisms.

use crate::cell::{down_cell, up_cell, CellModule, CellMorphism};
use crate::linalg::RatMatrix;
use crate::Result;

pub struct FunctorReport {
    pub output: CellModule,
    /// The structural morphism attached to the functor: ⎺M → M for the lower
    /// replacement, M → M̲ for the upper one, inclusion for soc/rad,
    /// projection for top.
    pub canonical: Option<CellMorphism>,
    pub is_zero: bool,
}

/// Lower replacement ⎺M with its canonical morphism ⎺M → M.
pub fn overline(m: &CellModule) -> Result<FunctorReport> {
    let relabeled = relabel(m, down_cell)?;
    let mats = relabel_canonical(m, down_cell, true)?;
    let canonical = CellMorphism::new(relabeled.clone(), m.clone(), mats)?;
    let is_zero = relabeled.is_zero();
    Ok(FunctorReport { output: relabeled, canonical: Some(canonical), is_zero })
}

/// Upper replacement M̲ with its canonical morphism M → M̲.
pub fn underline(m: &CellModule) -> Result<FunctorReport> {
    let relabeled = relabel(m, up_cell)?;
    let mats = relabel_canonical(m, up_cell, false)?;
    let canonical = CellMorphism::new(m.clone(), relabeled.clone(), mats)?;
    let is_zero = relabeled.is_zero();
    Ok(FunctorReport { output: relabeled, canonical: Some(canonical), is_zero })
}

/// Module whose value at C is M at `f(C)`; steps are eval composites of M.
fn relabel(m: &CellModule, f: fn(&[usize]) -> Vec<usize>) -> Result<CellModule> {
    let cx = m.complex.clone();
    let total = cx.cell_count();
    let mut dims = vec![0usize; total];
    for cell in cx.cells() {
        dims[cx.lin(&cell)] = m.dim_at_cell(&f(&cell));
    }
    let mut steps = vec![vec![None; cx.dim]; total];
    for cell in cx.cells() {
        let li = cx.lin(&cell);
        for a in 0..cx.dim {
            if cell[a] + 1 >= cx.strata(a) {
                continue;
            }
            let mut s = cell.clone();
            s[a] += 1;
            steps[li][a] = Some(m.eval_cells(&f(&cell), &f(&s))?);
        }
    }
    CellModule::new(cx, dims, steps)
}

/// Matrices of the canonical morphism between M and its relabeling: eval from
/// `f(C)` to C when `from_relabeled`, from C to `f(C)` otherwise.
fn relabel_canonical(
    m: &CellModule,
    f: fn(&[usize]) -> Vec<usize>,
    from_relabeled: bool,
) -> Result<Vec<RatMatrix>> {
    let cx = &m.complex;
    let mut mats = Vec::with_capacity(cx.cell_count());
    for cell in cx.cells() {
        let img = f(&cell);
        mats.push(if from_relabeled {
            m.eval_cells(&img, &cell)?
        } else {
            m.eval_cells(&cell, &img)?
        });
    }
    Ok(mats)
}

/// Sub-module of `f.source` spanned cell-wise by the kernel of `f`, with the
/// inclusion morphism.
pub fn kernel_module(f: &CellMorphism) -> Result<(CellModule, CellMorphism)> {
    let bases: Vec<RatMatrix> = f.mats.iter().map(|m| m.kernel_basis()).collect();
    submodule(&f.source, bases)
}

/// Sub-module of `f.target` spanned cell-wise by the image of `f`, with the
/// inclusion morphism.
pub fn image_module(f: &CellMorphism) -> Result<(CellModule, CellMorphism)> {
    let bases: Vec<RatMatrix> = f.mats.iter().map(|m| m.image_basis()).collect();
    submodule(&f.target, bases)
}

/// Quotient of `f.target` by the cell-wise image of `f`, with the projection
/// morphism.
pub fn cokernel_module(f: &CellMorphism) -> Result<(CellModule, CellMorphism)> {
    let bases: Vec<RatMatrix> = f.mats.iter().map(|m| m.image_basis()).collect();
    quotient_module(&f.target, bases)
}

/// Assembles a sub-module from a choice of basis matrix per cell. The spans
/// must be preserved by the parent's steps; the induced steps are recovered
/// by exact solves and re-validated.
fn submodule(parent: &CellModule, bases: Vec<RatMatrix>) -> Result<(CellModule, CellMorphism)> {
    let cx = parent.complex.clone();
    let total = cx.cell_count();
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut steps = vec![vec![None; cx.dim]; total];
    for cell in cx.cells() {
        let li = cx.lin(&cell);
        for a in 0..cx.dim {
            let s = match parent.succ(&cell, a) {
                Some(s) => s,
                None => continue,
            };
            let ls = cx.lin(&s);
            let mapped = parent.step(&cell, a).unwrap().mul(&bases[li]);
            // coordinates of the mapped span in the successor's basis
            steps[li][a] = Some(bases[ls].solve(&mapped)?);
        }
    }
    let sub = CellModule::new(cx, dims, steps)?;
    let incl = CellMorphism::new(sub.clone(), parent.clone(), bases)?;
    Ok((sub, incl))
}

/// Assembles the quotient of the parent by the span of `bases` per cell.
fn quotient_module(parent: &CellModule, bases: Vec<RatMatrix>) -> Result<(CellModule, CellMorphism)> {
    let cx = parent.complex.clone();
    let total = cx.cell_count();
    let mut projections = Vec::with_capacity(total);
    for (li, b) in bases.iter().enumerate() {
        projections.push(RatMatrix::quotient_map(parent.dims[li], b));
    }
    let dims: Vec<usize> = projections.iter().map(|q| q.rows()).collect();
    let mut steps = vec![vec![None; cx.dim]; total];
    for cell in cx.cells() {
        let li = cx.lin(&cell);
        for a in 0..cx.dim {
            let s = match parent.succ(&cell, a) {
                Some(s) => s,
                None => continue,
            };
            let ls = cx.lin(&s);
            // solve Y · Q_C = Q_succ · step, i.e. Q_Cᵀ Yᵀ = (Q_succ step)ᵀ
            let rhs = projections[ls].mul(parent.step(&cell, a).unwrap()).transpose();
            let y = projections[li].transpose().solve(&rhs)?.transpose();
            steps[li][a] = Some(y);
        }
    }
    let quot = CellModule::new(cx, dims, steps)?;
    let proj = CellMorphism::new(parent.clone(), quot.clone(), projections)?;
    Ok((quot, proj))
}

/// soc = cell-wise kernel of M → M̲, with its inclusion into M.
pub fn scott_socle(m: &CellModule) -> Result<FunctorReport> {
    let under = underline(m)?;
    let (soc, incl) = kernel_module(under.canonical.as_ref().unwrap())?;
    let is_zero = soc.is_zero();
    Ok(FunctorReport { output: soc, canonical: Some(incl), is_zero })
}

/// rad = cell-wise image of ⎺M → M, with its inclusion into M.
pub fn scott_radical(m: &CellModule) -> Result<FunctorReport> {
    let over = overline(m)?;
    let (rad, incl) = image_module(over.canonical.as_ref().unwrap())?;
    let is_zero = rad.is_zero();
    Ok(FunctorReport { output: rad, canonical: Some(incl), is_zero })
}

/// top = M / rad, with the projection from M.
pub fn scott_top(m: &CellModule) -> Result<FunctorReport> {
    let over = overline(m)?;
    let (top, proj) = cokernel_module(over.canonical.as_ref().unwrap())?;
    let is_zero = top.is_zero();
    Ok(FunctorReport { output: top, canonical: Some(proj), is_zero })
}

/// First right-derived socle: cokernel of M → M̲.
pub fn r1_socle(m: &CellModule) -> Result<CellModule> {
    let under = underline(m)?;
    Ok(cokernel_module(under.canonical.as_ref().unwrap())?.0)
}

/// First left-derived top: kernel of ⎺M → M.
pub fn l1_top(m: &CellModule) -> Result<CellModule> {
    let over = overline(m)?;
    Ok(kernel_module(over.canonical.as_ref().unwrap())?.0)
}

/// A module is ephemeral exactly when its lower replacement vanishes.
pub fn is_ephemeral(m: &CellModule) -> Result<bool> {
    Ok(overline(m)?.is_zero)
}

/// Upper semi-continuity: M → M̲ is a cell-wise isomorphism.
pub fn is_upper_semicontinuous(m: &CellModule) -> Result<bool> {
    Ok(underline(m)?.canonical.unwrap().is_isomorphism())
}

/// Lower semi-continuity: ⎺M → M is a cell-wise isomorphism.
pub fn is_lower_semicontinuous(m: &CellModule) -> Result<bool> {
    Ok(overline(m)?.canonical.unwrap().is_isomorphism())
}

/// Canonical lower semi-continuous representative of the direct image in the
/// quotient by the ephemeral modules. Two modules have the same direct image
/// exactly when their representatives agree up to cell-wise isomorphism.
pub fn jstar_representative(m: &CellModule) -> Result<CellModule> {
    Ok(overline(m)?.output)
}

/// Structural equivalence of two independently built modules: equal cell
/// dimensions and equal step ranks on a common refinement. Complete for
/// modules whose steps are determined by their rank pattern (indicator sums
/// and everything this crate constructs from them); a conservative check in
/// general.
pub fn representatives_isomorphic(a: &CellModule, b: &CellModule) -> Result<bool> {
    let (a, b) = a.common_refinement(b)?;
    if a.dims != b.dims {
        return Ok(false);
    }
    let cx = &a.complex;
    for cell in cx.cells() {
        let li = cx.lin(&cell);
        for ax in 0..cx.dim {
            match (&a.steps[li][ax], &b.steps[li][ax]) {
                (Some(x), Some(y)) => {
                    if x.rank() != y.rank() {
                        return Ok(false);
                    }
                }
                (None, None) => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}
