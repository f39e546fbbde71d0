//! Staircase region algebra: finitely generated up-sets and down-sets with
//! closed or open flavor, their Scott interiors, closures, boundaries, and
//! meagerness tests.
//!
//! Every region is a finite union of basic (way-)up- or down-sets of its
//! generators; all operations act generator-wise. In particular the Scott
//! interior of ∪ ↑x_i is ∪ ⇑x_i and the standard closure of ∪ ⇓x_i is
//! ∪ ↓x_i, so interiors and closures are flavor flips on the same antichain.

use crate::poset::{Point, PosetSpec};
use crate::rat::{rat, rat_int, Rat};
use crate::{Error, Result};
use rand::Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flavor {
    /// Union of basic sets: ↑x (resp. ↓x).
    Closed,
    /// Union of way-sets: ⇑x (resp. ⇓x).
    Open,
}

#[derive(Clone, PartialEq, Debug)]
pub struct UpSetRegion {
    pub flavor: Flavor,
    pub gens: Vec<Point>,
    pub poset: PosetSpec,
}

#[derive(Clone, PartialEq, Debug)]
pub struct DownSetRegion {
    pub flavor: Flavor,
    pub gens: Vec<Point>,
    pub poset: PosetSpec,
}

/// An up-set or down-set region; many operations are kind-generic.
#[derive(Clone, PartialEq, Debug)]
pub enum Region {
    Up(UpSetRegion),
    Down(DownSetRegion),
}

/// Nested difference outer ∖ inner of two same-kind regions; convex when the
/// nesting is proper. This is the carrier of boundary sets ∂U and ∂D.
#[derive(Clone, PartialEq, Debug)]
pub struct ConvexRegion {
    pub outer: Region,
    pub inner: Region,
}

/// Three-valued meagerness verdict. The certificate records the up-to-
/// boundary containment that proves meagerness; the witness is a pair
/// x ≪ y with both points inside the set.
#[derive(Clone, PartialEq, Debug)]
pub enum MeagerVerdict {
    Meager { certificate: String },
    NotMeager { witness: (Point, Point) },
    Unknown,
}

impl UpSetRegion {
    pub fn new(flavor: Flavor, gens: Vec<Point>, poset: PosetSpec) -> Result<Self> {
        let mut r = UpSetRegion { flavor, gens, poset };
        r.reduce()?;
        Ok(r)
    }

    /// Drops generators whose basic set is contained in another generator's.
    /// For both flavors ↑g ⊆ ↑h (and ⇑g ⊆ ⇑h) iff h ≤ g.
    fn reduce(&mut self) -> Result<()> {
        let mut keep: Vec<Point> = Vec::new();
        for g in &self.gens {
            if keep.contains(g) {
                continue;
            }
            let mut dominated = false;
            for h in &self.gens {
                if h != g && self.poset.le(h, g)? && !(self.poset.le(g, h)? && ptr_before(&self.gens, g, h)) {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                keep.push(g.clone());
            }
        }
        self.gens = keep;
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        for g in &self.gens {
            let inside = match self.flavor {
                Flavor::Closed => self.poset.le(g, p)?,
                Flavor::Open => self.poset.way_below(g, p)?,
            };
            if inside {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Scott interior: same generators, open flavor.
    pub fn interior(&self) -> Result<UpSetRegion> {
        match self.poset {
            PosetSpec::RnStandard(_) | PosetSpec::RnCone { .. } => {
                UpSetRegion::new(Flavor::Open, self.gens.clone(), self.poset.clone())
            }
            _ => Err(Error::UnsupportedPoset { op: "interior" }),
        }
    }

    /// Standard-topology closure: same generators, closed flavor.
    pub fn closure(&self) -> Result<UpSetRegion> {
        match self.poset {
            PosetSpec::RnStandard(_) => {
                UpSetRegion::new(Flavor::Closed, self.gens.clone(), self.poset.clone())
            }
            _ => Err(Error::UnsupportedPoset { op: "closure" }),
        }
    }

    pub fn boundary(&self) -> Result<ConvexRegion> {
        Ok(ConvexRegion {
            outer: Region::Up(self.closure()?),
            inner: Region::Up(self.interior()?),
        })
    }

    /// Is the basic set of `g` (with flavor `f`) contained in this region?
    /// Decidable on generators: see the table in `Region::contains_basic`.
    fn contains_basic(&self, f: Flavor, g: &Point) -> Result<bool> {
        for h in &self.gens {
            let ok = match (f, self.flavor) {
                // ↑g ⊆ ∪↑h or ⇑g ⊆ ∪↑h or ⇑g ⊆ ∪⇑h: some h ≤ g
                (Flavor::Closed, Flavor::Closed)
                | (Flavor::Open, Flavor::Closed)
                | (Flavor::Open, Flavor::Open) => self.poset.le(h, g)?,
                // ↑g ⊆ ∪⇑h: g itself must be way above some h
                (Flavor::Closed, Flavor::Open) => self.poset.way_below(h, g)?,
            };
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl DownSetRegion {
    pub fn new(flavor: Flavor, gens: Vec<Point>, poset: PosetSpec) -> Result<Self> {
        let mut r = DownSetRegion { flavor, gens, poset };
        r.reduce()?;
        Ok(r)
    }

    fn reduce(&mut self) -> Result<()> {
        let mut keep: Vec<Point> = Vec::new();
        for g in &self.gens {
            if keep.contains(g) {
                continue;
            }
            let mut dominated = false;
            for h in &self.gens {
                if h != g && self.poset.le(g, h)? && !(self.poset.le(h, g)? && ptr_before(&self.gens, g, h)) {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                keep.push(g.clone());
            }
        }
        self.gens = keep;
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        for g in &self.gens {
            let inside = match self.flavor {
                Flavor::Closed => self.poset.le(p, g)?,
                Flavor::Open => self.poset.way_below(p, g)?,
            };
            if inside {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Standard-topology interior: ⇓ of the same generators.
    pub fn interior(&self) -> Result<DownSetRegion> {
        match self.poset {
            PosetSpec::RnStandard(_) | PosetSpec::RnCone { .. } => {
                DownSetRegion::new(Flavor::Open, self.gens.clone(), self.poset.clone())
            }
            _ => Err(Error::UnsupportedPoset { op: "interior" }),
        }
    }

    /// Scott (= standard) closure of a staircase down-set.
    pub fn closure(&self) -> Result<DownSetRegion> {
        match self.poset {
            PosetSpec::RnStandard(_) => {
                DownSetRegion::new(Flavor::Closed, self.gens.clone(), self.poset.clone())
            }
            _ => Err(Error::UnsupportedPoset { op: "closure" }),
        }
    }

    pub fn boundary(&self) -> Result<ConvexRegion> {
        Ok(ConvexRegion {
            outer: Region::Down(self.closure()?),
            inner: Region::Down(self.interior()?),
        })
    }

    fn contains_basic(&self, f: Flavor, g: &Point) -> Result<bool> {
        for h in &self.gens {
            let ok = match (f, self.flavor) {
                (Flavor::Closed, Flavor::Closed)
                | (Flavor::Open, Flavor::Closed)
                | (Flavor::Open, Flavor::Open) => self.poset.le(g, h)?,
                (Flavor::Closed, Flavor::Open) => self.poset.way_below(g, h)?,
            };
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// True iff the region is open and upward-directed: all pairwise joins of
    /// generators stay inside. These are exactly the supports of the
    /// indecomposable injectives of the quotient by the ephemeral modules.
    pub fn is_injective_indicator_region(&self) -> Result<bool> {
        match self.poset {
            PosetSpec::RnStandard(_) => {}
            _ => return Err(Error::UnsupportedPoset { op: "is_injective_indicator_region" }),
        }
        if self.flavor != Flavor::Open || self.gens.is_empty() {
            return Ok(false);
        }
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let j = self.poset.join(a, b)?;
                if !self.contains(&j)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl Region {
    pub fn poset(&self) -> &PosetSpec {
        match self {
            Region::Up(u) => &u.poset,
            Region::Down(d) => &d.poset,
        }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            Region::Up(u) => u.flavor,
            Region::Down(d) => d.flavor,
        }
    }

    pub fn gens(&self) -> &[Point] {
        match self {
            Region::Up(u) => &u.gens,
            Region::Down(d) => &d.gens,
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        match self {
            Region::Up(u) => u.contains(p),
            Region::Down(d) => d.contains(p),
        }
    }

    pub fn interior(&self) -> Result<Region> {
        Ok(match self {
            Region::Up(u) => Region::Up(u.interior()?),
            Region::Down(d) => Region::Down(d.interior()?),
        })
    }

    pub fn closure(&self) -> Result<Region> {
        Ok(match self {
            Region::Up(u) => Region::Up(u.closure()?),
            Region::Down(d) => Region::Down(d.closure()?),
        })
    }

    pub fn boundary(&self) -> Result<ConvexRegion> {
        match self {
            Region::Up(u) => u.boundary(),
            Region::Down(d) => d.boundary(),
        }
    }

    /// Region containment, decided generator-wise; sound and complete for
    /// staircase regions over ℝⁿ.
    pub fn contains_region(&self, other: &Region) -> Result<bool> {
        match (self, other) {
            (Region::Up(sup), Region::Down(_)) | (Region::Down(_), Region::Up(sup)) => {
                let _ = sup;
                Err(Error::MixedKinds)
            }
            (Region::Up(sup), Region::Up(sub)) => {
                for g in &sub.gens {
                    if !sup.contains_basic(sub.flavor, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Region::Down(sup), Region::Down(sub)) => {
                for g in &sub.gens {
                    if !sup.contains_basic(sub.flavor, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.gens().is_empty()
    }
}

impl ConvexRegion {
    pub fn new(outer: Region, inner: Region) -> Result<Self> {
        match (&outer, &inner) {
            (Region::Up(_), Region::Down(_)) | (Region::Down(_), Region::Up(_)) => {
                return Err(Error::MixedKinds)
            }
            _ => {}
        }
        if !inner.is_empty() && !outer.contains_region(&inner)? {
            return Err(Error::Precondition("inner region not contained in outer".into()));
        }
        Ok(ConvexRegion { outer, inner })
    }

    pub fn poset(&self) -> &PosetSpec {
        self.outer.poset()
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(self.outer.contains(p)? && !self.inner.contains(p)?)
    }

    /// Meagerness test, three-valued.
    ///
    /// Certifies meagerness when the inner region contains the Scott interior
    /// of the outer one, so the difference sits inside cl(R) ∖ Int(R), a
    /// maximal meager set. Refutes by searching generator corners, joins,
    /// midpoints and `samples` random rational pairs for x ≪ y inside the
    /// set. Anything else is reported as unknown.
    pub fn is_meager(&self, seed: u64, samples: usize) -> Result<MeagerVerdict> {
        match self.poset() {
            PosetSpec::RnStandard(_) => {}
            _ => return Err(Error::UnsupportedPoset { op: "is_meager" }),
        }
        let interior = self.outer.interior()?;
        if self.inner.is_empty() {
            if interior.is_empty() {
                return Ok(MeagerVerdict::Meager {
                    certificate: "outer region is empty".into(),
                });
            }
        } else if self.inner.contains_region(&interior)? {
            return Ok(MeagerVerdict::Meager {
                certificate: "inner contains the Scott interior of outer; the difference lies in cl(R) \\ Int(R)".into(),
            });
        }
        if let Some(w) = self.search_witness(seed, samples)? {
            return Ok(MeagerVerdict::NotMeager { witness: w });
        }
        Ok(MeagerVerdict::Unknown)
    }

    fn search_witness(&self, seed: u64, samples: usize) -> Result<Option<(Point, Point)>> {
        let poset = self.poset().clone();
        let n = poset.dim();
        // deterministic candidates: generators, joins, meets, midpoints,
        // and small diagonal perturbations of each
        let mut cands: Vec<Point> = Vec::new();
        let mut all_gens: Vec<Point> = self.outer.gens().to_vec();
        all_gens.extend(self.inner.gens().iter().cloned());
        cands.extend(all_gens.iter().cloned());
        for (i, a) in all_gens.iter().enumerate() {
            for b in &all_gens[i + 1..] {
                cands.push(poset.join(a, b)?);
                cands.push(poset.meet(a, b)?);
                cands.push(a.midpoint(b));
            }
        }
        let offsets = [rat(-1, 2), rat_int(0), rat(1, 2), rat_int(1)];
        let mut shifted = Vec::new();
        for c in &cands {
            for o in &offsets {
                shifted.push(Point(c.0.iter().map(|x| x + o).collect()));
            }
        }
        cands.extend(shifted);
        for (i, a) in cands.iter().enumerate() {
            for b in cands.iter().skip(i) {
                for (x, y) in [(a, b), (b, a)] {
                    if poset.way_below(x, y)? && self.contains(x)? && self.contains(y)? {
                        return Ok(Some((x.clone(), y.clone())));
                    }
                }
            }
        }
        // randomized pairs inside the bounding box of the generators
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = bounding_box(&all_gens, n);
        for _ in 0..samples {
            let x = random_point(&mut rng, &lo, &hi);
            let y = random_point(&mut rng, &lo, &hi);
            if poset.way_below(&x, &y)? && self.contains(&x)? && self.contains(&y)? {
                return Ok(Some((x, y)));
            }
        }
        Ok(None)
    }
}

fn bounding_box(gens: &[Point], n: usize) -> (Vec<Rat>, Vec<Rat>) {
    let mut lo = vec![rat_int(-2); n];
    let mut hi = vec![rat_int(2); n];
    for g in gens {
        for (i, c) in g.0.iter().enumerate() {
            let margin = rat_int(2);
            if c - &margin < lo[i] {
                lo[i] = c - &margin;
            }
            if c + &margin > hi[i] {
                hi[i] = c + &margin;
            }
        }
    }
    (lo, hi)
}

fn random_point(rng: &mut impl Rng, lo: &[Rat], hi: &[Rat]) -> Point {
    Point(
        lo.iter()
            .zip(hi)
            .map(|(l, h)| {
                let den = rng.gen_range(1..=4i64);
                let lo_num = (l * rat_int(den)).floor().to_integer();
                let hi_num = (h * rat_int(den)).ceil().to_integer();
                let lo_i: i64 = lo_num.try_into().unwrap_or(-20);
                let hi_i: i64 = hi_num.try_into().unwrap_or(20);
                rat(rng.gen_range(lo_i..=hi_i.max(lo_i)), den)
            })
            .collect(),
    )
}

// Tie-break for antichain reduction when two generators are order-equivalent
// (equal points already deduped; cone orders may identify distinct points
// only if the cone is not proper, which construction forbids). Keeps the
// earlier occurrence.
fn ptr_before(gens: &[Point], g: &Point, h: &Point) -> bool {
    let ig = gens.iter().position(|x| x == g);
    let ih = gens.iter().position(|x| x == h);
    ig < ih
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Point {
        Point::from_i64(c)
    }

    fn rn2() -> PosetSpec {
        PosetSpec::RnStandard(2)
    }

    fn up(flavor: Flavor, gens: &[&[i64]]) -> UpSetRegion {
        UpSetRegion::new(flavor, gens.iter().map(|g| p(g)).collect(), rn2()).unwrap()
    }

    fn down(flavor: Flavor, gens: &[&[i64]]) -> DownSetRegion {
        DownSetRegion::new(flavor, gens.iter().map(|g| p(g)).collect(), rn2()).unwrap()
    }

    #[test]
    fn contains_examples() {
        assert!(up(Flavor::Closed, &[&[0, 0]]).contains(&p(&[0, 0])).unwrap());
        assert!(!up(Flavor::Open, &[&[0, 0]]).contains(&p(&[0, 1])).unwrap());
        let b = down(Flavor::Closed, &[&[1, 1]]).boundary().unwrap();
        assert!(b.contains(&p(&[1, 0])).unwrap());
        assert!(!b.contains(&p(&[0, 0])).unwrap());
    }

    #[test]
    fn antichain_reduction() {
        let u = up(Flavor::Closed, &[&[0, 0], &[1, 1]]);
        assert_eq!(u.gens, vec![p(&[0, 0])]);
        let d = down(Flavor::Closed, &[&[0, 0], &[1, 1]]);
        assert_eq!(d.gens, vec![p(&[1, 1])]);
        let anti = up(Flavor::Closed, &[&[0, 2], &[2, 0]]);
        assert_eq!(anti.gens.len(), 2);
    }

    #[test]
    fn interior_closure_boundary() {
        let u = up(Flavor::Closed, &[&[0, 2], &[2, 0]]);
        let i = u.interior().unwrap();
        assert_eq!(i.flavor, Flavor::Open);
        assert_eq!(i.gens, u.gens);
        assert_eq!(i.interior().unwrap(), i); // idempotent
        let d = down(Flavor::Open, &[&[1, 1]]);
        let c = d.closure().unwrap();
        assert_eq!(c.flavor, Flavor::Closed);
        assert_eq!(c.closure().unwrap(), c);
        // boundary of up(0,0): points above with some coordinate equal to 0
        let b = up(Flavor::Closed, &[&[0, 0]]).boundary().unwrap();
        assert!(b.contains(&p(&[0, 3])).unwrap());
        assert!(!b.contains(&p(&[1, 1])).unwrap());
        // boundary is flavor-insensitive
        let b2 = down(Flavor::Open, &[&[1, 1]]).boundary().unwrap();
        let b3 = down(Flavor::Closed, &[&[1, 1]]).boundary().unwrap();
        assert_eq!(b2, b3);
    }

    #[test]
    fn interior_down_examples() {
        let d = down(Flavor::Closed, &[&[1, 1]]);
        let i = d.interior().unwrap();
        assert!(i.contains(&p(&[0, 0])).unwrap());
        assert!(!i.contains(&p(&[1, 0])).unwrap());
        let multi = down(Flavor::Closed, &[&[0, 2], &[2, 0]]).interior().unwrap();
        assert_eq!(multi.gens.len(), 2);
        assert_eq!(multi.flavor, Flavor::Open);
    }

    #[test]
    fn boundary_meager_with_certificate() {
        let b = down(Flavor::Closed, &[&[1, 1]]).boundary().unwrap();
        assert!(matches!(b.is_meager(1, 200).unwrap(), MeagerVerdict::Meager { .. }));
        let staircase = up(Flavor::Closed, &[&[0, 2], &[1, 1], &[2, 0]]).boundary().unwrap();
        assert!(matches!(staircase.is_meager(1, 200).unwrap(), MeagerVerdict::Meager { .. }));
    }

    #[test]
    fn non_meager_has_witness() {
        let outer = Region::Up(up(Flavor::Closed, &[&[0, 0]]));
        let inner = Region::Up(up(Flavor::Open, &[&[5, 5]]));
        let s = ConvexRegion::new(outer, inner).unwrap();
        match s.is_meager(7, 1000).unwrap() {
            MeagerVerdict::NotMeager { witness: (x, y) } => {
                let poset = rn2();
                assert!(poset.way_below(&x, &y).unwrap());
                assert!(s.contains(&x).unwrap() && s.contains(&y).unwrap());
            }
            v => panic!("expected witness, got {v:?}"),
        }
    }

    #[test]
    fn injective_indicator_predicate() {
        assert!(down(Flavor::Open, &[&[1, 1]]).is_injective_indicator_region().unwrap());
        assert!(!down(Flavor::Open, &[&[1, 0], &[0, 1]]).is_injective_indicator_region().unwrap());
        assert!(!down(Flavor::Closed, &[&[1, 1]]).is_injective_indicator_region().unwrap());
    }

    #[test]
    fn region_containment_table() {
        let closed = Region::Up(up(Flavor::Closed, &[&[0, 0]]));
        let open = Region::Up(up(Flavor::Open, &[&[0, 0]]));
        assert!(closed.contains_region(&open).unwrap());
        assert!(!open.contains_region(&closed).unwrap());
        let higher = Region::Up(up(Flavor::Closed, &[&[1, 1]]));
        assert!(open.contains_region(&higher).unwrap());
        assert!(closed.contains_region(&higher).unwrap());
    }

    #[test]
    fn convex_region_rejects_bad_nesting() {
        let outer = Region::Up(up(Flavor::Closed, &[&[1, 1]]));
        let inner = Region::Up(up(Flavor::Closed, &[&[0, 0]]));
        assert!(ConvexRegion::new(outer, inner).is_err());
        let up_r = Region::Up(up(Flavor::Closed, &[&[0, 0]]));
        let down_r = Region::Down(down(Flavor::Closed, &[&[5, 5]]));
        assert!(matches!(ConvexRegion::new(up_r, down_r), Err(Error::MixedKinds)));
    }
}
