//! JSON wire formats. Every rational travels as an exact `"p/q"` (or `"p"`)
//! string; nothing is ever rounded.
//!
//! Poset: `{"kind":"rn"|"cone"|"orthant"|"finite"|"product", "dim":n,
//! "facets":[[..]], "hasse":[[i,j],..], "factors":[..]}`.
//!
//! Region: `{"kind":"up"|"down", "flavor":"closed"|"open", "gens":[[..]]}`
//! with an optional `"poset"`; convex regions nest as `{"outer":…,
//! "inner":…}`.
//!
//! Module: `{"dim":n, "breakpoints":[[..]], "cells":[{"index":[..],
//! "space":d}], "steps":[{"cell":[..], "axis":i, "matrix":[[..]]}]}`.
//! Omitted cells carry dimension 0 and omitted steps the zero map, except
//! that steps whose endpoints both lie in one of the optional
//! `"constant_regions"` (and have equal dimension) default to the identity —
//! the usual shorthand for indicator-style modules.

use crate::cell::{CellComplex, CellModule, CellMorphism};
use crate::linalg::RatMatrix;
use crate::metrics::{InterleavingCertificate, SuperlinearFamily};
use crate::poset::{Point, PosetSpec};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::region::{ConvexRegion, DownSetRegion, Flavor, Region, UpSetRegion};
use crate::{Error, Result};
use serde_json::{json, Map, Value};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rat_to_value(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::rat::rat_int(i))
            } else {
                Err(bad("non-integer numeric literal; use a \"p/q\" string"))
            }
        }
        _ => Err(bad("expected rational")),
    }
}

pub fn point_to_value(p: &Point) -> Value {
    Value::Array(p.0.iter().map(rat_to_value).collect())
}

pub fn point_from_value(v: &Value) -> Result<Point> {
    let arr = v.as_array().ok_or_else(|| bad("expected coordinate array"))?;
    Ok(Point(arr.iter().map(rat_from_value).collect::<Result<_>>()?))
}

pub fn matrix_to_value(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| rat_to_value(m.get(i, j))).collect()))
            .collect(),
    )
}

/// Row arrays; an empty matrix needs explicit shape, carried separately.
pub fn matrix_from_value(v: &Value, rows: usize, cols: usize) -> Result<RatMatrix> {
    let arr = v.as_array().ok_or_else(|| bad("expected matrix rows"))?;
    if arr.len() != rows {
        return Err(bad(format!("expected {rows} matrix rows, got {}", arr.len())));
    }
    let mut m = RatMatrix::zero(rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad("expected matrix row array"))?;
        if row.len() != cols {
            return Err(bad(format!("expected {cols} matrix columns, got {}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, rat_from_value(e)?);
        }
    }
    Ok(m)
}

pub fn poset_to_value(p: &PosetSpec) -> Value {
    match p {
        PosetSpec::RnStandard(n) => json!({"kind": "rn", "dim": n}),
        PosetSpec::RnNonNeg(n) => json!({"kind": "orthant", "dim": n}),
        PosetSpec::RnCone { dim, facets } => {
            json!({"kind": "cone", "dim": dim, "facets": matrix_to_value(facets)})
        }
        PosetSpec::FinitePoset { count, hasse, .. } => {
            json!({"kind": "finite", "dim": count,
                   "hasse": hasse.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>()})
        }
        PosetSpec::Product(fs) => {
            json!({"kind": "product", "factors": fs.iter().map(poset_to_value).collect::<Vec<_>>()})
        }
    }
}

pub fn poset_from_value(v: &Value) -> Result<PosetSpec> {
    let kind = v["kind"].as_str().ok_or_else(|| bad("poset needs a \"kind\""))?;
    let dim = || -> Result<usize> {
        v["dim"].as_u64().map(|d| d as usize).ok_or_else(|| bad("poset needs a \"dim\""))
    };
    match kind {
        "rn" => Ok(PosetSpec::RnStandard(dim()?)),
        "orthant" => Ok(PosetSpec::RnNonNeg(dim()?)),
        "cone" => {
            let d = dim()?;
            let rows = v["facets"].as_array().ok_or_else(|| bad("cone needs \"facets\""))?.len();
            PosetSpec::cone(matrix_from_value(&v["facets"], rows, d)?)
        }
        "finite" => {
            let count = dim()?;
            let hasse = v["hasse"]
                .as_array()
                .ok_or_else(|| bad("finite poset needs \"hasse\""))?
                .iter()
                .map(|e| {
                    let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("hasse edge"))?;
                    Ok((
                        pair[0].as_u64().ok_or_else(|| bad("hasse edge"))? as usize,
                        pair[1].as_u64().ok_or_else(|| bad("hasse edge"))? as usize,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            PosetSpec::finite(count, hasse)
        }
        "product" => {
            let fs = v["factors"]
                .as_array()
                .ok_or_else(|| bad("product needs \"factors\""))?
                .iter()
                .map(poset_from_value)
                .collect::<Result<Vec<_>>>()?;
            Ok(PosetSpec::Product(fs))
        }
        other => Err(bad(format!("unknown poset kind {other:?}"))),
    }
}

pub fn region_to_value(r: &Region) -> Value {
    let (kind, flavor, gens, poset) = match r {
        Region::Up(u) => ("up", u.flavor, &u.gens, &u.poset),
        Region::Down(d) => ("down", d.flavor, &d.gens, &d.poset),
    };
    json!({
        "kind": kind,
        "flavor": if flavor == Flavor::Closed { "closed" } else { "open" },
        "gens": gens.iter().map(point_to_value).collect::<Vec<_>>(),
        "poset": poset_to_value(poset),
    })
}

pub fn region_from_value(v: &Value) -> Result<Region> {
    let kind = v["kind"].as_str().ok_or_else(|| bad("region needs a \"kind\""))?;
    let flavor = match v["flavor"].as_str() {
        Some("closed") | None => Flavor::Closed,
        Some("open") => Flavor::Open,
        Some(other) => return Err(bad(format!("unknown flavor {other:?}"))),
    };
    let gens: Vec<Point> = v["gens"]
        .as_array()
        .ok_or_else(|| bad("region needs \"gens\""))?
        .iter()
        .map(point_from_value)
        .collect::<Result<_>>()?;
    let poset = if v["poset"].is_null() {
        let n = gens.first().map(|g| g.dim()).ok_or_else(|| bad("empty region needs a \"poset\""))?;
        PosetSpec::RnStandard(n)
    } else {
        poset_from_value(&v["poset"])?
    };
    match kind {
        "up" => Ok(Region::Up(UpSetRegion::new(flavor, gens, poset)?)),
        "down" => Ok(Region::Down(DownSetRegion::new(flavor, gens, poset)?)),
        other => Err(bad(format!("unknown region kind {other:?}"))),
    }
}

pub fn convex_region_to_value(r: &ConvexRegion) -> Value {
    json!({"outer": region_to_value(&r.outer), "inner": region_to_value(&r.inner)})
}

pub fn convex_region_from_value(v: &Value) -> Result<ConvexRegion> {
    ConvexRegion::new(region_from_value(&v["outer"])?, region_from_value(&v["inner"])?)
}

/// Either a plain region or a nested outer/inner pair, as indicator input.
pub fn indicator_from_value(v: &Value) -> Result<CellModule> {
    if v.get("outer").is_some() {
        CellModule::indicator_convex(&convex_region_from_value(v)?)
    } else {
        CellModule::indicator(&region_from_value(v)?)
    }
}

pub fn module_to_value(m: &CellModule) -> Value {
    let cx = &m.complex;
    let mut cells = Vec::new();
    let mut steps = Vec::new();
    for cell in cx.cells() {
        let li = cx.lin(&cell);
        if m.dims[li] > 0 {
            cells.push(json!({"index": cell, "space": m.dims[li]}));
        }
        for (axis, s) in m.steps[li].iter().enumerate() {
            if let Some(s) = s {
                if !s.is_zero() {
                    steps.push(json!({"cell": cell, "axis": axis, "matrix": matrix_to_value(s)}));
                }
            }
        }
    }
    json!({
        "dim": cx.dim,
        "breakpoints": cx
            .breakpoints
            .iter()
            .map(|axis| axis.iter().map(rat_to_value).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "cells": cells,
        "steps": steps,
    })
}

pub fn module_from_value(v: &Value) -> Result<CellModule> {
    let n = v["dim"].as_u64().ok_or_else(|| bad("module needs a \"dim\""))? as usize;
    let bps: Vec<Vec<Rat>> = v["breakpoints"]
        .as_array()
        .ok_or_else(|| bad("module needs \"breakpoints\""))?
        .iter()
        .map(|axis| {
            axis.as_array()
                .ok_or_else(|| bad("breakpoint axis must be an array"))?
                .iter()
                .map(rat_from_value)
                .collect()
        })
        .collect::<Result<_>>()?;
    let complex = CellComplex::new(n, bps)?;
    let total = complex.cell_count();
    let mut dims = vec![0usize; total];
    if let Some(cells) = v["cells"].as_array() {
        for c in cells {
            let idx = cell_index_from(&c["index"], &complex)?;
            dims[complex.lin(&idx)] =
                c["space"].as_u64().ok_or_else(|| bad("cell needs a \"space\""))? as usize;
        }
    }
    let constant: Vec<Region> = match v.get("constant_regions") {
        Some(Value::Array(rs)) => rs.iter().map(region_from_value).collect::<Result<_>>()?,
        _ => Vec::new(),
    };
    let mut given: Map<String, Value> = Map::new();
    if let Some(steps) = v["steps"].as_array() {
        for s in steps {
            let idx = cell_index_from(&s["cell"], &complex)?;
            let axis = s["axis"].as_u64().ok_or_else(|| bad("step needs an \"axis\""))? as usize;
            given.insert(format!("{}:{axis}", complex.lin(&idx)), s["matrix"].clone());
        }
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
            let mat = if let Some(raw) = given.get(&format!("{li}:{a}")) {
                matrix_from_value(raw, dims[ls], dims[li])?
            } else if dims[li] == dims[ls]
                && in_common_constant_region(&constant, &complex, &cell, &s)?
            {
                RatMatrix::identity(dims[li])
            } else {
                RatMatrix::zero(dims[ls], dims[li])
            };
            steps[li][a] = Some(mat);
        }
    }
    CellModule::new(complex, dims, steps)
}

fn cell_index_from(v: &Value, cx: &CellComplex) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| bad("cell index must be an array"))?;
    if arr.len() != cx.dim {
        return Err(bad(format!("cell index needs {} entries", cx.dim)));
    }
    let idx: Vec<usize> = arr
        .iter()
        .map(|e| e.as_u64().map(|x| x as usize).ok_or_else(|| bad("cell index entry")))
        .collect::<Result<_>>()?;
    for (a, &s) in idx.iter().enumerate() {
        if s >= cx.strata(a) {
            return Err(bad(format!("stratum {s} out of range on axis {a}")));
        }
    }
    Ok(idx)
}

fn in_common_constant_region(
    regions: &[Region],
    cx: &CellComplex,
    a: &[usize],
    b: &[usize],
) -> Result<bool> {
    let pa = cx.representative(a);
    let pb = cx.representative(b);
    for r in regions {
        if r.contains(&pa)? && r.contains(&pb)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn family_to_value(f: &SuperlinearFamily) -> Value {
    json!({"v": point_to_value(&f.v)})
}

pub fn family_from_value(v: &Value) -> Result<SuperlinearFamily> {
    SuperlinearFamily::new(point_from_value(&v["v"])?)
}

/// Parses "a,b,c" or "1/2,3" as an exact point; used for CLI flags.
pub fn point_from_csv(s: &str) -> Result<Point> {
    Ok(Point(s.split(',').map(parse_rat).collect::<Result<_>>()?))
}

pub fn morphism_to_value(f: &CellMorphism) -> Value {
    let cx = &f.source.complex;
    let mats: Vec<Value> = cx
        .cells()
        .filter(|c| !f.mats[cx.lin(c)].is_zero())
        .map(|c| json!({"cell": c, "matrix": matrix_to_value(&f.mats[cx.lin(&c)])}))
        .collect();
    json!({
        "source": module_to_value(&f.source),
        "target": module_to_value(&f.target),
        "mats": mats,
    })
}

pub fn morphism_from_value(v: &Value) -> Result<CellMorphism> {
    let source = module_from_value(&v["source"])?;
    let target = module_from_value(&v["target"])?;
    if source.complex != target.complex {
        return Err(Error::ComplexMismatch);
    }
    let cx = source.complex.clone();
    let mut mats: Vec<RatMatrix> = (0..cx.cell_count())
        .map(|i| RatMatrix::zero(target.dims[i], source.dims[i]))
        .collect();
    if let Some(entries) = v["mats"].as_array() {
        for e in entries {
            let idx = cell_index_from(&e["cell"], &cx)?;
            let li = cx.lin(&idx);
            mats[li] = matrix_from_value(&e["matrix"], target.dims[li], source.dims[li])?;
        }
    }
    CellMorphism::new(source, target, mats)
}

pub fn certificate_to_value(c: &InterleavingCertificate) -> Value {
    json!({
        "eps": rat_to_value(&c.eps),
        "f": morphism_to_value(&c.f),
        "g": morphism_to_value(&c.g),
    })
}

pub fn certificate_from_value(v: &Value) -> Result<InterleavingCertificate> {
    Ok(InterleavingCertificate {
        eps: rat_from_value(&v["eps"])?,
        f: morphism_from_value(&v["f"])?,
        g: morphism_from_value(&v["g"])?,
    })
}
