//! Translation planes `A(B)`: points are the vectors of `F_{q^t}^2`, lines
//! the cosets `V + w` of spread components `V`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::LinearizedPoly;
use crate::spread::{verify_planar, Spread};
use crate::subspace::{
    equivalence_fast, pack, stabilizer_order, unpack, Group, SearchOptions, SemilinearMap,
};

/// Direct verification runs only when `q^{2t}` is at most this.
pub const DIRECT_LIMIT: u64 = 1 << 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AffineMode {
    Structural,
    Direct,
}

impl std::str::FromStr for AffineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structural" => Ok(AffineMode::Structural),
            "direct" => Ok(AffineMode::Direct),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

/// The coset `V_component + rep`, with `rep` its least packed vector.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub component: usize,
    pub rep: u64,
}

#[derive(Clone, Debug)]
pub struct TranslationPlane<'a> {
    tower: &'a FieldTower,
    spread: Spread,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineReport {
    pub mode: AffineMode,
    pub passed: bool,
    pub failure: Option<String>,
    /// Two points witnessing the failure.
    pub witness: Option<[[String; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneReport {
    pub points: u64,
    pub lines: u64,
    pub affine_axioms: String,
    #[serde(rename = "collineation_order_GL", skip_serializing_if = "Option::is_none")]
    pub collineation_order_gl: Option<u64>,
}

/// Fails unless `spread` is planar.
pub fn plane_from_spread(tower: &FieldTower, spread: Spread) -> Result<TranslationPlane<'_>> {
    let report = verify_planar(tower, &spread);
    if !report.planar {
        return Err(Error::InvalidParameter(format!(
            "spread is not planar: {}",
            report.failure.unwrap_or_default()
        )));
    }
    Ok(TranslationPlane { tower, spread })
}

impl<'a> TranslationPlane<'a> {
    /// No planarity check; used to exercise the verifier on broken input.
    pub fn new_unchecked(tower: &'a FieldTower, spread: Spread) -> Self {
        TranslationPlane { tower, spread }
    }

    pub fn spread(&self) -> &Spread {
        &self.spread
    }

    pub fn point_count(&self) -> u64 {
        let n = self.tower.order() as u64;
        n * n
    }

    /// Each component of size `q^t` has `q^t` cosets.
    pub fn line_count(&self) -> u64 {
        let n2 = self.point_count();
        self.spread
            .components()
            .iter()
            .map(|c| n2 / c.space.len().max(1) as u64)
            .sum()
    }

    fn translate(&self, v: u64, w: u64) -> u64 {
        let n = self.tower.order();
        let (x1, y1) = unpack(n, v);
        let (x2, y2) = unpack(n, w);
        pack(n, self.tower.add(x1, x2), self.tower.add(y1, y2))
    }

    /// The line of parallel class `component` through `point`.
    pub fn line_through(&self, component: usize, point: u64) -> Line {
        let space = &self.spread.components()[component].space;
        let rep = space
            .packed()
            .iter()
            .map(|&u| self.translate(point, u))
            .min()
            .unwrap_or(point);
        Line { component, rep }
    }

    pub fn points_on(&self, line: Line) -> Vec<u64> {
        let mut pts: Vec<u64> = self.spread.components()[line.component]
            .space
            .packed()
            .iter()
            .map(|&u| self.translate(line.rep, u))
            .collect();
        pts.sort_unstable();
        pts
    }

    /// Every line, as explicit sorted point lists.
    fn explicit_lines(&self) -> Vec<(Line, Vec<u64>)> {
        let total = self.point_count();
        (0..self.spread.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut seen = vec![false; total as usize];
                let mut lines = Vec::new();
                for v in 0..total {
                    if seen[v as usize] {
                        continue;
                    }
                    let line = self.line_through(i, v);
                    let pts = self.points_on(line);
                    for &p in &pts {
                        seen[p as usize] = true;
                    }
                    lines.push((line, pts));
                }
                lines
            })
            .collect()
    }

    fn format_point(&self, v: u64) -> [String; 2] {
        let (x, y) = unpack(self.tower.order(), v);
        [self.tower.format_elem(x), self.tower.format_elem(y)]
    }
}

/// Structural mode checks the spread; direct mode checks the two-point
/// axiom and Playfair's axiom on explicit lines.
pub fn verify_affine(plane: &TranslationPlane, mode: AffineMode) -> Result<AffineReport> {
    match mode {
        AffineMode::Structural => {
            let r = verify_planar(plane.tower, &plane.spread);
            let witness = r.witness.map(|w| [plane.format_point(0), w]);
            Ok(AffineReport {
                mode,
                passed: r.planar,
                failure: r.failure,
                witness,
            })
        }
        AffineMode::Direct => verify_direct(plane),
    }
}

fn verify_direct(plane: &TranslationPlane) -> Result<AffineReport> {
    let total = plane.point_count();
    if total > DIRECT_LIMIT {
        return Err(Error::GuardExceeded {
            what: "direct affine verification",
            size: total,
            limit: DIRECT_LIMIT,
        });
    }
    let lines = plane.explicit_lines();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); total as usize];
    for (k, (_, pts)) in lines.iter().enumerate() {
        for &p in pts {
            through[p as usize].push(k);
        }
    }
    let fail = |failure: &str, p: u64, q: u64| AffineReport {
        mode: AffineMode::Direct,
        passed: false,
        failure: Some(failure.to_string()),
        witness: Some([plane.format_point(p), plane.format_point(q)]),
    };

    // Two distinct points lie on exactly one common line.
    let two_point = (0..total).into_par_iter().find_map_first(|p| {
        let mut hits = vec![0u32; total as usize];
        for &k in &through[p as usize] {
            for &q in &lines[k].1 {
                hits[q as usize] += 1;
            }
        }
        (0..total).find(|&q| q != p && hits[q as usize] != 1).map(|q| {
            let why = if hits[q as usize] == 0 {
                "two points on no common line"
            } else {
                "two points on several lines"
            };
            (why, p, q)
        })
    });
    if let Some((why, p, q)) = two_point {
        return Ok(fail(why, p, q));
    }

    // Through a point off a line there is exactly one line missing it.
    let playfair = (0..lines.len()).into_par_iter().find_map_first(|k| {
        let mut on = vec![false; total as usize];
        for &p in &lines[k].1 {
            on[p as usize] = true;
        }
        let mut parallels = vec![0u32; total as usize];
        for (_, pts) in &lines {
            if pts.iter().all(|&p| !on[p as usize]) {
                for &p in pts {
                    parallels[p as usize] += 1;
                }
            }
        }
        (0..total)
            .find(|&p| !on[p as usize] && parallels[p as usize] != 1)
            .map(|p| (p, lines[k].0.rep))
    });
    if let Some((p, rep)) = playfair {
        return Ok(fail("parallel axiom fails", p, rep));
    }
    Ok(AffineReport {
        mode: AffineMode::Direct,
        passed: true,
        failure: None,
        witness: None,
    })
}

/// `A_f ≅ A_{f'}` iff `U_f` and `U_{f'}` are `ΓL(2, q^t)`-equivalent; returns
/// the witness `λ`.
pub fn planes_isomorphic(
    tower: &FieldTower,
    f: &LinearizedPoly,
    target: &LinearizedPoly,
    opts: SearchOptions,
) -> Result<Option<SemilinearMap>> {
    if tower.q() <= 3 {
        return Err(Error::Hypothesis(format!(
            "the isomorphism criterion needs q > 3, got q = {}",
            tower.q()
        )));
    }
    if !f.is_scattered(tower)? || !target.is_scattered(tower)? {
        return Err(Error::NotScattered);
    }
    equivalence_fast(tower, f, target, opts)
}

/// Order of the collineation group of `A_f` fixing the origin, inside `G`.
pub fn collineation_order(
    tower: &FieldTower,
    f: &LinearizedPoly,
    group: Group,
    opts: SearchOptions,
) -> Result<u64> {
    stabilizer_order(tower, f, group, opts)
}

pub fn plane_report(
    plane: &TranslationPlane,
    mode: AffineMode,
    collineation_order_gl: Option<u64>,
) -> Result<PlaneReport> {
    let affine = verify_affine(plane, mode)?;
    Ok(PlaneReport {
        points: plane.point_count(),
        lines: plane.line_count(),
        affine_axioms: if affine.passed { "pass" } else { "fail" }.to_string(),
        collineation_order_gl,
    })
}

/// The point `(x, y)` as a plane index.
pub fn point(tower: &FieldTower, x: Elem, y: Elem) -> u64 {
    pack(tower.order(), x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spread::{desarguesian, spread_from_poly};

    fn gf16() -> FieldTower {
        FieldTower::with_default(2, 2, 2).unwrap()
    }

    fn scattered(tower: &FieldTower) -> LinearizedPoly {
        let w = tower.nonzero().find(|&w| tower.rel_norm(w) != Elem::ONE).unwrap();
        LinearizedPoly::monomial(tower, w, 1)
    }

    #[test]
    fn counts_at_q4_t2() {
        let f = gf16();
        let plane = plane_from_spread(&f, spread_from_poly(&f, &scattered(&f)).unwrap()).unwrap();
        assert_eq!((plane.point_count(), plane.line_count()), (256, 272));
        let line = plane.line_through(3, point(&f, Elem(5), Elem(9)));
        assert_eq!(plane.points_on(line).len(), 16);
    }

    #[test]
    fn parallel_class_partitions_points() {
        let f = gf16();
        let plane = plane_from_spread(&f, desarguesian(&f).unwrap()).unwrap();
        let mut all: Vec<u64> = Vec::new();
        let mut reps = std::collections::BTreeSet::new();
        for v in 0..256 {
            let l = plane.line_through(4, v);
            if reps.insert(l.rep) {
                all.extend(plane.points_on(l));
            }
        }
        all.sort_unstable();
        assert_eq!(all, (0..256).collect::<Vec<_>>());
    }

    #[test]
    fn direct_and_structural_agree() {
        let f = gf16();
        for spread in [desarguesian(&f).unwrap(), spread_from_poly(&f, &scattered(&f)).unwrap()] {
            let plane = plane_from_spread(&f, spread.clone()).unwrap();
            assert!(verify_affine(&plane, AffineMode::Direct).unwrap().passed);
            assert!(verify_affine(&plane, AffineMode::Structural).unwrap().passed);
            let mut broken = spread.components().to_vec();
            broken.remove(2);
            let bad = TranslationPlane::new_unchecked(&f, Spread::new_unchecked(broken));
            let r = verify_affine(&bad, AffineMode::Direct).unwrap();
            assert!(!r.passed && r.witness.is_some());
            assert!(!verify_affine(&bad, AffineMode::Structural).unwrap().passed);
        }
    }

    #[test]
    fn non_planar_spread_rejected() {
        let f = gf16();
        let mut comps = desarguesian(&f).unwrap().components().to_vec();
        comps.push(comps[1].clone());
        assert!(plane_from_spread(&f, Spread::new_unchecked(comps)).is_err());
    }

    #[test]
    fn isomorphism_preconditions() {
        let f = FieldTower::with_default(3, 1, 3).unwrap();
        let p = LinearizedPoly::monomial(&f, Elem::ONE, 1);
        assert!(matches!(
            planes_isomorphic(&f, &p, &p, SearchOptions::default()),
            Err(Error::Hypothesis(_))
        ));
        let g = gf16();
        let id = LinearizedPoly::identity(&g);
        assert_eq!(
            planes_isomorphic(&g, &id, &scattered(&g), SearchOptions::default()),
            Err(Error::NotScattered)
        );
    }
}
