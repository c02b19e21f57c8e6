//! LP polynomials `P_{b,s}(x) = x^{q^s} + b·x^{q^{t-s}}`
//! and the classification of the planes they define.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::LinearizedPoly;
use crate::spread::{gcd, HyperRegulus};
use crate::subspace::{orbit_census, SearchOptions, Subspace2};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct LpParams {
    pub b: Elem,
    pub s: u32,
}

impl LpParams {
    pub fn new(b: Elem, s: u32) -> Self {
        LpParams { b, s }
    }
}

fn check_s(tower: &FieldTower, s: u32) -> Result<()> {
    if s == 0 || s >= tower.t() {
        return Err(Error::InvalidParameter(format!(
            "s must lie in [1, {}), got {s}",
            tower.t()
        )));
    }
    Ok(())
}

pub fn lp_poly(tower: &FieldTower, p: LpParams) -> Result<LinearizedPoly> {
    check_s(tower, p.s)?;
    let t = tower.t();
    let mut coeffs = vec![Elem::ZERO; t as usize];
    coeffs[p.s as usize] = Elem::ONE;
    let i = (t - p.s) as usize;
    coeffs[i] = tower.add(coeffs[i], p.b);
    LinearizedPoly::new(tower, coeffs)
}

/// `N(b) ≠ 1` and `gcd(s, t) = 1`.
pub fn scattered_criterion(tower: &FieldTower, p: LpParams) -> bool {
    tower.rel_norm(p.b) != Elem::ONE && gcd(p.s, tower.t()) == 1
}

/// `{V_{b,d,s}}` over coset representatives `d`, where `V_{b,d,s}` is the
/// graph of `x^{q^s}·d^{1-q^s} + x^{q^{t-s}}·d^{1-q^{t-s}}·b`. Each member
/// is checked against `d·U_{P_{b,s}}`.
pub fn fundamental_hyper_regulus(tower: &FieldTower, p: LpParams) -> Result<HyperRegulus> {
    check_s(tower, p.s)?;
    if !scattered_criterion(tower, p) {
        return Err(Error::NotScattered);
    }
    let t = tower.t();
    let u = Subspace2::from_poly(tower, &lp_poly(tower, p)?);
    let mut components = Vec::with_capacity(tower.coset_count());
    for &d in tower.coset_reps() {
        // d^{1 - q^i} = d / d^{q^i}
        let twist = |i: u32| tower.div(d, tower.frob(d, i)).expect("d is nonzero");
        let mut coeffs = vec![Elem::ZERO; t as usize];
        coeffs[p.s as usize] = twist(p.s);
        let i = (t - p.s) as usize;
        coeffs[i] = tower.add(coeffs[i], tower.mul(twist(t - p.s), p.b));
        let v = Subspace2::from_poly(tower, &LinearizedPoly::new(tower, coeffs)?);
        if v != u.scale(tower, d) {
            return Err(Error::Hypothesis(format!(
                "V_{{b,d,s}} differs from dU_P at d = {}",
                tower.format_elem(d)
            )));
        }
        components.push(v);
    }
    Ok(HyperRegulus { components })
}

/// Applies `(b, s) ↦ (b^{-1}, t - s)` when `s > t/2` (`b = 0` stays `0`).
pub fn reduce(tower: &FieldTower, p: LpParams) -> LpParams {
    let t = tower.t();
    if 2 * p.s > t {
        let b = tower.inv(p.b).unwrap_or(Elem::ZERO);
        LpParams { b, s: t - p.s }
    } else {
        p
    }
}

fn gcd64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Index of the subgroup `{z^{q^{2s}-1}}` in `F_{q^t}^*`, namely
/// `gcd(q^{2s} - 1, q^t - 1)`.
fn image_index(tower: &FieldTower, s: u32) -> u64 {
    let group = tower.order() as u64 - 1;
    let q2s = tower.q_power_mod_group(2 * s);
    gcd64((q2s + group - 1) % group, group).max(1)
}

/// After reduction to `s, s' ≤ t/2`: `s = s'` and `b' = b^σ·z^{q^{2s}-1}`
/// for some automorphism `σ` and some `z`.
pub fn ejj_equivalent(tower: &FieldTower, p: LpParams, other: LpParams) -> Result<bool> {
    check_s(tower, p.s)?;
    check_s(tower, other.s)?;
    if !scattered_criterion(tower, p) || !scattered_criterion(tower, other) {
        return Err(Error::NotScattered);
    }
    let (r, r2) = (reduce(tower, p), reduce(tower, other));
    if r.s != r2.s {
        return Ok(false);
    }
    if r.b.is_zero() || r2.b.is_zero() {
        return Ok(r.b == r2.b);
    }
    let m = image_index(tower, r.s);
    let l2 = tower.log(r2.b).expect("nonzero") as u64;
    Ok((0..tower.degree()).any(|sigma| {
        let l = tower.log(tower.automorphism(r.b, sigma)).expect("nonzero") as u64;
        (l2 + m * tower.order() as u64 - l).is_multiple_of(m)
    }))
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u32
}

/// Number of orbits of `x ↦ x^p` on `elems`.
fn galois_orbits(tower: &FieldTower, elems: &[Elem]) -> u64 {
    let mut seen = vec![false; tower.order() as usize];
    let mut count = 0;
    for &a in elems {
        if seen[a.index()] {
            continue;
        }
        count += 1;
        let mut x = a;
        while !seen[x.index()] {
            seen[x.index()] = true;
            x = tower.automorphism(x, 1);
        }
    }
    count
}

/// Number of planes `A_{P_{b,s}}` up to isomorphism as stated for `q > 3`,
/// `t > 3`: Galois orbits on `F_q \ {0, 1}` for odd `t`, and on
/// `F_{q^2}` minus all `(q-1)`-th powers for even `t`.
pub fn orbit_count_theorem(p: u32, e: u32, t: u32) -> Result<u64> {
    let q = p.pow(e);
    if q <= 3 || t <= 3 {
        return Err(Error::Hypothesis(format!(
            "the orbit count needs q > 3 and t > 3, got q = {q}, t = {t}"
        )));
    }
    let quad = FieldTower::with_default(p, e, 2)?;
    let elems: Vec<Elem> = if t % 2 == 1 {
        quad.subfield()
            .iter()
            .copied()
            .filter(|&a| !a.is_zero() && a != Elem::ONE)
            .collect()
    } else {
        let mut excluded = vec![false; quad.order() as usize];
        for x in quad.elements() {
            excluded[quad.pow(x, q as u64 - 1).index()] = true;
        }
        quad.elements().filter(|a| !excluded[a.index()]).collect()
    };
    Ok(galois_orbits(&quad, &elems))
}

/// `N_{q,t}`, rounded up when the displayed formula is not an integer.
pub fn n_lower_bound(p: u32, e: u32, t: u32) -> u64 {
    let q = p.pow(e) as u64;
    let phi = euler_phi(t) as u64;
    let (num, den) = if t % 2 == 1 {
        ((q - 2) * phi, e as u64 * 2)
    } else {
        ((q * q - 1 - (q + 1)) * phi, 2 * e as u64 * 2)
    };
    num.div_ceil(den)
}

/// The reduced values `s < t/2` with `gcd(s, t) = 1`.
pub fn reduced_s_values(t: u32) -> Vec<u32> {
    (1..t).filter(|&s| 2 * s < t && gcd(s, t) == 1).collect()
}

/// One `b = g^k` per coset of `{z^{q^{2s}-1}}`, keeping those with `N(b) ≠ 1`.
pub fn census_representatives(tower: &FieldTower, s: u32) -> Vec<Elem> {
    (0..image_index(tower, s))
        .map(|k| tower.exp(k))
        .filter(|&b| tower.rel_norm(b) != Elem::ONE)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerS {
    pub s: u32,
    pub representatives: Vec<String>,
    /// Orbits as indices into `representatives`.
    pub orbits: Vec<Vec<usize>>,
    pub classes: usize,
}

/// A pair on which the solver and `ejj_equivalent` differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    /// `[s, b]` of each member.
    pub left: (u32, String),
    pub right: (u32, String),
    pub solver: bool,
    pub ejj: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremMatch {
    pub fixed_s: bool,
    pub all_s: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub q: u32,
    pub t: u32,
    /// The requested `s` after reduction; `None` for all `s`.
    pub s: Option<u32>,
    /// Set when the requested `s` exceeded `t/2`.
    pub reduced_from: Option<u32>,
    pub classes: usize,
    pub theorem_count: Option<u64>,
    pub lower_bound: u64,
    pub agree_solver_vs_ejj: bool,
    pub disagreements: Vec<Disagreement>,
    pub per_s: Vec<PerS>,
    pub total_classes: usize,
    pub theorem_matches: TheoremMatch,
    pub lower_bound_ok: bool,
}

/// Partitions `{U_{P_{b,s}}}` over all reduced `s` and census representatives
/// `b` into `ΓL(2, q^t)`-orbits with the equivalence solver, and compares the
/// partition with `ejj_equivalent`. `classes` is the count for the requested
/// `s`, or the total when `s` is `None`.
pub fn lp_census(tower: &FieldTower, s: Option<u32>, opts: SearchOptions) -> Result<CensusReport> {
    let t = tower.t();
    let (selected, reduced_from) = match s {
        Some(s) => {
            check_s(tower, s)?;
            let r = if 2 * s > t { t - s } else { s };
            if gcd(r, t) != 1 || 2 * r == t {
                return Err(Error::InvalidParameter(format!(
                    "no scattered P_{{b,s}} with s = {s}, t = {t}"
                )));
            }
            (Some(r), (r != s).then_some(s))
        }
        None => (None, None),
    };
    let mut params = Vec::new();
    let mut ranges = Vec::new();
    for s in reduced_s_values(t) {
        let start = params.len();
        params.extend(census_representatives(tower, s).into_iter().map(|b| LpParams { b, s }));
        ranges.push((s, start..params.len()));
    }
    let family = params
        .iter()
        .map(|&p| lp_poly(tower, p))
        .collect::<Result<Vec<_>>>()?;
    let census = orbit_census(tower, &family, opts)?;
    let mut orbit_of = vec![0usize; params.len()];
    for (k, orbit) in census.orbits.iter().enumerate() {
        for &i in orbit {
            orbit_of[i] = k;
        }
    }
    let label = |p: LpParams| (p.s, tower.format_elem(p.b));
    let mut disagreements = Vec::new();
    for i in 0..params.len() {
        for j in i + 1..params.len() {
            let ejj = ejj_equivalent(tower, params[i], params[j])?;
            let solver = orbit_of[i] == orbit_of[j];
            if ejj != solver {
                disagreements.push(Disagreement {
                    left: label(params[i]),
                    right: label(params[j]),
                    solver,
                    ejj,
                });
            }
        }
    }
    let per_s: Vec<PerS> = ranges
        .into_iter()
        .map(|(s, range)| {
            let orbits: Vec<Vec<usize>> = census
                .orbits
                .iter()
                .map(|o| {
                    o.iter()
                        .filter(|&&i| range.contains(&i))
                        .map(|&i| i - range.start)
                        .collect::<Vec<_>>()
                })
                .filter(|o| !o.is_empty())
                .collect();
            PerS {
                s,
                representatives: params[range]
                    .iter()
                    .map(|p| tower.format_elem(p.b))
                    .collect(),
                classes: orbits.len(),
                orbits,
            }
        })
        .collect();
    let total_classes = census.count();
    let classes = match selected {
        Some(s) => per_s.iter().find(|c| c.s == s).map_or(0, |c| c.classes),
        None => total_classes,
    };
    let theorem_count = orbit_count_theorem(tower.p(), tower.e(), t).ok();
    let lower_bound = n_lower_bound(tower.p(), tower.e(), t);
    let matches = |n: usize| theorem_count == Some(n as u64);
    Ok(CensusReport {
        q: tower.q(),
        t,
        s: selected,
        reduced_from,
        classes,
        theorem_count,
        lower_bound,
        agree_solver_vs_ejj: disagreements.is_empty(),
        disagreements,
        theorem_matches: TheoremMatch {
            fixed_s: !per_s.is_empty() && per_s.iter().all(|c| matches(c.classes)),
            all_s: matches(total_classes),
        },
        per_s,
        total_classes,
        lower_bound_ok: total_classes as u64 >= lower_bound,
    })
}
