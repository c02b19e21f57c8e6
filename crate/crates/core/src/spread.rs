//! Planar spreads of `F_{q^t}^2` seen as a `2t`-dimensional `F_q`-space:
//! the Desarguesian spread `D`, the spread `B_f` obtained from `D` by one
//! hyper-regulus replacement, and André replacements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::LinearizedPoly;
use crate::subspace::{pack, unpack, Subspace2};

/// Spreads are materialized only when `q^{2t}` is at most this.
pub const SPREAD_LIMIT: u64 = 1 << 22;

/// Where a component came from. The derived order is the canonical
/// component order: `V_∞`, then lines by slope, then replaced components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentTag {
    Infinity,
    /// `⟨(1, m)⟩_{F_{q^t}}`.
    Line(Elem),
    /// A component of a replacement set, labelled by `h` (for `hU_f`) or by
    /// the slope `m` of an André component `{(x, m·x^{q^s})}`.
    Replaced(Elem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub tag: ComponentTag,
    pub space: Subspace2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spread {
    components: Vec<Component>,
}

/// A partial spread of `(q^t - 1)/(q - 1)` pairwise complementary subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperRegulus {
    pub components: Vec<Subspace2>,
}

impl HyperRegulus {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// All vectors covered, sorted and packed.
    pub fn cover(&self) -> Vec<u64> {
        let mut all: Vec<u64> = self
            .components
            .iter()
            .flat_map(|c| c.packed().iter().copied())
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Same components as sets, in any order.
    pub fn same_components(&self, other: &HyperRegulus) -> bool {
        let key = |h: &HyperRegulus| {
            let mut v: Vec<&[u64]> = h.components.iter().map(|c| c.packed()).collect();
            v.sort_unstable();
            v.into_iter().map(|s| s.to_vec()).collect::<Vec<_>>()
        };
        key(self) == key(other)
    }
}

/// Inner and outer hyper-reguli of a net replacement.
#[derive(Clone, Debug)]
pub struct ReplacementPair {
    /// `{⟨(1, m)⟩ : m ∈ L_f}`.
    pub inner: HyperRegulus,
    /// `{hU_f}`, one `h` per coset of `F_q^*`.
    pub outer: HyperRegulus,
    pub cover_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarReport {
    pub planar: bool,
    pub components: usize,
    pub failure: Option<String>,
    /// A vector witnessing the failure, `[x, y]`.
    pub witness: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpreadReport {
    pub components: usize,
    pub planar: bool,
    pub replaced: usize,
    pub desarguesian: usize,
    pub tags: Vec<String>,
}

fn check_guard(tower: &FieldTower) -> Result<()> {
    let size = tower.order() as u64 * tower.order() as u64;
    if size > SPREAD_LIMIT {
        return Err(Error::GuardExceeded {
            what: "spread materialization",
            size,
            limit: SPREAD_LIMIT,
        });
    }
    Ok(())
}

fn require_scattered(tower: &FieldTower, f: &LinearizedPoly) -> Result<()> {
    if f.is_scattered(tower)? {
        Ok(())
    } else {
        Err(Error::NotScattered)
    }
}

impl Spread {
    /// Sorts into canonical order; no planarity check.
    pub fn new_unchecked(mut components: Vec<Component>) -> Self {
        components.sort_by_key(|a| a.tag);
        Spread { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Componentwise set equality, ignoring tags and order.
    pub fn same_components(&self, other: &Spread) -> bool {
        let key = |s: &Spread| {
            let mut v: Vec<&[u64]> = s.components.iter().map(|c| c.space.packed()).collect();
            v.sort_unstable();
            v.into_iter().map(|s| s.to_vec()).collect::<Vec<_>>()
        };
        self.len() == other.len() && key(self) == key(other)
    }

    pub fn format_tag(tower: &FieldTower, tag: ComponentTag) -> String {
        match tag {
            ComponentTag::Infinity => "inf".to_string(),
            ComponentTag::Line(m) => format!("line:{}", tower.format_elem(m)),
            ComponentTag::Replaced(h) => format!("replaced:{}", tower.format_elem(h)),
        }
    }

    pub fn report(&self, tower: &FieldTower) -> SpreadReport {
        let replaced = self
            .components
            .iter()
            .filter(|c| matches!(c.tag, ComponentTag::Replaced(_)))
            .count();
        SpreadReport {
            components: self.len(),
            planar: verify_planar(tower, self).planar,
            replaced,
            desarguesian: self.len() - replaced,
            tags: self
                .components
                .iter()
                .map(|c| Self::format_tag(tower, c.tag))
                .collect(),
        }
    }
}

/// `D = {⟨v⟩_{F_{q^t}}}`: `V_∞` and the lines `⟨(1, m)⟩`.
pub fn desarguesian(tower: &FieldTower) -> Result<Spread> {
    check_guard(tower)?;
    let mut components = vec![Component {
        tag: ComponentTag::Infinity,
        space: Subspace2::vertical(tower),
    }];
    components.extend(tower.elements().map(|m| Component {
        tag: ComponentTag::Line(m),
        space: Subspace2::line(tower, m),
    }));
    Ok(Spread::new_unchecked(components))
}

/// `B_f`: `V_∞`, the lines `⟨(1, m)⟩` with `m ∉ L_f`, and `hU_f` for one
/// `h` per coset of `F_q^*` in `F_{q^t}^*`.
pub fn spread_from_poly(tower: &FieldTower, f: &LinearizedPoly) -> Result<Spread> {
    check_guard(tower)?;
    require_scattered(tower, f)?;
    let pair = hyper_regulus_pair(tower, f)?;
    let ls = f.linear_set(tower)?;
    let mut components = vec![Component {
        tag: ComponentTag::Infinity,
        space: Subspace2::vertical(tower),
    }];
    components.extend(
        tower
            .elements()
            .filter(|&m| !ls.contains(m))
            .map(|m| Component {
                tag: ComponentTag::Line(m),
                space: Subspace2::line(tower, m),
            }),
    );
    components.extend(
        tower
            .coset_reps()
            .iter()
            .zip(pair.outer.components)
            .map(|(&h, space)| Component {
                tag: ComponentTag::Replaced(h),
                space,
            }),
    );
    Ok(Spread::new_unchecked(components))
}

/// Size `q^t + 1`, every component of size `q^t`, and every nonzero vector
/// in exactly one component.
pub fn verify_planar(tower: &FieldTower, spread: &Spread) -> PlanarReport {
    let n = tower.order();
    let fail = |failure: &str, vector: Option<u64>| PlanarReport {
        planar: false,
        components: spread.len(),
        failure: Some(failure.to_string()),
        witness: vector.map(|v| {
            let (x, y) = unpack(n, v);
            [tower.format_elem(x), tower.format_elem(y)]
        }),
    };
    if spread.len() != n as usize + 1 {
        return fail("wrong number of components", None);
    }
    if let Some(c) = spread.components.iter().find(|c| c.space.len() != n as usize) {
        let first = c.space.packed().first().copied();
        return fail("component of wrong size", first);
    }
    let total = n as usize * n as usize;
    let mut cover = vec![0u8; total];
    for c in &spread.components {
        for &v in c.space.packed() {
            cover[v as usize] = cover[v as usize].saturating_add(1);
        }
    }
    if let Some(v) = (1..total).find(|&v| cover[v] > 1) {
        return fail("components overlap", Some(v as u64));
    }
    if let Some(v) = (1..total).find(|&v| cover[v] == 0) {
        return fail("vector not covered", Some(v as u64));
    }
    PlanarReport {
        planar: true,
        components: spread.len(),
        failure: None,
        witness: None,
    }
}

/// The hyper-regulus `{⟨(1, m)⟩ : m ∈ L_f}` and its replacement `{hU_f}`.
pub fn hyper_regulus_pair(tower: &FieldTower, f: &LinearizedPoly) -> Result<ReplacementPair> {
    check_guard(tower)?;
    require_scattered(tower, f)?;
    let ls = f.linear_set(tower)?;
    let inner = HyperRegulus {
        components: ls.slopes.iter().map(|&m| Subspace2::line(tower, m)).collect(),
    };
    let u = Subspace2::from_poly(tower, f);
    let outer = HyperRegulus {
        components: tower.coset_reps().iter().map(|&h| u.scale(tower, h)).collect(),
    };
    let cover_equal = inner.cover() == outer.cover();
    Ok(ReplacementPair {
        inner,
        outer,
        cover_equal,
    })
}

/// `D` with each André net `{⟨(1, m)⟩ : N(m) = ξ}` replaced by
/// `{{(x, m·x^{q^μ})} : N(m) = ξ}` for the listed pairs `(ξ, μ)`.
/// An exponent `μ = 0` leaves the net in place.
pub fn andre_spread(tower: &FieldTower, replacements: &[(Elem, u32)]) -> Result<Spread> {
    check_guard(tower)?;
    let t = tower.t();
    let mut exponent = vec![0u32; tower.order() as usize];
    for &(xi, mu) in replacements {
        if xi.is_zero() || !tower.in_subfield(xi) {
            return Err(Error::InvalidParameter(format!(
                "André net norm {} is not in F_q^*",
                tower.format_elem(xi)
            )));
        }
        if mu >= t {
            return Err(Error::InvalidParameter(format!("exponent {mu} not in [0, {t})")));
        }
        if exponent[xi.index()] != 0 {
            return Err(Error::InvalidParameter(format!(
                "net {} listed twice",
                tower.format_elem(xi)
            )));
        }
        exponent[xi.index()] = mu;
    }
    let mut components = vec![Component {
        tag: ComponentTag::Infinity,
        space: Subspace2::vertical(tower),
    }];
    for m in tower.elements() {
        let mu = if m.is_zero() {
            0
        } else {
            exponent[tower.rel_norm(m).index()]
        };
        let component = if mu == 0 {
            Component {
                tag: ComponentTag::Line(m),
                space: Subspace2::line(tower, m),
            }
        } else {
            Component {
                tag: ComponentTag::Replaced(m),
                space: Subspace2::from_poly(tower, &LinearizedPoly::monomial(tower, m, mu)),
            }
        };
        components.push(component);
    }
    Ok(Spread::new_unchecked(components))
}

/// `B_{g_s}` for `g_s(x) = ω·x^{q^s}` with `gcd(s, t) = 1`, `N(ω) ≠ 0, 1`.
pub fn pseudoregulus_spread(tower: &FieldTower, omega: Elem, s: u32) -> Result<Spread> {
    let t = tower.t();
    if s == 0 || s >= t || gcd(s, t) != 1 {
        return Err(Error::InvalidParameter(format!("need gcd(s, t) = 1 with 0 < s < t, got s = {s}")));
    }
    let norm = tower.rel_norm(omega);
    if norm.is_zero() || norm == Elem::ONE {
        return Err(Error::Hypothesis("pseudoregulus type needs N(ω) ≠ 0, 1".into()));
    }
    spread_from_poly(tower, &LinearizedPoly::monomial(tower, omega, s))
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All vectors covered by the components, for tests and reports.
pub fn covered_vectors(spread: &Spread) -> Vec<u64> {
    let mut all: Vec<u64> = spread
        .components
        .iter()
        .flat_map(|c| c.space.packed().iter().copied())
        .collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// `(x, y)` packed, re-exported for callers that build mutated spreads.
pub fn vector_key(tower: &FieldTower, x: Elem, y: Elem) -> u64 {
    pack(tower.order(), x, y)
}
