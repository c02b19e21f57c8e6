use super::{equivalence_fast, SearchOptions};
use crate::error::Result;
use crate::field::FieldTower;
use crate::linpoly::LinearizedPoly;
use crate::union_find::DisjointSets;

/// One solver call made while merging orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTest {
    pub left: usize,
    pub right: usize,
    pub equivalent: bool,
}

/// Partition of a family into `ΓL(2, q^t)`-orbits of the subspaces `U_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    /// Orbits as ascending member indices, ordered by least member.
    pub orbits: Vec<Vec<usize>>,
    pub tested: Vec<PairTest>,
}

impl OrbitCensus {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }
}

/// Each member is compared with the least member of every orbit found so
/// far, in order, until it joins one.
pub fn orbit_census(
    tower: &FieldTower,
    family: &[LinearizedPoly],
    opts: SearchOptions,
) -> Result<OrbitCensus> {
    let mut sets = DisjointSets::new(family.len());
    let mut leaders: Vec<usize> = Vec::new();
    let mut tested = Vec::new();
    for (i, f) in family.iter().enumerate() {
        let mut joined = false;
        for &leader in &leaders {
            let equivalent = equivalence_fast(tower, &family[leader], f, opts)?.is_some();
            tested.push(PairTest {
                left: leader,
                right: i,
                equivalent,
            });
            if equivalent {
                sets.union(leader, i);
                joined = true;
                break;
            }
        }
        if !joined {
            leaders.push(i);
        }
    }
    Ok(OrbitCensus {
        orbits: sets.classes(),
        tested,
    })
}
