//! Conway polynomials for the small fields this crate is exercised on.
//! Coefficients ascending, monic.

const TABLE: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 1, 4, 0, 1]),
    (5, 5, &[3, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 0, 1, 4, 1, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

pub(crate) fn lookup(p: u32, degree: u32) -> Option<Vec<u32>> {
    TABLE
        .iter()
        .find(|(pp, d, _)| *pp == p && *d == degree)
        .map(|(_, _, c)| c.to_vec())
}

#[cfg(test)]
pub(crate) fn entries() -> impl Iterator<Item = (u32, u32, &'static [u32])> {
    TABLE.iter().copied()
}
