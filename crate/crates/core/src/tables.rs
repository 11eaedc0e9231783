//! Tabulated small sorting networks.
//!
//! Entries for n <= 8 are the classical minimum-depth constructions; the
//! 16-lane entry is Green's 60-comparator network kept as a flat comparator
//! sequence and levelized on load. Every table entry is machine-checked by
//! the exhaustive zero-one test in this crate's test suite; nothing here is
//! trusted by transcription alone.

pub(crate) type Stage = &'static [(usize, usize)];

pub(crate) const OPT_STAGES_2: &[Stage] = &[&[(0, 1)]];

pub(crate) const OPT_STAGES_3: &[Stage] = &[&[(0, 2)], &[(0, 1)], &[(1, 2)]];

pub(crate) const OPT_STAGES_4: &[Stage] = &[&[(0, 2), (1, 3)], &[(0, 1), (2, 3)], &[(1, 2)]];

pub(crate) const OPT_STAGES_5: &[Stage] = &[
    &[(0, 3), (1, 4)],
    &[(0, 2), (1, 3)],
    &[(0, 1), (2, 4)],
    &[(1, 2), (3, 4)],
    &[(2, 3)],
];

pub(crate) const OPT_STAGES_6: &[Stage] = &[
    &[(0, 5), (1, 3), (2, 4)],
    &[(1, 2), (3, 4)],
    &[(0, 3), (2, 5)],
    &[(0, 1), (2, 3), (4, 5)],
    &[(1, 2), (3, 4)],
];

pub(crate) const OPT_STAGES_7: &[Stage] = &[
    &[(0, 6), (2, 3), (4, 5)],
    &[(0, 2), (1, 4), (3, 6)],
    &[(0, 1), (2, 5), (3, 4)],
    &[(1, 2), (4, 6)],
    &[(2, 3), (4, 5)],
    &[(1, 2), (3, 4), (5, 6)],
];

pub(crate) const OPT_STAGES_8: &[Stage] = &[
    &[(0, 2), (1, 3), (4, 6), (5, 7)],
    &[(0, 4), (1, 5), (2, 6), (3, 7)],
    &[(0, 1), (2, 3), (4, 5), (6, 7)],
    &[(2, 4), (3, 5)],
    &[(1, 4), (3, 6)],
    &[(1, 2), (3, 4), (5, 6)],
];

/// 16-lane network, 60 comparators (Green's construction).
pub(crate) const OPT_SEQ_16: &[(usize, usize)] = &[
    (0, 13),
    (1, 12),
    (2, 15),
    (3, 14),
    (4, 8),
    (5, 6),
    (7, 11),
    (9, 10),
    (0, 5),
    (1, 7),
    (2, 9),
    (3, 4),
    (6, 13),
    (8, 14),
    (10, 15),
    (11, 12),
    (0, 1),
    (2, 3),
    (4, 5),
    (6, 8),
    (7, 9),
    (10, 11),
    (12, 13),
    (14, 15),
    (0, 2),
    (1, 3),
    (4, 10),
    (5, 11),
    (6, 7),
    (8, 9),
    (12, 14),
    (13, 15),
    (1, 2),
    (3, 12),
    (4, 6),
    (5, 7),
    (8, 10),
    (9, 11),
    (13, 14),
    (1, 4),
    (2, 6),
    (5, 8),
    (7, 10),
    (9, 13),
    (11, 14),
    (2, 4),
    (3, 6),
    (9, 12),
    (11, 13),
    (3, 5),
    (6, 8),
    (7, 9),
    (10, 12),
    (3, 4),
    (5, 6),
    (7, 8),
    (9, 10),
    (11, 12),
    (6, 7),
    (8, 9),
];
