//! Certified witness configurations for genus 5, stored verbatim and never
//! regenerated. Each row pins a degree vector, a finite group, the blocks of the
//! witness, and the expected invariant pair (𝔛/2, rank M). Verification re-counts
//! these at run time; the expected values here are the frozen reference.
//!
//! The same data is shipped as `data/table1.json` in the companion crate; a test
//! there pins the two copies to each other.

use alloc::vec::Vec;

use crate::abelian::AbelianGroup;
use crate::counting::Configuration;
use crate::relations::DegreeVector;

pub struct Table1Fixture {
    pub parts: &'static [u32],
    pub xi_half: u64,
    pub rank: usize,
    pub torsion: &'static [i64],
    /// blocks of coordinate vectors, concatenated per block
    pub blocks: &'static [&'static [&'static [i64]]],
}

impl Table1Fixture {
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::torsion_product(self.torsion).expect("fixture moduli are valid")
    }

    pub fn degree(&self) -> DegreeVector {
        DegreeVector::new(self.parts.to_vec()).expect("fixture parts are valid")
    }

    pub fn configuration(&self) -> Configuration {
        let blocks: Vec<Vec<Vec<i64>>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|c| c.to_vec()).collect())
            .collect();
        Configuration::from_blocks(self.group(), self.degree(), &blocks)
            .expect("fixture configurations are valid")
    }
}

macro_rules! pts {
    ($([$($c:expr),+]),+ $(,)?) => {
        &[$(&[$($c),+]),+]
    };
}

const Z4_FULL: &[&[i64]] = pts![[0], [1], [2], [3]];
const Z6_FULL: &[&[i64]] = pts![[0], [1], [2], [3], [4], [5]];
const Z8_FULL: &[&[i64]] = pts![[0], [1], [2], [3], [4], [5], [6], [7]];

static TABLE1: &[Table1Fixture] = &[
    Table1Fixture {
        parts: &[1, 1, 1, 1, 1],
        xi_half: 5,
        rank: 6,
        torsion: &[3],
        blocks: &[
            pts![[0], [1]],
            pts![[0], [1]],
            pts![[0], [1]],
            pts![[0], [1]],
            pts![[0], [2]],
        ],
    },
    Table1Fixture {
        parts: &[1, 1, 1, 2],
        xi_half: 6,
        rank: 7,
        torsion: &[4],
        blocks: &[pts![[0], [1]], pts![[0], [2]], pts![[0], [3]], Z4_FULL],
    },
    Table1Fixture {
        parts: &[1, 1, 3],
        xi_half: 7,
        rank: 8,
        torsion: &[6],
        blocks: &[pts![[0], [1]], pts![[3], [5]], Z6_FULL],
    },
    Table1Fixture {
        parts: &[1, 2, 2],
        xi_half: 8,
        rank: 8,
        torsion: &[4],
        blocks: &[pts![[1], [3]], Z4_FULL, Z4_FULL],
    },
    Table1Fixture {
        parts: &[1, 2, 2],
        xi_half: 7,
        rank: 8,
        torsion: &[5],
        blocks: &[
            pts![[1], [3]],
            pts![[0], [1], [3], [4]],
            pts![[0], [1], [3], [4]],
        ],
    },
    Table1Fixture {
        parts: &[1, 4],
        xi_half: 9,
        rank: 9,
        torsion: &[8],
        blocks: &[pts![[0], [4]], Z8_FULL],
    },
    Table1Fixture {
        parts: &[1, 4],
        xi_half: 8,
        rank: 9,
        torsion: &[2, 6],
        blocks: &[
            pts![[0, 0], [0, 4]],
            pts![
                [0, 0],
                [0, 1],
                [0, 3],
                [0, 4],
                [1, 0],
                [1, 3],
                [1, 4],
                [1, 5]
            ],
        ],
    },
    Table1Fixture {
        parts: &[2, 3],
        xi_half: 10,
        rank: 9,
        torsion: &[6],
        blocks: &[pts![[0], [2], [3], [4]], Z6_FULL],
    },
    Table1Fixture {
        parts: &[2, 3],
        xi_half: 9,
        rank: 9,
        torsion: &[7],
        blocks: &[pts![[1], [2], [3], [6]], pts![[0], [1], [2], [3], [4], [6]]],
    },
    Table1Fixture {
        parts: &[2, 3],
        xi_half: 8,
        rank: 9,
        torsion: &[2, 4],
        blocks: &[
            pts![[0, 0], [0, 3], [1, 0], [1, 1]],
            pts![[0, 0], [0, 1], [0, 2], [0, 3], [1, 0], [1, 2]],
        ],
    },
    Table1Fixture {
        parts: &[5],
        xi_half: 11,
        rank: 10,
        torsion: &[2, 2, 3],
        blocks: &[pts![
            [0, 0, 0],
            [0, 0, 1],
            [0, 0, 2],
            [0, 1, 0],
            [0, 1, 1],
            [0, 1, 2],
            [1, 0, 0],
            [1, 0, 1],
            [1, 0, 2],
            [1, 1, 0]
        ]],
    },
    Table1Fixture {
        parts: &[5],
        xi_half: 10,
        rank: 10,
        torsion: &[14],
        blocks: &[pts![[9], [4], [11], [6], [7], [10], [3], [0], [8], [12]]],
    },
    Table1Fixture {
        parts: &[5],
        xi_half: 9,
        rank: 10,
        torsion: &[2, 8],
        blocks: &[pts![
            [0, 0],
            [0, 1],
            [0, 4],
            [0, 5],
            [0, 6],
            [0, 7],
            [1, 1],
            [1, 4],
            [1, 5],
            [1, 7]
        ]],
    },
];

pub fn table1() -> &'static [Table1Fixture] {
    TABLE1
}

/// Fixture indices feeding the dimension-5 family table's max-𝔛 column.
pub const DIM5_E50_MAX: usize = 10;
pub const DIM5_E51_MAX: usize = 5;
pub const DIM5_E52_MAX: usize = 7;

/// Boundary-table rows: degree vector and the fixture whose re-count gives the
/// max-𝔛 entry (the witnesses over cyclic groups).
pub const DIM5_BOUNDARY_MAX: &[(&[u32], usize)] = &[
    (&[1, 1, 1, 1, 1], 0),
    (&[1, 1, 1, 2], 1),
    (&[1, 1, 3], 2),
    (&[1, 2, 2], 3),
    (&[1, 4], 5),
    (&[2, 3], 7),
    (&[5], 11),
];
