//! Fixtures shared by unit tests.

use crate::ring::OrbRing;
use crate::toric::{LatticeVector, StackyFan, ToricData};

pub fn toric(rank: usize, rays: &[&[i64]], ext: &[&[i64]], cones: &[&[usize]]) -> ToricData {
    let lv = |r: &&[i64]| LatticeVector(r.to_vec());
    let f = StackyFan::new(
        rank,
        rays.iter().map(lv).collect(),
        ext.iter().map(lv).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
    )
    .unwrap();
    ToricData::new(f, None).unwrap()
}

pub fn p1() -> ToricData {
    toric(1, &[&[1], &[-1]], &[], &[&[0], &[1]])
}

pub fn p2() -> ToricData {
    toric(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[], &[&[0, 1], &[1, 2], &[0, 2]])
}

pub fn p1xp1() -> ToricData {
    toric(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[], &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])
}

pub fn wp112() -> ToricData {
    toric(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

pub fn p4() -> ToricData {
    let rays: [&[i64]; 5] = [&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, -1, -1, -1]];
    let cones: Vec<Vec<usize>> = (0..5).map(|skip| (0..5).filter(|&i| i != skip).collect()).collect();
    let cones: Vec<&[usize]> = cones.iter().map(|c| c.as_slice()).collect();
    toric(4, &rays, &[], &cones)
}

pub fn ring(td: &ToricData) -> OrbRing {
    OrbRing::new(td, &[]).unwrap()
}
