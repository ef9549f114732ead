//! Named lattices used by the CLI and the test suites.

use crate::error::{Error, Result};
use crate::exactnum::{Rat, RatMat};
use crate::lattice::GramLattice;

/// A named Gram matrix with optional known values.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub gram: RatMat,
    /// Known `R²`, when it is a standard value.
    pub r_sq: Option<Rat>,
    /// Known `(3∫_P Q_G)/(R²|P|)`.
    pub ratio: Option<Rat>,
    pub note: &'static str,
}

impl CatalogEntry {
    pub fn lattice(&self) -> GramLattice {
        GramLattice::new(self.gram.clone()).expect("catalog Gram matrices are positive definite")
    }
}

fn ints(rows: &[&[i64]]) -> RatMat {
    RatMat::from_ints(rows).expect("square literal")
}

/// Every catalog entry, in a fixed order.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for n in 1..=5usize {
        out.push(CatalogEntry {
            name: format!("Z{n}"),
            gram: RatMat::identity(n),
            r_sq: Some(Rat::new(n as i64, 4)),
            ratio: Some(Rat::one()),
            note: "integer lattice; Voronoi cell is the unit cube",
        });
    }
    out.push(CatalogEntry {
        name: "A2".into(),
        gram: RatMat::from_fracs(&[&[(1, 1), (1, 2)], &[(1, 2), (1, 1)]]).expect("2x2"),
        r_sq: Some(Rat::new(1, 3)),
        ratio: Some(Rat::new(5, 4)),
        note: "hexagonal lattice, unit minimal vectors at 60 degrees",
    });
    out.push(CatalogEntry {
        name: "D3".into(),
        gram: ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]),
        r_sq: Some(Rat::one()),
        ratio: None,
        note: "face-centred cubic lattice with norm-2 minimal vectors; Voronoi cell is the rhombic dodecahedron",
    });
    out.push(CatalogEntry {
        name: "D4".into(),
        gram: ints(&[&[2, -1, 0, 0], &[-1, 2, -1, -1], &[0, -1, 2, 0], &[0, -1, 0, 2]]),
        r_sq: Some(Rat::one()),
        ratio: None,
        note: "checkerboard lattice, basis e1-e2, e2-e3, e3-e4, e3+e4; Voronoi cell is the 24-cell",
    });
    out.push(CatalogEntry {
        name: "rect2".into(),
        gram: RatMat::diag(&[Rat::one(), Rat::from_int(4)]),
        r_sq: Some(Rat::new(5, 4)),
        ratio: Some(Rat::one()),
        note: "rectangular lattice diag(1,4); box with semi-axes squared 1/4, 1",
    });
    out.push(CatalogEntry {
        name: "rect3".into(),
        gram: RatMat::diag(&[Rat::one(), Rat::from_int(4), Rat::from_int(9)]),
        r_sq: Some(Rat::new(7, 2)),
        ratio: Some(Rat::one()),
        note: "rectangular lattice diag(1,4,9); box with semi-axes squared 1/4, 1, 9/4",
    });
    out
}

pub fn names() -> Vec<String> {
    entries().into_iter().map(|e| e.name).collect()
}

/// Looks up an entry by name (case-insensitive).
pub fn get(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Parse(format!("unknown catalog lattice {name:?}; known: {}", names().join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_valid() {
        for e in entries() {
            assert_eq!(e.lattice().dim(), e.gram.dim(), "{}", e.name);
        }
        assert_eq!(get("a2").unwrap().name, "A2");
        assert!(get("E8").is_err());
    }
}
