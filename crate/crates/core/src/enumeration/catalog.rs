//! Named semilattice classes with their printed Mobius values.
//!
//! Fixtures list covers in a linear-extension order whose last index is the
//! most recently added element; `mu[i]` is `mu(x_i, x_last)`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::poset::{canonicalize, CanonicalKey, IncidenceFunction, Poset, DEFAULT_CANON_BOUND};
use crate::rational::{int, parse_rational, Rational};

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

/// Label of the bottom + (n-2) atoms + top family.
pub const BOUNDED_X1_LABEL: &str = "S_{n-2,n}";

#[derive(Deserialize)]
struct RawEntry {
    label: String,
    figure: u32,
    n: usize,
    covers: Vec<[usize; 2]>,
    mu: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: String,
    pub figure: u32,
    pub poset: Poset,
    pub mu: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct SemilatticeCatalog {
    entries: Vec<CatalogEntry>,
    by_key: BTreeMap<CanonicalKey, Vec<usize>>,
}

/// Bottom, `n - 2` pairwise incomparable atoms, and a top.
pub fn bounded_x1_poset(n: usize) -> Result<Poset> {
    if n < 3 {
        return Err(Error::Size { n, bound: 3 });
    }
    let mut covers: Vec<(usize, usize)> = (1..n - 1).map(|a| (0, a)).collect();
    covers.extend((1..n - 1).map(|a| (a, n - 1)));
    Poset::from_covers(n, &covers)
}

fn is_bounded_x1(p: &Poset) -> bool {
    let n = p.len();
    n >= 3
        && p.least() == Some(0)
        && p.greatest() == Some(n - 1)
        && (1..n - 1).all(|a| (1..n - 1).all(|b| a == b || !p.comparable(a, b)))
}

fn mobius_to_last(p: &Poset) -> Vec<Rational> {
    let n = p.len();
    let mu = IncidenceFunction::mobius(Arc::new(p.clone()));
    (0..n).map(|i| mu.get(i, n - 1).clone()).collect()
}

impl SemilatticeCatalog {
    /// Parses the bundled fixtures.
    pub fn load() -> Result<Self> {
        let raw: Vec<RawEntry> =
            serde_json::from_str(CATALOG_JSON).map_err(|e| Error::Parse(e.to_string()))?;
        let mut entries = Vec::with_capacity(raw.len());
        let mut by_key: BTreeMap<CanonicalKey, Vec<usize>> = BTreeMap::new();
        for r in raw {
            let covers: Vec<(usize, usize)> = r.covers.iter().map(|c| (c[0], c[1])).collect();
            let poset = Poset::from_covers(r.n, &covers)?;
            if poset.origin().iter().enumerate().any(|(k, &o)| k != o) {
                return Err(Error::Shape(format!(
                    "{}: covers not in linear-extension order",
                    r.label
                )));
            }
            let mu =
                r.mu.iter()
                    .map(|s| {
                        if s == "n-3" {
                            Ok(int(r.n as i64 - 3))
                        } else {
                            parse_rational(s)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
            if mu.len() != r.n {
                return Err(Error::Shape(format!(
                    "{}: {} mu values for {} elements",
                    r.label,
                    mu.len(),
                    r.n
                )));
            }
            by_key
                .entry(canonicalize(&poset)?)
                .or_default()
                .push(entries.len());
            entries.push(CatalogEntry {
                label: r.label,
                figure: r.figure,
                poset,
                mu,
            });
        }
        // Drawings from the class tables name a shape first; the summary
        // figure only supplies names for shapes found nowhere else.
        for idx in by_key.values_mut() {
            idx.sort_by_key(|&i| (entries[i].figure == 1, i));
        }
        Ok(SemilatticeCatalog { entries, by_key })
    }

    /// Shared instance of the bundled catalog.
    pub fn builtin() -> &'static SemilatticeCatalog {
        static CATALOG: OnceLock<SemilatticeCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| Self::load().expect("bundled catalog is well formed"))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Labels isomorphic to `label`, primary name first.
    pub fn aliases(&self, label: &str) -> Result<Vec<&str>> {
        let key = canonicalize(&self.get(label)?.poset)?;
        Ok(self.by_key[&key]
            .iter()
            .map(|&i| self.entries[i].label.as_str())
            .collect())
    }

    /// Primary label of the isomorphic fixture, if any. Bounded x1 shapes
    /// larger than every fixture are still recognized.
    pub fn classify(&self, p: &Poset) -> Option<String> {
        if p.len() > 8 && is_bounded_x1(p) {
            return Some(BOUNDED_X1_LABEL.to_string());
        }
        if p.len() > DEFAULT_CANON_BOUND {
            return None;
        }
        let key = canonicalize(p).ok()?;
        self.by_key
            .get(&key)
            .map(|idx| self.entries[idx[0]].label.clone())
    }

    /// Recomputes `mu(x_i, x_last)` and compares with the stored values. The
    /// bounded x1 family is also checked at sizes 3 through 12.
    pub fn verify_figure_mobius(&self, label: &str) -> Result<bool> {
        let e = self.get(label)?;
        let fixture_ok = mobius_to_last(&e.poset) == e.mu;
        if label != BOUNDED_X1_LABEL {
            return Ok(fixture_ok);
        }
        let family_ok = (3..=12).all(|n| {
            let p = bounded_x1_poset(n).expect("n >= 3");
            let mut expect = vec![int(-1); n];
            expect[0] = int(n as i64 - 3);
            expect[n - 1] = int(1);
            mobius_to_last(&p) == expect
        });
        Ok(fixture_ok && family_ok)
    }

    /// `mu(x_i, x_top)` for the bounded x1 shape of size `n`.
    pub fn bounded_x1_mobius(n: usize) -> Result<Vec<Rational>> {
        Ok(mobius_to_last(&bounded_x1_poset(n)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::divisor_subposet;
    use num_bigint::BigUint;

    fn ints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn every_fixture_matches_its_mobius_values() {
        let cat = SemilatticeCatalog::builtin();
        assert_eq!(cat.entries().len(), 89);
        for e in cat.entries() {
            assert!(e.poset.is_meet_semilattice(), "{}", e.label);
            assert!(cat.verify_figure_mobius(&e.label).unwrap(), "{}", e.label);
        }
    }

    #[test]
    fn printed_vectors() {
        let cat = SemilatticeCatalog::builtin();
        assert_eq!(
            cat.get("7_I").unwrap().mu,
            [4, -1, -1, -1, -1, -1, 1].map(int).to_vec()
        );
        assert_eq!(cat.get("S_{1,2}").unwrap().mu, vec![int(-1), int(1)]);
        assert_eq!(SemilatticeCatalog::bounded_x1_mobius(7).unwrap()[0], int(4));
        assert!(matches!(
            cat.verify_figure_mobius("9_Z"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn classification() {
        let cat = SemilatticeCatalog::builtin();
        let hong = divisor_subposet(&ints(&[1, 2, 3, 5, 36, 230, 825, 227700])).unwrap();
        assert_eq!(cat.classify(&hong).as_deref(), Some("S_{3,8}"));
        let o = divisor_subposet(&ints(&[1, 2, 3, 5, 30])).unwrap();
        assert_eq!(cat.classify(&o).as_deref(), Some("5_O"));
        assert_eq!(cat.classify(&Poset::chain(7)), None);
        assert_eq!(
            cat.classify(&bounded_x1_poset(11).unwrap()).as_deref(),
            Some(BOUNDED_X1_LABEL)
        );
        assert_eq!(
            cat.classify(&bounded_x1_poset(8).unwrap()).as_deref(),
            Some(BOUNDED_X1_LABEL)
        );
        assert_eq!(cat.aliases("5_O").unwrap(), vec!["5_O", "S_{3,5}"]);
    }

    #[test]
    fn distinct_shapes_per_table() {
        let cat = SemilatticeCatalog::builtin();
        for idx in cat.by_key.values() {
            let figs: Vec<u32> = idx
                .iter()
                .map(|&i| cat.entries[i].figure)
                .filter(|&f| f != 1)
                .collect();
            assert!(figs.len() <= 1, "{:?}", idx);
        }
    }
}
