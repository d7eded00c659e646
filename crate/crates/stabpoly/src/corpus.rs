//! Golden corpus of certified-stable polynomials used by the property
//! suites: hand examples, determinantal pencils, mixed-determinant
//! sums, recurrence chains, products of positive linear forms, and
//! elementary symmetric polynomials.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constructions::{
    det_pencil_poly, johnson_sum, random_pencil, recurrence_chain, JohnsonPencil, RecurrenceSpec,
};
use crate::error::StabError;
use crate::poly::MultiPoly;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub family: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub poly: MultiPoly,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    family: String,
    seed: u64,
    params: serde_json::Value,
    poly: serde_json::Value,
}

impl CorpusEntry {
    pub fn to_json(&self) -> String {
        let doc = EntryJson {
            family: self.family.clone(),
            seed: self.seed,
            params: self.params.clone(),
            poly: serde_json::from_str(&self.poly.to_json()).expect("valid poly JSON"),
        };
        serde_json::to_string_pretty(&doc).expect("entry JSON")
    }

    pub fn from_json(s: &str) -> Result<Self, StabError> {
        let doc: EntryJson = serde_json::from_str(s)
            .map_err(|e| StabError::Poly(crate::error::PolyError::BadJson(e.to_string())))?;
        let poly = MultiPoly::from_json(&serde_json::to_string(&doc.poly).unwrap())?;
        Ok(CorpusEntry {
            family: doc.family,
            seed: doc.seed,
            params: doc.params,
            poly,
        })
    }
}

/// True when every variable appears with exponent at most 1.
pub fn is_multiaffine(f: &MultiPoly) -> bool {
    f.terms().all(|(e, _)| e.0.iter().all(|&k| k <= 1))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sum_of_vars(d: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(d);
    for i in 0..d {
        p = p.add(&MultiPoly::var(d, i)).unwrap();
    }
    p
}

fn elementary_symmetric(d: usize, k: usize) -> MultiPoly {
    // e_k = coefficient extraction of prod (1 + t x_i); build by DP over
    // variables: e[j] after i vars.
    let mut e: Vec<MultiPoly> = (0..=k).map(|_| MultiPoly::zero(d)).collect();
    e[0] = MultiPoly::one(d);
    for i in 0..d {
        let xi = MultiPoly::var(d, i);
        for j in (1..=k.min(i + 1)).rev() {
            let with = e[j - 1].mul(&xi).unwrap();
            e[j] = e[j].add(&with).unwrap();
        }
    }
    e[k].clone()
}

fn linear_form_product(d: usize, factors: usize, seed: u64) -> (MultiPoly, serde_json::Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = MultiPoly::one(d);
    let mut spec = Vec::new();
    for _ in 0..factors {
        let a: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..2.0)).collect();
        let b: f64 = rng.random_range(-2.0..2.0);
        let mut form = MultiPoly::constant(d, c(b));
        for (i, &ai) in a.iter().enumerate() {
            form = form.add(&MultiPoly::var(d, i).scale(c(ai))).unwrap();
        }
        spec.push(json!({"a": a, "b": b}));
        p = p.mul(&form).unwrap();
    }
    (p, json!({"d": d, "factors": spec}))
}

/// Build the 200-member golden corpus, deterministic in `seed`.
pub fn build_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out = Vec::with_capacity(200);

    // hand examples (6)
    let hand: Vec<(MultiPoly, serde_json::Value)> = vec![
        (sum_of_vars(1), json!({"kind": "sum", "d": 1})),
        (sum_of_vars(2), json!({"kind": "sum", "d": 2})),
        (sum_of_vars(3), json!({"kind": "sum", "d": 3})),
        (sum_of_vars(4), json!({"kind": "sum", "d": 4})),
        (
            MultiPoly::from_terms(2, vec![(vec![1, 1], c(1.0)), (vec![0, 0], c(-1.0))]).unwrap(),
            json!({"kind": "x1x2_minus_1"}),
        ),
        (
            MultiPoly::from_terms(1, vec![(vec![2], c(1.0)), (vec![0], c(-1.0))]).unwrap(),
            json!({"kind": "x_sq_minus_1"}),
        ),
    ];
    for (k, (poly, params)) in hand.into_iter().enumerate() {
        out.push(CorpusEntry { family: "hand".into(), seed: k as u64, params, poly });
    }

    // elementary symmetric polynomials (14): d in 2..=5, k in 1..=d-? -> 2+3+4+5
    let mut idx = 0u64;
    for d in 2..=5usize {
        for k in 1..=d {
            out.push(CorpusEntry {
                family: "elementary".into(),
                seed: idx,
                params: json!({"d": d, "k": k}),
                poly: elementary_symmetric(d, k),
            });
            idx += 1;
        }
    }

    // determinantal pencils (90): n in {2,3}, d in {1,2,3}, with/without E
    let mut idx = 0u64;
    'pencil: for round in 0u64.. {
        for n in 2..=3usize {
            for d in 1..=3usize {
                for with_e in [false, true] {
                    if idx >= 90 {
                        break 'pencil;
                    }
                    let s = seed ^ (0x9E37 + round * 12 + idx);
                    let p = random_pencil(n, d, s, with_e);
                    out.push(CorpusEntry {
                        family: "pencil".into(),
                        seed: idx,
                        params: json!({"n": n, "d": d, "with_e": with_e, "gen_seed": s}),
                        poly: det_pencil_poly(&p).unwrap(),
                    });
                    idx += 1;
                }
            }
        }
    }

    // johnson mixed-determinant sums (20): n in {1,2,3}, m = 2
    for idx in 0u64..20 {
        let n = 1 + (idx as usize % 3);
        let s = seed ^ (0xA5A5_0000 + idx);
        let ls: Vec<JohnsonPencil> = (0..2)
            .map(|k| {
                let pen = random_pencil(n, 2, s.wrapping_add(k), false);
                JohnsonPencil { a: pen.s, ds: pen.ds }
            })
            .collect();
        out.push(CorpusEntry {
            family: "johnson".into(),
            seed: idx,
            params: json!({"n": n, "m": 2, "gen_seed": s}),
            poly: johnson_sum(&ls, n).unwrap(),
        });
    }

    // recurrence chains (30): d in {1,2,3}, chain length 10 (members 1..=10)
    let mut idx = 0u64;
    for d in 1..=3usize {
        let s = seed ^ (0x5EED_0000 + d as u64);
        let spec = RecurrenceSpec::random(d, 10, s);
        let chain = recurrence_chain(&spec).unwrap();
        for (k, poly) in chain.into_iter().skip(1).enumerate() {
            out.push(CorpusEntry {
                family: "recurrence".into(),
                seed: idx,
                params: json!({"d": d, "member": k + 1, "gen_seed": s}),
                poly,
            });
            idx += 1;
        }
    }

    // products of positive linear forms (40)
    for idx in 0u64..40 {
        let d = 1 + (idx as usize % 4);
        let factors = 1 + (idx as usize / 4) % 3;
        let s = seed ^ (0x11FF_0000 + idx);
        let (poly, params) = linear_form_product(d, factors, s);
        out.push(CorpusEntry { family: "linear_product".into(), seed: idx, params, poly });
    }

    debug_assert_eq!(out.len(), 200);
    out
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    family: String,
    seed: u64,
    params: serde_json::Value,
    path: String,
}

/// Write the corpus as `<dir>/<family>/<seed>.json` plus a
/// `manifest.json` listing family, seed, and generator parameters.
pub fn write_corpus(dir: &Path, entries: &[CorpusEntry]) -> std::io::Result<()> {
    let mut manifest = Vec::new();
    for entry in entries {
        let fam_dir = dir.join(&entry.family);
        fs::create_dir_all(&fam_dir)?;
        let rel = format!("{}/{}.json", entry.family, entry.seed);
        fs::write(dir.join(&rel), entry.to_json())?;
        manifest.push(ManifestEntry {
            family: entry.family.clone(),
            seed: entry.seed,
            params: entry.params.clone(),
            path: rel,
        });
    }
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest JSON"),
    )
}

/// Read a corpus directory back via its manifest.
pub fn read_corpus(dir: &Path) -> Result<Vec<CorpusEntry>, StabError> {
    let bad = |m: String| StabError::Poly(crate::error::PolyError::BadJson(m));
    let manifest_raw = fs::read_to_string(dir.join("manifest.json"))
        .map_err(|e| bad(format!("manifest.json: {e}")))?;
    let manifest: Vec<ManifestEntry> =
        serde_json::from_str(&manifest_raw).map_err(|e| bad(format!("manifest.json: {e}")))?;
    let mut out = Vec::with_capacity(manifest.len());
    for m in manifest {
        let raw = fs::read_to_string(dir.join(&m.path))
            .map_err(|e| bad(format!("{}: {e}", m.path)))?;
        out.push(CorpusEntry::from_json(&raw)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_has_200_members_and_is_deterministic() {
        let a = build_corpus(7);
        assert_eq!(a.len(), 200);
        let b = build_corpus(7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.poly, y.poly);
            assert_eq!(x.family, y.family);
        }
        let other = build_corpus(8);
        assert!(a.iter().zip(&other).any(|(x, y)| x.poly != y.poly));
    }

    #[test]
    fn families_present() {
        let corpus = build_corpus(7);
        for fam in ["hand", "elementary", "pencil", "johnson", "recurrence", "linear_product"] {
            assert!(corpus.iter().any(|e| e.family == fam), "missing {fam}");
        }
        assert!(corpus.iter().all(|e| !e.poly.is_zero()));
    }

    #[test]
    fn multiaffine_members_exist() {
        let corpus = build_corpus(7);
        assert!(corpus
            .iter()
            .filter(|e| e.family == "elementary" || e.family == "hand")
            .any(|e| is_multiaffine(&e.poly) && e.poly.nvars() >= 2));
        assert!(!is_multiaffine(
            &MultiPoly::monomial(1, vec![2], Complex64::new(1.0, 0.0))
        ));
    }

    #[test]
    fn elementary_symmetric_values() {
        // e_2 over 3 vars = x1x2 + x1x3 + x2x3
        let e2 = elementary_symmetric(3, 2);
        assert_eq!(e2.coefficient(&[1, 1, 0]), Complex64::new(1.0, 0.0));
        assert_eq!(e2.coefficient(&[1, 0, 1]), Complex64::new(1.0, 0.0));
        assert_eq!(e2.coefficient(&[0, 1, 1]), Complex64::new(1.0, 0.0));
        assert_eq!(e2.terms().count(), 3);
    }

    #[test]
    fn roundtrip_directory() {
        let dir = tempfile::tempdir().unwrap();
        let corpus: Vec<CorpusEntry> = build_corpus(7).into_iter().take(12).collect();
        write_corpus(dir.path(), &corpus).unwrap();
        let back = read_corpus(dir.path()).unwrap();
        assert_eq!(back.len(), corpus.len());
        for (x, y) in corpus.iter().zip(&back) {
            assert_eq!(x.poly, y.poly);
            assert_eq!(x.family, y.family);
            assert_eq!(x.seed, y.seed);
        }
        assert!(read_corpus(&dir.path().join("nope")).is_err());
    }
}
