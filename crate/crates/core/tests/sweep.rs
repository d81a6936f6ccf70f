//! Random parameter sets drawn inside each hypothesis region must produce
//! passing reports, with every pair re-classifying to its claimed class.

use inls_core::exponent::classify_pair;
use inls_core::lemma::region::sample;
use inls_core::{verify_lemma, LemmaId, Pair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

// The full 1000-per-branch sweep runs in the acceptance suite.
const PER_BRANCH: u64 = 200;

fn sweep(id: LemmaId) -> Vec<String> {
    (0..PER_BRANCH)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (i << 8) ^ id as u64);
            let p = sample(id, &mut rng);
            let rep = match verify_lemma(id, &p) {
                Ok(r) => r,
                Err(e) => return Some(format!("{id} {p:?}: {e}")),
            };
            if !rep.pass {
                return Some(format!("{id} {p:?}: {:?}", rep.failures()));
            }
            let eps = rep.params.eps();
            for pr in &rep.pairs {
                let s = match &pr.claimed_class {
                    inls_core::PairClass::HsAdmissible(s) | inls_core::PairClass::HsDualAdmissible(s) => s.clone(),
                    _ => inls_core::Rational::zero(),
                };
                if classify_pair(&Pair::new(pr.q.clone(), pr.r.clone()), p.n, &s, &eps) != pr.claimed_class {
                    return Some(format!("{id}: pair {} does not re-classify", pr.name));
                }
            }
            None
        })
        .collect()
}

#[test]
fn every_branch_passes_inside_its_region() {
    let mut failures = Vec::new();
    for id in LemmaId::ALL {
        let t0 = std::time::Instant::now();
        let f = sweep(id);
        eprintln!("{id}: {} failures in {:?}", f.len(), t0.elapsed());
        failures.extend(f.into_iter().take(3));
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
