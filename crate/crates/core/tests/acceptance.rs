//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails. All tolerances are exact; the only numeric
//! thresholds are the wall-clock limits and instance counts below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mv_spectra_core::lattice::{duality_roundtrip, lattice_from_downsets};
use mv_spectra_core::mv::{Chang, FiniteMv, Law, MvError};
use mv_spectra_core::sheaf::{
    crt_solve, crt_term, random_crt_instance, sandwich_check, term_value, Base, CrtError, EtaFailure, EtaleInstance,
    PatchError,
};
use mv_spectra_core::spectrum::{kaplansky_self, ChangPoint, ChangSpace, KaplanskyVerdict, MvDualSpace};
use mv_spectra_core::verify::{standard_corpus, verify, Status, Suite, VerifyConfig};
use mv_spectra_core::{Algebra, FinitePoset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AXIOM_LIMIT: Duration = Duration::from_secs(5);
const ROUNDTRIP_LIMIT: Duration = Duration::from_secs(10);
const DUAL_STRUCTURE_LIMIT: Duration = Duration::from_secs(30);
const SHEAF_LIMIT: Duration = Duration::from_secs(60);

const CHANG_BOUND: u64 = 32;
const RANDOM_LATTICES: usize = 100;
const MAX_JOIN_IRREDUCIBLES: usize = 10;
const CRT_PER_ALGEBRA: usize = 200;
const SANDWICH_CARRIER: usize = 24;
const SECTION_CAP: u64 = 1_000_000;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let out = match out {
        Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
        other => other,
    };
    (out, elapsed)
}

fn spaces(corpus: &[FiniteMv]) -> Vec<MvDualSpace> {
    corpus.iter().map(MvDualSpace::build).collect()
}

fn axioms(corpus: &[FiniteMv]) -> Outcome {
    for a in corpus {
        a.check_axioms().map_err(|v| format!("{}: {v}", a.label()))?;
    }
    Chang::check_axioms_bounded(CHANG_BOUND).map_err(|v| format!("Chang: {v}"))?;
    Ok(format!("{} finite algebras, Chang to N = {CHANG_BOUND}", corpus.len()))
}

fn random_poset(rng: &mut ChaCha8Rng) -> FinitePoset {
    let n = rng.gen_range(1..=MAX_JOIN_IRREDUCIBLES);
    let p: f64 = rng.gen_range(0.05..0.5);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    FinitePoset::from_pairs(n, &pairs).expect("pairs respect index order")
}

fn roundtrip(corpus: &[FiniteMv]) -> Outcome {
    for a in corpus {
        duality_roundtrip(a.lattice()).map_err(|e| format!("{}: {e}", a.label()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut largest = 0;
    for i in 0..RANDOM_LATTICES {
        let poset = random_poset(&mut rng);
        let (lattice, _) = lattice_from_downsets(&poset);
        if lattice.join_irreducibles().len() != poset.size() {
            return Err(format!("random lattice {i}: join-irreducibles differ from poset size"));
        }
        duality_roundtrip(&lattice).map_err(|e| format!("random lattice {i}: {e}"))?;
        largest = largest.max(lattice.size());
    }
    Ok(format!(
        "{} reducts, {RANDOM_LATTICES} random lattices (largest {largest} elements)",
        corpus.len()
    ))
}

fn suite_clean(corpus: &[FiniteMv], suite: Suite, only: &[&str]) -> Outcome {
    let cfg = VerifyConfig {
        seed: SEED,
        ..VerifyConfig::default()
    };
    let mut count = 0;
    for a in corpus {
        let report = verify(&Algebra::Finite(a.clone()), suite, &cfg);
        for c in report.checks.iter().filter(|c| only.is_empty() || only.contains(&c.name.as_str())) {
            count += 1;
            if c.status != Status::Pass {
                return Err(format!("{}: {} {:?} {:?}", a.label(), c.name, c.status, c.counterexample));
            }
        }
    }
    Ok(format!("{count} checks on {} spectra", corpus.len()))
}

fn interpolation(spaces: &[MvDualSpace]) -> Outcome {
    let mut pairs = 0;
    for s in spaces {
        for x in 0..s.len() {
            for x2 in (0..s.len()).filter(|&x2| s.leq(x, x2)) {
                pairs += 1;
                let w = s
                    .interpolate(x, x2)
                    .map_err(|e| format!("{}: ({x}, {x2}) {e}", s.algebra().label()))?;
                let k = |p| s.k_map(p);
                let ok = s.leq(x, w) && s.leq(w, x2) && s.leq(k(x), k(w)) && s.leq(k(x2), k(w));
                if !ok {
                    return Err(format!("{}: ({x}, {x2}) witness {w}", s.algebra().label()));
                }
            }
        }
    }
    Ok(format!("{pairs} comparable pairs"))
}

fn kaplansky(spaces: &[MvDualSpace]) -> Outcome {
    for s in spaces {
        s.w_quotient().map_err(|e| format!("{}: {e}", s.algebra().label()))?;
        match kaplansky_self(s) {
            KaplanskyVerdict::Homeomorphic { z_points } if z_points == s.z().len() => {}
            v => return Err(format!("{}: {v:?}", s.algebra().label())),
        }
    }
    let pts = ChangPoint::bounded(CHANG_BOUND);
    let y = pts.iter().filter(|&&x| ChangSpace::in_y(x)).count();
    let z = pts.iter().filter(|&&x| ChangSpace::in_z(x)).count();
    if (y, z) != (2, 1) {
        return Err(format!("Chang: |Y| = {y}, |Z| = {z}"));
    }
    Ok(format!("{} spectra; Chang |Y| = 2, |Z| = 1", spaces.len()))
}

fn sheaves(spaces: &[MvDualSpace]) -> Outcome {
    let mut stalks = 0;
    for s in spaces {
        for base in [Base::Prime, Base::Maximal] {
            let inst = EtaleInstance::new(s, base);
            let label = format!("{} over {base}", s.algebra().label());
            if !inst.q_is_continuous() {
                return Err(format!("{label}: q not continuous"));
            }
            if let Some(p) = inst.stalk_shape_violation() {
                return Err(format!("{label}: stalk {p}"));
            }
            if base == Base::Maximal {
                for st in inst.stalks() {
                    if st.ideal != s.germinal_ideal(st.point) {
                        return Err(format!("{label}: stalk at {} is not the germinal quotient", st.point));
                    }
                }
            }
            stalks += inst.stalks().len();
            let r = inst.eta_check(SECTION_CAP).map_err(|e| format!("{label}: {e}"))?;
            if !r.isomorphism || r.sections != s.algebra().size() {
                return Err(format!("{label}: {:?}", r.witness));
            }
        }
    }
    Ok(format!("{} algebras on both bases, {stalks} stalks", spaces.len()))
}

fn crt(spaces: &[MvDualSpace]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut instances = 0;
    let mut sandwiches = 0;
    for s in spaces {
        let a = s.algebra();
        for _ in 0..CRT_PER_ALGEBRA {
            let inst = random_crt_instance(a, &mut rng);
            let b = crt_solve(a, &inst.ideals, &inst.a).map_err(|e| format!("{}: {e}", a.label()))?;
            if b != inst.expected {
                return Err(format!("{}: solved {b}, expected {}", a.label(), inst.expected));
            }
            let term = crt_term(s, &inst.generators, &inst.a).map_err(|e| format!("{}: {e}", a.label()))?;
            if term.b != b || term_value(a, &inst.generators, &inst.a, term.t) != b {
                return Err(format!("{}: term {term:?} vs {b}", a.label()));
            }
            instances += 1;
        }
        if a.size() <= SANDWICH_CARRIER {
            for x in a.elements() {
                for u in a.elements() {
                    sandwich_check(s, x, u).map_err(|f| format!("{}: {f:?}", a.label()))?;
                    sandwiches += 1;
                }
            }
        }
    }
    Ok(format!("{instances} instances, {sandwiches} sandwich pairs"))
}

fn negative_controls() -> Outcome {
    let l = |n| FiniteMv::lukasiewicz(n).unwrap();
    let a = FiniteMv::product(&[l(2), l(3)], 64).unwrap();
    let s = MvDualSpace::build(&a);
    let inst = EtaleInstance::new(&s, Base::Prime);
    let whole = inst.base_set();
    let (a1, a2) = (a.from_coords(&[2, 0]), a.from_coords(&[0, 3]));
    match inst.check_property_p(&[whole.clone(), whole], &[s.hat(a1).clone(), s.hat(a2).clone()]) {
        Err(PatchError::Hypothesis { l: 0, m: 1, point }) => {
            if s.hat(a1).contains(point) == s.hat(a2).contains(point) {
                return Err(format!("property P witness {point} does not separate"));
            }
        }
        other => return Err(format!("property P accepted incompatible K: {other:?}")),
    }

    let k1 = a.lattice().order().down_set(a.from_coords(&[0, 3])).clone();
    let k2 = a.lattice().order().down_set(a.from_coords(&[2, 0])).clone();
    match crt_solve(&a, &[k1.clone(), k1, k2], &[a1, a.from_coords(&[1, 0]), a2]) {
        Err(CrtError::Incompatible { i: 0, j: 1 }) => {}
        other => return Err(format!("CRT accepted incompatible residues: {other:?}")),
    }

    // Ł2 with the identity as negation.
    let oplus: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + y).min(2)).collect()).collect();
    match FiniteMv::from_tables(Some(0), &[0, 1, 2], &oplus) {
        Err(MvError::Axiom(v)) if v.law == Law::Characteristic && v.witness == vec![0, 1] => {}
        other => return Err(format!("axiom check accepted identity negation: {other:?}")),
    }

    match inst.without_base_point(0).eta_check(SECTION_CAP) {
        Ok(r) if matches!(r.witness, Some(EtaFailure::NotInjective { .. })) => {}
        other => return Err(format!("truncated stalks not detected: {other:?}")),
    }

    Ok("property P, CRT, axioms, truncated stalks".into())
}

type Criterion<'a> = (&'static str, Duration, Box<dyn FnOnce() -> Outcome + 'a>);

fn main() -> ExitCode {
    let corpus = standard_corpus();
    let sp = spaces(&corpus);
    let criteria: Vec<Criterion<'_>> = vec![
        ("axiom suite", AXIOM_LIMIT, Box::new(|| axioms(&corpus))),
        ("duality round-trip", ROUNDTRIP_LIMIT, Box::new(|| roundtrip(&corpus))),
        (
            "dual structure",
            DUAL_STRUCTURE_LIMIT,
            Box::new(|| suite_clean(&corpus, Suite::Plus, &[])),
        ),
        (
            "k-map equivalence",
            DUAL_STRUCTURE_LIMIT,
            Box::new(|| {
                suite_clean(
                    &corpus,
                    Suite::K,
                    &[
                        "k-formula-vs-oracle",
                        "k-filter-arithmetic",
                        "k-fixes-exactly-y",
                        "fibers-are-chains",
                        "k-continuity",
                    ],
                )
            }),
        ),
        ("interpolation", DUAL_STRUCTURE_LIMIT, Box::new(|| interpolation(&sp))),
        ("kaplansky property", DUAL_STRUCTURE_LIMIT, Box::new(|| kaplansky(&sp))),
        ("sheaf reconstruction", SHEAF_LIMIT, Box::new(|| sheaves(&sp))),
        ("chinese remainder", SHEAF_LIMIT, Box::new(|| crt(&sp))),
        ("negative controls", DUAL_STRUCTURE_LIMIT, Box::new(negative_controls)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let (out, elapsed) = timed(limit, run);
        let secs = elapsed.as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {} {name}: PASS in {secs:.2}s ({msg})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL in {secs:.2}s ({msg})", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 9/9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
