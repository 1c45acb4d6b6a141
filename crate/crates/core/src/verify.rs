//! Verification suites. Each check reports pass, fail with the first
//! counterexample found, or skipped with a reason; nothing here panics on a
//! failed property.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bitset::BitSet;
use crate::ideal_arith::{check_adjunction, chang_oplus_bar, oplus_bar, AdjunctionMode};
use crate::lattice::{duality_roundtrip, FiniteLattice, PrimeSpectrum};
use crate::mv::{Algebra, Chang, ChangIdeal, FiniteMv, MvOps};
use crate::order::FinitePoset;
use crate::sheaf::{
    crt_solve, crt_term, random_crt_instance, sandwich_check, stabilization_index, term_value, Base, EtaFailure,
    EtaleInstance, SandwichFailure,
};
use crate::spectrum::{kaplansky_check, kaplansky_self, ChangPoint, ChangSpace, KaplanskyVerdict, MvDualSpace};
use crate::topology::{find_order_isomorphism, FiniteSpace, IsoSearch};

pub const SCHEMA: &str = "mv-spectra/1";

/// Carrier bound for the all-pairs sandwich scan.
pub const SANDWICH_CARRIER_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Plus,
    K,
    Kaplansky,
    SheafPrime,
    SheafMaximal,
    Crt,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::All,
        Suite::Plus,
        Suite::K,
        Suite::Kaplansky,
        Suite::SheafPrime,
        Suite::SheafMaximal,
        Suite::Crt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Plus => "plus",
            Suite::K => "k",
            Suite::Kaplansky => "kaplansky",
            Suite::SheafPrime => "sheaf-prime",
            Suite::SheafMaximal => "sheaf-maximal",
            Suite::Crt => "crt",
        }
    }

    fn includes(self, part: Suite) -> bool {
        self == Suite::All || self == part
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub algebra: String,
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} [{}]\n", self.algebra, self.suite);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(s, "  {tag} {}", c.name);
            if let Some(d) = &c.detail {
                let _ = write!(s, " ({d})");
            }
            if let Some(cx) = &c.counterexample {
                let _ = write!(s, " counterexample: {cx}");
            }
            s.push('\n');
        }
        let fails = self.failures().count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), fails);
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub crt_instances: usize,
    pub section_cap: u64,
    pub chang_bound: u64,
    pub iso_budget: u64,
    /// Downsets visited by brute-force enumeration oracles before skipping.
    pub brute_budget: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            crt_instances: 200,
            section_cap: crate::sheaf::DEFAULT_SECTION_CAP,
            chang_bound: 32,
            iso_budget: crate::spectrum::DEFAULT_ISO_BUDGET,
            brute_budget: 2_000_000,
        }
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn record(&mut self, name: &str, outcome: Result<(), Value>) {
        let (status, counterexample) = match outcome {
            Ok(()) => (Status::Pass, None),
            Err(v) => (Status::Fail, Some(v)),
        };
        self.0.push(Check {
            name: name.to_string(),
            status,
            detail: None,
            counterexample,
        });
    }

    fn note(&mut self, name: &str, outcome: Result<(), Value>, detail: String) {
        self.record(name, outcome);
        self.0.last_mut().unwrap().detail = Some(detail);
    }

    fn skip(&mut self, name: &str, reason: impl Into<String>) {
        self.0.push(Check {
            name: name.to_string(),
            status: Status::Skipped,
            detail: Some(reason.into()),
            counterexample: None,
        });
    }
}

fn fail<T: Serialize>(v: T) -> Result<(), Value> {
    Err(serde_json::to_value(v).unwrap_or(Value::Null))
}

fn ensure(cond: bool, v: impl FnOnce() -> Value) -> Result<(), Value> {
    if cond {
        Ok(())
    } else {
        Err(v())
    }
}

pub fn verify(algebra: &Algebra, suite: Suite, cfg: &VerifyConfig) -> Report {
    let checks = match algebra {
        Algebra::Finite(a) => verify_finite(a, suite, cfg),
        Algebra::Chang(_) => verify_chang(suite, cfg),
    };
    Report {
        schema: SCHEMA,
        algebra: algebra.label(),
        suite,
        checks,
    }
}

fn verify_finite(alg: &FiniteMv, suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    let mut c = Checks::default();
    if let Err(v) = alg.check_axioms() {
        c.record("axioms", fail(v));
        return c.0;
    }
    let space = MvDualSpace::build(alg);
    if suite == Suite::All {
        core_checks(&mut c, alg, &space, cfg);
    }
    if suite.includes(Suite::Plus) {
        plus_checks(&mut c, alg, &space, cfg);
    }
    if suite.includes(Suite::K) {
        k_checks(&mut c, alg, &space);
    }
    if suite.includes(Suite::Kaplansky) {
        kaplansky_checks(&mut c, alg, &space, cfg);
    }
    for (part, base) in [(Suite::SheafPrime, Base::Prime), (Suite::SheafMaximal, Base::Maximal)] {
        if suite.includes(part) {
            sheaf_checks(&mut c, &space, base, cfg);
        }
    }
    if suite.includes(Suite::Crt) {
        crt_checks(&mut c, alg, &space, cfg);
    }
    c.0
}

/// Every downset of the order closed under `keep`, or `None` past the budget.
fn budgeted_downsets(order: &FinitePoset, budget: u64, mut keep: impl FnMut(&BitSet) -> bool) -> Option<Vec<BitSet>> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    let finished = order.for_each_downset(|d| {
        seen += 1;
        if keep(d) {
            out.push(d.clone());
        }
        seen <= budget
    });
    finished.then(|| {
        out.sort();
        out
    })
}

fn core_checks(c: &mut Checks, alg: &FiniteMv, space: &MvDualSpace, cfg: &VerifyConfig) {
    c.record("axioms", Ok(()));
    let n = alg.size();
    let elems: Vec<usize> = alg.elements().collect();

    let order_arith = (|| {
        for &a in &elems {
            if alg.neg(alg.neg(a)) != a {
                return fail(json!({"item": "involution", "a": a}));
            }
            for &b in &elems {
                if alg.leq(a, b) && !alg.leq(alg.neg(b), alg.neg(a)) {
                    return fail(json!({"item": "negation-reverses-order", "a": a, "b": b}));
                }
                if alg.meet(alg.ominus(a, b), alg.ominus(b, a)) != alg.zero() {
                    return fail(json!({"item": "differences-meet-to-zero", "a": a, "b": b}));
                }
                let kleene = alg.join(alg.meet(a, alg.neg(a)), alg.join(b, alg.neg(b)));
                if kleene != alg.join(b, alg.neg(b)) {
                    return fail(json!({"item": "kleene", "a": a, "b": b}));
                }
                for &d in &elems {
                    if alg.leq(alg.ominus(a, b), d) != alg.leq(a, alg.oplus(b, d)) {
                        return fail(json!({"item": "adjunction", "a": a, "b": b, "c": d}));
                    }
                    if alg.oplus(a, alg.join(b, d)) != alg.join(alg.oplus(a, b), alg.oplus(a, d)) {
                        return fail(json!({"item": "oplus-preserves-joins", "a": a, "b": b, "c": d}));
                    }
                    if alg.ominus(alg.meet(a, b), d) != alg.meet(alg.ominus(a, d), alg.ominus(b, d)) {
                        return fail(json!({"item": "ominus-preserves-meets", "a": a, "b": b, "c": d}));
                    }
                    if alg.ominus(a, alg.meet(b, d)) != alg.join(alg.ominus(a, b), alg.ominus(a, d)) {
                        return fail(json!({"item": "ominus-reverses-meets", "a": a, "b": b, "c": d}));
                    }
                }
            }
        }
        Ok(())
    })();
    c.record("order-arithmetic", order_arith);

    let principal: Vec<BitSet> = elems.iter().map(|&a| alg.ideal_generated(&BitSet::singleton(n, a))).collect();
    let generation = (|| {
        for &a in &elems {
            for &b in &elems {
                if principal[a].intersection(&principal[b]) != principal[alg.meet(a, b)] {
                    return fail(json!({"item": "meet", "a": a, "b": b}));
                }
                let pair = alg.ideal_generated(&BitSet::from_elems(n, [a, b]));
                if pair != principal[alg.oplus(a, b)] || pair != principal[alg.join(a, b)] {
                    return fail(json!({"item": "join", "a": a, "b": b}));
                }
            }
        }
        Ok(())
    })();
    c.record("principal-ideal-lattice", generation);

    let lat = alg.lattice();
    let fast_primes: Vec<BitSet> = lat.prime_ideals().into_iter().map(|p| p.ideal.members().clone()).collect();
    let brute_primes: Vec<BitSet> = lat.prime_ideals_brute().into_iter().map(|p| p.ideal.members().clone()).collect();
    c.record(
        "prime-ideals-vs-brute",
        ensure(fast_primes == brute_primes, || json!({"fast": fast_primes.len(), "brute": brute_primes.len()})),
    );
    match budgeted_downsets(lat.order(), cfg.brute_budget, |d| alg.is_mv_ideal(d)) {
        Some(brute) => {
            let fast = alg.mv_ideals();
            c.record(
                "mv-ideals-vs-brute",
                ensure(fast == brute, || json!({"fast": fast.len(), "brute": brute.len()})),
            );
            let brute_primes: Vec<BitSet> = brute
                .into_iter()
                .filter(|i| alg.is_prime_mv_ideal(i).unwrap_or(false))
                .collect();
            let mut fast_primes = alg.prime_mv_ideals();
            fast_primes.sort();
            c.record(
                "prime-mv-ideals-vs-brute",
                ensure(fast_primes == brute_primes, || {
                    json!({"fast": fast_primes.len(), "brute": brute_primes.len()})
                }),
            );
        }
        None => {
            c.skip("mv-ideals-vs-brute", "downset budget exhausted");
            c.skip("prime-mv-ideals-vs-brute", "downset budget exhausted");
        }
    }

    let quotients = (|| {
        for y in space.y().iter() {
            let q = match alg.quotient(space.ideal(y)) {
                Ok(q) => q,
                Err(e) => return fail(json!({"point": y, "error": e.to_string()})),
            };
            if q.algebra.size() < 2 || !q.algebra.is_chain() {
                return fail(json!({"point": y, "size": q.algebra.size()}));
            }
            for a in alg.elements() {
                if q.algebra.neg(q.projection[a]) != q.projection[alg.neg(a)] {
                    return fail(json!({"point": y, "a": a}));
                }
                for b in alg.elements() {
                    if q.algebra.oplus(q.projection[a], q.projection[b]) != q.projection[alg.oplus(a, b)] {
                        return fail(json!({"point": y, "a": a, "b": b}));
                    }
                }
            }
        }
        Ok(())
    })();
    c.record("prime-quotients-are-chains", quotients);

    let ys = space.y().to_vec();
    let separation = (|| {
        for &y in &ys {
            for &y2 in &ys {
                if space.leq(y, y2) || space.leq(y2, y) {
                    continue;
                }
                let iy = space.ideal(y);
                let iy2 = space.ideal(y2);
                for a in iy2.difference(iy).iter() {
                    for b in iy.difference(iy2).iter() {
                        let u = alg.ominus(a, b);
                        let v = alg.ominus(b, a);
                        if iy.contains(u) || iy2.contains(v) || alg.meet(u, v) != alg.zero() {
                            return fail(json!({"y": y, "y2": y2, "a": a, "b": b}));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    c.record("separation", separation);

    let root = (|| {
        for &y in &ys {
            let above: Vec<usize> = ys.iter().copied().filter(|&y2| space.leq(y, y2)).collect();
            if !above.iter().all(|&p| above.iter().all(|&q| space.leq(p, q) || space.leq(q, p))) {
                return fail(json!({"y": y, "above": above}));
            }
            let maxima: Vec<usize> = space.z().iter().filter(|&z| space.leq(y, z)).collect();
            if maxima.len() != 1 {
                return fail(json!({"y": y, "maximal-above": maxima}));
            }
        }
        Ok(())
    })();
    c.record("root-system", root);

    let kcon = kcon_lattice(alg);
    c.record(
        "kcon-normal",
        match kcon.normality_witness() {
            None => Ok(()),
            Some((d1, d2)) => fail(json!({"d1": d1, "d2": d2})),
        },
    );
    let kcon_dual = FiniteSpace::from_poset(PrimeSpectrum::new(&kcon).order());
    let y_space = space.space().subspace(space.y());
    c.record(
        "kcon-dual-is-y",
        match kcon_dual.find_homeomorphism(&y_space, cfg.iso_budget) {
            IsoSearch::Found(_) => Ok(()),
            other => fail(format!("{other:?}")),
        },
    );

    c.record(
        "duality-roundtrip",
        duality_roundtrip(lat).map(|_| ()).map_err(|e| json!(e.to_string())),
    );
}

/// Principal MV-ideals ordered by inclusion, indexed by idempotent.
pub fn kcon_lattice(alg: &FiniteMv) -> FiniteLattice {
    let idem = alg.idempotents();
    let pairs: Vec<(usize, usize)> = (0..idem.len())
        .flat_map(|i| (0..idem.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| alg.leq(idem[i], idem[j]))
        .collect();
    let order = FinitePoset::from_pairs(idem.len(), &pairs).expect("inclusion is a partial order");
    FiniteLattice::from_order(order).expect("principal MV-ideals form a lattice")
}

fn plus_checks(c: &mut Checks, alg: &FiniteMv, space: &MvDualSpace, cfg: &VerifyConfig) {
    let n = space.len();
    let pts: Vec<usize> = (0..n).collect();
    let plus = |x, y| space.partial_plus(x, y);

    let involution = (|| {
        for &x in &pts {
            let ix = space.involution(x);
            if space.involution(ix) != x {
                return fail(json!({"item": "involutive", "x": x}));
            }
            if !space.leq(x, ix) && !space.leq(ix, x) {
                return fail(json!({"item": "comparable", "x": x}));
            }
            let negated = BitSet::from_elems(
                alg.size(),
                space.spectrum().points()[x].filter.members().iter().map(|a| alg.neg(a)),
            );
            if *space.ideal(ix) != negated {
                return fail(json!({"item": "negated-filter", "x": x}));
            }
            for &y in &pts {
                if space.leq(x, y) && !space.leq(space.involution(y), ix) {
                    return fail(json!({"item": "order-reversing", "x": x, "y": y}));
                }
            }
        }
        Ok(())
    })();
    c.record("involution", involution);

    let comprehension = (|| {
        for &x in &pts {
            for &y in &pts {
                let direct = oplus_bar(alg, space.ideal(x), space.ideal(y)).expect("prime ideals");
                if space.spectrum().point_of(direct.members()) != plus(x, y) {
                    return fail(json!({"x": x, "y": y}));
                }
            }
        }
        Ok(())
    })();
    c.record("plus-vs-comprehension", comprehension);

    c.record(
        "commutativity",
        (|| {
            for &x in &pts {
                for &y in &pts {
                    if plus(x, y) != plus(y, x) {
                        return fail(json!({"x": x, "y": y}));
                    }
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "associativity",
        (|| {
            for &x in &pts {
                for &y in &pts {
                    let Some(xy) = plus(x, y) else { continue };
                    for &z in &pts {
                        let Some(left) = plus(xy, z) else { continue };
                        let right = plus(y, z).and_then(|yz| plus(x, yz));
                        if right != Some(left) {
                            return fail(json!({"x": x, "y": y, "z": z}));
                        }
                    }
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "translation-invariance",
        (|| {
            for &x in &pts {
                for &y2 in &pts {
                    let Some(big) = plus(x, y2) else { continue };
                    for &y1 in pts.iter().filter(|&&y1| space.leq(y1, y2)) {
                        match plus(x, y1) {
                            Some(small) if space.leq(small, big) => {}
                            _ => return fail(json!({"x": x, "x1": y1, "x2": y2})),
                        }
                    }
                }
            }
            Ok(())
        })(),
    );

    let idempotent = BitSet::from_elems(n, pts.iter().copied().filter(|&y| plus(y, y) == Some(y)));
    let below = BitSet::from_elems(
        n,
        pts.iter()
            .copied()
            .filter(|&y| plus(y, y).is_some_and(|s| space.leq(s, y))),
    );
    let primes = BitSet::from_elems(
        n,
        alg.prime_mv_ideals()
            .iter()
            .map(|i| space.spectrum().point_of(i).expect("prime MV-ideals are prime")),
    );
    c.record(
        "idempotents-are-y",
        ensure(idempotent == *space.y() && below == *space.y() && primes == *space.y(), || {
            json!({"idempotent": idempotent, "y": space.y(), "prime-mv": primes})
        }),
    );

    let continuity = (|| {
        for a in alg.elements() {
            let mut union = vec![BitSet::new(n); n];
            for b in alg.elements() {
                for d in alg.elements() {
                    if !alg.leq(a, alg.oplus(b, d)) {
                        continue;
                    }
                    let bc = space.hat(b).complement();
                    let dc = space.hat(d).complement();
                    for x in bc.iter() {
                        union[x].union_with(&dc);
                    }
                }
            }
            for &x in &pts {
                for &y in &pts {
                    let Some(s) = plus(x, y) else { continue };
                    let lhs = space.ideal(s).contains(a);
                    if lhs != union[x].contains(y) {
                        return fail(json!({"a": a, "x": x, "y": y}));
                    }
                }
            }
        }
        Ok(())
    })();
    c.record("continuity", continuity);

    c.record(
        "closed-domain",
        (|| {
            for &x in &pts {
                for &y in &pts {
                    if plus(x, y).is_some() != space.leq(y, space.involution(x)) {
                        return fail(json!({"x": x, "y": y}));
                    }
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "i-definability",
        (|| {
            for &x in &pts {
                let dom: Vec<usize> = pts.iter().copied().filter(|&y| plus(x, y).is_some()).collect();
                let max = dom.iter().copied().find(|&m| dom.iter().all(|&y| space.leq(y, m)));
                if max != Some(space.involution(x)) {
                    return fail(json!({"x": x, "max": max}));
                }
            }
            Ok(())
        })(),
    );

    let mode = AdjunctionMode::auto(alg.size(), cfg.seed);
    match check_adjunction(alg, mode) {
        Ok(count) => c.note("lifted-adjunction", Ok(()), format!("{count} triples, {mode:?}")),
        Err(t) => c.record("lifted-adjunction", fail(t)),
    }

    let ideals = alg.mv_ideals();
    c.record(
        "lifted-sum-is-ideal-join",
        (|| {
            for i in &ideals {
                for j in &ideals {
                    let bar = oplus_bar(alg, i, j).expect("MV-ideals are ideals");
                    if *bar.members() != alg.ideal_generated(&i.union(j)) {
                        return fail(json!({"i": i, "j": j}));
                    }
                }
            }
            Ok(())
        })(),
    );
}

fn k_checks(c: &mut Checks, alg: &FiniteMv, space: &MvDualSpace) {
    let n = space.len();
    let ideals = alg.mv_ideals();
    c.record(
        "k-formula-vs-oracle",
        (|| {
            for x in 0..n {
                let formula = space.k_formula(x);
                if space.k_oracle(x, &ideals).as_ref() != Some(&formula) {
                    return fail(json!({"x": x}));
                }
                // The largest lattice ideal with the same property, over all ↓g.
                let lat = alg.lattice();
                let ix = space.ideal(x);
                let largest = alg
                    .elements()
                    .filter(|&g| ix.iter().all(|a| alg.leq(alg.oplus(a, g), space.generator(x))))
                    .fold(lat.bot(), |acc, g| lat.join(acc, g));
                if *lat.order().down_set(largest) != formula {
                    return fail(json!({"x": x, "item": "largest-lattice-ideal"}));
                }
                if !alg.is_prime_mv_ideal(&formula).unwrap_or(false) {
                    return fail(json!({"x": x, "item": "prime-mv-ideal"}));
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "k-filter-arithmetic",
        (|| {
            for x in 0..n {
                let f = space.spectrum().points()[x].filter.members();
                let diff = crate::ideal_arith::ominus_bar(alg, f, space.ideal(x)).expect("prime filter");
                if diff.members().complement() != *space.ideal(space.k_map(x)) {
                    return fail(json!({"x": x}));
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "k-fixes-exactly-y",
        (|| {
            for x in 0..n {
                if !space.y().contains(space.k_map(x)) || (space.k_map(x) == x) != space.y().contains(x) {
                    return fail(json!({"x": x, "k": space.k_map(x)}));
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "fibers-are-chains",
        (|| {
            for y in space.y().iter() {
                let fiber = space.fiber(y).expect("y in Y");
                if fiber != space.c_set(y) {
                    return fail(json!({"y": y, "fiber": fiber, "c": space.c_set(y)}));
                }
                if !space.spectrum().order().is_chain(&fiber) {
                    return fail(json!({"y": y, "fiber": fiber}));
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "k-continuity",
        (|| {
            for a in alg.elements() {
                let lhs = BitSet::from_elems(n, (0..n).filter(|&x| space.ideal(space.k_map(x)).contains(a)));
                let mut rhs = BitSet::full(n);
                for d in alg.elements() {
                    rhs.intersect_with(&space.hat(alg.ominus(d, a)).union(&space.hat(d).complement()));
                }
                if lhs != rhs {
                    return fail(json!({"a": a, "preimage": lhs, "intersection": rhs}));
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "interpolation",
        (|| {
            for x in 0..n {
                for x2 in (0..n).filter(|&x2| space.leq(x, x2)) {
                    let w = match space.interpolate(x, x2) {
                        Ok(w) => w,
                        Err(e) => return fail(json!({"x": x, "x2": x2, "error": e.to_string()})),
                    };
                    let k = |p| space.k_map(p);
                    if !(space.leq(x, w) && space.leq(w, x2) && space.leq(k(x), k(w)) && space.leq(k(x2), k(w))) {
                        return fail(json!({"x": x, "x2": x2, "witness": w}));
                    }
                }
            }
            Ok(())
        })(),
    );

    c.record(
        "mk-constant-on-comparables",
        (|| {
            for x in 0..n {
                for x2 in (0..n).filter(|&x2| space.leq(x, x2)) {
                    if space.mk(x) != space.mk(x2) {
                        return fail(json!({"x": x, "x2": x2}));
                    }
                }
            }
            Ok(())
        })(),
    );
}

fn kaplansky_checks(c: &mut Checks, alg: &FiniteMv, space: &MvDualSpace, cfg: &VerifyConfig) {
    c.record(
        "m-retraction",
        (|| {
            for y in space.y().iter() {
                let m = space.m_map(y).expect("y in Y");
                if !space.z().contains(m) || !space.leq(y, m) || (m == y) != space.z().contains(y) {
                    return fail(json!({"y": y, "m": m}));
                }
            }
            Ok(())
        })(),
    );
    c.record(
        "w-quotient",
        space.w_quotient().map(|_| ()).map_err(|e| json!(e.to_string())),
    );
    let verdict = kaplansky_self(space);
    c.note(
        "lattice-only-z",
        ensure(!verdict.is_failure() && verdict != KaplanskyVerdict::Timeout, || json!(verdict.clone())),
        format!("{verdict:?}"),
    );
    let a = Algebra::Finite(alg.clone());
    let pair = kaplansky_check(&a, &a, cfg.iso_budget);
    match pair {
        KaplanskyVerdict::Skipped { reason } => c.skip("kaplansky-pair", reason),
        v => c.note(
            "kaplansky-pair",
            ensure(matches!(v, KaplanskyVerdict::Homeomorphic { .. }), || json!(v.clone())),
            format!("{v:?}"),
        ),
    }
}

fn sheaf_checks(c: &mut Checks, space: &MvDualSpace, base: Base, cfg: &VerifyConfig) {
    let inst = EtaleInstance::new(space, base);
    let tag = |s: &str| format!("{base}-{s}");
    c.record(&tag("q-continuous"), ensure(inst.q_is_continuous(), || json!(base)));
    c.record(
        &tag("stalks"),
        match inst.stalk_shape_violation() {
            None => Ok(()),
            Some(p) => fail(json!({"base-point": inst.points()[p], "size": inst.stalks()[p].size()})),
        },
    );
    match inst.eta_check(cfg.section_cap) {
        Ok(report) => c.note(
            &tag("eta"),
            match &report.witness {
                None => Ok(()),
                Some(w) => fail(w),
            },
            format!("{} sections", report.sections),
        ),
        Err(e) => c.skip(&tag("eta"), e.to_string()),
    }
    match inst.global_sections(cfg.section_cap) {
        Ok(sections) => c.record(
            &tag("patch-roundtrip"),
            (|| {
                for s in &sections {
                    if let Err(e) = inst.patch_section(s) {
                        return fail(json!({"section": s.assignment, "error": e}));
                    }
                }
                Ok(())
            })(),
        ),
        Err(e) => c.skip(&tag("patch-roundtrip"), e.to_string()),
    }
    let control = (|| {
        for p in 0..inst.points().len() {
            let truncated = inst.without_base_point(p);
            match truncated.eta_check(cfg.section_cap) {
                Ok(r) if matches!(r.witness, Some(EtaFailure::NotInjective { .. })) => {}
                Ok(r) => return fail(json!({"dropped": inst.points()[p], "witness": r.witness})),
                Err(e) => return fail(json!({"dropped": inst.points()[p], "error": e.to_string()})),
            }
        }
        Ok(())
    })();
    c.record(&tag("drop-point-detected"), control);
    if base == Base::Maximal {
        germinal_checks(c, space, cfg);
    }
}

fn germinal_checks(c: &mut Checks, space: &MvDualSpace, cfg: &VerifyConfig) {
    let alg = space.algebra();
    let n = space.len();
    c.record(
        "germinal-subspace",
        (|| {
            for z in space.z().iter() {
                let o = space.germinal_ideal(z);
                if !alg.is_mv_ideal(&o) {
                    return fail(json!({"z": z, "item": "mv-ideal"}));
                }
                let fiber = BitSet::from_elems(n, (0..n).filter(|&x| space.mk(x) == z));
                if space.closed_subspace_of_ideal(&o) != fiber {
                    return fail(json!({"z": z, "fiber": fiber}));
                }
                let q = alg.quotient(&o).expect("proper");
                let dual = FiniteSpace::from_poset(q.algebra.lattice().spectrum().order());
                let sub = space.space().subspace(&fiber);
                if !matches!(dual.find_homeomorphism(&sub, cfg.iso_budget), IsoSearch::Found(_)) {
                    return fail(json!({"z": z, "item": "dual-of-quotient"}));
                }
            }
            Ok(())
        })(),
    );
    c.record(
        "germinal-hyperarchimedean",
        (|| {
            for z in space.z().iter() {
                if space.germinal_ideal(z) != *space.ideal(z) {
                    return fail(json!({"z": z}));
                }
            }
            let fibers: Vec<BitSet> = space
                .z()
                .iter()
                .map(|z| BitSet::from_elems(n, (0..n).filter(|&x| space.mk(x) == z)))
                .collect();
            let mut sorted = fibers.clone();
            sorted.sort();
            let mut comps = space.spectrum().order().components();
            comps.sort();
            ensure(sorted == comps, || json!({"fibers": fibers}))
        })(),
    );
}

fn crt_checks(c: &mut Checks, alg: &FiniteMv, space: &MvDualSpace, cfg: &VerifyConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let instances: Vec<_> = (0..cfg.crt_instances).map(|_| random_crt_instance(alg, &mut rng)).collect();
    c.note(
        "crt-solve",
        (|| {
            for inst in &instances {
                match crt_solve(alg, &inst.ideals, &inst.a) {
                    Ok(b) if b == inst.expected => {}
                    other => return fail(json!({"instance": inst, "result": format!("{other:?}")})),
                }
                for i in &inst.ideals {
                    for j in &inst.ideals {
                        let bar = oplus_bar(alg, i, j).expect("ideals");
                        if *bar.members() != alg.ideal_generated(&i.union(j)) {
                            return fail(json!({"instance": inst, "item": "ideal-join"}));
                        }
                    }
                }
            }
            Ok(())
        })(),
        format!("{} instances, seed {}", instances.len(), cfg.seed),
    );
    c.record(
        "crt-term",
        (|| {
            for inst in &instances {
                let term = match crt_term(space, &inst.generators, &inst.a) {
                    Ok(t) => t,
                    Err(e) => return fail(json!({"instance": inst, "error": e})),
                };
                if term.b != inst.expected || term_value(alg, &inst.generators, &inst.a, term.t) != term.b {
                    return fail(json!({"instance": inst, "term": term}));
                }
            }
            Ok(())
        })(),
    );
    let zero = BitSet::singleton(alg.size(), alg.zero());
    c.record(
        "crt-rejects-incompatible",
        match crt_solve(alg, &[zero.clone(), zero], &[alg.zero(), alg.one()]) {
            Err(crate::sheaf::CrtError::Incompatible { .. }) => Ok(()),
            other => fail(format!("{other:?}")),
        },
    );
    c.record(
        "stabilization",
        (|| {
            for a in alg.elements() {
                for u in alg.elements() {
                    match stabilization_index(alg, a, u) {
                        Some(m) if m <= alg.size() => {}
                        other => return fail(json!({"a": a, "u": u, "index": other})),
                    }
                }
            }
            Ok(())
        })(),
    );
    if alg.size() > SANDWICH_CARRIER_LIMIT {
        c.skip("sandwich", format!("carrier above {SANDWICH_CARRIER_LIMIT}"));
    } else {
        c.record(
            "sandwich",
            (|| {
                for a in alg.elements() {
                    for u in alg.elements() {
                        if let Err(f) = sandwich_check(space, a, u) {
                            return fail::<SandwichFailure>(f);
                        }
                    }
                }
                Ok(())
            })(),
        );
    }
}

fn verify_chang(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    let mut c = Checks::default();
    let n = cfg.chang_bound;
    let pts = ChangPoint::bounded(n);
    let bound = format!("indices <= {n}");
    if suite == Suite::All {
        c.note(
            "axioms",
            Chang::check_axioms_bounded(n).map_err(|v| json!(v)),
            bound.clone(),
        );
        c.record(
            "ideal-taxonomy",
            ensure(
                Chang::prime_mv_ideals() == vec![ChangIdeal::Zero, ChangIdeal::Radical]
                    && Chang::maximal_mv_ideals() == vec![ChangIdeal::Radical],
                || json!({"primes": Chang::prime_mv_ideals(), "maximal": Chang::maximal_mv_ideals()}),
            ),
        );
    }
    if suite.includes(Suite::Plus) {
        c.note(
            "involution",
            (|| {
                for &x in &pts {
                    let ix = ChangSpace::involution(x);
                    if ChangSpace::involution(ix) != x {
                        return fail(json!({"x": x}));
                    }
                    for &y in pts.iter().filter(|&&y| x <= y) {
                        if ChangSpace::involution(y) > ix {
                            return fail(json!({"x": x, "y": y}));
                        }
                    }
                }
                Ok(())
            })(),
            bound.clone(),
        );
        c.note(
            "closed-domain",
            (|| {
                for &x in &pts {
                    for &y in &pts {
                        let defined = ChangSpace::partial_plus(x, y).is_some();
                        if defined != (y <= ChangSpace::involution(x))
                            || ChangSpace::partial_plus(x, y) != ChangSpace::partial_plus(y, x)
                        {
                            return fail(json!({"x": x, "y": y}));
                        }
                    }
                }
                Ok(())
            })(),
            bound.clone(),
        );
        c.note(
            "idempotents-are-y",
            (|| {
                for &x in &pts {
                    let idem = chang_oplus_bar(x.ideal(), x.ideal()) == x.ideal();
                    if idem != ChangSpace::in_y(x) {
                        return fail(json!({"x": x}));
                    }
                }
                Ok(())
            })(),
            bound.clone(),
        );
    }
    if suite.includes(Suite::K) {
        c.note(
            "k-formula",
            (|| {
                for &x in &pts {
                    let small = match x {
                        ChangPoint::I(i) | ChangPoint::J(std::cmp::Reverse(i)) => i < n / 2,
                        ChangPoint::Omega => true,
                    };
                    if small {
                        if let Some(a) = ChangSpace::k_formula_mismatch(x, n) {
                            return fail(json!({"x": x, "a": a}));
                        }
                    }
                    if ChangSpace::k_via_filters(x) != ChangSpace::k_map(x) {
                        return fail(json!({"x": x, "item": "filter-arithmetic"}));
                    }
                    if (ChangSpace::k_map(x) == x) != ChangSpace::in_y(x) {
                        return fail(json!({"x": x, "item": "fixpoints"}));
                    }
                }
                Ok(())
            })(),
            bound.clone(),
        );
        c.note(
            "fibers",
            (|| {
                for y in [ChangPoint::I(0), ChangPoint::Omega] {
                    let fiber = ChangSpace::fiber_bounded(y, n);
                    if fiber != ChangSpace::c_set_bounded(y, n) {
                        return fail(json!({"y": y, "fiber": fiber}));
                    }
                }
                Ok(())
            })(),
            bound.clone(),
        );
    }
    if suite.includes(Suite::Kaplansky) {
        let y: Vec<ChangPoint> = pts.iter().copied().filter(|&x| ChangSpace::in_y(x)).collect();
        let z: Vec<ChangPoint> = pts.iter().copied().filter(|&x| ChangSpace::in_z(x)).collect();
        c.record(
            "spectrum-doubleton",
            ensure(y.len() == 2 && z.len() == 1, || json!({"y": y, "z": z})),
        );
        c.record(
            "m-retraction",
            ensure(
                y.iter().all(|&p| ChangSpace::m_map(p) == Some(ChangPoint::Omega)),
                || json!({"y": y}),
            ),
        );
        // The order on X is a chain, so W relates everything.
        let w_classes = 1;
        c.record(
            "w-quotient",
            ensure(w_classes == z.len(), || json!({"classes": w_classes, "z": z.len()})),
        );
    }
    for (part, base) in [(Suite::SheafPrime, Base::Prime), (Suite::SheafMaximal, Base::Maximal)] {
        if suite.includes(part) {
            if base == Base::Maximal {
                c.record(
                    "germinal-ideal",
                    ensure(ChangSpace::germinal_ideal(ChangPoint::Omega) == Some(ChangIdeal::Zero), || {
                        json!(ChangSpace::germinal_ideal(ChangPoint::Omega))
                    }),
                );
            }
            c.skip(&format!("{base}-eta"), "infinite base");
        }
    }
    if suite.includes(Suite::Crt) {
        c.skip("crt-solve", "infinite carrier");
    }
    c.0
}

/// The standard corpus: `Łn` for `n <= 8`, every product `Łn × Łm` with
/// `n <= m` and carrier at most 64, and three products of three chains.
pub fn standard_corpus() -> Vec<FiniteMv> {
    let l = |n| FiniteMv::lukasiewicz(n).expect("n >= 1");
    let prod = |f: &[usize]| {
        let factors: Vec<FiniteMv> = f.iter().map(|&n| l(n)).collect();
        FiniteMv::product(&factors, 64).expect("within cap")
    };
    let mut out: Vec<FiniteMv> = (1..=8).map(l).collect();
    for n in 1..=8 {
        for m in n..=8 {
            if (n + 1) * (m + 1) <= 64 {
                out.push(prod(&[n, m]));
            }
        }
    }
    for f in [[1, 1, 1], [1, 2, 1], [2, 2, 2]] {
        out.push(prod(&f));
    }
    out
}

/// Order isomorphism of two lattice reducts, exposed for the CLI.
pub fn lattices_isomorphic(a: &FiniteMv, b: &FiniteMv, budget: u64) -> IsoSearch {
    let rows = |m: &FiniteMv| -> Vec<BitSet> { (0..m.size()).map(|x| m.lattice().order().up_set(x).clone()).collect() };
    find_order_isomorphism(&rows(a), &rows(b), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::AlgebraSpec;

    fn build(json: &str) -> Algebra {
        AlgebraSpec::parse(json).unwrap().build(crate::mv::DEFAULT_CARRIER_CAP).unwrap()
    }

    fn quick() -> VerifyConfig {
        VerifyConfig {
            crt_instances: 20,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn l3_all_pass() {
        let r = verify(&build(r#"{"kind":"lukasiewicz","n":3}"#), Suite::All, &quick());
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.checks.len() > 30);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{}", r.to_text());
    }

    #[test]
    fn product_suites() {
        let a = build(r#"{"kind":"product","factors":[{"kind":"lukasiewicz","n":2},{"kind":"lukasiewicz","n":3}]}"#);
        for suite in Suite::ALL {
            let r = verify(&a, suite, &quick());
            assert!(r.passed(), "{}", r.to_text());
        }
        let r = verify(&a, Suite::SheafPrime, &quick());
        assert_eq!(r.check("prime-eta").unwrap().status, Status::Pass);
    }

    #[test]
    fn chang_suite() {
        let r = verify(&build(r#"{"kind":"chang"}"#), Suite::All, &quick());
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.check("spectrum-doubleton").unwrap().status, Status::Pass);
        assert_eq!(r.check("crt-solve").unwrap().status, Status::Skipped);
    }

    #[test]
    fn corpus_shape() {
        let corpus = standard_corpus();
        assert_eq!(corpus.len(), 8 + 34 + 3);
        assert!(corpus.iter().all(|a| a.size() <= 64));
    }

    #[test]
    fn suite_names_roundtrip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>(), Ok(suite));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn json_shape() {
        let r = verify(&build(r#"{"kind":"lukasiewicz","n":1}"#), Suite::Kaplansky, &quick());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], "mv-spectra/1");
        assert_eq!(v["suite"], "kaplansky");
        assert_eq!(v["checks"][0]["status"], "pass");
    }

    #[test]
    fn kcon_of_square_is_square() {
        let a = FiniteMv::product(
            &[FiniteMv::lukasiewicz(1).unwrap(), FiniteMv::lukasiewicz(3).unwrap()],
            64,
        )
        .unwrap();
        let k = kcon_lattice(&a);
        assert_eq!(k.size(), 4);
        assert!(k.is_normal());
    }
}
