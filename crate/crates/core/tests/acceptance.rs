//! Acceptance suite: every criterion runs at its stated scale and time limit
//! and prints one PASS/FAIL line.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{Chain, OCtx};
use mvpolarity::algebra::validate_algebra;
use mvpolarity::canonical::{build_surrogate, lemma_suite, small_lattices, CanonicalOptions, ModalLattice};
use mvpolarity::enriched::check_compatibility;
use mvpolarity::generate::{random_compatible_frame, random_context, rng};
use mvpolarity::logic::axiom_catalogue;
use mvpolarity::market::{self, Typicality};
use mvpolarity::mvsets::{singleton, subsethood};
use mvpolarity::semantics::{sequent_valid, soundness_suite};
use mvpolarity::{
    parse_formula, parse_sequent, Context, EnrichedContext, EnumerationOptions, Exec, Formula, MvRelation, MvSet,
    Relations, Truth, TruthAlgebra, ValidityOptions,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: mvpolarity::Error) -> String {
    e.to_string()
}

fn residuated_lattice_laws() -> Outcome {
    let mut triples = 0usize;
    for n in 2..=7 {
        for alg in [TruthAlgebra::lukasiewicz(n).map_err(err)?, TruthAlgebra::goedel(n).map_err(err)?] {
            let report = validate_algebra(&alg.tables()).map_err(err)?;
            ensure(report.passed(), || format!("{} {n}: {:?}", alg.kind(), report.laws.iter().find(|l| !l.passed)))?;
            for a in alg.elements() {
                for b in alg.elements() {
                    for c in alg.elements() {
                        let lhs = alg.leq(alg.otimes(a, b), c);
                        let rhs = alg.leq(a, alg.residuum(b, c));
                        ensure(lhs == rhs, || format!("{} {n}: residuation fails at ({a}, {b}, {c})", alg.kind()))?;
                        triples += 1;
                    }
                }
            }
        }
    }
    Ok(format!("12 chains, {triples} triples"))
}

fn galois_adjunction() -> Outcome {
    let alg = Arc::new(TruthAlgebra::lukasiewicz(3).map_err(err)?);
    let chain = Chain::luk(3);
    let sets = chain.all_sets(2);
    let mut checks = 0usize;
    for m in chain.all_sets(4) {
        let i = MvRelation::from_matrix(&alg, 2, 2, &[m[0..2].to_vec(), m[2..4].to_vec()]).map_err(err)?;
        let ctx = Context::anonymous(alg.clone(), i);
        for f in &sets {
            let f = MvSet::from_indices(&alg, f).map_err(err)?;
            let up = ctx.up(&f).map_err(err)?;
            for u in &sets {
                let u = MvSet::from_indices(&alg, u).map_err(err)?;
                let lhs = subsethood(&alg, &f, &ctx.down(&u).map_err(err)?).map_err(err)?;
                let rhs = subsethood(&alg, &u, &up).map_err(err)?;
                ensure(lhs == rhs, || format!("I={m:?} f={:?} u={:?}: {lhs} vs {rhs}", f.indices(), u.indices()))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (I, f, u) triples"))
}

fn singleton_decomposition() -> Outcome {
    let alg = TruthAlgebra::lukasiewicz(4).map_err(err)?;
    let mut sets = 0usize;
    for len in 0..=3 {
        for f in Chain::luk(4).all_sets(len) {
            let f = MvSet::from_indices(&alg, &f).map_err(err)?;
            let mut acc = MvSet::empty(len);
            for w in 0..len {
                acc = acc.join(&alg, &singleton(&alg, len, f.get(w), w).map_err(err)?).map_err(err)?;
            }
            ensure(acc == f, || format!("{:?} reassembles to {:?}", f.indices(), acc.indices()))?;
            sets += 1;
        }
    }
    Ok(format!("{sets} sets"))
}

fn check_enumeration(ctx: &Context) -> Result<usize, String> {
    let lattice = ctx.enumerate_concepts(&EnumerationOptions::default()).map_err(err)?;
    let got: std::collections::BTreeSet<_> =
        lattice.concepts().iter().map(|c| (c.extent.indices(), c.intent.indices())).collect();
    let want = OCtx::of(ctx).concepts();
    ensure(got.len() == lattice.len() && got == want, || {
        format!("{:?}: {} concepts, oracle {}", ctx.incidence().to_matrix(), lattice.len(), want.len())
    })?;
    Ok(lattice.len())
}

fn concept_enumeration() -> Outcome {
    let algebras = [
        Arc::new(TruthAlgebra::boolean()),
        Arc::new(TruthAlgebra::lukasiewicz(3).map_err(err)?),
        Arc::new(TruthAlgebra::goedel(3).map_err(err)?),
    ];
    let mut r = rng(4);
    let mut total = 0;
    for k in 0..200 {
        let (a, x) = (r.random_range(1..=3), r.random_range(1..=3));
        total += check_enumeration(&random_context(&mut r, algebras[k % 3].clone(), a, x))?;
    }
    let b = &algebras[0];
    let diamond = check_enumeration(&Context::anonymous(b.clone(), MvRelation::diagonal(b, 2)))?;
    ensure(diamond == 4, || format!("diagonal context has {diamond} concepts"))?;
    let l3 = &algebras[1];
    let single = check_enumeration(&Context::anonymous(l3.clone(), MvRelation::constant(1, 1, Truth(1))))?;
    ensure(single == 2, || format!("singleton context has {single} concepts"))?;
    Ok(format!("200 random contexts, {total} concepts, fixed examples 4 and 2"))
}

fn random_frames(count: usize, seed: u64) -> Result<Vec<EnrichedContext>, String> {
    let algebras = [
        Arc::new(TruthAlgebra::boolean()),
        Arc::new(TruthAlgebra::lukasiewicz(3).map_err(err)?),
        Arc::new(TruthAlgebra::goedel(3).map_err(err)?),
    ];
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let (a, x) = (r.random_range(1..=3), r.random_range(1..=3));
            random_compatible_frame(&mut r, algebras[k % 3].clone(), a, x).map_err(err)
        })
        .collect()
}

fn modal_operator_lemma() -> Outcome {
    let mut pairs = 0;
    for f in random_frames(200, 5)? {
        let lattice = f.base().enumerate_concepts(&EnumerationOptions::default()).map_err(err)?;
        let report = f.complex_algebra_laws(&lattice, Exec::default()).map_err(err)?;
        ensure(report.passed(), || format!("{report:?}"))?;
        pairs += report.pairs_checked;
    }
    Ok(format!("200 frames, {pairs} concept pairs"))
}

fn soundness() -> Outcome {
    let catalogue = axiom_catalogue().len();
    let mut verdicts = 0;
    for f in random_frames(100, 6)? {
        let report = soundness_suite(&f, &ValidityOptions::default()).map_err(err)?;
        ensure(report.passed(), || format!("{:?}", report.axioms.iter().find(|v| !v.valid())))?;
        verdicts += report.axioms.len();
    }
    Ok(format!("100 frames × {catalogue} axioms = {verdicts} verdicts"))
}

fn identity_laws() -> Outcome {
    let algebras = [
        Arc::new(TruthAlgebra::boolean()),
        Arc::new(TruthAlgebra::lukasiewicz(3).map_err(err)?),
        Arc::new(TruthAlgebra::goedel(3).map_err(err)?),
    ];
    let mut r = rng(7);
    let mut concepts = 0;
    for k in 0..50 {
        let (a, x) = (r.random_range(1..=3), r.random_range(1..=3));
        let ctx = random_context(&mut r, algebras[k % 3].clone(), a, x);
        let f = EnrichedContext::identity_frame(ctx.clone());
        for c in ctx.enumerate_concepts(&EnumerationOptions::default()).map_err(err)?.concepts() {
            ensure(f.box_op(c).map_err(err)? == *c, || format!("box moves {c:?}"))?;
            ensure(f.diamond_op(c).map_err(err)? == *c, || format!("diamond moves {c:?}"))?;
            concepts += 1;
        }
    }
    Ok(format!("50 contexts, {concepts} concepts"))
}

fn appendix_lemmas() -> Outcome {
    let alg = Arc::new(TruthAlgebra::lukasiewicz(3).map_err(err)?);
    let opts = CanonicalOptions::default();
    let mut lattices = 0;
    let mut pairs = 0;
    for base in small_lattices(4) {
        for (b, d) in base.admissible_modalities() {
            let l = base.with_modalities(b, d).map_err(err)?;
            let report = lemma_suite(&alg, &l, &opts).map_err(err)?;
            ensure(report.passed(), || {
                format!("{:?} box={:?} dia={:?}: {:?}", l.names(), l.box_map(), l.dia_map(), report.items.iter().find(|i| i.binding && !i.passed))
            })?;
            let s = build_surrogate(alg.clone(), &l, &opts).map_err(err)?;
            ensure(s.forms.passed(), || format!("{:?}: displayed forms disagree {:?}", l.names(), s.forms))?;
            pairs += s.forms.pairs;
            lattices += 1;
        }
    }
    Ok(format!("{lattices} modal lattices, {pairs} filter/ideal pairs"))
}

fn surrogate_compatibility() -> Outcome {
    let opts = CanonicalOptions::default();
    for alg in [TruthAlgebra::boolean(), TruthAlgebra::lukasiewicz(3).map_err(err)?] {
        let alg = Arc::new(alg);
        for l in [ModalLattice::chain(2), ModalLattice::diamond()] {
            let s = build_surrogate(alg.clone(), &l, &opts).map_err(err)?;
            let rel = s.frame.relations();
            let report = check_compatibility(s.frame.base(), rel.r_box.as_ref(), rel.r_diamond.as_ref()).map_err(err)?;
            ensure(report.passed(), || format!("{} over {}: {:?}", l.len(), alg.kind(), report.failures.first()))?;
        }
    }
    Ok("2-chain and diamond over B and Ł3".into())
}

fn random_formula(r: &mut impl Rng, depth: usize) -> Formula {
    const ATOMS: [&str; 4] = ["p", "q", "r", "s_1"];
    if depth == 0 || r.random_range(0..5) == 0 {
        return match r.random_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bot,
            k => Formula::atom(ATOMS[k - 2]),
        };
    }
    let sub = |r: &mut _| random_formula(r, depth - 1);
    match r.random_range(0..6) {
        0 => Formula::and(sub(r), sub(r)),
        1 => Formula::or(sub(r), sub(r)),
        2 => Formula::boxed(sub(r)),
        3 => Formula::dia(sub(r)),
        4 => Formula::rhd(sub(r)),
        _ => Formula::lhd(sub(r)),
    }
}

fn parser_round_trip() -> Outcome {
    let mut r = rng(10);
    let mut deepest = 0;
    for _ in 0..1000 {
        let phi = random_formula(&mut r, 8);
        deepest = deepest.max(phi.depth());
        let text = phi.to_string();
        let back = parse_formula(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == phi, || format!("{text} parses to {back}"))?;
    }
    Ok(format!("1000 formulas, max depth {deepest}"))
}

fn market_degrees() -> Outcome {
    let half = Truth(1);
    let firms = market::parse_arena(
        r#"{"algebra": "lukasiewicz:3", "objects": ["a","b"], "attributes": ["x1","x2"], "I": [[2,1],[1,1]]}"#,
    )
    .map_err(err)?;
    let c = market::firm_category(&firms, "a").map_err(err)?;
    ensure(c.extent.get(1) == half, || format!("firm category extent at b = {}", c.extent.get(1)))?;
    let w = BTreeMap::from([("x1".to_string(), half), ("x2".to_string(), Truth(2))]);
    let basket = market::basket_category(&firms, &w).map_err(err)?;
    ensure(basket.extent.get(0) == half, || format!("basket extent at a = {}", basket.extent.get(0)))?;

    let sim = market::parse_arena(
        r#"{"algebra": "lukasiewicz:3", "objects": ["a","b"], "attributes": ["x"],
            "I": [[2],[0]], "R_rhd": [[2,1],[0,2]], "R_box": [[2],[1]]}"#,
    )
    .map_err(err)?;
    let seed = market::market_category(&sim, "x").map_err(err)?;
    ensure(seed.extent.indices() == [2, 0], || format!("seed extent {:?}", seed.extent.indices()))?;
    let rhd = market::typicality_analysis(&sim, Typicality::RhdOverConcept, &seed, "c_x").map_err(err)?;
    ensure(rhd.degree_of("b") == Some(1), || format!("rhd degree at b = {:?}", rhd.degree_of("b")))?;
    let bx = market::box_refinement_analysis(&sim, "a").map_err(err)?;
    ensure(bx.degree_of("b") == Some(1), || format!("box refinement degree at b = {:?}", bx.degree_of("b")))?;
    Ok("firm 1/2, basket 1/2, rhd 1/2, box 1/2".into())
}

fn known_invalid_sequent() -> Outcome {
    let b = Arc::new(TruthAlgebra::boolean());
    let ctx = Context::anonymous(b.clone(), MvRelation::diagonal(&b, 2));
    let r_box = MvRelation::constant(2, 2, Truth(0));
    let f = EnrichedContext::new(ctx, Relations { r_box: Some(r_box), ..Default::default() }).map_err(err)?;
    let v = sequent_valid(&f, &parse_sequent("p |- box p").map_err(|e| e.to_string())?, &ValidityOptions::default())
        .map_err(err)?;
    let cm = v.countermodel.ok_or("reported valid")?;
    Ok(format!("countermodel p = concept {} at {}", cm.valuation["p"], cm.witness.object))
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("residuated-lattice laws on Ł_n and G_n, n = 2..7", 1, residuated_lattice_laws),
        ("Galois adjunction, exhaustive 2×2 over Ł3", 30, galois_adjunction),
        ("singleton decomposition, carriers ≤ 3 over Ł4", 1, singleton_decomposition),
        ("concept enumeration vs stable-pair oracle", 60, concept_enumeration),
        ("box preserves meets and top, diamond joins and bottom", 120, modal_operator_lemma),
        ("soundness of the axioms on random compatible frames", 120, soundness),
        ("identity relations give identity operators", 10, identity_laws),
        ("filter/ideal lemmas and canonical relation forms", 120, appendix_lemmas),
        ("canonical surrogate compatibility", 10, surrogate_compatibility),
        ("parser round trip", 1, parser_round_trip),
        ("worked market degrees", 1, market_degrees),
        ("p |- box p invalid on the zero-box diagonal frame", 1, known_invalid_sequent),
    ];
    let mut failed = vec![];
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; exceeded {limit} s")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("{status} {:>2}  {name}  [{:.3} s / {limit} s]  {detail}", k + 1, elapsed.as_secs_f64());
        if status == "FAIL" {
            failed.push(k + 1);
        }
    }
    println!("{} of 12 criteria passed", 12 - failed.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
