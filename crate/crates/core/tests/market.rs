mod common;

use std::collections::BTreeMap;

use mvpolarity::context::crisp_point;
use mvpolarity::market::{
    basket_category, box_refinement_analysis, firm_category, market_category, parse_arena, typicality_analysis, Arena,
    Typicality,
};
use mvpolarity::{Context, EnrichedContext, MvRelation, Relations, Truth};
use proptest::prelude::*;

fn arena(code: u8, a: usize, x: usize, m: &[u8]) -> Arena {
    let alg = common::algebra(code);
    let i = common::relation(&alg, a, x, m);
    let ctx = Context::anonymous(alg, i.clone());
    let frame = EnrichedContext::new(ctx, Relations { r_box: Some(i), ..Default::default() }).unwrap();
    Arena::new(frame, BTreeMap::new(), None)
}

fn arb_arena() -> impl Strategy<Value = Arena> {
    (0u8..4, 1usize..=3, 1usize..=3, prop::collection::vec(any::<u8>(), 9)).prop_map(|(c, a, x, m)| arena(c, a, x, &m))
}

proptest! {
    #[test]
    fn dominating_firms_are_fully_in_the_category(base in arb_arena(), a in 0usize..3, lift in prop::collection::vec(any::<u8>(), 3)) {
        let ctx = base.frame.base();
        let alg = ctx.algebra_arc().clone();
        let na = ctx.objects().len();
        let nx = ctx.attributes().len();
        let a = a % na;
        // Append a firm whose row dominates row `a` pointwise.
        let mut m = ctx.incidence().to_matrix();
        let row: Vec<usize> = (0..nx).map(|x| m[a][x].max(lift[x] as usize % alg.size())).collect();
        m.push(row);
        let i = MvRelation::from_matrix(&alg, na + 1, nx, &m).unwrap();
        let arena = Arena::new(EnrichedContext::new(Context::anonymous(alg.clone(), i), Relations::default()).unwrap(), BTreeMap::new(), None);
        let c = firm_category(&arena, &arena.firms()[a]).unwrap();
        prop_assert_eq!(c.extent.get(na), alg.top());
        prop_assert_eq!(c.extent.get(a), alg.top());
    }

    #[test]
    fn firm_category_matches_direct_formula(arena in arb_arena(), a in 0usize..3) {
        let ctx = arena.frame.base();
        let o = common::OCtx::of(ctx);
        let a = a % ctx.objects().len();
        let c = firm_category(&arena, &ctx.objects()[a]).unwrap();
        let expected: Vec<usize> = (0..ctx.objects().len()).map(|b| o.chain.sub(&o.i[a], &o.i[b])).collect();
        prop_assert_eq!(c.extent.indices(), expected);
        prop_assert_eq!(c.intent.indices(), o.i[a].clone());
    }

    #[test]
    fn crisp_basket_is_market_category(arena in arb_arena(), x in 0usize..3) {
        let ctx = arena.frame.base();
        let x = x % ctx.attributes().len();
        let name = ctx.attributes()[x].clone();
        let weights = BTreeMap::from([(name.clone(), ctx.algebra().top())]);
        prop_assert_eq!(basket_category(&arena, &weights).unwrap(), market_category(&arena, &name).unwrap());
        let col: Vec<usize> = ctx.incidence().column(x).indices();
        prop_assert_eq!(market_category(&arena, &name).unwrap().extent.indices(), col);
    }

    #[test]
    fn box_refinement_with_incidence_is_firm_category(arena in arb_arena(), a in 0usize..3) {
        let firm = arena.firms()[a % arena.firms().len()].clone();
        let report = box_refinement_analysis(&arena, &firm).unwrap();
        let c = firm_category(&arena, &firm).unwrap();
        let degrees: Vec<usize> = report.degrees.iter().map(|r| r.degree).collect();
        prop_assert_eq!(degrees, c.extent.indices());
    }

    #[test]
    fn empty_basket_covers_every_firm(arena in arb_arena()) {
        let c = basket_category(&arena, &BTreeMap::new()).unwrap();
        prop_assert!(c.extent.is_constant(arena.frame.base().algebra().top()));
    }
}

#[test]
fn lhd_with_diagonal_reproduces_the_row() {
    let text = r#"{"algebra": "lukasiewicz:3", "objects": ["a","b"], "attributes": ["x","y","z"],
        "I": [[2,0,0],[0,2,1]], "R_lhd": [[2,0,0],[0,2,0],[0,0,2]]}"#;
    let arena = parse_arena(text).unwrap();
    let alg = arena.frame.base().algebra();
    let seed = market_category(&arena, "y").unwrap();
    assert_eq!(seed.intent.get(1), alg.top());
    let report = typicality_analysis(&arena, Typicality::LhdOverConcept, &seed, "c_y").unwrap();
    let raw: Vec<usize> = report.degrees.iter().map(|r| r.degree).collect();
    let expected: Vec<usize> =
        (0..3).map(|y| (0..3).map(|z| alg.residuum(seed.intent.get(z), Truth((y == z) as u8 * 2)).index()).min().unwrap()).collect();
    assert_eq!(raw, expected);
    let crisp = crisp_point(alg, 3, 1);
    let seed = arena.frame.base().concept_of_intent(&crisp).unwrap();
    assert_eq!(seed, market_category(&arena, "y").unwrap());
}

#[test]
fn zero_seed_gives_all_ones() {
    let text = r#"{"algebra": "lukasiewicz:3", "objects": ["a","b"], "attributes": ["x"],
        "I": [[0],[0]], "R_rhd": [[0,0],[0,0]]}"#;
    let arena = parse_arena(text).unwrap();
    let seed = market_category(&arena, "x").unwrap();
    assert!(seed.extent.is_constant(Truth(0)));
    let report = typicality_analysis(&arena, Typicality::RhdOverConcept, &seed, "c_x").unwrap();
    assert!(report.degrees.iter().all(|r| r.degree == 2));
}
