mod common;

use common::*;
use linkrank::games::GameDoc;
use linkrank::{LinkDiagram, OptionId, Orientation, StrategicGame};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pareto(g: &StrategicGame) -> Vec<OptionId> {
    g.pareto_optimal().unwrap().into_iter().map(|s| s.label.clone()).collect()
}

fn dominating(g: &StrategicGame) -> Vec<(OptionId, OptionId)> {
    g.dominating_pairs()
        .unwrap()
        .into_iter()
        .map(|(t, s)| (t.label.clone(), s.label.clone()))
        .collect()
}

fn game_from_seed(seed: u64) -> StrategicGame {
    random_game(&mut ChaCha8Rng::seed_from_u64(seed), 8)
}

fn remap(g: &StrategicGame, f: impl Fn(usize, f64) -> f64, orientation: Orientation) -> StrategicGame {
    let mut doc: GameDoc = g.to_doc();
    doc.orientation = orientation;
    for (p, name) in g.players().iter().enumerate() {
        let table = doc.outcomes.get_mut(name).unwrap();
        for row in table.iter_mut() {
            for x in row.iter_mut() {
                *x = f(p, *x);
            }
        }
    }
    StrategicGame::try_from(doc).unwrap()
}

proptest! {
    #[test]
    fn pareto_matches_scan_and_diagram(seed in any::<u64>()) {
        let g = game_from_seed(seed);
        let p = pareto(&g);
        prop_assert!(!p.is_empty());
        prop_assert_eq!(&p, &pareto_scan(&g));
        let d = LinkDiagram::new(g.preference_of(0).unwrap(), g.preference_of(1).unwrap()).unwrap();
        for s in g.solutions() {
            prop_assert_eq!(d.pareto_by_diagram(&s.label).unwrap(), p.contains(&s.label));
        }
    }

    #[test]
    fn negated_costs_are_utilities(seed in any::<u64>()) {
        let g = game_from_seed(seed);
        let flipped = match g.orientation() {
            Orientation::Cost => Orientation::Utility,
            Orientation::Utility => Orientation::Cost,
        };
        let h = remap(&g, |_, x| -x, flipped);
        prop_assert_eq!(g.preference_of(0).unwrap(), h.preference_of(0).unwrap());
        prop_assert_eq!(g.preference_of(1).unwrap(), h.preference_of(1).unwrap());
        prop_assert_eq!(dominating(&g), dominating(&h));
        prop_assert_eq!(pareto(&g), pareto(&h));
    }

    #[test]
    fn monotone_maps_change_nothing(seed in any::<u64>(), scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        let g = game_from_seed(seed);
        // player 0: affine increasing; player 1: cubic plus exp, still increasing
        let h = remap(&g, |p, x| if p == 0 { scale * x + shift } else { x * x * x + x.exp() }, g.orientation());
        prop_assert_eq!(g.preference_of(0).unwrap(), h.preference_of(0).unwrap());
        prop_assert_eq!(g.preference_of(1).unwrap(), h.preference_of(1).unwrap());
        prop_assert_eq!(dominating(&g), dominating(&h));
        prop_assert_eq!(pareto(&g), pareto(&h));
    }

    #[test]
    fn preference_orders_are_transitive(seed in any::<u64>()) {
        let g = game_from_seed(seed);
        for p in 0..2 {
            let t = g.preference_of(p).unwrap();
            let order = t.hamilton_path();
            // a total order has exactly one Hamilton path, and it sorts by outcome
            let outcomes: Vec<f64> = order
                .order()
                .iter()
                .map(|o| g.outcome(p, &g.solutions()[t.index(o).unwrap()]))
                .collect();
            let sorted = outcomes.windows(2).all(|w| match g.orientation() {
                Orientation::Cost => w[0] < w[1],
                Orientation::Utility => w[0] > w[1],
            });
            prop_assert!(sorted);
        }
    }
}

#[test]
fn pd_dominating_pairs_by_brute_force() {
    let g = StrategicGame::from_json(
        r#"{"players":["A","B"], "strategies":{"A":["C","S"],"B":["C","S"]}, "orientation":"cost", "outcomes":{"A":[[4,1],[5,2]], "B":[[4,5],[1,2]]}}"#,
    )
    .unwrap();
    // scan all 12 ordered pairs of Tables 1-2 directly
    let years = |p: usize, label: &str| -> f64 {
        match (p, label) {
            (0, "CC") => 4.0, (0, "CS") => 1.0, (0, "SC") => 5.0, (0, "SS") => 2.0,
            (1, "CC") => 4.0, (1, "CS") => 5.0, (1, "SC") => 1.0, (1, "SS") => 2.0,
            _ => unreachable!(),
        }
    };
    let labels = ["CC", "CS", "SC", "SS"];
    let mut expected = Vec::new();
    for t in labels {
        for s in labels {
            if t != s && years(0, t) < years(0, s) && years(1, t) < years(1, s) {
                expected.push((id(t), id(s)));
            }
        }
    }
    assert_eq!(expected, vec![(id("SS"), id("CC"))]);
    assert_eq!(dominating(&g), expected);
}
