use obscheck::checker::{check_error_metadata, check_inclusion_naive};
use obscheck::fott::{present_regex, Interval};
use obscheck::lts::{load_aut, save_aut, to_dot, Lts, StateSet};
use obscheck::mucalc::eval_mu;
use obscheck::mucompile::error_condition;
use obscheck::timednet::{
    builtin_mouse, builtin_present, builtin_zeno, explore, parse_net, TimedNet,
};

fn all_builtins() -> Vec<(&'static str, TimedNet)> {
    vec![
        ("present(4,5)", builtin_present(4, 5).unwrap()),
        ("present(3,4)", builtin_present(3, 4).unwrap()),
        ("present(0,1)", builtin_present(0, 1).unwrap()),
        ("mouse", builtin_mouse()),
        ("zeno", builtin_zeno()),
    ]
}

#[test]
fn exploration_is_deterministic() {
    for (name, net) in all_builtins() {
        let a = save_aut(explore(&net).unwrap().lts());
        let b = save_aut(explore(&net).unwrap().lts());
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn aut_round_trip_preserves_semantics() {
    for (name, net) in all_builtins() {
        let g = explore(&net).unwrap().into_lts();
        let back: Lts = load_aut(&save_aut(&g)).unwrap();
        assert_eq!(back.num_states(), g.num_states(), "{name}");
        assert_eq!(back.num_transitions(), g.num_transitions(), "{name}");
        let f = error_condition("error");
        assert_eq!(
            eval_mu(&back, &f).unwrap(),
            eval_mu(&g, &f).unwrap(),
            "{name}"
        );
        assert_eq!(save_aut(&back), save_aut(&g), "{name}");
    }
}

#[test]
fn net_file_matches_builtin_graph() {
    let text = include_str!("data/present_4_5.net");
    let parsed = explore(&parse_net(text).unwrap()).unwrap();
    let built = explore(&builtin_present(4, 5).unwrap()).unwrap();
    assert_eq!(save_aut(parsed.lts()), save_aut(built.lts()));
}

#[test]
fn clocks_stay_within_ceilings() {
    for (name, net) in all_builtins() {
        let ex = explore(&net).unwrap();
        for s in 0..ex.lts().num_states() {
            for p in &ex.net().processes {
                let (c, m) = (
                    ex.clock(s, &p.name).unwrap(),
                    ex.ceiling(s, &p.name).unwrap(),
                );
                assert!(
                    c <= m,
                    "{name}: state {s} {}: clock {c} > ceiling {m}",
                    ex.describe(s)
                );
            }
        }
    }
}

#[test]
fn every_state_is_reachable_and_labels_are_known() {
    for (name, net) in all_builtins() {
        let labels: Vec<String> = net.labels().iter().map(|s| s.to_string()).collect();
        let ex = explore(&net).unwrap();
        let g = ex.lts();
        let mut seen = StateSet::singleton(g.num_states(), g.initial());
        let mut stack = vec![g.initial()];
        while let Some(s) = stack.pop() {
            for &(_, d) in g.successors(s) {
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
        assert!(seen.is_full(), "{name}");
        for l in g.labels() {
            assert!(
                l == "t" || labels.contains(l),
                "{name}: unexpected label {l}"
            );
        }
    }
}

#[test]
fn error_locations_satisfy_error_condition() {
    for (name, net) in all_builtins() {
        let ex = explore(&net).unwrap();
        let r = check_error_metadata(&ex, "error").unwrap();
        assert!(r.holds(), "{name}: {}", r.render());
    }
}

#[test]
fn present_lasso_replays_on_the_graph() {
    let ex = explore(&builtin_present(4, 5).unwrap()).unwrap();
    let g = ex.lts();
    let pattern = present_regex("a", "b", &Interval::closed_open(4, 5)).unwrap();
    let r = check_inclusion_naive(g, &pattern, "error").unwrap();
    let v = r.verdict("naive.not_present_in_errors").unwrap();
    let trace = v.witness_trace.as_ref().unwrap();
    let split = v.lasso_split.unwrap();
    let mut s = g.initial();
    let mut at_split = None;
    for (i, l) in trace.iter().enumerate() {
        if i == split {
            at_split = Some(s);
        }
        let id = g.label_id(l).unwrap();
        s = g
            .successors(s)
            .iter()
            .find(|(x, _)| *x == id)
            .map(|&(_, d)| d)
            .expect("trace replays");
    }
    assert_eq!(at_split, Some(s), "cycle returns to its start");
    assert_eq!(at_split, v.witness_state);
}

#[test]
fn dot_highlights_requested_states() {
    let ex = explore(&builtin_mouse()).unwrap();
    let g = ex.lts();
    let hi = StateSet::singleton(g.num_states(), g.initial());
    let dot = to_dot(g, Some(&hi));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), g.num_transitions());
}
