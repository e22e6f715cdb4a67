//! Coalition winning regions for boolean combinations of objectives.

use segames::fixtures::{fig1_arena, fig1_objectives};
use segames::objectives::ObjectiveExpr;
use segames::zero_sum::coalition_region;

fn main() {
    let a = fig1_arena();
    let [p1, p2, p3] = fig1_objectives();
    let all = ObjectiveExpr::and([p1.clone(), p2.clone(), p3.clone()]);
    let cases = [
        (
            vec![1, 2],
            ObjectiveExpr::or([all.clone(), ObjectiveExpr::not(p3.clone())]),
        ),
        (
            vec![2, 3],
            ObjectiveExpr::or([all.clone(), ObjectiveExpr::not(p1.clone())]),
        ),
        (
            vec![1, 3],
            ObjectiveExpr::or([all.clone(), ObjectiveExpr::not(p2.clone())]),
        ),
        (vec![1], p1.into()),
        (vec![2, 3], ObjectiveExpr::and([p2, p3])),
    ];
    for (coalition, e) in cases {
        let r = coalition_region(&a, &coalition, &e).unwrap();
        println!("{coalition:?} via {:<11} {}", r.provenance().to_string(), r.display(&a));
    }
}
