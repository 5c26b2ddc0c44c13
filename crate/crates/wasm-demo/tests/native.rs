use serde_json::Value;
use ugw_wasm_demo::{marginal_json, rate_curve_json, tree_json};

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("ok")).unwrap()
}

#[test]
fn regular_tree_shape() {
    let t = parse(tree_json("3:1", 3, 1));
    // 1 + 3 + 6 + 12 vertices.
    assert_eq!(t["n"], 22);
    let level = t["level"].as_array().unwrap();
    assert_eq!(level.iter().filter(|l| **l == 3).count(), 12);
    assert!(t["parent"][0].is_null());
    assert_eq!(tree_json("3:1", 3, 1), tree_json("3:1", 3, 1));
}

#[test]
fn rate_curve_vanishes_at_the_mean() {
    let c = parse(rate_curve_json("0:1/4,1:1/2,2:1/4", 0.5, 1.5, 3));
    assert_eq!(c["mean"], 1.0);
    let pts = c["points"].as_array().unwrap();
    let mid = pts[1]["rate"].as_f64().unwrap();
    assert!(pts[0]["rate"].as_f64().unwrap() > mid && pts[2]["rate"].as_f64().unwrap() > mid);
}

#[test]
fn marginal_of_a_point_mass() {
    let m = parse(marginal_json("2:1", 2));
    let rows = m["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["class"], "((())(()))");
    assert_eq!(rows[0]["exact"], "1");
}

#[test]
fn bad_inputs() {
    assert!(tree_json("3:1", 20, 0).is_err());
    assert!(tree_json("3:1/2", 2, 0).is_err());
    assert!(rate_curve_json("3:1", 2.0, 1.0, 10).is_err());
    assert!(marginal_json("3:1", 0).is_err());
}
