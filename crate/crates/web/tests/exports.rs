use okounkov::models::fixtures::{E1_JSON, E2_JSON};
use okounkov_web::{fiber_body, fujita_sweep_table, volume_profile};
use serde_json::Value;

fn parse(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn body_of_the_polygon_pair() {
    let v = parse(&fiber_body(E2_JSON, "1/2:1/2").unwrap());
    assert_eq!(v["d"], 2);
    assert_eq!(v["volume"]["exact"], "7/4");
    assert!(v["vertices"].as_array().unwrap().len() >= 3);
}

#[test]
fn body_errors_are_messages() {
    assert!(fiber_body("{", "1:1").is_err());
    assert!(fiber_body(E1_JSON, "1:x").is_err());
}

#[test]
fn profile_endpoints() {
    let v = parse(&volume_profile(E2_JSON, 1, 4).unwrap());
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 5);
    // the pair is generated in degree one, so nothing is lost at p = 1
    for pt in pts {
        assert_eq!(pt["full"]["exact"], pt["trunc"]["exact"]);
    }
    assert_eq!(pts[0]["full"]["exact"], "2");
    assert_eq!(pts[4]["full"]["exact"], "1");
    assert!(volume_profile(E2_JSON, 1, 0).is_err());
    assert!(volume_profile(E2_JSON, 1, 10_000).is_err());
}

#[test]
fn sweep_table_matches_the_engine() {
    let csv = fujita_sweep_table(E1_JSON, "1..3", "1:0").unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].contains("4/7"));
    assert!(lines[3].contains("6/7"));
    assert!(fujita_sweep_table(E1_JSON, "1", "").is_err());
}
