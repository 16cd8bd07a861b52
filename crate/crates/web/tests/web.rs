use toricmirror_web::{run_scenario, scenario_source};

#[test]
fn box_report_renders() {
    let src = scenario_source("wp112-style").unwrap();
    let text = run_scenario("box", &src, "", false).unwrap();
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn json_report_honours_q_bound() {
    let src = scenario_source("cubic-p2").unwrap();
    let out = run_scenario("mirror-map", &src, "2", true).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "mirror-map");
    assert!(v["data"]["F"].as_array().unwrap().len() >= 2);
}
