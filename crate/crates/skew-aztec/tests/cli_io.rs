use std::collections::BTreeMap;

use skew_aztec::cli_io::*;
use skew_aztec::geometry::DomainSpec;
use skew_aztec::sampler::initial_tiling;
use skew_aztec::tiling::{Orientation, PathColor};

#[test]
fn kernel_table_csv_round_trip() {
    let mut t = KernelTable::new(&["xi1", "eta1", "xi2", "eta2"]);
    t.rows.push(KernelRow { inputs: vec![0.0, 1.0, -2.0, 3.0], re: 0.125, im: -1e-17, err_estimate: 0.0 });
    t.rows.push(KernelRow { inputs: vec![4.0, 5.0, 6.0, 7.0], re: 1.0 / 3.0, im: 0.0, err_estimate: 2.5e-15 });
    let text = t.to_csv().unwrap();
    assert!(text.starts_with("xi1,eta1,xi2,eta2,re,im,err_estimate\n"));
    let back = KernelTable::from_csv(&text).unwrap();
    assert_eq!(back.inputs, t.inputs);
    for (a, b) in back.rows.iter().zip(&t.rows) {
        assert_eq!(a.inputs, b.inputs);
        for (x, y) in [(a.re, b.re), (a.im, b.im), (a.err_estimate, b.err_estimate)] {
            assert!((x - y).abs() <= 1e-14 * y.abs());
        }
    }
    assert!(KernelTable::from_csv("a,b\n1,2\n").is_err());
}

#[test]
fn numbers_print_with_fifteen_significant_digits() {
    assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265358979e0");
    assert_eq!(fmt_num(0.0), "0");
    for x in [1.0, -2.5e-300, 1.0 / 3.0, 6.02e23] {
        let s = fmt_num(x);
        let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 15, "{s}");
        assert!((s.parse::<f64>().unwrap() - x).abs() <= 1e-14 * x.abs());
    }
}

#[test]
fn spec_and_tiling_json_round_trip() {
    let spec = parse_spec(r#"{"n": 3, "m": 3, "M": 2, "a": 0.5}"#).unwrap();
    assert_eq!(spec, DomainSpec::new(3, 3, 2, 0.5).unwrap());
    let doc = SpecDocument::new(spec).unwrap();
    let text = to_json(&doc).unwrap();
    assert!(text.contains("\"derived\""));
    assert_eq!(parse_spec(&text).unwrap(), spec);
    assert!(parse_spec(r#"{"n": 0, "m": 3, "M": 2, "a": 0.5}"#).is_err());
    let t = initial_tiling(&spec).unwrap();
    let json = tiling_to_json(&t).unwrap();
    assert_eq!(tiling_from_json(&spec, &json).unwrap(), t);
    let lines = tilings_to_jsonl(&[t.clone(), t]).unwrap();
    assert_eq!(lines.lines().count(), 2);
}

#[test]
fn config_and_style_parse() {
    let cfg = ToolConfig::parse(r#"{"quadrature": {"circle_nodes": 64}}"#).unwrap();
    assert_eq!(cfg.quadrature.circle_nodes, 64);
    assert!(ToolConfig::parse(r#"{"quadrature": {"circle_nodes": 7}}"#).is_err());
    let style = RenderStyle::default();
    let back: RenderStyle = parse_json(&to_json(&style).unwrap()).unwrap();
    assert_eq!(back, style);
    let mut dup = style.clone();
    dup.palette.insert(Orientation::HL, dup.palette[&Orientation::VU].clone());
    assert!(dup.validate().is_err());
    let zero = RenderStyle { cell_px: 0, ..style };
    assert!(zero.validate().is_err());
}

#[test]
fn svg_has_one_rect_per_domino_and_is_deterministic() {
    let spec = DomainSpec::new(8, 10, 3, 1.0).unwrap();
    let t = initial_tiling(&spec).unwrap();
    let svg = render_svg(&t, &RenderStyle::default()).unwrap();
    assert_eq!(svg.matches("<rect ").count(), t.domain().blue.len());
    assert_eq!(svg, render_svg(&t, &RenderStyle::default()).unwrap());
    let style = RenderStyle { draw_paths: vec![PathColor::Red], ..Default::default() };
    let with_paths = render_svg(&t, &style).unwrap();
    assert_eq!(with_paths.matches("<polyline").count() as i64, spec.n + spec.m);
}

#[test]
fn red_counts_table() {
    let counts: BTreeMap<i64, usize> = [(-2, 1), (0, 3)].into_iter().collect();
    let text = red_counts_csv(&counts).unwrap();
    assert_eq!(text, "xi,red_dots\n-2,1\n0,3\n");
}

#[test]
fn identity_suites_pass_with_defaults() {
    let rep = run_identities(IdentitySuite::All, &IdentityParams::default()).unwrap();
    assert!(rep.pass, "{rep:?}");
    let bad = IdentityParams { a: Some(1.5), ..Default::default() };
    assert!(run_identities(IdentitySuite::Bo, &bad).is_err() || !run_identities(IdentitySuite::Bo, &bad).unwrap().pass);
}
