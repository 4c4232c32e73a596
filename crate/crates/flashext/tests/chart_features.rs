//! Chart features: tower shapes, panel placement, rho pairs, row counts.

use std::collections::BTreeMap;

use flashext::charts::{check_svg, emit_svg, emit_tsv, RenderSpec};
use flashext::ext_equivariant::{closed_form_equivariant, ext_m2_m2, Op, Part, TriChart};
use flashext::Window;

fn window() -> Window {
    Window::new(-10, 10, 8, -16, 16)
}

fn panel(p: Part) -> String {
    match p {
        Part::A => "A".into(),
        Part::B => "B".into(),
    }
}

fn class_at(c: &TriChart, name: &str) -> (i32, i32, i32, Part) {
    let x = c.classes.iter().find(|x| x.name == name).unwrap_or_else(|| panic!("no class {name}"));
    (x.degree.stem, x.degree.filtration, x.degree.weight, x.part())
}

#[test]
fn unit_chart_has_v1_tower_in_part_a() {
    let w = window();
    let c = ext_m2_m2(1, &w).unwrap();
    assert_eq!(class_at(&c, "1"), (0, 0, 0, Part::A));
    for k in 1..=4 {
        let name = if k == 1 { "v1 1".to_string() } else { format!("v1^{k} 1") };
        assert_eq!(class_at(&c, &name), (2 * k, k, k, Part::A));
    }
    let svg = check_svg(&emit_svg(&c, &RenderSpec::new(w))).unwrap();
    assert_eq!(svg.panels, vec!["A".to_string(), "B".to_string()]);
    assert!(svg.classes["A"].contains(&("1".into(), 0, 0, 0)));
    let mut expect: BTreeMap<(String, i32, i32), usize> = BTreeMap::new();
    for x in &c.classes {
        *expect.entry((panel(x.part()), x.degree.stem, x.degree.filtration)).or_default() += 1;
    }
    assert_eq!(svg.dots, expect);
}

#[test]
fn rho_pair_in_negative_stems() {
    let w = window();
    let c = closed_form_equivariant(2, 0, &w);
    assert_eq!(class_at(&c, "rho v1 b"), (-3, 1, -2, Part::A));
    assert_eq!(class_at(&c, "rho^2 v1 b"), (-4, 1, -3, Part::A));
    let from = c.find("b", &c.classes.iter().find(|x| x.name == "rho v1 b").unwrap().coef).unwrap();
    let to = c.find("b", &c.classes.iter().find(|x| x.name == "rho^2 v1 b").unwrap().coef).unwrap();
    assert!(c.act(Op::Rho, from).contains(&to));
    let svg = check_svg(&emit_svg(&c, &RenderSpec::new(w))).unwrap();
    assert!(svg.lines.get(&("A".into(), "rho".into())).copied().unwrap_or(0) > 0);
}

#[test]
fn flash_one_into_flash_two_low_classes() {
    let c = closed_form_equivariant(1, 2, &window());
    assert_eq!(class_at(&c, "x0"), (0, 0, 0, Part::A));
    assert_eq!(class_at(&c, "x1"), (2, 0, 1, Part::A));
    assert_eq!(class_at(&c, "tau^2 x0"), (0, 0, -2, Part::B));
}

#[test]
fn tsv_has_one_row_per_class_and_edge() {
    let c = ext_m2_m2(0, &Window::new(-5, 5, 5, -5, 5)).unwrap();
    let tsv = emit_tsv(&c);
    let rows = tsv.lines().count();
    assert_eq!(rows, 3 + c.len() + c.edges().count());
    assert_eq!(tsv.lines().filter(|l| l.starts_with("class\t")).count(), c.len());
}
