use criterion::{black_box, criterion_group, criterion_main, Criterion};
use flashext::assembly::{e1_page, integral_bg};
use flashext::charts::{emit_svg, emit_tsv, RenderSpec};
use flashext::emod::{lightning_flash, tensor, Variant};
use flashext::ext_classical::{closed_form_classical, ext_flashes};
use flashext::ext_equivariant::{closed_form_equivariant, ext_m2_m2};
use flashext::les_engine::induct_ext;
use flashext::margolis::margolis_homology;
use flashext::steenrod::{enumerate_basis, QuotientBasisSpec};
use flashext::Window;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn window() -> Window {
    Window::new(-10, 10, 8, -16, 16)
}

fn steenrod(c: &mut Criterion) {
    c.bench_function("enumerate_basis h=1 weight 16", |b| {
        b.iter(|| enumerate_basis(QuotientBasisSpec::new(1), black_box(16)))
    });
}

fn margolis(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs: Vec<(usize, usize)> = (0..8).map(|_| (rng.gen_range(0..6), rng.gen_range(0..6))).collect();
    c.bench_function("margolis homology of flash tensors", |b| {
        b.iter(|| {
            for &(k, m) in &pairs {
                let t = tensor(&lightning_flash(k, Variant::Equivariant), &lightning_flash(m, Variant::Equivariant)).unwrap();
                black_box(margolis_homology(&t, 1));
            }
        })
    });
    c.bench_function("margolis homology of integral BG(8)", |b| {
        let m = integral_bg(8);
        b.iter(|| margolis_homology(black_box(&m), 1))
    });
}

fn classical(c: &mut Criterion) {
    c.bench_function("ext_flashes(4,2) resolution", |b| b.iter(|| ext_flashes(black_box(4), 2, -14, 14, 12).unwrap()));
    c.bench_function("closed_form_classical(4,2)", |b| b.iter(|| closed_form_classical(black_box(4), 2, -14, 14, 12)));
}

fn equivariant(c: &mut Criterion) {
    let w = window();
    c.bench_function("ext_m2_m2(1)", |b| b.iter(|| ext_m2_m2(black_box(1), &w).unwrap()));
    c.bench_function("closed_form_equivariant(3,1)", |b| b.iter(|| closed_form_equivariant(black_box(3), 1, &w)));
    let mut g = c.benchmark_group("inductive");
    g.sample_size(10);
    g.bench_function("induct_ext(2,1)", |b| b.iter(|| induct_ext(black_box(2), 1, &w).unwrap()));
    g.finish();
}

fn charts(c: &mut Criterion) {
    let w = window();
    let chart = closed_form_equivariant(3, 1, &w);
    let spec = RenderSpec::new(w);
    c.bench_function("emit_tsv", |b| b.iter(|| emit_tsv(black_box(&chart))));
    c.bench_function("emit_svg", |b| b.iter(|| emit_svg(black_box(&chart), &spec)));
}

fn assembly(c: &mut Criterion) {
    let w = Window::new(-8, 8, 8, -12, 12);
    let mut g = c.benchmark_group("assembly");
    g.sample_size(10);
    g.bench_function("e1_page(3)", |b| b.iter(|| e1_page(black_box(3), &w).unwrap()));
    g.finish();
}

criterion_group!(benches, steenrod, margolis, classical, equivariant, charts, assembly);
criterion_main!(benches);
