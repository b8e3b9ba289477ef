use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;
use treepow::{
    build_full_power, build_poly_graph, count_subgraph_copies, enumerate_local_images, fixtures, is_power_free,
    prune_bad_roots, rooted_density, sample_gnp, transfer_subgraph, GnpConfig, Graph, PolyGraphParams, TreePowerSpec,
};

fn densities(c: &mut Criterion) {
    let spider = fixtures::spider_at_feet(3);
    c.bench_function("rooted_density/spider3", |b| {
        b.iter(|| rooted_density(black_box(&spider)).unwrap())
    });
    let full = build_full_power(&TreePowerSpec::tree(fixtures::subdivided_claw(), 4).unwrap());
    c.bench_function("rooted_density/claw_power4", |b| {
        b.iter(|| rooted_density(black_box(&full.union)).unwrap())
    });
}

fn counting(c: &mut Criterion) {
    let g = sample_gnp(&GnpConfig { n: 60, p: 0.2, seed: 1 }).unwrap();
    let c4 = Graph::cycle(4);
    c.bench_function("count_copies/c4_in_gnp60", |b| {
        b.iter(|| count_subgraph_copies(black_box(&g), &c4))
    });
    let spec = TreePowerSpec::tree(fixtures::star_at_leaves(2), 3).unwrap();
    c.bench_function("is_power_free/k12_cubed_gnp60", |b| {
        b.iter(|| is_power_free(black_box(&g), &spec).unwrap())
    });
}

fn local_images(c: &mut Criterion) {
    let t = fixtures::spider_at_feet(3);
    c.bench_function("local_images/spider3", |b| {
        b.iter(|| enumerate_local_images(black_box(&t), t.n()).unwrap())
    });
}

fn polygraphs(c: &mut Criterion) {
    let star = fixtures::star_at_leaves(2);
    let params = PolyGraphParams::derive(23, 2, 1, vec![star.clone()], Graph::path(2), 8).unwrap();
    c.bench_function("polygraph/build_q23", |b| {
        b.iter(|| build_poly_graph(black_box(&params), 7).unwrap())
    });
    let g = build_poly_graph(&params, 7).unwrap();
    c.bench_function("polygraph/prune_q23", |b| {
        b.iter(|| prune_bad_roots(black_box(&g), std::slice::from_ref(&star), 8).unwrap())
    });
}

fn transference(c: &mut Criterion) {
    let host = sample_gnp(&GnpConfig {
        n: 400,
        p: 0.5,
        seed: 3,
    })
    .unwrap();
    let params = PolyGraphParams::derive(41, 2, 1, vec![fixtures::star_at_leaves(2)], Graph::path(2), 8).unwrap();
    let template = build_poly_graph(&params, 3).unwrap();
    let mut seed = 0u64;
    c.bench_function("transfer/gnp400_onto_q41", |b| {
        b.iter_batched(
            || {
                seed += 1;
                seed
            },
            |s| transfer_subgraph(black_box(&host), &template, s).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, densities, counting, local_images, polygraphs, transference);
criterion_main!(benches);
