use hodge_core::annbs::{ann_fs_order1, beta_polynomial, bs_polynomial, euler_field};
use hodge_core::arith::{int, rat};
use hodge_core::hodge::{build_gamma, hodge_step, GammaVariant, Hypotheses};
use hodge_core::oracle::{hodge_via_v0, GraphContext, TruncationBudget};
use hodge_core::weyl::Poly;
use hodge_core::Rational;

fn routes(f: &Poly, alpha: Rational, k_max: u32) {
    let ann = ann_fs_order1(f, &int(0)).unwrap();
    let bs = bs_polynomial(f, &ann, true).unwrap();
    let hyp = Hypotheses {
        euler_field: Some(euler_field(f, 1).unwrap()),
        parametrically_prime_asserted: true,
        ann_complete_asserted: true,
        ..Default::default()
    };
    let standard = build_gamma(f, &alpha, &bs, &ann, hyp.clone(), GammaVariant::Standard).unwrap();
    let shifted = build_gamma(f, &alpha, &bs, &ann, hyp, GammaVariant::Shifted).unwrap();
    let g = GraphContext::new(f.clone(), alpha.clone()).unwrap();
    let beta = beta_polynomial(&bs, &alpha);
    let budget = TruncationBudget::new(4, 8, 6);
    for k in 0..=k_max {
        let a = hodge_step(&standard, k, 8).unwrap();
        let b = hodge_step(&shifted, k, 8).unwrap();
        assert_eq!(a.module, b.module, "gamma variants differ: f={f} alpha={alpha} k={k}");
        let v = hodge_via_v0(&g, &beta, k, budget).unwrap();
        assert_eq!(a.module, v, "f={f} alpha={alpha} k={k}");
        let v_next = hodge_via_v0(&g, &beta, k, budget.next()).unwrap();
        assert_eq!(v, v_next, "unstable: f={f} alpha={alpha} k={k}");
    }
}

fn cusp() -> Poly {
    &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3)
}

fn node() -> Poly {
    &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(2)
}

#[test]
fn smooth() {
    routes(&Poly::var(1, 0), int(0), 2);
    routes(&Poly::var(1, 0), rat(1, 2), 2);
}

#[test]
fn node_routes() {
    routes(&node(), int(0), 2);
    routes(&node(), rat(1, 2), 2);
}

#[test]
fn cusp_routes() {
    routes(&cusp(), int(0), 2);
    routes(&cusp(), rat(1, 6), 2);
}
