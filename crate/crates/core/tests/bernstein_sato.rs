use std::time::Instant;

use hodge_core::annbs::{ann_fs_order1, beta_polynomial, bs_polynomial, root_window_check, WindowVerdict};
use hodge_core::arith::{int, rat, UniPoly};
use hodge_core::weyl::{AlgebraSignature, FractionContext, Poly, WeylElement};

fn sum_of_squares(n: usize) -> Poly {
    (0..n).fold(Poly::zero(n), |acc, i| &acc + &Poly::var(n, i).pow(2))
}

#[test]
fn node_is_s_plus_one_squared() {
    let f = sum_of_squares(2);
    let ann = ann_fs_order1(&f, &int(0)).unwrap();
    let bs = bs_polynomial(&f, &ann, true).unwrap();
    assert_eq!(bs.b, UniPoly::linear(int(1)).pow(2));
    let ctx = FractionContext::new(f.clone()).unwrap();
    let r = ctx.act_on_fs(&bs.certificate, &int(1)).unwrap();
    assert!(r.equals_s_poly_times(&ctx, &bs.b, &int(0)).unwrap());
    assert_eq!(beta_polynomial(&bs, &rat(1, 2)), UniPoly::x().pow(2));
    assert_eq!(beta_polynomial(&bs, &int(0)), UniPoly::one());
}

#[test]
fn node_laplacian_certificate() {
    let f = sum_of_squares(2);
    let sig = AlgebraSignature::with_s(2);
    let lap = (&WeylElement::d(sig, 0).pow(2) + &WeylElement::d(sig, 1).pow(2)).scale(&rat(1, 4));
    let ctx = FractionContext::new(f).unwrap();
    let r = ctx.act_on_fs(&lap, &int(1)).unwrap();
    assert!(r.equals_s_poly_times(&ctx, &UniPoly::linear(int(1)).pow(2), &int(0)).unwrap());
}

#[test]
fn quadric_in_four_variables() {
    let start = Instant::now();
    let f = sum_of_squares(4);
    let ann = ann_fs_order1(&f, &int(0)).unwrap();
    let bs = bs_polynomial(&f, &ann, true).unwrap();
    assert_eq!(bs.b, &UniPoly::linear(int(1)) * &UniPoly::linear(int(2)));
    assert_eq!(root_window_check(&bs, &int(0)), WindowVerdict::Fail { offending: vec![int(-2)] });
    assert!(start.elapsed().as_secs() < 10);
}
