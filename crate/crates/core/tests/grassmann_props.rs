use num::{BigInt, BigRational, One, Zero};
use proptest::prelude::*;
use schwinger_core::grassmann::{parse_element, real, Coeff, Generators, GrassmannElement, Side};

fn gens(n: usize) -> Generators {
    let names: Vec<String> = (0..n).map(|k| format!("g{k}")).collect();
    Generators::new(&names).unwrap()
}

fn monomial(g: &Generators, seq: &[usize]) -> GrassmannElement {
    let names: Vec<String> = seq.iter().map(|k| format!("g{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    GrassmannElement::monomial(g, &refs).unwrap()
}

fn int(k: i64) -> Coeff {
    real(BigRational::from_integer(BigInt::from(k)))
}

/// Sorts a generator word by adjacent swaps; `None` if a generator repeats.
fn bubble_sign(mut word: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 0..word.len() {
        for j in 0..word.len() - 1 - i {
            if word[j] > word[j + 1] {
                word.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((word, sign))
}

fn sorted_indices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|k| mask >> k & 1 == 1).collect()
}

fn element_from(g: &Generators, coeffs: &[i64]) -> GrassmannElement {
    let mut e = GrassmannElement::zero(g);
    for (mask, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            let term = monomial(g, &sorted_indices(mask as u64, g.len())).scale(&int(c));
            e = e.add(&term).unwrap();
        }
    }
    e
}

fn element(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], 1 << n)
}

#[test]
fn products_match_reordering_oracle() {
    let n = 5;
    let g = gens(n);
    for a in 0u64..1 << n {
        for b in 0u64..1 << n {
            let mut word = sorted_indices(a, n);
            word.extend(sorted_indices(b, n));
            let got = monomial(&g, &sorted_indices(a, n))
                .mul(&monomial(&g, &sorted_indices(b, n)))
                .unwrap();
            match bubble_sign(word) {
                None => assert!(got.is_zero(), "{a:b} * {b:b}"),
                Some((_, s)) => {
                    assert_eq!(got.terms().count(), 1);
                    assert_eq!(got.coefficient(a | b), int(s), "{a:b} * {b:b}");
                }
            }
        }
    }
}

#[test]
fn derivative_signs_match_moving_the_generator() {
    let n = 5;
    let g = gens(n);
    for mask in 0u64..1 << n {
        let word = sorted_indices(mask, n);
        let m = monomial(&g, &word);
        for k in 0..n {
            let name = format!("g{k}");
            let left = m.derivative(&name, Side::Left).unwrap();
            let right = m.derivative(&name, Side::Right).unwrap();
            if !word.contains(&k) {
                assert!(left.is_zero() && right.is_zero());
                continue;
            }
            // m = s·g_k·rest = s'·rest·g_k, with the signs found by sorting.
            let rest: Vec<usize> = word.iter().copied().filter(|&x| x != k).collect();
            let left_sign = bubble_sign([vec![k], rest.clone()].concat()).unwrap().1;
            let right_sign = bubble_sign([rest.clone(), vec![k]].concat()).unwrap().1;
            let rest_mask = mask & !(1 << k);
            assert_eq!(
                left.coefficient(rest_mask),
                int(left_sign),
                "left d/d{name} of {mask:b}"
            );
            assert_eq!(
                right.coefficient(rest_mask),
                int(right_sign),
                "right d/d{name} of {mask:b}"
            );
            // Reassembling recovers the monomial.
            assert_eq!(monomial(&g, &[k]).mul(&left).unwrap(), m);
            assert_eq!(right.mul(&monomial(&g, &[k])).unwrap(), m);
        }
    }
}

#[test]
fn generators_square_to_zero_and_anticommute() {
    let g = gens(3);
    let t0 = monomial(&g, &[0]);
    let t1 = monomial(&g, &[1]);
    assert!(t0.mul(&t0).unwrap().is_zero());
    let anti = t0.mul(&t1).unwrap().add(&t1.mul(&t0).unwrap()).unwrap();
    assert!(anti.is_zero());
}

#[test]
fn parsed_expressions_are_canonical() {
    let g = gens(3);
    let a = parse_element("g1*g0 + 2*g0*g1", &g).unwrap();
    let b = parse_element("g0*g1", &g).unwrap();
    assert_eq!(a, b);
    assert_eq!(b.coefficient(0b011), real(BigRational::one()));
    assert_eq!(b.coefficient(0b101), real(BigRational::zero()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(
        (n, a, b, c) in (1usize..=6).prop_flat_map(|n| (Just(n), element(n), element(n), element(n)))
    ) {
        let g = gens(n);
        let (a, b, c) = (element_from(&g, &a), element_from(&g, &b), element_from(&g, &c));
        let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_distributes(a in element(4), b in element(4), c in element(4)) {
        let g = gens(4);
        let (a, b, c) = (element_from(&g, &a), element_from(&g, &b), element_from(&g, &c));
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_leibniz_rule(x in 0u64..32, y in 0u64..32, k in 0usize..5, cx in -3i64..=3, cy in -3i64..=3) {
        let g = gens(5);
        let name = format!("g{k}");
        let a = monomial(&g, &sorted_indices(x, 5)).scale(&int(cx));
        let b = monomial(&g, &sorted_indices(y, 5)).scale(&int(cy));
        let deg_a = x.count_ones() as usize;

        let d = |e: &GrassmannElement, side| e.derivative(&name, side).unwrap();
        let left = d(&a.mul(&b).unwrap(), Side::Left);
        let mut expect = d(&a, Side::Left).mul(&b).unwrap();
        let tail = a.mul(&d(&b, Side::Left)).unwrap();
        expect = if deg_a.is_multiple_of(2) { expect.add(&tail) } else { expect.sub(&tail) }.unwrap();
        prop_assert_eq!(left, expect);

        let deg_b = y.count_ones() as usize;
        let right = d(&a.mul(&b).unwrap(), Side::Right);
        let head = d(&a, Side::Right).mul(&b).unwrap();
        let mut expect = a.mul(&d(&b, Side::Right)).unwrap();
        expect = if deg_b.is_multiple_of(2) { expect.add(&head) } else { expect.sub(&head) }.unwrap();
        prop_assert_eq!(right, expect);
    }

    #[test]
    fn left_and_right_derivatives_differ_by_parity(coeffs in element(5), k in 0usize..5) {
        let g = gens(5);
        let e = element_from(&g, &coeffs);
        let name = format!("g{k}");
        let left = e.derivative(&name, Side::Left).unwrap();
        let right = e.derivative(&name, Side::Right).unwrap();
        for (mask, c) in left.terms() {
            // A surviving term of degree d−1 came from degree d; sides agree iff d is odd.
            let d = mask.count_ones() + 1;
            let want = if d % 2 == 1 { c.clone() } else { -c.clone() };
            prop_assert_eq!(right.coefficient(mask), want);
        }
        prop_assert_eq!(left.terms().count(), right.terms().count());
    }
}
