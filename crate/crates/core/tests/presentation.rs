use proptest::prelude::*;
use selfsim_core::group::{derived_length, exponent, nilpotency_class, GroupConfig};
use selfsim_core::presentation::{
    magnus_expand, parse_presentation, parse_word, permutation_closure_order, regular_group,
    todd_coxeter, zassenhaus_depth, EnumerationLimits, Presentation, Word, ZDepth,
};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(
        (
            0..rank,
            prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)],
        ),
        0..max_len,
    )
    .prop_map(Word::from_syllables)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn exponent_sums(w: &Word, rank: usize) -> Vec<i64> {
    let mut sums = vec![0i64; rank];
    for &(g, e) in w.syllables() {
        sums[g] += e;
    }
    sums
}

fn names(rank: usize) -> Vec<String> {
    (0..rank).map(|i| format!("x{i}")).collect()
}

fn index(p: &Presentation) -> usize {
    todd_coxeter(p, &[], EnumerationLimits::default())
        .unwrap()
        .index()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn magnus_is_multiplicative(u in word(3, 6), v in word(3, 6), p in prop_oneof![Just(2u32), Just(3), Just(5)]) {
        let lhs = magnus_expand(&u.concat(&v), p, 5);
        let rhs = magnus_expand(&u, p, 5).mul(&magnus_expand(&v, p, 5));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn depth_two_iff_trivial_mod_p_abelianization(w in word(3, 8), p in prop_oneof![Just(2u32), Just(3), Just(5)]) {
        let trivial = exponent_sums(&w, 3).iter().all(|s| s.rem_euclid(p as i64) == 0);
        prop_assert_eq!(zassenhaus_depth(&w, p, 4).at_least(2), trivial);
    }

    #[test]
    fn commutator_depth_adds(u in word(2, 5), v in word(2, 5), p in prop_oneof![Just(2u32), Just(3)]) {
        let cap = 6;
        let c = Word::commutator(&u, &v);
        if let (ZDepth::Exact(a), ZDepth::Exact(b)) = (zassenhaus_depth(&u, p, cap), zassenhaus_depth(&v, p, cap)) {
            prop_assert!(zassenhaus_depth(&c, p, cap).at_least((a + b).min(cap + 1)));
        }
    }

    #[test]
    fn shown_words_parse_back(w in word(3, 8)) {
        let n = names(3);
        prop_assert_eq!(parse_word(&w.display(&n).to_string(), &n).unwrap(), w);
    }

    /// `Z/a × Z/b` with one more relator `r` has order `ab / |⟨(r_x, r_y)⟩|`.
    #[test]
    fn abelian_quotients_have_predicted_order(
        a in prop_oneof![Just(2i64), Just(4), Just(8)],
        b in prop_oneof![Just(2i64), Just(4)],
        r in word(2, 6),
    ) {
        let (x, y) = (Word::generator(0), Word::generator(1));
        let rels = vec![x.pow(a), y.pow(b), Word::commutator(&x, &y), r.clone()];
        let pres = Presentation::new(names(2), rels).unwrap();
        let s = exponent_sums(&r, 2);
        let ord_x = a / gcd(a, s[0]);
        let ord_y = b / gcd(b, s[1]);
        let ord = ord_x / gcd(ord_x, ord_y) * ord_y;
        prop_assert_eq!(index(&pres) as i64, a * b / ord);
    }

    #[test]
    fn index_ignores_relator_order_and_generator_names(
        seed in 0usize..24,
        rename in any::<bool>(),
    ) {
        let base = parse_presentation("<x,y | x^4, y^2, (x,y)^2, ((x,y),x)>").unwrap();
        let mut rels = base.relators().to_vec();
        let k = rels.len();
        for i in 0..k {
            rels.swap(i, (seed + i * 7) % k);
        }
        let mut gens = base.generators().to_vec();
        if rename {
            rels = rels
                .iter()
                .map(|w| Word::from_syllables(w.syllables().iter().map(|&(g, e)| (1 - g, e))))
                .collect();
            gens.reverse();
        }
        let shuffled = Presentation::new(gens, rels).unwrap();
        prop_assert_eq!(index(&shuffled), index(&base));
    }
}

#[test]
fn known_orders() {
    let cases = [
        ("<x | x^8>", 8),
        ("<x,y | x^2, y^2, (x y)^4>", 8),
        ("<x,y | x^4, y^4, x^2 = y^2, x^y = x^-1>", 8),
        ("<x,y | x^3, y^3, (x,y)^3, ((x,y),x), ((x,y),y)>", 27),
        ("<x,y | x^9, y^3, x^y = x^4>", 27),
        ("<x,y | x^2, y^2, (x,y)>", 4),
        ("<x,y,z | x^2, y^2, z^2, (x,y), (x,z), (y,z)>", 8),
    ];
    let cfg = GroupConfig::default();
    for (text, order) in cases {
        let p = parse_presentation(text).unwrap();
        let table = todd_coxeter(&p, &[], EnumerationLimits::default()).unwrap();
        assert_eq!(table.index(), order, "{text}");
        assert_eq!(
            permutation_closure_order(&table, 1 << 16).unwrap(),
            order,
            "{text}"
        );
        assert_eq!(
            regular_group(&p, &table, &cfg).unwrap().order(),
            order,
            "{text}"
        );
    }
}

#[test]
fn scholz_taussky_group() {
    let p = parse_presentation("<x,y | y^((x,y)) = y^-2, x^3 = y^3>").unwrap();
    let table = todd_coxeter(&p, &[], EnumerationLimits::default()).unwrap();
    assert_eq!(table.index(), 243);
    let g = regular_group(&p, &table, &GroupConfig::default()).unwrap();
    assert_eq!(exponent(&g), 9);
    assert_eq!(derived_length(&g).unwrap(), 2);
    assert_eq!(nilpotency_class(&g).unwrap(), 3);
    // Index of ⟨x⟩.
    let sub = todd_coxeter(&p, &[Word::generator(0)], EnumerationLimits::default()).unwrap();
    assert_eq!(sub.index(), 27);
}
