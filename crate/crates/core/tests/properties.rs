use proptest::prelude::*;

use cylcert::arith::text::parse_poly;
use cylcert::arith::{ext_gcd, resultant, sylvester_bezout, vars, MultiPoly, ParamPoly, Rational, TruncSeries, UniPoly, Vars};
use cylcert::batch::{random_specs, CorpusShape};
use cylcert::classify::scaling_equivalent;
use cylcert::cylinder::{build_cylinder_certificate, verify_cylinder_certificate};
use cylcert::lnd::{kernel_membership, standard_lnds};
use cylcert::variety::{ambient_vars, VarietySpec};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Rational::new(a, b))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |c| !c.is_zero())
}

fn unipoly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(UniPoly::new)
}

fn multipoly(v: Vars) -> impl Strategy<Value = MultiPoly> {
    let n = v.len();
    prop::collection::vec((prop::collection::vec(0u32..3, n), rational()), 0..6).prop_map(move |terms| {
        terms.into_iter().fold(MultiPoly::zero_in(&v), |acc, (exps, c)| {
            let mut t = MultiPoly::constant_in(c, &v);
            for (i, e) in exps.into_iter().enumerate() {
                t = &t * &MultiPoly::var(i, &v).pow(e);
            }
            &acc + &t
        })
    })
}

fn xyz() -> Vars {
    vars(&["x", "y", "z"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(a in multipoly(xyz()), b in multipoly(xyz()), c in multipoly(xyz())) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(parse_poly(&a.to_string(), &xyz()).unwrap(), a);
    }

    #[test]
    fn series_exp_and_log_invert(tail in prop::collection::vec(rational(), 0..7), prec in 1usize..=10) {
        let mut cs = vec![Rational::one()];
        cs.extend(tail);
        let p = TruncSeries::from_poly(&UniPoly::new(cs), prec);
        let log = p.log().unwrap();
        prop_assert_eq!(log.coeff(0).clone(), Rational::zero());
        prop_assert_eq!(log.exp().unwrap(), p.clone());
        prop_assert_eq!(log.exp().unwrap().log().unwrap(), log.clone());
        // log turns products into sums
        let sq = p.mul(&p).log().unwrap();
        prop_assert_eq!(sq, log.add(&log));
        prop_assert_eq!(p.mul(&p.inverse().unwrap()), TruncSeries::one(prec));
    }

    #[test]
    fn extended_gcd_identity(f in unipoly(5), g in unipoly(5)) {
        prop_assume!(!(f.is_zero() && g.is_zero()));
        let (d, s, t) = ext_gcd(&f, &g).unwrap();
        prop_assert_eq!(&(&s * &f) + &(&t * &g), d.clone());
        prop_assert!(d.is_monic());
        prop_assert!(f.divrem(&d).unwrap().1.is_zero());
        prop_assert!(g.divrem(&d).unwrap().1.is_zero());
    }

    #[test]
    fn resultant_vanishes_exactly_on_common_factors(f in unipoly(4), g in unipoly(4), h in unipoly(2)) {
        prop_assume!(f.degree().unwrap_or(0) > 0 && g.degree().unwrap_or(0) > 0);
        let (d, _, _) = ext_gcd(&f, &g).unwrap();
        let res = resultant(&f, &g).unwrap();
        prop_assert_eq!(res.is_zero(), d.degree() != Some(0));
        if h.degree().unwrap_or(0) > 0 {
            prop_assert!(resultant(&(&f * &h), &(&g * &h)).unwrap().is_zero());
        }
        let (r, s, t) = sylvester_bezout(&f, &g).unwrap();
        prop_assert_eq!(r.clone(), res);
        prop_assert_eq!(&(&s * &f) + &(&t * &g), UniPoly::constant(r));
    }

    #[test]
    fn resultant_commutes_with_specialization(
        f in prop::collection::vec((rational(), rational()), 1..4),
        g in prop::collection::vec((rational(), rational()), 1..4),
        a in rational(),
    ) {
        // monic in u with coefficients c0 + c1 a in Q[a]
        let pv = vars(&["a"]);
        let lift = |cs: &[(Rational, Rational)]| {
            let mut coeffs: Vec<ParamPoly> = cs
                .iter()
                .map(|(c0, c1)| &MultiPoly::constant_in(c0.clone(), &pv) + &MultiPoly::var(0, &pv).scale_by(c1))
                .collect();
            coeffs.push(MultiPoly::one_in(&pv));
            UniPoly::new(coeffs)
        };
        let (fa, ga) = (lift(&f), lift(&g));
        let generic = resultant(&fa, &ga).unwrap();
        let at = |c: &ParamPoly| c.eval(std::slice::from_ref(&a));
        let pointwise = resultant(&fa.map_coeffs(at), &ga.map_coeffs(at)).unwrap();
        prop_assert_eq!(generic.eval(std::slice::from_ref(&a)), pointwise);
    }

    #[test]
    fn scaling_equivalence_is_symmetric_and_transitive(
        p in unipoly(2),
        mu1 in nonzero_rational(),
        l1 in nonzero_rational(),
        mu2 in nonzero_rational(),
        l2 in nonzero_rational(),
    ) {
        prop_assume!(!p.constant_term().is_zero());
        let p2 = p.rescale_var(&l1).scale(&mu1);
        let p3 = p2.rescale_var(&l2).scale(&mu2);
        let w12 = scaling_equivalent(&p, &p2, 4).unwrap().expect("p ~ p2 by construction");
        prop_assert!(w12.holds(&p, &p2));
        let w21 = scaling_equivalent(&p2, &p, 4).unwrap().expect("symmetric");
        prop_assert!(w21.holds(&p2, &p));
        prop_assert!(w12.inverse().holds(&p2, &p));
        let w23 = scaling_equivalent(&p2, &p3, 4).unwrap().expect("p2 ~ p3 by construction");
        let w13 = scaling_equivalent(&p, &p3, 4).unwrap().expect("transitive");
        prop_assert!(w13.holds(&p, &p3));
        prop_assert!(w12.then(&w23).holds(&p, &p3));
    }

    #[test]
    fn classifier_verdicts_are_symmetric(p1 in unipoly(2), p2 in unipoly(2)) {
        prop_assume!(!p1.constant_term().is_zero() && !p2.constant_term().is_zero());
        let forward = scaling_equivalent(&p1, &p2, 4).unwrap();
        let backward = scaling_equivalent(&p2, &p1, 4).unwrap();
        prop_assert_eq!(forward.is_some(), backward.is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kernel_is_a_subalgebra(seed in any::<u64>(), a in prop::collection::vec(rational(), 4), b in prop::collection::vec(rational(), 4)) {
        let spec = &random_specs(seed, 1, CorpusShape { max_m: 1, max_n: 3, max_deg: 2 })[0];
        let v = ambient_vars(spec.m);
        let dz = &standard_lnds(spec).unwrap()[0];
        // x0, x_m, t and x^n y + z^q are killed by delta_z
        let gens = [
            MultiPoly::var(0, &v),
            MultiPoly::var(spec.m, &v),
            MultiPoly::var_named("t", &v).unwrap(),
            &(&spec.x_power_n(&v) * &MultiPoly::var_named("y", &v).unwrap()) + &MultiPoly::var_named("z", &v).unwrap().pow(spec.q),
        ];
        let combo = |cs: &[Rational]| gens.iter().zip(cs).fold(MultiPoly::zero_in(&v), |acc, (g, c)| &acc + &g.scale_by(c));
        let (f, g) = (combo(&a), combo(&b));
        for k in gens.iter().chain([&f, &g]) {
            prop_assert!(kernel_membership(spec, dz, k).unwrap());
        }
        prop_assert!(kernel_membership(spec, dz, &(&f + &g)).unwrap());
        prop_assert!(kernel_membership(spec, dz, &(&f * &g)).unwrap());
        prop_assert!(!kernel_membership(spec, dz, &MultiPoly::var_named("z", &v).unwrap()).unwrap());
    }

    #[test]
    fn random_corpus_certifies(seed in any::<u64>()) {
        let spec: VarietySpec = random_specs(seed, 1, CorpusShape { max_m: 1, max_n: 4, max_deg: 2 }).remove(0);
        let cert = build_cylinder_certificate(&spec).unwrap();
        let rep = verify_cylinder_certificate(&spec, &cert);
        prop_assert!(rep.passed(), "{:?} fails at {:?}", spec, rep.first_failure());
        let slot = (seed as usize) % cert.coefficient_count();
        prop_assert!(!verify_cylinder_certificate(&spec, &cert.with_shifted_coefficient(slot, &Rational::one())).passed());
    }
}
