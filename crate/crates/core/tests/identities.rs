use proptest::prelude::*;
use qzeta::characters::{characters_mod, DirichletCharacter};
use qzeta::numkernel::{re, QParams, SumConfig, C64};
use qzeta::qfamily::*;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn pick_char(f: u64, idx: usize, primitive: bool) -> Option<DirichletCharacter> {
    let pool: Vec<_> = characters_mod(f).unwrap().into_iter().filter(|c| !primitive || c.conductor().is_primitive).collect();
    (!pool.is_empty()).then(|| pool[idx % pool.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn l_at_negative_integers(f in 2u64..9, idx in 0usize..8, n in 1usize..7, q in 0.15f64..0.85, x in 0.1f64..2.0, w1 in 0.5f64..3.0) {
        let chi = pick_char(f, idx, false).unwrap();
        let cfg = SumConfig::default();
        let qp = QParams::real(q).unwrap();
        for conv in ExponentConvention::ALL {
            let l = l_q(re(1.0 - n as f64), re(x), &chi, &qp, re(w1), conv, &cfg).unwrap();
            let b = gen_changhee_beta_poly(n, re(x), &chi, &qp, re(w1), conv, &cfg).unwrap();
            prop_assert!(close(l.value * n as f64, -b.value, 1e-9), "{} vs {}", l.value * n as f64, -b.value);
        }
    }

    #[test]
    fn distribution_for_primitive_characters(f in 3u64..13, idx in 0usize..12, n in 1usize..7, q in 0.2f64..0.8, x in 0.1f64..2.0, w1 in 0.5f64..2.5) {
        let Some(chi) = pick_char(f, idx, true) else { return Ok(()) };
        let cfg = SumConfig::default();
        let qp = QParams::real(q).unwrap();
        let direct = gen_changhee_beta_poly(n, re(x), &chi, &qp, re(w1), ExponentConvention::Homogeneous, &cfg).unwrap();
        let dist = gen_changhee_beta_distribution(n, re(x), &chi, &qp, re(w1), &cfg).unwrap();
        prop_assert!(close(direct.value, dist.value, 1e-10), "{} vs {}", direct.value, dist.value);
    }

    #[test]
    fn rank_one_multiple_l_is_single_l(f in 2u64..9, idx in 0usize..8, sr in -3.0f64..4.0, si in -3.0f64..3.0, q in 0.2f64..0.8, x in 0.2f64..2.0, w1 in 0.5f64..3.0) {
        let chi = pick_char(f, idx, false).unwrap();
        let cfg = SumConfig::default();
        let qp = QParams::real(q).unwrap();
        let s = C64::new(sr, si);
        let conv = ExponentConvention::Homogeneous;
        let single = l_q(s, re(x), &chi, &qp, re(w1), conv, &cfg).unwrap();
        let multi = l_q_multiple(s, re(x), &chi, &qp, &WeightVector::real(&[w1]).unwrap(), conv, &cfg).unwrap();
        prop_assert!(close(single.value, multi.value, 1e-11));
    }

    #[test]
    fn orthogonality(f in 1u64..500) {
        for chi in characters_mod(f).unwrap() {
            let s = chi.column_sum();
            if chi.is_principal() {
                prop_assert!(s.im.abs() <= 1e-9);
            } else {
                prop_assert!(s.norm() <= 1e-12, "f = {f}, chi {} sums to {s}", chi.index());
            }
        }
    }

    #[test]
    fn multiplicative_and_periodic(f in 2u64..300, idx in 0usize..64, m in -2000i64..2000, n in -2000i64..2000) {
        let chi = pick_char(f, idx, false).unwrap();
        let fm = f as i64;
        let lhs = chi.eval(m * n);
        let rhs = chi.eval(m) * chi.eval(n);
        prop_assert!((lhs - rhs).norm() <= 1e-12);
        prop_assert!((chi.eval(m + fm) - chi.eval(m)).norm() == 0.0);
    }
}
