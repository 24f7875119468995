use std::collections::BTreeSet;

use proptest::prelude::*;
use redaction::concepts::{erm, ConceptClass, FiniteClass, FiniteConcept, Interval, Threshold};
use redaction::domain::{
    fraction, rational, rational_int, Concept, Label, Point, Rational, Sample, SelectiveClassifier, TriLabel,
};
use redaction::metrics::{
    err_empirical, err_empirical_labels, false_rejection_rate, hamming_delta, massart_distribution, massart_opt,
    optimal_reject_set, overlap_rejection_mass, rej_dist, rej_empirical, tv_distance, DiscreteDistribution, PointSet,
};
use redaction::rejectron::{
    build_rejectron_erm_dataset, iteration_bound, rejectron_traced, rejectron_with_base, score, RejectronConfig,
};
use redaction::synthetic::{lower_bound_pq_instance, lower_bound_trans_adversary, lower_bound_trans_instance, Seed};
use redaction::urejectron::{pair_score, urejectron_traced, PredictionSet};

fn finite_class() -> impl Strategy<Value = FiniteClass> {
    (2usize..=12).prop_flat_map(|size| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), size), 1..=64).prop_map(move |rows| {
            let concepts = rows
                .into_iter()
                .map(|r| FiniteConcept::new(r.into_iter().map(Label::from_bool).collect()))
                .collect();
            FiniteClass::new(size, concepts).unwrap()
        })
    })
}

/// A finite class, a member `f`, and train/test index multisets of equal size.
fn finite_instance() -> impl Strategy<Value = (FiniteClass, usize, Vec<usize>, Vec<usize>)> {
    finite_class().prop_flat_map(|class| {
        let size = class.domain_size();
        let k = class.len();
        (1usize..=12).prop_flat_map(move |n| {
            (
                Just(class.clone()),
                0..k,
                prop::collection::vec(0..size, n),
                prop::collection::vec(0..size, n),
            )
        })
    })
}

fn epsilon() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.05, 0.1, 0.125, 0.2, 0.25, 0.3, 0.5, 1.0])
}

fn grid_reals(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..40).prop_map(|v| f64::from(v) / 4.0), n)
}

fn dist(max_support: usize) -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec(0u32..6, max_support).prop_filter_map("all-zero weights", |w| {
        let total: u32 = w.iter().sum();
        if total == 0 {
            return None;
        }
        let probs = w.iter().map(|&x| rational(x.into(), total.into())).collect();
        Some(DiscreteDistribution::new((0..w.len()).map(Point::Discrete).collect(), probs).unwrap())
    })
}

fn labels_of(c: &Concept, s: &Sample) -> Vec<Label> {
    c.predict_all(s).unwrap()
}

fn concept(class: &FiniteClass, i: usize) -> Concept {
    Concept::Finite(class.concepts()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classify_rejects_exactly_off_membership_and_committees_shrink(
        theta in -1.0f64..11.0,
        cuts in prop::collection::vec((0.0f64..10.0, 0.0f64..5.0), 0..5),
        xs in prop::collection::vec(-1.0f64..11.0, 1..40),
    ) {
        let base = Concept::Threshold(Threshold::new(theta).unwrap());
        let committee: Vec<Concept> = cuts.iter().map(|&(a, w)| Concept::Interval(Interval::new(a, a + w).unwrap())).collect();
        for t in 0..=committee.len() {
            let sc = SelectiveClassifier::with_committee(base.clone(), committee[..t].to_vec()).unwrap();
            let grown = SelectiveClassifier::with_committee(base.clone(), committee[..(t + 1).min(committee.len())].to_vec()).unwrap();
            for &x in &xs {
                let p = Point::Real1D(x);
                prop_assert_eq!(sc.classify(&p).unwrap() == TriLabel::Reject, !sc.membership(&p).unwrap());
                prop_assert!(!grown.membership(&p).unwrap() || sc.membership(&p).unwrap());
                prop_assert_eq!(sc.classify(&p).unwrap(), sc.classify(&p).unwrap());
            }
        }
    }

    #[test]
    fn rejectron_realizable_guarantees_on_thresholds_and_intervals(
        (xs, zs) in (1usize..60).prop_flat_map(|n| (grid_reals(n), grid_reals(n))),
        eps in epsilon(),
        use_interval in any::<bool>(),
        a in 0.0f64..10.0,
        w in 0.0f64..6.0,
    ) {
        let (class, f) = if use_interval {
            (ConceptClass::Interval, Concept::Interval(Interval::new(a, a + w).unwrap()))
        } else {
            (ConceptClass::Threshold, Concept::Threshold(Threshold::new(a).unwrap()))
        };
        let train = Sample::from_reals(&xs).unwrap();
        let test = Sample::from_reals(&zs).unwrap();
        let labels = labels_of(&f, &train);
        let run = rejectron_traced(&class, &train, &labels, &test, &RejectronConfig::new(eps)).unwrap();
        let sc = &run.classifier;
        prop_assert!(err_empirical(sc, &f, &test).unwrap() <= redaction::domain::rational_from_f64(eps).unwrap());
        prop_assert_eq!(rej_empirical(sc, &train).unwrap(), rational_int(0));
        prop_assert!(sc.iterations() <= iteration_bound(eps).unwrap());
        let again = rejectron_traced(&class, &train, &labels, &test, &RejectronConfig::new(eps)).unwrap();
        prop_assert_eq!(&again.classifier, sc);
    }

    #[test]
    fn each_accepted_round_removes_more_than_eps_n_test_points(
        (class, fi, tr, te) in finite_instance(),
        eps in epsilon(),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let labels = labels_of(&concept(&class, fi), &train);
        let cls = ConceptClass::Finite(class);
        let run = rejectron_traced(&cls, &train, &labels, &test, &RejectronConfig::new(eps)).unwrap();
        let eps_n = redaction::domain::rational_from_f64(eps).unwrap() * rational_int(test.len() as i64);
        for r in run.rounds.iter().filter(|r| r.accepted) {
            prop_assert!(rational_int(r.test_disagreements as i64) > eps_n);
        }
    }

    #[test]
    fn rejection_on_train_is_at_most_one_over_lambda_for_any_labels(
        (class, _fi, tr, te) in finite_instance(),
        bits in prop::collection::vec(any::<bool>(), 12),
        eps in epsilon(),
        lam in prop::sample::select(vec![rational(1, 2), rational_int(1), rational_int(2), rational(7, 2), rational_int(5)]),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let labels: Vec<Label> = (0..train.len()).map(|i| Label::from_bool(bits[i])).collect();
        let cfg = RejectronConfig::new(eps).with_lambda(lam.clone());
        let run = rejectron_traced(&ConceptClass::Finite(class), &train, &labels, &test, &cfg).unwrap();
        prop_assert!(rej_empirical(&run.classifier, &train).unwrap() <= rational_int(1) / lam);
    }

    #[test]
    fn reduction_error_matches_score_identity(
        (class, fi, tr, te) in finite_instance(),
        lam in prop::sample::select(vec![rational_int(1), rational_int(3), rational(5, 2)]),
    ) {
        // ERM error on the reduction dataset equals |S ∩ test| - n·s(c) for every c.
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let h = concept(&class, fi);
        let sc = SelectiveClassifier::unrestricted(h.clone());
        let n = train.len() as i64;
        let data = build_rejectron_erm_dataset(&train, &h, &test, &lam).unwrap();
        for i in 0..class.len() {
            let c = concept(&class, i);
            let s = score(&c, &h, &sc, &train, &test, &lam).unwrap();
            prop_assert_eq!(data.weighted_error(&c).unwrap(), rational_int(n) - rational_int(n) * s);
        }
        prop_assert_eq!(score(&h, &h, &sc, &train, &test, &lam).unwrap(), rational_int(0));
    }

    #[test]
    fn rejectron_rounds_attain_the_brute_force_maximum(
        (class, fi, tr, te) in finite_instance(),
        eps in epsilon(),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let labels = labels_of(&concept(&class, fi), &train);
        let cls = ConceptClass::Finite(class.clone());
        let run = rejectron_traced(&cls, &train, &labels, &test, &RejectronConfig::new(eps)).unwrap();
        let h = run.classifier.base.clone();
        let lam = run.classifier.lambda_used.clone();
        for (t, round) in run.rounds.iter().enumerate() {
            let so_far = SelectiveClassifier::with_committee(h.clone(), run.classifier.committee[..t].to_vec()).unwrap();
            let best = (0..class.len())
                .map(|i| score(&concept(&class, i), &h, &so_far, &train, &test, &lam).unwrap())
                .max()
                .unwrap();
            prop_assert_eq!(&round.score, &best);
            prop_assert_eq!(score(&round.candidate, &h, &so_far, &train, &test, &lam).unwrap(), best);
        }
    }

    #[test]
    fn urejectron_rounds_attain_the_brute_force_pair_maximum(
        (class, _fi, tr, te) in finite_instance(),
        eps in epsilon(),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let run = urejectron_traced(&ConceptClass::Finite(class.clone()), &train, &test, &RejectronConfig::new(eps)).unwrap();
        let lam = run.set.lambda_used.clone();
        for (t, round) in run.rounds.iter().enumerate() {
            let so_far = PredictionSet { pairs: run.set.pairs[..t].to_vec(), ..PredictionSet::everything() };
            let mut best: Option<Rational> = None;
            for i in 0..class.len() {
                for j in 0..class.len() {
                    let s = pair_score(&concept(&class, i), &concept(&class, j), &so_far, &train, &test, &lam).unwrap();
                    best = Some(best.map_or(s.clone(), |b| b.max(s)));
                }
            }
            prop_assert_eq!(Some(round.score.clone()), best);
        }
        prop_assert!(run.set.len() <= iteration_bound(eps).unwrap());
    }

    #[test]
    fn urejectron_guarantee_coupling_and_zero_train_rejection(
        (class, fi, tr, te) in finite_instance(),
        eps in epsilon(),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let cls = ConceptClass::Finite(class.clone());
        let set = urejectron_traced(&cls, &train, &test, &RejectronConfig::new(eps)).unwrap().set;
        prop_assert_eq!(rej_empirical(&set, &train).unwrap(), rational_int(0));
        let h = erm(&cls, &redaction::domain::WeightedLabeledSample::unit(&train, &labels_of(&concept(&class, fi), &train)).unwrap()).unwrap();
        let eps_r = redaction::domain::rational_from_f64(eps).unwrap();
        // Every member of the class that is consistent with the training labels.
        for i in 0..class.len() {
            let f = concept(&class, i);
            if labels_of(&f, &train) != labels_of(&h, &train) {
                continue;
            }
            let restricted = redaction::domain::Restricted::new(&h, &set);
            prop_assert!(err_empirical(&restricted, &f, &test).unwrap() <= eps_r);
        }
    }

    #[test]
    fn agnostic_transductive_error_bound(
        (class, _fi, tr, te) in finite_instance(),
        ybits in prop::collection::vec(any::<bool>(), 12),
        tbits in prop::collection::vec(any::<bool>(), 12),
        eps in epsilon(),
        lam in prop::sample::select(vec![rational(1, 2), rational_int(1), rational_int(2), rational_int(4)]),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let n = train.len();
        let y: Vec<Label> = (0..n).map(|i| Label::from_bool(ybits[i])).collect();
        let yt: Vec<Label> = (0..n).map(|i| Label::from_bool(tbits[i])).collect();
        let cfg = RejectronConfig::new(eps).with_lambda(lam.clone());
        let sc = rejectron_traced(&ConceptClass::Finite(class.clone()), &train, &y, &test, &cfg).unwrap().classifier;
        let lhs = err_empirical_labels(&sc, &yt, &test).unwrap();
        let mismatch = |a: &[Label], b: &[Label]| fraction(a.iter().zip(b).filter(|(u, v)| u != v).count(), n);
        for i in 0..class.len() {
            let f = concept(&class, i);
            let rhs = redaction::domain::rational_from_f64(eps).unwrap()
                + rational_int(2) * &lam * mismatch(&labels_of(&f, &train), &y)
                + mismatch(&labels_of(&f, &test), &yt);
            prop_assert!(lhs <= rhs);
        }
    }

    #[test]
    fn rejectron_with_any_base_keeps_the_iteration_bound(
        (class, fi, tr, te) in finite_instance(),
        eps in epsilon(),
    ) {
        let train = Sample::from_indices(&tr);
        let test = Sample::from_indices(&te);
        let run = rejectron_with_base(&ConceptClass::Finite(class.clone()), concept(&class, fi), &train, &test, &RejectronConfig::new(eps)).unwrap();
        prop_assert!(run.classifier.iterations() <= iteration_bound(eps).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rejection_shifts_by_at_most_tv_and_overlap_mass(
        p in dist(8),
        q in dist(8),
        mask in prop::collection::vec(any::<bool>(), 8),
        lam_num in 0u32..=200,
    ) {
        let rejected: Vec<Point> = (0..8).filter(|&i| mask[i]).map(Point::Discrete).collect();
        let s = PointSet::excluding(rejected);
        let rp = rej_dist(&s, &p).unwrap();
        let rq = rej_dist(&s, &q).unwrap();
        prop_assert!(rq <= &rp + tv_distance(&p, &q).unwrap());
        let lam = rational(lam_num.into(), 10);
        prop_assert!(overlap_rejection_mass(&p, &q, &s, &lam).unwrap() <= lam * rp);
    }

    #[test]
    fn optimal_reject_set_dominates(
        p in dist(8),
        q in dist(8),
        eps_num in 1u32..=20,
        mask in prop::collection::vec(any::<bool>(), 8),
        order in Just(()).prop_perturb(|_, mut rng| {
            let mut v: Vec<usize> = (0..8).collect();
            for i in (1..8).rev() { v.swap(i, (rng.next_u32() as usize) % (i + 1)); }
            v
        }),
    ) {
        let eps = rational(eps_num.into(), 20);
        let star = optimal_reject_set(&p, &q, &eps).unwrap();
        let mut rejected: BTreeSet<Point> = (0..8).filter(|&i| mask[i]).map(Point::Discrete).collect();
        for &i in &order {
            if rej_dist(&PointSet::excluding(rejected.iter().copied()), &p).unwrap() <= star.rej_p {
                break;
            }
            rejected.remove(&Point::Discrete(i));
        }
        let s = PointSet::excluding(rejected);
        prop_assert!(rej_dist(&s, &p).unwrap() <= star.rej_p);
        prop_assert!(rej_dist(&s, &q).unwrap() <= star.rej_q);
    }

    #[test]
    fn empirical_rejection_identities(
        z in prop::collection::vec(0usize..10, 1..30),
        edits in prop::collection::vec((any::<bool>(), 0usize..10), 30),
        mask in prop::collection::vec(any::<bool>(), 10),
    ) {
        let xt: Vec<usize> = z.iter().zip(&edits).map(|(&zi, &(edit, v))| if edit { v } else { zi }).collect();
        let (z, xt) = (Sample::from_indices(&z), Sample::from_indices(&xt));
        let s = PointSet::excluding((0..10).filter(|&i| mask[i]).map(Point::Discrete));
        let rej_z = rej_empirical(&s, &z).unwrap();
        prop_assert!(false_rejection_rate(&z, &xt, &s).unwrap() <= rej_z);
        prop_assert!(rej_empirical(&s, &xt).unwrap() <= rej_z + hamming_delta(&z, &xt).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn massart_excess_error_identity(
        p in dist(8),
        f_bits in prop::collection::vec(any::<bool>(), 8),
        g_bits in prop::collection::vec(any::<bool>(), 8),
        eta_num in prop::collection::vec(0i64..50, 8),
        bound in 0i64..50,
    ) {
        let f = Concept::Finite(FiniteConcept::new(f_bits.into_iter().map(Label::from_bool).collect()));
        let g = Concept::Finite(FiniteConcept::new(g_bits.into_iter().map(Label::from_bool).collect()));
        let eta_max = rational(bound, 100);
        let eta = |x: &Point| match x {
            Point::Discrete(i) => rational(eta_num[*i] * bound / 50, 100),
            _ => unreachable!(),
        };
        let p_eta = massart_distribution(&p, &f, eta).unwrap();
        let lhs = (rational_int(1) - rational_int(2) * eta_max) * redaction::metrics::disagreement_mass(&g, &f, &p).unwrap();
        let rhs = redaction::metrics::concept_error_labeled(&g, &p_eta).unwrap() - massart_opt(&p, eta);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn pq_instance_structure(d in 1usize..4, extra in 0usize..30, seed in any::<u64>()) {
        let n = 2 * d + extra;
        let inst = lower_bound_pq_instance(d, n, Seed::new(seed)).unwrap();
        let Concept::Ones(o) = &inst.f else { panic!("expected an exactly-ones concept") };
        prop_assert_eq!(inst.q.len(), inst.k);
        prop_assert_eq!(o.ones().len(), d);
        for x in inst.q.support() {
            prop_assert!(inst.p.prob(x) > rational_int(0));
        }
        for &i in o.ones() {
            prop_assert!(inst.q.prob(&Point::Discrete(i)) > rational_int(0));
        }
        prop_assert_eq!(lower_bound_pq_instance(d, n, Seed::new(seed)).unwrap(), inst);
    }

    #[test]
    fn trans_adversary_points_are_honest_or_unseen_ones(d in 1usize..4, extra in 0usize..40, seed in any::<u64>()) {
        let n = 4 * d + extra;
        let inst = lower_bound_trans_instance(d, n, n, Seed::new(seed)).unwrap();
        let out = lower_bound_trans_adversary(&inst.x, &inst.z, &inst.f, d, n, Seed::new(seed ^ 1)).unwrap();
        prop_assert_eq!(out.sample.len(), n);
        for p in &out.sample {
            let unseen_one = inst.f.predict(p).map(|l| l.is_one()).unwrap_or(false) && !inst.x.points().contains(p);
            prop_assert!(*p == out.sentinel || inst.z.points().contains(p) || unseen_one);
        }
    }
}
