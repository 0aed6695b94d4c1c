use std::collections::BTreeSet;

use proptest::prelude::*;

use axiomprobe::fol::{
    instantiate_template, parse_axiom, print_axiom, Comparator, Hole, Polarity, TemplateId, TypeConstraint, TypedAxiom,
};
use axiomprobe::perturb::{
    apply_asymmetry, apply_linguistic, site_is_ordered, ConclusionLexicon, LinguisticOp, Phrase, PhraseRole, Site,
};
use axiomprobe::probes::{split_dataset, Setting, SplitConfig, SplitName};
use axiomprobe::surface::{gen_entity_assignment, AxiomSurface, EntityMode, TemplateBank, Vocabulary};

fn word() -> impl Strategy<Value = String> {
    "[a-z]{3,8}"
}

fn phrase() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 1..4).prop_map(|w| w.join(" "))
}

/// A valid typed axiom for any of the eleven constraints.
fn typed_axiom() -> impl Strategy<Value = TypedAxiom> {
    (
        0..TypeConstraint::ALL.len(),
        phrase(),
        phrase(),
        phrase(),
        0..Comparator::COMPARATIVE.len(),
        0..Comparator::COMPARATIVE.len(),
        any::<bool>(),
    )
        .prop_filter_map("identical contrast", |(ci, x, y, prop, c, pc, late)| {
            let constraint = TypeConstraint::ALL[ci];
            let template = constraint.template();
            let cmp = if template.is_temporal() {
                if late {
                    Comparator::After
                } else {
                    Comparator::Before
                }
            } else {
                Comparator::COMPARATIVE[c]
            };
            let bindings: Vec<(Hole, String)> = match template {
                TemplateId::Lt1 => vec![(Hole::PropA, x), (Hole::PropB, y), (Hole::Property, prop)],
                TemplateId::Lt2 => vec![(Hole::Relation, x), (Hole::Property, prop)],
                TemplateId::Lt3 | TemplateId::Lt5 => vec![(Hole::Premise, x), (Hole::Property, prop)],
                TemplateId::Lt4 => vec![
                    (Hole::Premise, x),
                    (Hole::PremiseComparator, Comparator::COMPARATIVE[pc].word().to_string()),
                    (Hole::Property, prop),
                ],
            };
            let axiom = instantiate_template(template, bindings, cmp).ok()?;
            TypedAxiom::new(axiom, constraint).ok()
        })
}

fn complete_lexicon(pos: &str, neg: &str) -> ConclusionLexicon {
    let p = |role, t: String| Phrase::new(role, &t, None).unwrap();
    ConclusionLexicon {
        premise: None,
        base: p(PhraseRole::Base, format!("is {{COMP}} {pos}")),
        antonym: Some(p(PhraseRole::Antonym, format!("is {{COMP}} {neg}"))),
        paraphrase: Some(p(PhraseRole::Paraphrase, format!("seems {{COMP}} {pos}"))),
        paraphrase_of_antonym: Some(p(PhraseRole::ParaphraseOfAntonym, format!("seems {{COMP}} {neg}"))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(a in typed_axiom()) {
        let printed = print_axiom(&a.axiom);
        let back = parse_axiom(&printed).unwrap();
        prop_assert_eq!(&back, &a.axiom);
        prop_assert_eq!(print_axiom(&back), printed);
        prop_assert_eq!(back.id(), a.id());
    }

    #[test]
    fn records_round_trip(a in typed_axiom()) {
        let json = serde_json::to_string(&a.to_record()).unwrap();
        let record: axiomprobe::fol::AxiomRecord = serde_json::from_str(&json).unwrap();
        let back = TypedAxiom::try_from(record).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complete_sets_are_polarity_balanced(a in typed_axiom(), pos in word(), neg in word(), e in "[A-Z][a-z]{3,6}") {
        prop_assume!(!a.axiom.template().is_temporal());
        prop_assume!(site_is_ordered(&a.axiom, Site::Premise));
        let surface = AxiomSurface::new(a, Some(complete_lexicon(&pos, &neg)), &TemplateBank::builtin()).unwrap();
        let variants = surface.variants().unwrap();
        prop_assert_eq!(variants.len(), 24);
        let entities = [e.clone(), format!("{e}x")];
        let mut positive = 0;
        let mut negative = 0;
        for v in &variants {
            let s = surface.render(v, &entities, EntityMode::Novel).unwrap();
            match s.gold_polarity {
                Some(Polarity::Positive) => positive += 1,
                Some(Polarity::Negative) => negative += 1,
                None => prop_assert!(false, "comparative axiom produced a temporal gold"),
            }
        }
        prop_assert_eq!((positive, negative), (12, 12));
    }

    #[test]
    fn asymmetry_is_an_involution(a in typed_axiom(), pos in word(), neg in word(), op in 0..8usize) {
        let lex = complete_lexicon(&pos, &neg);
        let op = LinguisticOp::ALL[op];
        let Ok(p) = apply_linguistic(&a.axiom, &lex, op) else { return Ok(()) };
        for site in [Site::Premise, Site::Conclusion] {
            if !site_is_ordered(&a.axiom, site) {
                prop_assert!(apply_asymmetry(&p, site).is_err());
                continue;
            }
            let once = apply_asymmetry(&p, site).unwrap();
            prop_assert_ne!(once.effective_comparator, p.effective_comparator);
            let twice = apply_asymmetry(&once, site).unwrap();
            prop_assert_eq!(&twice, &p);
        }
    }

    #[test]
    fn negation_and_antonym_cancel(a in typed_axiom(), pos in word(), neg in word()) {
        prop_assume!(!a.axiom.template().is_temporal());
        let lex = complete_lexicon(&pos, &neg);
        let p = apply_linguistic(&a.axiom, &lex, LinguisticOp::NegationAntonym).unwrap();
        prop_assert!(!p.parity);
        prop_assert_eq!(p.effective_comparator, a.axiom.comparator());
    }

    #[test]
    fn entity_assignments_hold_their_contract(seed in any::<u64>(), n in 1..200usize, k in 1..4usize) {
        let vocab = Vocabulary::builtin();
        let rows = gen_entity_assignment(n, k, seed, &vocab, EntityMode::Novel).unwrap();
        prop_assert_eq!(rows.len(), n);
        let mut seen = BTreeSet::new();
        for row in &rows {
            prop_assert_eq!(row.len(), k);
            for [a, b] in row {
                prop_assert_ne!(a, b);
                for e in [a, b] {
                    prop_assert!((3..=12).contains(&e.chars().count()), "{}", e);
                    prop_assert!(!vocab.contains(&e.to_lowercase()), "{}", e);
                }
                prop_assert!(seen.insert((a.clone(), b.clone())));
            }
        }
        prop_assert_eq!(rows, gen_entity_assignment(n, k, seed, &vocab, EntityMode::Novel).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn splits_are_axiom_disjoint_and_within_budget(
        sizes in prop::collection::vec(1..8usize, 5..60),
        seed in any::<u64>(),
        test in 0..40usize,
        val in 0..40usize,
        train in 0..80usize,
    ) {
        let statements = synthetic_pool(&sizes);
        let mut config = SplitConfig::new(Setting::LowResource, seed);
        config.train = Some(train);
        config.val = Some(val);
        config.test = Some(test);
        let Ok(set) = split_dataset(&statements, &config, &Vocabulary::builtin()) else {
            prop_assert!(train + val + test > statements.len());
            return Ok(());
        };
        let mut owners = std::collections::BTreeMap::new();
        for (name, budget) in [(SplitName::Train, train), (SplitName::Val, val), (SplitName::Test, test)] {
            let m = set.get(name).unwrap();
            prop_assert!(m.statement_ids.len() <= budget);
            for id in &m.axiom_ids {
                prop_assert!(owners.insert(id.clone(), name).is_none(), "axiom in two splits");
            }
        }
    }
}

/// One LT1 axiom per entry of `sizes`, with that many rendered statements.
fn synthetic_pool(sizes: &[usize]) -> Vec<axiomprobe::surface::Statement> {
    let bank = TemplateBank::builtin();
    let vocab = Vocabulary::builtin();
    let total: usize = sizes.iter().sum();
    let pairs = gen_entity_assignment(total, 1, 1, &vocab, EntityMode::Novel).unwrap();
    let mut pairs = pairs.into_iter();
    let mut out = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let axiom = parse_axiom(&format!(
            "Prop(A,stuff{i}) & Prop(B,other{i}) -> More(Prop(A,heavy),Prop(B,heavy))"
        ))
        .unwrap();
        let typed = TypedAxiom::new(axiom, TypeConstraint::AttributeMaterial).unwrap();
        let surface = AxiomSurface::new(typed, None, &bank).unwrap();
        let v = surface.variants().unwrap();
        for j in 0..n {
            let pair = pairs.next().unwrap().remove(0);
            out.push(surface.render(&v[j % v.len()], &pair, EntityMode::Novel).unwrap());
        }
    }
    out
}
