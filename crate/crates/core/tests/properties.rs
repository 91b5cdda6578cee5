use std::collections::{BTreeMap, BTreeSet};

use mapda::audit::{dof_upper_bound, star_audit, sum_dof};
use mapda::compare::{compare_subpacketization, Subpacketization};
use mapda::construct::{latin_mapda, mn_mapda, mn_pda, right_shift_row};
use mapda::fixtures;
use mapda::miso::{simulate, ChannelKind, SimulationReport};
use mapda::scheme::{place, plan_delivery, verify_plan};
use mapda::validate::{validate_mapda, validate_pda};
use mapda::{CodedArray, Entry};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every condition checked directly from the definition by scanning all
/// pairs of cells.
fn brute_force_mapda(a: &CodedArray, antennas: usize) -> bool {
    let stars = a.stars_in_column(0);
    if (0..a.cols()).any(|c| a.stars_in_column(c) != stars) {
        return false;
    }
    let values: BTreeSet<u32> = a.entries().iter().filter_map(|e| e.value()).collect();
    let Some(&max) = values.iter().max() else {
        return false;
    };
    if values.len() != max as usize {
        return false;
    }
    let cells: Vec<(usize, usize, u32)> = a
        .cells()
        .filter_map(|(r, c, e)| e.value().map(|v| (r, c, v)))
        .collect();
    for &(r1, c1, v1) in &cells {
        let mut loaded = BTreeSet::new();
        for &(r2, c2, v2) in &cells {
            if v1 != v2 {
                continue;
            }
            if c1 == c2 && r1 != r2 {
                return false;
            }
            if a.get(r1, c2).is_int() {
                loaded.insert(c2);
            }
        }
        if loaded.len() > antennas {
            return false;
        }
    }
    true
}

fn small_bases() -> Vec<CodedArray> {
    vec![
        fixtures::example_one(),
        fixtures::mn_pda_4_2(),
        fixtures::lift_u(),
        fixtures::lift_u0(),
        fixtures::lift_p2(),
        fixtures::latin_square_5(),
        fixtures::latin_mapda_5_2_display(),
        fixtures::lifted_subarray_of_one(),
        mn_pda(5, 1).unwrap(),
        mn_pda(4, 1).unwrap(),
        latin_mapda(6, 3).unwrap(),
        latin_mapda(7, 1).unwrap(),
    ]
}

fn entry_strategy(max: u32) -> impl Strategy<Value = Entry> {
    prop_oneof![Just(Entry::Star), (1..=max).prop_map(Entry::Int)]
}

/// Arrays with `F K <= 64`: either random, or a base array with a few
/// cells overwritten.
fn array_strategy() -> impl Strategy<Value = CodedArray> {
    let random = (1usize..=8, 1usize..=8, 1u32..=6).prop_flat_map(|(f, k, s)| {
        let k = k.min(64 / f);
        prop::collection::vec(entry_strategy(s), f * k)
            .prop_map(move |entries| CodedArray::new(f, k, entries).unwrap())
    });
    let bases: Vec<CodedArray> = small_bases()
        .into_iter()
        .filter(|a| a.rows() * a.cols() <= 64)
        .collect();
    let mutated = (0..bases.len())
        .prop_flat_map(move |i| {
            let base = bases[i].clone();
            let cells = base.rows() * base.cols();
            let max = base.max_value().unwrap_or(1) + 1;
            (
                Just(base),
                prop::collection::vec((0..cells, entry_strategy(max)), 0..3),
            )
        })
        .prop_map(|(base, edits)| {
            let mut entries = base.entries().to_vec();
            for (idx, e) in edits {
                entries[idx] = e;
            }
            CodedArray::new(base.rows(), base.cols(), entries).unwrap()
        });
    prop_oneof![random, mutated]
}

fn permuted(a: &CodedArray, rows: &[usize], cols: &[usize], labels: &[u32]) -> CodedArray {
    let entries = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| a.get(r, c)))
        .map(|e| match e {
            Entry::Int(v) => Entry::Int(labels[v as usize - 1]),
            Entry::Star => Entry::Star,
        })
        .collect();
    CodedArray::new(a.rows(), a.cols(), entries).unwrap()
}

fn feasible_lift() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (3usize..=6, 1usize..=5, 1usize..=4)
        .prop_flat_map(|(k1, l, m)| (Just(k1), 1..k1, Just(m.min(l)), Just(l)))
        .prop_filter("needs m t1 + L <= m K1", |&(k1, t1, m, l)| {
            m * t1 + l <= m * k1
        })
}

proptest! {
    #[test]
    fn scanner_agrees_with_validator(a in array_strategy(), l in 1usize..=8) {
        prop_assert_eq!(validate_mapda(&a, l).is_ok(), brute_force_mapda(&a, l));
    }

    #[test]
    fn single_antenna_mapda_is_pda(a in array_strategy()) {
        let as_pda = validate_pda(&a).ok();
        let as_mapda = validate_mapda(&a, 1).ok();
        prop_assert_eq!(as_pda.is_some(), as_mapda.is_some());
        if let (Some(p), Some(q)) = (as_pda, as_mapda) {
            prop_assert_eq!((p.k, p.f, p.z, p.s, p.g), (q.k, q.f, q.z, q.s, q.g));
        }
    }

    #[test]
    fn accepted_arrays_respect_dof_bound(a in array_strategy(), l in 1usize..=8) {
        if let Ok(params) = validate_mapda(&a, l) {
            prop_assert!(sum_dof(&params) <= dof_upper_bound(&params));
            let audit = star_audit(&a, l).unwrap();
            prop_assert!(audit.stars_used <= audit.star_bound);
            prop_assert!(BigRational::from_integer(params.s.into()) >= audit.s_lower_bound);
        }
    }

    #[test]
    fn text_round_trip(a in array_strategy()) {
        let text = a.to_text();
        prop_assert!(text.ends_with('\n'));
        prop_assert_eq!(CodedArray::from_text(&text).unwrap(), a);
    }

    #[test]
    fn row_shift_permutes_integers(
        row in prop::collection::vec(entry_strategy(9), 0..10),
        shift in 0usize..25,
    ) {
        let shifted = right_shift_row(&row, shift);
        prop_assert_eq!(shifted.len(), row.len());
        for (a, b) in row.iter().zip(&shifted) {
            prop_assert_eq!(a.is_star(), b.is_star());
        }
        let mut before: Vec<u32> = row.iter().filter_map(|e| e.value()).collect();
        let mut after: Vec<u32> = shifted.iter().filter_map(|e| e.value()).collect();
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn relabelling_preserves_validity(
        base in 0usize..12,
        seed in any::<u64>(),
    ) {
        let a = &small_bases()[base];
        let l = (1..=a.cols()).find(|&l| validate_mapda(a, l).is_ok());
        prop_assume!(l.is_some());
        let l = l.unwrap();
        let mut runner = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<usize> = (0..a.rows()).collect();
        let mut cols: Vec<usize> = (0..a.cols()).collect();
        let mut labels: Vec<u32> = (1..=a.max_value().unwrap()).collect();
        rows.shuffle(&mut runner);
        cols.shuffle(&mut runner);
        labels.shuffle(&mut runner);
        let b = permuted(a, &rows, &cols, &labels);
        let (p, q) = (validate_mapda(a, l).unwrap(), validate_mapda(&b, l).unwrap());
        prop_assert_eq!(p, q);
        prop_assert_eq!(star_audit(a, l).unwrap().stars_used, star_audit(&b, l).unwrap().stars_used);
    }

    #[test]
    fn lift_is_optimal_mapda((k1, t1, m, l) in feasible_lift()) {
        let trace = mn_mapda(k1, t1, m, l).unwrap();
        let p = validate_mapda(&trace.p, l).unwrap();
        prop_assert_eq!(p.g, Some(m * t1 + l));
        prop_assert_eq!(p.z * k1, p.f * t1);
        prop_assert_eq!(p.z, trace.params.alpha * trace.params.base.z);
        prop_assert!(star_audit(&trace.p, l).unwrap().meets_bound());
    }

    #[test]
    fn relabel_refines_replicas((k1, t1, m, l) in feasible_lift()) {
        prop_assume!(m < l);
        let trace = mn_mapda(k1, t1, m, l).unwrap();
        let ext = trace.extension.as_ref().unwrap();
        let s1 = trace.params.base.s as u32;
        prop_assert_eq!(ext.p2.map_values(|v| (v - 1) % s1 + 1), ext.u0.clone());
        prop_assert_eq!(ext.p1.rows(), trace.params.g * trace.params.l * trace.params.base.f);
        prop_assert_eq!(
            ext.p2.rows(),
            (l - m) * trace.params.l / m * trace.params.base.f
        );
    }

    #[test]
    fn every_uncached_row_delivered_once(
        base in 0usize..12,
        demands in prop::collection::vec(0usize..3, 8),
    ) {
        let a = &small_bases()[base];
        let l = (1..=a.cols()).find(|&l| validate_mapda(a, l).is_ok());
        prop_assume!(l.is_some());
        let l = l.unwrap();
        let d: Vec<usize> = (0..a.cols()).map(|k| demands[k % demands.len()]).collect();
        let caches = place(a, 3);
        let plan = plan_delivery(a, &d, 3).unwrap();
        let check = verify_plan(&plan, &caches, l).unwrap();
        let z = a.stars_in_column(0);
        prop_assert_eq!(check.total_served, a.cols() * (a.rows() - z));
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for block in &plan.blocks {
            for (&user, &row) in block.users.iter().zip(&block.rows) {
                *seen.entry((user, row)).or_default() += 1;
            }
        }
        for user in 0..a.cols() {
            for row in 0..a.rows() {
                let expected = usize::from(a.get(row, user).is_int());
                prop_assert_eq!(seen.get(&(user, row)).copied().unwrap_or(0), expected);
            }
        }

        let other = plan_delivery(a, &vec![0; a.cols()], 3).unwrap();
        for (x, y) in plan.blocks.iter().zip(&other.blocks) {
            prop_assert_eq!(&x.users, &y.users);
            prop_assert_eq!(&x.rows, &y.rows);
        }
    }

    #[test]
    fn applicable_rows_carry_positive_values(k in 1usize..40, l in 1usize..8, t in 1usize..40, m in 1usize..8) {
        prop_assume!(t <= k);
        for row in compare_subpacketization(k, l, t, Some(m)).unwrap() {
            match row.value {
                Ok(Subpacketization::Integer(n)) => prop_assert!(!n.is_zero()),
                Ok(Subpacketization::Rational(r)) => prop_assert!(r > BigRational::zero()),
                Err(reason) => prop_assert!(!reason.is_empty()),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_zero_forcing_contract(base in 0usize..12, seed in any::<u64>()) {
        let a = &small_bases()[base];
        let l = (1..=a.cols()).find(|&l| validate_mapda(a, l).is_ok());
        prop_assume!(l.is_some());
        let l = l.unwrap();
        let d: Vec<usize> = (0..a.cols()).collect();
        let report: SimulationReport<BigRational> =
            simulate(a, l, &d, a.cols(), ChannelKind::Vandermonde, seed).unwrap();
        let plan = plan_delivery(a, &d, a.cols()).unwrap();
        for (block, plan_block) in report.blocks.iter().zip(&plan.blocks) {
            for (j, set) in plan_block.interference.iter().enumerate() {
                for (i, &user) in block.users.iter().enumerate() {
                    if !set.contains(&user) {
                        continue;
                    }
                    let coefficient = &block.effective[i][j];
                    if i == j {
                        prop_assert!(coefficient.is_one());
                    } else {
                        prop_assert!(coefficient.is_zero());
                    }
                }
            }
        }
        prop_assert_eq!(report.measured_dof, sum_dof(&report.params));
    }
}
