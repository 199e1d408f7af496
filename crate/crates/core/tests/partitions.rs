use ncprob::partitions::{enumerate, stirling_first, PartitionKind, RootedTree, SetPartition};
use ncprob::scalar::{self, int, Scalar};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn bell_numbers(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    let mut out = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![row.last().unwrap().clone()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
        out.push(row[0].clone());
    }
    out
}

fn catalan_numbers(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(1)];
    for m in 0..n {
        let v = (0..=m).map(|i| &c[i] * &c[m - i]).sum();
        c.push(v);
    }
    c
}

#[test]
fn bell_counts() {
    let b = bell_numbers(9);
    for n in 1..=9 {
        assert_eq!(BigInt::from(enumerate(PartitionKind::All, n).unwrap().len()), b[n], "n = {n}");
    }
}

#[test]
fn catalan_counts() {
    let c = catalan_numbers(12);
    for n in 1..=12 {
        assert_eq!(BigInt::from(enumerate(PartitionKind::Noncrossing, n).unwrap().len()), c[n], "n = {n}");
    }
    for k in 1..=6 {
        assert_eq!(BigInt::from(enumerate(PartitionKind::NcPair, 2 * k).unwrap().len()), c[k]);
        assert_eq!(
            BigInt::from(enumerate(PartitionKind::Pair, 2 * k).unwrap().len()),
            scalar::double_factorial_odd(k)
        );
    }
}

#[test]
fn interval_counts() {
    for n in 1..=10 {
        assert_eq!(enumerate(PartitionKind::Interval, n).unwrap().len(), 1 << (n - 1));
    }
}

#[test]
fn irreducible_iff_single_tree() {
    for n in 1..=8 {
        for p in enumerate(PartitionKind::Noncrossing, n).unwrap() {
            let one_tree = p.nesting_forest().unwrap().trees().len() == 1;
            assert_eq!(p.is_irreducible().unwrap(), one_tree, "{p}");
        }
    }
}

#[test]
fn irreducible_kind_matches_predicate() {
    for n in 1..=8 {
        let direct: Vec<SetPartition> = enumerate(PartitionKind::Noncrossing, n)
            .unwrap()
            .into_iter()
            .filter(|p| p.is_irreducible().unwrap())
            .collect();
        assert_eq!(enumerate(PartitionKind::NcIrreducible, n).unwrap(), direct);
    }
}

#[test]
fn stirling_reproduces_falling_factorial() {
    for j in 0..=9usize {
        for x in 0..=j as i64 {
            let poly: Scalar = (0..=j)
                .map(|i| stirling_first(j, i).unwrap() * scalar::pow(&int(x), i))
                .sum();
            let falling: i64 = (0..j as i64).map(|m| x - m).product();
            assert_eq!(poly, int(falling), "j = {j}, x = {x}");
        }
    }
}

fn flatten(t: &RootedTree, parent: Option<usize>, out: &mut Vec<Option<usize>>) {
    let me = out.len();
    out.push(parent);
    for c in &t.children {
        flatten(c, Some(me), out);
    }
}

/// Counts strictly order-preserving surjections onto `{1..k}` by listing every map.
fn brute_omega(t: &RootedTree) -> Scalar {
    let mut parents = Vec::new();
    flatten(t, None, &mut parents);
    let p = parents.len();
    let mut total = Scalar::zero();
    for k in 1..=p {
        let mut count = 0i64;
        let mut f = vec![0usize; p];
        loop {
            let strict = (0..p).all(|i| parents[i].is_none_or(|q| f[q] < f[i]));
            let onto = (0..k).all(|v| f.contains(&v));
            if strict && onto {
                count += 1;
            }
            let mut i = 0;
            while i < p && f[i] == k - 1 {
                f[i] = 0;
                i += 1;
            }
            if i == p {
                break;
            }
            f[i] += 1;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        total += scalar::frac(sign * count, k as i64);
    }
    total
}

#[test]
fn omega_matches_brute_force() {
    for n in 1..=7 {
        for p in enumerate(PartitionKind::NcIrreducible, n).unwrap() {
            let forest = p.nesting_forest().unwrap();
            let tree = &forest.trees()[0];
            assert_eq!(tree.omega_weight(), brute_omega(tree), "{p}");
        }
    }
    assert_eq!(RootedTree::chain(2).omega_weight(), scalar::frac(-1, 2));
}

proptest! {
    #[test]
    fn rgs_round_trip(rgs in prop::collection::vec(0usize..4, 1..9)) {
        let mut fixed = Vec::new();
        let mut top = 0;
        for r in rgs {
            let v = r.min(top);
            if v == top { top += 1; }
            fixed.push(v);
        }
        let p = SetPartition::from_rgs(&fixed);
        prop_assert_eq!(p.rgs(), fixed);
        let q: SetPartition = p.to_string().parse().unwrap();
        prop_assert_eq!(q, p);
    }
}
