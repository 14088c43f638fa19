//! Acceptance suite: one PASS/FAIL line per criterion, each value checked
//! against an independent brute-force oracle or a published constant.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sugeno::congruence::{is_congruence, EquivalenceRelation};
use sugeno::{
    check_comonotone_maxitive, check_idempotent, check_median_decomposable, check_min_homogeneous,
    enumerate_aggregation_tables, enumerate_capacities, is_compatible_all, map_through, pushforward_capacity,
    recognize_sugeno, sugeno_eval, sugeno_table, truncated_sum_table, verify_proposition1, verify_theorem1,
    verify_theorem2, Capacity, Chain, ChainValue, Epimorphism, FiniteChain, Formula, ScoreVector, SubsetId,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- brute-force oracles on level indices ----

/// `max_t min(t, m({i : x_i >= t}))` over every level `t`.
fn oracle_su(m: &[usize], x: &[usize], levels: usize) -> usize {
    (0..levels)
        .map(|t| {
            let mask = x
                .iter()
                .enumerate()
                .filter(|(_, &v)| v >= t)
                .fold(0, |acc, (i, _)| acc | 1 << i);
            t.min(m[mask])
        })
        .max()
        .unwrap()
}

/// Every monotone set function with `m(∅) = 0`, `m(N) = top`, by exhaustive product.
fn oracle_capacities(n: usize, levels: usize) -> Vec<Vec<usize>> {
    let size = 1usize << n;
    let total = levels.pow(size as u32);
    (0..total)
        .filter_map(|code| {
            let m: Vec<usize> = (0..size).map(|s| code / levels.pow(s as u32) % levels).collect();
            let ok = m[0] == 0
                && m[size - 1] == levels - 1
                && (0..size).all(|s| (0..n).all(|i| s & (1 << i) != 0 || m[s] <= m[s | 1 << i]));
            ok.then_some(m)
        })
        .collect()
}

fn grid(n: usize, levels: usize) -> Vec<Vec<usize>> {
    (0..levels.pow(n as u32))
        .map(|i| (0..n).rev().map(|d| i / levels.pow(d as u32) % levels).collect())
        .collect()
}

fn oracle_table(m: &[usize], n: usize, levels: usize) -> Vec<usize> {
    grid(n, levels).iter().map(|x| oracle_su(m, x, levels)).collect()
}

/// Class maps of all interval partitions of a `levels`-chain.
fn oracle_interval_partitions(levels: usize) -> Vec<Vec<usize>> {
    (0..1u32 << (levels - 1))
        .map(|cuts| {
            let mut class = vec![0; levels];
            for l in 1..levels {
                class[l] = class[l - 1] + usize::from(cuts & (1 << (l - 1)) != 0);
            }
            class
        })
        .collect()
}

fn oracle_compatible(entries: &[usize], n: usize, levels: usize, partitions: &[Vec<usize>]) -> bool {
    let points = grid(n, levels);
    partitions.iter().all(|class| {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        points.iter().zip(entries).all(|(x, &v)| {
            let key: Vec<usize> = x.iter().map(|&l| class[l]).collect();
            *seen.entry(key).or_insert(class[v]) == class[v]
        })
    })
}

fn oracle_is_aggregation(entries: &[usize], n: usize, levels: usize) -> bool {
    let points = grid(n, levels);
    let index = |x: &[usize]| x.iter().fold(0, |acc, &d| acc * levels + d);
    entries[0] == 0
        && entries[entries.len() - 1] == levels - 1
        && points.iter().all(|x| {
            (0..n).all(|i| {
                x[i] + 1 >= levels || {
                    let mut y = x.clone();
                    y[i] += 1;
                    entries[index(x)] <= entries[index(&y)]
                }
            })
        })
}

fn capacity_of(chain: &FiniteChain, n: usize, m: &[usize]) -> Capacity {
    let values = m.iter().map(|&l| chain.level(l).unwrap()).collect();
    Capacity::new(Chain::Finite(chain.clone()), n, values).unwrap()
}

fn unit(s: &str) -> ChainValue {
    Chain::Unit.parse_value(s).unwrap()
}

// ---- criteria ----

fn example2() -> Outcome {
    let thirds = ["0", "1/3", "1/3", "2/3", "1/3", "2/3", "2/3", "1"];
    let m = Capacity::new(Chain::Unit, 3, thirds.iter().map(|s| unit(s)).collect()).map_err(|e| e.to_string())?;
    let x = ScoreVector::parse(&Chain::Unit, "0.54,0.7071,3/7").map_err(|e| e.to_string())?;
    let value = sugeno_eval(&m, &x, Formula::Sorted).map_err(|e| e.to_string())?;
    ensure(value == unit("27/50"), || format!("Su_m(x) = {value}, expected 0.54"))?;
    let cases = [
        ("decimal-half-up", "0.5", ["0.5", "0.7", "0.4"], ["0.3", "0.7"]),
        ("centesimal-half-up", "0.54", ["0.54", "0.71", "0.43"], ["0.33", "0.67"]),
        (
            "linguistic-bmge",
            "medium",
            ["medium", "good", "medium"],
            ["medium", "medium"],
        ),
    ];
    for (name, expected, mapped, by_card) in cases {
        let phi = Epimorphism::builtin(name).map_err(|e| e.to_string())?;
        let r = map_through(&phi, &m, &x).map_err(|e| e.to_string())?;
        let got: Vec<String> = r.mapped_input.coords().iter().map(ToString::to_string).collect();
        ensure(got == mapped, || format!("{name}: φ(x) = {got:?}"))?;
        let singles = r.pushed.value(SubsetId::from_mask(0b010)).to_string();
        let pairs = r.pushed.value(SubsetId::from_mask(0b101)).to_string();
        ensure([singles.as_str(), pairs.as_str()] == by_card, || {
            format!("{name}: φ(m) on singletons/pairs = {singles}/{pairs}")
        })?;
        ensure(
            r.mapped_value.to_string() == expected && r.pushed_value.to_string() == expected,
            || {
                format!(
                    "{name}: φ(Su_m(x)) = {}, Su_φ(m)(φ(x)) = {}",
                    r.mapped_value, r.pushed_value
                )
            },
        )?;
    }
    Ok("Su_m(x) = 0.54; decimal 0.5, centesimal 0.54, linguistic medium".into())
}

fn random_unit(rng: &mut ChaCha8Rng) -> BigRational {
    let d = rng.gen_range(1..=1000i64);
    BigRational::new(rng.gen_range(0..=d).into(), d.into())
}

fn formula_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let instances = 1000;
    for _ in 0..instances {
        let n = rng.gen_range(1..=4);
        let size = 1usize << n;
        let mut m = vec![BigRational::from_integer(0.into()); size];
        for s in 1..size - 1 {
            let floor = (0..n)
                .filter(|i| s & (1 << i) != 0)
                .map(|i| m[s & !(1 << i)].clone())
                .max()
                .unwrap();
            m[s] = floor.max(random_unit(&mut rng));
        }
        m[size - 1] = BigRational::from_integer(1.into());
        let x: Vec<BigRational> = (0..n).map(|_| random_unit(&mut rng)).collect();
        // Eq. (1) with t over {0} ∪ {x_i}
        let oracle = std::iter::once(BigRational::from_integer(0.into()))
            .chain(x.iter().cloned())
            .map(|t| {
                let mask = x
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v >= t)
                    .fold(0, |acc, (i, _)| acc | 1 << i);
                t.min(m[mask].clone())
            })
            .max()
            .unwrap();
        let to_value = |q: &BigRational| ChainValue::Unit(sugeno::UnitValue::new(q.clone()).unwrap());
        let cap = Capacity::new(Chain::Unit, n, m.iter().map(to_value).collect()).map_err(|e| e.to_string())?;
        let xv = ScoreVector::new(Chain::Unit, x.iter().map(to_value).collect()).map_err(|e| e.to_string())?;
        for f in Formula::ALL {
            let v = sugeno_eval(&cap, &xv, f).map_err(|e| e.to_string())?;
            ensure(v == to_value(&oracle), || {
                format!("{} gives {v} at x = {xv}, oracle {oracle}", f.name())
            })?;
        }
    }
    let mut finite = 0;
    for levels in 2..=4 {
        let chain = FiniteChain::numbered(levels).unwrap();
        for n in 1..=2 {
            let caps = oracle_capacities(n, levels);
            let lib = enumerate_capacities(n, &chain).map_err(|e| e.to_string())?.count();
            ensure(lib == caps.len(), || {
                format!("{lib} capacities at ({n},{levels}), oracle {}", caps.len())
            })?;
            for m in &caps {
                let cap = capacity_of(&chain, n, m);
                for x in grid(n, levels) {
                    let xv = ScoreVector::from_levels(&chain, &x);
                    let expected = oracle_su(m, &x, levels);
                    for f in Formula::ALL {
                        let v = sugeno_eval(&cap, &xv, f).map_err(|e| e.to_string())?;
                        ensure(v.level_index() == Some(expected), || {
                            format!("{} gives {v} at {x:?} for m = {m:?}, oracle {expected}", f.name())
                        })?;
                    }
                    finite += 1;
                }
            }
        }
    }
    Ok(format!(
        "{instances} random unit instances, {finite} exhaustive finite instances, 3 formulas each"
    ))
}

fn theorem1() -> Outcome {
    let mut summary = Vec::new();
    for (n, levels) in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 2)] {
        let chain = FiniteChain::numbered(levels).unwrap();
        let tables: Vec<Vec<usize>> = enumerate_aggregation_tables(n, &chain, 16)
            .map_err(|e| e.to_string())?
            .map(|t| t.entries().to_vec())
            .collect();
        ensure(tables.windows(2).all(|w| w[0] < w[1]), || {
            "tables not strictly ordered".into()
        })?;
        ensure(tables.iter().all(|t| oracle_is_aggregation(t, n, levels)), || {
            "invalid table".into()
        })?;
        let grid_len = levels.pow(n as u32);
        if levels.pow(grid_len as u32) <= 1 << 20 {
            let all = (0..levels.pow(grid_len as u32))
                .filter(|code| {
                    let e: Vec<usize> = (0..grid_len)
                        .rev()
                        .map(|d| code / levels.pow(d as u32) % levels)
                        .collect();
                    oracle_is_aggregation(&e, n, levels)
                })
                .count();
            ensure(all == tables.len(), || {
                format!("({n},{levels}): {} tables, oracle {all}", tables.len())
            })?;
        }
        let partitions = oracle_interval_partitions(levels);
        let compatible: BTreeSet<&Vec<usize>> = tables
            .iter()
            .filter(|t| oracle_compatible(t, n, levels, &partitions))
            .collect();
        let sugeno: BTreeSet<Vec<usize>> = oracle_capacities(n, levels)
            .iter()
            .map(|m| oracle_table(m, n, levels))
            .collect();
        let equal = compatible.len() == sugeno.len() && compatible.iter().all(|t| sugeno.contains(*t));
        ensure(equal, || {
            format!(
                "({n},{levels}): {} compatible vs {} Sugeno tables",
                compatible.len(),
                sugeno.len()
            )
        })?;
        let r = verify_theorem1(n, &chain, 16).map_err(|e| e.to_string())?;
        ensure(
            r.holds() && r.compatible_count == sugeno.len() && r.sugeno_count == sugeno.len(),
            || format!("({n},{levels}): library report {r:?}"),
        )?;
        if (n, levels) == (2, 3) {
            ensure(sugeno.len() == 9, || format!("{} Sugeno tables at (2,3)", sugeno.len()))?;
        }
        summary.push(format!("({n},{levels}) {}/{}", sugeno.len(), tables.len()));
    }
    Ok(format!("compatible = Sugeno, sets/tables: {}", summary.join(" ")))
}

/// Restricted growth strings: every set partition of `0..k` exactly once.
fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0; k];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for c in 0..=max + 1 {
            rgs[i] = c;
            rec(i + 1, max.max(c), rgs, out);
        }
    }
    if k > 0 {
        rec(1, 0, &mut rgs, &mut out);
    }
    out
}

fn oracle_congruence(class: &[usize]) -> bool {
    let k = class.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .filter(|&(a, b)| class[a] == class[b])
        .collect();
    pairs.iter().all(|&(a, b)| {
        pairs
            .iter()
            .all(|&(c, d)| class[a.max(c)] == class[b.max(d)] && class[a.min(c)] == class[b.min(d)])
    })
}

fn oracle_interval(class: &[usize]) -> bool {
    (0..class.len()).all(|a| (a..class.len()).all(|b| class[a] != class[b] || (a..=b).all(|c| class[c] == class[a])))
}

fn bell(k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 1..k {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

fn proposition1() -> Outcome {
    for k in 2..=5 {
        let chain = FiniteChain::numbered(k).unwrap();
        let parts = set_partitions(k);
        ensure(parts.len() == bell(k), || {
            format!("{} partitions of {k}, Bell {}", parts.len(), bell(k))
        })?;
        let mut congruences = 0;
        for class in &parts {
            let r = EquivalenceRelation::new(&chain, class).map_err(|e| e.to_string())?;
            let closure = is_congruence(&r).is_ok();
            let interval = r.classes_are_intervals();
            let oracle = oracle_congruence(class);
            ensure(
                closure == interval && closure == oracle && oracle_interval(class) == oracle,
                || format!("{class:?}: closure {closure}, interval {interval}, oracle {oracle}"),
            )?;
            congruences += usize::from(oracle);
        }
        ensure(congruences == 1 << (k - 1), || {
            format!("{congruences} congruences on a {k}-chain")
        })?;
        let r = verify_proposition1(&chain).map_err(|e| e.to_string())?;
        ensure(
            r.holds() && r.relations_total == bell(k) && r.congruences == congruences,
            || format!("{r:?}"),
        )?;
        if k == 4 {
            ensure(
                r.relations_total == 15 && r.congruences == 8 && r.interval_partitions == 8,
                || format!("{r:?}"),
            )?;
        }
    }
    Ok("8 of 15 on the 4-chain; closure, interval and oracle agree up to size 5".into())
}

fn theorem2() -> Outcome {
    let (n, levels) = (2, 3);
    let chain = FiniteChain::numbered(levels).unwrap();
    let partitions = oracle_interval_partitions(levels);
    let caps = oracle_capacities(n, levels);
    let mut forward = 0;
    for m in &caps {
        for class in &partitions {
            let blocks = class[levels - 1] + 1;
            let pushed: Vec<usize> = m.iter().map(|&v| class[v]).collect();
            for x in grid(n, levels) {
                let lhs = class[oracle_su(m, &x, levels)];
                let mapped: Vec<usize> = x.iter().map(|&v| class[v]).collect();
                let rhs = oracle_su(&pushed, &mapped, blocks);
                ensure(lhs == rhs, || {
                    format!("m = {m:?}, partition {class:?}, x = {x:?}: {lhs} vs {rhs}")
                })?;
                forward += 1;
            }
        }
    }
    ensure(forward == 9 * 4 * 9, || format!("{forward} forward checks"))?;
    let sugeno: BTreeSet<Vec<usize>> = caps.iter().map(|m| oracle_table(m, n, levels)).collect();
    let points = grid(n, levels);
    let mut refuted = 0;
    let mut others = 0;
    for t in enumerate_aggregation_tables(n, &chain, 16).map_err(|e| e.to_string())? {
        let e = t.entries();
        if sugeno.contains(e) {
            continue;
        }
        others += 1;
        // some quotient admits no aggregation function B with φ∘A = B∘φ
        let fails = partitions.iter().any(|class| {
            let blocks = class[levels - 1] + 1;
            let mut b: HashMap<Vec<usize>, usize> = HashMap::new();
            let defined = points.iter().zip(e).all(|(x, &v)| {
                let key: Vec<usize> = x.iter().map(|&l| class[l]).collect();
                *b.entry(key).or_insert(class[v]) == class[v]
            });
            !defined || {
                let entries: Vec<usize> = grid(n, blocks).iter().map(|y| b[y]).collect();
                !oracle_is_aggregation(&entries, n, blocks)
            }
        });
        refuted += usize::from(fails);
    }
    ensure(others == 127 && refuted == others, || {
        format!("{refuted} of {others} non-Sugeno tables refuted")
    })?;
    let r = verify_theorem2(n, &chain, 16).map_err(|e| e.to_string())?;
    ensure(
        r.holds() && r.forward_checks == forward && r.converse_refuted == refuted && r.epimorphisms == 4,
        || format!("library report {r:?}"),
    )?;
    Ok(format!(
        "{forward} forward checks, {refuted}/{others} non-Sugeno tables refuted"
    ))
}

fn axioms() -> Outcome {
    let mut tables = 0;
    for levels in 2..=4 {
        let chain = FiniteChain::numbered(levels).unwrap();
        for n in 1..=3 {
            for m in enumerate_capacities(n, &chain).map_err(|e| e.to_string())? {
                let t = sugeno_table(&m, &chain, 1 << 20).map_err(|e| e.to_string())?;
                for (name, r) in [
                    ("idempotency", check_idempotent(&t)),
                    ("min-homogeneity", check_min_homogeneous(&t)),
                    ("comonotone maxitivity", check_comonotone_maxitive(&t)),
                    ("median decomposability", check_median_decomposable(&t)),
                ] {
                    ensure(r.is_ok(), || {
                        format!("{name} fails for {:?}: {}", t.entries(), r.unwrap_err())
                    })?;
                }
                tables += 1;
            }
        }
    }
    let c3 = FiniteChain::numbered(3).unwrap();
    let t = truncated_sum_table(&c3, 2).map_err(|e| e.to_string())?;
    let i = check_min_homogeneous(&t)
        .err()
        .or_else(|| check_comonotone_maxitive(&t).err());
    let ii = recognize_sugeno(&t).err();
    let iii = check_median_decomposable(&t).err();
    let compat = is_compatible_all(&t).map_err(|e| e.to_string())?.err();
    ensure(i.is_some() && ii.is_some() && iii.is_some() && compat.is_some(), || {
        format!(
            "truncated sum: i) {:?} ii) {:?} iii) {:?} compatible {:?}",
            i.is_some(),
            ii.is_some(),
            iii.is_some(),
            compat.is_some()
        )
    })?;
    for cx in [i, ii, iii, compat].into_iter().flatten() {
        ensure(cx.reproduces(&t), || format!("witness does not reproduce: {cx}"))?;
    }
    Ok(format!(
        "{tables} Sugeno tables pass all four; truncated sum fails i), ii), iii) and compatibility"
    ))
}

fn round_trips() -> Outcome {
    let mut count = 0;
    for levels in 2..=5 {
        let chain = FiniteChain::numbered(levels).unwrap();
        for n in 1..=4 {
            if levels.pow(n as u32) > 256 {
                continue;
            }
            let identity = Epimorphism::identity(&Chain::Finite(chain.clone()));
            for m in enumerate_capacities(n, &chain).map_err(|e| e.to_string())? {
                let t = sugeno_table(&m, &chain, 1 << 20).map_err(|e| e.to_string())?;
                let back = recognize_sugeno(&t).map_err(|cx| cx.to_string())?;
                ensure(back == m, || format!("recognize(table(m)) != m at ({n},{levels})"))?;
                let same = pushforward_capacity(&identity, &m).map_err(|e| e.to_string())?;
                ensure(same == m, || "identity pushforward changed m".into())?;
                count += 1;
            }
        }
    }
    let thirds = ["0", "1/3", "1/3", "2/3", "1/3", "2/3", "2/3", "1"];
    let m = Capacity::new(Chain::Unit, 3, thirds.iter().map(|s| unit(s)).collect()).map_err(|e| e.to_string())?;
    let id = Epimorphism::builtin("identity").map_err(|e| e.to_string())?;
    ensure(pushforward_capacity(&id, &m).map_err(|e| e.to_string())? == m, || {
        "unit identity".into()
    })?;
    Ok(format!("{count} capacities round-trip through their tables"))
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 example-2 golden values", Some(Duration::from_secs(1)), example2),
        (
            "2 formula equivalence",
            Some(Duration::from_secs(30)),
            formula_equivalence,
        ),
        (
            "3 compatible = Sugeno, exhaustive",
            Some(Duration::from_secs(120)),
            theorem1,
        ),
        (
            "4 congruences = interval partitions",
            Some(Duration::from_secs(5)),
            proposition1,
        ),
        (
            "5 scale invariance, both directions",
            Some(Duration::from_secs(60)),
            theorem2,
        ),
        ("6 axiom suite", Some(Duration::from_secs(60)), axioms),
        ("7 round-trips", None, round_trips),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        let limit = limit.map_or("none".to_string(), |l| format!("{l:?}"));
        match outcome {
            Ok(detail) => println!("PASS  {name} [{elapsed:.2?}, limit {limit}]: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name} [{elapsed:.2?}, limit {limit}]: {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
