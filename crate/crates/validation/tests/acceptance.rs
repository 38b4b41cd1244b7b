//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use shukla::cyclic::{hc_tower_surjectivity, mod_p_control, CyclicComplexBundle, RelativeCyclic};
use shukla::dga::{base_ring, koszul_resolution, reduction_map, DGAlgebra};
use shukla::filtered::{adic_filtration, graded_comparison};
use shukla::hochschild::HochschildComplex;
use shukla::intlin::{AbelianGroup, Smith, SparseIntMatrix};
use shukla::ktheory::{k_group, k_table};

type Outcome = Result<String, Vec<String>>;

fn b(v: u64) -> BigInt {
    BigInt::from(v)
}

fn zmod(p: u64, n: u32) -> DGAlgebra {
    koszul_resolution(&b(p).pow(n)).unwrap()
}

fn cyclic(order: BigInt) -> AbelianGroup {
    AbelianGroup::from_orders(0, vec![order])
}

fn finish(checked: usize, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(format!("{checked} cells"))
    } else {
        Err(failures)
    }
}

fn absolute_table() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [3u64, 5, 7] {
        for n in 1..=3u32 {
            let bundle = CyclicComplexBundle::new(&zmod(p, n), 2 * p as i64 - 1).unwrap();
            for i in 0..2 * p as i64 {
                let expect = if i % 2 == 1 { AbelianGroup::trivial() } else { cyclic(b(p).pow(n * (i as u32 / 2 + 1))) };
                let got = bundle.homology(i).unwrap();
                checked += 1;
                if got != expect {
                    failures.push(format!("HC_{i}(Z/{p}^{n}) = {got}, expected {expect}"));
                }
            }
        }
    }
    finish(checked, failures)
}

fn relative_table() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [3u64, 5, 7] {
        for n in 2..=3u32 {
            let f = reduction_map(&b(p).pow(n), &b(p).pow(n - 1)).unwrap();
            let rel = RelativeCyclic::new(&f, 2 * p as i64 - 1).unwrap();
            for i in 0..2 * p as i64 {
                let expect = if i % 2 == 1 { AbelianGroup::trivial() } else { cyclic(b(p).pow(i as u32 / 2 + 1)) };
                let got = rel.homology(i).unwrap();
                checked += 1;
                if got != expect {
                    failures.push(format!("relative HC_{i}(Z/{p}^{n}, {p}^{}) = {got}, expected {expect}", n - 1));
                }
            }
        }
    }
    finish(checked, failures)
}

fn hochschild_table() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [3u64, 5, 7] {
        for n in 1..=3u32 {
            let h = HochschildComplex::new(&zmod(p, n), 2 * p as i64 - 1).unwrap();
            for i in 0..2 * p as i64 {
                let expect = if i % 2 == 1 { AbelianGroup::trivial() } else { cyclic(b(p).pow(n)) };
                let got = h.homology(i).unwrap();
                checked += 1;
                if got != expect {
                    failures.push(format!("HH_{i}(Z/{p}^{n}) = {got}, expected {expect}"));
                }
            }
        }
    }
    finish(checked, failures)
}

fn mod_p_table() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [3u64, 5, 7] {
        for n in 1..=3u32 {
            let groups = mod_p_control(p, n, 2 * p as i64 - 1).unwrap();
            for (i, g) in groups.iter().enumerate() {
                checked += 1;
                if *g != cyclic(b(p)) {
                    failures.push(format!("HC_{i}(Z/{p}^{n}; Z/{p}) = {g}, expected Z/{p}"));
                }
            }
        }
    }
    finish(checked, failures)
}

fn tower() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [3u64, 5] {
        for n in 2..=3u32 {
            for i in 0..=2 * p as i64 - 1 {
                let r = hc_tower_surjectivity(p, n, i).unwrap();
                checked += 1;
                if !r.onto {
                    failures.push(format!("HC_{i}(Z/{p}^{n}) -> HC_{i}(Z/{p}^{}) is not onto", n - 1));
                }
            }
        }
    }
    finish(checked, failures)
}

fn k_theory() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for n in 1..=3u32 {
        let table = k_table(7, n).unwrap();
        let expect = [
            cyclic(b(7).pow(n - 1) * 6u32),
            AbelianGroup::trivial(),
            cyclic(b(7).pow(2 * (n - 1)) * 48u32),
            AbelianGroup::trivial(),
        ];
        let got: Vec<AbelianGroup> = table.iter().map(|e| e.group.clone()).collect();
        checked += 1;
        if got != expect {
            failures.push(format!("K_*(Z/7^{n}) = {got:?}, expected {expect:?}"));
        }
    }
    let units = (1..49u64).filter(|x| x % 7 != 0).count() as u64;
    checked += 1;
    if units != 42 || k_group(7, 2, 1).unwrap().order() != Some(b(units)) {
        failures.push(format!("|K_1(Z/49)| does not match {units} units of Z/49"));
    }
    finish(checked, failures)
}

fn graded() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [2u64, 3, 5] {
        for n in 1..=3u32 {
            let r = adic_filtration(p, n).unwrap();
            for q in 0..=3usize {
                for k in (q as i64 + 1) * r.lo() - 1..=1 {
                    let c = graded_comparison(&r, q, k);
                    checked += 1;
                    if !c.passed {
                        failures.push(format!("adic({p}, {n}) q={q} k={k}: {c:?}"));
                    }
                }
            }
        }
    }
    finish(checked, failures)
}

/// Smith form by textbook elimination over `i128`.
fn oracle_invariant_factors(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else { return out };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / a[t][t];
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / a[t][t];
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

fn structural() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [2u64, 3, 5, 7] {
        let top = 2 * p as i64 + 1;
        let mut algebras: Vec<(String, DGAlgebra)> = (1..=3).map(|n| (format!("Z/{p}^{n}"), zmod(p, n))).collect();
        algebras.push(("Z".into(), base_ring()));
        for (name, a) in &algebras {
            let h = HochschildComplex::new(a, top).unwrap();
            for n in 0..=top {
                if n < top {
                    checked += 1;
                    if !(&h.connes_matrix(n + 1) * &h.connes_matrix(n)).is_zero() {
                        failures.push(format!("B∘B != 0 on {name} degree {n}"));
                    }
                }
                checked += 2;
                if !(&h.differential(n) * &h.differential(n + 1)).is_zero() {
                    failures.push(format!("D∘D != 0 on {name} degree {}", n + 1));
                }
                let db = &h.differential(n + 1) * &h.connes_matrix(n);
                let bd = if n > 0 { &h.connes_matrix(n - 1) * &h.differential(n) } else { SparseIntMatrix::zeros(db.rows(), db.cols()) };
                if !(&db + &bd).is_zero() {
                    failures.push(format!("DB + BD != 0 on {name} degree {n}"));
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8usize), rng.gen_range(1..=8usize));
        let density = rng.gen_range(0.1..0.9);
        let dense: Vec<Vec<i128>> = (0..r)
            .map(|_| (0..c).map(|_| if rng.gen_bool(density) { rng.gen_range(-20..=20) } else { 0 }).collect())
            .collect();
        let m = SparseIntMatrix::from_dense(r, c, &dense.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>());
        let s = Smith::of(&m);
        checked += 1;
        let d = &(&s.u * &m) * &s.v;
        let unimodular = s.u.determinant().unwrap().abs() == BigInt::from(1) && s.v.determinant().unwrap().abs() == BigInt::from(1);
        let oracle: Vec<BigInt> = oracle_invariant_factors(dense).into_iter().map(BigInt::from).collect();
        if d != s.d() || !unimodular || s.nonzero_diagonal() != oracle.as_slice() {
            failures.push(format!("SNF trial {trial}: {r}x{c} diagonal {:?}, oracle {:?}", s.nonzero_diagonal(), oracle));
        }
    }
    finish(checked, failures)
}

fn exactness() -> Outcome {
    let (mut checked, mut failures) = (0, Vec::new());
    for p in [3u64, 5, 7] {
        for n in 1..=3u32 {
            let report = CyclicComplexBundle::new(&zmod(p, n), 2 * p as i64 - 1).unwrap().sbi_check().unwrap();
            checked += report.checks.len();
            if let Some(f) = report.first_failure() {
                failures.push(format!("SBI for Z/{p}^{n}: {f:?}"));
            }
            if n >= 2 {
                let f = reduction_map(&b(p).pow(n), &b(p).pow(n - 1)).unwrap();
                let report = RelativeCyclic::new(&f, 2 * p as i64 - 1).unwrap().les_check().unwrap();
                checked += report.checks.len();
                if let Some(f) = report.first_failure() {
                    failures.push(format!("LES for Z/{p}^{n} -> Z/{p}^{}: {f:?}", n - 1));
                }
            }
        }
    }
    finish(checked, failures)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 absolute cyclic homology table", absolute_table),
        ("2 relative cyclic homology table", relative_table),
        ("3 Hochschild homology table", hochschild_table),
        ("4 mod-p control", mod_p_table),
        ("5 tower surjectivity", tower),
        ("6 K-groups of Z/7^n", k_theory),
        ("7 graded comparison of the filtered cyclic bar construction", graded),
        ("8 structural identities and Smith normal form", structural),
        ("9 SBI and long exact sequence exactness", exactness),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(vec![format!("panicked: {}", msg.unwrap_or_default())])
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(summary) => println!("PASS criterion {name} ({summary}, {secs:.2}s)"),
            Err(fails) => {
                failed += 1;
                println!("FAIL criterion {name} ({} failing cells, {secs:.2}s)", fails.len());
                for f in fails {
                    println!("    {f}");
                }
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
