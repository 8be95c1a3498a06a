//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every value is an exact integer comparison.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use orbk::arith::IntCyc;
use orbk::chartable::CharacterTable;
use orbk::cocycle::{h2_group, Cocycle};
use orbk::group::{named, FiniteGroup};
use orbk::series::{hyperbolic_sectors, sector_sum, symprod_chi, symprod_report, weighted_projective_sectors};
use orbk::topology::{
    chi_orb_cells, cyclic_decomposition, sector_decomposition, twisted_k_ranks, BredonComplex, Coefficients,
    GSimplicialComplex, KRank, SimplicialComplex,
};
use orbk::twisted::{rank_r_alpha, TRRing, TwistedCharacterTable};
use orbk::verify::{fixture_complex, fixture_group, fixture_sectors, GEOMETRIC};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, left: T, right: T) -> Result<(), String> {
    ensure(left == right, || format!("{what}: {left:?} != {right:?}"))
}

fn e(err: orbk::Error) -> String {
    err.to_string()
}

/// Regularized complexes with at most 24 group elements: the bundled
/// fixtures, polygons under dihedral groups and the tetrahedron boundary
/// under its rotation group.
fn collapse_fixtures() -> Result<Vec<(String, GSimplicialComplex)>, String> {
    let mut out = Vec::new();
    for fx in GEOMETRIC {
        out.push((fx.name.to_string(), fixture_complex(fx.group, fx.complex).map_err(e)?));
    }
    for n in 3..=6 {
        let g = Arc::new(named::dihedral(n).map_err(e)?);
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        out.push((format!("polygon-{n}/dihedral"), action(g, n, &edges)?));
    }
    let faces: Vec<Vec<usize>> = (0..4).map(|i| (0..4).filter(|&j| j != i).collect()).collect();
    out.push(("tetrahedron/a4".into(), action(Arc::new(named::alternating(4).map_err(e)?), 4, &faces)?));
    Ok(out)
}

/// `group` permutes the `n` vertices exactly as its generating permutations do.
fn action(group: Arc<FiniteGroup>, n: usize, maximal: &[Vec<usize>]) -> Result<GSimplicialComplex, String> {
    let labels = (0..n).map(|i| i.to_string()).collect();
    let complex = SimplicialComplex::new(labels, maximal).map_err(e)?;
    let images = group.permutations().expect("permutation group").generators.clone();
    GSimplicialComplex::from_generator_images(group, complex, &images).map_err(e)?.regularize().map_err(e)
}

fn twists(g: &Arc<FiniteGroup>) -> Result<Vec<Cocycle>, String> {
    Ok(h2_group(g, 2).map_err(e)?.classes().map_err(e)?.to_vec())
}

/// Pointwise product of two functions on the group.
fn times(a: &[IntCyc], b: &[IntCyc]) -> Vec<IntCyc> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn criterion_1() -> Outcome {
    let g = fixture_group("v4").map_err(e)?;
    let ring = TRRing::new(&g, 2).map_err(e)?;
    eq("total rank", ring.total_rank(), 5)?;
    eq("graded ranks", ring.ranks(), vec![4, 1])?;
    // Oracle: multiply character values and decompose with the ordinary table.
    let table = CharacterTable::new(&g).map_err(e)?;
    let reps = table.classes().representatives().to_vec();
    let on_classes = |f: &[IntCyc]| reps.iter().map(|&r| f[r].clone()).collect::<Vec<_>>();
    let linear = &ring.tables()[0];
    let mu = &ring.tables()[1].rows()[0];
    eq("twisted degrees", ring.tables()[1].degrees(), vec![2])?;
    let trivial =
        linear.rows().iter().position(|r| r.iter().all(|v| v.to_integer() == Some(1))).ok_or("no trivial character")?;
    for (i, chi) in linear.rows().iter().enumerate() {
        let mut unit = vec![0; 4];
        unit[trivial] = 1;
        let square = linear.decompose(&times(chi, chi)).map_err(e)?;
        eq("x² = 1 by values", square, unit.clone())?;
        eq("x² = 1 in the ring", ring.product(0, 0).constants[i][i].clone(), unit)?;
        let absorbed = ring.tables()[1].decompose(&times(chi, mu)).map_err(e)?;
        eq("xμ = μ by values", absorbed, vec![1])?;
        eq("xμ = μ in the ring", ring.product(0, 1).constants[i][0].clone(), vec![1])?;
    }
    let mu2 = table.decompose(&on_classes(&times(mu, mu))).map_err(e)?;
    eq("μ² = 1 + x + y + xy by values", mu2, vec![1, 1, 1, 1])?;
    let block = ring.product(1, 1);
    eq("μ² lands in the untwisted part", block.target, 0)?;
    eq("μ² = 1 + x + y + xy in the ring", block.constants[0][0].clone(), vec![1, 1, 1, 1])?;
    Ok("TR(Z/2×Z/2) at m=2 has ranks [4, 1], total 5; x²=y²=1, xμ=yμ=μ, μ²=1+x+y+xy".into())
}

/// Spin characters of the double cover of `S_n`: a strict partition `λ`
/// gives one when `n − ℓ(λ)` is even and two otherwise.
fn spin_character_count(n: usize) -> usize {
    fn strict(n: usize, max: usize, len: usize, total: usize, out: &mut usize) {
        if n == 0 {
            *out += if (total - len).is_multiple_of(2) { 1 } else { 2 };
            return;
        }
        for part in (1..=n.min(max)).rev() {
            strict(n - part, part - 1, len + 1, total, out);
        }
    }
    let mut out = 0;
    strict(n, n, 0, n, &mut out);
    out
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (name, n) in [("s4", 4), ("s5", 5)] {
        let g = fixture_group(name).map_err(e)?;
        let start = Instant::now();
        let h = h2_group(&g, 2).map_err(e)?;
        let secs = start.elapsed().as_secs_f64();
        eq(&format!("H²(S{n}, Z/2) invariant factors"), h.invariant_factors(), vec![2])?;
        ensure(secs < 120.0, || format!("S{n} solve took {secs:.1} s"))?;
        let alpha = h.class(1).map_err(e)?;
        let scan = alpha.regular_classes().len();
        let table = TwistedCharacterTable::new(alpha).map_err(e)?.len();
        eq("regular class scan vs extension table", scan, table)?;
        eq("rank R_α vs spin character count", rank_r_alpha(alpha).map_err(e)?, spin_character_count(n))?;
        notes.push(format!("S{n}: H²≅Z/2, rank R_α = {scan} by scan and by table"));
    }
    Ok(notes.join("; "))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for (p, q) in [(2, 3), (3, 5), (5, 7)] {
        let file = sector_sum(&fixture_sectors(&format!("cp_{p}_{q}")).map_err(e)?).map_err(e)?;
        let built = sector_sum(&weighted_projective_sectors(p, q)).map_err(e)?;
        eq("fixture vs generated sectors", file, built)?;
        eq("χ_orb", file.euler, (p + q) as i64)?;
        eq("ranks", file.krank, KRank::new(p + q, 0))?;
        notes.push(format!("CP({p},{q}) → ({}, 0)", p + q));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Outcome {
    let cases: [(&str, usize, &[usize]); 4] = [
        ("hyperbolic_g2_3_3_3", 2, &[3, 3, 3]),
        ("hyperbolic_g0_2_3_7", 0, &[2, 3, 7]),
        ("hyperbolic_g1_2_2", 1, &[2, 2]),
        ("hyperbolic_g2_3_3_5", 2, &[3, 3, 5]),
    ];
    let mut notes = Vec::new();
    for (name, genus, v) in cases {
        let expected = KRank::new(v.iter().map(|x| x - 1).sum::<usize>() + 2, 2 * genus);
        let file = sector_sum(&fixture_sectors(name).map_err(e)?).map_err(e)?.krank;
        let built = sector_sum(&hyperbolic_sectors(genus, v)).map_err(e)?.krank;
        eq(name, file, expected)?;
        eq(name, built, expected)?;
        notes.push(format!("(g={genus}; {v:?}) → ({}, {})", expected.k0, expected.k1));
    }
    Ok(notes.join(", "))
}

/// Coefficients of `Π_k (1 − q^k)^{−c}` up to `q^n`, by generalized binomial series.
fn partition_oracle(c: i64, n: usize) -> Vec<i128> {
    let mut acc = vec![0i128; n + 1];
    acc[0] = 1;
    for k in 1..=n {
        // (1 − x)^{−c} = Σ_j [c(c+1)…(c+j−1)/j!] x^j
        let mut factor = vec![0i128; n + 1];
        let mut coeff = 1i128;
        for j in 0..=n / k {
            factor[j * k] = coeff;
            coeff = coeff * (c as i128 + j as i128) / (j as i128 + 1);
        }
        let mut next = vec![0i128; n + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in factor.iter().enumerate().take(n + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

const CHIS: [i64; 5] = [-2, 0, 1, 2, 3];

fn criterion_5a() -> Outcome {
    for c in CHIS {
        let oracle = partition_oracle(c, 5);
        for (n, &expected) in oracle.iter().enumerate() {
            eq(&format!("untwisted n={n} χ={c}"), symprod_chi(n, c, false).map_err(e)? as i128, expected)?;
        }
    }
    Ok("untwisted symmetric products equal the coefficients of Π(1−q^k)^{−χ} for n ≤ 5, χ ∈ {−2,0,1,2,3}".into())
}

fn criterion_5b() -> Outcome {
    // Oracle for the brute force at χ = 1: a point's symmetric product is a
    // point, whose twisted K-theory has one generator per spin character.
    for n in [4, 5] {
        eq(
            "brute force on a point vs spin characters",
            symprod_chi(n, 1, true).map_err(e)? as usize,
            spin_character_count(n),
        )?;
    }
    let mut lines = Vec::new();
    let mut mismatches = 0;
    for c in CHIS {
        for row in symprod_report(c, 5).map_err(e)?.into_iter().filter(|r| r.n >= 4) {
            let verdict = if row.twisted_match { "agree" } else { "DIFFER" };
            mismatches += usize::from(!row.twisted_match);
            lines.push(format!(
                "      χ={c:>2} n={}: brute force {}, product formula {} ({verdict})",
                row.n, row.twisted, row.product_coefficient
            ));
        }
    }
    let table = lines.join("\n");
    if mismatches == 0 {
        Ok(format!("twisted symmetric products agree with the product formula at n = 4, 5\n{table}"))
    } else {
        Err(format!("{mismatches} of {} twisted coefficients differ from the product formula\n{table}", lines.len()))
    }
}

fn criterion_6() -> Outcome {
    let fixtures = collapse_fixtures()?;
    let mut count = 0;
    for (name, x) in &fixtures {
        ensure(x.group().order() <= 24, || format!("{name}: group too large"))?;
        let sectors = sector_decomposition(x).map_err(e)?;
        let cyclic = cyclic_decomposition(x).map_err(e)?;
        eq(&format!("{name}: cyclic vs element-indexed total"), cyclic.total, sectors.krank().total())?;
        for (i, alpha) in twists(x.group())?.iter().enumerate() {
            let twisted = twisted_k_ranks(x, alpha).map_err(e)?.krank;
            let bredon = BredonComplex::new(x, Coefficients::Twisted(alpha)).map_err(e)?.krank();
            eq(&format!("{name} twist {i}: Bredon vs decomposition"), bredon, twisted)?;
            eq(&format!("{name} twist {i}: cells vs k0 − k1"), chi_orb_cells(x, alpha).map_err(e)?, twisted.euler())?;
            if alpha.is_zero() {
                eq(&format!("{name}: untwisted vs sectors"), twisted, sectors.krank())?;
            }
            count += 1;
        }
    }
    Ok(format!(
        "Bredon = decomposition = sectors, cells = k0 − k1, cyclic = element totals on {} spaces, {count} twists",
        fixtures.len()
    ))
}

fn criterion_7() -> Outcome {
    let fixtures = collapse_fixtures()?;
    for (name, x) in &fixtures {
        let zero = Cocycle::zero(x.group().clone(), 2);
        let quotient = x.full_action().quotient().map_err(e)?.euler();
        let resolution = sector_decomposition(x).map_err(e)?.resolution_euler();
        eq(&format!("{name}: χ_orb vs χ(X/G) + χ(Σ̃X)"), chi_orb_cells(x, &zero).map_err(e)?, quotient + resolution)?;
    }
    Ok(format!("χ_orb(X) = χ(X/G ⊔ Σ̃X) on {} spaces", fixtures.len()))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for (group, complex, expected) in [("v4", "point_v4", 5), ("hexagon_v4", "hexagon_v4", 6)] {
        let x = fixture_complex(group, complex).map_err(e)?;
        let mut total = 0;
        for alpha in twists(x.group())? {
            total += twisted_k_ranks(&x, &alpha).map_err(e)?.krank.euler();
        }
        let quotient = x.full_action().quotient().map_err(e)?.euler();
        let space = x.complex().euler();
        eq(&format!("{complex}: Σ_α χ"), total, 6 * quotient - space)?;
        eq(&format!("{complex}: value"), total, expected)?;
        notes.push(format!("{complex}: {total} = 6·{quotient} − {space}"));
    }
    Ok(notes.join(", "))
}

fn criterion_9() -> Outcome {
    let fixtures = collapse_fixtures()?;
    for (name, x) in &fixtures {
        let g = x.group();
        let zero = Cocycle::zero(g.clone(), 2);
        let full = x.full_action();
        let quotient = full.quotient().map_err(e)?.betti();
        let sectors = sector_decomposition(x).map_err(e)?;
        eq(
            &format!("{name}: α=0 decomposition vs sectors"),
            twisted_k_ranks(x, &zero).map_err(e)?.krank,
            sectors.krank(),
        )?;
        let bredon0 = BredonComplex::new(x, Coefficients::Twisted(&zero)).map_err(e)?;
        eq(&format!("{name}: α=0 Bredon vs sectors"), bredon0.krank(), sectors.krank())?;
        eq(&format!("{name}: g=1 sector vs X/G"), sectors.untwisted().betti.clone(), quotient.clone())?;
        eq(&format!("{name}: X/G vs invariant homology"), full.invariant_betti().map_err(e)?, quotient.clone())?;
        let constant = BredonComplex::new(x, Coefficients::Constant).map_err(e)?;
        eq(&format!("{name}: constant Bredon vs X/G"), constant.cohomology(), quotient)?;
        let mut twisted = TwistedCharacterTable::new(&zero).map_err(e)?.degrees();
        let mut ordinary = CharacterTable::new(g).map_err(e)?.degrees();
        twisted.sort_unstable();
        ordinary.sort_unstable();
        eq(&format!("{name}: α=0 twisted table vs character table"), twisted, ordinary)?;
        eq(&format!("{name}: α=0 regular classes"), zero.regular_classes().len(), g.conjugacy_classes().len())?;
    }
    Ok(format!(
        "α=0 reduces to the untwisted theory, g=1 sector = X/G, constant Bredon = H*(X/G) on {} spaces",
        fixtures.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5a", criterion_5a),
        ("5b", criterion_5b),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
