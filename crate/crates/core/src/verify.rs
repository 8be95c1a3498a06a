//! Bundled fixtures and the cross-validation suite.
//!
//! Every check compares two independently computed quantities and records
//! both values, so a failure says which fixture disagreed and by how much.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::cocycle::{h2_group, Cocycle};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::io::{parse_complex, parse_group, parse_sectors};
use crate::par;
use crate::series::{partition_series, sector_sum, symprod_chi, symprod_report, SectorData, SymprodRow};
use crate::topology::{
    chi_orb_cells, cyclic_decomposition, sector_decomposition, twisted_k_ranks, BredonComplex, Coefficients,
    GSimplicialComplex, KRank,
};
use crate::twisted::{rank_r_alpha, TRRing, TwistedCharacterTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Small,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Suite::Small),
            "full" => Ok(Suite::Full),
            other => Err(Error::validation(format!("unknown suite `{other}`; expected small or full"))),
        }
    }
}

/// Group files by name.
pub const GROUPS: &[(&str, &str)] = &[
    ("c2_transposition", include_str!("../fixtures/groups/c2_transposition.json")),
    ("c3", include_str!("../fixtures/groups/c3.json")),
    ("c5", include_str!("../fixtures/groups/c5.json")),
    ("hexagon_d6", include_str!("../fixtures/groups/hexagon_d6.json")),
    ("hexagon_reflection", include_str!("../fixtures/groups/hexagon_reflection.json")),
    ("hexagon_rotation", include_str!("../fixtures/groups/hexagon_rotation.json")),
    ("hexagon_v4", include_str!("../fixtures/groups/hexagon_v4.json")),
    ("s3", include_str!("../fixtures/groups/s3.json")),
    ("s4", include_str!("../fixtures/groups/s4.json")),
    ("s5", include_str!("../fixtures/groups/s5.json")),
    ("trivial", include_str!("../fixtures/groups/trivial.json")),
    ("v4", include_str!("../fixtures/groups/v4.json")),
    ("v4_table", include_str!("../fixtures/groups/v4_table.json")),
];

/// Complex files by name.
pub const COMPLEXES: &[(&str, &str)] = &[
    ("hexagon_d6", include_str!("../fixtures/complexes/hexagon_d6.json")),
    ("hexagon_reflection", include_str!("../fixtures/complexes/hexagon_reflection.json")),
    ("hexagon_rotation", include_str!("../fixtures/complexes/hexagon_rotation.json")),
    ("hexagon_v4", include_str!("../fixtures/complexes/hexagon_v4.json")),
    ("point_c3", include_str!("../fixtures/complexes/point_c3.json")),
    ("point_s3", include_str!("../fixtures/complexes/point_s3.json")),
    ("point_s4", include_str!("../fixtures/complexes/point_s4.json")),
    ("point_trivial", include_str!("../fixtures/complexes/point_trivial.json")),
    ("point_v4", include_str!("../fixtures/complexes/point_v4.json")),
    ("point_v4_table", include_str!("../fixtures/complexes/point_v4_table.json")),
    ("tetrahedron_c2", include_str!("../fixtures/complexes/tetrahedron_c2.json")),
    ("tetrahedron_s4", include_str!("../fixtures/complexes/tetrahedron_s4.json")),
    ("tetrahedron_v4", include_str!("../fixtures/complexes/tetrahedron_v4.json")),
];

/// Sector files by name.
pub const SECTORS: &[(&str, &str)] = &[
    ("cp_2_3", include_str!("../fixtures/sectors/cp_2_3.json")),
    ("cp_3_5", include_str!("../fixtures/sectors/cp_3_5.json")),
    ("cp_5_7", include_str!("../fixtures/sectors/cp_5_7.json")),
    ("hyperbolic_g0_2_3_7", include_str!("../fixtures/sectors/hyperbolic_g0_2_3_7.json")),
    ("hyperbolic_g1_2_2", include_str!("../fixtures/sectors/hyperbolic_g1_2_2.json")),
    ("hyperbolic_g2_3_3_3", include_str!("../fixtures/sectors/hyperbolic_g2_3_3_3.json")),
    ("hyperbolic_g2_3_3_5", include_str!("../fixtures/sectors/hyperbolic_g2_3_3_5.json")),
];

fn lookup(table: &[(&str, &'static str)], name: &str) -> Result<&'static str> {
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::validation(format!("no bundled fixture named `{name}`")))
}

const KINDS: [(&str, &[(&str, &str)]); 3] = [("groups", GROUPS), ("complexes", COMPLEXES), ("sectors", SECTORS)];

/// The fixture files a suite runs on: the bundled set, optionally with some
/// files replaced from a directory laid out as `groups/`, `complexes/` and
/// `sectors/`.
#[derive(Clone, Debug, Default)]
pub struct Library {
    overrides: BTreeMap<(String, String), String>,
}

impl Library {
    pub fn bundled() -> Self {
        Library::default()
    }

    /// Replaces every bundled file that has a same-named counterpart under
    /// `dir`. Files with names the suite does not know are rejected.
    pub fn with_overrides(dir: &Path) -> Result<Self> {
        let io_err = |p: &Path, e: std::io::Error| Error::validation(format!("{}: {e}", p.display()));
        if !dir.is_dir() {
            return Err(Error::validation(format!("{}: not a directory", dir.display())));
        }
        let mut overrides = BTreeMap::new();
        for (kind, table) in KINDS {
            let sub = dir.join(kind);
            if !sub.is_dir() {
                continue;
            }
            for entry in std::fs::read_dir(&sub).map_err(|e| io_err(&sub, e))? {
                let path = entry.map_err(|e| io_err(&sub, e))?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("json") {
                    continue;
                }
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
                lookup(table, &stem).map_err(|_| {
                    Error::validation(format!("{}: no bundled {kind} fixture named `{stem}`", path.display()))
                })?;
                let text = std::fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
                overrides.insert((kind.to_string(), stem), text);
            }
        }
        Ok(Library { overrides })
    }

    /// Names of the replaced files, as `kind/name`.
    pub fn replaced(&self) -> Vec<String> {
        self.overrides.keys().map(|(k, n)| format!("{k}/{n}")).collect()
    }

    fn text(&self, kind: &str, name: &str) -> Result<&str> {
        if let Some(t) = self.overrides.get(&(kind.to_string(), name.to_string())) {
            return Ok(t);
        }
        let table = KINDS.iter().find(|(k, _)| *k == kind).map(|(_, t)| *t).unwrap_or(&[]);
        lookup(table, name)
    }

    pub fn group(&self, name: &str) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(parse_group(self.text("groups", name)?)?))
    }

    /// A complex over one of the groups, regularized.
    pub fn complex(&self, group: &str, complex: &str) -> Result<GSimplicialComplex> {
        let g = self.group(group)?;
        parse_complex(self.text("complexes", complex)?, &g)?.regularize()
    }

    pub fn sectors(&self, name: &str) -> Result<SectorData> {
        parse_sectors(self.text("sectors", name)?)
    }
}

pub fn fixture_group(name: &str) -> Result<Arc<FiniteGroup>> {
    Library::bundled().group(name)
}

pub fn fixture_complex(group: &str, complex: &str) -> Result<GSimplicialComplex> {
    Library::bundled().complex(group, complex)
}

pub fn fixture_sectors(name: &str) -> Result<SectorData> {
    Library::bundled().sectors(name)
}

/// A group acting on a complex, with the extra identities that apply to it.
#[derive(Clone, Copy, Debug)]
pub struct GeometricFixture {
    pub name: &'static str,
    pub group: &'static str,
    pub complex: &'static str,
    pub full_only: bool,
    /// Compare against the barycentric subdivision as well.
    pub subdivide: bool,
}

const fn geo(
    name: &'static str,
    group: &'static str,
    complex: &'static str,
    full_only: bool,
    subdivide: bool,
) -> GeometricFixture {
    GeometricFixture { name, group, complex, full_only, subdivide }
}

pub const GEOMETRIC: &[GeometricFixture] = &[
    geo("hexagon/d6", "hexagon_d6", "hexagon_d6", false, false),
    geo("hexagon/reflection", "hexagon_reflection", "hexagon_reflection", false, true),
    geo("hexagon/rotation", "hexagon_rotation", "hexagon_rotation", false, false),
    geo("hexagon/v4", "hexagon_v4", "hexagon_v4", false, true),
    geo("point/c3", "c3", "point_c3", false, false),
    geo("point/s3", "s3", "point_s3", false, false),
    geo("point/s4", "s4", "point_s4", false, false),
    geo("point/trivial", "trivial", "point_trivial", false, false),
    geo("point/v4", "v4", "point_v4", false, false),
    geo("point/v4-table", "v4_table", "point_v4_table", false, false),
    geo("tetrahedron/c2", "c2_transposition", "tetrahedron_c2", false, true),
    geo("tetrahedron/s4", "s4", "tetrahedron_s4", true, false),
    geo("tetrahedron/v4", "v4", "tetrahedron_v4", false, true),
];

/// Expected sector-sum ranks derived from the orbifold's parameters.
#[derive(Clone, Copy, Debug)]
pub enum SectorShape {
    WeightedProjective { p: usize, q: usize },
    Hyperbolic { genus: usize, cone_orders: &'static [usize] },
}

impl SectorShape {
    pub fn expected(&self) -> KRank {
        match *self {
            SectorShape::WeightedProjective { p, q } => KRank::new(p + q, 0),
            SectorShape::Hyperbolic { genus, cone_orders } => {
                KRank::new(cone_orders.iter().map(|v| v - 1).sum::<usize>() + 2, 2 * genus)
            }
        }
    }
}

pub const SECTOR_FIXTURES: &[(&str, SectorShape)] = &[
    ("cp_2_3", SectorShape::WeightedProjective { p: 2, q: 3 }),
    ("cp_3_5", SectorShape::WeightedProjective { p: 3, q: 5 }),
    ("cp_5_7", SectorShape::WeightedProjective { p: 5, q: 7 }),
    ("hyperbolic_g0_2_3_7", SectorShape::Hyperbolic { genus: 0, cone_orders: &[2, 3, 7] }),
    ("hyperbolic_g1_2_2", SectorShape::Hyperbolic { genus: 1, cone_orders: &[2, 2] }),
    ("hyperbolic_g2_3_3_3", SectorShape::Hyperbolic { genus: 2, cone_orders: &[3, 3, 3] }),
    ("hyperbolic_g2_3_3_5", SectorShape::Hyperbolic { genus: 2, cone_orders: &[3, 3, 5] }),
];

/// One comparison of two independently computed values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub fixture: String,
    /// The identity under test, stated in words.
    pub identity: String,
    pub left: String,
    pub right: String,
    pub passed: bool,
}

fn check<T: std::fmt::Debug + PartialEq>(fixture: &str, identity: impl Into<String>, left: T, right: T) -> Check {
    Check {
        fixture: fixture.to_string(),
        identity: identity.into(),
        passed: left == right,
        left: format!("{left:?}"),
        right: format!("{right:?}"),
    }
}

fn failed(fixture: &str, identity: &str, err: &Error) -> Check {
    Check {
        fixture: fixture.to_string(),
        identity: identity.to_string(),
        left: format!("error: {err}"),
        right: "a value".into(),
        passed: false,
    }
}

/// Ranks of one twist on one fixture, by every method that applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub fixture: String,
    pub twist: usize,
    pub bredon: KRank,
    pub twisted: KRank,
    pub cells: i64,
    /// Only for the untwisted class.
    pub sectors: Option<KRank>,
    pub cyclic_total: Option<usize>,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub agreements: Vec<Agreement>,
    /// Brute-force twisted symmetric products against the two-term product formula;
    /// informational, the brute force is authoritative.
    pub symprod_comparison: SymprodComparison,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.agreements.iter().all(|a| a.agree)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

struct GeometricOutcome {
    checks: Vec<Check>,
    agreements: Vec<Agreement>,
}

fn run_geometric(lib: &Library, fx: &GeometricFixture) -> Result<GeometricOutcome> {
    let name = fx.name;
    let x = lib.complex(fx.group, fx.complex)?;
    let mut checks = Vec::new();
    let full = x.full_action();
    let quotient = full.quotient()?;
    let sectors = sector_decomposition(&x)?;
    checks.push(check(name, "identity sector equals X/G", sectors.untwisted().betti.clone(), quotient.betti()));
    checks.push(check(name, "quotient homology equals invariant homology", quotient.betti(), full.invariant_betti()?));
    let constant = BredonComplex::new(&x, Coefficients::Constant)?;
    checks.push(check(name, "constant-coefficient Bredon equals H*(X/G)", constant.cohomology(), quotient.betti()));
    let cyclic = cyclic_decomposition(&x)?;
    checks.push(check(
        name,
        "cyclic-subgroup total equals element-indexed total",
        cyclic.total,
        sectors.krank().total(),
    ));

    let twists = h2_group(x.group(), 2)?;
    let mut agreements = Vec::new();
    let mut total_euler = 0;
    for (i, alpha) in twists.classes()?.iter().enumerate() {
        let twisted = twisted_k_ranks(&x, alpha)?.krank;
        let bredon = BredonComplex::new(&x, Coefficients::Twisted(alpha))?.krank();
        let cells = chi_orb_cells(&x, alpha)?;
        total_euler += twisted.euler();
        checks.push(check(name, format!("Bredon fold equals twisted decomposition (twist {i})"), bredon, twisted));
        checks.push(check(name, format!("cell formula equals k0 - k1 (twist {i})"), cells, twisted.euler()));
        let untwisted = alpha.is_zero();
        if untwisted {
            checks.push(check(name, "untwisted decomposition equals sector decomposition", twisted, sectors.krank()));
            checks.push(check(
                name,
                "cell formula equals chi(X/G) + chi(resolution)",
                cells,
                quotient.euler() + sectors.resolution_euler(),
            ));
        }
        if x.complex().levels() == 1 && x.complex().cells(0).len() == 1 {
            checks.push(check(
                name,
                format!("point ranks equal rank R_alpha (twist {i})"),
                twisted,
                KRank::new(rank_r_alpha(alpha)?, 0),
            ));
        }
        let agree = bredon == twisted
            && cells == twisted.euler()
            && (!untwisted || (twisted == sectors.krank() && cyclic.total == twisted.total()));
        agreements.push(Agreement {
            fixture: name.to_string(),
            twist: i,
            bredon,
            twisted,
            cells,
            sectors: untwisted.then(|| sectors.krank()),
            cyclic_total: untwisted.then_some(cyclic.total),
            agree,
        });
    }
    let g = x.group();
    if g.order() == 4 && g.exponent() == 2 {
        checks.push(check(
            name,
            "total twisted Euler characteristic equals 6 chi(X/G) - chi(X)",
            total_euler,
            6 * quotient.euler() - x.complex().euler(),
        ));
    }
    if fx.subdivide {
        let y = x.subdivide()?;
        checks.push(check(
            name,
            "sector ranks survive subdivision",
            sector_decomposition(&y)?.krank(),
            sectors.krank(),
        ));
        let twists_y = h2_group(y.group(), 2)?;
        for (i, (a, b)) in twists.classes()?.iter().zip(twists_y.classes()?).enumerate() {
            checks.push(check(
                name,
                format!("twisted ranks survive subdivision (twist {i})"),
                twisted_k_ranks(&y, b)?.krank,
                twisted_k_ranks(&x, a)?.krank,
            ));
        }
    }
    Ok(GeometricOutcome { checks, agreements })
}

fn algebra_checks() -> Vec<Check> {
    let mut out = Vec::new();
    match tr_v4() {
        Ok(mut c) => out.append(&mut c),
        Err(e) => out.push(failed("algebra/tr-v4", "twisted representation ring of V4", &e)),
    }
    for (name, group) in [("algebra/h2-s4", "s4"), ("algebra/h2-s5", "s5")] {
        match h2_and_rank(name, group) {
            Ok(mut c) => out.append(&mut c),
            Err(e) => out.push(failed(name, "H2 with Z/2 coefficients", &e)),
        }
    }
    match fixture_group("c5").and_then(|g| h2_group(&g, 5)) {
        Ok(h) => out.push(check("algebra/h2-c5", "cyclic groups have trivial H2", h.order(), 1)),
        Err(e) => out.push(failed("algebra/h2-c5", "cyclic groups have trivial H2", &e)),
    }
    out
}

/// `TR(V4)`: ranks, and the relations `x² = 1`, `xμ = μ`, `μ² = Σ` of all linear characters.
pub fn tr_v4() -> Result<Vec<Check>> {
    let name = "algebra/tr-v4";
    let ring = TRRing::new(&fixture_group("v4")?, 2)?;
    let mut out =
        vec![check(name, "total rank", ring.total_rank(), 5), check(name, "graded ranks", ring.ranks(), vec![4, 1])];
    let untwisted = ring.product(0, 0);
    let squares: Vec<Vec<i64>> = (0..4).map(|i| untwisted.constants[i][i].clone()).collect();
    out.push(check(name, "linear characters square to 1", squares, vec![vec![1, 0, 0, 0]; 4]));
    let mixed = ring.product(0, 1);
    let absorbed: Vec<Vec<i64>> = (0..4).map(|i| mixed.constants[i][0].clone()).collect();
    out.push(check(name, "linear characters fix mu", (mixed.target, absorbed), (1, vec![vec![1]; 4])));
    let mu2 = ring.product(1, 1);
    out.push(check(
        name,
        "mu squared is the regular character",
        (mu2.target, mu2.constants[0][0].clone()),
        (0, vec![1; 4]),
    ));
    Ok(out)
}

fn h2_and_rank(name: &str, group: &str) -> Result<Vec<Check>> {
    let g = fixture_group(group)?;
    let h = h2_group(&g, 2)?;
    let mut out = vec![check(name, "H2 invariant factors", h.invariant_factors(), vec![2])];
    let alpha: &Cocycle = h.class(1)?;
    let scan = alpha.regular_classes().len();
    let table = TwistedCharacterTable::new(alpha)?.len();
    out.push(check(name, "regular class scan equals extension table count", scan, table));
    Ok(out)
}

fn sector_checks(lib: &Library) -> Vec<Check> {
    SECTOR_FIXTURES
        .iter()
        .map(|&(name, shape)| {
            let fixture = format!("sectors/{name}");
            match lib.sectors(name).and_then(|d| sector_sum(&d)) {
                Ok(s) => check_sector_sum(&fixture, s.krank, shape),
                Err(e) => failed(&fixture, "sector sum equals the closed form", &e),
            }
        })
        .collect()
}

/// Compares a computed sector sum with the closed form for its shape.
pub fn check_sector_sum(fixture: &str, computed: KRank, shape: SectorShape) -> Check {
    check(fixture, "sector sum equals the closed form", computed, shape.expected())
}

type SymprodComparison = Vec<(i64, SymprodRow)>;

fn symprod_checks(suite: Suite) -> Result<(Vec<Check>, SymprodComparison)> {
    let chis: Vec<i64> = match suite {
        Suite::Small => vec![-2, 0, 1, 2, 3],
        Suite::Full => (-3..=3).collect(),
    };
    let mut checks = Vec::new();
    let mut comparison = Vec::new();
    for &c in &chis {
        let series = partition_series(c, 5)?;
        for n in 0..=5 {
            let brute = symprod_chi(n, c, false)?;
            checks.push(check(
                &format!("symprod/chi={c}"),
                format!("untwisted n={n} equals the partition series coefficient"),
                num_bigint::BigInt::from(brute),
                series.coeff(n).clone(),
            ));
            if n <= 3 {
                checks.push(check(
                    &format!("symprod/chi={c}"),
                    format!("twist is inert for n={n}"),
                    symprod_chi(n, c, true)?,
                    brute,
                ));
            }
        }
        comparison.extend(symprod_report(c, 5)?.into_iter().map(|r| (c, r)));
    }
    Ok((checks, comparison))
}

/// Runs every bundled fixture of the suite.
pub fn run_suite(suite: Suite) -> Result<VerifyReport> {
    run_suite_with(suite, &Library::bundled())
}

/// Runs the suite over `lib`. Fixtures run in parallel; the report is in
/// manifest order.
pub fn run_suite_with(suite: Suite, lib: &Library) -> Result<VerifyReport> {
    let fixtures: Vec<&GeometricFixture> = GEOMETRIC.iter().filter(|f| suite == Suite::Full || !f.full_only).collect();
    let outcomes = par::map_slice(&fixtures, |fx| run_geometric(lib, fx));
    let mut report = VerifyReport::default();
    for (fx, outcome) in fixtures.iter().zip(outcomes) {
        match outcome {
            Ok(mut o) => {
                report.checks.append(&mut o.checks);
                report.agreements.append(&mut o.agreements);
            }
            Err(e) => report.checks.push(failed(fx.name, "fixture evaluation", &e)),
        }
    }
    report.checks.extend(algebra_checks());
    report.checks.extend(sector_checks(lib));
    let (mut checks, comparison) = symprod_checks(suite)?;
    report.checks.append(&mut checks);
    report.symprod_comparison = comparison;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SectorEntry;

    #[test]
    fn every_bundled_file_parses() {
        for (name, _) in GROUPS {
            fixture_group(name).unwrap();
        }
        for fx in GEOMETRIC {
            fixture_complex(fx.group, fx.complex).unwrap();
        }
        for (name, _) in SECTORS {
            fixture_sectors(name).unwrap();
        }
        assert!(fixture_group("nope").is_err());
    }

    #[test]
    fn small_suite_passes() {
        let report = run_suite(Suite::Small).unwrap();
        let failures = report.failures();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.passed());
        assert!(report.checks.len() > 100);
    }

    #[test]
    fn tampered_sector_file_is_flagged() {
        let mut data = fixture_sectors("cp_2_3").unwrap();
        data.sectors[0] = SectorEntry { label: "CP(2,3)".into(), betti: Some(vec![1, 0, 2]), euler: None, level: None };
        let c = check_sector_sum(
            "tampered",
            sector_sum(&data).unwrap().krank,
            SectorShape::WeightedProjective { p: 2, q: 3 },
        );
        assert!(!c.passed);
        assert_eq!(c.left, "KRank { k0: 6, k1: 0 }");
        assert_eq!(c.right, "KRank { k0: 5, k1: 0 }");
    }

    #[test]
    fn v4_circle_fixture() {
        let x = fixture_complex("hexagon_v4", "hexagon_v4").unwrap();
        let out = run_geometric(&Library::bundled(), &GEOMETRIC[3]).unwrap();
        let identity = out.checks.iter().find(|c| c.identity.starts_with("total twisted Euler")).unwrap();
        assert!(identity.passed);
        assert_eq!(identity.left, "6");
        assert_eq!(x.group().order(), 4);
    }
}
