use orbk::arith::IntCyc;
use orbk::chartable::CharacterTable;
use orbk::cocycle::{h2_group, Cocycle};
use orbk::group::FiniteGroup;
use orbk::io::parse_sectors;
use orbk::series::{sector_sum, symprod_chi, symprod_report};
use orbk::topology::{
    chi_orb_cells, sector_decomposition, twisted_k_ranks, BredonComplex, Coefficients, GSimplicialComplex,
};
use orbk::twisted::{TRRing, TwistedCharacterTable};
use orbk::verify::{run_suite_with, Library, Suite};
use orbk::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::{InputDigest, Inputs};
use crate::render;
use crate::{Command, SpaceArgs};

/// The comparable body of a run: identical inputs give identical bytes.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub result: Value,
}

#[derive(Debug)]
pub struct Output {
    report: RunReport,
    /// A cross-check inside the run disagreed.
    failed: bool,
}

impl Output {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("report values serialize")
    }

    pub fn text(&self) -> String {
        let mut s = format!("orbk {}\n", self.report.command.join(" "));
        for d in &self.report.inputs {
            match &d.sha256 {
                Some(h) => s.push_str(&format!("  {} {} sha256:{h}\n", d.role, d.source)),
                None => s.push_str(&format!("  {} {}\n", d.role, d.source)),
            }
        }
        s.push('\n');
        s.push_str(&render::text(&self.report.result));
        s
    }

    pub fn exit_code(&self) -> u8 {
        if self.failed {
            2
        } else {
            0
        }
    }
}

fn value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn cyc(v: &IntCyc) -> Value {
    json!({"level": v.level(), "coeffs": v.canonical()})
}

fn cyc_rows(rows: &[Vec<IntCyc>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(cyc).collect())).collect())
}

fn modulus_or_exponent(group: &FiniteGroup, m: Option<u64>) -> u64 {
    m.unwrap_or(group.exponent() as u64)
}

struct Space {
    x: GSimplicialComplex,
    given_cells: Vec<usize>,
    alpha: Cocycle,
}

fn space(inputs: &mut Inputs, args: &SpaceArgs) -> Result<Space> {
    let group = inputs.group(&args.group.group)?;
    let (x, given_cells) = inputs.complex(&args.complex, &group)?;
    let alpha = inputs.cocycle(args.twist.cocycle.as_deref(), args.twist.modulus, &group)?;
    Ok(Space { x, given_cells, alpha })
}

fn cells(s: &Space) -> Value {
    json!({"given": s.given_cells, "regularized": s.x.complex().cell_counts()})
}

pub fn run(command: &Command, argv: Vec<String>) -> Result<Output> {
    let mut inputs = Inputs::default();
    let mut failed = false;
    let result = match command {
        Command::Group(g) => {
            let g = inputs.group(&g.group)?;
            group_report(&g)
        }
        Command::H2 { group, modulus } => {
            let g = inputs.group(&group.group)?;
            let m = modulus_or_exponent(&g, *modulus);
            let h = h2_group(&g, m)?;
            json!({
                "modulus": m,
                "invariant_factors": h.invariant_factors(),
                "order": h.order(),
                "trivial": h.is_trivial(),
                "generators": h.factors().iter().map(|f| json!({"order": f.order, "values": f.generator.rows()})).collect::<Vec<_>>(),
                "classes": (0..h.order()).map(|i| h.digits(i)).collect::<Vec<_>>(),
            })
        }
        Command::Regular { group, twist } => {
            let g = inputs.group(&group.group)?;
            let alpha = inputs.cocycle(twist.cocycle.as_deref(), twist.modulus, &g)?;
            let classes = g.conjugacy_classes();
            let rows: Vec<Value> = (0..classes.len())
                .map(|c| {
                    let r = classes.representative(c);
                    json!({"representative": r, "size": classes.size(c), "regular": alpha.is_regular(r)})
                })
                .collect();
            json!({"modulus": alpha.modulus(), "classes": rows, "regular_count": alpha.regular_classes().len()})
        }
        Command::Chartable { group, twist } => {
            let g = inputs.group(&group.group)?;
            if twist.cocycle.is_none() && twist.modulus.is_none() {
                let t = CharacterTable::new(&g)?;
                json!({
                    "twisted": false,
                    "level": t.level(),
                    "class_representatives": t.classes().representatives(),
                    "class_sizes": t.classes().sizes(),
                    "degrees": t.degrees(),
                    "rows": cyc_rows(t.rows()),
                })
            } else {
                let alpha = inputs.cocycle(twist.cocycle.as_deref(), twist.modulus, &g)?;
                let t = TwistedCharacterTable::new(&alpha)?;
                json!({
                    "twisted": true,
                    "modulus": alpha.modulus(),
                    "level": t.level(),
                    "elements": (0..g.order()).collect::<Vec<_>>(),
                    "degrees": t.degrees(),
                    "rows": cyc_rows(t.rows()),
                })
            }
        }
        Command::Trring { group, modulus } => {
            let g = inputs.group(&group.group)?;
            let ring = TRRing::new(&g, modulus_or_exponent(&g, *modulus))?;
            let k = ring.tables().len();
            let classes: Vec<Value> = (0..k)
                .map(|a| {
                    json!({
                        "index": a,
                        "digits": ring.classes().digits(a as u64),
                        "rank": ring.tables()[a].len(),
                        "degrees": ring.tables()[a].degrees(),
                    })
                })
                .collect();
            let mut products = Vec::new();
            for a in 0..k {
                for b in 0..k {
                    let p = ring.product(a, b);
                    products.push(json!({"left": a, "right": b, "target": p.target, "constants": p.constants}));
                }
            }
            json!({
                "modulus": ring.modulus(),
                "invariant_factors": ring.classes().invariant_factors(),
                "ranks": ring.ranks(),
                "total_rank": ring.total_rank(),
                "classes": classes,
                "products": products,
            })
        }
        Command::Korb(args) => {
            let s = space(&mut inputs, args)?;
            let d = twisted_k_ranks(&s.x, &s.alpha)?;
            json!({
                "cells": cells(&s),
                "twisted": !s.alpha.is_zero(),
                "sectors": d.sectors,
                "k0": d.krank.k0,
                "k1": d.krank.k1,
                "euler": d.krank.euler(),
            })
        }
        Command::Bredon { space: args, constant } => {
            let s = space(&mut inputs, args)?;
            let coefficients = if *constant { Coefficients::Constant } else { Coefficients::Twisted(&s.alpha) };
            let b = BredonComplex::new(&s.x, coefficients)?;
            let k = b.krank();
            json!({
                "cells": cells(&s),
                "coefficients": if *constant { "constant" } else if s.alpha.is_zero() { "untwisted" } else { "twisted" },
                "cochain_ranks": b.dimensions(),
                "cohomology": b.cohomology(),
                "k0": k.k0,
                "k1": k.k1,
            })
        }
        Command::Chiorb(args) => {
            let s = space(&mut inputs, args)?;
            let chi = chi_orb_cells(&s.x, &s.alpha)?;
            let quotient = s.x.full_action().quotient()?.euler();
            let mut v =
                json!({"cells": cells(&s), "twisted": !s.alpha.is_zero(), "chi_orb": chi, "quotient_euler": quotient});
            if s.alpha.is_zero() {
                let resolution = sector_decomposition(&s.x)?.resolution_euler();
                v["resolution_euler"] = json!(resolution);
                v["union_euler"] = json!(quotient + resolution);
            }
            v
        }
        Command::Sectors { file } => {
            let text = inputs.path("sectors", file)?;
            let data = parse_sectors(&text).map_err(|e| match e {
                Error::Validation(msg) => Error::Validation(format!("{}: {msg}", file.display())),
                other => other,
            })?;
            let sum = sector_sum(&data)?;
            json!({"count": data.sectors.len(), "k0": sum.krank.k0, "k1": sum.krank.k1, "euler": sum.euler})
        }
        Command::SectorsOf { group, complex } => {
            let g = inputs.group(&group.group)?;
            let (x, given) = inputs.complex(complex, &g)?;
            let list = sector_decomposition(&x)?;
            let k = list.krank();
            json!({
                "cells": {"given": given, "regularized": x.complex().cell_counts()},
                "quotient": list.untwisted(),
                "resolution": list.twisted_sectors(),
                "resolution_euler": list.resolution_euler(),
                "k0": k.k0,
                "k1": k.k1,
            })
        }
        Command::Symprod { n, chi, twisted, report } => {
            if *report {
                json!({"chi": chi, "rows": symprod_report(*chi, *n)?})
            } else {
                json!({"n": n, "chi": chi, "twisted": twisted, "euler": symprod_chi(*n, *chi, *twisted)?})
            }
        }
        Command::Verify { suite, fixtures } => {
            let suite: Suite = suite.parse()?;
            let lib = match fixtures {
                Some(dir) => Library::with_overrides(dir)?,
                None => Library::bundled(),
            };
            let report = run_suite_with(suite, &lib)?;
            failed = !report.passed();
            json!({
                "suite": suite,
                "replaced_fixtures": lib.replaced(),
                "passed": report.passed(),
                "check_count": report.checks.len(),
                "failures": report.failures(),
                "agreements": report.agreements,
                "symprod_comparison": report.symprod_comparison.iter().map(|(chi, row)| {
                    let mut v = value(row);
                    v["chi"] = json!(chi);
                    v
                }).collect::<Vec<_>>(),
                "checks": report.checks,
            })
        }
    };
    Ok(Output { report: RunReport { command: argv, inputs: inputs.digests, result }, failed })
}

fn group_report(g: &FiniteGroup) -> Value {
    let classes = g.conjugacy_classes();
    let class_rows: Vec<Value> = (0..classes.len())
        .map(|c| {
            let r = classes.representative(c);
            json!({"representative": r, "size": classes.size(c), "element_order": g.element_order(r)})
        })
        .collect();
    let cyclic: Vec<Value> = g
        .cyclic_subgroup_classes()
        .iter()
        .map(|c| {
            json!({
                "generator": c.generator,
                "order": c.subgroup.order(),
                "normalizer_order": c.normalizer.order(),
                "centralizer_order": c.centralizer.order(),
                "weyl_order": c.weyl_order(),
            })
        })
        .collect();
    json!({
        "order": g.order(),
        "exponent": g.exponent(),
        "abelian": g.is_abelian(),
        "generators": g.generators(),
        "classes": class_rows,
        "cyclic_subgroups": cyclic,
    })
}
