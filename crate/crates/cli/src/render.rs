//! Canonical JSON for engine results: rationals as `"p/q"` strings,
//! integers as numbers when they fit in 64 bits, object keys sorted.

use kstab_core::algebraic::{AlgebraicNumber, Sign};
use kstab_core::chambers::PiecewiseRationalFunction;
use kstab_core::cm::{CMDegree, FutCmCheck};
use kstab_core::geometry::polyhedron::RationalPolyhedron;
use kstab_core::invariants::{Candidate, DeltaResult, InvariantRecord, ToricValuation};
use kstab_core::oracles::{AuditReport, ClosednessReport};
use kstab_core::poly::{IntPolynomial, MultiPoly};
use kstab_core::toric::Domain;
use kstab_core::walls::{Cell, CellShape, ChamberDecomposition, SemiAlgebraicSet, WallCertificate};
use kstab_core::{Integer, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn q(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn qvec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn int(n: &Integer) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

pub fn ivec(v: &[Integer]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn polyhedron(p: &RationalPolyhedron) -> Value {
    let ineqs: Vec<Value> = p
        .h_rep()
        .iter()
        .map(|h| {
            let mut row = vec![q(&h.b)];
            row.extend(h.a.iter().map(q));
            Value::Array(row)
        })
        .collect();
    json!({
        "ineqs": ineqs,
        "vertices": p.vertices().iter().map(|v| qvec(v)).collect::<Vec<_>>(),
        "rays": p.rays().iter().map(|v| qvec(v)).collect::<Vec<_>>(),
    })
}

pub fn domain(d: &Domain) -> Value {
    let verts = d.closure.vertices();
    let faces: Vec<Value> = d
        .faces
        .iter()
        .map(|f| {
            json!({
                "dim": f.dim,
                "vertices": f.vertices.iter().map(|&i| qvec(&verts[i])).collect::<Vec<_>>(),
                "in_domain": f.in_domain,
            })
        })
        .collect();
    let excluded: Vec<Value> = d.faces.iter().filter(|f| !f.in_domain).map(|f| {
        Value::Array(f.vertices.iter().map(|&i| qvec(&verts[i])).collect())
    }).collect();
    json!({ "closure": polyhedron(&d.closure), "faces": faces, "excluded_faces": excluded })
}

pub fn multipoly(p: &MultiPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| json!({ "exponents": e, "coeff": q(c) }))
        .collect();
    json!({ "nvars": p.nvars(), "terms": terms, "text": p.to_string() })
}

pub fn int_poly(p: &IntPolynomial) -> Value {
    ivec(p.coeffs())
}

pub fn algebraic(a: &AlgebraicNumber) -> Value {
    if let Some(r) = a.as_rational() {
        return json!({ "poly": int_poly(a.poly()), "lo": q(&r), "hi": q(&r), "rational": q(&r) });
    }
    a.refine_to(&kstab_core::algebraic::default_width());
    let (lo, hi) = a.interval();
    json!({ "poly": int_poly(a.poly()), "lo": q(&lo), "hi": q(&hi) })
}

pub fn sign(s: Sign) -> Value {
    Value::String(s.symbol().to_string())
}

pub fn valuation(u: &ToricValuation) -> Value {
    let dir = u.direction();
    if dir.iter().all(|d| d.is_integer()) {
        Value::Array(dir.iter().map(|d| int(&d.to_integer())).collect())
    } else {
        qvec(&dir)
    }
}

fn candidate(c: &Candidate) -> Value {
    json!({ "ray": ivec(&c.ray), "a": q(&c.a), "s": q(&c.s), "ratio": q(&c.ratio) })
}

pub fn delta(d: &DeltaResult) -> Value {
    json!({
        "delta": q(&d.delta),
        "minimizer": valuation(&d.minimizer),
        "candidates": d.candidates.iter().map(candidate).collect::<Vec<_>>(),
    })
}

pub fn record(r: &InvariantRecord) -> Value {
    json!({
        "x": qvec(&r.x),
        "u": valuation(&r.u),
        "a": q(&r.a),
        "s": q(&r.s),
        "beta": q(&r.beta),
        "ratio": r.ratio.as_ref().map(q),
    })
}

pub fn semi_algebraic(s: &SemiAlgebraicSet) -> Value {
    let pieces: Vec<Value> = s
        .pieces
        .iter()
        .map(|p| {
            json!({
                "chamber": polyhedron(&p.chamber),
                "equalities": p.equalities.iter().map(multipoly).collect::<Vec<_>>(),
                "inequalities": p.inequalities.iter().map(|c| json!({
                    "poly": multipoly(&c.poly),
                    "relation": if c.strict { ">" } else { ">=" },
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "ambient_dim": s.ambient_dim, "pieces": pieces })
}

pub fn wall(w: &WallCertificate) -> Value {
    let mut v = algebraic(&w.wall);
    let cert = json!({
        "left_probe": q(&w.left_probe),
        "right_probe": q(&w.right_probe),
        "membership": w.status,
        "binding": w.binding.as_ref().map(|(p, s)| json!({
            "poly": int_poly(p),
            "signs": s.iter().map(|&x| sign(x)).collect::<Vec<_>>(),
        })),
        "delta_left": w.delta_left.as_ref().map(q),
        "delta_right": w.delta_right.as_ref().map(q),
    });
    v.as_object_mut().expect("object").insert("certificate".into(), cert);
    v
}

fn cell(c: &Cell) -> Value {
    let shape = match &c.shape {
        CellShape::Interval { lo, hi } => json!({
            "kind": "interval",
            "lo": algebraic(&lo.value),
            "lo_closed": lo.closed,
            "hi": algebraic(&hi.value),
            "hi_closed": hi.closed,
        }),
        CellShape::Region { polytope, outside_closure } => json!({
            "kind": "region",
            "polytope": polyhedron(polytope),
            "outside_closure": outside_closure,
        }),
    };
    json!({
        "shape": shape,
        "status": c.status.name(),
        "witness": qvec(&c.witness),
        "witness_delta": c.witness_delta.as_ref().map(|d| q(&d.delta)),
        "verified": c.verified,
    })
}

pub fn decomposition(d: &ChamberDecomposition) -> Value {
    json!({ "tau": q(&d.tau), "cells": d.cells.iter().map(cell).collect::<Vec<_>>() })
}

pub fn piecewise(f: &PiecewiseRationalFunction) -> Value {
    let pieces: Vec<Value> = f
        .pieces
        .iter()
        .map(|p| json!({ "cell": polyhedron(&p.cell), "num": multipoly(&p.num), "den": multipoly(&p.den) }))
        .collect();
    json!({ "nvars": f.nvars, "pieces": pieces })
}

pub fn cm_degree(d: &CMDegree) -> Value {
    let pieces: Vec<Value> = d
        .pieces
        .iter()
        .map(|p| json!({ "cell": polyhedron(&p.cell), "poly": multipoly(&p.poly) }))
        .collect();
    json!({ "moving": d.moving + 1, "max_degree": d.max_degree(), "pieces": pieces })
}

pub fn fut_cm(f: &FutCmCheck) -> Value {
    json!({
        "from_beta": q(&f.from_beta),
        "from_weight": q(&f.from_weight),
        "consistent": f.consistent,
        "ratio": f.ratio.as_ref().map(q),
    })
}

pub fn audit(r: &AuditReport) -> Value {
    let disc: Vec<Value> = r
        .discrepancies
        .iter()
        .map(|d| json!({
            "x": qvec(&d.x),
            "membership": d.membership,
            "direct": d.direct,
            "delta": d.delta.as_ref().map(q),
        }))
        .collect();
    json!({ "checked": r.checked, "members": r.members, "discrepancies": disc, "clean": r.is_clean() })
}

pub fn closedness(r: &ClosednessReport) -> Value {
    json!({
        "sequences": r.sequences,
        "applicable": r.applicable,
        "failures": r.failures.iter().map(|x| qvec(x)).collect::<Vec<_>>(),
        "passed": r.passed(),
    })
}
