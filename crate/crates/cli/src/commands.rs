//! Command dispatch: each command maps onto one engine operation and
//! returns a JSON result plus optional plot rows.

use kstab_core::chambers::volume_function;
use kstab_core::cm::{cm_degree_oracle, cm_degree_product_family, fut_cm_identity_check, is_positive_at};
use kstab_core::input::{parse_rational, parse_rational_vector, InputDocument};
use kstab_core::invariants::{beta, delta, futaki_product_tc, is_kss, ToricValuation};
use kstab_core::oracles::{audit_points, closedness_audit, random_audit};
use kstab_core::toric::{Scope, ToricCouple};
use kstab_core::walls::{chamber_decomposition, level_set, membership, walls_k1_certified};
use kstab_core::{Error, Rational, Result};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::render;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CommandKind {
    Domains,
    Delta,
    Kss,
    LevelSet,
    Walls,
    Chambers,
    Futaki,
    Cm,
    Audit,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Domains => "domains",
            CommandKind::Delta => "delta",
            CommandKind::Kss => "kss",
            CommandKind::LevelSet => "level-set",
            CommandKind::Walls => "walls",
            CommandKind::Chambers => "chambers",
            CommandKind::Futaki => "futaki",
            CommandKind::Cm => "cm",
            CommandKind::Audit => "audit",
        }
    }
}

/// Parsed command-line parameters, still as text.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub x: Option<String>,
    pub tau: Option<String>,
    pub u: Option<String>,
    pub j: Option<usize>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub sequences: Option<usize>,
    pub grid: Option<String>,
    pub plot: bool,
}

/// One `(x, value)` sample of a plotted function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotRow {
    pub x: Vec<Rational>,
    pub value: Rational,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: Value,
    pub plot: Vec<PlotRow>,
    /// False when an audit found a discrepancy.
    pub clean: bool,
}

struct Ctx<'a> {
    doc: &'a InputDocument,
    couple: ToricCouple,
    params: &'a Params,
}

impl Ctx<'_> {
    fn x(&self) -> Result<Vec<Rational>> {
        let raw = self.params.x.as_deref().ok_or_else(|| Error::InvalidInput("--x is required".into()))?;
        let x = parse_rational_vector(raw)?;
        if x.len() != self.couple.k() {
            return Err(Error::DimensionMismatch { expected: self.couple.k(), got: x.len() });
        }
        Ok(x)
    }

    fn opt_x(&self) -> Result<Option<Vec<Rational>>> {
        self.params.x.as_ref().map(|_| self.x()).transpose()
    }

    fn tau(&self) -> Result<Rational> {
        match &self.params.tau {
            Some(t) => parse_rational(t),
            None => Ok(self.doc.tau()),
        }
    }

    fn u(&self) -> Result<ToricValuation> {
        let raw = self.params.u.as_deref().ok_or_else(|| Error::InvalidInput("--u is required".into()))?;
        let u = parse_rational_vector(raw)?;
        if u.len() != self.couple.dim() {
            return Err(Error::DimensionMismatch { expected: self.couple.dim(), got: u.len() });
        }
        ToricValuation::new(&u)
    }

    fn seed(&self) -> u64 {
        self.params.seed.or(self.doc.options.seed).unwrap_or(0)
    }
}

pub fn input_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs `cmd` on the document whose raw bytes are `input`.
pub fn run(cmd: CommandKind, input: &[u8], doc: &InputDocument, params: &Params) -> Result<Outcome> {
    let ctx = Ctx { doc, couple: doc.to_couple()?, params };
    let mut clean = true;
    let mut echo = serde_json::Map::new();
    let result = match cmd {
        CommandKind::Domains => domains(&ctx)?,
        CommandKind::Delta => {
            let x = ctx.x()?;
            echo.insert("x".into(), render::qvec(&x));
            render::delta(&delta(&ctx.couple, &x)?)
        }
        CommandKind::Kss | CommandKind::LevelSet => {
            let tau = if cmd == CommandKind::Kss { Rational::one() } else { ctx.tau()? };
            echo.insert("tau".into(), render::q(&tau));
            level(&ctx, &tau, &mut echo)?
        }
        CommandKind::Walls => {
            let tau = ctx.tau()?;
            echo.insert("tau".into(), render::q(&tau));
            let walls = walls_k1_certified(&ctx.couple, &tau)?;
            json!({ "walls": walls.iter().map(render::wall).collect::<Vec<_>>() })
        }
        CommandKind::Chambers => {
            let tau = ctx.tau()?;
            echo.insert("tau".into(), render::q(&tau));
            let d = chamber_decomposition(&ctx.couple, &tau)?;
            json!({
                "decomposition": render::decomposition(&d),
                "normalized_volume": render::piecewise(&volume_function(&ctx.couple)?),
            })
        }
        CommandKind::Futaki => {
            let (x, u) = (ctx.x()?, ctx.u()?);
            echo.insert("x".into(), render::qvec(&x));
            echo.insert("u".into(), render::valuation(&u));
            json!({
                "futaki": render::q(&futaki_product_tc(&ctx.couple, &x, &u)?),
                "invariants": render::record(&beta(&ctx.couple, &x, &u)?),
                "fut_cm": render::fut_cm(&fut_cm_identity_check(&ctx.couple, &x, &u)?),
            })
        }
        CommandKind::Cm => {
            let j = ctx.params.j.unwrap_or(1);
            if j == 0 || j > ctx.couple.k() {
                return Err(Error::InvalidInput(format!("--j must lie in 1..={}", ctx.couple.k())));
            }
            echo.insert("j".into(), j.into());
            let deg = cm_degree_product_family(&ctx.couple, j - 1)?;
            let mut out = render::cm_degree(&deg);
            if let Some(x) = ctx.opt_x()? {
                echo.insert("x".into(), render::qvec(&x));
                let obj = out.as_object_mut().expect("object");
                obj.insert("value".into(), deg.eval(&x).as_ref().map(render::q).into());
                obj.insert("direct".into(), render::q(&cm_degree_oracle(&ctx.couple, j - 1, &x)?));
                obj.insert("positive".into(), is_positive_at(&deg, &x).into());
            }
            out
        }
        CommandKind::Audit => {
            let tau = ctx.tau()?;
            let seed = ctx.seed();
            echo.insert("tau".into(), render::q(&tau));
            echo.insert("seed".into(), seed.into());
            let (v, ok) = audit(&ctx, &tau, seed)?;
            clean = ok;
            v
        }
    };
    let plot = if params.plot { plot_rows(&ctx, cmd)? } else { Vec::new() };
    let document = json!({
        "tool": "kstab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd.name(),
        "input_sha256": input_hash(input),
        "params": Value::Object(echo),
        "result": result,
    });
    Ok(Outcome { document, plot, clean })
}

fn domains(ctx: &Ctx) -> Result<Value> {
    let c = &ctx.couple;
    let both = |f: &dyn Fn(Scope) -> Result<Value>| -> Result<Value> {
        Ok(json!({ "orthant": f(Scope::Orthant)?, "coefficient": f(Scope::Coefficient)? }))
    };
    Ok(json!({
        "rc": render::polyhedron(&c.rc_domain()?),
        "lf": both(&|s| c.lf_domain(s).map(|d| render::domain(&d)))?,
        "wlf": both(&|s| c.wlf_domain(s).map(|d| render::domain(&d)))?,
        "coeff_polytope": render::polyhedron(c.coeff_polytope()),
    }))
}

fn level(ctx: &Ctx, tau: &Rational, echo: &mut serde_json::Map<String, Value>) -> Result<Value> {
    let set = level_set(&ctx.couple, tau)?;
    let mut out = json!({ "set": render::semi_algebraic(&set) });
    if let Some(x) = ctx.opt_x()? {
        echo.insert("x".into(), render::qvec(&x));
        let obj = out.as_object_mut().expect("object");
        obj.insert("member".into(), membership(&set, &x).into());
        if tau.is_one() && ctx.couple.is_log_fano(&x, Scope::Coefficient) {
            obj.insert("kss".into(), is_kss(&ctx.couple, &x)?.into());
        }
    }
    Ok(out)
}

fn audit(ctx: &Ctx, tau: &Rational, seed: u64) -> Result<(Value, bool)> {
    let c = &ctx.couple;
    let set = level_set(c, tau)?;
    let n = ctx.params.n.unwrap_or(1000);
    let random = random_audit(c, &set, tau, n, seed);
    let closed = closedness_audit(c, &set, ctx.params.sequences.unwrap_or(200), 16, seed);
    // Adversarial points: P's vertices plus, for k = 1, the walls and their
    // probes.
    let mut points: Vec<Vec<Rational>> = c.coeff_polytope().vertices().to_vec();
    if c.k() == 1 {
        for w in walls_k1_certified(c, tau)? {
            points.push(vec![w.left_probe.clone()]);
            points.push(vec![w.right_probe.clone()]);
            if let Some(r) = w.wall.as_rational() {
                points.push(vec![r]);
            }
        }
    }
    let adversarial = audit_points(c, &set, tau, &points);
    let ok = random.is_clean() && adversarial.is_clean() && closed.passed();
    Ok((
        json!({
            "random": render::audit(&random),
            "adversarial": render::audit(&adversarial),
            "closedness": render::closedness(&closed),
            "clean": ok,
        }),
        ok,
    ))
}

fn axis(spec: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?);
            if !step.is_positive() || hi < lo {
                return Err(Error::InvalidInput(format!("grid `{spec}` needs lo <= hi and a positive step")));
            }
            let mut out = Vec::new();
            let mut t = lo;
            while t <= hi {
                out.push(t.clone());
                t += &step;
            }
            Ok(out)
        }
        [list] => parse_rational_vector(list),
        _ => Err(Error::InvalidInput(format!("grid `{spec}` must be lo:hi:step or a comma list"))),
    }
}

/// Grid points: one axis spec per coordinate separated by `;`, or a single
/// spec reused on every coordinate; default is 20 steps across `P`.
fn grid(ctx: &Ctx) -> Result<Vec<Vec<Rational>>> {
    let k = ctx.couple.k();
    let axes: Vec<Vec<Rational>> = match &ctx.params.grid {
        Some(spec) => {
            let specs: Vec<&str> = spec.split(';').collect();
            if specs.len() != 1 && specs.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: specs.len() });
            }
            (0..k).map(|i| axis(specs[if specs.len() == 1 { 0 } else { i }])).collect::<Result<_>>()?
        }
        None => {
            let verts = ctx.couple.coeff_polytope().vertices();
            (0..k)
                .map(|i| {
                    let lo = verts.iter().map(|v| v[i].clone()).min().unwrap_or_else(Rational::zero);
                    let hi = verts.iter().map(|v| v[i].clone()).max().unwrap_or_else(Rational::zero);
                    let steps = Rational::from_integer(20.into());
                    (0..=20).map(|s| &lo + (&hi - &lo) * Rational::from_integer(s.into()) / &steps).collect()
                })
                .collect()
        }
    };
    let mut points = vec![Vec::new()];
    for ax in axes {
        points = points
            .into_iter()
            .flat_map(|p| ax.iter().map(move |t| {
                let mut q = p.clone();
                q.push(t.clone());
                q
            }))
            .collect();
    }
    Ok(points)
}

fn plot_rows(ctx: &Ctx, cmd: CommandKind) -> Result<Vec<PlotRow>> {
    let c = &ctx.couple;
    let volume = matches!(cmd, CommandKind::Domains | CommandKind::Cm);
    let f = if volume { Some(volume_function(c)?) } else { None };
    let rows = grid(ctx)?
        .into_iter()
        .filter(|x| c.coeff_polytope().contains(x))
        .filter_map(|x| {
            let value = match &f {
                Some(f) => f.eval(&x),
                None if c.is_log_fano(&x, Scope::Coefficient) => delta(c, &x).ok().map(|d| d.delta),
                None => None,
            }?;
            Some(PlotRow { x, value })
        })
        .collect();
    Ok(rows)
}

/// CSV with exact columns: the coordinates as `p/q` strings, then the
/// value's numerator and denominator.
pub fn write_plot<W: std::io::Write>(rows: &[PlotRow], k: usize, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    header.push("numerator".into());
    header.push("denominator".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.x.iter().map(|v| v.to_string()).collect();
        rec.push(r.value.numer().to_string());
        rec.push(r.value.denom().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
