//! Statements behind the geometric lemmas: the diameter bound for the region
//! of a triangle far from its vertices, and dihedral-angle bounds.

use crate::expr::{delta4_x_expr, delta_x_expr, Const, Expr, Method, Relation};
use crate::numeric::{rat, rat_int, RatBox, Rational};

use super::corpus::{NamedInequality, SCHEMA};
use super::Provenance;

/// A point in the plane as a pair of expressions in one variable.
#[derive(Clone)]
struct P2(Expr, Expr);

impl P2 {
    fn c(x: Rational, y: Rational) -> P2 {
        P2(Expr::rat(x), Expr::rat(y))
    }

    /// `self + t·(o − self)`.
    fn toward(&self, o: &P2, t: Expr) -> P2 {
        let step = |a: &Expr, b: &Expr| {
            Expr::add(vec![
                a.clone(),
                Expr::mul(vec![t.clone(), Expr::sub(b.clone(), a.clone())]),
            ])
        };
        P2(step(&self.0, &o.0), step(&self.1, &o.1))
    }

    fn dist(&self, o: &P2) -> Expr {
        let d = |a: &Expr, b: &Expr| Expr::pow(Expr::sub(a.clone(), b.clone()), 2);
        Expr::sqrt(Expr::add(vec![d(&self.0, &o.0), d(&self.1, &o.1)]))
    }
}

/// Distance from a vertex to the region.
const R: (i64, i64) = (6, 5);
/// `|uv|`, pushed to its maximum.
const X: (i64, i64) = (251, 100);

/// Boundary corners of the region for a triangle `v = (0,0)`, `w = (2,0)`,
/// `|uv| = 2.51`, `|uw| = y`. Variable 0 is `z = 5y`, so the case split at
/// `y = 2.4` falls on the integer `z = 12` and the circle intersection below
/// is evaluated without a spurious negative radicand.
///
/// `wide` selects `y >= 2.4`, where the edge `uw` keeps a segment of the
/// region; otherwise the circles around `u` and `w` meet in a single corner.
fn corners(wide: bool) -> Vec<(&'static str, P2)> {
    let z = Expr::var(0);
    let y = Expr::mul(vec![Expr::rat(rat(1, 5)), z.clone()]);
    let x = rat(X.0, X.1);
    let r = rat(R.0, R.1);
    let v = P2::c(rat_int(0), rat_int(0));
    let w = P2::c(rat_int(2), rat_int(0));
    // ux = (x² − y² + 4)/4, uy = √(x² − ux²)
    let ux = Expr::sub(
        Expr::rat((&x * &x + rat_int(4)) / rat_int(4)),
        Expr::mul(vec![Expr::rat(rat(1, 100)), Expr::pow(z.clone(), 2)]),
    );
    let uy = Expr::sqrt(Expr::sub(Expr::rat(&x * &x), Expr::pow(ux.clone(), 2)));
    let u = P2(ux.clone(), uy.clone());
    let over_x = Expr::rat(&r / &x);
    let over_y = Expr::div(Expr::rat(&r * rat_int(5)), z.clone());
    // The two circles around v and w meet above the midpoint of vw.
    let qvw = P2(Expr::int(1), Expr::sqrt(Expr::rat(&r * &r - rat_int(1))));
    let mut out = vec![
        ("qvw", qvw),
        ("uv_u", u.toward(&v, over_x.clone())),
        ("uv_v", v.toward(&u, over_x)),
    ];
    if wide {
        out.push(("uw_u", u.toward(&w, over_y.clone())));
        out.push(("uw_w", w.toward(&u, over_y)));
    } else {
        // Midpoint of uw plus h along the inward unit normal (−uy, ux − 2)/y,
        // with h = √(1.44 − y²/4) = √(144 − z²)/10.
        let h = Expr::mul(vec![
            Expr::rat(rat(1, 10)),
            Expr::sqrt(Expr::sub(Expr::int(144), Expr::pow(z.clone(), 2))),
        ]);
        let mx = Expr::mul(vec![Expr::rat(rat(1, 2)), Expr::add(vec![ux.clone(), Expr::int(2)])]);
        let my = Expr::mul(vec![Expr::rat(rat(1, 2)), uy.clone()]);
        let hy = Expr::div(h, y);
        let quw = P2(
            Expr::sub(mx, Expr::mul(vec![hy.clone(), uy])),
            Expr::add(vec![my, Expr::mul(vec![hy, Expr::sub(ux, Expr::int(2))])]),
        );
        out.push(("quw", quw));
    }
    out
}

/// Pairwise corner distances of the region, each bounded by 1.044.
pub fn diameter_entries() -> Vec<NamedInequality> {
    let mut out = Vec::new();
    for (wide, lo, hi, tag) in [
        (false, rat_int(10), rat_int(12), "y-le-2.4"),
        (true, rat_int(12), rat(251, 20), "y-ge-2.4"),
    ] {
        let cs = corners(wide);
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                out.push(NamedInequality {
                    schema: SCHEMA.to_string(),
                    id: format!("diam-1044/{tag}/{}-{}", cs[i].0, cs[j].0),
                    description: format!(
                        "Triangle v=(0,0), w=(2,0), u with |uv|=2.51 and |uw|=y, variable 0 is z=5y \
                         in [{lo}, {hi}]. Corners {} and {} of the region at distance >= 1.2 from \
                         every vertex lie less than 1.044 apart.",
                        cs[i].0, cs[j].0
                    ),
                    expr: cs[i].1.dist(&cs[j].1),
                    domain: RatBox::new(vec![(lo.clone(), hi.clone())]).expect("ordered"),
                    relation: Relation::Lt,
                    bound: Const::Rational(rat(261, 250)),
                    epsilon: rat(1, 100000),
                    method: Method::IntervalBb,
                    surrogate: None,
                    provenance: Provenance::PaperStated,
                    budget: 1 << 16,
                    refs: vec!["lemma: diameter of the far region is less than 1.044".into()],
                });
            }
        }
    }
    out
}

fn squares() -> Vec<Expr> {
    (0..6).map(|i| Expr::pow(Expr::var(i), 2)).collect()
}

/// One dihedral claim `dih(y) < c` or `dih(y) > c` along edge `y1`.
pub struct DihedralClaim {
    pub id: &'static str,
    pub summary: &'static str,
    pub domain: Vec<(Rational, Rational)>,
    pub relation: Relation,
    pub angle: Rational,
    /// Rational bound on `cot(angle)`: above it for `<`, below it for `>` and `>=`.
    pub cot: Rational,
    pub refs: Vec<&'static str>,
}

pub fn dihedral_claims() -> Vec<DihedralClaim> {
    let s = || (rat_int(2), rat(251, 100));
    let t = || (rat_int(2), rat(223, 100));
    let long = || (rat(251, 100), rat(16, 5));
    let pt = |x: Rational| (x.clone(), x);
    vec![
        DihedralClaim {
            id: "dih-w1w5-lt-1.4",
            summary: "y1, y2, y3, y5, y6 in [2, 2.51] and opposite edge y4 = 2: the dihedral angle is below 1.4.",
            domain: vec![s(), s(), s(), pt(rat_int(2)), s(), s()],
            relation: Relation::Lt,
            angle: rat(7, 5),
            cot: rat(69, 400),
            refs: vec!["calc 2799256461", "calc 5470795818"],
        },
        DihedralClaim {
            id: "dih-w2w3-ge-0.7",
            summary: "y1, y2, y3 in [2, 2.51], y4 = 2, y5 and y6 in [2.51, 3.2]: the dihedral angle is at least 0.7.",
            domain: vec![s(), s(), s(), pt(rat_int(2)), long(), long()],
            relation: Relation::Ge,
            angle: rat(7, 10),
            cot: rat(742, 625),
            refs: vec!["calc 2799256461", "calc 5470795818"],
        },
        DihedralClaim {
            id: "dih14-lt-1.3",
            summary: "y1 in [2, 2.23], y2, y3, y5, y6 in [2, 2.51], y4 = 2: the dihedral angle is below 1.3.",
            domain: vec![t(), s(), s(), pt(rat_int(2)), s(), s()],
            relation: Relation::Lt,
            angle: rat(13, 10),
            cot: rat(2777, 10000),
            refs: vec!["calc 7431506800", "calc 5568465464"],
        },
        DihedralClaim {
            id: "dih23-gt-0.8",
            summary: "y1, y2 in [2, 2.23], y3 in [2, 2.51], y4 = 2, y5 = y6 = 3.2: the dihedral angle exceeds 0.8.",
            domain: vec![t(), t(), s(), pt(rat_int(2)), pt(rat(16, 5)), pt(rat(16, 5))],
            relation: Relation::Gt,
            angle: rat(4, 5),
            cot: rat(607, 625),
            refs: vec!["calc 4741571261"],
        },
        DihedralClaim {
            id: "dih12-gt-0.5",
            summary: "y1, y3 in [2, 2.23], y2, y6 in [2, 2.51], y4 = 2.51, y5 = 3.2: the dihedral angle exceeds 0.5.",
            domain: vec![t(), s(), t(), pt(rat(251, 100)), pt(rat(16, 5)), s()],
            relation: Relation::Gt,
            angle: rat(1, 2),
            cot: rat(1144, 625),
            refs: vec!["calc 6915275259"],
        },
    ]
}

/// Polynomial form of the dihedral claims, checked by Bernstein coefficients.
///
/// With `x = y²`, `D` the Cayley-Menger polynomial and `D4 = ∂D/∂x4`, the angle
/// along `y1` is `π/2 − atan(D4/√(4·x1·D))`. For `D > 0` and a rational `k`:
/// * `dih < c` follows from `D4 > 0` and `D4² − 4k²·x1·D > 0` when `k ≥ cot c`;
/// * `dih > c` (or `>=`) follows from `D4² − 4k²·x1·D < 0` (or `<= 0`) when `k ≤ cot c`.
///
/// Each claim therefore becomes two or three entries under a common prefix.
pub fn dihedral_entries() -> Vec<NamedInequality> {
    let sq = squares();
    let d = delta_x_expr().substitute(&sq);
    let d4 = delta4_x_expr().substitute(&sq);
    let mut out = Vec::new();
    for c in dihedral_claims() {
        let k2x4 = Expr::rat(&c.cot * &c.cot * rat_int(4));
        let gap = Expr::sub(
            Expr::pow(d4.clone(), 2),
            Expr::mul(vec![k2x4, sq[0].clone(), d.clone()]),
        );
        let mut parts = vec![(
            "delta-pos",
            d.clone(),
            Relation::Gt,
            "The simplex is nondegenerate: D > 0.".to_string(),
        )];
        if c.relation.is_upper() {
            parts.push((
                "d4-pos",
                d4.clone(),
                Relation::Gt,
                "The angle is acute: D4 > 0.".to_string(),
            ));
            parts.push((
                "cot-bound",
                gap,
                Relation::Gt,
                format!("D4^2 - 4 k^2 x1 D > 0 with k = {} >= cot({}).", c.cot, c.angle),
            ));
        } else {
            let rel = if c.relation.is_strict() {
                Relation::Lt
            } else {
                Relation::Le
            };
            parts.push((
                "cot-bound",
                gap,
                rel,
                format!(
                    "D4^2 - 4 k^2 x1 D {} 0 with k = {} <= cot({}).",
                    rel.symbol(),
                    c.cot,
                    c.angle
                ),
            ));
        }
        for (tag, expr, relation, what) in parts {
            out.push(NamedInequality {
                schema: SCHEMA.to_string(),
                id: format!("{}/{tag}", c.id),
                description: format!("{} The angle is taken along edge y1. Part: {what}", c.summary),
                expr,
                domain: RatBox::new(c.domain.clone()).expect("ordered"),
                relation,
                bound: Const::Rational(rat_int(0)),
                epsilon: if relation.is_strict() {
                    rat(1, 1_000_000)
                } else {
                    rat_int(0)
                },
                method: Method::Bernstein,
                surrogate: None,
                provenance: Provenance::Reconstructed,
                budget: 1 << 14,
                refs: c.refs.iter().map(|s| s.to_string()).collect(),
            });
        }
    }
    out
}
