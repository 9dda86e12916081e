//! Mal'cev conditions generated from inequalities `p ≤ q`.
//!
//! Both algorithms work on the labelled graphs `G(p)` (with `m` vertices)
//! and `G(q)`. Every vertex `z_i` of `G(q)` gets an `m`-ary symbol `t_i`,
//! where `t_1` and `t_2` are the first two projections. Variables are the
//! vertices of `G(p)`, written `x1..xm`.
//!
//! * [`gen_eq`] emits, for each edge `(z_i, z_j)` of `G(q)` labelled `X_s`,
//!   `t_i(v) ≈ t_j(v)` where `v` sends each `x_d` to the least variable in
//!   its class of `Eqv(T_s(p))`.
//! * [`gen_eqr`] emits, for the same edge, a fresh `(m + c(s))`-ary symbol
//!   `t_(i,j,s)` with `t_(i,j,s)(x, x_{i_1}, …) ≈ t_i(x)` and
//!   `t_(i,j,s)(x, x_{j_1}, …) ≈ t_j(x)`, with `T_s(p) = [(i_t, j_t)]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relterm::{expand_plus, is_regular, Inequality, RelTerm};
use crate::termgraph::{build_graph, edge_pairs, vertex_partition, LabelledGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolRole {
    /// `π_i^m`.
    Projection(usize),
    /// `t_i` for a vertex `z_i` of `G(q)`, `i ≥ 3`.
    Vertex(usize),
    /// `t_(i,j,s)` for an edge of `G(q)`.
    Edge { from: usize, to: usize, label: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSymbol {
    pub name: String,
    pub arity: usize,
    pub role: SymbolRole,
}

impl TermSymbol {
    pub fn projection(&self) -> Option<usize> {
        match self.role {
            SymbolRole::Projection(i) => Some(i),
            _ => None,
        }
    }

    pub fn is_projection(&self) -> bool {
        self.projection().is_some()
    }
}

/// A symbol applied to variables `x_{args[0]}, x_{args[1]}, …` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Application {
    pub symbol: usize,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalIdentity {
    pub lhs: Application,
    pub rhs: Application,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Classic,
    Crr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalcevCondition {
    pub source: String,
    pub algorithm: Algorithm,
    pub k: Option<usize>,
    /// Vertex count of `G(p)`.
    pub m: usize,
    /// `c(s)` per variable of `p`, keyed by display name.
    pub pair_counts: BTreeMap<String, usize>,
    pub symbols: Vec<TermSymbol>,
    pub identities: Vec<FormalIdentity>,
}

/// Either a variable or a non-projection symbol applied to variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolved {
    Var(usize),
    App(usize, Vec<usize>),
}

impl MalcevCondition {
    pub fn symbol(&self, i: usize) -> &TermSymbol {
        &self.symbols[i]
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Largest variable index used by any identity.
    pub fn variable_count(&self) -> usize {
        self.identities
            .iter()
            .flat_map(|id| id.lhs.args.iter().chain(&id.rhs.args))
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn resolve(&self, app: &Application) -> Resolved {
        match self.symbols[app.symbol].projection() {
            Some(i) => Resolved::Var(app.args[i - 1]),
            None => Resolved::App(app.symbol, app.args.clone()),
        }
    }

    /// Identities whose two sides are syntactically equal after resolving projections.
    pub fn is_trivial(&self, id: &FormalIdentity) -> bool {
        self.resolve(&id.lhs) == self.resolve(&id.rhs)
    }

    /// Number of symbols per arity, skipping projections.
    pub fn arity_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for s in self.symbols.iter().filter(|s| !s.is_projection()) {
            *h.entry(s.arity).or_insert(0) += 1;
        }
        h
    }

    pub fn render(&self, format: ConditionFormat, prune_trivial: bool) -> String {
        render_condition(self, format, prune_trivial)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: ConditionJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidCondition(e.to_string()))?;
        let symbols: Vec<TermSymbol> = j
            .symbols
            .iter()
            .map(|s| TermSymbol {
                name: s.name.clone(),
                arity: s.arity,
                role: match s.projection {
                    Some(i) => SymbolRole::Projection(i),
                    None => SymbolRole::Vertex(0),
                },
            })
            .collect();
        let find = |a: &AppJson| -> Result<Application> {
            let symbol = symbols
                .iter()
                .position(|s| s.name == a.symbol)
                .ok_or_else(|| Error::InvalidCondition(format!("unknown symbol `{}`", a.symbol)))?;
            if symbols[symbol].arity != a.args.len() || a.args.contains(&0) {
                return Err(Error::InvalidCondition(format!("bad arguments for `{}`", a.symbol)));
            }
            Ok(Application {
                symbol,
                args: a.args.clone(),
            })
        };
        let identities = j
            .identities
            .iter()
            .map(|id| {
                Ok(FormalIdentity {
                    lhs: find(&id.lhs)?,
                    rhs: find(&id.rhs)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MalcevCondition {
            source: j.source,
            algorithm: j.algorithm,
            k: j.k,
            m: j.m,
            pair_counts: BTreeMap::new(),
            symbols,
            identities,
        })
    }
}

/// Shared setup: graphs of both sides and the `m`-ary vertex symbols of `G(q)`.
struct Setup {
    gp: LabelledGraph,
    gq: LabelledGraph,
    m: usize,
    symbols: Vec<TermSymbol>,
    pair_counts: BTreeMap<String, usize>,
}

fn setup(p: &RelTerm, q: &RelTerm) -> Result<Setup> {
    let gp = build_graph(p)?;
    let gq = build_graph(q)?;
    let m = gp.vertex_count();
    let mut symbols = vec![
        TermSymbol {
            name: "pi1".into(),
            arity: m,
            role: SymbolRole::Projection(1),
        },
        TermSymbol {
            name: "pi2".into(),
            arity: m,
            role: SymbolRole::Projection(2),
        },
    ];
    for i in 3..=gq.vertex_count() {
        symbols.push(TermSymbol {
            name: format!("t{i}"),
            arity: m,
            role: SymbolRole::Vertex(i),
        });
    }
    let pair_counts = edge_pairs(&gp)
        .iter()
        .map(|(v, t)| (v.display_name(), t.len()))
        .collect();
    Ok(Setup {
        gp,
        gq,
        m,
        symbols,
        pair_counts,
    })
}

fn source_of(p: &RelTerm, q: &RelTerm) -> String {
    Inequality::new(p.clone(), q.clone()).to_string()
}

/// `t_i` for vertex `z_i` of `G(q)` sits at symbol index `i - 1`.
fn vertex_symbol(i: usize) -> usize {
    i - 1
}

/// The classical condition with collapsed variables.
pub fn gen_eq(p: &RelTerm, q: &RelTerm) -> Result<MalcevCondition> {
    let s = setup(p, q)?;
    let mut identities = Vec::with_capacity(s.gq.edges().len());
    let mut collapsed: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in s.gq.edges() {
        let args = collapsed
            .entry(e.label.index())
            .or_insert_with(|| {
                let part = vertex_partition(&s.gp, &e.label);
                (1..=s.m).map(|d| part.representative(d)).collect()
            })
            .clone();
        identities.push(FormalIdentity {
            lhs: Application {
                symbol: vertex_symbol(e.from),
                args: args.clone(),
            },
            rhs: Application {
                symbol: vertex_symbol(e.to),
                args,
            },
        });
    }
    Ok(MalcevCondition {
        source: source_of(p, q),
        algorithm: Algorithm::Classic,
        k: None,
        m: s.m,
        pair_counts: s.pair_counts,
        symbols: s.symbols,
        identities,
    })
}

/// The condition for compatible reflexive relations.
pub fn gen_eqr(p: &RelTerm, q: &RelTerm) -> Result<MalcevCondition> {
    let Setup {
        gp,
        gq,
        m,
        mut symbols,
        pair_counts,
    } = setup(p, q)?;
    let pairs = edge_pairs(&gp);
    let base: Vec<usize> = (1..=m).collect();
    let mut identities = Vec::with_capacity(2 * gq.edges().len());
    for e in gq.edges() {
        let t = pairs.get(&e.label);
        let label = e.label.display_name();
        let fresh = symbols.len();
        symbols.push(TermSymbol {
            name: format!("t_({},{},{})", e.from, e.to, label),
            arity: m + t.len(),
            role: SymbolRole::Edge {
                from: e.from,
                to: e.to,
                label,
            },
        });
        let left: Vec<usize> = base.iter().copied().chain(t.iter().map(|&(i, _)| i)).collect();
        let right: Vec<usize> = base.iter().copied().chain(t.iter().map(|&(_, j)| j)).collect();
        identities.push(FormalIdentity {
            lhs: Application {
                symbol: fresh,
                args: left,
            },
            rhs: Application {
                symbol: vertex_symbol(e.from),
                args: base.clone(),
            },
        });
        identities.push(FormalIdentity {
            lhs: Application {
                symbol: fresh,
                args: right,
            },
            rhs: Application {
                symbol: vertex_symbol(e.to),
                args: base.clone(),
            },
        });
    }
    Ok(MalcevCondition {
        source: source_of(p, q),
        algorithm: Algorithm::Crr,
        k: None,
        m,
        pair_counts,
        symbols,
        identities,
    })
}

/// `gen_eqr(p, q^(k))` for every `k` in `k_min..=k_max`.
pub fn gen_eqr_family(p: &RelTerm, q: &RelTerm, k_min: usize, k_max: usize) -> Result<Vec<MalcevCondition>> {
    gen_family(p, q, k_min, k_max, Algorithm::Crr)
}

/// A k-indexed family for either algorithm; `q` may contain `+`.
pub fn gen_family(
    p: &RelTerm,
    q: &RelTerm,
    k_min: usize,
    k_max: usize,
    algorithm: Algorithm,
) -> Result<Vec<MalcevCondition>> {
    if !p.is_plus_free() {
        return Err(Error::PlusNotAllowed);
    }
    if k_min < 2 {
        return Err(Error::InvalidK { k: k_min, min: 2 });
    }
    (k_min..=k_max)
        .map(|k| {
            let qk = expand_plus(q, k)?;
            let mut c = match algorithm {
                Algorithm::Classic => gen_eq(p, &qk)?,
                Algorithm::Crr => gen_eqr(p, &qk)?,
            };
            c.k = Some(k);
            Ok(c)
        })
        .collect()
}

/// The `l`- and `r`-collapsed identities that follow from [`gen_eq`] for
/// regular `p`. Symbol indices refer to the table of `gen_eq(p, q)`.
///
/// For each edge `(z_i, z_j)` of `G(q)` labelled `X_s`: the `l` vector sets
/// both positions of every pair `(a, b)` of `T_s(p)` to `x_a`, the `r`
/// vector sets both to `x_b`; all other positions keep their own variable.
pub fn lr_consequences(p: &RelTerm, q: &RelTerm) -> Result<Vec<FormalIdentity>> {
    if !p.is_plus_free() || !q.is_plus_free() {
        return Err(Error::PlusNotAllowed);
    }
    if !is_regular(p)? {
        return Err(Error::NotRegular(p.to_string()));
    }
    let gp = build_graph(p)?;
    let gq = build_graph(q)?;
    let m = gp.vertex_count();
    let pairs = edge_pairs(&gp);
    let mut out = Vec::with_capacity(2 * gq.edges().len());
    for e in gq.edges() {
        if vertex_partition(&gp, &e.label).max_class_size() > 2 {
            return Err(Error::NotRegular(p.to_string()));
        }
        let t = pairs.get(&e.label);
        let mut l: Vec<usize> = (1..=m).collect();
        let mut r = l.clone();
        for &(a, b) in t {
            l[a - 1] = a;
            l[b - 1] = a;
            r[a - 1] = b;
            r[b - 1] = b;
        }
        for args in [l, r] {
            out.push(FormalIdentity {
                lhs: Application {
                    symbol: vertex_symbol(e.from),
                    args: args.clone(),
                },
                rhs: Application {
                    symbol: vertex_symbol(e.to),
                    args,
                },
            });
        }
    }
    Ok(out)
}

/// File-name stem for a condition: `X o X <= X` becomes `X-o-X-le-X`.
pub fn slug(source: &str) -> String {
    let spaced = source
        .replace("<=", " le ")
        .replace('≤', " le ")
        .replace(['&', '∧'], " and ")
        .replace('∘', " o ")
        .replace('+', " plus ");
    let words: Vec<String> = spaced
        .split(|ch: char| !(ch.is_alphanumeric() || ch == '_'))
        .filter(|w| !w.is_empty())
        .map(String::from)
        .collect();
    words.join("-")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionFormat {
    Text,
    Latex,
    Json,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    name: String,
    arity: usize,
    projection: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct AppJson {
    symbol: String,
    args: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct IdentityJson {
    lhs: AppJson,
    rhs: AppJson,
}

#[derive(Serialize, Deserialize)]
struct ConditionJson {
    source: String,
    algorithm: Algorithm,
    k: Option<usize>,
    m: usize,
    symbols: Vec<SymbolJson>,
    identities: Vec<IdentityJson>,
}

fn app_text(c: &MalcevCondition, a: &Application, latex: bool) -> String {
    let var = |i: usize| if latex { format!("x_{{{i}}}") } else { format!("x{i}") };
    match c.resolve(a) {
        Resolved::Var(i) => var(i),
        Resolved::App(s, args) => {
            let name = &c.symbols[s].name;
            let head = if latex {
                match name.strip_prefix('t') {
                    Some(rest) => format!("t_{{{}}}", rest.trim_start_matches('_')),
                    None => name.clone(),
                }
            } else {
                name.clone()
            };
            let args: Vec<String> = args.into_iter().map(var).collect();
            format!("{head}({})", args.join(if latex { ", " } else { "," }))
        }
    }
}

pub fn render_condition(c: &MalcevCondition, format: ConditionFormat, prune_trivial: bool) -> String {
    let kept = c
        .identities
        .iter()
        .filter(|id| !(prune_trivial && c.is_trivial(id)));
    match format {
        ConditionFormat::Text => {
            let mut out = String::new();
            for id in kept {
                let _ = writeln!(out, "{} = {}", app_text(c, &id.lhs, false), app_text(c, &id.rhs, false));
            }
            out
        }
        ConditionFormat::Latex => {
            let mut out = String::from("\\begin{align*}\n");
            for id in kept {
                let _ = writeln!(
                    out,
                    "{} &\\approx {} \\\\",
                    app_text(c, &id.lhs, true),
                    app_text(c, &id.rhs, true)
                );
            }
            out.push_str("\\end{align*}\n");
            out
        }
        ConditionFormat::Json => {
            let app = |a: &Application| AppJson {
                symbol: c.symbols[a.symbol].name.clone(),
                args: a.args.clone(),
            };
            let j = ConditionJson {
                source: c.source.clone(),
                algorithm: c.algorithm,
                k: c.k,
                m: c.m,
                symbols: c
                    .symbols
                    .iter()
                    .map(|s| SymbolJson {
                        name: s.name.clone(),
                        arity: s.arity,
                        projection: s.projection(),
                    })
                    .collect(),
                identities: kept
                    .map(|id| IdentityJson {
                        lhs: app(&id.lhs),
                        rhs: app(&id.rhs),
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&j).expect("condition serializes");
            s.push('\n');
            s
        }
    }
}
