//! Seeded generators for property and acceptance tests.
//!
//! Enabled by the `testkit` feature. Everything is driven by a caller-owned
//! [`ChaCha8Rng`] so failures reproduce from a seed.

use rand::seq::SliceRandom;
use rand::Rng;
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

use crate::engine::{AnswerSet, WeightVector};
use crate::model::{
    Branch, DecisionModel, DesignArea, Gateway, GatewayKind, Pattern, QualityImpact, Vocabulary,
};

/// Attributes the generator draws impacts and weights from.
pub const QA_POOL: [&str; 8] =
    ["security", "performance", "scalability", "latency", "cost", "modularity", "reliability", "flexibility"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_patterns: usize,
    pub max_gateways: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_patterns: 12, max_gateways: 5 }
    }
}

const AWKWARD_TEXT: [&str; 5] = ["plain", "with \"quotes\"", "back\\slash", "two\nlines\tand tab", "ünïcødé ✓"];

fn id_pool(rng: &mut ChaCha8Rng, prefix: char, n: usize) -> Vec<String> {
    let mut ids: Vec<String> = (0..n).map(|i| format!("{prefix}{}", (b'a' + i as u8) as char)).collect();
    ids.shuffle(rng);
    ids
}

/// A random model that passes validation against the standard vocabulary.
///
/// Nodes are laid out in a random topological order with the start first;
/// every later node gets one edge from an earlier one, then extra forward
/// edges are sprinkled in, so the graph is acyclic and fully reachable.
pub fn random_model(rng: &mut ChaCha8Rng, limits: Limits) -> DecisionModel {
    let area = DesignArea::ALL[rng.gen_range(0..DesignArea::ALL.len())];
    let n_patterns = rng.gen_range(1..=limits.max_patterns);
    let n_gateways = rng.gen_range(0..=limits.max_gateways.min(n_patterns));
    let gateway_ids = id_pool(rng, 'g', n_gateways);
    let pattern_ids = id_pool(rng, 'p', n_patterns);

    // Topological order: a gateway (if any) first, a pattern last.
    let mut rest: Vec<(bool, String)> = gateway_ids.iter().skip(1).map(|g| (true, g.clone())).collect();
    rest.extend(pattern_ids.iter().map(|p| (false, p.clone())));
    rest.shuffle(rng);
    if let Some(pos) = rest.iter().rposition(|(gw, _)| !gw) {
        let last = rest.remove(pos);
        rest.push(last);
    }
    let mut order: Vec<(bool, String)> = gateway_ids.first().map(|g| (true, g.clone())).into_iter().collect();
    order.extend(rest);

    let mut gateways: Vec<Gateway> = Vec::new();
    let mut patterns: Vec<Pattern> = Vec::new();
    let mut index = std::collections::BTreeMap::new();
    for (i, (is_gw, id)) in order.iter().enumerate() {
        index.insert(id.clone(), i);
        if *is_gw {
            let kind = GatewayKind::ALL[rng.gen_range(0..3)];
            gateways.push(Gateway::new(id.clone(), kind, AWKWARD_TEXT[rng.gen_range(0..AWKWARD_TEXT.len())]));
        } else {
            patterns.push(random_pattern(rng, id, area));
        }
    }

    let add_edge = |gateways: &mut Vec<Gateway>, patterns: &mut Vec<Pattern>, from: &str, to: &str| -> bool {
        if let Some(g) = gateways.iter_mut().find(|g| g.id == from) {
            if g.branches.iter().any(|b| b.target == to) {
                return false;
            }
            let label = format!("b{}", g.branches.len());
            g.branches.push(Branch::new(label, format!("when {to}"), to));
            true
        } else if let Some(p) = patterns.iter_mut().find(|p| p.id == from) {
            if p.next.is_some() {
                return false;
            }
            p.next = Some(to.to_string());
            true
        } else {
            false
        }
    };

    for i in 1..order.len() {
        let to = order[i].1.clone();
        // Prefer gateways as parents; patterns whose `next` is free also work.
        let mut parents: Vec<usize> = (0..i).collect();
        parents.shuffle(rng);
        parents.sort_by_key(|j| !order[*j].0 || rng.gen_bool(0.15));
        for j in parents {
            if add_edge(&mut gateways, &mut patterns, &order[j].1, &to) {
                break;
            }
        }
    }
    let extra = rng.gen_range(0..=order.len());
    for _ in 0..extra {
        let a = rng.gen_range(0..order.len());
        if a + 1 < order.len() {
            let b = rng.gen_range(a + 1..order.len());
            let (from, to) = (order[a].1.clone(), order[b].1.clone());
            add_edge(&mut gateways, &mut patterns, &from, &to);
        }
    }
    // Arity repairs: every gateway needs a branch, exclusive ones two.
    for g in gateways.iter_mut() {
        let pos = index[&g.id];
        let later: Vec<&String> = order[pos + 1..].iter().map(|(_, id)| id).collect();
        let need = if g.kind == GatewayKind::Exclusive { 2 } else { 1 };
        for t in later.iter() {
            if g.branches.len() >= need {
                break;
            }
            if !g.branches.iter().any(|b| &&b.target == t) {
                let label = format!("b{}", g.branches.len());
                g.branches.push(Branch::new(label, format!("when {t}"), t.as_str()));
            }
        }
        if g.branches.len() < need {
            g.kind = GatewayKind::Inclusive;
        }
    }

    // Symmetric complements between random pattern pairs.
    if patterns.len() >= 2 && rng.gen_bool(0.4) {
        let mut ids: Vec<String> = patterns.iter().map(|p| p.id.clone()).collect();
        ids.shuffle(rng);
        let (a, b) = (ids[0].clone(), ids[1].clone());
        for p in patterns.iter_mut() {
            if p.id == a {
                p.complements.push(b.clone());
            } else if p.id == b {
                p.complements.push(a.clone());
            }
        }
    }

    let start = order[0].1.clone();
    let mut model = DecisionModel::new(area, AWKWARD_TEXT[rng.gen_range(0..AWKWARD_TEXT.len())], start);
    if rng.gen_bool(0.3) {
        model.meta.version = Some("1.0".into());
    }
    if rng.gen_bool(0.5) {
        model.meta.refs.push("generated".into());
    }
    for g in gateways {
        model = model.with_gateway(g);
    }
    for p in patterns {
        model = model.with_pattern(p);
    }
    model
}

fn random_pattern(rng: &mut ChaCha8Rng, id: &str, area: DesignArea) -> Pattern {
    let mut p = Pattern::new(id, format!("Pattern {}", id.to_uppercase()), area);
    let mut pool = QA_POOL.to_vec();
    pool.shuffle(rng);
    let k = rng.gen_range(0..=4);
    // Improvements first so impacts survive a serialize/parse round trip.
    let mut impacts: Vec<QualityImpact> = pool[..k]
        .iter()
        .map(|qa| if rng.gen_bool(0.5) { QualityImpact::improves(*qa) } else { QualityImpact::degrades(*qa) })
        .collect();
    impacts.sort_by_key(|i| i.direction.sign() < 0);
    p.impacts = impacts;
    if rng.gen_bool(0.3) {
        p.summary = AWKWARD_TEXT[rng.gen_range(0..AWKWARD_TEXT.len())].to_string();
    }
    for _ in 0..rng.gen_range(0..=2) {
        p.constraints.push(AWKWARD_TEXT[rng.gen_range(0..AWKWARD_TEXT.len())].to_string());
    }
    p.refs.push(format!("src-{}", rng.gen_range(1..4)));
    if rng.gen_bool(0.2) {
        p.canonical = Some(format!("{id}-canon"));
    }
    p
}

/// Nonnegative weights over a random subset of [`QA_POOL`], up to two decimals.
pub fn random_weights(rng: &mut ChaCha8Rng) -> WeightVector {
    let mut pairs: Vec<(&str, Decimal)> = Vec::new();
    for qa in QA_POOL {
        if rng.gen_bool(0.6) {
            pairs.push((qa, Decimal::new(rng.gen_range(0..1000), rng.gen_range(0..3))));
        }
    }
    WeightVector::new(pairs, &Vocabulary::standard()).expect("pool attributes are in the vocabulary")
}

/// An admissible answer for every non-parallel gateway, reached or not.
pub fn random_answers(rng: &mut ChaCha8Rng, model: &DecisionModel) -> AnswerSet {
    let mut answers = AnswerSet::new();
    for g in model.gateways.values() {
        let labels: Vec<String> = g.branches.iter().map(|b| b.label.clone()).collect();
        let chosen = match g.kind {
            GatewayKind::Parallel => continue,
            GatewayKind::Exclusive => vec![labels[rng.gen_range(0..labels.len())].clone()],
            GatewayKind::Inclusive => {
                let mut pick: Vec<String> = labels.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                if pick.is_empty() {
                    pick.push(labels[rng.gen_range(0..labels.len())].clone());
                }
                pick
            }
        };
        answers.set(&g.id, chosen);
    }
    answers
}

/// A valid but non-canonical rendering of `model`: shuffled blocks and
/// statements, stray comments, blank lines and uneven indentation.
pub fn noisy_document(rng: &mut ChaCha8Rng, model: &DecisionModel) -> String {
    let q = |s: &str| {
        let mut out = String::from("\"");
        for c in s.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                '\t' => out.push_str("\\t"),
                '\r' => out.push_str("\\r"),
                c => out.push(c),
            }
        }
        out.push('"');
        out
    };
    let pad = |rng: &mut ChaCha8Rng| " ".repeat(rng.gen_range(0..6));
    let noise = |rng: &mut ChaCha8Rng| match rng.gen_range(0..6) {
        0 => "\n".to_string(),
        1 => format!("{}# note {{ -> \"\n", " ".repeat(rng.gen_range(0..4))),
        _ => String::new(),
    };

    let mut blocks: Vec<String> = Vec::new();
    blocks.push(format!("{}start->{}  # begin\n", pad(rng), model.start));
    if let Some(v) = &model.meta.version {
        blocks.push(format!("{}version {}\n", pad(rng), q(v)));
    }
    // Model refs keep their relative order: emitted as one block.
    let refs: String = model.meta.refs.iter().map(|r| format!("ref {}\n", q(r))).collect();
    if !refs.is_empty() {
        blocks.push(refs);
    }
    for g in model.gateways.values() {
        let props = [format!("kind = {}", g.kind.as_str()), format!("question={}", q(&g.question))];
        let (a, b) = if rng.gen_bool(0.5) { (&props[0], &props[1]) } else { (&props[1], &props[0]) };
        let mut s = format!("{}gateway {} {a} {b}{{\n", pad(rng), g.id);
        for br in &g.branches {
            s.push_str(&noise(rng));
            s.push_str(&format!("{}branch {} when {} ->{}\n", pad(rng), br.label, q(&br.condition), br.target));
        }
        s.push_str(&format!("{}}}\n", pad(rng)));
        blocks.push(s);
    }
    for p in model.patterns.values() {
        let mut items: Vec<String> = Vec::new();
        if !p.summary.is_empty() {
            items.push(format!("summary {}", q(&p.summary)));
        }
        let imp: Vec<&str> = p.improved().collect();
        if !imp.is_empty() {
            items.push(format!("improves {}", imp.join(" ,")));
        }
        let deg: Vec<&str> = p.degraded().collect();
        // Degradations must stay after improvements to keep impact order.
        let deg_line = (!deg.is_empty()).then(|| format!("degrades {}", deg.join(", ")));
        let cons: String = p.constraints.iter().map(|c| format!("constraint {}\n", q(c))).collect();
        if !cons.is_empty() {
            items.push(cons.trim_end().to_string());
        }
        if !p.complements.is_empty() {
            items.push(format!("complements {}", p.complements.join(",")));
        }
        if let Some(n) = &p.next {
            items.push(format!("next -> {n}"));
        }
        let refs: String = p.refs.iter().map(|r| format!("ref {}\n", q(r))).collect();
        if !refs.is_empty() {
            items.push(refs.trim_end().to_string());
        }
        if let Some(c) = &p.canonical {
            items.push(format!("canonical {c}"));
        }
        items.shuffle(rng);
        if let Some(d) = deg_line {
            let at = items.iter().position(|i| i.starts_with("improves ")).map_or(0, |i| i + 1);
            let at = rng.gen_range(at..=items.len());
            items.insert(at, d);
        }
        let mut s = format!("{}pattern {} name={} {{\n", pad(rng), p.id, q(&p.name));
        for item in items {
            s.push_str(&noise(rng));
            for line in item.lines() {
                s.push_str(&format!("{}{line}\n", pad(rng)));
            }
        }
        s.push_str("}\n");
        blocks.push(s);
    }
    blocks.shuffle(rng);

    let mut out = String::new();
    out.push_str(&noise(rng));
    out.push_str(&format!("model {} {} {{\n", model.area.as_str(), q(&model.meta.title)));
    for b in blocks {
        out.push_str(&noise(rng));
        out.push_str(&b);
    }
    out.push_str("}\n");
    out.push_str(&noise(rng));
    out
}
