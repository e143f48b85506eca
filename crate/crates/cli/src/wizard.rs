//! Line-oriented questionnaire over a decision model.

use std::io::{BufRead, Write};

use qsa_core::engine::{start_session, Session, WeightVector};
use qsa_core::{DecisionModel, Gateway, GatewayKind, Vocabulary};

use crate::{parse_weight, Failure};

pub enum Outcome<'a> {
    Finished { session: Session<'a>, weights: WeightVector },
    Aborted,
}

fn read_line(input: &mut dyn BufRead) -> Result<Option<String>, Failure> {
    let mut line = String::new();
    match input.read_line(&mut line).map_err(Failure::io)? {
        0 => Ok(None),
        _ => Ok(Some(line.trim().to_string())),
    }
}

/// Branch labels from numbers or labels separated by commas or spaces.
fn parse_choice(gateway: &Gateway, text: &str) -> Result<Vec<String>, String> {
    let mut labels = Vec::new();
    for token in text.split([',', ' ']).filter(|t| !t.is_empty()) {
        let label = match token.parse::<usize>() {
            Ok(n) if (1..=gateway.branches.len()).contains(&n) => gateway.branches[n - 1].label.clone(),
            Ok(n) => return Err(format!("there is no option {n}")),
            Err(_) => match gateway.branch(token) {
                Some(b) => b.label.clone(),
                None => return Err(format!("`{token}` is not an option")),
            },
        };
        labels.push(label);
    }
    Ok(labels)
}

fn ask(out: &mut dyn Write, g: &Gateway, step: usize) -> Result<(), Failure> {
    let how = match g.kind {
        GatewayKind::Exclusive => "pick one",
        _ => "pick one or more, separated by commas",
    };
    writeln!(out).map_err(Failure::io)?;
    writeln!(out, "[{step}] {} ({})", g.question, g.id).map_err(Failure::io)?;
    for (i, b) in g.branches.iter().enumerate() {
        writeln!(out, "  {}) {}: {}", i + 1, b.label, b.condition).map_err(Failure::io)?;
    }
    write!(out, "{how}, `back` or `quit` > ").map_err(Failure::io)?;
    out.flush().map_err(Failure::io)
}

/// Asks frontier gateways in id order until the walk is complete, then
/// asks for weights unless `preset` is given.
pub fn run<'a>(
    model: &'a DecisionModel,
    vocabulary: &Vocabulary,
    preset: Option<WeightVector>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<Outcome<'a>, Failure> {
    let mut session = start_session(model)?;
    let mut history: Vec<String> = Vec::new();
    let mut revisit: Option<String> = None;

    loop {
        let Some(current) = revisit.clone().or_else(|| session.frontier().iter().next().cloned()) else {
            let weights = match &preset {
                Some(w) => w.clone(),
                None => match ask_weights(vocabulary, input, out)? {
                    WeightsReply::Weights(w) => w,
                    WeightsReply::Quit => return Ok(Outcome::Aborted),
                    WeightsReply::Back => {
                        match history.pop() {
                            Some(prev) => revisit = Some(prev),
                            None => writeln!(out, "nothing to go back to").map_err(Failure::io)?,
                        }
                        continue;
                    }
                },
            };
            return Ok(Outcome::Finished { session, weights });
        };
        let gateway = &model.gateways[&current];
        ask(out, gateway, history.len() + 1)?;
        let Some(line) = read_line(input)? else { return Ok(Outcome::Aborted) };
        match line.as_str() {
            "quit" | "exit" => return Ok(Outcome::Aborted),
            "back" => {
                match history.pop() {
                    Some(prev) => revisit = Some(prev),
                    None => writeln!(out, "nothing to go back to").map_err(Failure::io)?,
                }
                continue;
            }
            _ => {}
        }
        let labels = match parse_choice(gateway, &line) {
            Ok(l) => l,
            Err(msg) => {
                writeln!(out, "{msg}").map_err(Failure::io)?;
                continue;
            }
        };
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        match session.answer(&current, &refs) {
            Ok(next) => {
                session = next;
                history.push(current);
                revisit = None;
            }
            Err(e) => writeln!(out, "{e}").map_err(Failure::io)?,
        }
    }
}

enum WeightsReply {
    Weights(WeightVector),
    Back,
    Quit,
}

fn ask_weights(vocabulary: &Vocabulary, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<WeightsReply, Failure> {
    loop {
        writeln!(out).map_err(Failure::io)?;
        write!(out, "weights as qa=value, separated by spaces (empty for none), `back` or `quit` > ")
            .map_err(Failure::io)?;
        out.flush().map_err(Failure::io)?;
        let Some(line) = read_line(input)? else { return Ok(WeightsReply::Quit) };
        match line.as_str() {
            "quit" | "exit" => return Ok(WeightsReply::Quit),
            "back" => return Ok(WeightsReply::Back),
            _ => {}
        }
        let parsed: Result<Vec<_>, Failure> = line.split_whitespace().map(parse_weight).collect();
        match parsed.and_then(|pairs| WeightVector::new(pairs, vocabulary).map_err(Failure::from)) {
            Ok(w) => return Ok(WeightsReply::Weights(w)),
            Err(e) => writeln!(out, "{}", e.message).map_err(Failure::io)?,
        }
    }
}
