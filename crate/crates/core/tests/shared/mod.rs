//! Independent oracles and reference tables shared by the core test suites
//! and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeSet;

use qsa_core::engine::{AnswerSet, Session};
use qsa_core::model::{DecisionModel, DesignArea, DesignArea::*, GatewayKind, Node};

/// Fixed point of the enabled-edge relation, computed without the engine.
pub fn closure(model: &DecisionModel, answers: &AnswerSet) -> BTreeSet<String> {
    let mut active = BTreeSet::from([model.start.clone()]);
    loop {
        let mut grew = false;
        for id in active.clone() {
            let targets: Vec<String> = match model.node(&id) {
                Some(Node::Pattern(p)) => p.next.iter().cloned().collect(),
                Some(Node::Gateway(g)) => g
                    .branches
                    .iter()
                    .filter(|b| {
                        g.kind == GatewayKind::Parallel || answers.get(&g.id).is_some_and(|l| l.contains(&b.label))
                    })
                    .map(|b| b.target.clone())
                    .collect(),
                None => Vec::new(),
            };
            for t in targets {
                grew |= active.insert(t);
            }
        }
        if !grew {
            return active;
        }
    }
}

/// Checks a session built from `answers` against gateway semantics.
/// `answers` must be admissible for every gateway it mentions.
pub fn check_gateway_semantics(model: &DecisionModel, answers: &AnswerSet) -> Result<(), String> {
    let s = Session::from_answers(model, answers).map_err(|e| e.to_string())?;
    let expected = closure(model, answers);
    if s.active() != &expected {
        return Err(format!("active {:?} != closure {:?}", s.active(), expected));
    }
    for id in s.active() {
        let Some(g) = model.gateways.get(id) else { continue };
        let taken: BTreeSet<&str> = g
            .branches
            .iter()
            .filter(|b| s.path_to(&b.target).is_some_and(|p| p.len() >= 2 && p[p.len() - 2] == *id))
            .map(|b| b.label.as_str())
            .collect();
        let given = answers.get(id);
        match (g.kind, given) {
            (GatewayKind::Parallel, _) => {
                if let Some(b) = g.branches.iter().find(|b| !s.active().contains(&b.target)) {
                    return Err(format!("parallel {id} left {} inactive", b.target));
                }
            }
            (_, None) => {
                if !s.frontier().contains(id) {
                    return Err(format!("unanswered {id} missing from frontier"));
                }
            }
            (kind, Some(labels)) => {
                if kind == GatewayKind::Exclusive && labels.len() != 1 {
                    return Err(format!("exclusive {id} accepted {labels:?}"));
                }
                if labels.is_empty() {
                    return Err(format!("inclusive {id} accepted no branch"));
                }
                if s.answers().get(id) != Some(labels) {
                    return Err(format!("{id} answer not kept"));
                }
                for b in &g.branches {
                    let chosen = labels.contains(&b.label);
                    if chosen && !s.active().contains(&b.target) {
                        return Err(format!("{id}: chosen {} inactive", b.label));
                    }
                    if !chosen && taken.contains(b.label.as_str()) {
                        return Err(format!("{id}: unchosen {} was taken", b.label));
                    }
                }
            }
        }
    }
    if let Some((g, _)) = s.answers().iter().find(|(g, _)| !s.active().contains(*g)) {
        return Err(format!("answer for unreached {g} kept"));
    }
    let pending: BTreeSet<String> = s
        .active()
        .iter()
        .filter(|id| model.gateways.get(*id).is_some_and(|g| g.kind != GatewayKind::Parallel && answers.get(id).is_none()))
        .cloned()
        .collect();
    if s.frontier() != &pending {
        return Err(format!("frontier {:?} != pending {:?}", s.frontier(), pending));
    }
    Ok(())
}

pub const COUNTS: [(DesignArea, usize); 6] = [
    (Communication, 18),
    (Decomposition, 7),
    (DataProcessing, 12),
    (FaultTolerance, 8),
    (IntegrationOptimization, 9),
    (AlgorithmImplementation, 9),
];

pub const NAMES: [(DesignArea, &[&str]); 6] = [
    (
        Communication,
        &[
            "Quantum API Gateway",
            "Quantum Workflow Orchestration",
            "Quantum Proxy",
            "Broker-Client Separation",
            "Entanglement Distribution Strategy",
            "Quantum Teleportation",
            "Quantum Point-to-Point Communication",
            "Quantum Collective Communication",
            "Connection-Oriented Strategy",
            "Connectionless Strategy",
            "Quantum Overlay",
            "Quantum Communication Layered",
            "Entanglement-Assisted Channels",
            "Basic Broadcasting",
            "Multi-Sender/Multi-Receiver Broadcasting",
            "QKD Protocols",
            "Quantum Teleportation Protocol",
            "Quantum Burst Communication",
        ],
    ),
    (
        Decomposition,
        &[
            "Quantum-Classic Split Pattern",
            "Quantum Microservices Pattern",
            "Layered Architecture Pattern",
            "Quantum Multi-Tier Architectural Pattern",
            "Recursive Containment",
            "Single Responsibility Pattern",
            "Decomposed by Business Capabilities",
        ],
    ),
    (
        DataProcessing,
        &[
            "Pipe and Filter Pattern",
            "Consumer Pattern",
            "Data Driven Testing (DDT)",
            "Quantum Mediator Wrapper",
            "Quantum Broadcast Pattern",
            "Quantum Data Encoding",
            "Basis Encoding Strategy",
            "Quantum Associative Memory (QuAM)",
            "Amplitude Encoding Strategy",
            "Angle Encoding",
            "Quantum Random Access Memory (QRAM)",
            "Measurement Pattern",
        ],
    ),
    (
        FaultTolerance,
        &[
            "Sparing Pattern",
            "Comparison Pattern",
            "Voting Pattern",
            "Error Correction Pattern",
            "Readout Error Mitigation Pattern",
            "Gate Error Mitigation Pattern",
            "Decorator Design Pattern",
            "Quantum Patterns of Behavior (qPoB)",
        ],
    ),
    (
        IntegrationOptimization,
        &[
            "Integration Pattern",
            "Prototype Design Pattern",
            "Quantum Broadcast Pattern",
            "Decorator Design Pattern",
            "Transformer Design Pattern",
            "Quantum Service-Oriented Architecture Pattern",
            "Quantum Service Registry",
            "Bring Your Own Container (BYOC) Pattern",
            "Quantum Load Balancing Pattern",
        ],
    ),
    (
        AlgorithmImplementation,
        &[
            "Hybrid Module Pattern",
            "Quantum-Classic Split Pattern",
            "Classical-Quantum Interface",
            "Quantum Module Pattern",
            "Quantum Module Template",
            "Qubit Gate Pattern",
            "Brickwork Pattern",
            "Template-Matching Pattern",
            "Quantum Circuit Translator",
        ],
    ),
];

/// (area, pattern id, improved, degraded), enumerated mention by mention.
pub type Audit = (DesignArea, &'static str, &'static [&'static str], &'static [&'static str]);

pub const AUDIT: &[Audit] = &[
    (Communication, "quantum-api-gateway", &["flexibility", "modularity", "interoperability", "security", "scalability"], &["availability", "performance", "cost"]),
    (Communication, "quantum-workflow-orchestration", &["scalability", "performance", "modularity", "reliability"], &["complexity"]),
    (Communication, "quantum-proxy", &["maintainability", "interoperability", "security"], &["performance"]),
    (Communication, "broker-client-separation", &["modularity", "security", "scalability"], &["complexity"]),
    (Communication, "entanglement-distribution-strategy", &["scalability", "security", "adaptability", "configurability", "modularity", "performance"], &["complexity"]),
    (Communication, "quantum-teleportation", &["security", "reliability", "loss-tolerance"], &["scalability", "latency"]),
    (Communication, "quantum-point-to-point", &["performance", "reliability"], &["latency", "scalability"]),
    (Communication, "quantum-collective", &["scalability", "performance", "reusability", "cost"], &["flexibility"]),
    (Communication, "connection-oriented-strategy", &["scalability", "security", "reliability", "performance"], &["flexibility", "cost"]),
    (Communication, "connectionless-strategy", &["performance", "scalability", "flexibility", "cost"], &["reliability", "security"]),
    (Communication, "quantum-overlay", &["interoperability", "modularity", "usability", "scalability"], &["complexity", "cost"]),
    (Communication, "quantum-communication-layered", &["modularity", "performance", "scalability"], &["complexity", "latency"]),
    (Communication, "entanglement-assisted-channels", &["security", "performance", "scalability"], &[]),
    (Communication, "basic-broadcasting", &["security", "performance", "scalability"], &[]),
    (Communication, "multi-sender-multi-receiver-broadcasting", &["flexibility", "security", "scalability"], &[]),
    (Communication, "qkd-protocols", &["security", "reliability", "scalability", "flexibility"], &["performance", "compatibility"]),
    (Communication, "quantum-teleportation-protocol", &["security", "scalability", "performance"], &[]),
    (Communication, "quantum-burst-communication", &["performance", "scalability"], &["latency", "effort", "complexity"]),
    (Decomposition, "quantum-classic-split", &["flexibility", "modularity", "maintainability", "usability", "scalability"], &["performance"]),
    (Decomposition, "quantum-microservices", &["maintainability", "scalability", "performance"], &["flexibility"]),
    (Decomposition, "layered-architecture", &["maintainability", "performance", "testability"], &["effort", "security"]),
    (Decomposition, "quantum-multi-tier", &["compatibility", "modularity", "portability"], &["reliability"]),
    (Decomposition, "recursive-containment", &["security", "performance", "scalability"], &["reliability"]),
    (Decomposition, "single-responsibility", &["maintainability"], &[]),
    (Decomposition, "decomposed-by-business-capabilities", &["performance"], &[]),
    (DataProcessing, "pipe-and-filter", &["functionality", "security", "maintainability", "flexibility"], &["performance"]),
    (DataProcessing, "consumer", &["performance"], &[]),
    (DataProcessing, "data-driven-testing", &["interoperability", "maintainability", "modularity", "security"], &[]),
    (DataProcessing, "quantum-mediator-wrapper", &["modularity", "interoperability", "scalability"], &["maintainability", "performance", "cost"]),
    (DataProcessing, "quantum-broadcast", &["flexibility"], &[]),
    (DataProcessing, "quantum-data-encoding", &["scalability", "flexibility"], &[]),
    (DataProcessing, "basis-encoding", &["ease-of-implementation", "flexibility"], &["performance", "scalability"]),
    (DataProcessing, "quantum-associative-memory", &["efficiency", "interoperability"], &["flexibility", "complexity"]),
    (DataProcessing, "amplitude-encoding", &["performance", "scalability"], &["complexity", "error-rate"]),
    (DataProcessing, "angle-encoding", &["performance", "complexity"], &["capacity"]),
    (DataProcessing, "qram", &["efficiency", "scalability"], &["complexity", "latency"]),
    (DataProcessing, "measurement", &["performance", "scalability"], &["cost", "effort", "reliability"]),
    (FaultTolerance, "sparing", &["fault-recovery", "reliability", "flexibility"], &["performance", "cost"]),
    (FaultTolerance, "comparison", &["security", "fault-detection"], &["reliability", "fault-isolation"]),
    (FaultTolerance, "voting", &["fault-tolerance", "reliability", "flexibility"], &["complexity", "fault-diagnosis"]),
    (FaultTolerance, "error-correction", &["fault-tolerance", "scalability", "performance"], &["complexity"]),
    (FaultTolerance, "readout-error-mitigation", &["reusability", "accuracy", "adaptability"], &["scalability"]),
    (FaultTolerance, "gate-error-mitigation", &["compatibility"], &["performance", "complexity"]),
    (FaultTolerance, "decorator-design", &["fault-tolerance", "reliability"], &["complexity"]),
    (FaultTolerance, "quantum-patterns-of-behavior", &["reusability", "modularity", "scalability", "adaptability"], &["complexity", "performance", "maintainability"]),
    (IntegrationOptimization, "integration", &["performance", "testability"], &[]),
    (IntegrationOptimization, "prototype-design", &["extensibility", "scalability", "testability"], &["compatibility", "security"]),
    (IntegrationOptimization, "quantum-broadcast", &["flexibility", "maintainability"], &["accuracy"]),
    (IntegrationOptimization, "decorator-design", &["modularity", "flexibility"], &["complexity"]),
    (IntegrationOptimization, "transformer-design", &["performance"], &["maintainability"]),
    (IntegrationOptimization, "quantum-service-oriented-architecture", &["functionality", "extensibility", "flexibility", "availability"], &["cost", "effort", "performance"]),
    (IntegrationOptimization, "quantum-service-registry", &["functionality", "extensibility"], &[]),
    (IntegrationOptimization, "bring-your-own-container", &["extensibility"], &["complexity"]),
    (IntegrationOptimization, "quantum-load-balancing", &["interoperability"], &[]),
    (AlgorithmImplementation, "hybrid-module", &["reusability", "scalability", "maintainability"], &["complexity"]),
    (AlgorithmImplementation, "quantum-classic-split", &["modularity", "reusability", "interoperability"], &["complexity", "performance"]),
    (AlgorithmImplementation, "classical-quantum-interface", &["modularity", "reusability", "interoperability"], &["complexity", "performance"]),
    (AlgorithmImplementation, "quantum-module", &["reusability", "modularity", "flexibility"], &["maintainability"]),
    (AlgorithmImplementation, "quantum-module-template", &["reusability", "modularity", "flexibility", "adaptability"], &["complexity"]),
    (AlgorithmImplementation, "qubit-gate", &["availability", "discoverability", "scalability", "modularity", "reusability"], &["complexity", "cost", "effort", "flexibility", "performance", "testability"]),
    (AlgorithmImplementation, "brickwork", &["modularity"], &[]),
    (AlgorithmImplementation, "template-matching", &[], &["usability"]),
    (AlgorithmImplementation, "quantum-circuit-translator", &["reusability", "interoperability"], &["complexity", "performance"]),
];

pub fn normalize(name: &str) -> String {
    let mut s = name.to_lowercase();
    for suffix in [" pattern", " strategy"] {
        if let Some(stripped) = s.strip_suffix(suffix) {
            s = stripped.to_string();
        }
    }
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

