//! Command dispatch: resolve session bindings, call the library, shape the
//! result into a report.

use crate::report::Report;
use crate::session::{Session, SessionError};
use phiflat::blowup::{rees_chart, strict_transform_module};
use phiflat::cakernel::{Ideal, MonomialOrder, Poly};
use phiflat::depth::{self, PresentedModule};
use phiflat::flatten::{
    flatten, verify_certificate, FlatteningCertificate, FlatteningProblem, VerdictRecord,
};
use phiflat::philocal::{
    flat_over_philocal, push_valuation, structure_check, FlatVerdict, PhiLocalModel, Value,
};
use phiflat::phiring::PhiRing;
use phiflat::valuative::{select_chart, trace_through_blowups, ValuativePoint};
use serde_json::{json, Value as Json};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("computation error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit codes: 4 for parse/validation problems, 5 for internal ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Session(_) | CliError::Validation(_) | CliError::Io(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// A resolved command ready to run against a session.
#[derive(Clone, Debug)]
pub enum Command {
    Groebner {
        ideal: String,
        order: Option<MonomialOrder>,
    },
    Admissible {
        supports: String,
        ideal: String,
    },
    Purify {
        supports: String,
        module: String,
    },
    Close {
        supports: String,
        module: String,
        max_steps: usize,
    },
    Deep {
        supports: String,
        module: String,
        degree: u8,
    },
    Cech {
        module: String,
        ideal: String,
        q: u8,
        max_steps: usize,
    },
    PhilocalCheck {
        valuation: String,
        split: usize,
        samples: Vec<String>,
    },
    PhilocalPush {
        valuation: String,
        supports: String,
    },
    PhilocalFlat {
        valuation: String,
        split: usize,
        module: String,
        multipliers: Vec<String>,
    },
    ValuationEval {
        valuation: String,
        poly: String,
    },
    ValuationChart {
        valuation: String,
        ideal: String,
    },
    ValuationTrace {
        valuation: String,
        centers: Vec<Vec<String>>,
    },
    BlowupChart {
        ring: String,
        center: String,
        index: usize,
    },
    BlowupStrict {
        module: String,
        center: String,
        index: usize,
    },
    Flatten {
        supports: String,
        module: String,
        max_rounds: usize,
        threads: usize,
    },
    Verify {
        supports: String,
        module: String,
        certificate: Box<FlatteningCertificate>,
    },
}

/// Exit status carried alongside a successful report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Unresolved,
    InputNotFlatOnU,
    /// A certificate that failed verification.
    Invalid,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::Unresolved => 2,
            RunStatus::InputNotFlatOnU => 3,
            RunStatus::Invalid => 4,
        }
    }
}

fn ideal_of(session: &Session, name: &str) -> Result<Ideal, CliError> {
    let named = session.ideal(name)?;
    let ring = session.ring(&named.ring_name)?;
    Ideal::new(ring.ambient(), named.gens.clone()).map_err(internal)
}

fn module_record_json(m: &PresentedModule) -> Json {
    json!({
        "gens": m.num_gens(),
        "relations": m.relation_strings(),
    })
}

fn polys_json(gens: &[Poly]) -> Json {
    let strs: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
    json!(strs)
}

fn ring_json(ring: &phiflat::cakernel::AffineRing) -> Json {
    json!({
        "vars": ring.ambient().vars(),
        "order": ring.ambient().order().name(),
        "defining": ring.defining().gens().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

fn supports_json(phi: &PhiRing) -> Json {
    let members: Vec<Vec<String>> = phi
        .phi0()
        .iter()
        .map(|i| i.gens().iter().map(|p| p.to_string()).collect())
        .collect();
    json!({
        "ring": ring_json(phi.ring()),
        "phi0": members,
        "degenerate_ok": phi.degenerate_ok(),
    })
}

fn valuation_json(data: &phiflat::philocal::ValuationData) -> Json {
    json!(data.weights())
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Infinity => json!("infinity"),
        Value::Finite(coords) => json!(coords),
    }
}

fn phi_for_module<'s>(
    session: &'s Session,
    supports: &str,
    module: &str,
) -> Result<(&'s PhiRing, &'s PresentedModule), CliError> {
    let phi = session.supports_ring(supports)?;
    let named = session.module(module)?;
    if phi.ring() != named.module.ring() {
        return Err(validation("module and supports live over different rings"));
    }
    Ok((phi, &named.module))
}

/// Run one command against a session, producing a deterministic report and
/// an exit status.
pub fn run(command: &Command, session: &Session) -> Result<(Report, RunStatus), CliError> {
    match command {
        Command::Groebner { ideal, order } => {
            let i = ideal_of(session, ideal)?;
            let inputs = json!({ "ring": json!(i.ring().vars()), "ideal": polys_json(i.gens()) });
            let order = order.unwrap_or(i.ring().order());
            let (_, basis) = i.groebner_with(order).map_err(internal)?;
            let basis: Vec<String> = basis.iter().map(|p| p.to_string()).collect();
            let result = json!({ "basis": basis, "order": order.name() });
            Ok((Report::new("groebner", inputs, result), RunStatus::Ok))
        }
        Command::Admissible { supports, ideal } => {
            let phi = session.supports_ring(supports)?;
            let named = session.ideal(ideal)?;
            let inputs =
                json!({ "supports": supports_json(phi), "ideal": polys_json(&named.gens) });
            let adm = phi.is_admissible(&named.gens).map_err(internal)?;
            let result = json!({
                "admissible": adm.admissible,
                "exponent": adm.exponent,
            });
            Ok((Report::new("admissible", inputs, result), RunStatus::Ok))
        }
        Command::Purify { supports, module } => {
            let (phi, m) = phi_for_module(session, supports, module)?;
            let inputs = json!({ "supports": supports_json(phi), "module": module_record_json(m) });
            let torsion = depth::torsion_h0(m, phi).map_err(internal)?;
            let h0: Vec<Vec<String>> = torsion
                .h0_gens
                .iter()
                .map(|v| v.iter().map(|p| p.to_string()).collect())
                .collect();
            let result = json!({
                "torsion_generators": h0,
                "saturation_exponent": torsion.exponent,
                "purified": module_record_json(&torsion.purified),
            });
            Ok((Report::new("purify", inputs, result), RunStatus::Ok))
        }
        Command::Close {
            supports,
            module,
            max_steps,
        } => {
            let (phi, m) = phi_for_module(session, supports, module)?;
            let inputs = json!({
                "supports": supports_json(phi),
                "module": module_record_json(m),
                "max_steps": max_steps,
            });
            let cl = depth::closure(m, phi, *max_steps).map_err(internal)?;
            let result = json!({
                "closure": module_record_json(&cl.module),
                "steps": cl.steps,
                "regular_element": cl.regular.as_ref().map(|p| p.to_string()),
                "map_is_injective": cl.map.is_injective().map_err(internal)?,
                "map_is_surjective": cl.map.is_surjective().map_err(internal)?,
            });
            Ok((Report::new("close", inputs, result), RunStatus::Ok))
        }
        Command::Deep {
            supports,
            module,
            degree,
        } => {
            let (phi, m) = phi_for_module(session, supports, module)?;
            if *degree != 1 && *degree != 2 {
                return Err(validation("degree must be 1 or 2"));
            }
            let inputs = json!({ "supports": supports_json(phi), "module": module_record_json(m) });
            let deep = depth::is_deep(m, *degree, phi).map_err(internal)?;
            let result = json!({ "deep": deep, "degree": degree });
            Ok((Report::new("deep", inputs, result), RunStatus::Ok))
        }
        Command::Cech {
            module,
            ideal,
            q,
            max_steps,
        } => {
            let named_m = session.module(module)?;
            let named_i = session.ideal(ideal)?;
            if named_m.ring_name != named_i.ring_name {
                return Err(validation("module and ideal live over different rings"));
            }
            if *q > 1 {
                return Err(validation("only degrees 0 and 1 are decided"));
            }
            let inputs = json!({
                "module": module_record_json(&named_m.module),
                "ideal": polys_json(&named_i.gens),
                "max_steps": max_steps,
            });
            let out =
                depth::cech_h(&named_m.module, &named_i.gens, *q, *max_steps).map_err(internal)?;
            let result = json!({
                "q": q,
                "is_zero": out.is_zero,
                "witness": out.witness,
            });
            Ok((Report::new("cech", inputs, result), RunStatus::Ok))
        }
        Command::PhilocalCheck {
            valuation,
            split,
            samples,
        } => {
            let named = session.valuation(valuation)?;
            let ring = session.ring(&named.ring_name)?;
            let model = PhiLocalModel::new(ring.ambient().clone(), named.data.clone(), *split)
                .map_err(validation)?;
            let samples: Vec<Poly> = samples
                .iter()
                .map(|s| ring.ambient().parse(s))
                .collect::<Result<_, _>>()
                .map_err(validation)?;
            let inputs = json!({
                "valuation": valuation_json(&named.data),
                "split": split,
                "samples": polys_json(&samples),
            });
            let report = structure_check(&model, &samples);
            let checks: Vec<Json> = report
                .checks
                .iter()
                .map(|c| json!({ "kind": c.kind, "detail": c.detail, "pass": c.pass }))
                .collect();
            let result = json!({ "all_pass": report.all_pass(), "checks": checks });
            Ok((Report::new("philocal check", inputs, result), RunStatus::Ok))
        }
        Command::PhilocalPush {
            valuation,
            supports,
        } => {
            let named = session.valuation(valuation)?;
            let ring = session.ring(&named.ring_name)?;
            let phi = session.supports_ring(supports)?;
            if phi.ring() != ring {
                return Err(validation(
                    "supports and valuation live over different rings",
                ));
            }
            let inputs = json!({
                "valuation": valuation_json(&named.data),
                "supports": supports_json(phi),
            });
            let pushed =
                push_valuation(ring.ambient(), &named.data, phi.product()).map_err(validation)?;
            let prime: Vec<String> = pushed.prime.gens().iter().map(|p| p.to_string()).collect();
            let result = json!({
                "split": pushed.split,
                "prime": prime,
                "residual_weights": pushed.residual.weights(),
                "support_value": pushed.support_value,
            });
            Ok((Report::new("philocal push", inputs, result), RunStatus::Ok))
        }
        Command::PhilocalFlat {
            valuation,
            split,
            module,
            multipliers,
        } => {
            let named_v = session.valuation(valuation)?;
            let ring = session.ring(&named_v.ring_name)?;
            let named_m = session.module(module)?;
            if named_m.ring_name != named_v.ring_name {
                return Err(validation("module and valuation live over different rings"));
            }
            let model = PhiLocalModel::new(ring.ambient().clone(), named_v.data.clone(), *split)
                .map_err(validation)?;
            let multipliers: Vec<Poly> = multipliers
                .iter()
                .map(|s| ring.ambient().parse(s))
                .collect::<Result<_, _>>()
                .map_err(validation)?;
            let inputs = json!({
                "valuation": valuation_json(&named_v.data),
                "split": split,
                "module": module_record_json(&named_m.module),
                "multipliers": polys_json(&multipliers),
            });
            let report =
                flat_over_philocal(&model, &named_m.module, &multipliers).map_err(validation)?;
            let (flat, reason) = match &report.verdict {
                FlatVerdict::Flat => (true, None),
                FlatVerdict::NotFlat { reason } => (false, Some(reason.clone())),
            };
            let result = json!({
                "flat": flat,
                "reason": reason,
                "warnings": report.warnings,
            });
            Ok((Report::new("philocal flat", inputs, result), RunStatus::Ok))
        }
        Command::ValuationEval { valuation, poly } => {
            let named = session.valuation(valuation)?;
            let ring = session.ring(&named.ring_name)?;
            let f = ring.ambient().parse(poly).map_err(validation)?;
            let inputs = json!({
                "valuation": valuation_json(&named.data),
                "poly": f.to_string(),
            });
            let v = named.data.value(&f);
            let result = json!({ "value": value_json(&v) });
            Ok((Report::new("valuation eval", inputs, result), RunStatus::Ok))
        }
        Command::ValuationChart { valuation, ideal } => {
            let named_v = session.valuation(valuation)?;
            let named_i = session.ideal(ideal)?;
            if named_i.ring_name != named_v.ring_name {
                return Err(validation("ideal and valuation live over different rings"));
            }
            let ring = session.ring(&named_v.ring_name)?;
            let point = ValuativePoint::new(ring.ambient().clone(), named_v.data.clone())
                .map_err(validation)?;
            let inputs = json!({
                "valuation": valuation_json(&named_v.data),
                "ideal": polys_json(&named_i.gens),
            });
            let chart = select_chart(&point, &named_i.gens).map_err(validation)?;
            let result = json!({ "chart_index": chart });
            Ok((
                Report::new("valuation chart", inputs, result),
                RunStatus::Ok,
            ))
        }
        Command::ValuationTrace { valuation, centers } => {
            let named = session.valuation(valuation)?;
            let ring = session.ring(&named.ring_name)?;
            let point = ValuativePoint::new(ring.ambient().clone(), named.data.clone())
                .map_err(validation)?;
            let inputs = json!({
                "valuation": valuation_json(&named.data),
                "centers": centers,
            });
            let steps = trace_through_blowups(&point, centers).map_err(validation)?;
            let steps: Vec<Json> = steps
                .iter()
                .map(|s| {
                    json!({
                        "chart_index": s.chart_index,
                        "new_vars": s.new_vars,
                        "ring_vars": s.ring_vars,
                    })
                })
                .collect();
            let result = json!({ "steps": steps });
            Ok((
                Report::new("valuation trace", inputs, result),
                RunStatus::Ok,
            ))
        }
        Command::BlowupChart {
            ring,
            center,
            index,
        } => {
            let ring = session.ring(ring)?;
            let named = session.ideal(center)?;
            let inputs = json!({
                "ring": ring_json(ring),
                "center": polys_json(&named.gens),
                "index": index,
            });
            let chart = rees_chart(ring, &named.gens, *index).map_err(validation)?;
            let defining: Vec<String> = chart
                .ring()
                .defining()
                .gens()
                .iter()
                .map(|p| p.to_string())
                .collect();
            let result = json!({
                "ring_vars": chart.ring().ambient().vars(),
                "defining": defining,
                "new_vars": chart.new_vars(),
                "exceptional": chart.exceptional().to_string(),
                "saturation_exponent": chart.saturation_exponent(),
            });
            Ok((Report::new("blowup chart", inputs, result), RunStatus::Ok))
        }
        Command::BlowupStrict {
            module,
            center,
            index,
        } => {
            let named_m = session.module(module)?;
            let named_c = session.ideal(center)?;
            if named_m.ring_name != named_c.ring_name {
                return Err(validation("module and center live over different rings"));
            }
            let ring = session.ring(&named_m.ring_name)?;
            let inputs = json!({
                "ring": ring_json(ring),
                "module": module_record_json(&named_m.module),
                "center": polys_json(&named_c.gens),
                "index": index,
            });
            let chart = rees_chart(ring, &named_c.gens, *index).map_err(validation)?;
            let st = strict_transform_module(&named_m.module, &chart).map_err(internal)?;
            let result = json!({
                "chart_ring_vars": chart.ring().ambient().vars(),
                "exceptional": chart.exceptional().to_string(),
                "module": module_record_json(&st.module),
                "saturation_exponent": st.saturation_exponent,
            });
            Ok((Report::new("blowup strict", inputs, result), RunStatus::Ok))
        }
        Command::Flatten {
            supports,
            module,
            max_rounds,
            threads,
        } => {
            let (phi, m) = phi_for_module(session, supports, module)?;
            let problem = FlatteningProblem {
                phi: phi.clone(),
                module: m.clone(),
                max_rounds: *max_rounds,
            };
            let cert = flatten(&problem, *threads).map_err(internal)?;
            let status = match &cert.verdict {
                VerdictRecord::Success => RunStatus::Ok,
                VerdictRecord::Unresolved { .. } => RunStatus::Unresolved,
                VerdictRecord::InputNotFlatOnU { .. } => RunStatus::InputNotFlatOnU,
            };
            // the certificate embeds the full problem already
            let inputs = serde_json::to_value(&cert.problem).map_err(internal)?;
            let result = serde_json::to_value(&cert).map_err(internal)?;
            Ok((Report::new("flatten", inputs, result), status))
        }
        Command::Verify {
            supports,
            module,
            certificate,
        } => {
            let (phi, m) = phi_for_module(session, supports, module)?;
            let problem = FlatteningProblem {
                phi: phi.clone(),
                module: m.clone(),
                max_rounds: certificate.problem.max_rounds,
            };
            let outcome = verify_certificate(certificate, &problem).map_err(internal)?;
            let inputs = serde_json::to_value(&certificate.problem).map_err(internal)?;
            let result = json!({
                "valid": outcome.valid,
                "divergence": outcome.divergence,
            });
            let status = if outcome.valid {
                RunStatus::Ok
            } else {
                RunStatus::Invalid
            };
            Ok((Report::new("verify", inputs, result), status))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::parse_session;

    const FLAGSHIP: &str = "ring A = QQ[u,v];\nsupports S on A = (u, v);\nideal I = (u, v);\nmodule M = coker [[v], [-u]];\n";

    fn flagship() -> Session {
        parse_session(FLAGSHIP, MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn admissible_report() {
        let s = flagship();
        let cmd = Command::Admissible {
            supports: "S".into(),
            ideal: "I".into(),
        };
        let (report, status) = run(&cmd, &s).unwrap();
        assert_eq!(status, RunStatus::Ok);
        assert_eq!(report.result["admissible"], true);
        assert_eq!(report.result["exponent"], 1);

        // (u) misses v: not admissible for the family (u,v)
        let s = parse_session(
            "ring A = QQ[u,v];\nsupports S on A = (u, v);\nideal J = (u);\n",
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let cmd = Command::Admissible {
            supports: "S".into(),
            ideal: "J".into(),
        };
        let (report, _) = run(&cmd, &s).unwrap();
        assert_eq!(report.result["admissible"], false);
    }

    #[test]
    fn flatten_and_verify_round_trip() {
        let s = flagship();
        let cmd = Command::Flatten {
            supports: "S".into(),
            module: "M".into(),
            max_rounds: 5,
            threads: 1,
        };
        let (report, status) = run(&cmd, &s).unwrap();
        assert_eq!(status, RunStatus::Ok);
        let cert: FlatteningCertificate = serde_json::from_value(report.result.clone()).unwrap();
        let vcmd = Command::Verify {
            supports: "S".into(),
            module: "M".into(),
            certificate: Box::new(cert),
        };
        let (vreport, vstatus) = run(&vcmd, &s).unwrap();
        assert_eq!(vstatus, RunStatus::Ok);
        assert_eq!(vreport.result["valid"], true);
    }

    #[test]
    fn hypothesis_violation_exit_status() {
        let s = parse_session(
            "ring A = QQ[u,v];\nsupports S on A = (u);\nmodule M = coker [[v]];\n",
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let cmd = Command::Flatten {
            supports: "S".into(),
            module: "M".into(),
            max_rounds: 5,
            threads: 1,
        };
        let (report, status) = run(&cmd, &s).unwrap();
        assert_eq!(status, RunStatus::InputNotFlatOnU);
        assert_eq!(report.result["verdict"]["kind"], "input_not_flat_on_u");
    }

    #[test]
    fn reports_are_deterministic() {
        let s = flagship();
        let cmd = Command::Flatten {
            supports: "S".into(),
            module: "M".into(),
            max_rounds: 5,
            threads: 2,
        };
        let (a, _) = run(&cmd, &s).unwrap();
        let (b, _) = run(&cmd, &s).unwrap();
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
    }
}
