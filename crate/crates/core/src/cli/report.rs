//! Verdict reports: one deterministic JSON document per run plus a short
//! human summary.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::format::{rows_to_matrix, DescriptorFile, Payload};
use crate::arith::check_modulus;
use crate::exact_linalg::{ElementaryDivisors, IntMatrix};
use crate::families::{weight_certify_family, IntegralFamily};
use crate::filtration::{analyze, NilpotentOperator};
use crate::modl::property_tf_check;
use crate::poly::IntPolynomial;
use crate::specseq::{
    assemble_e1, compute_e2, compute_e2_mod, monodromy_on_e2, total_rank_consistency, weight_report,
    BASIS_CONVENTION, SIGN_CONVENTION,
};
use crate::weil::{certify_weil, FactorVerdict};
use crate::{Error, Result, TOOLKIT_VERSION};

/// Which questions to answer. With none of the four question flags set,
/// every question applicable to the descriptor kind is answered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Questions {
    pub monodromy_verdict: bool,
    pub tf_check: bool,
    pub weight_certify: bool,
    pub bad_primes: bool,
    pub ell: Option<u64>,
    pub w: Option<i64>,
    pub q: Option<BigInt>,
}

impl Questions {
    fn all_if_none(&self) -> Questions {
        let mut q = self.clone();
        if !(q.monodromy_verdict || q.tf_check || q.weight_certify || q.bad_primes) {
            q.monodromy_verdict = true;
            q.weight_certify = true;
            q.bad_primes = true;
            q.tf_check = q.ell.is_some();
        }
        q
    }

    fn to_json(&self) -> Value {
        json!({
            "monodromy_verdict": self.monodromy_verdict,
            "tf_check": self.tf_check,
            "weight_certify": self.weight_certify,
            "bad_primes": self.bad_primes,
            "ell": self.ell,
            "w": self.w,
            "q": self.q.as_ref().map(|q| q.to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictReport {
    pub json: Value,
    pub summary: Vec<String>,
}

impl VerdictReport {
    pub fn to_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.summary.join("\n");
        s.push('\n');
        s
    }
}

pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.rows_iter().map(ints).collect())
}

fn divisors(d: &ElementaryDivisors) -> Value {
    ints(d.as_slice())
}

fn prime_map<T: ToString>(m: &BTreeMap<BigInt, Vec<T>>) -> Value {
    let mut out = Map::new();
    for (p, why) in m {
        out.insert(p.to_string(), Value::Array(why.iter().map(|s| Value::String(s.to_string())).collect()));
    }
    Value::Object(out)
}

fn prime_list<'a>(ps: impl IntoIterator<Item = &'a BigInt>) -> String {
    let v: Vec<String> = ps.into_iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn yes(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

/// Answers the questions for a parsed descriptor. `raw` is the exact file
/// content, used for the input digest.
pub fn build_report(raw: &[u8], file: &DescriptorFile, questions: &Questions) -> Result<VerdictReport> {
    let q = questions.all_if_none();
    let digest = input_digest(raw);
    let mut summary = vec![format!("monodromy {TOOLKIT_VERSION}: {} descriptor ({digest})", file.kind().name())];
    let verdicts = match &file.payload {
        Payload::Nilpotent(p) => nilpotent(p, &q, &mut summary)?,
        Payload::WeilPoly(p) => weil(p, &q, &mut summary)?,
        Payload::Family(p) => family(p, &q, &mut summary)?,
        Payload::Degeneration(p) => degeneration(p, &q, &mut summary)?,
    };
    let json = json!({
        "toolkit_version": TOOLKIT_VERSION,
        "format_version": file.format_version,
        "input_digest": digest,
        "kind": file.kind().name(),
        "conventions": { "sign": SIGN_CONVENTION, "basis": BASIS_CONVENTION },
        "questions": q.to_json(),
        "verdicts": verdicts,
    });
    Ok(VerdictReport { json, summary })
}

fn nilpotent(p: &super::format::NilpotentPayload, q: &Questions, summary: &mut Vec<String>) -> Result<Value> {
    let cols = p.matrix.len();
    let op = NilpotentOperator::new(rows_to_matrix(&p.matrix, cols)?)?;
    let rep = analyze(&op)?;
    let (lo, hi) = rep.filtration.window();
    let ranks = rep.filtration.graded_ranks();
    summary.push(format!("graded ranks for i = {lo}..={hi}: {ranks:?}"));
    let mut out = Map::new();
    out.insert("filtration".into(), json!({ "window": [lo, hi], "graded_ranks": ranks }));
    if q.monodromy_verdict {
        let mut levels = Map::new();
        for (i, d) in &rep.graded {
            levels.insert(i.to_string(), json!({ "divisors": divisors(d), "rational_iso": d.rank_defect() == 0 }));
            summary.push(format!("N^{i}: Gr_{i} → Gr_-{i} has elementary divisors {d}"));
        }
        out.insert("graded_maps".into(), Value::Object(levels));
        let mut cok = Map::new();
        for (i, d) in &rep.cokernels {
            cok.insert(i.to_string(), divisors(d));
        }
        out.insert("cokernels".into(), Value::Object(cok));
    }
    if q.bad_primes {
        out.insert("bad_primes".into(), prime_map(&rep.bad_primes.primes));
        summary.push(format!("bad primes: {}", prime_list(rep.bad_primes.primes.keys())));
    }
    if q.tf_check {
        let ell = q.ell.ok_or_else(|| Error::InvalidArgument("--tf-check needs --ell".into()))?;
        let tf = property_tf_check(&op, ell)?;
        let witness = tf.step_witness.as_ref().or(tf.torsion_witness.as_ref()).map(|w| w.to_string());
        summary.push(match &witness {
            None => format!("property (t-f) at ℓ = {ell}: holds"),
            Some(w) => format!("property (t-f) at ℓ = {ell}: fails ({w})"),
        });
        out.insert(
            "tf_check".into(),
            json!({
                "ell": ell,
                "holds": tf.holds(),
                "filtrations_agree": tf.filtrations_agree,
                "cokernels_torsion_free": tf.cokernels_torsion_free,
                "witness": witness,
            }),
        );
    }
    Ok(Value::Object(out))
}

fn weil_json(cert: &crate::weil::WeilCertificate) -> Value {
    let factors: Vec<Value> = cert
        .factors
        .iter()
        .map(|f| {
            let verdict = match &f.verdict {
                FactorVerdict::Boundary => "boundary".to_string(),
                FactorVerdict::Sturm(t) => format!(
                    "sturm: {} of {} trace roots inside (-2R, 2R) at {} bits",
                    t.roots_inside, t.distinct_roots, t.precision_bits
                ),
                FactorVerdict::Refuted(w) => format!("refuted: {w}"),
            };
            json!({
                "factor": f.factor.to_string(),
                "multiplicity": f.multiplicity,
                "inversion_symmetric": f.inversion_symmetric,
                "verdict": verdict,
            })
        })
        .collect();
    json!({
        "polynomial": cert.polynomial.to_string(),
        "q": cert.q.to_string(),
        "w": cert.w,
        "certified": cert.is_certified(),
        "factors": factors,
    })
}

fn weil(p: &super::format::WeilPayload, q: &Questions, summary: &mut Vec<String>) -> Result<Value> {
    let poly: IntPolynomial = p.polynomial.0.clone();
    let qq = q
        .q
        .clone()
        .or_else(|| p.q.as_ref().map(|x| x.0.clone()))
        .ok_or_else(|| Error::InvalidArgument("a weil-poly descriptor needs q (payload or --q)".into()))?;
    let w = match q.w {
        Some(w) => u32::try_from(w).map_err(|_| Error::InvalidArgument(format!("weight {w} is negative")))?,
        None => p.w.unwrap_or(1),
    };
    let cert = certify_weil(&poly, &qq, w)?;
    summary.push(cert.to_string());
    Ok(json!({ "weil": weil_json(&cert) }))
}

fn family(p: &super::format::FamilyPayload, q: &Questions, summary: &mut Vec<String>) -> Result<Value> {
    let frob = rows_to_matrix(&p.frobenius, p.frobenius.len())?;
    let mut fam = IntegralFamily::from_frobenius(frob)?;
    for (name, m) in &p.operators {
        fam.add_operator(name, rows_to_matrix(m, m.len())?)?;
    }
    let mut out = Map::new();
    out.insert("rank".into(), json!(fam.rank()));
    if q.weight_certify || q.bad_primes {
        let claim = p.weight.as_ref();
        let qq = q.q.clone().or_else(|| claim.map(|c| c.q.0.clone()));
        let w = q.w.map(|w| w as u32).or_else(|| claim.map(|c| c.w));
        let (Some(qq), Some(w)) = (qq, w) else {
            return Err(Error::InvalidArgument("weight certification needs q and w (payload or flags)".into()));
        };
        let candidate: Option<IntPolynomial> = claim.and_then(|c| c.polynomial.as_ref()).map(|p| p.0.clone());
        match weight_certify_family(&fam, &qq, w, candidate.as_ref()) {
            Ok(c) => {
                summary.push(format!("family is of weight {w} over q = {qq}: P = {}", c.polynomial()));
                out.insert(
                    "weight".into(),
                    json!({
                        "certified": true,
                        "w": w,
                        "q": qq.to_string(),
                        "polynomial": c.polynomial().to_string(),
                        "exceptional_primes": prime_map(&c.exceptional.iter().map(|(p, s)| (p.clone(), vec![s.clone()])).collect()),
                        "points_checked": c.points_checked,
                        "certificate": weil_json(&c.certificate),
                    }),
                );
            }
            Err(Error::NotOfWeight { reason, .. }) => {
                summary.push(format!("family is not certified of weight {w}: {reason}"));
                out.insert("weight".into(), json!({ "certified": false, "w": w, "q": qq.to_string(), "reason": reason }));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Value::Object(out))
}

fn degeneration(p: &super::format::DegenerationPayload, q: &Questions, summary: &mut Vec<String>) -> Result<Value> {
    let mut desc = p.to_descriptor()?;
    if let Some(qq) = &q.q {
        desc.q = Some(qq.clone());
    }
    let page = assemble_e1(&desc)?;
    page.check_monodromy_commutes()?;
    let e2 = compute_e2(&page);
    let d = desc.relative_dimension as i64;
    let mut out = Map::new();

    let mut pages = Vec::new();
    for ((v, w), e) in &e2 {
        let r1 = page.rank(*v, *w);
        if r1 == 0 {
            continue;
        }
        pages.push(json!({
            "v": v, "w": w, "e1_rank": r1, "e2_free_rank": e.free_rank,
            "e2_torsion": ints(&e.torsion), "bad_primes": prime_map(&e.bad_primes),
        }));
    }
    out.insert("spectral_sequence".into(), Value::Array(pages));

    if let Some(ell) = q.ell {
        check_modulus(ell)?;
        let modl = compute_e2_mod(&page, ell)?;
        let dims: Vec<Value> = modl
            .values()
            .filter(|e| page.rank(e.v, e.w) > 0)
            .map(|e| json!({ "v": e.v, "w": e.w, "dim": e.dim, "free_rank": e2[&(e.v, e.w)].free_rank }))
            .collect();
        let jumps = modl.values().filter(|e| e.dim != e2[&(e.v, e.w)].free_rank).count();
        summary.push(format!("E2 over F_{ell}: {jumps} entries differ in dimension from the integral free rank"));
        out.insert("e2_mod_ell".into(), json!({ "ell": ell, "entries": dims }));
    }

    let mut all_bad: BTreeMap<BigInt, Vec<String>> = BTreeMap::new();
    for e in e2.values() {
        for (pr, why) in &e.bad_primes {
            all_bad.entry(pr.clone()).or_default().extend(why.iter().map(|s| format!("E2^{{{},{}}}: {s}", e.v, e.w)));
        }
    }
    if q.monodromy_verdict || q.bad_primes {
        let weights: Vec<i64> = match q.w {
            Some(w) => vec![w],
            None => (0..=2 * d).collect(),
        };
        let mut verdicts = Vec::new();
        for w in weights {
            let v = monodromy_on_e2(&page, &e2, w);
            let levels: Vec<Value> = v
                .levels
                .iter()
                .map(|l| {
                    json!({
                        "i": l.i,
                        "source": [l.source.0, l.source.1],
                        "target": [l.target.0, l.target.1],
                        "source_rank": l.source_rank,
                        "target_rank": l.target_rank,
                        "matrix": matrix(&l.matrix),
                        "divisors": divisors(&l.divisors),
                        "rational_iso": l.rational_iso,
                        "bad_primes": prime_map(&l.bad_primes),
                    })
                })
                .collect();
            for l in v.levels.iter().filter(|l| l.i > 0 && (l.source_rank > 0 || l.target_rank > 0)) {
                summary.push(format!(
                    "w = {w}, i = {}: E2^{{{},{}}} → E2^{{{},{}}} divisors {}, rational iso {}, bad primes {}",
                    l.i,
                    l.source.0,
                    l.source.1,
                    l.target.0,
                    l.target.1,
                    l.divisors,
                    yes(l.rational_iso),
                    prime_list(l.bad_primes.keys())
                ));
            }
            for l in &v.levels {
                for (pr, why) in &l.bad_primes {
                    all_bad.entry(pr.clone()).or_default().extend(why.iter().map(|s| format!("w = {w}, i = {}: {s}", l.i)));
                }
            }
            verdicts.push(json!({
                "w": w,
                "holds_rationally": v.holds_rationally(),
                "bad_primes": ints(&v.bad_primes().into_iter().collect::<Vec<_>>()),
                "levels": levels,
            }));
        }
        if q.monodromy_verdict {
            out.insert("monodromy".into(), Value::Array(verdicts));
        }
    }
    if q.bad_primes {
        for why in all_bad.values_mut() {
            why.sort();
            why.dedup();
        }
        summary.push(format!("bad primes: {}", prime_list(all_bad.keys())));
        out.insert("bad_primes".into(), prime_map(&all_bad));
    }

    if p.betti.is_some() {
        let rc = total_rank_consistency(&e2, &p.betti_map());
        let degrees: Map<String, Value> = rc
            .degrees
            .iter()
            .map(|(n, c)| (n.to_string(), json!({ "computed": c.computed, "claimed": c.claimed })))
            .collect();
        summary.push(if rc.consistent() {
            "E2 ranks match the claimed Betti numbers".to_string()
        } else {
            format!("E2 ranks differ from the claimed Betti numbers in degrees {:?}", rc.mismatches())
        });
        out.insert("rank_consistency".into(), json!({ "consistent": rc.consistent(), "degrees": degrees }));
    }

    if q.weight_certify {
        if let Some(rep) = weight_report(&desc, &page)? {
            let entries: Vec<Value> = rep
                .entries
                .iter()
                .map(|((v, w), c)| match c {
                    Ok(c) => json!({ "v": v, "w": w, "certified": true, "polynomial": c.polynomial().to_string() }),
                    Err(r) => json!({ "v": v, "w": w, "certified": false, "reason": r }),
                })
                .collect();
            let d2: Vec<Value> = rep
                .d2_vanishing
                .iter()
                .map(|x| {
                    json!({
                        "source": [x.source.0, x.source.1],
                        "target": [x.target.0, x.target.1],
                        "primes": ints(&x.primes.iter().cloned().collect::<Vec<_>>()),
                    })
                })
                .collect();
            let ok = rep.entries.values().filter(|c| c.is_ok()).count();
            summary.push(format!("{ok} of {} E1 entries certified of their weight", rep.entries.len()));
            out.insert("weights".into(), json!({ "q": rep.q.to_string(), "entries": entries, "d2_vanishing": d2 }));
        }
    }
    Ok(Value::Object(out))
}
