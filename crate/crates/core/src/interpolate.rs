//! End-to-end interpolation: `O |= C0 ⊑ D0` is interpolated by deciding
//! joint consistency of `C0` and `not D0`, then reading the interpolant off
//! the separators of the eliminated mosaics.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::families::ProblemText;
use crate::mosaics::{decide_joint_consistency, extract_model, Config, Decision, Verdict, WitnessModel};
use crate::reasoner::{realizable_types, Reasoner};
use crate::semantics::check_joint_consistency_witness;
use crate::separators::{alch::AlchSeparators, alcq, Strategy};
use crate::syntax::{
    parse_concept, parse_ontology, parse_signature, ClosureIndex, Dialect, Name, Ontology, Signature,
    TermId, TermStore,
};
use std::time::Instant;

pub struct InterpolationProblem {
    pub store: TermStore,
    pub ontology: Ontology,
    pub c0: TermId,
    pub d0: TermId,
    pub sigma: Signature,
}

impl InterpolationProblem {
    pub fn new(store: TermStore, ontology: Ontology, c0: TermId, d0: TermId, sigma: Signature) -> Result<Self> {
        if ontology.dialect() == Dialect::Alch && !(store.is_alc(c0) && store.is_alc(d0)) {
            return Err(Error::CountingInAlch { offset: 0 });
        }
        Ok(InterpolationProblem {
            store,
            ontology,
            c0,
            d0,
            sigma,
        })
    }

    pub fn from_text(p: &ProblemText) -> Result<Self> {
        let mut store = TermStore::new();
        let ontology = parse_ontology(&mut store, &p.ontology, p.dialect)?;
        let c0 = parse_concept(&mut store, &p.left)?;
        let d0 = parse_concept(&mut store, &p.right)?;
        let sigma = parse_signature(&p.signature)?;
        Self::new(store, ontology, c0, d0, sigma)
    }

    pub fn dialect(&self) -> Dialect {
        self.ontology.dialect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub types: usize,
    pub mosaics: usize,
    pub rounds: usize,
    pub eliminated: usize,
    pub interpolant_dag_size: usize,
    pub sat_calls: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    Passed,
    Failed,
    Skipped,
}

#[derive(Debug)]
pub enum NoInterpolant {
    /// `O |= C0 ⊑ D0` fails; the type holds both `C0` and `not D0`.
    NotEntailed { countermodel: TermId },
    /// ALCH: models of `C0` and `not D0` at Σ-bisimilar points.
    Witness { model: Box<WitnessModel>, checked: bool },
    /// ALCQ: the surviving root mosaic and the Σ-roles whose mosaic
    /// partitions were rechecked.
    Mosaic { types: Vec<TermId>, partition_roles: Vec<Name> },
}

#[derive(Debug)]
pub enum Outcome {
    Interpolant(TermId),
    None(NoInterpolant),
}

#[derive(Debug)]
pub struct InterpolationResult {
    pub outcome: Outcome,
    pub stats: Stats,
    pub verification: Verification,
    pub trace: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub config: Config,
    pub strategy: Strategy,
    pub verify: bool,
    pub emit_trace: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            config: Config::default(),
            strategy: Strategy::Auto,
            verify: true,
            emit_trace: false,
        }
    }
}

fn decide(p: &mut InterpolationProblem, cfg: &Config) -> Result<Decision> {
    let nd = p.store.not(p.d0);
    decide_joint_consistency(&p.store, &p.ontology, p.c0, nd, &p.sigma, cfg)
}

pub fn interpolant_exists(p: &mut InterpolationProblem, cfg: &Config) -> Result<bool> {
    Ok(!decide(p, cfg)?.is_consistent())
}

/// Signature check and both entailments.
pub fn verify_interpolant(
    store: &TermStore,
    o: &Ontology,
    c0: TermId,
    d0: TermId,
    sigma: &Signature,
    e: TermId,
) -> bool {
    if !store.is_alc(e) || !sigma.covers(store, e) {
        return false;
    }
    let r = Reasoner::new(o);
    r.entails(store, c0, e) && r.entails(store, e, d0)
}

/// A type as the conjunction of its closure literals.
pub fn type_concept(store: &mut TermStore, cx: &ClosureIndex, t: &Bits) -> TermId {
    let lits: Vec<TermId> = (0..cx.len())
        .map(|i| {
            let x = cx.term(i);
            if t.contains(i) {
                x
            } else {
                store.not(x)
            }
        })
        .collect();
    store.and(lits)
}

fn countermodel(p: &mut InterpolationProblem) -> Result<TermId> {
    let nd = p.store.not(p.d0);
    let cx = ClosureIndex::new(&p.store, &p.ontology, p.c0, nd);
    let both = [p.c0, nd].map(|t| cx.clit(&p.store, t).expect("root in closure"));
    let t = realizable_types(&p.store, &p.ontology, &cx)?
        .into_iter()
        .find(|t| both.iter().all(|l| l.holds_in(t)))
        .ok_or_else(|| Error::Invalid("no realizable type refutes the inclusion".into()))?;
    Ok(type_concept(&mut p.store, &cx, &t))
}

pub fn compute_interpolant(p: &mut InterpolationProblem, opts: &Options) -> Result<InterpolationResult> {
    let start = Instant::now();
    let reasoner = Reasoner::new(&p.ontology);
    let mut stats = Stats::default();
    if !reasoner.entails(&p.store, p.c0, p.d0) {
        let countermodel = countermodel(p)?;
        stats.sat_calls = reasoner.sat_calls();
        stats.wall_ms = start.elapsed().as_millis() as u64;
        return Ok(InterpolationResult {
            outcome: Outcome::None(NoInterpolant::NotEntailed { countermodel }),
            stats,
            verification: Verification::Skipped,
            trace: None,
        });
    }
    let d = decide(p, &opts.config)?;
    stats.types = d.ctx.types.len();
    stats.mosaics = d.universe.len();
    stats.rounds = d.universe.rounds;
    stats.eliminated = d.universe.eliminated_count();
    let trace = opts.emit_trace.then(|| d.universe.format_trace(&p.store, &d.ctx));
    let outcome = match (&d.verdict, p.dialect()) {
        (Verdict::Inconsistent, Dialect::Alch) => {
            Outcome::Interpolant(AlchSeparators::new(&d, &mut p.store, opts.strategy).interpolant()?)
        }
        (Verdict::Inconsistent, Dialect::Alcq) => {
            let sep = alcq::general_separator(&mut p.store, &reasoner, &d, opts.config.max_sat_calls)?;
            Outcome::Interpolant(alcq::interpolant(&mut p.store, &d, &sep))
        }
        (Verdict::Consistent { .. }, Dialect::Alch) => {
            let model = extract_model(&p.store, &d)?;
            let nd = p.store.not(p.d0);
            let i = &model.interp;
            let checked = check_joint_consistency_witness(
                &p.store, &p.ontology, p.c0, nd, &p.sigma, i, model.e1, i, model.e2,
            );
            if !checked {
                return Err(Error::Soundness("extracted witness model fails its check".into()));
            }
            Outcome::None(NoInterpolant::Witness {
                model: Box::new(model),
                checked,
            })
        }
        (&Verdict::Consistent { mosaic, .. }, Dialect::Alcq) => {
            let m = &d.universe.mosaics[mosaic];
            let alive: Vec<&Bits> = d.universe.alive().into_iter().map(|i| &d.universe.mosaics[i]).collect();
            let alive = alive.into_iter().collect();
            let mut roles = Vec::new();
            for &r in &d.ctx.sigma_roles {
                if d.ctx.cx.restrictions_on(r).is_empty() {
                    continue;
                }
                if !crate::mosaics::alcq::partition_exists(&d.ctx, m, r, &alive, opts.config.max_partition_nodes)? {
                    return Err(Error::Soundness("surviving mosaic has no partition".into()));
                }
                roles.push(r);
            }
            Outcome::None(NoInterpolant::Mosaic {
                types: m.iter().map(|t| type_concept(&mut p.store, &d.ctx.cx, &d.ctx.types[t])).collect(),
                partition_roles: roles,
            })
        }
    };
    let mut verification = Verification::Skipped;
    if let Outcome::Interpolant(e) = outcome {
        stats.interpolant_dag_size = p.store.dag_size(e);
        if opts.verify {
            if !verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, e) {
                return Err(Error::Soundness("constructed interpolant fails verification".into()));
            }
            verification = Verification::Passed;
        }
    }
    stats.sat_calls = reasoner.sat_calls();
    stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(InterpolationResult {
        outcome,
        stats,
        verification,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{alch_k, alch_k_known_interpolant};

    fn problem(onto: &str, c: &str, d: &str, sig: &str, dialect: Dialect) -> InterpolationProblem {
        InterpolationProblem::from_text(&ProblemText {
            dialect,
            ontology: onto.into(),
            left: c.into(),
            right: d.into(),
            signature: sig.into(),
        })
        .unwrap()
    }

    #[test]
    fn existence_examples() {
        let cfg = Config::default();
        let mut p = InterpolationProblem::from_text(&alch_k(1)).unwrap();
        assert!(interpolant_exists(&mut p, &cfg).unwrap());
        let mut p = problem("", "(atleast 2 r top)", "(atleast 2 r top)", "r", Dialect::Alcq);
        assert!(!interpolant_exists(&mut p, &cfg).unwrap());
        let mut p = problem("(implies A B)", "A", "B", "", Dialect::Alch);
        assert!(!interpolant_exists(&mut p, &cfg).unwrap());
        let mut p = problem("", "A", "A", "A", Dialect::Alch);
        assert!(interpolant_exists(&mut p, &cfg).unwrap());
    }

    #[test]
    fn family_interpolant_verifies() {
        let mut p = InterpolationProblem::from_text(&alch_k(1)).unwrap();
        let res = compute_interpolant(&mut p, &Options::default()).unwrap();
        assert_eq!(res.verification, Verification::Passed);
        let Outcome::Interpolant(e) = res.outcome else { panic!() };
        assert!(p.sigma.covers(&p.store, e));
        let known = parse_concept(&mut p.store, &alch_k_known_interpolant(1)).unwrap();
        assert!(verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, known));
    }

    #[test]
    fn identity_interpolation() {
        let mut p = problem("", "(and A (some r B))", "(and A (some r B))", "A B r", Dialect::Alch);
        let res = compute_interpolant(&mut p, &Options::default()).unwrap();
        let Outcome::Interpolant(e) = res.outcome else { panic!() };
        let r = Reasoner::new(&p.ontology);
        assert!(r.equivalent(&p.store, e, p.c0));
    }

    #[test]
    fn verify_checks_signature_and_entailment() {
        let p = problem("", "A", "top", "", Dialect::Alch);
        let top = p.store.top();
        assert!(verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, top));
        assert!(!verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, p.c0));
        let mut p = InterpolationProblem::from_text(&alch_k(2)).unwrap();
        let one = parse_concept(&mut p.store, "(some s1p A1)").unwrap();
        assert!(!verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, one));
    }

    #[test]
    fn witness_for_signature_gap() {
        let mut p = problem("(implies A B)", "A", "B", "", Dialect::Alch);
        let res = compute_interpolant(&mut p, &Options::default()).unwrap();
        assert!(matches!(
            res.outcome,
            Outcome::None(NoInterpolant::Witness { checked: true, .. })
        ));
    }

    #[test]
    fn not_entailed_reported() {
        let mut p = problem("", "A", "B", "A B", Dialect::Alch);
        let res = compute_interpolant(&mut p, &Options::default()).unwrap();
        let Outcome::None(NoInterpolant::NotEntailed { countermodel }) = res.outcome else { panic!() };
        let r = Reasoner::new(&p.ontology);
        assert!(r.sat(&p.store, countermodel));
        assert!(r.entails(&p.store, countermodel, p.c0));
    }

    #[test]
    fn alcq_nonexistence_reports_mosaic() {
        let mut p = problem("", "(atleast 2 r top)", "(atleast 2 r top)", "r", Dialect::Alcq);
        let res = compute_interpolant(&mut p, &Options::default()).unwrap();
        let Outcome::None(NoInterpolant::Mosaic { types, partition_roles }) = res.outcome else { panic!() };
        assert_eq!(types.len(), 2);
        assert_eq!(partition_roles.len(), 1);
    }

    #[test]
    fn counting_rejected_in_alch() {
        let err = InterpolationProblem::from_text(&ProblemText {
            dialect: Dialect::Alch,
            ontology: String::new(),
            left: "(atleast 2 r top)".into(),
            right: "top".into(),
            signature: "r".into(),
        });
        assert!(matches!(err, Err(Error::CountingInAlch { .. })));
    }
}
