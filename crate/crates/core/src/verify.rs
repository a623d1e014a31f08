//! Differential checks between default-logic extensions and stable extensions
//! of the derived argumentation framework.

use std::fmt;
use std::time::{Duration, Instant};

use crate::args::{build_defeat_graph, build_store, generate_stable_extension, ArgumentStore, DefeatGraph, StoreConfig};
use crate::dung::{complete_extensions, preferred_extensions, stable_extensions, AbstractAF, SolverConfig, VertexSet};
use crate::format::serialise_pdt;
use crate::logic::Formula;
use crate::pdl::{all_extensions, compute_extension, Extension};
use crate::pdt::{LinearisationCap, Pdt, PriorityRelation};
use crate::sp::{sp_partial, sp_total};
use crate::Error;

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub linearisations: LinearisationCap,
    pub store: StoreConfig,
    pub solver: SolverConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    RepresentationTotal,
    GreedyGenerator,
    Trivialisation,
    RepresentationPartial,
    Rationality,
    Reconstruction,
}

impl Check {
    pub fn tag(self) -> &'static str {
        match self {
            Check::RepresentationTotal => "representation-total",
            Check::GreedyGenerator => "greedy-generator",
            Check::Trivialisation => "trivialisation",
            Check::RepresentationPartial => "representation-partial",
            Check::Rationality => "rationality",
            Check::Reconstruction => "reconstruction",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Enough to reproduce a failing check by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub theory: String,
    pub linearisation: Option<Vec<String>>,
    pub expected: Vec<String>,
    pub found: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "ok" } else { "VIOLATION" };
        write!(f, "{} {}: {} ({:.1?})", verdict, self.check, self.detail, self.elapsed)?;
        if let Some(w) = &self.witness {
            if let Some(lin) = &w.linearisation {
                write!(f, "\n  linearisation: {}", lin.join(" < "))?;
            }
            write!(f, "\n  expected: {}\n  found:    {}", w.expected.join("; "), w.found.join("; "))?;
            write!(f, "\n  theory:\n")?;
            for line in w.theory.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

/// Argument store, defeat graph and framework for one theory under one
/// argument ordering.
#[derive(Debug)]
pub struct Analysis {
    pub sp: PriorityRelation,
    pub store: ArgumentStore,
    pub graph: DefeatGraph,
    pub af: AbstractAF,
}

impl Analysis {
    pub fn new(t: &Pdt, sp: PriorityRelation, cfg: StoreConfig) -> Result<Self, Error> {
        let store = build_store(t, &[], cfg)?;
        let graph = build_defeat_graph(&store, &sp);
        let af = graph.to_af();
        Ok(Analysis { sp, store, graph, af })
    }

    fn render_set(&self, s: &VertexSet) -> String {
        let concl: Vec<String> = s.iter().map(|&a| self.store.conclusion(a).to_string()).collect();
        format!("{{{}}}", concl.join(", "))
    }

    fn conclusions(&self, s: &VertexSet) -> Vec<Formula> {
        let ids: Vec<usize> = s.iter().copied().collect();
        self.store.conclusions_of(&ids)
    }
}

fn render_formulas(fs: &[Formula]) -> String {
    let v: Vec<String> = fs.iter().map(ToString::to_string).collect();
    format!("Th({})", v.join(", "))
}

struct Draft {
    check: Check,
    start: Instant,
}

impl Draft {
    fn start(check: Check) -> Self {
        Draft {
            check,
            start: Instant::now(),
        }
    }

    fn pass(self, detail: String) -> VerificationReport {
        VerificationReport {
            check: self.check,
            passed: true,
            detail,
            witness: None,
            elapsed: self.start.elapsed(),
        }
    }

    fn fail(self, t: &Pdt, lin: Option<&PriorityRelation>, detail: String, expected: Vec<String>, found: Vec<String>) -> VerificationReport {
        VerificationReport {
            check: self.check,
            passed: false,
            detail,
            witness: Some(Witness {
                theory: serialise_pdt(t),
                linearisation: lin.and_then(PriorityRelation::chain_ids),
                expected,
                found,
            }),
            elapsed: self.start.elapsed(),
        }
    }
}

/// For a linearisation of the priority: the defeat graph has exactly one
/// stable extension and its conclusions are equivalent to the extension
/// built from the defaults.
pub fn check_representation_total(t: &Pdt, lin: &PriorityRelation, limits: &Limits) -> Result<VerificationReport, Error> {
    let analysis = Analysis::new(t, sp_total(t, lin), limits.store)?;
    representation_total_in(t, lin, &analysis, limits.solver)
}

pub fn representation_total_in(t: &Pdt, lin: &PriorityRelation, a: &Analysis, solver: SolverConfig) -> Result<VerificationReport, Error> {
    let draft = Draft::start(Check::RepresentationTotal);
    let ext = compute_extension(t, lin);
    let stables = stable_extensions(&a.af, solver)?;
    let expected = vec![render_formulas(&ext.generators)];
    if stables.len() != 1 {
        let found = stables.iter().map(|s| a.render_set(s)).collect();
        let detail = format!("{} stable extensions, expected exactly one", stables.len());
        return Ok(draft.fail(t, Some(lin), detail, expected, found));
    }
    let conc = a.conclusions(&stables[0]);
    if !t.oracle().equivalent_sets(&conc, &ext.generators)? {
        let detail = "conclusions of the stable extension differ from the extension".to_string();
        return Ok(draft.fail(t, Some(lin), detail, expected, vec![render_formulas(&conc)]));
    }
    Ok(draft.pass(format!(
        "unique stable extension, {} arguments, rules {{{}}}",
        stables[0].len(),
        t.ids_of(rules_of(a, &stables[0])).join(", ")
    )))
}

/// For a linearisation of the priority: walking the rules from most to least
/// preferred and keeping each one that introduces no attack yields the unique
/// stable extension.
pub fn check_greedy_generator(t: &Pdt, lin: &PriorityRelation, limits: &Limits) -> Result<VerificationReport, Error> {
    let analysis = Analysis::new(t, sp_total(t, lin), limits.store)?;
    greedy_generator_in(t, lin, &analysis, limits.solver)
}

pub fn greedy_generator_in(t: &Pdt, lin: &PriorityRelation, a: &Analysis, solver: SolverConfig) -> Result<VerificationReport, Error> {
    let draft = Draft::start(Check::GreedyGenerator);
    let kept = generate_stable_extension(&a.store, &a.sp);
    let greedy: VertexSet = a.store.args_restricted(kept).into_iter().collect();
    let stables = stable_extensions(&a.af, solver)?;
    if stables.len() == 1 && stables[0] == greedy {
        return Ok(draft.pass(format!("rules {{{}}}", t.ids_of(kept).join(", "))));
    }
    let found = stables.iter().map(|s| a.render_set(s)).collect();
    let detail = format!(
        "greedy rule set {{{}}} under {} is not the unique stable extension",
        t.ids_of(kept).join(", "),
        a.sp
    );
    Ok(draft.fail(t, Some(lin), detail, vec![a.render_set(&greedy)], found))
}

/// Under a total argument ordering the complete, grounded, preferred and
/// stable extensions are one and the same set.
pub fn check_trivialisation(t: &Pdt, lin: &PriorityRelation, limits: &Limits) -> Result<VerificationReport, Error> {
    let analysis = Analysis::new(t, sp_total(t, lin), limits.store)?;
    trivialisation_in(t, lin, &analysis, limits.solver)
}

pub fn trivialisation_in(t: &Pdt, lin: &PriorityRelation, a: &Analysis, solver: SolverConfig) -> Result<VerificationReport, Error> {
    let draft = Draft::start(Check::Trivialisation);
    let grounded = a.af.grounded();
    let families = [
        ("complete", complete_extensions(&a.af, solver)?),
        ("preferred", preferred_extensions(&a.af, solver)?),
        ("stable", stable_extensions(&a.af, solver)?),
    ];
    for (name, family) in &families {
        if family.len() != 1 || family[0] != grounded {
            let found = family.iter().map(|s| a.render_set(s)).collect();
            let detail = format!("{} {name} extension(s), expected only the grounded one", family.len());
            return Ok(draft.fail(t, Some(lin), detail, vec![a.render_set(&grounded)], found));
        }
    }
    Ok(draft.pass(format!("all semantics agree on {} arguments", grounded.len())))
}

/// For a partial priority: the extensions over all linearisations and the
/// conclusion sets of the stable extensions under the partial argument
/// ordering agree up to logical equivalence.
pub fn check_representation_partial(t: &Pdt, limits: &Limits) -> Result<VerificationReport, Error> {
    let analysis = Analysis::new(t, sp_partial(t, t.priority()), limits.store)?;
    representation_partial_in(t, &analysis, limits)
}

pub fn representation_partial_in(t: &Pdt, a: &Analysis, limits: &Limits) -> Result<VerificationReport, Error> {
    let draft = Draft::start(Check::RepresentationPartial);
    let oracle = t.oracle();
    let exts = all_extensions(t, limits.linearisations)?;
    let stables = stable_extensions(&a.af, limits.solver)?;
    let mut classes: Vec<Vec<Formula>> = Vec::new();
    for s in &stables {
        let conc = a.conclusions(s);
        let mut seen = false;
        for c in &classes {
            if oracle.equivalent_sets(c, &conc)? {
                seen = true;
                break;
            }
        }
        if !seen {
            classes.push(conc);
        }
    }

    let mut unmatched_ext: Vec<&Extension> = Vec::new();
    for e in &exts {
        let mut hit = false;
        for c in &classes {
            if oracle.equivalent_sets(c, &e.generators)? {
                hit = true;
                break;
            }
        }
        if !hit {
            unmatched_ext.push(e);
        }
    }
    let mut unmatched_stable: Vec<&Vec<Formula>> = Vec::new();
    for c in &classes {
        let mut hit = false;
        for e in &exts {
            if oracle.equivalent_sets(c, &e.generators)? {
                hit = true;
                break;
            }
        }
        if !hit {
            unmatched_stable.push(c);
        }
    }
    if unmatched_ext.is_empty() && unmatched_stable.is_empty() {
        return Ok(draft.pass(format!(
            "{} extension(s), {} stable extension(s) in {} class(es)",
            exts.len(),
            stables.len(),
            classes.len()
        )));
    }
    let detail = format!(
        "{} extension(s) without a stable counterpart, {} stable class(es) without an extension",
        unmatched_ext.len(),
        unmatched_stable.len()
    );
    let expected = exts.iter().map(|e| render_formulas(&e.generators)).collect();
    let found = classes.iter().map(|c| render_formulas(c)).collect();
    Ok(draft.fail(t, None, detail, expected, found))
}

/// Closure under subarguments, closure of conclusions within the targets, and
/// consistency, for every stable extension; with a total priority also for
/// every complete extension.
pub fn check_rationality(t: &Pdt, limits: &Limits) -> Result<VerificationReport, Error> {
    let total = t.priority().is_total();
    let sp = if total {
        sp_total(t, t.priority())
    } else {
        sp_partial(t, t.priority())
    };
    let analysis = Analysis::new(t, sp, limits.store)?;
    rationality_in(t, &analysis, total, limits.solver)
}

pub fn rationality_in(t: &Pdt, a: &Analysis, include_complete: bool, solver: SolverConfig) -> Result<VerificationReport, Error> {
    let draft = Draft::start(Check::Rationality);
    let oracle = t.oracle();
    let mut sets = stable_extensions(&a.af, solver)?;
    if include_complete {
        for c in complete_extensions(&a.af, solver)? {
            if !sets.contains(&c) {
                sets.push(c);
            }
        }
    }
    for s in &sets {
        for &x in s {
            if let Some(part) = a.store.subarguments(x).find(|p| !s.contains(p)) {
                let detail = format!("subargument {} of {} is missing", a.store.render(part), a.store.render(x));
                return Ok(draft.fail(t, None, detail, vec![a.render_set(s)], vec![]));
            }
        }
        let conc = a.conclusions(s);
        for phi in oracle.restricted_closure(&conc, a.store.targets())? {
            if !conc.contains(&phi) {
                let detail = format!("{phi} follows from the conclusions but is not concluded");
                return Ok(draft.fail(t, None, detail, vec![phi.to_string()], vec![render_formulas(&conc)]));
            }
        }
        if !oracle.is_consistent(&conc)? {
            let detail = "conclusions are inconsistent".to_string();
            return Ok(draft.fail(t, None, detail, vec![], vec![render_formulas(&conc)]));
        }
    }
    Ok(draft.pass(format!("{} extension(s) closed and consistent", sets.len())))
}

/// Build a linearisation of `sp` under which the greedy generator keeps
/// exactly `stable_rules`.
///
/// Rules outside `stable_rules` are first linearised among themselves; then,
/// from the greatest of them down, each is placed below every rule not already
/// below it. Ties are broken by id.
pub fn linearisation_for(sp: &PriorityRelation, stable_rules: u64) -> PriorityRelation {
    let minus = sp.full_mask() & !stable_rules;
    let excluded = sp.linear_extension_of(minus);
    let mut cur = sp.partial_linearisation(&excluded).expect("extension of sp is acyclic");
    for &s in excluded.iter().rev() {
        let free = sp.full_mask() & !cur.below(s) & !(1 << s);
        let mut chain = vec![s];
        chain.extend(cur.linear_extension_of(free));
        cur = cur.partial_linearisation(&chain).expect("chain is consistent with the order");
    }
    cur.linearise()
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub order: PriorityRelation,
    /// Rules no stored argument uses; the construction is only guaranteed
    /// when this is empty.
    pub unused: Vec<String>,
    pub report: VerificationReport,
}

/// Reconstruct a linearisation from a stable extension's rule set and confirm
/// the greedy generator reproduces the extension. The kept rule set may be
/// larger than `stable_rules` by rules that only occur alongside excluded ones.
pub fn reconstruct_linearisation(t: &Pdt, stable_rules: u64, limits: &Limits) -> Result<Reconstruction, Error> {
    let analysis = Analysis::new(t, sp_partial(t, t.priority()), limits.store)?;
    Ok(reconstruct_in(t, &analysis, stable_rules))
}

pub fn reconstruct_in(t: &Pdt, a: &Analysis, stable_rules: u64) -> Reconstruction {
    let draft = Draft::start(Check::Reconstruction);
    let order = linearisation_for(&a.sp, stable_rules);
    let unused = t.ids_of(a.sp.full_mask() & !a.store.used_rules());
    let kept = generate_stable_extension(&a.store, &order);
    let expected = t.ids_of(stable_rules);
    let report = if !order.contains(&a.sp) {
        let detail = "constructed order does not extend the argument ordering".to_string();
        draft.fail(t, Some(&order), detail, expected, vec![])
    } else if a.store.args_restricted(kept) != a.store.args_restricted(stable_rules) {
        let mut detail = "greedy generator does not reproduce the extension".to_string();
        if !unused.is_empty() {
            detail.push_str(&format!("; rules used by no argument: {}", unused.join(", ")));
        }
        draft.fail(t, Some(&order), detail, expected, t.ids_of(kept))
    } else {
        let mut detail = format!("rules {{{}}} reproduced", expected.join(", "));
        if !unused.is_empty() {
            detail.push_str(&format!("; rules used by no argument: {}", unused.join(", ")));
        }
        draft.pass(detail)
    };
    Reconstruction { order, unused, report }
}

/// Rules appearing in some argument of `s`.
pub fn rules_of(a: &Analysis, s: &VertexSet) -> u64 {
    s.iter().fold(0, |m, &x| m | a.store.get(x).dr)
}

/// Every check that applies to `t`: the total-order checks for each
/// linearisation when the priority is total, otherwise the partial checks.
pub fn check_all(t: &Pdt, limits: &Limits) -> Result<Vec<VerificationReport>, Error> {
    let mut out = Vec::new();
    if t.priority().is_total() {
        let lin = t.priority();
        let a = Analysis::new(t, sp_total(t, lin), limits.store)?;
        out.push(representation_total_in(t, lin, &a, limits.solver)?);
        out.push(greedy_generator_in(t, lin, &a, limits.solver)?);
        out.push(trivialisation_in(t, lin, &a, limits.solver)?);
        out.push(rationality_in(t, &a, true, limits.solver)?);
    } else {
        let a = Analysis::new(t, sp_partial(t, t.priority()), limits.store)?;
        out.push(representation_partial_in(t, &a, limits)?);
        out.push(rationality_in(t, &a, false, limits.solver)?);
        if a.store.used_rules() == a.sp.full_mask() {
            for s in stable_extensions(&a.af, limits.solver)? {
                out.push(reconstruct_in(t, &a, rules_of(&a, &s)).report);
            }
        }
    }
    Ok(out)
}

/// Mask of the rules of `t` named in `ids`.
pub fn rule_mask(t: &Pdt, ids: &[&str]) -> Result<u64, Error> {
    Ok(t.priority().mask_of(ids)?)
}
