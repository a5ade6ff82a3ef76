"""The ten acceptance criteria as functions returning reports.

Each ``criterion_N(seed)`` returns a :class:`vlab.reports.Report` whose body
holds only deterministic findings; ``verdicts["pass"]`` is the criterion's
outcome.  Running this file as a script prints the body digests, which is
how the determinism criterion compares two independent runs.
"""

import itertools
import random
import sys
import time

from formulas import forcing_pool
from oracles import evaluate
from vlab.constructible import RANK_CAP, proof_rank
from vlab.errors import BudgetError
from vlab.forcing import (Forcer, Poset, enumerate_posets, forces_semantic, generic_filters,
                          generic_name, names_of_rank)
from vlab.fuzz import proof_fleet, proof_mutant, random_coding_pair, tree_mutants
from vlab.hf import EMPTY, make_set, ordinal, pair, rank, stage, transitive_closure, singleton
from vlab.multiverse import (barwise_correspondence, covering_audit, generic_extension,
                             ground_axiom, ground_models, grounds, mantle, nontrivial_grounds,
                             universe_model, width_theory)
from vlab.proofs import TAGS, check_proof, parse_theory
from vlab.reports import Report, RunConfig, digest
from vlab.syntax import parse_formula, substitute, Const
from vlab.trees import (decode, encode_set, et_related, pairing_plus, quotient, separation_plus,
                        tt_equal, union_plus, validate_coding_pair)

SEED = 0


def _report(n, title, findings, passed, config=None):
    return Report(f"acceptance {n}", {"criterion": n, "title": title},
                  config or RunConfig().as_dict(), findings, {"pass": passed})


class Natives:
    """Memoized nested-frozenset images, the membership oracle for big fleets."""

    def __init__(self):
        self.memo = {}

    def __call__(self, x):
        hit = self.memo.get(x)
        if hit is None:
            hit = self.memo[x] = frozenset(self(e) for e in x)
        return hit


# --- 1. coding soundness ----------------------------------------------------------------------

def criterion_1(seed=SEED):
    native = Natives()
    V4 = sorted(stage(4))
    q4 = {y: quotient(encode_set(y)) for y in V4}
    decode_bad = et_bad = eq_bad = 0
    owner = {}
    checked = 0
    for x in sorted(stage(5)):
        q = quotient(encode_set(x))
        checked += 1
        if decode(q) is not x:
            decode_bad += 1
        nx = native(x)
        for y in V4:
            if et_related(q, q4[y]) != (native(y) in nx):
                et_bad += 1
        prev = owner.setdefault(q.root_label, nx)
        if prev != nx:
            eq_bad += 1
    # distinct sets got distinct labels iff the label map is injective
    if len(owner) != checked:
        eq_bad += checked - len(owner)
    for x, y in itertools.product(V4, V4):
        if tt_equal(q4[x], q4[y]) != (native(x) == native(y)):
            eq_bad += 1
    findings = [{"sets_checked": checked, "decode_mismatches": decode_bad,
                 "membership_mismatches": et_bad, "equality_mismatches": eq_bad,
                 "membership_pairs": checked * len(V4)}]
    return _report(1, "coding soundness, every set of rank <= 4", findings,
                   decode_bad == et_bad == eq_bad == 0)


# --- 2. quotient structure ----------------------------------------------------------------------

def _has_cycle(children):
    state = {}

    def visit(n):
        state[n] = 1
        for k in children[n]:
            s = state.get(k)
            if s == 1 or (s is None and visit(k)):
                return True
        state[n] = 2
        return False

    return any(state.get(n) is None and visit(n) for n in range(len(children)))


def criterion_2(seed=SEED):
    rng = random.Random(seed)
    native = Natives()
    bad_pairs = twin_siblings = cycles = wrong_clause = 0
    kinds = {}
    for _ in range(1000):
        x, t = random_coding_pair(rng)
        if not validate_coding_pair(t).ok:
            bad_pairs += 1
            continue
        q = quotient(t)
        if _has_cycle(q.children):
            cycles += 1
        for n in q.nodes:
            vals = [native(decode(q, k)) for k in q.kids(n)]
            if len(set(vals)) != len(vals):
                twin_siblings += 1
        if decode(q) is not x:
            bad_pairs += 1
        for m in tree_mutants(rng, t):
            rep = validate_coding_pair(m.tree)
            row = kinds.setdefault(m.kind, {"expected": m.expected, "mutants": 0, "misclassified": 0})
            row["mutants"] += 1
            if rep.ok or rep.clause != m.expected:
                row["misclassified"] += 1
                wrong_clause += 1
    findings = [{"coding_pairs": 1000, "invalid_or_wrong_decode": bad_pairs,
                 "twin_siblings": twin_siblings, "cycles": cycles},
                {"mutants": {k: kinds[k] for k in sorted(kinds)}}]
    return _report(2, "quotient is extensional and well-founded; mutants flagged", findings,
                   bad_pairs == twin_siblings == cycles == wrong_clause == 0)


# --- 3. (V)+ operations ----------------------------------------------------------------------

SEPARATION_POOL = ("x = {}", "{} in x", "not x = {}", "exists y in x . y = {}",
                   "forall y in x . not y = {}")


def criterion_3(seed=SEED):
    rng = random.Random(seed)
    native = Natives()
    pool = [parse_formula(s) for s in SEPARATION_POOL]
    V4 = sorted(stage(4))
    V5 = sorted(stage(5))
    codes = {}

    def code_of(x):
        q = codes.get(x)
        if q is None:
            q = codes[x] = quotient(encode_set(x))
        return q

    counts = {"pairing": 0, "union": 0, "separation": 0}
    bad = {"pairing": 0, "union": 0, "separation": 0}

    def check(x, y):
        qx, qy = code_of(x), code_of(y)
        nx, ny = native(x), native(y)
        counts["pairing"] += 1
        if native(decode(pairing_plus(qx, qy))) != frozenset({nx, ny}):
            bad["pairing"] += 1

    def check_one(x):
        qx, nx = code_of(x), native(x)
        counts["union"] += 1
        if native(decode(union_plus(qx))) != frozenset().union(*nx):
            bad["union"] += 1
        dom = transitive_closure(singleton(x))
        for phi in pool:
            counts["separation"] += 1
            want = frozenset(native(z) for z in x if evaluate(frozenset(dom), {}, phi, {"x": z}))
            if native(decode(separation_plus(qx, phi))) != want:
                bad["separation"] += 1

    for x in V4:
        check_one(x)
        for y in V4:
            check(x, y)
    samples = rng.sample([x for x in V5 if rank(x) == 4], 500)
    for x in samples:
        check_one(x)
        check(x, rng.choice(samples))
    findings = [{"checked": counts, "mismatches": bad, "rank4_samples": 500}]
    return _report(3, "pairing, union and separation commute with decoding", findings,
                   not any(bad.values()))


# --- 4. proof checker duality -----------------------------------------------------------------

def _full_fan(node, sig):
    phi = node.formula
    if node.tag == "set":
        members = phi.bound.value.elems
    else:
        members = sorted(sig.base.domain)
    need = {substitute(phi.body, phi.var, Const(b)) for b in members}
    return need == {k.formula for k in node.children}


def criterion_4(seed=SEED):
    fleet = proof_fleet(seed, 500)
    rng = random.Random(seed + 1)
    rejected_valid = accepted_mutants = partial_fans = 0
    tags = {t: 0 for t in TAGS}
    fans_with_repeats = 0
    mutant_kinds = {}
    for p, th, sig in fleet:
        if not check_proof(p, th, sig):
            rejected_valid += 1
        for _, node in p.nodes():
            tags[node.tag] += 1
            if node.tag in ("set", "mrule"):
                if not _full_fan(node, sig):
                    partial_fans += 1
                if len(node.children) > len({k.formula for k in node.children}):
                    fans_with_repeats += 1
        m = proof_mutant(rng, p)
        mutant_kinds[m.kind] = mutant_kinds.get(m.kind, 0) + 1
        if check_proof(m.proof, th, sig):
            accepted_mutants += 1
    findings = [{"proofs": len(fleet), "rejected_valid": rejected_valid, "tag_counts": tags,
                 "partial_fans": partial_fans, "fans_with_repeated_premises": fans_with_repeats},
                {"mutants": len(fleet), "accepted_mutants": accepted_mutants,
                 "mutant_kinds": dict(sorted(mutant_kinds.items()))}]
    ok = (rejected_valid == accepted_mutants == partial_fans == 0
          and all(tags[t] > 0 for t in TAGS))
    return _report(4, "valid proofs accepted, single-node mutants rejected", findings, ok)


# --- 5. forcing theorem -----------------------------------------------------------------------

def _names(P, rng):
    """Every name of rank <= 1, rank-2 names (all of them when the
    enumeration fits, else a seeded sample), and the generic name."""
    names = names_of_rank(P, 1)
    try:
        rank2 = [n for n in names_of_rank(P, 2) if n not in set(names)]
        sampled = False
    except BudgetError:
        rank2 = sorted({make_set(pair(rng.choice(names), rng.choice(P.conditions))
                                 for _ in range(rng.randint(1, 3))) for _ in range(40)})
        sampled = True
    return names, rank2, sampled


def criterion_5(seed=SEED):
    rng = random.Random(seed)
    M = universe_model([ordinal(5)])
    pool = forcing_pool(seed + 1, [EMPTY, ordinal(1)])
    posets = enumerate_posets(5)
    checks = disagreements = forced_true = 0
    sampled_posets = 0
    per_size = {}
    for P in posets:
        f = Forcer(M, P, 2)
        low, rank2, sampled = _names(P, rng)
        sampled_posets += sampled
        names = low + rank2 + [generic_name(P)]
        if len(rank2) > 40:
            rank2 = rng.sample(rank2, 40)
        a_values = low + rank2 + [generic_name(P)]
        for phi in pool:
            for a in a_values:
                b = rng.choice(names)
                asg = {"a": a, "b": b}
                for p in P.conditions:
                    sem = forces_semantic(p, phi, M, P, 2, asg)
                    syn = f.forces(p, phi, asg)
                    checks += 1
                    forced_true += sem
                    if sem != syn:
                        disagreements += 1
        row = per_size.setdefault(len(P), {"posets": 0})
        row["posets"] += 1
    findings = [{"posets": len(posets), "per_size": {str(k): v for k, v in sorted(per_size.items())},
                 "formulas": len(pool), "ground_size": len(M.domain),
                 "posets_with_sampled_rank2_names": sampled_posets,
                 "checks": checks, "forced": forced_true, "disagreements": disagreements}]
    return _report(5, "semantic and syntactic forcing agree", findings, disagreements == 0)


# --- 6. Barwise correspondence ---------------------------------------------------------------

INCONSISTENT = {
    "sigma-and-not-sigma": "{} in {{}}\nnot {} in {{}}",
    "empty-in-M-implies-bottom": "({} in M implies ({} in {} and not {} in {}))",
    "false-diagram": "{{}} in {}",
    "W-misses-empty": "forall x in M . x in W0\nnot {} in W0",
    "W-nonempty-and-empty": "exists x in W0 . x = x\nforall x in W0 . not x = x",
    "empty-not-self-equal": "not {} = {}",
    "conjunction-clash": "({} in {{}} and not {} in {{}})",
    "M-rule-clash": "forall x in M . x in x",
    "bounded-clash": "forall x in {{}} . not x = {}",
    "false-disjunction": "({} in {} or {{}} in {})",
}

CONSISTENT = {
    "width": None,
    "W-contains-M": "forall x in M . x in W0",
    "W-proper": "exists x in W0 . not x in M",
    "true-diagram": "{} in {{}}\nnot {{}} in {}",
    "empty": "",
    "M-rule-truth": "forall x in M . not x in x",
    "W-new-singleton": "exists x in W0 . (not x in M and exists y in x . y = {{}})",
    "W-transitive-proper": "forall x in W0 . forall y in x . y in W0\nexists x in W0 . not x in M",
    "W-deep": "exists x in W0 . exists y in x . not y in M",
    "W-width-small": None,
}


def criterion_6(seed=SEED):
    M2 = universe_model([ordinal(2)])
    M1 = universe_model([ordinal(1)])
    rows, violations = [], 0
    suite = [(k, v, False, M2) for k, v in INCONSISTENT.items()]
    suite += [(k, v, True, M1 if k in ("W-width-small", "W-new-singleton", "W-transitive-proper",
                                       "W-deep") else M2) for k, v in CONSISTENT.items()]
    for name, text, designed_consistent, M in suite:
        th = width_theory() if text is None else parse_theory(text, name)
        ag = barwise_correspondence(th, M, budget=4, depth=6)
        expected = ag.model_found if designed_consistent else ag.refuted
        bad = ag.forbidden or not expected
        violations += bad
        rows.append({"theory": name, "designed": "consistent" if designed_consistent else "inconsistent",
                     "base_size": len(M.domain), "refuted": ag.refuted,
                     "refutation_depth": ag.refutation.depth if ag.refuted else None,
                     "model_found": ag.model_found,
                     "model_size": len(ag.model.domain) if ag.model_found else None,
                     "violation": bad})
    return _report(6, "refutation and outer model never both; designed verdicts found",
                   rows, violations == 0)


# --- 7. proof codes in the hierarchy --------------------------------------------------------

def criterion_7(seed=SEED):
    fleet = proof_fleet(seed + 7, 300)
    failures = 0
    steps = {}
    top = 0
    for p, _, sig in fleet:
        ranks = {}
        try:
            for path, node in p.nodes():
                ranks[path] = proof_rank(node, sig.base, sig)
        except BudgetError:
            failures += 1
            continue
        top = max(top, ranks[()])
        for path, node in p.nodes():
            if node.tag == "mp":
                d = ranks[path] - max(ranks[path + (0,)], ranks[path + (1,)])
                steps[d] = steps.get(d, 0) + 1
    findings = [{"proofs": len(fleet), "rank_failures": failures, "rank_cap": RANK_CAP,
                 "max_rank": top, "mp_rank_increase": {str(k): v for k, v in sorted(steps.items())},
                 "mp_join_constant": max(steps) if steps else None}]
    return _report(7, "every accepted proof has a finite rank", findings, failures == 0)


# --- 8. geology ------------------------------------------------------------------------------

def fan_extensions(seed, count):
    """(W, P, G, M): M built from W by a two-atom fan whose conditions have
    rank 3, so the generic is a new set."""
    rng = random.Random(seed)
    r3 = [x for x in sorted(stage(4)) if rank(x) == 3]
    extras = [x for x in sorted(stage(3))]
    out, seen = [], set()
    while len(out) < count:
        t, a, b = rng.sample(r3, 3)
        seeds = [make_set([t, a, b])]
        if rng.random() < 0.4:
            seeds.append(rng.choice(extras))
        P = Poset.make([t, a, b], [(a, t), (b, t)])
        W = universe_model(seeds)
        G = rng.choice(generic_filters(P))
        M = generic_extension(W, P, G)
        if M.domain in seen or M.domain == W.domain:
            continue
        seen.add(M.domain)
        out.append((W, P, G, M))
    return out


def plain_bases(seed, count):
    rng = random.Random(seed)
    V4 = sorted(stage(4))
    out, seen = [], set()
    while len(out) < count:
        M = universe_model(rng.sample(V4, rng.randint(1, 2)))
        if M.domain in seen or len(M.domain) > 16:
            continue
        seen.add(M.domain)
        out.append(M)
    return out


def criterion_8(seed=SEED):
    rows, failures = [], 0
    cases = [(None, M) for M in plain_bases(seed, 25)]
    cases += [((W, P, G), M) for W, P, G, M in fan_extensions(seed + 8, 25)]
    for built, M in cases:
        gs = grounds(M)
        models = ground_models(M)
        core = mantle(M)
        in_grounds = any(g.model.domain == M.domain for g in gs)
        mantle_ok = all(core.domain <= W.domain for W in models)
        row = {"kind": "plain" if built is None else "fan-extension", "size": len(M.domain),
               "grounds": len(gs), "ground_models": len(models), "mantle_size": len(core.domain),
               "base_is_ground": in_grounds, "mantle_in_every_ground": mantle_ok}
        ok = in_grounds and mantle_ok
        if built is not None:
            W = built[0]
            ga = ground_axiom(M)
            witness = any(g.model.domain == W.domain for g in nontrivial_grounds(M))
            row.update({"ground_size": len(W.domain), "ground_axiom": ga, "witness_found": witness})
            ok = ok and not ga and witness
        row["ok"] = ok
        failures += not ok
        rows.append(row)
    return _report(8, "geology sanity on 50 bases", rows, failures == 0)


# --- 9. Bukovsky direction ---------------------------------------------------------------------

def criterion_9(seed=SEED):
    rows, failures = [], 0
    grounds_ = [W for W, _, _, _ in fan_extensions(seed + 9, 6)]
    grounds_ += [universe_model([ordinal(3)]), universe_model([ordinal(4), make_set([pair(EMPTY, EMPTY)])])]
    for W in grounds_:
        for kappa in (2, 3, 4):
            audit = covering_audit(W, kappa)
            fails = len(audit.forward_failures)
            failures += fails
            rows.append({"ground_size": len(W.domain), "kappa": kappa, "pairs": len(audit.forward),
                         "failures": fails})
    small = universe_model([ordinal(1)])
    converse = covering_audit(small, 2, budget=3)
    covered, forcing = converse.converse_counts()
    rows.append({"converse_ground_size": len(small.domain), "outer_models": len(converse.converse),
                 "covered": covered, "covered_and_small_forcing": forcing})
    return _report(9, "small-antichain extensions are globally covered", rows, failures == 0)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def run(n, seed=SEED):
    start = time.perf_counter()
    report = CRITERIA[n](seed)
    report.runtime = time.perf_counter() - start
    return report


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else SEED
    for n in CRITERIA:
        print(n, digest(run(n, seed).body()))
