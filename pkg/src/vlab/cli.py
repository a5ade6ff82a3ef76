"""Command-line entry point: ``vlab <group> <command> [options]``.

Every command builds a :class:`~vlab.reports.Report` and prints it as JSON
(default) or text.  Exit status is 0 when every verdict holds, 1 when a
verdict fails (a rejected proof, an invalid tree, a roundtrip mismatch) and
2 on input, parse or budget errors.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

from . import constructible, forcing, hf, multiverse, proofs, trees
from .coding import Signature, decode_formula, encode_formula
from .errors import VlabError
from .reports import Report, RunConfig
from .semantics import satisfies
from .structures import FiniteStructure
from .syntax import classify, format_formula, free_vars, parse_formula

# public operation -> the one command that reaches it
COVERAGE = {
    "hf_core.make_set": "hf info",
    "hf_core.transitive_closure": "hf info",
    "hf_core.rank": "hf info",
    "hf_core.is_transitive": "hf info",
    "hf_core.is_ordinal": "hf info",
    "hf_core.ordinal": "hf ordinal",
    "hf_core.stage": "hf stage",
    "logic_syntax.encode_formula": "formula encode",
    "logic_syntax.decode_formula": "formula decode",
    "logic_syntax.satisfies": "formula eval",
    "logic_syntax.classify": "formula classify",
    "tree_coding.encode_set": "code encode",
    "tree_coding.quotient": "code quotient",
    "tree_coding.decode": "code decode",
    "tree_coding.validate_coding_pair": "code validate",
    "tree_coding.rep_pair": "code rep-pair",
    "tree_coding.et_related": "code relate",
    "tree_coding.tt_equal": "code relate",
    "tree_coding.pairing_plus": "code plus",
    "tree_coding.union_plus": "code plus",
    "tree_coding.separation_plus": "code plus",
    "tree_coding.transitivity_check": "code plus",
    "vlogic_proofs.check_proof": "prove check",
    "vlogic_proofs.refutation_search": "prove search",
    "vlogic_proofs.consistent": "prove consistent",
    "constructible.l_level": "lhier build",
    "constructible.check_kp_instance": "lhier kp",
    "constructible.proof_rank": "lhier rank",
    "forcing_engine.atoms": "force generics",
    "forcing_engine.generic_filters": "force generics",
    "forcing_engine.is_ccc": "force generics",
    "forcing_engine.eval_name": "force extend",
    "forcing_engine.extension": "force extend",
    "forcing_engine.forces_semantic": "force relation",
    "forcing_engine.forces_syntactic": "force relation",
    "forcing_engine.absolute_ma_check": "force ma-check",
    "multiverse_lab.outer_models": "lab outer",
    "multiverse_lab.inner_models": "lab inner",
    "multiverse_lab.imh_check": "lab imh",
    "multiverse_lab.global_covers": "lab covering",
    "multiverse_lab.grounds": "lab geology",
    "multiverse_lab.mantle": "lab geology",
    "multiverse_lab.ground_axiom": "lab geology",
    "multiverse_lab.barwise_correspondence": "lab barwise",
}


class Context:
    """Collects the raw text of every input so the report can digest it."""

    def __init__(self, args, config: RunConfig):
        self.args = args
        self.config = config
        self.inputs = {}

    def text(self, key: str, value: str) -> str:
        """``value`` is a file path, or inline text when no such file exists."""
        if value is not None and os.path.isfile(value):
            with open(value) as fh:
                data = fh.read()
        else:
            data = value
        self.inputs[key] = data
        return data

    def value(self, key: str, value):
        self.inputs[key] = value
        return value

    def set_(self, key: str, value: str) -> hf.HFSet:
        return hf.parse_set(self.text(key, value).strip())

    def base(self, key: str = "base", value: str | None = None) -> FiniteStructure:
        x = self.set_(key, value if value is not None else getattr(self.args, key))
        if not hf.is_transitive(x):
            raise VlabError(f"{key} is not a transitive set")
        return FiniteStructure.from_set(x)

    def model(self, key: str = "base", value: str | None = None) -> FiniteStructure:
        """The base closed under T_fin; ``<key>_extended`` records whether
        closing added sets."""
        B = self.base(key, value)
        M = multiverse.universe_model(B.domain)
        self.inputs[key + "_extended"] = len(M.domain) != len(B.domain)
        return M

    def formula(self, key: str, value: str):
        return parse_formula(self.text(key, value).strip())

    def pool(self, key: str, value: str) -> list:
        text = self.text(key, value)
        return [parse_formula(line.strip()) for line in text.splitlines()
                if line.strip() and not line.lstrip().startswith("#")]

    def report(self, op: str, findings=None, verdicts=None) -> Report:
        return Report(op, self.inputs, self.config.as_dict(), findings or [], verdicts or {})


def fs(x) -> str:
    return hf.format_set(x)


def model_summary(M: FiniteStructure) -> dict:
    return {"size": len(M.domain), "naturals": sorted(M.naturals()),
            "elements": [fs(x) for x in sorted(M.domain)]}


# --- hf -------------------------------------------------------------------------------------

def cmd_hf_info(ctx):
    x = ctx.set_("set", ctx.args.set)
    tc = hf.transitive_closure(x)
    return ctx.report("hf info", [{
        "set": fs(x), "rank": hf.rank(x), "transitive_closure": fs(tc), "tc_size": len(tc),
        "is_transitive": hf.is_transitive(x), "is_ordinal": hf.is_ordinal(x),
        "ackermann": hf.ackermann(x) if hf.rank(x) <= 5 else None,
    }])


def cmd_hf_ordinal(ctx):
    n = ctx.value("n", ctx.args.n)
    return ctx.report("hf ordinal", [{"n": n, "set": fs(hf.ordinal(n))}])


def cmd_hf_stage(ctx):
    n = ctx.value("n", ctx.args.n)
    s = hf.stage(n, budget=ctx.config.stage_budget + 1)
    items = [fs(x) for x in s] if len(s) <= 256 else None
    return ctx.report("hf stage", [{"n": n, "size": len(s), "elements": items}])


# --- formula --------------------------------------------------------------------------------

def _signature(ctx, extras=()):
    return Signature(ctx.base(), tuple(extras))


def cmd_formula_encode(ctx):
    sig = _signature(ctx, ctx.args.extra)
    phi = ctx.formula("formula", ctx.args.formula)
    code = encode_formula(phi, sig)
    back = decode_formula(code, sig)
    return ctx.report("formula encode", [{"code": fs(code), "rank": hf.rank(code)}],
                      {"roundtrip": back == phi})


def cmd_formula_decode(ctx):
    sig = _signature(ctx, ctx.args.extra)
    code = ctx.set_("code", ctx.args.code)
    return ctx.report("formula decode", [{"formula": format_formula(decode_formula(code, sig))}])


def cmd_formula_classify(ctx):
    phi = ctx.formula("formula", ctx.args.formula)
    return ctx.report("formula classify", [{"class": str(classify(phi))}])


def _assignments(ctx, pairs):
    asg = {}
    for item in pairs or ():
        var, _, text = item.partition("=")
        asg[var.strip()] = hf.parse_set(text.strip())
    ctx.value("assign", sorted(pairs or ()))
    return asg


def cmd_formula_eval(ctx):
    M = ctx.base()
    phi = ctx.formula("formula", ctx.args.formula)
    asg = _assignments(ctx, ctx.args.assign)
    return ctx.report("formula eval", [], {"satisfied": satisfies(M, phi, asg)})


# --- code -----------------------------------------------------------------------------------

def _tree(ctx, key, value):
    return trees.parse_tree(ctx.text(key, value), source=value if os.path.isfile(value) else key)


def cmd_code_encode(ctx):
    x = ctx.set_("set", ctx.args.set)
    t = trees.encode_set(x)
    return ctx.report("code encode", [{"nodes": len(t), "tree": trees.format_tree(t)}])


def cmd_code_quotient(ctx):
    t = _tree(ctx, "tree", ctx.args.tree)
    report = trees.validate_coding_pair(t)
    if not report.ok:
        return ctx.report("code quotient", [report.as_dict()], {"valid": False})
    q = trees.quotient(t)
    return ctx.report("code quotient", [{"nodes": len(q), "tree": trees.format_tree(q),
                                          "decoded": fs(trees.decode(q))}], {"valid": True})


def cmd_code_decode(ctx):
    t = _tree(ctx, "tree", ctx.args.tree)
    return ctx.report("code decode", [{"set": fs(trees.decode(t))}])


def cmd_code_validate(ctx):
    t = _tree(ctx, "tree", ctx.args.tree)
    report = trees.validate_coding_pair(t)
    return ctx.report("code validate", [report.as_dict()], {"valid": report.ok})


def cmd_code_roundtrip(ctx):
    r = ctx.value("max_rank", ctx.args.max_rank)
    checked = mismatches = 0
    failures = []
    for x in hf.stage(r + 1, budget=max(r + 1, hf.DEFAULT_STAGE_BUDGET)):
        checked += 1
        q = trees.code(x)
        if trees.decode(q) is not x or not trees.validate_coding_pair(trees.encode_set(x)).ok:
            mismatches += 1
            failures.append(fs(x))
    return ctx.report("code roundtrip", [{"checked": checked, "mismatches": mismatches,
                                          "failures": failures[:20]}], {"zero_mismatches": mismatches == 0})


def cmd_code_rep_pair(ctx):
    X = ctx.set_("x", ctx.args.x)
    Y = ctx.set_("y", ctx.args.y)
    return ctx.report("code rep-pair", [{"rep_pair": fs(trees.rep_pair(X, Y))}])


def cmd_code_relate(ctx):
    x = ctx.set_("x", ctx.args.x)
    y = ctx.set_("y", ctx.args.y)
    qx, qy = trees.code(x), trees.code(y)
    et, tt = trees.et_related(qx, qy), trees.tt_equal(qx, qy)
    return ctx.report("code relate", [{"E_T": et, "=_T": tt}],
                      {"agrees_with_sets": et == (y in x) and tt == (x is y)})


def cmd_code_plus(ctx):
    op = ctx.value("op", ctx.args.op)
    x = ctx.set_("x", ctx.args.x)
    q = trees.code(x)
    if op == "transitivity":
        ok = trees.transitivity_check(q)
        return ctx.report("code plus", [{"op": op, "transitive": ok}],
                          {"agrees_with_sets": ok == hf.is_transitive(x)})
    if op == "pairing":
        y = ctx.set_("y", ctx.args.y)
        out, want = trees.pairing_plus(q, trees.code(y)), hf.make_set([x, y])
    elif op == "union":
        out, want = trees.union_plus(q), hf.union(x)
    else:
        phi = ctx.formula("formula", ctx.args.formula)
        var = next(iter(free_vars(phi)), "x")
        ctx_struct = FiniteStructure.from_set(hf.transitive_closure(hf.singleton(x)))
        out = trees.separation_plus(q, phi, ctx_struct, var)
        want = hf.make_set(z for z in x if satisfies(ctx_struct, phi, {var: z}))
    got = trees.decode(out)
    return ctx.report("code plus", [{"op": op, "decoded": fs(got), "nodes": len(out)}],
                      {"agrees_with_sets": got is want})


# --- prove ----------------------------------------------------------------------------------

def _theory(ctx):
    if ctx.args.theory is None:
        return proofs.EMPTY_THEORY
    return proofs.parse_theory(ctx.text("theory", ctx.args.theory), name="theory",
                               source=ctx.args.theory)


def cmd_prove_check(ctx):
    sig = _signature(ctx, ctx.args.extra)
    th = _theory(ctx)
    p = proofs.parse_proof(ctx.text("proof", ctx.args.proof), source=ctx.args.proof)
    result = proofs.check_proof(p, th, sig)
    row = result.as_dict()
    row["depth"] = p.depth
    return ctx.report("prove check", [row], {"accepted": result.ok})


def cmd_prove_search(ctx):
    sig = _signature(ctx, ctx.args.extra)
    th = _theory(ctx)
    depth = ctx.value("depth", ctx.args.depth)
    p = proofs.refutation_search(th, sig, depth, depth_cap=ctx.config.depth_cap)
    row = {"verdict": "refuted" if p else "no refutation", "depth": depth,
           "diagnostic": "" if p else f"no proof of the contradiction within depth {depth}"}
    if p:
        row["proof"] = proofs.format_proof(p)
    return ctx.report("prove search", [row])


def cmd_prove_consistent(ctx):
    sig = _signature(ctx, ctx.args.extra or ["W0"])
    th = _theory(ctx)
    depth = ctx.value("depth", ctx.args.depth)
    v = proofs.consistent(th, sig, depth, ctx.config.stage_budget)
    return ctx.report("prove consistent", [v.as_dict()])


# --- lhier ----------------------------------------------------------------------------------

def cmd_lhier_build(ctx):
    B = ctx.base()
    n = ctx.value("levels", ctx.args.levels)
    pool = ctx.pool("pool", ctx.config.pool) if ctx.config.pool else None
    rows = []
    for i in range(n + 1):
        L = constructible.l_level(B, i, pool, level_cap=ctx.config.level_cap)
        rows.append({"level": i, "size": len(L), "transitive": L.is_transitive(), "exact": L.exact})
    return ctx.report("lhier build", rows, {"all_transitive": all(r["transitive"] for r in rows)})


def cmd_lhier_rank(ctx):
    B = ctx.base()
    sig = Signature(B, tuple(ctx.args.extra))
    th = _theory(ctx)
    p = proofs.parse_proof(ctx.text("proof", ctx.args.proof), source=ctx.args.proof)
    result = proofs.check_proof(p, th, sig)
    if not result.ok:
        return ctx.report("lhier rank", [result.as_dict()], {"accepted": False})
    r = constructible.proof_rank(p, B, sig)
    return ctx.report("lhier rank", [{"proof_rank": r, "proof_depth": p.depth}], {"accepted": True})


def cmd_lhier_kp(ctx):
    B = ctx.base()
    n = ctx.value("levels", ctx.args.levels)
    L = constructible.l_level(B, n, level_cap=ctx.config.level_cap)
    phi = ctx.formula("formula", ctx.args.formula)
    a = ctx.set_("a", ctx.args.a)
    if ctx.value("kind", ctx.args.kind) == "separation":
        ax = constructible.Separation(phi, ctx.args.var, a)
    else:
        ax = constructible.Collection(phi, ctx.args.var, ctx.args.yvar, a)
    ok = constructible.check_kp_instance(L, ax)
    return ctx.report("lhier kp", [{"level": n, "level_size": len(L)}], {"instance_holds": ok})


# --- force ----------------------------------------------------------------------------------

def _poset(ctx):
    return forcing.parse_poset(ctx.text("poset", ctx.args.poset), source=ctx.args.poset)


def _ground_for(ctx, P):
    """The base with the poset's condition set added (and closed transitively)."""
    B = ctx.base()
    dom = multiverse.transitive_hull(list(B.domain) + [P.as_set()])
    return FiniteStructure.of(dom)


def _condition(P, label):
    if label not in P.labels:
        raise VlabError(f"unknown condition {label}")
    return P.conditions[P.labels.index(label)]


def _name_assignments(ctx, P):
    asg = {}
    for item in ctx.args.assign or ():
        var, _, text = item.partition("=")
        text = text.strip()
        if text == "generic":
            asg[var.strip()] = forcing.generic_name(P)
        elif text.startswith("check:"):
            asg[var.strip()] = forcing.check_name(hf.parse_set(text[6:].strip()), P.top)
        else:
            asg[var.strip()] = hf.parse_set(text)
    ctx.value("assign", sorted(ctx.args.assign or ()))
    return asg


def cmd_force_relation(ctx):
    P = _poset(ctx)
    M = _ground_for(ctx, P)
    phi = ctx.formula("formula", ctx.args.formula)
    asg = _name_assignments(ctx, P)
    cap = ctx.config.name_cap
    rows = []
    labels = [ctx.value("condition", ctx.args.condition)] if ctx.args.condition else list(P.labels)
    agree = True
    for lab in labels:
        p = _condition(P, lab)
        sem = forcing.forces_semantic(p, phi, M, P, cap, asg)
        syn = forcing.forces_syntactic(p, phi, M, P, cap, asg)
        agree &= sem == syn
        rows.append({"condition": lab, "semantic": sem, "syntactic": syn})
    return ctx.report("force relation", rows, {"agree": agree})


def cmd_force_extend(ctx):
    P = _poset(ctx)
    M = _ground_for(ctx, P)
    atom = _condition(P, ctx.value("generic", ctx.args.generic))
    G = P.above(atom)
    ext = forcing.extension(M, P, G, ctx.config.name_cap)
    new = sorted(x for x in ext.domain if x not in M.domain)
    gval = forcing.eval_name(forcing.generic_name(P), G)
    return ctx.report("force extend", [{
        "generic": sorted(P.label(p) for p in G), "ground_size": len(M.domain),
        "extension_size": len(ext.domain), "new": [fs(x) for x in new], "generic_value": fs(gval),
    }], {"same_naturals": ext.naturals() == M.naturals(),
         "ground_embeds": all(x in ext.domain for x in M.domain)})


def cmd_force_ma_check(ctx):
    P = _poset(ctx)
    M = _ground_for(ctx, P)
    var = ctx.value("var", ctx.args.var)
    pool = [(phi, var) for phi in ctx.pool("pool", ctx.args.pool)]
    rep = forcing.absolute_ma_check(M, P, pool, ctx.config.name_cap)
    rows = [{"formula": format_formula(i.formula), "forced_by": None if i.forced_by is None
             else P.label(i.forced_by), "ground_witness": None if i.ground_witness is None
             else fs(i.ground_witness), "holds": i.holds} for i in rep.items]
    return ctx.report("force ma-check", rows, {"schema_holds": rep.holds})


def cmd_force_generics(ctx):
    P = _poset(ctx)
    _, size, witness = forcing.is_ccc(P)
    gens = [sorted(P.label(p) for p in G) for G in forcing.generic_filters(P)]
    meets = all(forcing.is_generic(P, G) for G in forcing.generic_filters(P))
    return ctx.report("force generics", [{
        "atoms": [P.label(a) for a in forcing.atoms(P)], "generics": gens,
        "max_antichain": size, "antichain": [P.label(a) for a in witness],
    }], {"generics_meet_dense_sets": meets})


# --- lab ------------------------------------------------------------------------------------

def cmd_lab_outer(ctx):
    M = ctx.model()
    budget = ctx.config.stage_budget
    outs = multiverse.outer_models(M, budget)
    return ctx.report("lab outer", [model_summary(W) for W in outs],
                      {"contains_base": any(W.domain == M.domain for W in outs)})


def cmd_lab_inner(ctx):
    M = ctx.model()
    ins = multiverse.inner_models(M)
    core = multiverse.ordinal_core(M)
    return ctx.report("lab inner", [model_summary(I) for I in ins], {
        "contains_base": any(I.domain == M.domain for I in ins),
        "contains_ordinal_core": any(I.domain == core.domain for I in ins)})


def _imh_rows(rep):
    return [{"sentence": format_formula(i.sentence), "antecedent": i.antecedent, "holds": i.holds,
             "outer_size": None if i.outer is None else len(i.outer.domain),
             "outer_inner_size": None if i.outer_inner is None else len(i.outer_inner.domain),
             "inner_size": None if i.inner is None else len(i.inner.domain)} for i in rep.items]


def cmd_lab_imh(ctx):
    M = ctx.model()
    pool = ctx.pool("pool", ctx.args.pool or ctx.config.pool)
    mode = ctx.value("mode", ctx.args.mode)
    budget = ctx.config.stage_budget
    if ctx.args.pairwise:
        M2 = ctx.model("base2", ctx.args.base2)
        pw = multiverse.imh_pairwise(M, M2, pool, budget, mode)
        return ctx.report("lab imh", [{"model": "first", "items": _imh_rows(pw.first)},
                                      {"model": "second", "items": _imh_rows(pw.second)}],
                          {"agree_on_pool": pw.agree_on_pool, "imh_differs": pw.imh_differs})
    rep = multiverse.imh_check(M, pool, budget, mode, ctx.config.poset_cap)
    return ctx.report("lab imh", _imh_rows(rep), {"imh_holds": rep.holds})


def cmd_lab_geology(ctx):
    M = ctx.model()
    cap = ctx.value("cap", ctx.args.cap or ctx.config.poset_cap)
    gs = multiverse.grounds(M, cap, ctx.config.name_cap)
    rows = [{"ground_size": len(g.model.domain), "trivial": g.model.domain == M.domain,
             "poset": forcing.format_poset(g.poset), "conditions": [fs(c) for c in g.poset.conditions],
             "generic": sorted(fs(c) for c in g.generic)} for g in gs]
    mantle = multiverse.mantle(M, cap, ctx.config.name_cap)
    return ctx.report("lab geology", rows, {
        "ground_axiom": multiverse.ground_axiom(M, cap, ctx.config.name_cap),
        "mantle_size": len(mantle.domain),
        "base_is_ground": any(g.model.domain == M.domain for g in gs)})


def cmd_lab_covering(ctx):
    W = ctx.model()
    V = ctx.model("outer", ctx.args.outer)
    kappa = ctx.value("kappa", ctx.args.kappa)
    if not W.domain <= V.domain:
        raise VlabError("the inner model is not contained in the outer model")
    witness = multiverse.covering_witness(W, V, kappa)
    hit = multiverse.forcing_witness(W, V, ctx.config.poset_cap, ctx.config.name_cap)
    width = None if hit is None else len(forcing.max_antichain(hit[0]))
    return ctx.report("lab covering", [{
        "uncovered_function": None if witness is None else fs(witness),
        "forcing_extension": hit is not None, "max_antichain": width}],
        {"globally_covers": witness is None})


def cmd_lab_barwise(ctx):
    M = ctx.model()
    th = _theory(ctx)
    extra = ctx.args.extra[0] if ctx.args.extra else "W0"
    a = multiverse.barwise_correspondence(th, M, ctx.config.stage_budget,
                                          ctx.value("depth", ctx.args.depth), extra)
    return ctx.report("lab barwise", [{
        "refuted": a.refuted, "model_found": a.model_found,
        "model_size": None if a.model is None else len(a.model.domain)}],
        {"not_forbidden": not a.forbidden})


# --- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"])
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--stage-budget", type=int)
    common.add_argument("--name-cap", type=int)
    common.add_argument("--depth-cap", type=int)
    common.add_argument("--level-cap", type=int)
    common.add_argument("--poset-cap", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--no-runtime", action="store_true", help="omit runtime from JSON")

    parser = argparse.ArgumentParser(prog="vlab", description="Desk-scale set-theory laboratory.")
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name, help_):
        g = groups.add_parser(name, help=help_)
        return g.add_subparsers(dest="command", required=True)

    def command(sub, name, func, help_=None):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.set_defaults(func=func)
        return c

    def with_base(c, required=True):
        c.add_argument("--base", required=required, help="set literal or file holding one")
        c.add_argument("--extra", action="append", default=[], help="extra predicate name (W0, W1, ...)")
        return c

    g = group("hf", "hereditarily finite sets")
    command(g, "info", cmd_hf_info).add_argument("set")
    command(g, "ordinal", cmd_hf_ordinal).add_argument("n", type=int)
    command(g, "stage", cmd_hf_stage).add_argument("n", type=int)

    g = group("formula", "formulas, codes and satisfaction")
    c = with_base(command(g, "encode", cmd_formula_encode))
    c.add_argument("formula")
    c = with_base(command(g, "decode", cmd_formula_decode))
    c.add_argument("code")
    command(g, "classify", cmd_formula_classify).add_argument("formula")
    c = with_base(command(g, "eval", cmd_formula_eval))
    c.add_argument("formula")
    c.add_argument("--assign", action="append", help="var=set")

    g = group("code", "coding pairs and quotient trees")
    command(g, "encode", cmd_code_encode).add_argument("set")
    command(g, "quotient", cmd_code_quotient).add_argument("tree")
    command(g, "decode", cmd_code_decode).add_argument("tree")
    command(g, "validate", cmd_code_validate).add_argument("tree")
    command(g, "roundtrip", cmd_code_roundtrip).add_argument("--max-rank", type=int, default=3)
    c = command(g, "rep-pair", cmd_code_rep_pair)
    c.add_argument("x")
    c.add_argument("y")
    c = command(g, "relate", cmd_code_relate, "E_T and =_T on the codes of two sets")
    c.add_argument("x")
    c.add_argument("y")
    c = command(g, "plus", cmd_code_plus, "pairing, union, separation or transitivity on codes")
    c.add_argument("op", choices=["pairing", "union", "separation", "transitivity"])
    c.add_argument("x")
    c.add_argument("y", nargs="?")
    c.add_argument("--formula", default="x = x")

    g = group("prove", "proof codes")
    c = with_base(command(g, "check", cmd_prove_check))
    c.add_argument("proof")
    c.add_argument("--theory")
    c = with_base(command(g, "search", cmd_prove_search))
    c.add_argument("--theory")
    c.add_argument("--depth", type=int, default=4)
    c = with_base(command(g, "consistent", cmd_prove_consistent))
    c.add_argument("--theory")
    c.add_argument("--depth", type=int, default=4)

    g = group("lhier", "constructible hierarchy")
    c = with_base(command(g, "build", cmd_lhier_build))
    c.add_argument("--levels", type=int, default=2)
    c.add_argument("--pool")
    c = with_base(command(g, "rank", cmd_lhier_rank))
    c.add_argument("--proof", required=True)
    c.add_argument("--theory")
    c = with_base(command(g, "kp", cmd_lhier_kp))
    c.add_argument("--levels", type=int, default=1)
    c.add_argument("--kind", choices=["separation", "collection"], default="separation")
    c.add_argument("--formula", required=True)
    c.add_argument("--a", required=True, help="the bounding set")
    c.add_argument("--var", default="x")
    c.add_argument("--yvar", default="y")

    g = group("force", "finite-poset forcing")
    c = with_base(command(g, "relation", cmd_force_relation))
    c.add_argument("--poset", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--condition")
    c.add_argument("--assign", action="append", help="var=generic | var=check:<set> | var=<name set>")
    c = with_base(command(g, "extend", cmd_force_extend))
    c.add_argument("--poset", required=True)
    c.add_argument("--generic", required=True, help="label of the atom generating the filter")
    c = with_base(command(g, "ma-check", cmd_force_ma_check))
    c.add_argument("--poset", required=True)
    c.add_argument("--pool", required=True, help="one formula per line in the witness variable")
    c.add_argument("--var", default="x")
    c = command(g, "generics", cmd_force_generics)
    c.add_argument("--poset", required=True)

    g = group("lab", "outer and inner models")
    with_base(command(g, "outer", cmd_lab_outer))
    with_base(command(g, "inner", cmd_lab_inner))
    c = with_base(command(g, "imh", cmd_lab_imh))
    c.add_argument("--pool")
    c.add_argument("--mode", choices=["all", "forcing"], default="all")
    c.add_argument("--pairwise", action="store_true")
    c.add_argument("--base2")
    c = with_base(command(g, "geology", cmd_lab_geology))
    c.add_argument("--cap", type=int)
    c = with_base(command(g, "covering", cmd_lab_covering))
    c.add_argument("--outer", required=True)
    c.add_argument("--kappa", type=int, default=2)
    c = with_base(command(g, "barwise", cmd_lab_barwise))
    c.add_argument("--theory")
    c.add_argument("--depth", type=int, default=6)
    return parser


def commands(parser: argparse.ArgumentParser | None = None) -> set:
    """All ``group command`` strings the parser accepts."""
    parser = parser or build_parser()
    out = set()
    for action in parser._subparsers._group_actions:
        for gname, gparser in action.choices.items():
            for sub in gparser._subparsers._group_actions:
                out.update(f"{gname} {c}" for c in sub.choices)
    return out


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.load(args.config, stage_budget=args.stage_budget, name_cap=args.name_cap,
                                depth_cap=args.depth_cap, level_cap=args.level_cap,
                                poset_cap=args.poset_cap, seed=args.seed, format=args.format,
                                pool=getattr(args, "pool", None) if args.group == "lhier" else None)
        random.seed(config.seed)
        ctx = Context(args, config)
        start = time.perf_counter()
        report = args.func(ctx)
        report.runtime = time.perf_counter() - start
    except (VlabError, ValueError, OSError) as exc:
        print(f"vlab: error: {exc}", file=sys.stderr)
        return 2
    text = report.render(config.format, with_runtime=not args.no_runtime)
    out_path = args.output
    out_dir = os.environ.get("VLAB_OUTPUT_DIR")
    if out_path is None and out_dir:
        out_path = os.path.join(out_dir, report.operation.replace(" ", "-") + ".json")
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if not report.ok:
        for row in report.findings:
            if isinstance(row, dict) and row.get("diagnostic"):
                print(f"vlab: {row['diagnostic']} at node {row.get('path')}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
