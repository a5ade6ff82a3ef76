"""Outer models, inner models and the questions asked about them.

Small universes under the finite base theory, the IMH schema, the
consistency / outer-model correspondence, covering, and the grounds of a
forcing extension.
"""

from vlab.forcing import Poset, generic_filters
from vlab.hf import format_set, ordinal, rank, stage
from vlab.multiverse import (barwise_correspondence, covering_audit, generic_extension, grounds,
                             imh_check, inner_models, mantle, outer_models, universe_model,
                             width_theory)
from vlab.proofs import parse_theory
from vlab.syntax import parse_formula


def show(M):
    return "{" + " ".join(format_set(x) for x in sorted(M.domain)) + "}"


M = universe_model([ordinal(1)])
print("M =", show(M))
outs = outer_models(M, 3)
print(f"outer models within rank 3: {len(outs)}")
for V in outs:
    print("  ", show(V), " inner models:", len(inner_models(V)))

three = parse_formula("exists x in M . exists y in M . exists z in M . "
                      "(not x = y and (not y = z and not x = z))")
for budget in (3, 4):
    rep = imh_check(M, [three], budget)
    print(f"\nIMH for 'three distinct sets' at budget {budget}: holds={rep.holds}"
          f" ({rep.outer_count} outer models)")

base = universe_model([ordinal(2)])
for th in (width_theory(), parse_theory("forall x in M . x in W0\nnot {} in W0", "misses-empty")):
    ag = barwise_correspondence(th, base, budget=4, depth=6)
    print(f"\ntheory {th.name}: refuted={ag.refuted}, outer model found={ag.model_found}")

t, a, b = [x for x in sorted(stage(4)) if rank(x) == 3][:3]
P = Poset.make([t, a, b], [(a, t), (b, t)])
W = universe_model([P.as_set()])
audit = covering_audit(W, 2)
print(f"\ncovering, kappa 2: {len(audit.forward)} extensions checked,"
      f" {len(audit.forward_failures)} not covered")

ext = generic_extension(W, P, generic_filters(P)[0])
gs = grounds(ext)
print(f"\nthe extension has {len(ext.domain)} sets and {len(gs)} grounds;"
      f" sizes {sorted({len(g.model.domain) for g in gs})}; mantle has {len(mantle(ext).domain)}")
