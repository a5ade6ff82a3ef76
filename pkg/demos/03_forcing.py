"""Forcing over a three-condition fan.

The ground model knows the poset but not which branch the generic takes.
Each generic gives an extension with one new set, the forcing relation
agrees with truth in the extensions, and Absolute-MA fails for the
sentence naming the new set.
"""

from vlab.forcing import (Forcer, Poset, absolute_ma_check, forces_semantic, generic_filters,
                          generic_name)
from vlab.hf import format_set, make_set, rank, stage
from vlab.multiverse import generic_extension, universe_model
from vlab.syntax import And, Const, Eq, Forall, Mem, Or, Var

t, a, b = [x for x in sorted(stage(4)) if rank(x) == 3][:3]
names = {t: "top", a: "a", b: "b"}
P = Poset.make([t, a, b], [(a, t), (b, t)], labels=[names[c] for c in sorted(names)])
W = universe_model([P.as_set()])
print(f"ground model: {len(W.domain)} sets, conditions top > a, b")

for G in generic_filters(P):
    M = generic_extension(W, P, G)
    new = sorted(M.domain - W.domain)
    print(f"  generic {sorted(P.label(p) for p in G)}: extension has {len(M.domain)} sets,"
          f" new: {', '.join(format_set(x) for x in new)}")

# the check name of a is in the generic name exactly when a is in G
phi = Mem(Const(a), Var("g"))
asg = {"g": generic_name(P)}
f = Forcer(W, P, 2)
print("\ncondition  syntactic  semantic   for a in g")
for p in P.conditions:
    print(f"  {P.label(p):8} {f.forces(p, phi, asg)!s:10} {forces_semantic(p, phi, W, P, 2, asg)}")

# "x is {t, a}", said with parameters from W only, since {t, a} itself is new
x, y = Var("x"), Var("y")
is_ta = And(Mem(Const(t), x), And(Mem(Const(a), x),
            Forall("y", Or(Eq(y, Const(t)), Eq(y, Const(a))), x)))
report = absolute_ma_check(W, P, [(is_ta, "x")])
item = report.items[0]
print(f"\nAbsolute-MA for 'x is {{t, a}}': forced by {P.label(item.forced_by)},"
      f" ground witness {item.ground_witness}, holds={report.holds}")
print("the set exists in the extension exactly when a is in G:",
      [(sorted(P.label(p) for p in G), make_set([t, a]) in generic_extension(W, P, G).domain)
       for G in generic_filters(P)])
