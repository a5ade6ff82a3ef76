"""Sets, their coding trees, and the operations that act on codes.

Walks one small set through encode, quotient and decode, shows what the
validator says about a broken tree, then checks Pairing+ and Separation+
against the sets they should produce.
"""

from vlab.hf import format_set, ordinal, parse_set
from vlab.syntax import parse_formula
from vlab.trees import (RawTree, decode, encode_set, et_related, format_tree, pairing_plus,
                        quotient, separation_plus, validate_coding_pair)

three = ordinal(3)
print("the ordinal 3 is", format_set(three))

t = encode_set(three)
q = quotient(t)
print(f"\nits unfolded tree has {len(t)} nodes; the quotient keeps {len(q)}")
print(format_tree(q))
print("decoding the quotient gives back", format_set(decode(q)))

# membership between codes, read off the trees alone
one, two = quotient(encode_set(ordinal(1))), quotient(encode_set(ordinal(2)))
print("\n1 E_T 3:", et_related(one, q), "  3 E_T 1:", et_related(q, one))

# a tree where one node hangs under two parents at the same depth
shared = RawTree("r", {"r": ("a", "b"), "a": ("s",), "b": ("s",)})
rep = validate_coding_pair(shared)
print(f"\nshared-node tree: ok={rep.ok}, clause {rep.clause}: {rep.message}")

p = pairing_plus(one, two)
print("\nPairing+ of 1 and 2 decodes to", format_set(decode(p)))

x = parse_set("{{} {{}} {{{}}}}")
phi = parse_formula("exists y in x . y = {}")
kept = decode(separation_plus(quotient(encode_set(x)), phi))
print("Separation+ keeps the members of", format_set(x), "that contain {}:", format_set(kept))
