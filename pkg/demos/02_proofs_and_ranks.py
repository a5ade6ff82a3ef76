"""Proof trees with infinitary-style rules over a finite base, and where
their codes sit in the constructible hierarchy.

Checks a proof built with the Set-rule, breaks it, searches for a
refutation of a contradictory theory, and measures proof ranks.
"""

from vlab.coding import Signature
from vlab.constructible import l_level, proof_rank
from vlab.proofs import ProofTree, check_proof, format_proof, parse_proof, parse_theory, refutation_search
from vlab.structures import FiniteStructure
from vlab.hf import ordinal

base = FiniteStructure.from_set(ordinal(3))
sig = Signature(base)

proof = parse_proof("""
set :: forall x in {{} {{}}} . x in M
  membership :: {} in M
  membership :: {{}} in M
""")
print(format_proof(proof))
print("checker:", check_proof(proof, sig=sig).as_dict())

# drop one premise: the rule needs one child per member of the bound
broken = ProofTree(proof.formula, proof.tag, proof.children[:1])
print("\nwith a premise removed:", check_proof(broken, sig=sig).as_dict())

th = parse_theory("forall x in M . x in W0\nnot {} in W0", "misses-empty")
found = refutation_search(th, Signature(base, ("W0",)), depth=4)
print(f"\nrefutation of '{th.name}' at depth {found.depth}:")
print(format_proof(found))

print("\nlevel sizes of L over the base:", [len(l_level(base, n).domain) for n in range(2)])
print("proof rank of the Set-rule proof:", proof_rank(proof, base, sig))
print("proof rank of one of its leaves:", proof_rank(proof.children[0], base, sig))
