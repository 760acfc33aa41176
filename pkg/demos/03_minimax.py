"""
Minimax rules: from the coin flip to the majority vote
======================================================

If nothing is assumed about the accuracies, every rule that commits to an
answer on some pattern can be wrong with probability one (pick accuracies
0 or 1 so that pattern is certain under the wrong state). Only the coin flip
keeps worst-case risk at 1/2.

Assuming every expert beats a coin by at least ``epsilon`` changes the
picture: the majority vote becomes minimax. Both facts are checked here by
enumerating all ``3**8 = 6561`` rules for three experts.
"""

from crowdrules import (
    Interval,
    ParameterBox,
    brute_force_minimax,
    coin_flip_rule,
    majority_rule,
    minimax_sandwich,
    sup_risk_box,
)

full = ParameterBox.full(3)
res = brute_force_minimax(full)
print(f"unrestricted: minimax risk {res.optimum}, {len(res.witnesses)} minimax rule(s)")
print("  the only one is the coin flip:", res.witness_rules() == [coin_flip_rule(3)])

box = ParameterBox.from_interval(Interval((0.1, 0.1, 0.1)))
res = brute_force_minimax(box)
print(f"\naccuracies >= 0.6: minimax risk {res.optimum:.6f}")
print("  majority among minimax rules:", majority_rule(3) in res)
print("  worst case of majority:", sup_risk_box(majority_rule(3), box))

# upper bound from the candidate, lower bound from the two-point subset
s = minimax_sandwich(box)
print(f"  sandwich: upper={s.upper:.6f} lower={s.lower:.6f} closed={s.closed}")

# unequal margins: the weighted vote at 1/2 + eps_i is minimax
box = ParameterBox.from_interval(Interval((0.4, 0.1, 0.1)))
s = minimax_sandwich(box)
print(f"\nmargins (0.4, 0.1, 0.1): sandwich closed={s.closed}, value={s.upper:.6f}")
print("  brute force agrees:", abs(brute_force_minimax(box).optimum - s.upper) < 1e-12)
