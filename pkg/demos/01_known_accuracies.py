"""
Combining experts whose accuracies are known
============================================

Each expert ``i`` reports the hidden bit correctly with probability
``gamma_i``. The Bayes rule is a weighted vote with weights
``2 log(gamma / (1 - gamma))`` compared against a cutoff that also
absorbs the prior ``c = P(theta = 1)``.
"""

from crowdrules import (
    bayes_rule_known,
    majority_rule,
    posterior_known,
    risk_exact,
    weights_known,
)
from crowdrules.fileformats import format_display_table

gammas = [0.9, 0.6, 0.6]

# one accurate expert and two weak ones
print("weights:", weights_known(gammas).round(3))
for y in [(1, 0, 0), (0, 1, 1), (1, 1, 0)]:
    print(y, "P(theta=1 | y) =", round(posterior_known(0.5, gammas, y), 4))

# the accurate expert outvotes the two weak ones
rule = bayes_rule_known(0.5, gammas)
print(format_display_table(rule))

# with an even prior the rule has the same risk under both states
print("R(rule, 0) =", risk_exact(rule, 0, gammas))
print("R(rule, 1) =", risk_exact(rule, 1, gammas))

# equal accuracies above 1/2 reduce to the plain majority vote
print("majority == Bayes at gamma=0.8:", bayes_rule_known(0.5, [0.8] * 3) == majority_rule(3))

# a lopsided prior can override every vote
print(format_display_table(bayes_rule_known(0.99, [0.6])))
