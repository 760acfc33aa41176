"""
Uncertain accuracies with Beta priors
=====================================

When each accuracy carries an independent ``Beta(alpha, beta)`` prior, the
Bayes rule is again a weighted vote, now with weights
``2 log(alpha / beta)``. It coincides with the known-accuracy rule at the
prior mean accuracies.

Three priors over a panel of three experts give three quite different rules.
Ties (both actions optimal) are resolved with a fair coin and shown as
``0/1``.
"""

from crowdrules import BetaPrior, bayes_rule_beta, bayes_rule_known, posterior_beta

priors = {
    "expert 1 trusted": BetaPrior((5, 1, 1), (2, 1, 1)),
    "experts 1, 2 trusted": BetaPrior((5, 5, 1), (2, 2, 1)),
    "expert 3 a spammer": BetaPrior((5, 5, 2), (2, 2, 5)),
}

rows = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
rules = {name: bayes_rule_beta(0.5, m.alpha, m.beta) for name, m in priors.items()}

token = {0: "0", 1: "1", 2: "0/1"}
print(f"{'opinions':<10}" + "".join(f"{name:>22}" for name in rules))
for y in rows:
    cells = "".join(f"{token[int(rule.action(y))]:>22}" for rule in rules.values())
    print(f"{str(y):<10}{cells}")

m = priors["expert 1 trusted"]
print("\nP(theta=1 | (1,0,0)) =", posterior_beta(0.5, m.alpha, m.beta, (1, 0, 0)))
print("same rule as known accuracies at the means:",
      rules["expert 1 trusted"] == bayes_rule_known(0.5, m.mean_accuracy))
