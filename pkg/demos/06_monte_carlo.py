"""
Checking exact risks by simulation
==================================

Draw opinion vectors from the model, apply the rule (tossing a real coin
on ties) and average the loss. The estimate should land within a few
standard errors of the exact risk, and the standard error should halve
every time the number of trials is quadrupled.
"""

from crowdrules import bayes_rule_beta, monte_carlo_risk, risk_exact

alpha, beta = (5, 5, 2), (2, 2, 5)
rule = bayes_rule_beta(0.5, alpha, beta)
means = tuple(a / (a + b) for a, b in zip(alpha, beta))

for theta in (0, 1):
    exact = risk_exact(rule, theta, means)
    print(f"theta={theta}: exact risk {exact:.5f}")
    for trials in (2_500, 10_000, 40_000):
        est, se = monte_carlo_risk(rule, theta, means, trials, seed=11)
        print(f"  N={trials:>6}: {est:.5f} +/- {se:.5f}  z={(est - exact) / se:+.2f}")
