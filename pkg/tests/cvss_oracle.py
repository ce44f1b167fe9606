"""Reference CVSS v3.1 base-score computation used only as a test oracle.

Transcribed directly from the public v3.1 scoring specification (metric
weight tables plus the score equations and the Roundup pseudocode), kept
deliberately independent of robaudit.cvss: plain floats, table lookups,
and math.floor instead of the package's integer-tenths arithmetic.
"""

import itertools
import math

ATTACK_VECTOR = {"N": 0.85, "A": 0.62, "L": 0.55, "P": 0.2}
ATTACK_COMPLEXITY = {"L": 0.77, "H": 0.44}
PRIVILEGES_UNCHANGED = {"N": 0.85, "L": 0.62, "H": 0.27}
PRIVILEGES_CHANGED = {"N": 0.85, "L": 0.68, "H": 0.5}
USER_INTERACTION = {"N": 0.85, "R": 0.62}
IMPACT_WEIGHT = {"H": 0.56, "L": 0.22, "N": 0.0}


def roundup(value: float) -> float:
    """Smallest value with one decimal place >= value, per the standard."""
    int_input = round(value * 100000)
    if int_input % 10000 == 0:
        return int_input / 100000.0
    return (math.floor(int_input / 10000) + 1) / 10.0


def reference_base_score(av, ac, pr, ui, s, c, i, a):
    """Base score for one metric combination, straight from the equations."""
    iss = 1.0 - (1.0 - IMPACT_WEIGHT[c]) * (1.0 - IMPACT_WEIGHT[i]) * (1.0 - IMPACT_WEIGHT[a])
    if s == "U":
        impact = 6.42 * iss
        pr_weight = PRIVILEGES_UNCHANGED[pr]
    else:
        impact = 7.52 * (iss - 0.029) - 3.25 * (iss - 0.02) ** 15
        pr_weight = PRIVILEGES_CHANGED[pr]
    exploitability = 8.22 * ATTACK_VECTOR[av] * ATTACK_COMPLEXITY[ac] * pr_weight * USER_INTERACTION[ui]
    if impact <= 0:
        return 0.0
    if s == "U":
        return roundup(min(impact + exploitability, 10.0))
    return roundup(min(1.08 * (impact + exploitability), 10.0))


def all_metric_combinations():
    """Every legal base-metric combination (2,592; rendering each under
    both accepted vector prefixes yields the 5,184 scorable vectors)."""
    return itertools.product(
        "NALP", "LH", "NLH", "NR", "UC", "HLN", "HLN", "HLN"
    )
