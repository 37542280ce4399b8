"""Randomized end-to-end checks of the witness and amplifier laws at reduced sizes."""
import logging
import random

from pydantic import BaseModel

from eplib import obdd
from eplib.acceptance import NonMultiplesOf, PowersOf, PowersOfTwo, Verdict, check_non_gappy, check_rc_discipline, conjunctive_count
from eplib.cep import padding_sweep
from eplib.fewamp import FewRun, amplified_count, build_constants, check_membership, simulate_amplifier, verify_growth
from eplib.formula import truth_mask
from eplib.generators import dag_pairs, formula_pairs, random_formula
from eplib.negequiv import Method, decide_negation_equivalence
from eplib.obdd import Manager
from eplib.twodag import apply_flips, canonical_equal, decide_interchange


__all__ = [
    "SelftestReport",
    "run_selftest",
]

logger = logging.getLogger(__name__)


class SelftestReport(BaseModel):
    seed: int
    passed: bool
    checks: dict[str, Verdict]


def _verdict(failures: list[int], checked: int) -> Verdict:
    return Verdict(passed=not failures, violations=failures[:20], detail=f"{checked} cases")


def check_formula_pairs(seed: int, count: int) -> Verdict:
    failures = []
    for (index, pair) in enumerate(formula_pairs(seed, count)):
        brute = decide_negation_equivalence(pair.f, pair.g, pair.n, Method.BRUTE)
        symbolic = decide_negation_equivalence(pair.f, pair.g, pair.n, Method.SYMBOLIC)
        planted_ok = pair.planted is None or brute.witnesses.contains(pair.planted)
        if brute.witness_count != symbolic.witness_count or not brute.is_power_of_two_or_zero or not planted_ok:
            failures.append(index)
    return _verdict(failures, count)


def check_obdd_canonicity(seed: int, count: int, max_vars: int = 12) -> Verdict:
    rng = random.Random(seed)
    failures = []
    for index in range(count):
        n = rng.randint(1, max_vars)
        manager = Manager.identity(n)
        (f, g) = (random_formula(rng, n), random_formula(rng, n))
        (a, b) = (obdd.build(f, manager=manager), obdd.build(g, manager=manager))
        (mask_f, mask_g) = (truth_mask(f), truth_mask(g))
        if obdd.equivalent(a, b) != (mask_f == mask_g) or obdd.count_models(a) != mask_f.bit_count():
            failures.append(index)
    return _verdict(failures, count)


def check_dag_pairs(seed: int, count: int) -> Verdict:
    failures = []
    for (index, pair) in enumerate(dag_pairs(seed, count)):
        report = decide_interchange(pair.f, pair.g)
        if not report.is_power_of_two_or_zero:
            failures.append(index)
        elif pair.planted is not None and not report.witnesses.contains(pair.planted):
            failures.append(index)
        elif pair.planted is not None and not canonical_equal(apply_flips(pair.g, pair.planted), pair.f):
            failures.append(index)
    return _verdict(failures, count)


def check_amplifiers(p: int) -> Verdict:
    failures = []
    sets = [PowersOfTwo(), PowersOf(4), NonMultiplesOf(2), NonMultiplesOf(3), NonMultiplesOf(5)]
    for (index, s) in enumerate(sets):
        table = build_constants(s, p)
        if not check_membership(table).passed or not verify_growth(table, s.non_gappy_constant).passed:
            failures.append(index)
    pow2 = build_constants(PowersOfTwo(), p)
    if any(amplified_count(pow2, m) != 1 << (m - 1) for m in range(1, p + 1)):
        failures.append(len(sets))
    return _verdict(failures, len(sets) + 1)


def check_path_identity(paths: int) -> Verdict:
    table = build_constants(PowersOfTwo(), paths)
    failures = []
    for mask in range(1 << paths):
        run = FewRun.from_mask(mask, paths)
        if simulate_amplifier(table, run) != amplified_count(table, run.accepting):
            failures.append(mask)
    return _verdict(failures, 1 << paths)


def check_ep_mod_discipline(p: int, limit: int) -> Verdict:
    """Amplified powers-of-two counts avoid multiples of every ``q <= limit`` that is not a power of two."""
    table = build_constants(PowersOfTwo(), p)
    counts = [(m > 0, amplified_count(table, m)) for m in range(p + 1)]
    failures = [q for q in range(3, limit + 1) if q & (q - 1) and not check_rc_discipline(counts, NonMultiplesOf(q)).passed]
    return _verdict(failures, limit)


def check_conjunction(p: int) -> Verdict:
    """The product of two amplified counts is a power of two exactly when both runs accept."""
    table = build_constants(PowersOfTwo(), p)
    counts = [
        (m1 > 0 and m2 > 0, conjunctive_count([amplified_count(table, m1), amplified_count(table, m2)]))
        for m1 in range(p + 1)
        for m2 in range(p + 1)
    ]
    return _verdict(check_rc_discipline(counts, PowersOfTwo()).violations, len(counts))


def run_selftest(seed: int = 0, scale: int = 1) -> SelftestReport:
    checks = {
        "formula_pairs": check_formula_pairs(seed, 40 * scale),
        "obdd_canonicity": check_obdd_canonicity(seed, 40 * scale, max_vars=10),
        "dag_pairs": check_dag_pairs(seed, 30 * scale),
        "amplifiers": check_amplifiers(30),
        "path_identity": check_path_identity(8),
        "non_gappy": check_non_gappy(PowersOfTwo(), 2, 1 << 20),
        "ep_mod_discipline": check_ep_mod_discipline(30, 31),
        "conjunction": check_conjunction(12),
    }
    sweep = padding_sweep(32)
    checks["padding"] = Verdict(passed=sweep.passed, detail=f"{sweep.checked} cases")

    passed = all(v.passed for v in checks.values())
    for (name, verdict) in checks.items():
        logger.info("selftest %s: %s", name, "PASS" if verdict.passed else "FAIL")
    return SelftestReport(seed=seed, passed=passed, checks=checks)
