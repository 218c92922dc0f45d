"""End-to-end acceptance checks.

Each test prints exactly one ``PASS``/``FAIL`` line for its criterion; the
lines are also collected into a terminal summary section.  Reference
numbers are the published tables; tolerances are the stated ones.
"""

import random
import time
from fractions import Fraction

import mpmath
import pytest

from avgorder import cli, oracles, selfcheck
from avgorder.arith import ArithmeticTable
from avgorder.constants import log_integral, universal_constant
from avgorder.density import DensityEngine
from avgorder.subgroup import subgroup
from avgorder.sweep import brute_force_group_order, sweep

from conftest import ACCEPTANCE_LINES

PUBLISHED_CR = {
    1: "0.57595996889294543964316337549249669251",
    2: "0.82357659279814332395380438513901050177",
    3: "0.92190332088740008067545348360869076931",
    4: "0.96388805107176946676374437726734997946",
    5: "0.98282912014687261524345691713313004185",
    6: "0.99168916383630008819101294319807859837",
    7: "0.99593155027181927318700546733612700362",
    8: "0.99799372275691129752727433560285572887",
    9: "0.99900593591154969071253065973483263501",
    10: "0.99950593624928276115384423618416539651",
}

PUBLISHED_C = {
    "Gamma": ["0.5723602190", "0.8234094709", "0.9219688310", "0.9638925514", "0.9828293379", "0.9916891587", "0.9959315465"],
    "Gamma'": ["0.5797162295", "0.8249060912", "0.9220306381", "0.9639002343", "0.9828302996", "0.9916892783", "0.9959315614"],
    "Gamma''": ["0.5856399683", "0.8246572843", "0.9220082264", "0.9638982767", "0.9828301305", "0.9916892643", "0.9959315465"],
}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def matching_digits(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a[2:], b[2:]):
        if x != y:
            break
        n += 1
    return n


def test_universal_constants():
    worst_digits, worst_time, problems = 38, 0.0, []
    with mpmath.workdps(60):
        for r, text in PUBLISHED_CR.items():
            start = time.perf_counter()
            value = universal_constant(r, 1, 38)
            elapsed = time.perf_counter() - start
            rendered = mpmath.nstr(value, 45, strip_zeros=False)
            digits = matching_digits(rendered, text)
            worst_digits = min(worst_digits, digits)
            worst_time = max(worst_time, elapsed)
            if abs(value - mpmath.mpf(text)) >= mpmath.mpf(10) ** -30 or elapsed >= 60:
                problems.append(f"r={r}")
    report(1, not problems, f"C_r, r=1..10: at least {worst_digits} leading digits agree, slowest {worst_time:.2f}s" + (f"; off: {problems}" if problems else ""))


def test_density_table():
    mismatches, closed_gap = [], mpmath.mpf(0)
    for family, rows in cli.table8_groups(7).items():
        for r, gens in enumerate(rows, 1):
            eng = DensityEngine(subgroup(gens))
            euler = eng.density_euler(1, 30).value
            got = cli.truncate(euler, 10)
            if got != PUBLISHED_C[family][r - 1]:
                mismatches.append(f"{family}_{r}: computed {got}, printed {PUBLISHED_C[family][r - 1]}")
            with mpmath.workdps(40):
                closed_gap = max(closed_gap, abs(eng.density_prime_generators(30).value - euler))
    ok = not mismatches and closed_gap < mpmath.mpf(10) ** -20
    detail = f"{21 - len(mismatches)}/21 table values match, closed form gap {mpmath.nstr(closed_gap, 3)}"
    if mismatches:
        detail += "; " + "; ".join(mismatches)
    report(2, ok, detail)


def test_exact_multipliers():
    expected = {"2": Fraction(159, 160), "3": Fraction(463, 460), "5": Fraction(121, 119)}
    got = {g: DensityEngine(subgroup(g)).rational_multiplier(1) for g in expected}
    report(3, got == expected, ", ".join(f"q<{g}> = {q}" for g, q in got.items()))


def test_series_cross_check():
    table = ArithmeticTable.build(10**5)
    parts, ok = [], True
    for g in ("2,3", "2,3,5"):
        eng = DensityEngine(subgroup(g))
        ser = eng.density_series(1, 10**5, table)
        with mpmath.workdps(40):
            gap = abs(ser.value - eng.density_euler(1, 30).value)
        ok &= gap <= mpmath.mpf(10) ** -4 and gap <= ser.error_estimate
        parts.append(f"<{g}> gap {mpmath.nstr(gap, 3)} (tail estimate {mpmath.nstr(ser.error_estimate, 3)})")
    report(4, ok, "; ".join(parts))


@pytest.mark.slow
def test_empirical_convergence():
    start = time.perf_counter()
    failures, worst = [], {1: 0.0, 2: 0.0}
    for family, rows in cli.table8_groups(7).items():
        for r, gens in enumerate(rows, 1):
            pres = subgroup(gens)
            led = sweep(pres, 1, 10**7, [10**5, 10**6, 10**7])
            c = DensityEngine(pres).density_euler(1, 20).value
            diffs = [abs(mpmath.mpf(k.sum_orders_t) / k.sum_p_t - c) for k in led.checkpoints]
            tol = 5e-3 if r == 1 else 1e-3
            key = 1 if r == 1 else 2
            worst[key] = max(worst[key], float(diffs[-1]))
            if diffs[-1] > tol:
                failures.append(f"{family}_{r} diff {mpmath.nstr(diffs[-1], 3)}")
            if r >= 2 and not diffs[-1] < diffs[0]:
                failures.append(f"{family}_{r} not closer at 1e7 than at 1e5")
    elapsed = time.perf_counter() - start

    small = oracles.primes_below(1001)
    exact = True
    for g in oracles.corpus():
        pres = subgroup(g)
        led = sweep(pres, 1, 1000)
        exact &= (led.prime_count, led.sum_orders_t, led.sum_p_t) == (
            len(small),
            sum(brute_force_group_order(pres, p) for p in small),
            sum(small),
        )
    if not exact:
        failures.append("X=1e3 totals differ from brute force")
    if elapsed > 600:
        failures.append(f"runtime {elapsed:.0f}s")
    report(
        5,
        not failures,
        f"X=1e7, 21 groups in {elapsed:.0f}s: worst |A-C| r=1 {worst[1]:.2e}, r>=2 {worst[2]:.2e}; X=1e3 brute-force totals {'equal' if exact else 'differ'}"
        + (f"; {failures}" if failures else ""),
    )


def test_higher_moment():
    pres = subgroup("2,3")
    led = sweep(pres, 2, 10**6, [10**6])
    c2 = DensityEngine(pres).density_euler(2, 20).value
    with mpmath.workdps(30):
        normalized = mpmath.mpf(led.sum_orders_t) / log_integral(mpmath.mpf(10) ** 18)
        rel = (normalized - c2) / c2
    report(6, abs(rel) <= 0.02, f"sum |Gamma_p|^2 / li(1e18) = {mpmath.nstr(normalized, 8)}, C_2 = {mpmath.nstr(c2, 8)}, relative gap {mpmath.nstr(rel, 3)}")


def test_oracle_suites():
    rng = random.Random(7)
    results = selfcheck.run_selfcheck()
    # an extra batch of 100 randomized presentations with a different seed
    extra = selfcheck.check_snf(rng, 100) or selfcheck.check_coset(rng, 100)
    ok = all(r.passed for r in results) and extra is None
    detail = ", ".join(f"{r.name} {'ok' if r.passed else r.detail}" for r in results)
    if extra:
        detail += f"; extra batch: {extra}"
    report(7, ok, detail)


def test_determinism():
    pres = subgroup("2,3")
    one = sweep(pres, 1, 10**6, segment=1 << 17, workers=1)
    eight = sweep(pres, 1, 10**6, segment=1 << 17, workers=8)
    whole = sweep(pres, 1, 10**6)
    base = dict(cli.DEFAULTS, digits=10, generators="2,3", limit=10**6, output="json")
    reports = []
    for w in (1, 8):
        cfg = cli.RunConfig(**dict(base, workers=w))
        reports.append(cli.render_sweep(cli.run_sweep(pres, cfg)[1], cfg, pres))
    ok = one == eight == whole and reports[0] == reports[1]
    report(8, ok, f"ledgers {'identical' if one == eight == whole else 'differ'} across workers and segment sizes, reports {'identical' if reports[0] == reports[1] else 'differ'}")
