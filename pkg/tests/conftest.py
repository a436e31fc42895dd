import itertools

import numpy as np
import pytest


def sums(a, b):
    return {x + y for x in a for y in b}


def products(a, b):
    return {x * y for x in a for y in b}


def quadruple_energy(vals, op):
    """Count quadruples by brute force over all 4-tuples; independent of the library."""
    return sum(1 for p, q, r, s in itertools.product(vals, repeat=4) if op(p, q) == op(r, s))


def pair_count_energy(vals, op):
    counts = {}
    for p in vals:
        for q in vals:
            v = op(p, q)
            counts[v] = counts.get(v, 0) + 1
    return sum(c * c for c in counts.values())


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LOG: dict = {}


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_LOG[number] = (title, bool(ok), detail)
    line = f"acceptance {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
    print(line + (f"  [{detail}]" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LOG):
        title, ok, detail = ACCEPTANCE_LOG[number]
        terminalreporter.write_line(
            f"{number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else ""))
