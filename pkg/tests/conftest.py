from __future__ import annotations

import pytest
from hypothesis import strategies as st

from oscm_gaps.core import BipartiteInstance, Node
from oscm_gaps.generator import GenParams, generate

TOP_BASE = 100  # top ids start here so the layers never collide


def mk_instance(bottom_kinds: str, top_kinds: str, edges, pi1=None) -> BipartiteInstance:
    """Compact builder: kinds as strings of 'r'/'d', bottom ids 0.., top
    ids 100.. in listing order."""
    bottom = [
        Node(i, "bottom", "real" if c == "r" else "dummy")
        for i, c in enumerate(bottom_kinds)
    ]
    top = [
        Node(TOP_BASE + i, "top", "real" if c == "r" else "dummy")
        for i, c in enumerate(top_kinds)
    ]
    return BipartiteInstance.build(bottom, top, edges, pi1)


def gen(n, f_dm, deg_avg, seed) -> BipartiteInstance:
    return generate(GenParams(n=n, f_dm=f_dm, deg_avg=deg_avg, seed=seed))


@st.composite
def instances(draw, max_bottom=5, max_top=5, allow_dummies=True):
    """Random valid instances, including degree-0 real top nodes and a
    shuffled bottom order."""
    n_bottom_real = draw(st.integers(1, max_bottom))
    n_top_real = draw(st.integers(1, max_top))
    n_bottom_dummy = draw(st.integers(0, 2)) if allow_dummies else 0
    n_top_dummy = draw(st.integers(0, 3)) if allow_dummies else 0

    bottom = [Node(i, "bottom", "real") for i in range(n_bottom_real)]
    bottom += [
        Node(n_bottom_real + i, "bottom", "dummy") for i in range(n_bottom_dummy)
    ]
    top = [Node(TOP_BASE + i, "top", "real") for i in range(n_top_real)]
    top += [Node(TOP_BASE + n_top_real + i, "top", "dummy") for i in range(n_top_dummy)]

    edges = set()
    for t in range(n_top_real):
        neighbors = draw(
            st.sets(st.integers(0, n_bottom_real - 1), min_size=0, max_size=n_bottom_real)
        )
        edges |= {(b, TOP_BASE + t) for b in neighbors}
    for i in range(n_top_dummy):
        b = draw(st.integers(0, n_bottom_real - 1))
        edges.add((b, TOP_BASE + n_top_real + i))
    for i in range(n_bottom_dummy):
        t = draw(st.integers(0, n_top_real - 1))
        edges.add((n_bottom_real + i, TOP_BASE + t))

    bottom_ids = [v.id for v in bottom]
    pi1 = draw(st.permutations(bottom_ids))
    return BipartiteInstance.build(bottom, top, edges, pi1)


# -- acceptance reporting ----------------------------------------------------

_acceptance_outcomes: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance.py" in report.nodeid:
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance_outcomes):
        name = nodeid.split("::")[-1]
        status = "PASS" if _acceptance_outcomes[nodeid] == "passed" else "FAIL"
        terminalreporter.write_line(f"{name}: {status}")
