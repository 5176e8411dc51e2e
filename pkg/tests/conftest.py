import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from fairinputs import Dataset, fixtures


def oracle_phi(ds, s, i):
    """Predictive power by direct pairwise comparison; shares no code with the library."""
    s = sorted(s)
    mine = [ds.token(k, i) for k in s]
    same = [j for j in range(ds.n) if [ds.token(k, j) for k in s] == mine]
    counts = {}
    for j in same:
        counts[ds.label_of(j)] = counts.get(ds.label_of(j), 0) + 1
    return Fraction(max(counts.values()), len(same))


def all_subsets(d):
    return [frozenset(c) for r in range(d + 1) for c in itertools.combinations(range(d), r)]


def random_dataset(rng, max_n=40, max_d=6, max_values=3, max_labels=3):
    n = rng.randint(1, max_n)
    d = rng.randint(0, max_d)
    cards = [rng.randint(1, max_values) for _ in range(d)]
    labels = rng.randint(1, max_labels)
    rows = [[rng.randrange(c) for c in cards] for _ in range(n)]
    ys = [rng.randrange(labels) for _ in range(n)]
    return Dataset.from_rows(rows, ys, [f"f{k + 1}" for k in range(d)])


@st.composite
def datasets(draw, max_n=40, max_d=6, max_values=3, max_labels=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_dataset(random.Random(seed), max_n, max_d, max_values, max_labels)


def balance_scale():
    """The 625-row balance scale data: every weight/distance combination from 1 to 5."""
    rows, labels = [], []
    for lw, ld, rw, rd in itertools.product(range(1, 6), repeat=4):
        torque = lw * ld - rw * rd
        rows.append((lw, ld, rw, rd))
        labels.append("L" if torque > 0 else "R" if torque < 0 else "B")
    return Dataset.from_rows(rows, labels, ["left-weight", "left-distance", "right-weight", "right-distance"])


@pytest.fixture
def table1():
    return fixtures.load("table1")


@pytest.fixture
def xor():
    return fixtures.load("xor")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion, reported in the summary")
    config._acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "SKIP" if rep.skipped else "PASS" if rep.passed else "FAIL"
        title = marker.args[1]
        if hasattr(item, "callspec"):
            title = f"[{item.callspec.id}] {title}"
        item.config._acceptance.append((marker.args[0], title, status, round(rep.duration, 3)))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = getattr(config, "_acceptance", [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, secs in sorted(rows, key=lambda r: (str(r[0]), r[1])):
        terminalreporter.write_line(f"{status}  criterion {number}: {title} ({secs}s)")
