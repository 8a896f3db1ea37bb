import random

import pytest
from hypothesis import HealthCheck, settings

from gorlab.algebra import CdgaPresentation, Generator, NotFiniteDimensional
from gorlab.presets import preset

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_quotient(seed: int, max_degree: int = 12):
    """Small quotient CDGA on generators of degree 2, 3, 4; ``None`` if H is not certified bounded."""
    rng = random.Random(seed)
    degs = [rng.choice((2, 3, 4)) for _ in range(rng.choice((2, 3)))]
    gens = [Generator(f"g{i}", d) for i, d in enumerate(degs)]
    names = [g.name for g in gens]
    evens = [g for g in gens if g.degree % 2 == 0]
    rels = [f"{g.name}^{rng.choice((2, 3))}" for g in evens]
    if len(gens) >= 2 and rng.random() < 0.5:
        a, b = rng.sample(names, 2)
        rels.append(f"{a}*{b}")
    diff = {}
    twos = [g.name for g in evens if g.degree == 2]
    if twos and rng.random() < 0.4:
        gens.append(Generator("c", 3))
        x = rng.choice(twos)
        diff["c"] = f"{x}^2"
        rels = [r for r in rels if not r.startswith(f"{x}^")]
    try:
        R = CdgaPresentation(gens, diff, rels, max_degree=max_degree, name=f"random{seed}")
        R.certified_top()
    except NotFiniteDimensional:
        return None
    return R


def random_suite(count: int = 20):
    out, seed = [], 0
    while len(out) < count:
        R = random_quotient(seed)
        if R is not None:
            out.append(R)
        seed += 1
    return out


@pytest.fixture(scope="session")
def example():
    return preset("example")


@pytest.fixture(scope="session")
def sphere3():
    return preset("sphere3")


@pytest.fixture(scope="session")
def circle():
    return preset("circle")


@pytest.fixture(scope="session")
def sphere2():
    return preset("sphere2")


@pytest.fixture(scope="session")
def wedge():
    return preset("wedge")


# -- acceptance summary: one line per criterion -----------------------------------------------

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    ok = rep.passed if rep.when == "call" else False
    prev = _ACCEPTANCE.get(number, (title, True))
    _ACCEPTANCE[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
