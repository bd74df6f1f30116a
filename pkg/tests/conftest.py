import numpy as np
import pytest

from orthoentropy.constructions import random_unitary_in
from orthoentropy.tensor_algebra import TensorContext, TracialAlgebra

SHAPES = [
    (2, TracialAlgebra.full(2)),
    (2, TracialAlgebra.full(3)),
    (3, TracialAlgebra.full(3)),
    (3, TracialAlgebra.full(2)),
    (2, TracialAlgebra.abelian(4)),
    (2, TracialAlgebra((1, 2), (0.5, 0.25))),
]


@pytest.fixture(params=SHAPES, ids=lambda s: f"n{s[0]}-L{'x'.join(map(str, s[1].block_sizes))}")
def ctx(request):
    n, L = request.param
    return TensorContext(n, L)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_member(ctx, rng):
    """Random (non-unitary) element of M_n ⊗ L."""
    d = ctx.total_dim
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return ctx.project_member(x)


@pytest.fixture
def unitary(ctx, rng):
    return random_unitary_in(ctx, rng)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(results, key=lambda s: int(s.split()[0])):
        ok, notes = results[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{label}]  {'; '.join(notes)}")
