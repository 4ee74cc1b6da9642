import numpy as np
import pytest

from smlg.oracle import gen_corpus

CORPUS_SIZE = 500
CORPUS_SEED = 20240


@pytest.fixture(scope="session")
def corpus():
    """Seeded 500-instance corpus of level DAGs (n <= 24, m <= 8)."""
    return gen_corpus(CORPUS_SIZE, seed=CORPUS_SEED)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion name -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
