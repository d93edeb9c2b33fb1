import itertools
from importlib import resources

import numpy as np
import pytest

from triortho import analysis, matrix_io

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion, summarized after the run")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE.append((str(number), title, status))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(_ACCEPTANCE, key=lambda t: (int(t[0].split(".")[0]), t[0])):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")


@pytest.fixture(scope="session")
def hx15():
    text = resources.files("triortho").joinpath("data/hx_15.txt").read_text()
    return matrix_io.parse_matrix(text)


@pytest.fixture(scope="session")
def code15(hx15):
    return analysis.assemble_css(hx15).with_distances()


def all_vectors(n):
    """Every vector of F_2^n as rows, index order."""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def brute_span(gen):
    """All distinct codewords of rowspace(gen), by summing every row subset."""
    gen = np.asarray(gen, dtype=np.uint8)
    words = set()
    for bits in itertools.product((0, 1), repeat=gen.shape[0]):
        w = (np.array(bits, dtype=np.int64) @ gen) % 2 if gen.shape[0] else np.zeros(gen.shape[1], dtype=np.int64)
        words.add(tuple(int(b) for b in w))
    return np.array(sorted(words), dtype=np.uint8).reshape(-1, gen.shape[1])


def brute_dual(gen):
    """Every vector orthogonal to all rows of gen, by scanning F_2^n."""
    gen = np.asarray(gen, dtype=np.int64)
    vecs = all_vectors(gen.shape[1])
    return vecs[((vecs.astype(np.int64) @ gen.T) % 2 == 0).all(axis=1)]


def weight_histogram(words, n):
    return np.bincount(words.sum(axis=1), minlength=n + 1).tolist()
