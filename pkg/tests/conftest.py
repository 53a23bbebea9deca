import pytest

from sinrsched import Instance, Link, Node, SinrParams

# criterion -> (passed, detail); filled by test_acceptance, printed at the end of the run
ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    def _record(name, passed, detail=""):
        ACCEPTANCE[name] = (bool(passed), detail)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0][2:])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


# the small worked setting used throughout: alpha=3, beta=2, N=1, phi=1, P=4 (d_max = 1)
P4 = SinrParams(3.0, 2.0, 1.0, 1.0, 4.0)


def line_instance(pairs, params=P4, **kw):
    """Links from ``[((sx, sy), (rx, ry)), ...]``; link k uses nodes 2k -> 2k+1."""
    nodes, links = [], []
    for k, (s, r) in enumerate(pairs):
        nodes += [Node(2 * k, *s), Node(2 * k + 1, *r)]
        links.append(Link(k, 2 * k, 2 * k + 1))
    return Instance(nodes, links, params, **kw)


@pytest.fixture
def far_pair():
    return line_instance([((0, 0), (1, 0)), ((10, 0), (11, 0))])


@pytest.fixture
def near_pair():
    return line_instance([((0, 0), (1, 0)), ((1.5, 0), (2.5, 0))])
