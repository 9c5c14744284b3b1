import pytest
from hypothesis import HealthCheck, settings

from powcirc.field import PrimeField

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

_ACCEPTANCE: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = item.get_closest_marker("criterion")
    if crit is None:
        return
    num = crit.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE[num] = (rep.passed, item.name, rep.duration)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        ok, name, dur = _ACCEPTANCE[num]
        tr.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {name}  ({dur:.1f}s)")


@pytest.fixture
def F101():
    return PrimeField(101)


@pytest.fixture
def F331():
    return PrimeField(331)


GOLDEN = __import__("pathlib").Path(__file__).parent / "golden"


def run_cli(argv, capsys):
    """In-process CLI run: (exit code, stdout, stderr)."""
    from powcirc.cli import cli_main

    capsys.readouterr()
    rc = cli_main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture(scope="session")
def two_term_reconstruction():
    """One CLI reconstruction of the F_331 golden circuit, shared across suites."""
    import contextlib
    import io
    import time

    from powcirc.cli import cli_main

    out, err = io.StringIO(), io.StringIO()
    t0 = time.perf_counter()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        rc = cli_main(["reconstruct", str(GOLDEN / "two_term_331.circ"), "--verify", "expand"])
    return rc, out.getvalue(), err.getvalue(), time.perf_counter() - t0
