import sys

import pytest

from ve_infer import McmcConfig


@pytest.fixture
def small_mcmc():
    return McmcConfig(chains=4, iterations=6000, burn_in=1500, seed=7)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in mod.CRITERIA.items():
        if n in mod.RESULTS:
            ok, detail = mod.RESULTS[n]
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {text} | {detail}")
        else:
            terminalreporter.write_line(f"[----] {n}. {text} | not run")
