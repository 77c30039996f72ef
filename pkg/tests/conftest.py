import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, text): acceptance criterion reported in the summary")
    config.stash[_RESULTS_KEY] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        key, text = marker.args
        detail = dict(item.user_properties).get("detail", "")
        item.config.stash[_RESULTS_KEY][key] = (text, rep.passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")

    def order(k):
        num = "".join(ch for ch in k if ch.isdigit())
        return (int(num or 0), k)

    for key in sorted(results, key=order):
        text, ok, detail = results[key]
        line = f"{'PASS' if ok else 'FAIL'}  {key:<4} {text}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
