"""Collects acceptance outcomes and prints one verdict line per criterion."""

from collections import defaultdict

CRITERIA = {
    1: "published corollary constants at printed precision",
    2: "weighted integral identity over the fixture family",
    3: "absolute moments: closed form vs quadrature",
    4: "E, L, I, F coefficients vs their integrals",
    5: "bound dominance over the hypothesis-filtered sweep",
    6: "hand values for x^2 and the Simpson functional on x^4",
    7: "inverse-power proposition reduction and example",
    8: "s-convexity checker suite",
    9: "optimizer validity and determinism",
}

_outcomes: dict[int, list[tuple[str, bool]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    # record the call phase, or a setup failure that prevents it
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _outcomes[marker.args[0]].append((item.nodeid, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            terminalreporter.write_line(f"criterion {n}: NOT RUN  {title}")
            continue
        passed = sum(ok for _, ok in results)
        verdict = "PASS" if passed == len(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title} ({passed}/{len(results)} checks)")
        for nodeid, ok in results:
            if not ok:
                terminalreporter.write_line(f"    failed: {nodeid}")
