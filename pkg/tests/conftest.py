import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criterion_of: dict[str, str] = {}
_outcomes: dict[str, list[tuple[str, str]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criterion_of[item.nodeid] = str(mark.args[0])


def pytest_runtest_logreport(report):
    cid = _criterion_of.get(report.nodeid)
    if cid is None:
        return
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            outcome = "xfail" if report.skipped else "FAIL"
        else:
            outcome = {"passed": "pass", "failed": "FAIL", "skipped": "SKIPPED"}[report.outcome]
        if report.when != "call" and outcome == "pass":
            return
        _outcomes[cid].append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_outcomes, key=lambda c: (len(c), c)):
        res = _outcomes[cid]
        kinds = [o for _, o in res]
        status = "FAIL" if "FAIL" in kinds else "PASS"
        notes = [f"{name}: {o}" for name, o in res if o in ("xfail", "SKIPPED", "FAIL")]
        extra = f" [{'; '.join(notes)}]" if notes else ""
        tr.write_line(f"criterion {cid}: {status} ({kinds.count('pass')}/{len(kinds)} checks passed){extra}")
