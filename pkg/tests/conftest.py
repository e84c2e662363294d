import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, elapsed: float, limit: float | None = None):
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        budget = "exact" if limit is None else f"limit {limit:g} s"
        ACCEPTANCE_LINES[number] = f"AC{number:>2} {status}  {title} ({elapsed:.2f} s, {budget})"
        return ok and within

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
