import pytest

# filled by test_acceptance.py: criterion key -> (passed, detail)
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(str(k).rstrip("ab")), str(k))):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")


def minus_one_classes(s, max_degree=6):
    """Brute force: (d; m) with d^2 - sum m^2 = -1 and 3d - sum m = 1 on X^2_s."""
    out = []

    def rec(prefix, sq_left, lin_left, slots, d):
        if slots == 0:
            if sq_left == 0 and lin_left == 0:
                out.append((d,) + tuple(prefix))
            return
        for m in range(-1, d + 1):
            if m * m <= sq_left:
                prefix.append(m)
                rec(prefix, sq_left - m * m, lin_left - m, slots - 1, d)
                prefix.pop()

    for d in range(0, max_degree + 1):
        rec([], d * d + 1, 3 * d - 1, s, d)
    return out


@pytest.fixture(scope="session")
def brute_minus_one():
    return minus_one_classes
