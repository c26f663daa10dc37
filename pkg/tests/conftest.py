from __future__ import annotations

import pytest

from bspole.polyring import infer_weights, parse_poly

# Named curves from the example families, plus the cusp.
BASIC = ["x^2+y^3", "x^4+y^3", "x^3+y^5", "x^3+x*y^3", "x^3*y+x*y^5", "x^2+y^2"]


def family_xm_xyn(m: int, n: int) -> str:
    return f"x^{m}+x*y^{n}"


def family_xny_xym(n: int, m: int) -> str:
    return f"x^{n}*y+x*y^{m}"


def fixture_polys() -> list[str]:
    out = list(BASIC)
    out += [f"x^{n}+y^{m}" for n in range(2, 7) for m in range(2, 7)]
    out += [family_xm_xyn(m, n) for m in range(2, 7) for n in range(2, 7)]
    out += [family_xny_xym(n, m) for n in range(2, 6) for m in range(2, 6)]
    return sorted(set(out))


@pytest.fixture(params=["x^2+y^3", "x^4+y^3", "x^3+y^5"])
def classic(request):
    f = parse_poly(request.param)
    return f, infer_weights(f)


# One line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
