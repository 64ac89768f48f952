import pytest

from cwcount.expression import evaluate, gen_family, parse_expression

FIG1 = "(e 1 3 (u (v 3) (e 1 2 (u (u (v 2) (v 2)) (ren 2 1 (e 1 2 (u (v 1) (v 2))))))))"


def random_corpus(count=240, max_n=8, max_l=3, base_seed=0):
    """Seeded random irredundant expressions, sizes cycling over 1..max_n and widths over 1..max_l."""
    out = []
    for k in range(count):
        n = 1 + k % max_n
        l = 1 + (k // max_n) % max_l
        seed = base_seed + k
        out.append((n, l, seed, gen_family("random", n, l, seed=seed)))
    return out


@pytest.fixture(scope="session")
def corpus():
    return [(n, l, seed, expr, evaluate(expr, l)) for n, l, seed, expr in random_corpus()]


@pytest.fixture
def fig1():
    return parse_expression(FIG1)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props and rep.when == "call":
                lines.append((props["criterion"], status.upper(), props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, status, detail in sorted(lines):
            terminalreporter.write_line(f"[{status}] criterion {crit} {detail}".rstrip())
