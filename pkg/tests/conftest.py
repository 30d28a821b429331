import os
import random

import pytest
from hypothesis import HealthCheck, settings

from braidclass.catalog import catalog_groups, group_by_name
from braidclass.chartab import set_disk_cache
from braidclass.groups import Subgroup, all_subgroups
from braidclass.pairings import QZ, TwoCocycle, bilinear_cocycle

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BRAIDCLASS_CACHE_DIR", str(tmp_path / "cache"))
    yield
    set_disk_cache(None)


def G(name):
    return group_by_name(name)


def element(group, cycles):
    """Index of a permutation-group element written in 1-based cycles."""
    from braidclass.catalog import parse_cycles
    perm = parse_cycles(cycles, len(group.names[0]))
    return group.names.index(perm)


def subgroup_of_order(group, k):
    return next(S for S in all_subgroups(group) if S.order == k)


def klein_cocycle(H: Subgroup) -> TwoCocycle:
    """mu((a1,a2),(b1,b2)) = a2 b1 / 2 on Z2xZ2, element (a1,a2) = 2 a1 + a2."""
    def mu(x, y):
        return QZ((x % 2) * (y // 2), 2)
    return TwoCocycle(H, [[mu(x, y) for y in H.elements] for x in H.elements])


def random_cochain(order, rng, den=12):
    return [QZ(0)] + [QZ(rng.randrange(den), den) for _ in range(order - 1)]


def cocycle_corpus(H: Subgroup, seed=0):
    """Trivial cocycle, the pullback of the strictly lower triangular form on
    H_ab when it is nonzero, and that pullback shifted by a coboundary."""
    out = [TwoCocycle.zero(H)]
    b = bilinear_cocycle(H)
    if not b.is_zero():
        out.append(b)
        out.append(b.plus_coboundary(random_cochain(H.order, random.Random(seed))))
    return out


def small_subgroup_groups(max_order=16):
    """Distinct Cayley tables of subgroups of catalog groups, as groups."""
    seen = {}
    for Gr in catalog_groups():
        for S in all_subgroups(Gr):
            if S.order <= max_order:
                HG = S.as_group
                seen.setdefault(HG.table_hash, HG)
    return list(seen.values())


# -- acceptance summary ----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
