import numpy as np
import pytest

from policyrank import AcsTable, Alternative, Criterion, storage


@pytest.fixture(scope="session")
def ia_table():
    """The bundled 21 x 9 informed-assessment table (0-5 scale)."""
    return storage.load_fixture_table("informed_assessment")


@pytest.fixture(scope="session")
def ia_etable():
    """The bundled published rank columns for the informed-assessment table."""
    return storage.load_etable(storage.fixture_path("e_table_informed"))


@pytest.fixture(scope="session")
def catalog():
    return storage.load_catalog(storage.fixture_path("catalog_policies"),
                                storage.fixture_path("catalog_criteria"))


def make_table(scores, scale_min=0.0, scale_max=10.0, directions=None, names=None):
    """Small helper: build a table from a plain score grid."""
    scores = np.asarray(scores, dtype=float)
    m, n = scores.shape
    directions = directions or ["benefit"] * n
    criteria = tuple(
        Criterion(id=f"c{j + 1}", name=f"criterion {j + 1}",
                  scale_min=scale_min, scale_max=scale_max, direction=directions[j])
        for j in range(n)
    )
    alternatives = tuple(
        Alternative(id=i, name=(names[i] if names else f"alternative {i}"))
        for i in range(m)
    )
    return AcsTable(alternatives, criteria, scores)


@pytest.fixture
def small_table():
    return make_table([[1.0, 4.0], [3.0, 3.0]])
