"""Shared fixtures: canonical distributions built by hand enumeration.

The canonical record sets are written out literally (not via synth) so the
measure tests do not depend on the generator being correct; synth's own
tests close that loop separately.
"""

import itertools

import numpy as np
import pytest

from trihelix import Record, schema_of, table_from_cells


@pytest.fixture
def schema2():
    return schema_of("a", "b")


@pytest.fixture
def schema3():
    return schema_of("d1", "d2", "d3")


def xor_records(copies=100):
    """All four (x, y, x xor y) outcomes, ``copies`` times each."""
    out = []
    for x, y in itertools.product((0, 1), (0, 1)):
        out.extend([Record(values=(str(x), str(y), str(x ^ y)))] * copies)
    return out


def copy_records(n_dims=3, copies=200):
    """One uniform bit copied to every dimension."""
    out = []
    for b in ("0", "1"):
        out.extend([Record(values=(b,) * n_dims)] * copies)
    return out


def independent_records(copies=50):
    """All eight joint outcomes of three independent uniform bits."""
    out = []
    for x, y, z in itertools.product((0, 1), repeat=3):
        out.extend([Record(values=(str(x), str(y), str(z)))] * copies)
    return out


def random_table(rng, cards, names=("a", "b", "c", "d", "e", "f"), scale=1.0):
    """Dense Dirichlet masses as (sparse table, dense array) over ``cards``."""
    masses = rng.dirichlet(np.ones(int(np.prod(cards)))).reshape(cards) * scale
    cells = {}
    for idx in itertools.product(*(range(c) for c in cards)):
        if masses[idx] > 0:
            cells[tuple(str(i) for i in idx)] = float(masses[idx])
    schema = schema_of(*names[: len(cards)])
    return table_from_cells(schema, cells), masses
