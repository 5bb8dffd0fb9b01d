import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from redescribe.dataset import AttributeColumn, View, assemble_dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def truth_table_ds():
    """Eight entities over two 3-attribute views with hand-checkable values.

    viewA          a0    a1    a2      viewB  b0
    entity 0      1.20  1.50  1.00           0.0
    entity 1      1.00  2.00  0.80           1.0
    entity 2      1.30  1.20  1.50           2.0
    entity 3      0.50  1.00  0.70           3.0
    entity 4      1.41  2.32  1.61           4.0
    entity 5      0.98  1.14  0.74           5.0
    entity 6      2.00  0.50  1.00           6.0
    entity 7      1.10  1.90  1.20           7.0
    """
    a = np.array([
        [1.20, 1.50, 1.00],
        [1.00, 2.00, 0.80],
        [1.30, 1.20, 1.50],
        [0.50, 1.00, 0.70],
        [1.41, 2.32, 1.61],
        [0.98, 1.14, 0.74],
        [2.00, 0.50, 1.00],
        [1.10, 1.90, 1.20],
    ])
    b = np.arange(8, dtype=np.float64).reshape(-1, 1)
    va = View("viewA", [AttributeColumn(n, "numeric", a[:, i])
                        for i, n in enumerate(["n23_3", "n8_3", "n21_3"])])
    vb = View("viewB", [AttributeColumn("b0", "numeric", b[:, 0])])
    return assemble_dataset([va, vb])
