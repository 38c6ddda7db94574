import os
import random
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_presentation
from fpgroups import kernels

BACKENDS = sorted(kernels.available_backends())


def naive_suffix_array(codes):
    return sorted(range(len(codes)), key=lambda i: codes[i:])


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_compiled_backend_built():
    # the extension is optional at install time but expected in this checkout
    if os.environ.get("FPGROUPS_REQUIRE_CYTHON") == "0":
        pytest.skip("compiled backend not required")
    assert "cython" in BACKENDS


@pytest.mark.parametrize("seed", range(30))
def test_suffix_and_lcp_arrays(seed):
    rng = random.Random(seed)
    codes = [rng.randint(0, 3) for _ in range(rng.randint(1, 60))]
    sa = kernels.suffix_array(codes)
    assert list(sa) == naive_suffix_array(codes)
    for b in BACKENDS:
        lcp = list(kernels.lcp_array(np.asarray(codes, dtype=np.int64), sa, backend=b))
        for k in range(1, len(sa)):
            x, y = codes[sa[k - 1] :], codes[sa[k] :]
            n = 0
            while n < min(len(x), len(y)) and x[n] == y[n]:
                n += 1
            assert lcp[k] == n


@pytest.mark.parametrize("seed", range(25))
def test_low_index_backends_agree(seed):
    rng = random.Random(seed)
    p = random_presentation(rng, max_gens=2, max_rels=3, max_len=6)
    rels = [p.codes(r) for r in p.relators]
    results = [kernels.low_index_search(2 * p.rank, rels, 4, backend=b) for b in BACKENDS]
    assert all(r[0] == results[0][0] for r in results)
    assert all(r[2] == "complete" for r in results)


def test_low_index_first_only_and_node_limit():
    for b in BACKENDS:
        tables, _, status = kernels.low_index_search(4, [], 3, first_only=True, backend=b)
        assert len(tables) == 1 and status == "complete"
        _, nodes, status = kernels.low_index_search(4, [], 5, max_nodes=5, backend=b)
        assert status == "node-limit"


def test_pure_python_switch():
    code = "from fpgroups import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, FPGROUPS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
