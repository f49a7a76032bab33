import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cextkit import _kernels_py, kernels
from cextkit.corpus import small_groups
from cextkit.errors import BudgetExceeded

try:
    from cextkit import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled backend not built")
GROUPS = small_groups(16)


def as_set(rows):
    return sorted(map(tuple, np.asarray(rows).tolist()))


@needs_c
@given(st.sampled_from(GROUPS), st.lists(st.integers(0, 15), max_size=3))
def test_closure_agrees(G, gens):
    gens = np.array([g % G.order for g in gens], dtype=np.int64)
    a = _kernels_py.closure(G.table, gens)
    b = _ckernels.closure(G.table, gens)
    assert sorted(np.asarray(a).tolist()) == sorted(np.asarray(b).tolist())


@needs_c
@given(st.sampled_from(GROUPS))
def test_associativity_agrees(G):
    assert _kernels_py.associativity_witness(G.table) is None
    assert _ckernels.associativity_witness(G.table) is None
    bad = G.table.copy()
    if G.order > 2:
        bad[1, 1], bad[1, 2] = bad[1, 2], bad[1, 1]
        assert (_kernels_py.associativity_witness(bad) is None) == \
            (_ckernels.associativity_witness(bad) is None)


@needs_c
@given(st.sampled_from(GROUPS), st.sampled_from(GROUPS), st.integers(0, 2 ** 31))
def test_hom_witness_agrees(G, H, seed):
    rng = np.random.default_rng(seed)
    images = rng.integers(0, H.order, G.order).astype(np.int64)
    images[0] = 0
    a = _kernels_py.hom_witness(G.table, H.table, images)
    b = _ckernels.hom_witness(G.table, H.table, images)
    assert (a is None) == (b is None)


@needs_c
def test_constrained_enumeration_agrees(ext_n2):
    from cextkit.centrality import _membership
    for F in ext_n2[::11]:
        masks = list(range(F.top + 1))
        maps, cons = _membership(F, masks)
        sizes = [F.top_object.order] * len(masks)
        a = _kernels_py.enumerate_constrained(sizes, maps, cons, 10 ** 7)
        b = _ckernels.enumerate_constrained(sizes, maps, cons, 10 ** 7)
        assert as_set(a) == as_set(b)


@pytest.mark.parametrize("impl", [_kernels_py] + ([_ckernels] if _ckernels else []))
def test_budget_is_enforced(impl):
    f = np.zeros(8, dtype=np.int64)
    with pytest.raises(BudgetExceeded):
        impl.enumerate_constrained([8, 8, 8], [f], [(0, 1, 0, 0), (1, 2, 0, 0)], 10)


def test_global_cap_clamps_budget():
    f = np.zeros(8, dtype=np.int64)
    kernels.set_global_cap(5)
    try:
        with pytest.raises(BudgetExceeded):
            kernels.enumerate_constrained([8, 8], [f], [(0, 1, 0, 0)], 10 ** 6)
    finally:
        kernels.set_global_cap(None)


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, CEXTKIT_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import cextkit; print(cextkit.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_pure_backend_end_to_end():
    env = dict(os.environ, CEXTKIT_PURE="1")
    code = ("from cextkit.corpus import named_group\n"
            "from cextkit.classify import verify_main_theorem\n"
            "print(verify_main_theorem(named_group('C4'), named_group('C2')).ok)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == "True"
