"""Backend agreement: the compiled kernels must match the pure ones bit for
bit on their shared domain, including scan order (first-found points)."""

import random

import pytest

from cctu import _kernels_py as pure

compiled = pytest.importorskip("cctu._speedups")


def test_backends_report_names():
    assert pure.BACKEND == "python"
    assert compiled.BACKEND == "compiled"


def test_det_agreement_random():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randint(0, 6)
        flat = [rng.randint(-3, 3) for _ in range(n * n)]
        assert pure.det_bareiss(list(flat), n) == compiled.det_bareiss(list(flat), n)


def test_subdet_witness_agreement():
    rng = random.Random(7)
    for _ in range(300):
        k = rng.randint(1, 5)
        n = rng.randint(1, 5)
        flat = [rng.choice((-1, 0, 1)) for _ in range(k * n)]
        assert pure.find_non_unit_subdet(list(flat), k, n) == compiled.find_non_unit_subdet(
            list(flat), k, n
        )


def test_subdet_max_order_agreement():
    rng = random.Random(9)
    for _ in range(100):
        k = rng.randint(2, 5)
        n = rng.randint(2, 5)
        flat = [rng.choice((-1, 0, 1)) for _ in range(k * n)]
        assert pure.find_non_unit_subdet(list(flat), k, n, 2) == compiled.find_non_unit_subdet(
            list(flat), k, n, 2
        )


def test_ghouila_houri_agreement():
    rng = random.Random(11)
    for _ in range(150):
        k = rng.randint(1, 5)
        n = rng.randint(1, 5)
        flat = [rng.choice((-1, 0, 1)) for _ in range(k * n)]
        assert pure.ghouila_houri_ok(list(flat), k, n) == compiled.ghouila_houri_ok(
            list(flat), k, n
        )


def test_box_search_agreement():
    rng = random.Random(13)
    for _ in range(250):
        n = rng.randint(0, 3)
        k = rng.randint(0, 3)
        tflat = [rng.randint(-2, 2) for _ in range(k * n)]
        b = [rng.randint(-3, 6) for _ in range(k)]
        gamma = [rng.randint(-3, 3) for _ in range(n)]
        m = rng.choice((2, 3, 5))
        rmask = rng.randint(1, (1 << m) - 1)
        center = [rng.randint(-2, 2) for _ in range(n)]
        radius = rng.randint(0, 3)
        lo = [c - radius for c in center]
        hi = [c + radius for c in center]
        use_c = rng.random() < 0.5
        c = [rng.randint(-2, 2) for _ in range(n)] if use_c else None
        args = (list(tflat), k, n, list(b), list(gamma), m, rmask, list(lo), list(hi))
        got_p = pure.box_search(*args, list(c) if c else None, use_c)
        got_c = compiled.box_search(*args, list(c) if c else None, use_c)
        assert got_p[0] == got_c[0]
        if got_p[0]:
            assert list(got_p[1]) == list(got_c[1])
            if use_c:
                assert got_p[2] == got_c[2]
