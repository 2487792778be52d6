import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from glauberlab.core import (
    SpinConfig,
    apply_exchange,
    apply_flip,
    dominates,
    magnetization,
)

spin_arrays = st.integers(3, 12).flatmap(
    lambda n: st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n)
)


def all_configs(n):
    for tup in itertools.product((-1, 1), repeat=n):
        yield SpinConfig(np.array(tup, dtype=np.int8))


class TestSpinConfig:
    def test_rejects_small_lattice(self):
        with pytest.raises(ValueError):
            SpinConfig([1, -1])

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            SpinConfig([1, 0, -1])

    def test_immutable(self):
        cfg = SpinConfig.all_plus(4)
        with pytest.raises(AttributeError):
            cfg.n = 5
        with pytest.raises(ValueError):
            cfg.spins[0] = -1

    def test_string_roundtrip(self):
        cfg = SpinConfig.from_string("+-+--+")
        assert cfg.to_string() == "+-+--+"
        assert cfg[1] == -1 and cfg[0] == 1

    def test_from_string_rejects_garbage(self):
        with pytest.raises(ValueError):
            SpinConfig.from_string("+-x+")

    def test_index_wraps(self):
        cfg = SpinConfig.from_string("+--")
        assert cfg[3] == cfg[0] == 1

    def test_equality_and_hash(self):
        a = SpinConfig.from_string("+-+")
        b = SpinConfig.from_string("+-+")
        assert a == b and hash(a) == hash(b)
        assert a != SpinConfig.from_string("-+-")

    @given(spin_arrays)
    def test_construction_preserves_values(self, spins):
        cfg = SpinConfig(spins)
        assert cfg.n == len(spins)
        assert list(cfg.spins) == spins


class TestMagnetization:
    def test_all_plus(self):
        assert magnetization(SpinConfig.all_plus(8)) == 1.0

    def test_all_minus(self):
        assert magnetization(SpinConfig.all_minus(8)) == -1.0

    def test_balanced(self):
        assert magnetization(SpinConfig.from_string("++--")) == 0.0

    @given(spin_arrays)
    def test_range_and_granularity(self, spins):
        cfg = SpinConfig(spins)
        s = magnetization(cfg)
        assert -1.0 <= s <= 1.0
        assert abs(s * cfg.n - round(s * cfg.n)) < 1e-12


class TestDominates:
    def test_extremes(self):
        assert dominates(SpinConfig.all_plus(5), SpinConfig.all_minus(5))

    def test_reflexive(self):
        cfg = SpinConfig.from_string("+-+-")
        assert dominates(cfg, cfg)

    def test_incomparable(self):
        assert not dominates(SpinConfig.from_string("+-+"), SpinConfig.from_string("-+-"))
        assert not dominates(SpinConfig.from_string("-+-"), SpinConfig.from_string("+-+"))

    def test_size_mismatch_raises(self):
        with pytest.raises(ValueError):
            dominates(SpinConfig.all_plus(3), SpinConfig.all_plus(4))

    def test_partial_order_exhaustive_n4(self):
        configs = list(all_configs(4))
        for a in configs:
            assert dominates(a, a)
        for a in configs:
            for b in configs:
                if dominates(a, b) and dominates(b, a):
                    assert a == b
        for a in configs:
            for b in configs:
                if not dominates(a, b):
                    continue
                for c in configs:
                    if dominates(b, c):
                        assert dominates(a, c)


class TestApplyEvent:
    def test_flip_is_involution(self):
        cfg = SpinConfig.from_string("+-+-")
        assert apply_flip(apply_flip(cfg, 0), 0) == cfg

    def test_exchange_equal_spins_is_identity(self):
        cfg = SpinConfig.from_string("++-+")
        assert apply_exchange(cfg, 0) == cfg

    def test_exchange_example(self):
        assert apply_exchange(SpinConfig.from_string("+-++"), 0) == SpinConfig.from_string("-+++")

    def test_exchange_wraps_last_bond(self):
        cfg = SpinConfig.from_string("-++")
        assert apply_exchange(cfg, 2) == SpinConfig.from_string("++-")

    @given(spin_arrays, st.integers(0, 30))
    def test_exchange_preserves_magnetization(self, spins, x):
        cfg = SpinConfig(spins)
        assert magnetization(apply_exchange(cfg, x)) == pytest.approx(magnetization(cfg))

    @given(spin_arrays, st.integers(0, 30))
    def test_flip_moves_magnetization_two_over_n(self, spins, x):
        cfg = SpinConfig(spins)
        delta = magnetization(apply_flip(cfg, x)) - magnetization(cfg)
        assert abs(delta) == pytest.approx(2.0 / cfg.n)

    @given(spin_arrays, st.integers(0, 30))
    def test_events_leave_other_sites_alone(self, spins, x):
        cfg = SpinConfig(spins)
        n = cfg.n
        flipped = apply_flip(cfg, x)
        for y in range(n):
            if y == x % n:
                assert flipped[y] == -cfg[y]
            else:
                assert flipped[y] == cfg[y]
        swapped = apply_exchange(cfg, x)
        assert swapped[x] == cfg[x + 1] and swapped[x + 1] == cfg[x]
