import random
from collections import Counter
from itertools import product

import pytest

from catalan_incidence.catalan import (
    CMap,
    ImageOutOfRange,
    NotOrderPreserving,
    NotWeaklyIncreasing,
    compose,
    enumerate_monoid,
    from_pair,
    identity,
    image_of_set,
    is_pcs,
    make_cmap,
    pcs,
    random_cmap,
    to_pair,
)
from catalan_incidence.errors import DomainError, ResourceError, UsageError, ValidationError
from catalan_incidence.posets import Subset, all_subsets, enumerate_pairs, leq, linext_key, preceq

from oracles import brute_force_monoid, brute_force_pcs, catalan, catalan_closed_form, pointwise_compose


def S(n, *members):
    return Subset.of(n, members)


def test_make_cmap_examples():
    assert make_cmap([1, 2, 3]) == identity(3)
    assert make_cmap([2, 2, 3]).images == (2, 2, 3)
    with pytest.raises(NotOrderPreserving, match=r"f\(1\) = 2 > f\(2\) = 1"):
        make_cmap([2, 1, 3])


@pytest.mark.parametrize(
    "images, error, index",
    [
        ([0, 2, 3], ImageOutOfRange, "f(1)"),
        ([1, 4, 3], ImageOutOfRange, "f(2)"),
        ([3, 3, 2], NotOrderPreserving, "f(2)"),
        ([1, 1, 3], NotWeaklyIncreasing, "f(2)"),
        ([2, 2, 2], NotWeaklyIncreasing, "f(3)"),
    ],
)
def test_make_cmap_errors_name_the_index(images, error, index):
    with pytest.raises(error) as info:
        make_cmap(images)
    assert index in str(info.value)
    assert isinstance(info.value, ValidationError)


def test_make_cmap_rejects_empty_and_junk():
    with pytest.raises(ValidationError):
        make_cmap([])
    with pytest.raises(ValidationError):
        make_cmap([1.0, 2])


def test_compose_examples():
    assert compose(make_cmap([2, 2, 3]), make_cmap([2, 3, 3])) == make_cmap([2, 3, 3])
    f = make_cmap([2, 2, 3])
    assert compose(identity(3), f) == f
    assert compose(make_cmap([2, 3, 3]), make_cmap([2, 3, 3])) == make_cmap([3, 3, 3])
    assert make_cmap([2, 3, 3]) * make_cmap([2, 3, 3]) == make_cmap([3, 3, 3])


def test_compose_degree_mismatch():
    with pytest.raises(UsageError):
        compose(identity(2), identity(3))


@pytest.mark.parametrize("d", range(1, 6))
def test_compose_matches_pointwise(d):
    maps = enumerate_monoid(d)
    for f, g in product(maps, repeat=2):
        assert compose(f, g).images == pointwise_compose(f.images, g.images)


@pytest.mark.parametrize("d", range(1, 7))
def test_closure(d):
    maps = enumerate_monoid(d)
    for f, g in product(maps, repeat=2):
        CMap(compose(f, g).images)  # revalidates


@pytest.mark.parametrize("d", range(1, 6))
def test_associativity(d):
    maps = enumerate_monoid(d)
    for f, g, h in product(maps, repeat=3):
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_enumerate_examples():
    assert enumerate_monoid(1) == [make_cmap([1])]
    assert enumerate_monoid(2) == [make_cmap([1, 2]), make_cmap([2, 2])]
    assert len(enumerate_monoid(5)) == catalan(5) == 42


@pytest.mark.parametrize("d", range(1, 6))
def test_enumerate_against_filter_oracle(d):
    assert [f.images for f in enumerate_monoid(d)] == brute_force_monoid(d)


def test_catalan_oracle_agrees_with_closed_form():
    assert [catalan(k) for k in range(15)] == [catalan_closed_form(k) for k in range(15)]


def test_enumerate_bound():
    with pytest.raises(ResourceError):
        enumerate_monoid(15)
    with pytest.raises(ResourceError):
        enumerate_monoid(6, bound=5)


def test_enumerate_bound_env(monkeypatch):
    monkeypatch.setenv("CATALAN_MAX_N", "4")
    with pytest.raises(ResourceError):
        enumerate_monoid(5)
    assert len(enumerate_monoid(4)) == 14


def test_from_pair_examples():
    assert from_pair(S(2), S(2), 2) == make_cmap([3, 3, 3])
    assert from_pair(S(2, 1, 2), S(2, 1, 2), 2) == identity(3)
    assert from_pair(S(2, 1), S(2, 2), 2) == make_cmap([2, 3, 3])
    assert from_pair(S(0), S(0), 0) == identity(1)


def test_from_pair_requires_leq():
    with pytest.raises(DomainError):
        from_pair(S(2, 2), S(2, 1), 2)
    with pytest.raises(UsageError):
        from_pair(S(3, 1), S(3, 1), 2)


def test_to_pair_examples():
    assert to_pair(make_cmap([3, 3, 3])) == (S(2), S(2))
    assert to_pair(make_cmap([2, 3, 3])) == (S(2, 1), S(2, 2))
    assert to_pair(make_cmap([2, 2, 3])) == (S(2, 2), S(2, 2))
    assert to_pair(identity(1)) == (S(0), S(0))


def _fiber_max_oracle(images):
    # Y = image minus {n+1}; X = max of each fiber over Y
    d = len(images)
    Y = sorted(set(images) - {d})
    X = sorted(max(i for i in range(1, d + 1) if images[i - 1] == y) for y in Y)
    return X, Y


@pytest.mark.parametrize("n", range(0, 8))
def test_bijection_roundtrips(n):
    maps = enumerate_monoid(n + 1)
    for f in maps:
        X, Y = to_pair(f)
        assert [list(X.members), list(Y.members)] == list(_fiber_max_oracle(f.images))
        assert leq(X, Y)
        assert from_pair(X, Y, n) == f
    pairs = enumerate_pairs(n)
    for p in pairs:
        assert to_pair(from_pair(p.X, p.Y, n)) == (p.X, p.Y)
    assert len({from_pair(p.X, p.Y, n) for p in pairs}) == len(maps)


def test_image_of_set_examples():
    assert image_of_set(make_cmap([2, 3, 3]), S(2, 1)) == S(2, 2)
    assert image_of_set(make_cmap([2, 3, 3]), S(2)) == S(2)
    assert image_of_set(make_cmap([2, 2, 3]), S(2, 1, 2)) == S(2, 2)


def test_image_of_set_may_leave_n():
    f = make_cmap([2, 3, 3])
    assert image_of_set(f, S(2, 2)) == S(3, 3)
    assert image_of_set(f, S(3, 1, 2, 3)) == S(3, 2, 3)
    with pytest.raises(UsageError):
        image_of_set(f, S(5, 1))


def test_pcs_examples():
    assert pcs(make_cmap([2, 2, 3])) == [S(2), S(2, 1), S(2, 2)]
    assert pcs(identity(3)) == [S(2), S(2, 1), S(2, 2), S(2, 1, 2)]
    assert pcs(make_cmap([3, 3, 3])) == [S(2)]
    assert pcs(identity(1)) == [S(0)]


@pytest.mark.parametrize("d", range(1, 7))
def test_pcs_against_brute_force(d):
    n = d - 1
    for f in enumerate_monoid(d):
        got = pcs(f)
        assert sorted(s.members for s in got) == sorted(brute_force_pcs(f.images))
        assert got == sorted(got, key=linext_key)
        assert S(n) in got
        assert to_pair(f)[0] in got
        for T in all_subsets(n):
            assert is_pcs(f, T) == (T in got)


@pytest.mark.parametrize("d", range(1, 7))
def test_proposition_parts(d):
    for f in enumerate_monoid(d):
        X, Y = to_pair(f)
        for T in pcs(f):
            fT = image_of_set(f, T)
            assert preceq(T, X)
            assert leq(T, fT)
            assert fT.issubset(Y) and preceq(fT, Y)
        assert is_pcs(f, X)


@pytest.mark.parametrize("d", range(1, 6))
def test_lemma_small(d):
    n = d - 1
    maps = enumerate_monoid(d)
    subs = all_subsets(n)
    for f, g in product(maps, repeat=2):
        fg = compose(f, g)
        for T in subs:
            gT = image_of_set(g, T)
            rhs = is_pcs(g, T) and gT.n == n and is_pcs(f, gT)
            assert is_pcs(fg, T) == rhs


def test_random_cmap_valid_and_uniform():
    rng = random.Random(7)
    d = 4
    counts = Counter(random_cmap(d, rng) for _ in range(14_000))
    assert set(counts) == set(enumerate_monoid(d))
    # each of 14 outcomes expects 1000; 6 sigma ~ 180
    assert all(800 < c < 1200 for c in counts.values())
    for k in (1, 2, 9, 13):
        CMap(random_cmap(k, rng).images)


def test_cli_parse():
    assert CMap.parse("2,3,3") == make_cmap([2, 3, 3])
    assert CMap.parse("[2,3,3]") == make_cmap([2, 3, 3])
    with pytest.raises(ValidationError):
        CMap.parse("2;3")
    assert make_cmap([2, 3, 3]).to_json() == [2, 3, 3]
    assert CMap.from_json([1, 2]) == identity(2)
