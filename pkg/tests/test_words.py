import itertools

import pytest
from hypothesis import given, strategies as st

from twistfree.words import (
    Alphabet,
    AlphabetMismatch,
    Permutation,
    Word,
    parse_word,
    perm_compose,
    perm_is_cyclic,
    perm_order,
    perm_power,
    read_word_file,
    render_word,
    twist,
    word_of,
    write_word_file,
)


@st.composite
def perms(draw, n=None):
    n = n if n is not None else draw(st.integers(1, 7))
    return Permutation(tuple(draw(st.permutations(range(n)))), Alphabet(n))


@st.composite
def perm_pairs_and_word(draw):
    n = draw(st.integers(1, 6))
    p, q = draw(perms(n)), draw(perms(n))
    w = Word(tuple(draw(st.lists(st.integers(0, n - 1), max_size=30))), Alphabet(n))
    return p, q, w


def test_compose_examples(sigma3):
    ident = Permutation.identity(3)
    assert perm_compose(ident, sigma3) == sigma3
    assert perm_compose(sigma3, sigma3).image == (2, 0, 1)
    assert perm_compose(sigma3, sigma3.inverse()) == ident


def test_compose_mismatch():
    with pytest.raises(AlphabetMismatch):
        perm_compose(Permutation.identity(2), Permutation.identity(3))


def test_power_examples(sigma3):
    assert perm_power(sigma3, 0) == Permutation.identity(3)
    assert perm_power(sigma3, 3) == Permutation.identity(3)
    assert perm_power(sigma3, 2)(0) == 2
    assert perm_power(sigma3, 3 * 10**12 + 1) == sigma3


def test_is_cyclic_examples(sigma3):
    assert not perm_is_cyclic(Permutation.identity(3))
    assert perm_is_cyclic(sigma3)
    assert not perm_is_cyclic(Permutation((1, 0, 2), Alphabet(3)))


def test_order_examples():
    assert perm_order(Permutation.identity(4)) == 1
    assert perm_order(Permutation.cyclic_shift(5)) == 5
    assert perm_order(Permutation((1, 0, 3, 4, 2), Alphabet(5))) == 6


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1), Alphabet(3))


def test_from_cycles():
    p = Permutation.from_cycles("(0 2 1)", 3)
    assert p.image == (2, 0, 1)
    assert Permutation.from_cycles("(a b c)", 3) == Permutation.cyclic_shift(3)
    assert Permutation.from_cycles("(0 1)(2 3)", 5).image == (1, 0, 3, 2, 4)
    with pytest.raises(ValueError):
        Permutation.from_cycles("(0 1)(1 2)", 3)
    with pytest.raises(ValueError):
        Permutation.from_cycles("0 1", 3)


def test_twist_worked_example(sigma3):
    assert render_word(twist(word_of("ab", 3), sigma3)) == "bc"
    assert render_word(twist(word_of("ab", 3), perm_power(sigma3, 2))) == "ca"
    w = word_of("abccba", 3)
    assert twist(w, Permutation.identity(3)) == w


def test_parse_render():
    assert parse_word("abbc", Alphabet(3)).symbols == (0, 1, 1, 2)
    assert render_word(Word((0, 1, 1, 2), Alphabet(3))) == "abbc"
    with pytest.raises(ValueError, match="position 2"):
        parse_word("abd", Alphabet(3))
    assert parse_word("abd").alphabet.size == 4
    assert parse_word("").symbols == ()


def test_symbol_outside_alphabet():
    with pytest.raises(ValueError):
        Word((0, 3), Alphabet(3))


@given(st.integers(1, 26).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), max_size=40))))
def test_parse_render_roundtrip(data):
    n, syms = data
    w = Word(tuple(syms), Alphabet(n))
    assert parse_word(render_word(w), Alphabet(n)) == w


@given(perm_pairs_and_word())
def test_twist_composition_law(data):
    p, q, w = data
    assert twist(twist(w, p), q) == twist(w, perm_compose(q, p))


@given(perm_pairs_and_word(), st.integers(0, 30))
def test_twist_is_letterwise_morphism(data, cut):
    p, _, w = data
    cut = min(cut, len(w))
    u, v = w[:cut], w[cut:]
    assert len(twist(w, p)) == len(w)
    assert twist(u + v, p) == twist(u, p) + twist(v, p)


@given(perms(), st.integers(0, 40), st.integers(0, 40))
def test_power_additive(p, a, b):
    assert perm_power(p, a + b) == perm_compose(perm_power(p, a), perm_power(p, b))
    assert perm_power(p, perm_order(p)) == Permutation.identity(p.alphabet.size)


@given(st.integers(2, 9), st.integers(0, 50))
def test_powers_of_a_cycle_commute_with_it(n, j):
    sigma = Permutation.cyclic_shift(n)
    sj = perm_power(sigma, j)
    assert perm_compose(sigma, sj) == perm_compose(sj, sigma)


def _walk_is_single_cycle(p: Permutation) -> bool:
    n = p.alphabet.size
    x, steps = p(0), 1
    while x != 0:
        x, steps = p(x), steps + 1
    return steps == n


@given(perms())
def test_cyclic_matches_explicit_walk(p):
    assert perm_is_cyclic(p) == _walk_is_single_cycle(p)


@pytest.mark.parametrize("n", range(2, 8))
def test_cyclic_iff_order_n_without_fixed_points_small(n):
    for image in itertools.permutations(range(n)):
        p = Permutation(image, Alphabet(n))
        no_fixed = all(p(i) != i for i in range(n))
        assert perm_is_cyclic(p) == (perm_order(p) == n and no_fixed)


def test_order_n_without_fixed_points_is_not_enough_at_12():
    # cycle type (2, 4, 6): lcm = 12 = N, no fixed point, three cycles
    p = Permutation.from_cycles("(0 1)(2 3 4 5)(6 7 8 9 10 11)", 12)
    assert perm_order(p) == 12
    assert all(p(i) != i for i in range(12))
    assert not perm_is_cyclic(p)


def test_word_files_roundtrip(tmp_path):
    w = word_of("abbcbcca", 3)
    n = write_word_file(tmp_path / "w.txt", w)
    assert (tmp_path / "w.txt").read_bytes() == b"abbcbcca\n"
    assert n == 9
    assert read_word_file(tmp_path / "w.txt") == w
    write_word_file(tmp_path / "w.bin", w, binary=True)
    raw = (tmp_path / "w.bin").read_bytes()
    assert raw[:8] == (8).to_bytes(8, "little") and raw[8:] == bytes([0, 1, 1, 2, 1, 2, 2, 0])
    assert read_word_file(tmp_path / "w.bin", Alphabet(3)) == w
