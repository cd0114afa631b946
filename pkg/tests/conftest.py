import random

import pytest

from twistfree.morphism import CyclicShiftMorphism
from twistfree.words import Alphabet, Permutation, Word, word_of


@pytest.fixture
def sigma3():
    return Permutation.cyclic_shift(3, 1)


@pytest.fixture
def psi3():
    return CyclicShiftMorphism.canonical(3)


@pytest.fixture
def thue_morse():
    return CyclicShiftMorphism(Permutation.cyclic_shift(2, 1), 0)


def random_word(rng: random.Random, n: int, length: int) -> Word:
    return Word(tuple(rng.randrange(n) for _ in range(length)), Alphabet(n))


__all__ = ["random_word", "record_acceptance", "word_of"]


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
