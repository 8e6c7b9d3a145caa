"""Shared test oracles, independent of the package implementation under test."""

from __future__ import annotations

from edcalc import CliffordUnit


def word_product(
    a_indices: tuple[int, ...], a_sign: int, b_indices: tuple[int, ...], b_sign: int
) -> tuple[int, tuple[int, ...]]:
    """Multiply signed generator words by explicit reduction.

    Sorts the concatenated word letter by letter: each swap of distinct adjacent
    letters flips the sign, and equal adjacent letters cancel into a -1.
    """
    word = list(a_indices) + list(b_indices)
    sign = a_sign * b_sign
    i = 0
    while i < len(word) - 1:
        if word[i] == word[i + 1]:
            del word[i : i + 2]
            sign = -sign
            i = max(i - 1, 0)
        elif word[i] > word[i + 1]:
            word[i], word[i + 1] = word[i + 1], word[i]
            sign = -sign
            i = max(i - 1, 0)
        else:
            i += 1
    return sign, tuple(word)


def even_masks(dim: int) -> list[int]:
    return [mask for mask in range(1 << dim) if mask.bit_count() % 2 == 0]


def all_units(dim: int) -> list[CliffordUnit]:
    """Every element of the signed even-product group inside Spin(dim)."""
    return [CliffordUnit(dim, mask, sign) for mask in even_masks(dim) for sign in (1, -1)]
