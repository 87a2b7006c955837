# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Betti numbers of the complex and real families from their closed recursions."""
from __future__ import annotations

import functools
from math import comb as binomial
from typing import Dict, List, Tuple

import graded_dimension as gd
import strata_combinatorics as comb
import strata_utils as utils


def _at(dims: Tuple[int, ...], p: int) -> int:
    return dims[p] if 0 <= p < len(dims) else 0


def _convolve(first: Tuple[int, ...], second: Tuple[int, ...], total: int) -> int:
    """Σ_q first[q]·second[total − q]."""
    return sum(_at(first, q) * _at(second, total - q) for q in range(total + 1))


@functools.lru_cache(maxsize=None)
def _complex_dims(n: int) -> Tuple[int, ...]:
    if n == 3:
        return (1,)
    ell = n - 1
    previous = _complex_dims(ell)
    dims = []
    for p in range(gd.top_degree(comb.COMPLEX, n) + 1):
        twice = sum(
            binomial(ell, j)
            * _convolve(_complex_dims(j + 1), _complex_dims(ell - j + 1), p - 2)
            for j in range(2, ell - 1)
        )
        if twice % 2:
            raise utils.ConsistencyError(
                f"Complex recursion at ℓ={n}, p={p} produced the odd sum {twice}."
            )
        dims.append(_at(previous, p) + _at(previous, p - 2) + twice // 2)
    return tuple(dims)


@functools.lru_cache(maxsize=None)
def _real_dims(n: int) -> Tuple[int, ...]:
    if n == 2:
        return (1, 1)
    ell = n - 1
    previous = _real_dims(ell)
    complex_next = _complex_dims(n)
    dims = []
    for p in range(gd.top_degree(comb.REAL, n) + 1):
        value = _at(previous, p) + _at(previous, p - 2)
        value += 2 ** (ell - 1) * (_at(complex_next, p - 1) + _at(complex_next, p - 2))
        value += sum(
            2 ** (ell - i)
            * binomial(ell, i)
            * _convolve(_real_dims(i + 1), _complex_dims(ell - i + 1), p - 2)
            for i in range(1, ell - 1)
        )
        dims.append(value)
    return tuple(dims)


def complex_betti(ell: int) -> gd.BettiVector:
    """Returns the Betti numbers of the complex family at ℓ by recursion."""
    gd.check_ell(comb.COMPLEX, ell)
    return gd.BettiVector(comb.COMPLEX, ell, _complex_dims(ell), method=gd.RECURSION)


def real_betti(ell: int) -> gd.BettiVector:
    """Returns the Betti numbers of the real family at ℓ by recursion."""
    gd.check_ell(comb.REAL, ell)
    return gd.BettiVector(comb.REAL, ell, _real_dims(ell), method=gd.RECURSION)


def betti(family: str, ell: int) -> gd.BettiVector:
    if comb.check_family(family) == comb.COMPLEX:
        return complex_betti(ell)
    return real_betti(ell)


def real_h1_closed_form(ell: int) -> int:
    """2^{ℓ−1} − 1."""
    gd.check_ell(comb.REAL, ell)
    return 2 ** (ell - 1) - 1


def table_one() -> Dict[str, List[gd.BettiVector]]:
    """Complex rows for ℓ = 4..7 and real rows for ℓ = 2..6."""
    return {
        comb.COMPLEX: [complex_betti(ell) for ell in range(4, 8)],
        comb.REAL: [real_betti(ell) for ell in range(2, 7)],
    }
