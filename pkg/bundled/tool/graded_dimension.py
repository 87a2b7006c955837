# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Degree slices of homogeneous ideals, their exact ranks, and quotient dimensions."""
from __future__ import annotations

import functools
import math
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

import attrs
import boundary_ideals as bi
import poly_core as pc
import strata_combinatorics as comb
import strata_utils as utils
from sympy import randprime
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

RANK = "rank"
RECURSION = "recursion"

Row = Dict[int, int]


@attrs.frozen(eq=False)
class DegreeSlice:
    """Rows g·m spanning the degree-d part of an ideal, over the degree-d monomials."""

    degree: int
    columns: Tuple[pc.Monomial, ...]
    rows: Tuple[Tuple[Tuple[int, object], ...], ...]


@attrs.frozen
class BettiVector:
    family: str
    ell: int
    dims: Tuple[int, ...] = attrs.field(converter=tuple)
    method: str = RANK
    truncated_at: Optional[int] = None
    clamped: bool = False

    @dims.validator
    def _check_dims(self, _attribute, value):
        if not value or value[0] != 1 or any(v < 0 for v in value):
            raise utils.ConsistencyError(f"Not a Betti vector: {value}")

    @property
    def reported_dims(self) -> Tuple[int, ...]:
        """Complex vectors report their even-degree entries."""
        if self.family == comb.COMPLEX:
            return self.dims[::2]
        return self.dims


def top_degree(family: str, ell: int) -> int:
    """Top cohomological degree: 2(ℓ−3) for complex, 2ℓ−3 for real."""
    if comb.check_family(family) == comb.COMPLEX:
        return 2 * (ell - 3)
    return 2 * ell - 3


def check_ell(family: str, ell: int) -> int:
    minimum = comb.minimum_size(family)
    if not isinstance(ell, int) or ell < minimum:
        raise utils.InvalidArgumentError(
            f"The {family} family needs ℓ ≥ {minimum}, got {ell}."
        )
    return ell


def clamp_degree(family: str, ell: int, dmax: Optional[int]) -> Tuple[int, bool]:
    """Caps a degree bound at the top degree; the flag is set when the bound was lowered."""
    check_ell(comb.check_family(family), ell)
    top = top_degree(family, ell)
    if dmax is None:
        return top, False
    if dmax < 0:
        raise utils.InvalidArgumentError(f"Degree bound must be non-negative, got {dmax}.")
    if dmax > top:
        utils.log_warning(
            f"Degree bound {dmax} is above the top degree {top}; clamping to {top}."
        )
        return top, True
    return dmax, False


# **********************************************************
# Degree slices.
# **********************************************************
def ideal_slice(
    presentation: bi.IdealPresentation, degree: int, column_ceiling: Optional[int] = None
) -> DegreeSlice:
    """Returns the rows g·m of all generators g and monomials m with deg g·m = degree."""
    alphabet = presentation.alphabet
    columns = pc.monomials_of_degree(alphabet, degree)
    ceiling = (
        column_ceiling
        if column_ceiling is not None
        else utils.get_settings()["columnCeiling"]
    )
    if ceiling is not None and len(columns) > ceiling:
        utils.log_error(f"Aborting degree {degree} slice: {len(columns)} columns.")
        raise utils.ResourceLimitError(degree, len(columns), ceiling)
    position = {monom: i for i, monom in enumerate(columns)}
    rows = []
    for generator in presentation.generators:
        gen_degree = generator.degree
        if gen_degree > degree:
            continue
        terms = list(generator.poly.items())
        for multiplier in pc.monomials_of_degree(alphabet, degree - gen_degree):
            rows.append(
                tuple(
                    (position[pc.multiply_monomials(monom, multiplier)], coeff)
                    for monom, coeff in terms
                )
            )
    return DegreeSlice(degree, columns, tuple(rows))


# **********************************************************
# Exact elimination.
# **********************************************************
def _lcm(values) -> int:
    return functools.reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _clear_denominators(entries) -> Row:
    entries = [(col, value) for col, value in entries if value]
    scale = _lcm(value.denominator for _, value in entries)
    row: Row = {}
    for col, value in entries:
        row[col] = row.get(col, 0) + value.numerator * (scale // value.denominator)
    return {col: value for col, value in row.items() if value}


def _primitive(row: Row) -> Row:
    if not row:
        return row
    content = functools.reduce(math.gcd, row.values())
    if row[min(row)] < 0:
        content = -content
    if content == 1:
        return row
    return {col: value // content for col, value in row.items()}


def _eliminate(row: Row, pivot_row: Row, col: int) -> Row:
    a, b = row[col], pivot_row[col]
    g = math.gcd(a, b)
    row_scale, pivot_scale = b // g, a // g
    result = {c: v * row_scale for c, v in row.items()}
    for c, v in pivot_row.items():
        value = result.get(c, 0) - v * pivot_scale
        if value:
            result[c] = value
        else:
            result.pop(c, None)
    return _primitive(result)


def modular_rank(rows: Sequence[Row], prime: Optional[int] = None) -> int:
    """Rank of integer rows over GF(p) for a random 62-bit prime; a lower bound for ℚ."""
    prime = prime or randprime(2**61, 2**62)
    field = GF(prime)
    used = sorted({col for row in rows for col in row})
    position = {col: i for i, col in enumerate(used)}
    data = {}
    for row in rows:
        entries = {position[c]: field(v) for c, v in row.items() if v % prime}
        if entries:
            data[len(data)] = entries
    if not data:
        return 0
    return DomainMatrix(data, (len(data), len(used)), field).rank()


class SliceEliminator:
    """Exact elimination state of one degree slice.

    Rows pass a monomial pre-pass (single-term rows kill their column everywhere),
    are made primitive and deduplicated, and are then either certified full rank by a
    modular pre-check or eliminated fraction-free over the integers on demand.
    """

    def __init__(self, degree_slice: DegreeSlice, modular_precheck: bool = True):
        self.degree = degree_slice.degree
        self.columns = degree_slice.columns
        self.column_index = {monom: i for i, monom in enumerate(self.columns)}
        self._killed: Set[int] = set()
        self._pivots: Dict[int, Row] = {}
        self._known_rank: Optional[int] = None
        self._exact = False

        rows = [_clear_denominators(row) for row in degree_slice.rows]
        rows = self._kill_monomials([row for row in rows if row])
        self._pending: List[Row] = list(
            {tuple(sorted(r.items())): r for r in map(_primitive, rows)}.values()
        )
        utils.log_to_output(
            f"Degree {self.degree}: {len(self.columns)} columns, "
            f"{len(self._killed)} killed by monomials, {len(self._pending)} rows left."
        )
        if modular_precheck and self._pending:
            self._modular_shortcut()

    def _kill_monomials(self, rows: List[Row]) -> List[Row]:
        while True:
            fresh = {next(iter(row)) for row in rows if len(row) == 1}
            if not fresh:
                return rows
            self._killed |= fresh
            stripped = []
            for row in rows:
                kept = {c: v for c, v in row.items() if c not in self._killed}
                if kept:
                    stripped.append(kept)
            rows = stripped

    def _modular_shortcut(self) -> None:
        bound = min(len(self._pending), len({c for row in self._pending for c in row}))
        if modular_rank(self._pending) == bound:
            self._known_rank = bound
            utils.log_to_output(f"Degree {self.degree}: modular rank is full ({bound}).")

    def _ensure_exact(self) -> None:
        if self._exact:
            return
        for row in self._pending:
            self._insert(row)
        self._pending = []
        self._exact = True

    def _strip(self, vector: Mapping[int, object]) -> Row:
        row = _clear_denominators(
            (col, pc.rational(value) if isinstance(value, int) else value)
            for col, value in vector.items()
        )
        return {c: v for c, v in row.items() if c not in self._killed}

    def _reduce_row(self, row: Row) -> Row:
        row = _primitive(row)
        while row:
            col = min(row)
            pivot_row = self._pivots.get(col)
            if pivot_row is None:
                return row
            row = _eliminate(row, pivot_row, col)
        return row

    def _insert(self, row: Row) -> bool:
        row = self._reduce_row(row)
        if not row:
            return False
        self._pivots[min(row)] = row
        return True

    def rank(self) -> int:
        if not self._exact and self._known_rank is not None:
            return len(self._killed) + self._known_rank
        self._ensure_exact()
        return len(self._killed) + len(self._pivots)

    def reduce(self, vector: Mapping[int, object]) -> Row:
        """Returns the residue of a column-indexed vector modulo the slice span."""
        self._ensure_exact()
        return self._reduce_row(self._strip(vector))

    def contains(self, vector: Mapping[int, object]) -> bool:
        return not self.reduce(vector)

    def extend(self, vector: Mapping[int, object]) -> bool:
        """Adds a vector to the span; returns true if the rank grew."""
        self._ensure_exact()
        return self._insert(self._strip(vector))

    def vector_of(self, p: pc.Polynomial) -> Dict[int, object]:
        """Coordinates of a homogeneous polynomial of this slice's degree."""
        try:
            return {self.column_index[monom]: coeff for monom, coeff in p.items()}
        except KeyError:
            raise utils.InvalidArgumentError(
                f"Polynomial is not of degree {self.degree}."
            ) from None

    def copy(self) -> "SliceEliminator":
        """Returns an independent eliminator sharing the already reduced rows."""
        self._ensure_exact()
        clone = SliceEliminator.__new__(SliceEliminator)
        clone.__dict__.update(self.__dict__)
        clone._killed = set(self._killed)
        clone._pivots = dict(self._pivots)
        clone._pending = []
        return clone


@functools.lru_cache(maxsize=64)
def _eliminator(
    presentation: bi.IdealPresentation,
    degree: int,
    column_ceiling: Optional[int],
    modular_precheck: bool,
) -> SliceEliminator:
    return SliceEliminator(
        ideal_slice(presentation, degree, column_ceiling), modular_precheck
    )


def eliminator(presentation: bi.IdealPresentation, degree: int) -> SliceEliminator:
    """Returns the shared eliminator of a slice; copy it before extending."""
    settings = utils.get_settings()
    return _eliminator(
        presentation, degree, settings["columnCeiling"], bool(settings["modularPrecheck"])
    )


def slice_rank(degree_slice: DegreeSlice) -> int:
    """Exact rank over ℚ of a degree slice."""
    return SliceEliminator(
        degree_slice, bool(utils.get_settings()["modularPrecheck"])
    ).rank()


# **********************************************************
# Quotient dimensions and membership.
# **********************************************************
def slice_counts(family: str, ell: int, degree: int) -> Tuple[int, int]:
    """Returns (columns, rank) of one degree slice of the family's ideal."""
    step = eliminator(bi.ideal_for(family, ell), degree)
    return len(step.columns), step.rank()


def presentation_dims(presentation: bi.IdealPresentation, dmax: int) -> List[int]:
    """Quotient dimensions of any presentation in degrees 0..dmax."""
    dims = []
    for degree in range(dmax + 1):
        step = eliminator(presentation, degree)
        dims.append(len(step.columns) - step.rank())
    return dims


def quotient_dims(
    family: str, ell: int, dmax: Optional[int] = None, jobs: Optional[int] = None
) -> BettiVector:
    """Betti numbers of the family at ℓ by exact rank, in degrees 0..dmax."""
    dmax, clamped = clamp_degree(family, ell, dmax)
    top = top_degree(family, ell)

    degrees = list(range(dmax + 1))
    jobs = jobs if jobs is not None else utils.get_settings()["jobs"]
    if jobs and jobs > 1 and len(degrees) > 1:
        # pylint: disable-next=import-outside-toplevel
        import strata_jsonrpc

        counts = strata_jsonrpc.quotient_dims_over_json_rpc(family, ell, degrees, jobs)
    else:
        counts = {d: slice_counts(family, ell, d) for d in degrees}

    dims = [columns - rank for columns, rank in (counts[d] for d in degrees)]
    return BettiVector(
        family=family,
        ell=ell,
        dims=dims,
        method=RANK,
        truncated_at=dmax if dmax < top else None,
        clamped=clamped,
    )


def ideal_contains(presentation: bi.IdealPresentation, p: pc.Polynomial) -> bool:
    """True iff a homogeneous polynomial lies in the ideal."""
    if p.ring is not presentation.alphabet.ring:
        raise utils.AlphabetMismatchError("Polynomial is not over the ideal's alphabet.")
    degree = pc.homogeneous_degree(p)
    if degree is None:
        return True
    step = eliminator(presentation, degree)
    return step.contains(step.vector_of(p))


def euler_characteristic(vector: BettiVector) -> int:
    """Σ(−1)^p dims[p]."""
    return sum((-1) ** p * dim for p, dim in enumerate(vector.dims))
