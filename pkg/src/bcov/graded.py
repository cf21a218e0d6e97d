"""Graded bases, sparse vectors over Q, and Koszul sign discipline.

Parity is the cohomological degree mod 2; the Hodge weight is a second,
sign-inert grading (rational, since grading operators shift by half-integers
in even dimensions).
"""

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Grading:
    coh_degree: int
    hodge_weight: Fraction

    @property
    def parity(self) -> int:
        return self.coh_degree % 2


class GradedBasis:
    """Ordered basis with unique labels; order is canonical and fixed."""

    def __init__(self, elements):
        self.labels = []
        self.gradings = []
        self.index = {}
        for label, grading in elements:
            if label in self.index:
                raise ValueError(f"duplicate basis label {label!r}")
            self.index[label] = len(self.labels)
            self.labels.append(label)
            self.gradings.append(grading)

    def __len__(self):
        return len(self.labels)

    def degree(self, i) -> int:
        return self.gradings[i].coh_degree

    def weight(self, i) -> Fraction:
        return self.gradings[i].hodge_weight

    def parity(self, i) -> int:
        return self.gradings[i].parity


class GradedVector:
    """Sparse vector: map basis index -> scalar. Immutable by convention."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis, coords=None):
        self.basis = basis
        self.coords = {i: c for i, c in (coords or {}).items() if c}

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        return isinstance(other, GradedVector) and self.coords == other.coords

    def __add__(self, other):
        out = dict(self.coords)
        for i, c in other.coords.items():
            s = out.get(i, 0) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return GradedVector(self.basis, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        if not scalar:
            return GradedVector(self.basis)
        return GradedVector(self.basis, {i: scalar * c for i, c in self.coords.items()})

    def __neg__(self):
        return (-1) * self

    def homogeneous_degree(self):
        """Common coh_degree of the support, or None if mixed or zero."""
        degs = {self.basis.degree(i) for i in self.coords}
        if len(degs) == 1:
            return degs.pop()
        return None

    def items(self):
        return sorted(self.coords.items())

    def __repr__(self):
        terms = " + ".join(f"{c}*{self.basis.labels[i]}" for i, c in self.items())
        return terms or "0"


def koszul_sign(degrees, permutation) -> int:
    """Sign picked up when factors of the given degrees are reordered so that
    position i of the result holds original factor permutation[i].

    Multiplicative under composition of permutations (for a fixed degree
    multiset); the sign of a single swap of odd factors is -1.
    """
    n = len(degrees)
    if sorted(permutation) != list(range(n)):
        raise ValueError("invalid permutation")
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if permutation[i] > permutation[j]:
                if degrees[permutation[i]] % 2 and degrees[permutation[j]] % 2:
                    sign = -sign
    return sign


def sort_with_sign(items, degrees):
    """Stable-sort items, returning (sorted items, Koszul sign of the sort).

    degrees[k] is the parity-carrying degree of items[k]. Zero is returned
    as sign when a repeated odd item occurs (the monomial vanishes).
    """
    order = sorted(range(len(items)), key=lambda k: items[k])
    sign = koszul_sign(degrees, order)
    out = [items[k] for k in order]
    for a, b, da in zip(out, out[1:], (degrees[k] for k in order)):
        if a == b and da % 2:
            return out, 0
    return out, sign


def canonicalize_monomial(factors):
    """Sort (basis index, degree) factors into canonical order.

    Returns (sorted factors, sign) with sign in {+1, -1, 0}; 0 means the
    monomial contains a squared odd factor and is zero. Idempotent with
    sign +1 on already-sorted input.
    """
    idxs = [f[0] for f in factors]
    degs = [f[1] for f in factors]
    order = sorted(range(len(factors)), key=lambda k: idxs[k])
    sign = koszul_sign(degs, order)
    out = [factors[k] for k in order]
    for (i1, d1), (i2, _) in zip(out, out[1:]):
        if i1 == i2 and d1 % 2:
            return out, 0
    return out, sign
