"""Exact sparse linear algebra over the rationals.

Rows are sparse integer vectors (dict column -> int, content gcd 1).  All
elimination is fraction-free: a reduction step forms ``p*row - a*pivot_row``
with integer cross-multiplication and divides out the content, so no
rational arithmetic and no rounding ever occurs.

The pivot of a row is its *largest* column index.  Ambient orderings in this
package place high-degree monomials at high indices, which keeps fill-in low
when many shifted copies of a few generators are inserted.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence

Row = Dict[int, int]


def row_from_fractions(entries: Dict[int, Fraction]) -> Row:
    """Clear denominators and reduce content; sign left as-is."""
    items = [(c, v) for c, v in entries.items() if v != 0]
    if not items:
        return {}
    denom_lcm = 1
    for _, v in items:
        d = v.denominator
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    row = {c: int(v * denom_lcm) for c, v in items}
    return _reduce_content(row)


def _reduce_content(row: Row) -> Row:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _pivot(row: Row) -> int:
    return max(row)


def _eliminate(row: Row, prow: Row, col: int) -> Row:
    """Return the content-reduced combination cancelling ``col`` from ``row``."""
    a = row.get(col)
    if not a:
        return row
    p = prow[col]
    out = {c: p * v for c, v in row.items()}
    for c, v in prow.items():
        cur = out.get(c, 0) - a * v
        if cur:
            out[c] = cur
        else:
            out.pop(c, None)
    return _reduce_content(out)


class Echelon:
    """A set of independent sparse rows kept in echelon form (pivot = max col)."""

    def __init__(self):
        self.pivots: Dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        """Fully reduce ``row`` against the stored pivot rows."""
        while row:
            col = _pivot(row)
            prow = self.pivots.get(col)
            if prow is None:
                return row
            row = _eliminate(row, prow, col)
        return row

    def insert(self, row: Row) -> bool:
        """Reduce and store; returns True if the row enlarged the span."""
        row = self.reduce(dict(row))
        if not row:
            return False
        row = _reduce_content(row)
        col = _pivot(row)
        if row[col] < 0:
            row = {c: -v for c, v in row.items()}
        self.pivots[col] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def back_substitute(self):
        """Make every pivot column appear only in its own row (canonical form)."""
        for col in sorted(self.pivots, reverse=True):
            prow = self.pivots[col]
            for other_col, other in list(self.pivots.items()):
                if other_col == col:
                    continue
                if col in other:
                    self.pivots[other_col] = _eliminate(other, prow, col)

    def rows(self) -> List[Row]:
        return [self.pivots[c] for c in sorted(self.pivots, reverse=True)]


class JetSubspace:
    """Finite-dimensional subspace of a truncated coefficient space.

    Stored as a canonically reduced basis of sparse integer rows over an
    ambient space of fixed dimension.  Supports the subspace calculus needed
    by the jet computations: membership, sum, intersection, projection and
    quotient dimension, all exact.
    """

    def __init__(self, ambient_dim: int, echelon: Optional[Echelon] = None):
        self.ambient_dim = ambient_dim
        self._ech = echelon if echelon is not None else Echelon()

    # -- construction ------------------------------------------------------

    @classmethod
    def from_rows(cls, ambient_dim: int, rows: Iterable[Row]) -> "JetSubspace":
        sub = cls(ambient_dim)
        for row in rows:
            sub.insert(row)
        return sub

    @classmethod
    def from_fraction_rows(
        cls, ambient_dim: int, rows: Iterable[Dict[int, Fraction]]
    ) -> "JetSubspace":
        return cls.from_rows(ambient_dim, (row_from_fractions(r) for r in rows))

    def insert(self, row: Row) -> bool:
        for c in row:
            if not 0 <= c < self.ambient_dim:
                raise ValueError(f"column {c} outside ambient of dim {self.ambient_dim}")
        return self._ech.insert(row)

    def canonicalize(self):
        self._ech.back_substitute()

    # -- queries -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._ech.rank

    def contains(self, row: Row) -> bool:
        return not self._ech.reduce(dict(row))

    def residual(self, row: Row) -> Row:
        return self._ech.reduce(dict(row))

    def contains_subspace(self, other: "JetSubspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains(r) for r in other.basis_rows())

    def equals(self, other: "JetSubspace") -> bool:
        return (
            self.dim == other.dim
            and self.contains_subspace(other)
        )

    def basis_rows(self) -> List[Row]:
        return self._ech.rows()

    # -- subspace calculus ----------------------------------------------------

    def sum(self, other: "JetSubspace") -> "JetSubspace":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        out = JetSubspace(self.ambient_dim)
        for r in self.basis_rows():
            out.insert(dict(r))
        for r in other.basis_rows():
            out.insert(dict(r))
        out.canonicalize()
        return out

    def intersection(self, other: "JetSubspace") -> "JetSubspace":
        """Zassenhaus: echelonize (a|a) and (b|0); rows supported on the low
        block after elimination on the high block span the intersection."""
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        d = self.ambient_dim
        ech = Echelon()
        for r in self.basis_rows():
            double = {c + d: v for c, v in r.items()}
            double.update(r)
            ech.insert(double)
        for r in other.basis_rows():
            ech.insert({c + d: v for c, v in r.items()})
        out = JetSubspace(d)
        for row in ech.rows():
            if row and _pivot(row) < d:
                out.insert(row)
        out.canonicalize()
        return out

    def quotient_dim(self, sub: "JetSubspace") -> int:
        if not self.contains_subspace(sub):
            raise ValueError("quotient by a non-subspace")
        return self.dim - sub.dim

    def project(self, columns: Sequence[int]) -> "JetSubspace":
        """Image under the coordinate projection onto the listed columns."""
        position = {c: i for i, c in enumerate(columns)}
        out = JetSubspace(len(columns))
        for r in self.basis_rows():
            out.insert({position[c]: v for c, v in r.items() if c in position})
        out.canonicalize()
        return out

    # -- serialization ----------------------------------------------------------

    def to_doc(self) -> dict:
        """Matrix-of-rationals document: pivot-normalized rows, deterministic."""
        self.canonicalize()
        rows_doc = []
        for row in self.basis_rows():
            pivot_val = row[_pivot(row)]
            entries = {
                str(c): _frac_repr(Fraction(v, pivot_val))
                for c, v in sorted(row.items())
            }
            rows_doc.append(entries)
        return {"ambient_dim": self.ambient_dim, "dim": self.dim, "rows": rows_doc}


def _frac_repr(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def nullspace(constraint_rows: Iterable[Row], ncols: int) -> JetSubspace:
    """Solution space of a homogeneous sparse integer system."""
    return SolutionSpace(constraint_rows, ncols).to_subspace()


def solve_rank(constraint_rows: Iterable[Row]) -> int:
    ech = Echelon()
    for row in constraint_rows:
        ech.insert(dict(row))
    return ech.rank


def dot(a: Row, b: Row) -> int:
    if len(a) > len(b):
        a, b = b, a
    total = 0
    for c, v in a.items():
        w = b.get(c)
        if w:
            total += v * w
    return total


class SolutionSpace:
    """Solution space of a homogeneous system, kept in constraint form.

    For large jet systems the explicit basis is expensive to echelonize, but
    three cheap operations suffice downstream: the dimension, membership of
    a candidate solution (dot products against the reduced constraints), and
    lazy enumeration of a basis for witness extraction.
    """

    def __init__(self, constraint_rows: Iterable[Row], ncols: int):
        self.ncols = ncols
        self._ech = Echelon()
        for row in constraint_rows:
            self._ech.insert(dict(row))
        self._substituted = False

    @property
    def dim(self) -> int:
        return self.ncols - self._ech.rank

    def satisfies(self, row: Row) -> bool:
        return all(dot(prow, row) == 0 for prow in self._ech.pivots.values())

    def basis_iter(self):
        """Yield one sparse integer basis vector per free column."""
        if not self._substituted:
            self._ech.back_substitute()
            self._substituted = True
        contributions: Dict[int, List] = {}
        for col, prow in self._ech.pivots.items():
            p = prow[col]
            for c, a in prow.items():
                if c != col:
                    contributions.setdefault(c, []).append((col, -Fraction(a, p)))
        for f in range(self.ncols):
            if f in self._ech.pivots:
                continue
            vec: Dict[int, Fraction] = {f: Fraction(1)}
            for col, val in contributions.get(f, ()):
                vec[col] = val
            yield row_from_fractions(vec)

    def to_subspace(self) -> JetSubspace:
        return JetSubspace.from_rows(self.ncols, self.basis_iter())
