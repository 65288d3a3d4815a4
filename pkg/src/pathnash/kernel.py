"""Exact integer-pivoting tableau shared by the path-following and LP code.

The tableau stores ``scale * B^-1 [A | b]`` for the current basis ``B`` as
Python integers.  Every pivot keeps the entries integral: the update divides
by the previous scale and that division is always exact (the entries are
subdeterminants of the original system).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class ZeroPivotElement(ArithmeticError):
    pass


class InexactDivision(ArithmeticError):
    """Integer pivoting produced a remainder; this is always a bug."""


class Unbounded(ArithmeticError):
    """No row limits the entering variable (ray)."""


class SingularBasis(ArithmeticError):
    pass


class Var(NamedTuple):
    """Variable identifier.

    kind is one of ``x`` (strategy), ``s`` (LH slack), ``w`` (Lemke slack),
    ``z0``, ``v`` (value variable); the LP in :mod:`pathnash.lsv` adds
    ``eps`` and ``r``.  ``agent`` is 1 or 2 (0 when meaningless).
    """

    kind: str
    agent: int = 0
    index: int = 0

    def complement(self, slack: str = "s") -> "Var":
        if self.kind == "x":
            return Var(slack, self.agent, self.index)
        if self.kind in ("s", "w"):
            return Var("x", self.agent, self.index)
        raise ValueError(f"{self} has no complement")

    def __str__(self) -> str:
        if self.kind in ("z0", "eps"):
            return self.kind
        return f"{self.kind}{self.agent}_{self.index}"


class Tableau:
    """Dense integer tableau with a lexicographic ratio test.

    ``entries[i]`` has one integer per column followed by the right-hand
    side.  ``basis[i]`` is the variable basic in row ``i``.  ``lex_order`` is
    the list of column positions used to break ratio ties; it must be the
    columns of a starting basis that was feasible, so every row of the
    tableau restricted to ``[rhs, lex_order...]`` stays lexicographically
    positive.
    """

    def __init__(
        self,
        entries: list[list[int]],
        scale: int,
        basis: Sequence[Var],
        columns: Sequence[Var],
        lex_order: Sequence[int],
    ):
        if scale <= 0:
            raise ValueError("scale must be positive")
        self.entries = entries
        self.scale = scale
        self.basis = list(basis)
        self.columns = list(columns)
        self.col_index = {v: j for j, v in enumerate(self.columns)}
        self.lex_order = list(lex_order)
        self._row_of = {v: i for i, v in enumerate(self.basis)}
        if len(self._row_of) != len(self.basis) or len(self.col_index) != len(self.columns):
            raise ValueError("duplicate variables")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_system(
        cls,
        A: Sequence[Sequence[int]],
        b: Sequence[int],
        columns: Sequence[Var],
        basis: Sequence[Var],
        lex_vars: Sequence[Var] | None = None,
    ) -> "Tableau":
        """Factor ``A x = b`` with respect to ``basis``.

        ``lex_vars`` defaults to ``basis``, which makes the returned tableau
        its own lexicographic reference.  Raises :class:`SingularBasis` when
        the basis columns are linearly dependent.
        """
        rows = len(A)
        if len(basis) != rows:
            raise ValueError(f"basis has {len(basis)} variables for {rows} rows")
        col_index = {v: j for j, v in enumerate(columns)}
        bcols = [col_index[v] for v in basis]
        M = [[Fraction(a) for a in row] + [Fraction(bi)] for row, bi in zip(A, b)]
        det = Fraction(1)
        used: list[int] = []
        order = list(range(rows))
        # Gauss-Jordan using the basis columns as pivots, row k ends up as basis[k]
        for k, c in enumerate(bcols):
            piv = next((i for i in range(k, rows) if M[order[i]][c] != 0), None)
            if piv is None:
                raise SingularBasis(f"basis column {columns[c]} is dependent")
            if piv != k:
                order[k], order[piv] = order[piv], order[k]
                det = -det
            prow = M[order[k]]
            p = prow[c]
            det *= p
            inv = 1 / p
            prow[:] = [e * inv for e in prow]
            for i in range(rows):
                if i == k:
                    continue
                row = M[order[i]]
                f = row[c]
                if f:
                    row[:] = [e - f * pe for e, pe in zip(row, prow)]
            used.append(c)
        s = abs(det)
        entries = []
        for k in range(rows):
            row = []
            for e in M[order[k]]:
                v = e * s
                if v.denominator != 1:
                    raise InexactDivision("refactorization is not integral")
                row.append(v.numerator)
            entries.append(row)
        if s.denominator != 1:
            raise InexactDivision("non-integral determinant")
        lex = [col_index[v] for v in (basis if lex_vars is None else lex_vars)]
        return cls(entries, s.numerator, basis, columns, lex)

    def copy(self) -> "Tableau":
        return Tableau(
            [row[:] for row in self.entries], self.scale, self.basis, self.columns, self.lex_order
        )

    # -- queries ------------------------------------------------------------

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.columns)

    @property
    def nonbasic(self) -> list[Var]:
        return [v for v in self.columns if v not in self._row_of]

    def is_basic(self, var: Var) -> bool:
        return var in self._row_of

    def row_of(self, var: Var) -> int:
        return self._row_of[var]

    def value(self, var: Var) -> Fraction:
        i = self._row_of.get(var)
        if i is None:
            return Fraction(0)
        return Fraction(self.entries[i][-1], self.scale)

    def basic_solution(self) -> dict[Var, Fraction]:
        sol = {v: Fraction(0) for v in self.columns}
        for i, v in enumerate(self.basis):
            sol[v] = Fraction(self.entries[i][-1], self.scale)
        return sol

    def basis_key(self) -> frozenset:
        return frozenset(self.basis)

    # -- pivoting -------------------------------------------------------------

    def pivot(self, entering: Var, leaving: Var) -> "Tableau":
        """Swap ``entering`` into the basis in place of ``leaving``."""
        if entering in self._row_of:
            raise ValueError(f"{entering} is already basic")
        r = self._row_of[leaving]
        c = self.col_index[entering]
        T = self.entries
        prow = T[r]
        p = prow[c]
        if p == 0:
            raise ZeroPivotElement(f"zero pivot at ({leaving}, {entering})")
        s = self.scale
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                if p == s:
                    continue
                new = []
                for e in row:
                    q, rem = divmod(p * e, s)
                    if rem:
                        raise InexactDivision("integer pivot left a remainder")
                    new.append(q)
            else:
                new = []
                for e, pe in zip(row, prow):
                    q, rem = divmod(p * e - f * pe, s)
                    if rem:
                        raise InexactDivision("integer pivot left a remainder")
                    new.append(q)
            T[i] = new
        if p < 0:
            for i, row in enumerate(T):
                T[i] = [-e for e in row]
            p = -p
        self.scale = p
        self.basis[r] = entering
        del self._row_of[leaving]
        self._row_of[entering] = r
        return self

    def min_ratio_leaving(self, entering: Var, exclude: Iterable[Var] = ()) -> Var:
        """Leaving variable of the (lexicographic) minimum ratio test.

        Rows whose basic variable is in ``exclude`` (free variables) never
        leave.  Raises :class:`Unbounded` when no row is admissible.
        """
        c = self.col_index[entering]
        skip = {self._row_of[v] for v in exclude if v in self._row_of}
        best: list[int] = []
        bn = bd = 0
        for i, row in enumerate(self.entries):
            a = row[c]
            if a <= 0 or i in skip:
                continue
            rhs = row[-1]
            if not best:
                best, bn, bd = [i], rhs, a
                continue
            # compare rhs/a with bn/bd, both denominators positive
            lhs, cur = rhs * bd, bn * a
            if lhs < cur:
                best, bn, bd = [i], rhs, a
            elif lhs == cur:
                best.append(i)
        if not best:
            raise Unbounded(f"no admissible row for {entering}")
        if len(best) == 1:
            return self.basis[best[0]]
        return self.lexico_leaving(best, entering)

    def lexico_leaving(self, tied_rows: Sequence[int], entering: Var) -> Var:
        """Break a ratio tie by comparing ``row[lex col] / row[entering]``."""
        c = self.col_index[entering]
        rows = list(tied_rows)
        for col in self.lex_order:
            if len(rows) == 1:
                break
            keep: list[int] = []
            bn = bd = 0
            for i in rows:
                row = self.entries[i]
                n, d = row[col], row[c]
                if not keep:
                    keep, bn, bd = [i], n, d
                    continue
                lhs, cur = n * bd, bn * d
                if lhs < cur:
                    keep, bn, bd = [i], n, d
                elif lhs == cur:
                    keep.append(i)
            rows = keep
        assert len(rows) == 1, "lexicographic vectors are proportional"
        return self.basis[rows[0]]

    def __repr__(self) -> str:
        return f"Tableau({self.rows}x{self.cols}, scale={self.scale}, basis={[str(v) for v in self.basis]})"


def identity_tableau(
    A: Sequence[Sequence[int]], b: Sequence[int], columns: Sequence[Var], slacks: Sequence[Var]
) -> Tableau:
    """Tableau for ``A x + I s = b`` with the slacks basic (scale 1).

    ``A`` holds only the structural columns; ``columns`` lists the structural
    variables and the slacks are appended in order.
    """
    entries = []
    n = len(slacks)
    for i, (row, bi) in enumerate(zip(A, b)):
        entries.append([int(a) for a in row] + [1 if j == i else 0 for j in range(n)] + [int(bi)])
    allcols = list(columns) + list(slacks)
    lex = list(range(len(columns), len(allcols)))
    return Tableau(entries, 1, slacks, allcols, lex)
