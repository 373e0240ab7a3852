"""Finite-dimensional commutative unital algebras given by structure constants."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = ["AlgebraError", "FiniteAlgebra", "builtin", "parse_algebra", "load_algebra", "multiply", "validate"]


class AlgebraError(ValueError):
    """An algebra violates one of its axioms, or could not be read."""

    def __init__(self, message: str, axiom: str | None = None, witness: tuple = ()):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message)


def _num(x) -> int | Fraction:
    if isinstance(x, bool):
        raise AlgebraError(f"structure constant {x!r} is not a number")
    if isinstance(x, int):
        return x
    try:
        f = Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator()
    except (ValueError, TypeError, ZeroDivisionError):
        raise AlgebraError(f"structure constant {x!r} is not an integer or 'p/q' string") from None
    return int(f) if f.denominator == 1 else f


@dataclass(frozen=True)
class FiniteAlgebra:
    """Basis ``b_0..b_{dim-1}``; ``table[i][j]`` holds the coordinates of ``b_i b_j``."""

    dim: int
    basis: tuple[str, ...]
    unit: tuple
    table: tuple  # dim x dim x dim
    name: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("algebra dimension must be at least 1")
        if len(self.basis) != self.dim or len(self.unit) != self.dim:
            raise AlgebraError("basis/unit length does not match the dimension")
        if len(self.table) != self.dim or any(len(r) != self.dim or any(len(v) != self.dim for v in r) for r in self.table):
            raise AlgebraError(f"product table must be {self.dim} x {self.dim} x {self.dim}")
        object.__setattr__(self, "unit", tuple(_num(x) for x in self.unit))
        object.__setattr__(self, "table", tuple(tuple(tuple(_num(x) for x in v) for v in r) for r in self.table))

    @property
    def is_integral(self) -> bool:
        vals = list(self.unit) + [x for r in self.table for v in r for x in v]
        return all(isinstance(x, int) for x in vals)

    def table_array(self) -> np.ndarray:
        """Structure constants as an int64 array ``[i, j, k]``; integral algebras only."""
        if not self.is_integral:
            raise AlgebraError("structure constants are not integers")
        return np.array(self.table, dtype=np.int64).reshape(self.dim, self.dim, self.dim)

    def basis_vector(self, i: int) -> tuple:
        return tuple(1 if k == i else 0 for k in range(self.dim))

    def describe(self) -> str:
        return f"{self.name} (dim {self.dim})"


def builtin(kind: str, n: int | None = None) -> FiniteAlgebra:
    """``ground`` (the base field) or ``trunc`` = ``Q[X]/(X^n)``."""
    if kind == "ground":
        return FiniteAlgebra(1, ("1",), (1,), (((1,),),), name="ground")
    if kind == "trunc":
        if n is None or n < 1:
            raise AlgebraError(f"trunc needs n >= 1, got {n}")
        table = tuple(
            tuple(tuple(1 if (a + b < n and k == a + b) else 0 for k in range(n)) for b in range(n))
            for a in range(n)
        )
        basis = tuple("1" if a == 0 else "X" if a == 1 else f"X^{a}" for a in range(n))
        return FiniteAlgebra(n, basis, tuple(1 if k == 0 else 0 for k in range(n)), table, name=f"trunc:{n}")
    raise AlgebraError(f"unknown builtin algebra {kind!r}")


def parse_algebra(spec: str) -> FiniteAlgebra:
    """CLI selector: ``ground``, ``trunc:<n>`` or ``file:<path>``."""
    spec = spec.strip()
    if spec == "ground":
        return builtin("ground")
    if spec.startswith("trunc:"):
        try:
            n = int(spec[6:])
        except ValueError:
            raise AlgebraError(f"bad algebra selector {spec!r}") from None
        return builtin("trunc", n)
    if spec.startswith("file:"):
        return load_algebra(spec[5:])
    raise AlgebraError(f"bad algebra selector {spec!r}; expected ground, trunc:<n> or file:<path>")


def load_algebra(path: str | Path) -> FiniteAlgebra:
    """Read ``{dim, basis, unit, table}`` JSON and validate it."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise AlgebraError(f"cannot read algebra file {path}: {exc}") from None
    try:
        dim = int(raw["dim"])
        alg = FiniteAlgebra(dim, tuple(raw.get("basis") or [f"b{i}" for i in range(dim)]),
                            tuple(raw["unit"]), tuple(raw["table"]), name=f"file:{path}")
    except (KeyError, TypeError) as exc:
        raise AlgebraError(f"malformed algebra file {path}: missing or bad field {exc}") from None
    validate(alg)
    return alg


def multiply(a: FiniteAlgebra, x: Sequence, y: Sequence) -> tuple:
    """Bilinear extension of the product table."""
    if len(x) != a.dim or len(y) != a.dim:
        raise AlgebraError(f"vectors of length {len(x)}, {len(y)} for an algebra of dimension {a.dim}")
    out = [0] * a.dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            for k, t in enumerate(a.table[i][j]):
                if t:
                    out[k] += c * t
    return tuple(out)


def validate(a: FiniteAlgebra) -> None:
    """Check commutativity, associativity and the unit; raise on the first failure."""
    d = a.dim
    for i in range(d):
        for j in range(i + 1, d):
            if a.table[i][j] != a.table[j][i]:
                raise AlgebraError(f"not commutative: {a.basis[i]}*{a.basis[j]} != {a.basis[j]}*{a.basis[i]}",
                                   "commutativity", (i, j))
    e = [a.basis_vector(i) for i in range(d)]
    for i in range(d):
        for j in range(d):
            left = a.table[i][j]
            for k in range(d):
                if multiply(a, left, e[k]) != multiply(a, e[i], a.table[j][k]):
                    raise AlgebraError(
                        f"not associative: ({a.basis[i]}*{a.basis[j]})*{a.basis[k]} != "
                        f"{a.basis[i]}*({a.basis[j]}*{a.basis[k]})", "associativity", (i, j, k))
    for i in range(d):
        if multiply(a, a.unit, e[i]) != e[i]:
            raise AlgebraError(f"unit does not act as identity on {a.basis[i]}", "unit", (i,))


def random_vector(a: FiniteAlgebra, rng: random.Random, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(rng.randint(lo, hi) for _ in range(a.dim))
