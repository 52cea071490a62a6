"""Classical bounded symmetric domains of matrix type and their coordinates.

Points are complex coordinate vectors of length ``n`` in a fixed real basis
of the ambient matrix space.  The basis is chosen orthonormal for the flat
metric ``(1/genus) Re tr T(u, v)``:

* Type I(p, q)  -- all p x q matrices, basis ``E_ij`` (row-major).
* Type II(p)    -- antisymmetric p x p, basis ``E_ij - E_ji`` for i < j.
* Type III(p)   -- symmetric p x p, basis ``E_ii`` then ``(E_ij + E_ji)/sqrt 2``.

Type I(1, q) is the complex hyperbolic ball of dimension q; I(1, 1) is the disc.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class ParseError(ValueError):
    """Domain string does not match the grammar."""


class DomainError(ValueError):
    """A point lies outside the domain or too close to its boundary."""


class Family(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


GRAMMAR = "'I p q' | 'II p' | 'III p' | 'disc' | 'ball n'"


@dataclass(frozen=True)
class Domain:
    family: Family
    p: int
    q: int = 0

    def __post_init__(self):
        if self.family is Family.I:
            if self.p < 1 or self.q < 1:
                raise ParseError(f"type I needs p >= q >= 1 (up to transposition), got I {self.p} {self.q}")
        elif self.family is Family.II:
            if self.p < 2:
                raise ParseError(f"type II needs p >= 2, got II {self.p}")
        elif self.family is Family.III:
            if self.p < 1:
                raise ParseError(f"type III needs p >= 1, got III {self.p}")

    def __str__(self):
        if self.family is Family.I:
            return f"I {self.p} {self.q}"
        return f"{self.family.value} {self.p}"

    @property
    def shape(self) -> tuple[int, int]:
        if self.family is Family.I:
            return (self.p, self.q)
        return (self.p, self.p)

    @property
    def n(self) -> int:
        p, q = self.p, self.q
        if self.family is Family.I:
            return p * q
        if self.family is Family.II:
            return p * (p - 1) // 2
        return p * (p + 1) // 2

    @property
    def max_rank(self) -> int:
        """Rank read off the standard frame (cross-checked by inference)."""
        if self.family is Family.I:
            return min(self.p, self.q)
        if self.family is Family.II:
            return self.p // 2
        return self.p

    @cached_property
    def _index(self):
        p = self.p
        if self.family is Family.II:
            rows, cols = np.triu_indices(p, k=1)
            return rows, cols, np.ones(len(rows))
        if self.family is Family.III:
            diag = np.arange(p)
            r_off, c_off = np.triu_indices(p, k=1)
            rows = np.concatenate([diag, r_off])
            cols = np.concatenate([diag, c_off])
            scale = np.concatenate([np.ones(p), np.full(len(r_off), 1 / np.sqrt(2))])
            return rows, cols, scale
        return None

    def to_matrix(self, z):
        """Coordinates ``(..., n)`` to matrices ``(..., rows, cols)``."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} coordinates for {self}, got {z.shape[-1]}")
        lead = z.shape[:-1]
        if self.family is Family.I:
            return z.reshape(*lead, self.p, self.q)
        rows, cols, scale = self._index
        out = np.zeros((*lead, self.p, self.p), dtype=complex)
        out[..., rows, cols] = z * scale
        sign = -1.0 if self.family is Family.II else 1.0
        out[..., cols, rows] += sign * z * scale * (rows != cols)
        return out

    def from_matrix(self, m, tol: float | None = 1e-10):
        """Matrices to coordinates; checks the (anti)symmetry constraint."""
        m = np.asarray(m, dtype=complex)
        if m.shape[-2:] != self.shape:
            raise ValueError(f"expected {self.shape} matrices for {self}, got {m.shape[-2:]}")
        if self.family is Family.I:
            return m.reshape(*m.shape[:-2], self.n)
        sign = -1.0 if self.family is Family.II else 1.0
        mt = np.swapaxes(m, -1, -2)
        if tol is not None:
            viol = np.max(np.abs(m - sign * mt), initial=0.0)
            if viol > tol * max(1.0, np.max(np.abs(m), initial=0.0)):
                kind = "antisymmetric" if sign < 0 else "symmetric"
                raise ValueError(f"matrix is not {kind} (violation {viol:.3g})")
        m = 0.5 * (m + sign * mt)
        rows, cols, scale = self._index
        return m[..., rows, cols] / scale

    def basis_matrices(self):
        return self.to_matrix(np.eye(self.n, dtype=complex))

    def frame(self) -> list[np.ndarray]:
        """The standard Jordan frame as coordinate vectors."""
        out = []
        for j in range(self.max_rank):
            m = np.zeros(self.shape, dtype=complex)
            if self.family is Family.II:
                m[2 * j, 2 * j + 1] = 1.0
                m[2 * j + 1, 2 * j] = -1.0
            else:
                m[j, j] = 1.0
            out.append(self.from_matrix(m))
        return out

    def embed_lambdas(self, lambdas, matrix=False):
        """``sum_j lambda_j e_j`` on the standard frame."""
        lambdas = np.asarray(lambdas, dtype=float)
        m = np.zeros((*lambdas.shape[:-1], *self.shape), dtype=complex)
        for j in range(lambdas.shape[-1]):
            if self.family is Family.II:
                m[..., 2 * j, 2 * j + 1] = lambdas[..., j]
                m[..., 2 * j + 1, 2 * j] = -lambdas[..., j]
            else:
                m[..., j, j] = lambdas[..., j]
        return m if matrix else self.from_matrix(m, tol=None)


def parse_domain(text: str) -> Domain:
    """Parse ``I p q`` | ``II p`` | ``III p`` | ``disc`` | ``ball n``."""
    if isinstance(text, (list, tuple)):
        text = " ".join(str(t) for t in text)
    if not text.isascii():
        raise ParseError(f"domain string must be ASCII; grammar: {GRAMMAR}")
    tokens = text.split()
    if not tokens:
        raise ParseError(f"empty domain string; grammar: {GRAMMAR}")
    head, args = tokens[0], tokens[1:]
    arity = {"I": 2, "II": 1, "III": 1, "disc": 0, "ball": 1}
    if head not in arity:
        raise ParseError(f"unknown family {head!r}; grammar: {GRAMMAR}")
    if len(args) != arity[head]:
        raise ParseError(f"production '{head}' takes {arity[head]} integer argument(s), got {len(args)}")
    try:
        ints = [int(a) for a in args]
    except ValueError:
        raise ParseError(f"production '{head}' expects integers, got {args}") from None
    if head == "disc":
        return Domain(Family.I, 1, 1)
    if head == "ball":
        if ints[0] < 1:
            raise ParseError(f"production 'ball n' needs n >= 1, got {ints[0]}")
        return Domain(Family.I, 1, ints[0])
    if head == "I":
        return Domain(Family.I, ints[0], ints[1])
    return Domain(Family(head), ints[0])


def disc() -> Domain:
    return Domain(Family.I, 1, 1)


def ball(n: int) -> Domain:
    return Domain(Family.I, 1, n)


def all_domains(max_size: int = 4, max_ii: int = 5) -> list[Domain]:
    """Every implemented domain with p, q <= max_size (type II up to ``max_ii``)."""
    out = [Domain(Family.I, p, q) for p in range(1, max_size + 1) for q in range(1, p + 1)]
    out += [Domain(Family.II, p) for p in range(2, max_ii + 1)]
    out += [Domain(Family.III, p) for p in range(1, max_size + 1)]
    return out
