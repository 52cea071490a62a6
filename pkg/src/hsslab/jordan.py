"""Hermitian positive Jordan triple systems on the classical matrix domains.

The triple product is realized uniformly as

    {x, y, z} = x y* z + z y* x

on p x q matrices; types II and III are the closed subspaces of
antisymmetric and symmetric p x p matrices.  All functions are pure and act
on coordinate vectors (see :mod:`hsslab.domains`).  Linear operators are
plain ``(n, n)`` complex arrays acting on coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import Domain, DomainError, Family

# Peirce probe used for structure-constant inference (fixed => deterministic).
PROBE_LAMBDAS = (0.7, 0.4, 0.25, 0.15, 0.09, 0.05, 0.03, 0.02)


class InferenceError(RuntimeError):
    """Structure constants did not come out integral or consistent."""


@dataclass(frozen=True)
class AntilinearOperator:
    """``v -> matrix @ conj(v)``."""

    matrix: np.ndarray

    def __call__(self, v):
        return self.matrix @ np.conj(v)

    def __matmul__(self, other: "AntilinearOperator") -> np.ndarray:
        # composition of two antilinear maps is linear
        return self.matrix @ np.conj(other.matrix)


@dataclass(frozen=True)
class SpectralDecomposition:
    lambdas: np.ndarray
    tripotents: list
    s: int


@dataclass(frozen=True)
class DomainInvariants:
    r: int
    a: int
    b: int
    genus: int
    n: int

    def as_dict(self):
        return {"r": self.r, "a": self.a, "b": self.b, "genus": self.genus, "n": self.n}


def _check(d: Domain, *points):
    out = []
    for x in points:
        x = np.asarray(x, dtype=complex)
        if x.shape[-1] != d.n:
            raise ValueError(f"dimension mismatch: {d} has n={d.n}, got {x.shape[-1]}")
        out.append(x)
    return out


def _mat_triple(x, y, z):
    ys = np.conj(np.swapaxes(y, -1, -2))
    return x @ ys @ z + z @ ys @ x


def triple_product(d: Domain, x, y, z):
    """``{x, y, z}``, C-bilinear symmetric in (x, z), antilinear in y."""
    x, y, z = _check(d, x, y, z)
    out = _mat_triple(d.to_matrix(x), d.to_matrix(y), d.to_matrix(z))
    return d.from_matrix(out, tol=1e-9)


def t_operator(d: Domain, x, y) -> np.ndarray:
    """Matrix of ``T(x, y) = {x, y, .}``; column k is ``{x, y, e_k}``."""
    x, y = _check(d, x, y)
    basis = d.basis_matrices()
    cols = _mat_triple(d.to_matrix(x)[None], d.to_matrix(y)[None], basis)
    return d.from_matrix(cols, tol=1e-9).T


def q_operator(d: Domain, x) -> AntilinearOperator:
    """``Q(x) v = 1/2 {x, v, x}`` as an antilinear operator."""
    (x,) = _check(d, x)
    xm = d.to_matrix(x)[None]
    # Q(x) e_k with real basis vectors; antilinearity carried by the conj in __call__
    cols = 0.5 * _mat_triple(xm, d.basis_matrices(), xm)
    return AntilinearOperator(d.from_matrix(cols, tol=1e-9).T)


def bergman_operator(d: Domain, x, y) -> np.ndarray:
    """``B(x, y) = id - T(x, y) + Q(x) Q(y)``."""
    return np.eye(d.n) - t_operator(d, x, y) + q_operator(d, x) @ q_operator(d, y)


def trace_form(d: Domain, u, v) -> complex:
    """``(u | v) = tr T(u, v)``."""
    return complex(np.trace(t_operator(d, u, v)))


def bergman_zz_batch(d: Domain, z) -> np.ndarray:
    """Stack of ``B(z, z)`` matrices for coordinates ``(N, n)``.

    Uses ``B(z, z) w = (1 - z z*) w (1 - z* z)``, which is the product formula
    above specialised to the matrix realization; agreement with
    :func:`bergman_operator` is part of the test suite.
    """
    zm = d.to_matrix(np.atleast_2d(z))
    zs = np.conj(np.swapaxes(zm, -1, -2))
    left = np.eye(zm.shape[-2]) - zm @ zs
    right = np.eye(zm.shape[-1]) - zs @ zm
    basis = d.basis_matrices()
    cols = left[:, None] @ basis[None] @ right[:, None]
    return np.swapaxes(d.from_matrix(cols, tol=None), -1, -2)


def spectral_decompose(d: Domain, z, merge_tol: float = 1e-9) -> SpectralDecomposition:
    """``z = sum_j lambda_j c_j`` with lambda strictly decreasing.

    Singular values within ``merge_tol`` (relative to the largest) are merged
    into one eigenvalue whose tripotent is the sum of the partial isometries.
    """
    (z,) = _check(d, z)
    m = d.to_matrix(z)
    u, sv, vh = np.linalg.svd(m)
    if sv.size == 0 or sv[0] <= 1e-14:
        return SpectralDecomposition(np.zeros(0), [], 0)
    keep = sv > 1e-13 * max(1.0, sv[0])
    groups: list[list[int]] = []
    for k in np.flatnonzero(keep):
        if groups and sv[groups[-1][0]] - sv[k] <= merge_tol * sv[0]:
            groups[-1].append(k)
        else:
            groups.append([k])
    lambdas, trips = [], []
    for g in groups:
        lambdas.append(float(np.mean(sv[g])))
        c = u[:, g] @ vh[g, :]
        trips.append(d.from_matrix(c, tol=1e-6))
    return SpectralDecomposition(np.array(lambdas), trips, len(groups))


def spectral_norm(d: Domain, z) -> float:
    (z,) = _check(d, z)
    return float(np.linalg.norm(d.to_matrix(z), ord=2)) if d.n else 0.0


def singular_values_batch(d: Domain, z) -> np.ndarray:
    """Decreasing eigenvalue lists for a stack of points (pairs kept for type II)."""
    sv = np.linalg.svd(d.to_matrix(np.atleast_2d(z)), compute_uv=False)
    if d.family is Family.II:
        sv = sv[..., 0 : 2 * d.max_rank : 2]
    return sv[..., : d.max_rank]


def ray_singular_root(d: Domain, z) -> float:
    """Largest ``mu`` with ``det(mu^2 - mu T(z,z) + Q(z)Q(z)) = 0``.

    ``B(tz, tz) = id - t^2 T(z,z) + t^4 Q(z)Q(z)`` first degenerates along the
    ray at ``t = mu**-0.5``, so the segment [0, z] stays in the positive-definite
    component containing 0 iff the returned value is < 1.
    """
    n = d.n
    tz = t_operator(d, z, z)
    qq = q_operator(d, z) @ q_operator(d, z)
    comp = np.block([[np.zeros((n, n)), np.eye(n)], [-qq, tz]])
    return float(np.max(np.linalg.eigvals(comp).real))


def contains_bergman(d: Domain, z) -> bool:
    """Membership via positivity of ``B(z, z)`` on the component of 0."""
    bzz = bergman_operator(d, z, z)
    herm = 0.5 * (bzz + bzz.conj().T)
    return bool(np.linalg.eigvalsh(herm)[0] > 0 and ray_singular_root(d, z) < 1.0)


def contains(d: Domain, z, tol: float = 1e-8) -> bool:
    """``spectral_norm(z) < 1``, cross-checked against the Bergman predicate."""
    norm = spectral_norm(d, z)
    inside = norm < 1.0
    if abs(norm - 1.0) > tol and inside != contains_bergman(d, z):
        raise RuntimeError(f"membership tests disagree at spectral norm {norm!r} on {d}")
    return inside


def _probe_point(d: Domain, lambdas=None, rng=None):
    r = d.max_rank
    lam = np.array(PROBE_LAMBDAS[:r] if lambdas is None else lambdas, dtype=float)
    if rng is None:
        return d.embed_lambdas(lam), lam
    return random_frame_point(d, lam, rng), lam


def _count_near(values, target, tol):
    return int(np.sum(np.abs(values - target) <= tol * max(1.0, abs(target))))


def infer_structure_constants(d: Domain, rng=None, tol: float = 1e-8):
    """Genus and multiplicities ``(gamma, a, b)`` from the spectrum of B(z, z).

    At a regular ``z = sum lambda_j e_j`` the Bergman operator acts on the
    Peirce spaces with eigenvalues ``(1 - l_i^2)(1 - l_j^2)`` (dimension a,
    i < j), ``(1 - l_j^2)^2`` (dimension 1) and ``1 - l_j^2`` (dimension b).
    Rank-one domains carry no pair space; a is reported as 0 there.
    """
    if rng is None:
        z, lam = _probe_point(d)
    else:
        lam = np.sort(rng.uniform(0.05, 0.9, size=d.max_rank))[::-1]
        z, lam = _probe_point(d, lam, rng)
    bzz = bergman_operator(d, z, z)
    eig = np.linalg.eigvalsh(0.5 * (bzz + bzz.conj().T))
    one_minus = 1.0 - lam**2

    logdet = float(np.sum(np.log(eig)))
    ratio = logdet / float(np.sum(np.log(one_minus)))
    genus = int(round(ratio))
    if abs(ratio - genus) > 1e-6:
        raise InferenceError(f"non-integral genus fit {ratio!r} on {d}")

    r = len(lam)
    predicted = [one_minus[i] * one_minus[j] for i in range(r) for j in range(i, r)] + list(one_minus)
    probes = ([one_minus[0] * one_minus[1]] if r > 1 else []) + [one_minus[0]]
    for t in probes:
        if sum(abs(v - t) < 1e-6 for v in predicted) != 1:
            raise InferenceError(f"Peirce eigenvalues collide for probe {lam} on {d}")
    a = _count_near(eig, probes[0], tol) if r > 1 else 0
    b = _count_near(eig, one_minus[0], tol)
    if r + a * r * (r - 1) // 2 + b * r != d.n:
        raise InferenceError(f"Peirce dimensions do not add up to n={d.n} on {d}: a={a}, b={b}, r={r}")
    return genus, a, b


def generic_rank(d: Domain, rng=None) -> int:
    """Number of distinct eigenvalues of a random element."""
    rng = np.random.default_rng(0) if rng is None else rng
    z = rng.normal(size=d.n) + 1j * rng.normal(size=d.n)
    return spectral_decompose(d, z).s


def domain_invariants(d: Domain, cross_check: bool = True) -> DomainInvariants:
    r = generic_rank(d)
    if r != d.max_rank:
        raise InferenceError(f"generic rank {r} disagrees with frame size {d.max_rank} on {d}")
    genus, a, b = infer_structure_constants(d)
    if cross_check and (genus, a, b) != infer_structure_constants(d, rng=np.random.default_rng(12345)):
        raise InferenceError(f"randomized inference disagrees on {d}")
    inv = DomainInvariants(r=r, a=a, b=b, genus=genus, n=d.n)
    if genus != b + 2 + a * (r - 1) or 2 * d.n != r * (2 * b + 2 + a * (r - 1)):
        raise InferenceError(f"structure identities fail for {d}: {inv}")
    return inv


def point_lambdas(d: Domain, z) -> np.ndarray:
    """Frame eigenvalues of z with multiplicity, padded with zeros to the rank."""
    return singular_values_batch(d, z)[0]


def haar_unitary(rng, k: int) -> np.ndarray:
    g = (rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_frame_point(d: Domain, lambdas, rng):
    """``sum lambda_j c_j`` on a Haar-random frame (``U z V*`` or ``U z U^T``)."""
    m = d.embed_lambdas(lambdas, matrix=True)
    u = haar_unitary(rng, d.shape[0])
    if d.family is Family.I:
        m = u @ m @ haar_unitary(rng, d.shape[1]).conj().T
    else:
        m = u @ m @ u.T
    return d.from_matrix(m, tol=1e-9)


def check_in_domain(d: Domain, z):
    if not contains(d, z):
        raise DomainError(f"point with spectral norm {spectral_norm(d, z):.6g} is not in {d}")
