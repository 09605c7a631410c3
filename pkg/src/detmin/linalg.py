"""Shared numerical substrate: rank decisions, block inversion, seeded RNG.

Every pipeline routes its rank questions through :func:`svd_rank` so that a
single tolerance policy governs the whole package, and its partitioned
inversions through :func:`block_inverse` so that condition-number guards are
applied uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric

# Multiplier on the usual sigma_max * max(shape) * eps rank threshold.
RANK_TOL_FACTOR = 4.0

# Condition-number guard applied before any block inversion.  Beyond this
# the point is treated as near-boundary and reported, not inverted.
COND_LIMIT = 1e6


def make_rng(seed):
    """Seeded generator on the Philox counter-based bit stream.

    Philox is counter-based, so a given seed reproduces the same stream on
    every platform and process layout; reports quote the seed and are then
    reproducible byte for byte.
    """
    return np.random.Generator(np.random.Philox(seed))


def derived_rng(seed, *context):
    """Independent substream keyed by (seed, context ints).

    Sweeps give every parameter cell its own stream so that records do not
    depend on cell execution order and partial runs reproduce exactly.
    """
    entropy = [abs(int(seed))] + [abs(int(c)) for c in context]
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy)))


def require_finite(m, name="matrix"):
    """Reject NaN/inf input with a diagnostic instead of letting LAPACK fail."""
    m = np.asarray(m, dtype=float)
    bad = ~np.isfinite(m)
    if bad.any():
        raise ValueError(f"{name} has {int(bad.sum())} non-finite entries "
                         f"at positions {np.argwhere(bad)[:4].tolist()}...")
    return m


@dataclass(frozen=True)
class RankResult:
    """Numerical rank together with the evidence for it.

    ``kernel_basis`` holds orthonormal columns spanning the kernel of the
    transpose of the input, i.e. the orthogonal complement of the input's
    column space; its column count plus ``rank`` equals the row count.
    """

    rank: int
    singular_values: np.ndarray
    kernel_basis: np.ndarray
    tolerance: float


def svd_rank(m, tol_factor=RANK_TOL_FACTOR):
    """Rank decision via singular values, with an explicit tolerance policy.

    The threshold is ``sigma_max * max(m.shape) * eps * tol_factor``; the
    kernel basis is read off the left singular vectors beyond the rank.
    """
    m = require_finite(m, "svd_rank input")
    rows = m.shape[0]
    if m.size == 0:
        return RankResult(0, np.zeros(0), np.eye(rows), 0.0)
    u, s, _ = np.linalg.svd(m, full_matrices=True)
    tol = s[0] * max(m.shape) * np.finfo(float).eps * tol_factor
    rank = int((s > tol).sum())
    return RankResult(rank, s, u[:, rank:], tol)


def spectral_cond(m):
    """2-norm condition number; empty matrices count as perfectly conditioned."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 1.0
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


@dataclass(frozen=True)
class BlockInverse:
    """Inverse of ``[[G, B], [B^T, D]]`` with the pivot Schur complement kept.

    ``schur_inv`` is the inverse Schur complement of the pivot block:
    ``(D - B^T G^{-1} B)^{-1}`` for the leading pivot, ``(G - B D^{-1} B^T)^{-1}``
    for the trailing one.  Both factorizations yield the same ``full`` matrix
    in exact arithmetic; keeping them separate lets callers cross-check.
    """

    full: np.ndarray
    schur_inv: np.ndarray
    pivot: str
    cond_g: float
    cond_d: float


def block_inverse(g, b, d, pivot="leading", cond_limit=COND_LIMIT):
    """Invert a symmetric 2x2 block matrix by Schur complement.

    ``pivot="leading"`` eliminates through ``G`` first, ``pivot="trailing"``
    through ``D``.  Raises :class:`DegenerateMetric` when the pivot block's
    condition number exceeds ``cond_limit``.
    """
    g = require_finite(g, "G block")
    d = require_finite(d, "D block")
    b = np.asarray(b, dtype=float)
    ng, nd = g.shape[0], d.shape[0]
    if b.shape != (ng, nd):
        raise ValueError(f"off-diagonal block has shape {b.shape}, expected {(ng, nd)}")
    cond_g, cond_d = spectral_cond(g), spectral_cond(d)
    if pivot not in ("leading", "trailing"):
        raise ValueError(f"unknown pivot {pivot!r}")
    primary = cond_g if pivot == "leading" else cond_d
    if primary > cond_limit:
        raise DegenerateMetric(
            f"{pivot} pivot block condition {primary:.3e} exceeds {cond_limit:.1e} "
            f"(cond G = {cond_g:.3e}, cond D = {cond_d:.3e})")

    if ng == 0 and nd == 0:
        z = np.zeros((0, 0))
        return BlockInverse(z, z, pivot, cond_g, cond_d)
    if nd == 0:
        return BlockInverse(np.linalg.inv(g), np.zeros((0, 0)), pivot, cond_g, cond_d)
    if ng == 0:
        inv_d = np.linalg.inv(d)
        schur = inv_d if pivot == "leading" else np.zeros((0, 0))
        return BlockInverse(inv_d, schur, pivot, cond_g, cond_d)

    if pivot == "leading":
        gi_b = np.linalg.solve(g, b)
        schur = d - b.T @ gi_b
        if spectral_cond(schur) > cond_limit:
            raise DegenerateMetric(
                f"Schur complement condition {spectral_cond(schur):.3e} "
                f"exceeds {cond_limit:.1e}")
        rho = np.linalg.inv(schur)
        gi = np.linalg.inv(g)
        top_left = gi + gi_b @ rho @ gi_b.T
        top_right = -gi_b @ rho
        full = np.block([[top_left, top_right], [top_right.T, rho]])
        return BlockInverse(full, rho, pivot, cond_g, cond_d)

    di_bt = np.linalg.solve(d, b.T)
    schur = g - b @ di_bt
    if spectral_cond(schur) > cond_limit:
        raise DegenerateMetric(
            f"Schur complement condition {spectral_cond(schur):.3e} "
            f"exceeds {cond_limit:.1e}")
    gp_inv = np.linalg.inv(schur)
    di = np.linalg.inv(d)
    top_right = -gp_inv @ di_bt.T
    bottom_right = di + di_bt @ gp_inv @ di_bt.T
    full = np.block([[gp_inv, top_right], [top_right.T, bottom_right]])
    return BlockInverse(full, gp_inv, pivot, cond_g, cond_d)


def max_abs(m):
    """Max-norm helper that tolerates empty arrays."""
    m = np.asarray(m)
    return float(np.abs(m).max()) if m.size else 0.0


def relative_residual(err, *factors):
    """Residual normalised by the product of factor norms, floored at 1."""
    den = 1.0
    for f in factors:
        den *= max(np.linalg.norm(np.asarray(f, dtype=float).ravel()), 1e-300)
    err = np.linalg.norm(np.asarray(err, dtype=float).ravel())
    return float(err) / max(1.0, den)
