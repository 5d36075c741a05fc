"""Dual witness matrix for the theta value of a planted instance.

For a planted clique extended to the set Q (everything with enough neighbors
in it), a single symmetric matrix M certifies the theta value numerically:
the indicator of Q is an eigenvector with eigenvalue |Q|, and when the second
eigenvalue stays below |Q|, the theta function of the complement is exactly
|Q|.  M splits into three parts whose spectra explain the bound: a centered
noise matrix from the base graph, a block correction on Q, and a row-balance
correction carrying one weight per outside vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generate import PlantedInstance
from .graph import VertexSet, degree_in, to_bool_matrix


class CertificateError(RuntimeError):
    """The certificate construction's preconditions failed."""


@dataclass(frozen=True)
class CertificateReport:
    extended: VertexSet          # the set Q
    k_prime: int
    lambda1: float
    lambda2: float
    lambda1_noise: float         # top eigenvalue of the centered base part
    lambda2_block: float         # second eigenvalue of the Q-block correction
    lambda1_balance: float       # top eigenvalue of the row-balance part
    trace_balance_sq: float
    boundary_weights: tuple[float, ...]   # x_i for each vertex outside Q
    lambda1_ones_diag: float     # lambda values when the diagonal is all ones
    lambda2_ones_diag: float
    valid: bool


def membership_threshold(p: float, k: int) -> float:
    return (1.0 + p) / 2.0 * k


def extend_clique(inst: PlantedInstance) -> VertexSet:
    """Planted set plus every vertex with at least (1+p)/2*k neighbors in it."""
    g = inst.planted_graph
    k = len(inst.planted)
    threshold = membership_threshold(inst.params.p, k)
    bits = inst.planted.bits
    for v in range(g.n):
        if not bits >> v & 1 and degree_in(g, v, inst.planted) >= threshold:
            bits |= 1 << v
    return VertexSet(g.n, bits)


def _outside_degrees(inst: PlantedInstance, q: VertexSet) -> np.ndarray:
    g = inst.planted_graph
    return np.array(
        [degree_in(g, v, q) if v not in q else 0 for v in range(g.n)], dtype=float
    )


def build_certificate(inst: PlantedInstance, q: VertexSet) -> np.ndarray:
    """The witness matrix M over the planted graph with Q completed to a clique.

    Entries: 1 on every pair inside Q and on every edge elsewhere; outside
    pairs that are nonedges carry -p/(1-p); boundary nonedges carry
    x_i - p/(1-p) so that every boundary row sums to zero.  Diagonal is 1 on
    Q and 0 elsewhere, following the block layout literally.
    """
    g = inst.planted_graph
    n = g.n
    p = inst.params.p
    k_prime = len(q)
    qmask = np.zeros(n, dtype=bool)
    for v in q:
        qmask[v] = True
    d_out = _outside_degrees(inst, q)
    outside = ~qmask
    if np.any(d_out[outside] >= k_prime):
        v_bad = int(np.nonzero(outside & (d_out >= k_prime))[0][0])
        raise CertificateError(
            f"vertex {v_bad} outside Q is adjacent to all of Q; Q was not fully extended"
        )
    adj = to_bool_matrix(g)
    m = np.where(adj, 1.0, -p / (1.0 - p))
    # boundary nonedges: x_i - p/(1-p) = -d_i/(k' - d_i) where i is the
    # outside endpoint; written in both orientations to stay symmetric
    with np.errstate(divide="ignore", invalid="ignore"):
        b_val = np.where(outside & (d_out < k_prime), -d_out / (k_prime - d_out), 0.0)
    lower = outside[:, None] & qmask[None, :] & ~adj
    m[lower] = np.broadcast_to(b_val[:, None], (n, n))[lower]
    upper = qmask[:, None] & outside[None, :] & ~adj
    m[upper] = np.broadcast_to(b_val[None, :], (n, n))[upper]
    m[np.ix_(~outside, ~outside)] = 1.0
    m[np.diag_indices(n)] = qmask.astype(float)
    return (m + m.T) / 2


def boundary_weights(inst: PlantedInstance, q: VertexSet) -> np.ndarray:
    """x_i = (k'p - d(i,Q)) / ((1-p)(k' - d(i,Q))) for vertices outside Q."""
    p = inst.params.p
    k_prime = len(q)
    d_out = _outside_degrees(inst, q)
    qmask = np.zeros(inst.planted_graph.n, dtype=bool)
    for v in q:
        qmask[v] = True
    x = np.zeros(inst.planted_graph.n)
    out = ~qmask
    x[out] = (k_prime * p - d_out[out]) / ((1.0 - p) * (k_prime - d_out[out]))
    return x


def split_certificate(
    inst: PlantedInstance, q: VertexSet
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """M = noise + block + balance, each symmetric.

    noise: base-graph matrix, 1 on edges, -p/(1-p) on nonedges, zero diagonal.
    block: corrects the Q-by-Q block of noise up to all ones (diagonal included).
    balance: writes x_i onto boundary nonedges so boundary rows sum to zero.
    """
    g_base = inst.base
    n = g_base.n
    p = inst.params.p
    adj_base = to_bool_matrix(g_base)
    noise = np.where(adj_base, 1.0, -p / (1.0 - p))
    np.fill_diagonal(noise, 0.0)
    qidx = q.to_sorted_list()
    block = np.zeros((n, n))
    block[np.ix_(qidx, qidx)] = 1.0 - noise[np.ix_(qidx, qidx)]
    x = boundary_weights(inst, q)
    qmask = np.zeros(n, dtype=bool)
    qmask[qidx] = True
    adj_planted = to_bool_matrix(inst.planted_graph)
    boundary_nonedge = (~qmask[:, None]) & qmask[None, :] & ~adj_planted
    balance = np.zeros((n, n))
    balance[boundary_nonedge] = np.broadcast_to(x[:, None], (n, n))[boundary_nonedge]
    balance = balance + balance.T
    return noise, block, balance


def verify_certificate(
    inst: PlantedInstance, q: VertexSet, m: np.ndarray
) -> CertificateReport:
    """Eigen-check the witness: top eigenvalue |Q| (indicator eigenvector),
    second eigenvalue strictly below |Q|, and the three-part split's spectra."""
    n = inst.planted_graph.n
    k_prime = len(q)
    eigs = np.linalg.eigvalsh(m)
    lambda1 = float(eigs[-1])
    lambda2 = float(eigs[-2]) if n >= 2 else float("-inf")
    noise, block, balance = split_certificate(inst, q)
    recon_err = float(np.max(np.abs(noise + block + balance - m)))
    if recon_err > 1e-9:
        raise CertificateError(f"three-part split misses M by {recon_err:.2e}")
    noise_eigs = np.linalg.eigvalsh(noise)
    block_eigs = np.linalg.eigvalsh(block)
    balance_eigs = np.linalg.eigvalsh(balance)
    x = boundary_weights(inst, q)
    d_out = _outside_degrees(inst, q)
    qmask = np.zeros(n, dtype=bool)
    for v in q:
        qmask[v] = True
    out = ~qmask
    trace_balance_sq = float(2.0 * np.sum((k_prime - d_out[out]) * x[out] ** 2))
    m_ones = m.copy()
    np.fill_diagonal(m_ones, 1.0)
    ones_eigs = np.linalg.eigvalsh(m_ones)
    valid = abs(lambda1 - k_prime) <= 1e-6 * max(k_prime, 1) and lambda2 < k_prime
    return CertificateReport(
        extended=q,
        k_prime=k_prime,
        lambda1=lambda1,
        lambda2=lambda2,
        lambda1_noise=float(noise_eigs[-1]),
        lambda2_block=float(block_eigs[-2]) if n >= 2 else float("-inf"),
        lambda1_balance=float(balance_eigs[-1]),
        trace_balance_sq=trace_balance_sq,
        boundary_weights=tuple(float(v) for v in x[out]),
        lambda1_ones_diag=float(ones_eigs[-1]),
        lambda2_ones_diag=float(ones_eigs[-2]) if n >= 2 else float("-inf"),
        valid=valid,
    )


def certify(inst: PlantedInstance) -> CertificateReport:
    """extend -> build -> verify in one call."""
    q = extend_clique(inst)
    return verify_certificate(inst, q, build_certificate(inst, q))


def empirical_varbound(
    inst: PlantedInstance, slack: float = 0.25
) -> tuple[float, float, bool]:
    """Squared degree fluctuation into the planted set, measured on the base graph.

    lhs = sum over outside vertices of (d_base(i, K) - kp)^2; rhs is its
    expectation (n-k)kp(1-p) inflated by ``slack``.
    """
    k = len(inst.planted)
    n = inst.base.n
    p = inst.params.p
    if k == 0:
        return 0.0, 0.0, True
    kp = k * p
    lhs = 0.0
    for v in range(n):
        if v not in inst.planted:
            lhs += (degree_in(inst.base, v, inst.planted) - kp) ** 2
    rhs = (n - k) * k * p * (1.0 - p) * (1.0 + slack)
    return lhs, rhs, lhs <= rhs


def certificate_to_dict(report: CertificateReport) -> dict:
    return {
        "schema": "plantedclique.certificate/1",
        "extended": report.extended.to_sorted_list(),
        "k_prime": report.k_prime,
        "lambda1": report.lambda1,
        "lambda2": report.lambda2,
        "lambda1_noise": report.lambda1_noise,
        "lambda2_block": report.lambda2_block,
        "lambda1_balance": report.lambda1_balance,
        "trace_balance_sq": report.trace_balance_sq,
        "boundary_weights": list(report.boundary_weights),
        "lambda1_ones_diag": report.lambda1_ones_diag,
        "lambda2_ones_diag": report.lambda2_ones_diag,
        "valid": report.valid,
    }
