"""Mixer and target operators plus the linear interpolation between them.

Two mixers are provided: the transverse field on the full space and a
swap chain (optionally a cycle) acting inside a fixed-Hamming-weight
subspace.  Targets are diagonal in the computational basis; the clique
target encodes maximum-weight k-clique as

    E(x) = #(missing internal edges of the selected subgraph)
           - alpha * (total selected weight).

Clique energies are evaluated as ``missing - alpha * (w_a + w_b + ...)``
with the weight sum accumulated in ascending node order in float64.
The brute-force solver pins the same evaluation order, so the two
independently computed tables match bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Real

import numpy as np

from .basis import BasisSet, enumerate_basis


@dataclass(frozen=True)
class ProblemGraph:
    """Weighted graph instance for maximum-weight k-clique.

    Nodes are labelled 1..n; ``edges`` holds unordered pairs; ``alpha``
    sets how strongly node weights count against missing-edge penalties.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...]
    k: int
    alpha: float

    def __init__(self, n, edges, weights, k, alpha):
        if n < 2:
            raise ValueError(f"need at least two nodes, got n={n}")
        norm = []
        for e in edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge {e} has endpoints outside [1, {n}]")
            norm.append((min(i, j), max(i, j)))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edges")
        weights = tuple(float(w) for w in weights)
        if len(weights) != n:
            raise ValueError(f"expected {n} weights, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if not 0 < k < n:
            raise ValueError(f"clique size must satisfy 0 < k < n, got k={k}")
        if not isinstance(alpha, Real) or alpha < 0:
            raise ValueError(f"alpha must be a nonnegative real, got {alpha!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "alpha", alpha)

    @property
    def edge_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(e) for e in self.edges)


@dataclass(frozen=True)
class HamiltonianPair:
    """Mixer ``h0`` and diagonal target ``h1_diag`` on a shared basis."""

    basis: BasisSet
    h0: np.ndarray = field(repr=False)
    h1_diag: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = self.basis.dim
        if self.h0.shape != (d, d):
            raise ValueError(f"h0 shape {self.h0.shape} does not match basis dim {d}")
        if self.h1_diag.shape != (d,):
            raise ValueError(f"h1_diag length {self.h1_diag.shape} does not match dim {d}")
        if not np.array_equal(self.h0, self.h0.T):
            raise ValueError("h0 must be exactly symmetric")
        off = self.h0.copy()
        np.fill_diagonal(off, 0.0)
        if np.any(off > 0):
            raise ValueError("h0 off-diagonal entries must be nonpositive")

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def final_energies(self) -> np.ndarray:
        """Target eigenvalue of each basis state (energy at s=1)."""
        return self.h1_diag

    def hamiltonian(self, s: float) -> np.ndarray:
        return interpolate(self, s)


def build_transverse_field(n: int) -> np.ndarray:
    """Mixer ``-sum_i sigma_x^(i)`` on the full basis: -1 between
    bitstrings at Hamming distance one, zero elsewhere."""
    basis = enumerate_basis(n)
    d = basis.dim
    h0 = np.zeros((d, d))
    for a in range(d):
        for pos in range(n):
            h0[a, a ^ (1 << (n - 1 - pos))] = -1.0
    return h0


def build_swap_mixer(n: int, k: int, wrap: bool = False) -> np.ndarray:
    """Mixer ``-sum_i S(i, i+1)`` on the weight-k basis, where S exchanges
    the two qubits when their bits differ and annihilates the state when
    they are equal (the XY form: S = (XX + YY)/2 on the pair).

    ``wrap=False`` sums the chain pairs (1,2)..(n-1,n); ``wrap=True`` adds
    the (n,1) term and requires n >= 3.
    """
    basis = enumerate_basis(n, k)
    if wrap and n < 3:
        raise ValueError("cyclic swap mixer needs n >= 3")
    pairs = [(i, i + 1) for i in range(n - 1)]
    if wrap:
        pairs.append((n - 1, 0))
    d = basis.dim
    h0 = np.zeros((d, d))
    for a, bits in enumerate(basis.states):
        for i, j in pairs:
            if bits[i] != bits[j]:
                swapped = list(bits)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                b = basis.index_of("".join(swapped))
                h0[a, b] -= 1.0
    return h0


def clique_state_energy(graph: ProblemGraph, bits: str) -> float:
    """Target energy of one basis state under the clique encoding."""
    selected = [i + 1 for i, c in enumerate(bits) if c == "1"]
    edge_set = graph.edge_set
    missing = 0
    for a in range(len(selected)):
        for b in range(a + 1, len(selected)):
            if frozenset((selected[a], selected[b])) not in edge_set:
                missing += 1
    wsum = 0.0
    for i in selected:
        wsum += graph.weights[i - 1]
    return missing - float(graph.alpha) * wsum


def build_clique_target(graph: ProblemGraph, basis: BasisSet | None = None) -> np.ndarray:
    """Diagonal clique target over ``basis`` (default: the weight-k
    subspace of the instance)."""
    if basis is None:
        basis = enumerate_basis(graph.n, graph.k)
    if basis.n != graph.n:
        raise ValueError(f"basis is over {basis.n} qubits, graph has {graph.n} nodes")
    return np.array([clique_state_energy(graph, bits) for bits in basis.states])


def build_diagonal_target(energies, basis: BasisSet) -> np.ndarray:
    """Verbatim diagonal target from explicit per-state energies."""
    arr = np.asarray(energies, dtype=float)
    if arr.shape != (basis.dim,):
        raise ValueError(f"expected {basis.dim} energies, got shape {arr.shape}")
    return arr.copy()


def interpolate(pair: HamiltonianPair, s: float) -> np.ndarray:
    """H(s) = (1-s) * h0 + s * diag(h1)."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    h = (1.0 - s) * pair.h0
    h[np.diag_indices_from(h)] += s * pair.h1_diag
    return h


def clique_pair(graph: ProblemGraph, mixer: str = "swap_chain") -> HamiltonianPair:
    """Assemble the interpolation endpoints for a clique instance.

    ``mixer`` is one of ``swap_chain``, ``swap_cycle`` (weight-k subspace)
    or ``transverse_field`` (full space, clique energies evaluated on every
    bitstring).
    """
    if mixer == "swap_chain":
        basis = enumerate_basis(graph.n, graph.k)
        h0 = build_swap_mixer(graph.n, graph.k, wrap=False)
    elif mixer == "swap_cycle":
        basis = enumerate_basis(graph.n, graph.k)
        h0 = build_swap_mixer(graph.n, graph.k, wrap=True)
    elif mixer == "transverse_field":
        basis = enumerate_basis(graph.n)
        h0 = build_transverse_field(graph.n)
    else:
        raise ValueError(f"unknown mixer {mixer!r}")
    return HamiltonianPair(basis=basis, h0=h0, h1_diag=build_clique_target(graph, basis))
